//! Radius-`r` balls of the marked groups `(G_S, Y_S)` and `r`-similarity.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::forcing::ForcedSubset;
use crate::groups::{Ambient, AmbientElement, FiniteGroupTable};
use crate::wreath::{is_identity_finite, is_identity_generic, Generator, Letter, MarkedWord, Verdict};

/// The marked group `ξ(hS) = (G_{hS}, Y_{hS})` for a translate `h` of a
/// forced subset. The subset itself is passed to each call; one spec must
/// always be used with the same subset, because verdicts are memoized.
///
/// A spec built with [`MarkedSpec::finite`] instead reads the subset as
/// exactly its set of elements pinned `true`, with no genericity assumed.
#[derive(Clone, Debug)]
pub struct MarkedSpec {
    ambient: Ambient,
    table: FiniteGroupTable,
    translate: AmbientElement,
    finite: bool,
    memo: HashMap<MarkedWord, bool>,
}

impl MarkedSpec {
    /// `ξ(S)` for the base subset.
    pub fn xi(ambient: Ambient, table: FiniteGroupTable) -> Self {
        let translate = ambient.identity();
        Self::translated(ambient, table, translate)
    }

    /// `ξ(hS)`; membership in `hS` is answered as `h⁻¹x ∈ S`.
    pub fn translated(ambient: Ambient, table: FiniteGroupTable, h: AmbientElement) -> Self {
        Self {
            ambient,
            table,
            translate: h,
            finite: false,
            memo: HashMap::new(),
        }
    }

    /// `ξ(P)` for the finite set `P` of elements pinned `true`.
    pub fn finite(ambient: Ambient, table: FiniteGroupTable) -> Self {
        Self {
            finite: true,
            ..Self::xi(ambient, table)
        }
    }

    pub fn is_finite(&self) -> bool {
        self.finite
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn table(&self) -> &FiniteGroupTable {
        &self.table
    }

    pub fn translate(&self) -> &AmbientElement {
        &self.translate
    }

    /// `n + 2`.
    pub fn arity(&self) -> usize {
        self.ambient.generator_count() + 2
    }

    /// The word-problem verdict (not memoized).
    pub fn verdict(&self, w: &MarkedWord, subset: &mut ForcedSubset) -> Result<Verdict> {
        if self.finite {
            let members: HashSet<AmbientElement> = subset
                .pinned()
                .filter(|&(_, v)| v)
                .map(|(x, _)| &self.translate * x)
                .collect();
            return Ok(is_identity_finite(w, self.ambient, &self.table, &members));
        }
        is_identity_generic(w, &self.table, &mut subset.translate(self.translate.clone()))
    }

    pub fn is_identity(&mut self, w: &MarkedWord, subset: &mut ForcedSubset) -> Result<bool> {
        let w = w.reduced();
        if let Some(&v) = self.memo.get(&w) {
            return Ok(v);
        }
        let v = self.verdict(&w, subset)?.is_identity();
        self.memo.insert(w, v);
        Ok(v)
    }

    pub fn equal(&mut self, w1: &MarkedWord, w2: &MarkedWord, subset: &mut ForcedSubset) -> Result<bool> {
        self.is_identity(&w1.concat(&w2.inverse()), subset)
    }

    fn alphabet(&self) -> Vec<Letter> {
        Letter::alphabet(self.ambient.generator_count())
    }

    /// Breadth-first construction of the radius-`r` ball of the Cayley graph
    /// of `(G, Y)`. Vertices are labelled by their shortlex-least words;
    /// candidate words are only compared with vertices of the same `H`-image
    /// in adjacent layers.
    pub fn build_ball(&mut self, subset: &mut ForcedSubset, r: usize) -> Result<MarkedBall> {
        let cap = subset.limits().ball_cap;
        let alphabet = self.alphabet();
        let rank = self.ambient.generator_count();
        let mut vertices = vec![MarkedWord::empty()];
        let mut tails = vec![self.ambient.identity()];
        let mut depth = vec![0usize];
        let mut buckets: HashMap<AmbientElement, Vec<usize>> = HashMap::new();
        buckets.insert(self.ambient.identity(), vec![0]);
        let mut edges: Vec<Vec<Option<usize>>> = Vec::new();
        let mut v = 0;
        while v < vertices.len() {
            let k = depth[v];
            let mut row = Vec::with_capacity(alphabet.len());
            for &letter in &alphabet {
                let candidate = vertices[v].with(letter);
                let mut tail = tails[v].clone();
                if let Generator::X(i) = letter.generator {
                    tail.push_generator(i as usize, letter.inverse);
                }
                let mut target = None;
                let peers = buckets.get(&tail).cloned().unwrap_or_default();
                for u in peers {
                    if depth[u] + 1 >= k && self.equal(&candidate, &vertices[u], subset)? {
                        target = Some(u);
                        break;
                    }
                }
                if target.is_none() && k < r {
                    if vertices.len() >= cap {
                        return Err(Error::Capacity {
                            what: format!("marked ball of radius {r}"),
                            limit: cap,
                        });
                    }
                    let id = vertices.len();
                    vertices.push(candidate);
                    tails.push(tail.clone());
                    depth.push(k + 1);
                    buckets.entry(tail).or_default().push(id);
                    target = Some(id);
                }
                row.push(target);
            }
            debug_assert_eq!(row.len(), 2 * (rank + 2));
            edges.push(row);
            v += 1;
        }
        Ok(MarkedBall {
            radius: r,
            arity: self.arity(),
            vertices,
            edges,
        })
    }
}

/// The ball of radius `r` around the identity in the Cayley graph of a marked
/// group, as a deterministic rooted graph labelled by `Y^{±1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedBall {
    pub radius: usize,
    pub arity: usize,
    /// Shortlex-least words of the vertices, sorted shortlex; vertex 0 is the identity.
    pub vertices: Vec<MarkedWord>,
    /// `edges[v][ℓ]`: target of letter `ℓ` (in [`Letter::alphabet`] order), `None` if it leaves the ball.
    pub edges: Vec<Vec<Option<usize>>>,
}

impl MarkedBall {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Text dump: `<index> <word>` per vertex, then `<src> <letter> <dst|OUT>` per edge.
    pub fn dump(&self) -> String {
        let alphabet = Letter::alphabet(self.arity - 2);
        let mut out = String::new();
        for (i, w) in self.vertices.iter().enumerate() {
            let _ = writeln!(out, "{i} {w}");
        }
        for (i, row) in self.edges.iter().enumerate() {
            for (letter, target) in alphabet.iter().zip(row) {
                match target {
                    Some(t) => {
                        let _ = writeln!(out, "{i} {letter} {t}");
                    }
                    None => {
                        let _ = writeln!(out, "{i} {letter} OUT");
                    }
                }
            }
        }
        out
    }

    /// Checks the structural invariants of a ball: rooted at the empty word,
    /// shortlex-sorted vertices of length at most `r`, connected through the
    /// last-letter edges, and `ℓ` followed by `ℓ⁻¹` returning to the source.
    pub fn check_invariants(&self) -> Result<(), String> {
        let rank = self.arity - 2;
        if self.vertices.first() != Some(&MarkedWord::empty()) {
            return Err("base vertex is not the empty word".into());
        }
        if !self.vertices.windows(2).all(|w| w[0] < w[1]) {
            return Err("vertices are not strictly shortlex-sorted".into());
        }
        if self.edges.len() != self.vertices.len() {
            return Err("edge table size differs from vertex count".into());
        }
        for (v, row) in self.edges.iter().enumerate() {
            if row.len() != 2 * self.arity {
                return Err(format!("vertex {v} has {} edge slots", row.len()));
            }
            for (i, target) in row.iter().enumerate() {
                let Some(u) = *target else { continue };
                let back = Letter::alphabet(rank)[i].inv().index(rank);
                if self.edges.get(u).and_then(|r| r[back]) != Some(v) {
                    return Err(format!("edge {v} -{}-> {u} has no inverse edge", Letter::alphabet(rank)[i]));
                }
            }
        }
        for (v, w) in self.vertices.iter().enumerate().skip(1) {
            if w.len() > self.radius {
                return Err(format!("vertex {v} word {w} longer than radius"));
            }
            let last = *w.letters().last().expect("non-base vertex");
            let parent = MarkedWord::new(w.letters()[..w.len() - 1].to_vec());
            let Ok(p) = self.vertices.binary_search(&parent) else {
                return Err(format!("prefix of vertex {v} is not a vertex"));
            };
            if self.edges[p][last.index(rank)] != Some(v) {
                return Err(format!("vertex {v} is not reached along its word"));
            }
        }
        Ok(())
    }
}

/// Whether two balls are identical as rooted labelled graphs. Deterministic
/// rooted graphs have at most one label-preserving isomorphism, so this is
/// equality after the canonical ordering.
pub fn r_similar(b1: &MarkedBall, b2: &MarkedBall) -> Result<bool> {
    if b1.radius != b2.radius || b1.arity != b2.arity {
        return Err(Error::Usage(format!(
            "cannot compare a radius-{} arity-{} ball with a radius-{} arity-{} ball",
            b1.radius, b1.arity, b2.radius, b2.arity
        )));
    }
    Ok(b1 == b2)
}

/// Which side of a [`MarkedPair`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairSide {
    First,
    Second,
}

impl PairSide {
    pub fn other(self) -> Self {
        match self {
            PairSide::First => PairSide::Second,
            PairSide::Second => PairSide::First,
        }
    }
}

impl std::fmt::Display for PairSide {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PairSide::First => "first",
            PairSide::Second => "second",
        })
    }
}

impl std::str::FromStr for PairSide {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first" => Ok(PairSide::First),
            "second" => Ok(PairSide::Second),
            _ => Err(Error::Usage(format!("side must be `first` or `second`, got `{s}`"))),
        }
    }
}

/// The forced subsets behind a pair of marked specs: one shared subset (for
/// `S` against its translate `hS`) or two independent ones.
pub enum Subsets<'a> {
    Shared(&'a mut ForcedSubset),
    Separate(&'a mut ForcedSubset, &'a mut ForcedSubset),
}

/// Two marked groups over the same `H` and `B`, compared side by side.
pub struct MarkedPair<'a> {
    pub first: MarkedSpec,
    pub second: MarkedSpec,
    pub subsets: Subsets<'a>,
}

impl<'a> MarkedPair<'a> {
    pub fn new(first: MarkedSpec, second: MarkedSpec, subsets: Subsets<'a>) -> Result<Self> {
        if first.ambient != second.ambient || first.arity() != second.arity() || first.table.data() != second.table.data() {
            return Err(Error::Usage("marked specs over different groups".into()));
        }
        Ok(Self {
            first,
            second,
            subsets,
        })
    }

    /// The spec and subset of one side.
    pub fn side(&mut self, side: PairSide) -> (&mut MarkedSpec, &mut ForcedSubset) {
        let spec = match side {
            PairSide::First => &mut self.first,
            PairSide::Second => &mut self.second,
        };
        let subset = match (&mut self.subsets, side) {
            (Subsets::Shared(s), _) => &mut **s,
            (Subsets::Separate(s, _), PairSide::First) => &mut **s,
            (Subsets::Separate(_, t), PairSide::Second) => &mut **t,
        };
        (spec, subset)
    }

    /// Membership of `x` in the side's translate, pinning on read.
    pub fn contains(&mut self, side: PairSide, x: &AmbientElement) -> bool {
        let (spec, subset) = self.side(side);
        let y = &spec.translate.inverse() * x;
        subset.query(&y)
    }

    pub fn verdict(&mut self, side: PairSide, w: &MarkedWord) -> Result<Verdict> {
        let (spec, subset) = self.side(side);
        spec.verdict(w, subset)
    }

    pub fn is_identity(&mut self, side: PairSide, w: &MarkedWord) -> Result<bool> {
        let (spec, subset) = self.side(side);
        spec.is_identity(w, subset)
    }

    pub fn build_ball(&mut self, side: PairSide, r: usize) -> Result<MarkedBall> {
        let (spec, subset) = self.side(side);
        spec.build_ball(subset, r)
    }

    /// The shortlex-first freely reduced word of length at most `2r + 1` whose
    /// identity verdicts differ between the two sides, if any. These are
    /// exactly the words that determine the radius-`r` balls.
    pub fn similarity_debug(&mut self, r: usize) -> Result<Option<MarkedWord>> {
        let rank = self.first.ambient.generator_count();
        let max_len = 2 * r + 1;
        let (_, subset) = self.side(PairSide::First);
        let cap = subset.limits().ball_cap;
        let letters = 2 * (rank + 2);
        let mut total: usize = 1;
        let mut layer: usize = 1;
        for len in 1..=max_len {
            layer = layer.saturating_mul(if len == 1 { letters } else { letters - 1 });
            total = total.saturating_add(layer);
        }
        if total > cap {
            return Err(Error::Capacity {
                what: format!("word enumeration up to length {max_len}"),
                limit: cap,
            });
        }
        for len in 0..=max_len {
            for w in ReducedWords::new(rank, len) {
                if self.is_identity(PairSide::First, &w)? != self.is_identity(PairSide::Second, &w)? {
                    return Ok(Some(w));
                }
            }
        }
        Ok(None)
    }
}

/// Freely reduced marked words of one length, in shortlex order.
pub struct ReducedWords {
    alphabet: Vec<Letter>,
    digits: Vec<usize>,
    done: bool,
}

impl ReducedWords {
    pub fn new(rank: usize, len: usize) -> Self {
        let alphabet = Letter::alphabet(rank);
        // alternating x1 x1 ... is the least reduced word
        Self {
            alphabet,
            digits: vec![0; len],
            done: false,
        }
    }

    fn valid_at(&self, i: usize) -> bool {
        i == 0 || self.alphabet[self.digits[i]] != self.alphabet[self.digits[i - 1]].inv()
    }

    /// Advances to the next reduced digit string; false when exhausted.
    fn advance(&mut self) -> bool {
        let n = self.alphabet.len();
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            self.digits[i] += 1;
            while self.digits[i] < n && !self.valid_at(i) {
                self.digits[i] += 1;
            }
            if self.digits[i] < n {
                break;
            }
        }
        for j in i + 1..self.digits.len() {
            self.digits[j] = 0;
            while !self.valid_at(j) {
                self.digits[j] += 1;
            }
        }
        true
    }
}

impl Iterator for ReducedWords {
    type Item = MarkedWord;

    fn next(&mut self) -> Option<MarkedWord> {
        if self.done {
            return None;
        }
        let w = MarkedWord::new(self.digits.iter().map(|&d| self.alphabet[d]).collect());
        self.done = !self.advance();
        Some(w)
    }
}
