use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::Result;
use crate::forcing::{Membership, SubsetView};
use crate::groups::{Ambient, AmbientElement, BallSpec, FiniteGroupTable};

use super::collect::{collect, CollectedForm, Lamp};
use super::word::MarkedWord;

/// Why a word is not the identity of `W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// The projection to `H` is this non-trivial element.
    Tail(AmbientElement),
    /// The function part is non-trivial at this point of `H`.
    Point(AmbientElement),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Tail(t) => write!(f, "tail {t}"),
            Witness::Point(h) => write!(f, "point {h}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Identity,
    NonIdentity(Witness),
}

impl Verdict {
    pub fn is_identity(&self) -> bool {
        matches!(self, Verdict::Identity)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Identity => f.write_str("identity"),
            Verdict::NonIdentity(w) => write!(f, "non-identity ({w})"),
        }
    }
}

/// Exact word problem in `G_S ≤ B Wr H` for a forced subset (or a translate of one).
///
/// The word is the identity iff its tail is trivial, its value at every
/// `ā`-conjugator point is trivial, and `b^σ = 1` for the exponent sum `σ` of
/// every class of `b̄`-factors sharing a conjugator. When a class sum fails,
/// a point `h` outside the `ā`-points is realized at which exactly that class
/// fires, and returned as the witness.
pub fn is_identity_generic(
    w: &MarkedWord,
    table: &FiniteGroupTable,
    view: &mut SubsetView<'_>,
) -> Result<Verdict> {
    let cf = collect(w, view.ambient());
    if !cf.tail.is_identity() {
        return Ok(Verdict::NonIdentity(Witness::Tail(cf.tail)));
    }
    let points = cf.a_points();
    for u in &points {
        if cf.evaluate_at(table, view, u) != table.id() {
            return Ok(Verdict::NonIdentity(Witness::Point(u.clone())));
        }
    }
    let partition = cf.b_classes();
    let Some(m) = partition
        .classes
        .iter()
        .position(|c| table.power(table.gen_b(), c.sum) != table.id())
    else {
        return Ok(Verdict::Identity);
    };
    // v_j⁻¹·h ∈ S exactly for j = m
    let window: Vec<AmbientElement> = partition
        .classes
        .iter()
        .map(|c| c.conjugator.inverse())
        .collect();
    let included = [window[m].clone()];
    let h = view.realize_firing(&window, &included, |h| points.contains(h))?;
    debug_assert_ne!(cf.evaluate_at(table, view, &h), table.id());
    Ok(Verdict::NonIdentity(Witness::Point(h)))
}

/// Exact word problem in `G_P` for a finite subset `P`. Off the `ā`-points
/// and the translates `v·P` of `P` by `b̄`-conjugators every factor is
/// trivial, so only those finitely many points are evaluated.
pub fn is_identity_finite(
    w: &MarkedWord,
    ambient: Ambient,
    table: &FiniteGroupTable,
    members: &HashSet<AmbientElement>,
) -> Verdict {
    let cf = collect(w, ambient);
    if !cf.tail.is_identity() {
        return Verdict::NonIdentity(Witness::Tail(cf.tail));
    }
    let mut candidates = cf.a_points();
    for class in cf.b_classes().classes {
        candidates.extend(members.iter().map(|p| &class.conjugator * p));
    }
    candidates.sort();
    candidates.dedup();
    let mut oracle = |x: &AmbientElement| members.contains(x);
    candidates
        .into_iter()
        .find(|h| cf.evaluate_at(table, &mut oracle, h) != table.id())
        .map_or(Verdict::Identity, |h| Verdict::NonIdentity(Witness::Point(h)))
}

/// `w1 = w2` in `G_S`, decided as `w1·w2⁻¹ = 1`.
pub fn elements_equal(
    w1: &MarkedWord,
    w2: &MarkedWord,
    table: &FiniteGroupTable,
    view: &mut SubsetView<'_>,
) -> Result<bool> {
    let w = w1.concat(&w2.inverse()).reduced();
    Ok(is_identity_generic(&w, table, view)?.is_identity())
}

/// Outcome of the brute-force window check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WindowVerdict {
    /// No violation anywhere in the window; not a proof of identity.
    IdentityUpToWindow,
    NonIdentity(Witness),
}

impl fmt::Display for WindowVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WindowVerdict::IdentityUpToWindow => f.write_str("identity up to window"),
            WindowVerdict::NonIdentity(w) => write!(f, "non-identity ({w})"),
        }
    }
}

/// Brute-force evaluation of words at every point of `Ball_H(R)` against a
/// fixed membership oracle. Indicator vectors `h ↦ [v⁻¹h ∈ S]` are cached per
/// conjugator, so the oracle must not change its answers between calls.
pub struct WindowOracle<M> {
    ambient: Ambient,
    ball: BallSpec,
    index: HashMap<AmbientElement, usize>,
    oracle: M,
    indicators: HashMap<AmbientElement, Vec<u64>>,
}

impl<M: Membership> WindowOracle<M> {
    pub fn new(ambient: Ambient, radius: usize, cap: usize, oracle: M) -> Result<Self> {
        let ball = ambient.ball(radius, cap)?;
        let index = ball
            .iter()
            .enumerate()
            .map(|(i, x)| (x.clone(), i))
            .collect();
        Ok(Self {
            ambient,
            ball,
            index,
            oracle,
            indicators: HashMap::new(),
        })
    }

    pub fn radius(&self) -> usize {
        self.ball.radius
    }

    pub fn into_oracle(self) -> M {
        self.oracle
    }

    fn indicator(&mut self, v: &AmbientElement) -> &[u64] {
        if !self.indicators.contains_key(v) {
            let v_inv = v.inverse();
            let mut bits = vec![0u64; self.ball.len().div_ceil(64)];
            for (i, h) in self.ball.iter().enumerate() {
                if self.oracle.contains(&(&v_inv * h)) {
                    bits[i / 64] |= 1 << (i % 64);
                }
            }
            self.indicators.insert(v.clone(), bits);
        }
        &self.indicators[v]
    }

    /// Checks the tail, then evaluates the collected form at every point of
    /// the window in shortlex order; the first violation is the witness.
    pub fn check(&mut self, w: &MarkedWord, table: &FiniteGroupTable) -> WindowVerdict {
        let cf = collect(w, self.ambient);
        self.check_collected(&cf, table)
    }

    pub fn check_collected(&mut self, cf: &CollectedForm, table: &FiniteGroupTable) -> WindowVerdict {
        if !cf.tail.is_identity() {
            return WindowVerdict::NonIdentity(Witness::Tail(cf.tail.clone()));
        }
        enum Fire {
            At(Option<usize>),
            On(usize),
        }
        let mut plan: Vec<(Fire, usize)> = Vec::with_capacity(cf.factors.len());
        let mut vectors: Vec<Vec<u64>> = Vec::new();
        for f in &cf.factors {
            let (fire, g) = match f.lamp {
                Lamp::A => (Fire::At(self.index.get(&f.conjugator).copied()), table.gen_a()),
                Lamp::B => {
                    vectors.push(self.indicator(&f.conjugator).to_vec());
                    (Fire::On(vectors.len() - 1), table.gen_b())
                }
            };
            plan.push((fire, table.power(g, f.exp)));
        }
        for i in 0..self.ball.len() {
            let mut value = table.id();
            for (fire, p) in &plan {
                let fires = match *fire {
                    Fire::At(at) => at == Some(i),
                    Fire::On(k) => vectors[k][i / 64] >> (i % 64) & 1 == 1,
                };
                if fires {
                    value = table.mul(value, *p);
                }
            }
            if value != table.id() {
                return WindowVerdict::NonIdentity(Witness::Point(self.ball.elements[i].clone()));
            }
        }
        WindowVerdict::IdentityUpToWindow
    }
}

/// One-shot brute-force check of `w` on `Ball_H(radius)`.
pub fn is_identity_window(
    w: &MarkedWord,
    ambient: Ambient,
    table: &FiniteGroupTable,
    oracle: impl Membership,
    radius: usize,
    cap: usize,
) -> Result<WindowVerdict> {
    Ok(WindowOracle::new(ambient, radius, cap, oracle)?.check(w, table))
}
