//! The ambient group `H` with its fixed generating set `X = (x_1, ..., x_n)`.
//!
//! Two backends are supported: free groups `free:k` (elements are freely
//! reduced words) and free abelian groups `zd:d` (elements are integer
//! vectors, `x_i` the unit vectors). Both have a trivially decidable word
//! problem and enumerable balls.
//!
//! All enumerations use one global shortlex order on geodesic spellings with
//! letters ordered `x1 < x1^-1 < x2 < x2^-1 < ...`. For `zd:d` the spelling of
//! a vector `(m_1, ..., m_d)` is `x1^m1 x2^m2 ...`, which is its shortlex-least
//! geodesic word.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use smallvec::SmallVec;

use crate::error::{Error, ParseError, Result};

pub const MAX_FREE_RANK: usize = 64;
pub const MAX_ZD_DIM: usize = 16;

/// Letters of a free-group element: `+(i+1)` encodes `x_{i+1}`, `-(i+1)` its inverse.
pub type FreeWord = SmallVec<[i8; 22]>;
pub type LatticePoint = SmallVec<[i64; 3]>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ambient {
    Free { rank: usize },
    Zd { dim: usize },
}

/// An element of `H` in canonical form. Equal elements have identical forms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AmbientElement {
    Free(FreeWord),
    Zd(LatticePoint),
}

/// The elements of `Ball_H(radius)`, sorted shortlex; the identity comes first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallSpec {
    pub radius: usize,
    pub elements: Vec<AmbientElement>,
}

impl BallSpec {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: &AmbientElement) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, AmbientElement> {
        self.elements.iter()
    }
}

impl Ambient {
    pub fn free(rank: usize) -> Result<Self> {
        if !(2..=MAX_FREE_RANK).contains(&rank) {
            return Err(Error::Usage(format!(
                "free rank must lie in 2..={MAX_FREE_RANK}, got {rank}"
            )));
        }
        Ok(Ambient::Free { rank })
    }

    pub fn zd(dim: usize) -> Result<Self> {
        if !(1..=MAX_ZD_DIM).contains(&dim) {
            return Err(Error::Usage(format!(
                "lattice dimension must lie in 1..={MAX_ZD_DIM}, got {dim}"
            )));
        }
        Ok(Ambient::Zd { dim })
    }

    /// Number of generators `n = |X|`.
    pub fn generator_count(&self) -> usize {
        match *self {
            Ambient::Free { rank } => rank,
            Ambient::Zd { dim } => dim,
        }
    }

    pub fn identity(&self) -> AmbientElement {
        match *self {
            Ambient::Free { .. } => AmbientElement::Free(FreeWord::new()),
            Ambient::Zd { dim } => AmbientElement::Zd(SmallVec::from_elem(0, dim)),
        }
    }

    /// The generator `x_{index+1}` or its inverse.
    pub fn generator(&self, index: usize, inverse: bool) -> AmbientElement {
        assert!(index < self.generator_count(), "generator index out of range");
        match *self {
            Ambient::Free { .. } => {
                let l = (index + 1) as i8;
                let mut w = FreeWord::new();
                w.push(if inverse { -l } else { l });
                AmbientElement::Free(w)
            }
            Ambient::Zd { dim } => {
                let mut v: LatticePoint = SmallVec::from_elem(0, dim);
                v[index] = if inverse { -1 } else { 1 };
                AmbientElement::Zd(v)
            }
        }
    }

    /// Whether `g` is a well-formed element of this backend.
    pub fn contains(&self, g: &AmbientElement) -> bool {
        match (self, g) {
            (Ambient::Free { rank }, AmbientElement::Free(w)) => {
                w.iter()
                    .all(|&l| l != 0 && (l.unsigned_abs() as usize) <= *rank)
                    && w.windows(2).all(|p| p[0] != -p[1])
            }
            (Ambient::Zd { dim }, AmbientElement::Zd(v)) => v.len() == *dim,
            _ => false,
        }
    }

    fn check(&self, g: &AmbientElement) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::BackendMismatch(format!("{g} is not an element of {self}")))
        }
    }

    /// Checked product `g·h`.
    pub fn mul(&self, g: &AmbientElement, h: &AmbientElement) -> Result<AmbientElement> {
        self.check(g)?;
        self.check(h)?;
        Ok(g * h)
    }

    /// Checked inverse.
    pub fn inv(&self, g: &AmbientElement) -> Result<AmbientElement> {
        self.check(g)?;
        Ok(g.inverse())
    }

    /// The shortlex-least element of word length `len`.
    pub fn least_of_length(&self, len: usize) -> AmbientElement {
        match *self {
            Ambient::Free { .. } => AmbientElement::Free(SmallVec::from_elem(1, len)),
            Ambient::Zd { dim } => {
                let mut v: LatticePoint = SmallVec::from_elem(0, dim);
                v[0] = len as i64;
                AmbientElement::Zd(v)
            }
        }
    }

    /// All elements of word length exactly `len`, sorted shortlex.
    pub fn sphere(&self, len: usize) -> Vec<AmbientElement> {
        match *self {
            Ambient::Free { .. } => {
                let mut out = Vec::new();
                let mut g = self.least_of_length(len);
                while g.word_length() == len {
                    let next = self.successor(&g);
                    out.push(g);
                    g = next;
                }
                out
            }
            Ambient::Zd { dim } => {
                let mut out = Vec::new();
                let mut current: LatticePoint = SmallVec::from_elem(0, dim);
                lattice_sphere(0, len as i64, &mut current, &mut out);
                out.sort();
                out
            }
        }
    }

    /// The next element after `g` in shortlex order.
    pub fn successor(&self, g: &AmbientElement) -> AmbientElement {
        match (self, g) {
            (Ambient::Free { rank }, AmbientElement::Free(w)) => {
                AmbientElement::Free(free_successor(w, *rank))
            }
            (Ambient::Zd { .. }, AmbientElement::Zd(_)) => {
                let len = g.word_length();
                let sphere = self.sphere(len);
                let pos = sphere
                    .binary_search(g)
                    .expect("element lies on its own sphere");
                match sphere.get(pos + 1) {
                    Some(next) => next.clone(),
                    None => self.least_of_length(len + 1),
                }
            }
            _ => panic!("backend mismatch: {g} is not an element of {self}"),
        }
    }

    /// Shortlex enumeration of `H` starting at `start` (inclusive).
    pub fn shortlex_from(&self, start: AmbientElement) -> Shortlex {
        let state = match self {
            Ambient::Free { .. } => ShortlexState::Free(start),
            Ambient::Zd { .. } => {
                let len = start.word_length();
                let sphere = self.sphere(len);
                let pos = sphere
                    .binary_search(&start)
                    .expect("element lies on its own sphere");
                ShortlexState::Zd { sphere, pos, len }
            }
        };
        Shortlex {
            ambient: *self,
            state,
        }
    }

    /// Exact `|Ball_H(radius)|`, or `None` on overflow.
    pub fn ball_size(&self, radius: usize) -> Option<usize> {
        match *self {
            Ambient::Free { rank } => {
                // 1 + 2k * sum_{i<n} (2k-1)^i
                let branch = 2 * rank as u128 - 1;
                let mut total: u128 = 1;
                let mut sphere: u128 = 2 * rank as u128;
                for _ in 0..radius {
                    total = total.checked_add(sphere)?;
                    sphere = sphere.checked_mul(branch)?;
                    if total > usize::MAX as u128 {
                        return None;
                    }
                }
                usize::try_from(total).ok()
            }
            Ambient::Zd { dim } => {
                // sum_k 2^k C(d,k) C(n,k)
                let mut total: u128 = 0;
                for k in 0..=dim.min(radius) {
                    let term = (1u128 << k)
                        .checked_mul(binomial(dim as u128, k as u128)?)?
                        .checked_mul(binomial(radius as u128, k as u128)?)?;
                    total = total.checked_add(term)?;
                }
                usize::try_from(total).ok()
            }
        }
    }

    /// `Ball_H(radius)` in shortlex order; fails if it would exceed `cap` elements.
    pub fn ball(&self, radius: usize, cap: usize) -> Result<BallSpec> {
        match self.ball_size(radius) {
            Some(n) if n <= cap => {}
            _ => {
                return Err(Error::Capacity {
                    what: format!("Ball_H({radius}) of {self}"),
                    limit: cap,
                })
            }
        }
        let elements = self
            .shortlex_from(self.identity())
            .take_while(|g| g.word_length() <= radius)
            .collect();
        Ok(BallSpec { radius, elements })
    }

    /// Parse the text form of an element: `x1 x2^-1` (free), `(m1,...,md)` (lattice), `e`.
    pub fn parse_element(&self, text: &str) -> Result<AmbientElement, ParseError> {
        let trimmed = text.trim();
        if trimmed == "e" {
            return Ok(self.identity());
        }
        match *self {
            Ambient::Free { rank } => {
                let mut w = FreeWord::new();
                for (column, token) in tokens(text) {
                    let (index, inverse) = parse_x_token(token, column, rank)?;
                    let l = (index + 1) as i8;
                    let l = if inverse { -l } else { l };
                    if w.last() == Some(&-l) {
                        w.pop();
                    } else {
                        w.push(l);
                    }
                }
                if w.is_empty() && trimmed.is_empty() {
                    return Err(ParseError::new(1, "empty element (write `e` for the identity)"));
                }
                Ok(AmbientElement::Free(w))
            }
            Ambient::Zd { dim } => {
                let start = text.find('(').ok_or_else(|| {
                    ParseError::new(1, "expected `(m1,...,md)` or `e`")
                })?;
                let inner = trimmed
                    .strip_prefix('(')
                    .and_then(|s| s.strip_suffix(')'))
                    .ok_or_else(|| ParseError::new(start + 1, "expected `(m1,...,md)`"))?;
                let mut v = LatticePoint::new();
                let mut column = start + 2;
                for part in inner.split(',') {
                    let value: i64 = part.trim().parse().map_err(|_| {
                        ParseError::new(column, format!("invalid integer `{}`", part.trim()))
                    })?;
                    v.push(value);
                    column += part.chars().count() + 1;
                }
                if v.len() != dim {
                    return Err(ParseError::new(
                        start + 1,
                        format!("expected {dim} coordinates, got {}", v.len()),
                    ));
                }
                Ok(AmbientElement::Zd(v))
            }
        }
    }
}

/// Whitespace-separated tokens with their 1-based starting columns.
pub(crate) fn tokens(text: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (column, (byte, ch)) in text.char_indices().enumerate() {
        if ch.is_whitespace() {
            if let Some((c, b)) = start.take() {
                out.push((c + 1, &text[b..byte]));
            }
        } else if start.is_none() {
            start = Some((column, byte));
        }
    }
    if let Some((c, b)) = start {
        out.push((c + 1, &text[b..]));
    }
    out.into_iter()
}

/// Parse `x<i>` or `x<i>^-1` into a 0-based generator index.
pub(crate) fn parse_x_token(
    token: &str,
    column: usize,
    rank: usize,
) -> Result<(usize, bool), ParseError> {
    let (body, inverse) = split_exponent(token, column)?;
    let digits = body
        .strip_prefix('x')
        .ok_or_else(|| ParseError::new(column, format!("unknown token `{token}`")))?;
    let index: usize = digits
        .parse()
        .map_err(|_| ParseError::new(column, format!("unknown token `{token}`")))?;
    if index == 0 || index > rank {
        return Err(ParseError::new(
            column,
            format!("generator index {index} out of range 1..={rank}"),
        ));
    }
    Ok((index - 1, inverse))
}

pub(crate) fn split_exponent(token: &str, column: usize) -> Result<(&str, bool), ParseError> {
    match token.split_once('^') {
        None => Ok((token, false)),
        Some((body, "-1")) => Ok((body, true)),
        Some((body, "1")) => Ok((body, false)),
        Some((_, exp)) => Err(ParseError::new(
            column,
            format!("unsupported exponent `{exp}` (only ^-1 and ^1)"),
        )),
    }
}

fn binomial(n: u128, k: u128) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

fn lattice_sphere(axis: usize, remaining: i64, current: &mut LatticePoint, out: &mut Vec<AmbientElement>) {
    if axis + 1 == current.len() {
        current[axis] = remaining;
        out.push(AmbientElement::Zd(current.clone()));
        if remaining != 0 {
            current[axis] = -remaining;
            out.push(AmbientElement::Zd(current.clone()));
        }
        current[axis] = 0;
        return;
    }
    for m in -remaining..=remaining {
        current[axis] = m;
        lattice_sphere(axis + 1, remaining - m.abs(), current, out);
    }
    current[axis] = 0;
}

fn free_rank_of(letter: i8) -> u8 {
    2 * (letter.unsigned_abs() - 1) + u8::from(letter < 0)
}

fn free_letter_of(rank: u8) -> i8 {
    let l = (rank / 2 + 1) as i8;
    if rank % 2 == 1 {
        -l
    } else {
        l
    }
}

fn free_successor(w: &[i8], rank: usize) -> FreeWord {
    let letters = (2 * rank) as u8;
    let ranks: SmallVec<[u8; 22]> = w.iter().map(|&l| free_rank_of(l)).collect();
    let least_after = |prev: Option<u8>| -> u8 {
        // the least rank that does not cancel `prev`; only x1^-1 (rank 1) is cancelled by x1
        if prev == Some(1) {
            1
        } else {
            0
        }
    };
    for p in (0..ranks.len()).rev() {
        let prev = if p == 0 { None } else { Some(ranks[p - 1]) };
        let bumped = (ranks[p] + 1..letters).find(|&c| prev != Some(c ^ 1));
        if let Some(c) = bumped {
            let mut out: SmallVec<[u8; 22]> = ranks[..p].iter().copied().collect();
            out.push(c);
            while out.len() < ranks.len() {
                let next = least_after(out.last().copied());
                out.push(next);
            }
            return out.into_iter().map(free_letter_of).collect();
        }
    }
    SmallVec::from_elem(1, w.len() + 1)
}

impl AmbientElement {
    pub fn is_identity(&self) -> bool {
        match self {
            AmbientElement::Free(w) => w.is_empty(),
            AmbientElement::Zd(v) => v.iter().all(|&m| m == 0),
        }
    }

    /// Geodesic length `|h|_X`.
    pub fn word_length(&self) -> usize {
        match self {
            AmbientElement::Free(w) => w.len(),
            AmbientElement::Zd(v) => v.iter().map(|m| m.unsigned_abs() as usize).sum(),
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            AmbientElement::Free(w) => AmbientElement::Free(w.iter().rev().map(|&l| -l).collect()),
            AmbientElement::Zd(v) => AmbientElement::Zd(v.iter().map(|&m| -m).collect()),
        }
    }

    /// Product `self·other`; errors if the operands come from different backends.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (AmbientElement::Free(a), AmbientElement::Free(b)) => {
                let mut k = 0;
                while k < a.len() && k < b.len() && a[a.len() - 1 - k] == -b[k] {
                    k += 1;
                }
                let mut out = FreeWord::with_capacity(a.len() + b.len() - 2 * k);
                out.extend_from_slice(&a[..a.len() - k]);
                out.extend_from_slice(&b[k..]);
                Ok(AmbientElement::Free(out))
            }
            (AmbientElement::Zd(a), AmbientElement::Zd(b)) if a.len() == b.len() => Ok(
                AmbientElement::Zd(a.iter().zip(b.iter()).map(|(x, y)| x + y).collect()),
            ),
            _ => Err(Error::BackendMismatch(format!("cannot multiply {self} by {other}"))),
        }
    }

    /// Right-multiply in place by `x_{index+1}^{±1}`.
    pub fn push_generator(&mut self, index: usize, inverse: bool) {
        match self {
            AmbientElement::Free(w) => {
                let l = (index + 1) as i8;
                let l = if inverse { -l } else { l };
                if w.last() == Some(&-l) {
                    w.pop();
                } else {
                    w.push(l);
                }
            }
            AmbientElement::Zd(v) => v[index] += if inverse { -1 } else { 1 },
        }
    }

    /// The shortlex-least geodesic spelling, as `(generator index, inverse)` pairs.
    pub fn letters(&self) -> Vec<(usize, bool)> {
        match self {
            AmbientElement::Free(w) => w
                .iter()
                .map(|&l| (l.unsigned_abs() as usize - 1, l < 0))
                .collect(),
            AmbientElement::Zd(v) => v
                .iter()
                .enumerate()
                .flat_map(|(i, &m)| std::iter::repeat_n((i, m < 0), m.unsigned_abs() as usize))
                .collect(),
        }
    }

    fn ranks(&self) -> Box<dyn Iterator<Item = usize> + '_> {
        match self {
            AmbientElement::Free(w) => Box::new(w.iter().map(|&l| free_rank_of(l) as usize)),
            AmbientElement::Zd(v) => Box::new(v.iter().enumerate().flat_map(|(i, &m)| {
                std::iter::repeat_n(2 * i + usize::from(m < 0), m.unsigned_abs() as usize)
            })),
        }
    }
}

impl Mul for &AmbientElement {
    type Output = AmbientElement;

    /// Panics on backend mismatch; use [`AmbientElement::try_mul`] for untrusted input.
    fn mul(self, rhs: &AmbientElement) -> AmbientElement {
        self.try_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Ord for AmbientElement {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (AmbientElement::Free(a), AmbientElement::Free(b)) => a
                .len()
                .cmp(&b.len())
                .then_with(|| a.iter().map(|&l| free_rank_of(l)).cmp(b.iter().map(|&l| free_rank_of(l)))),
            (AmbientElement::Zd(_), AmbientElement::Zd(_)) => self
                .word_length()
                .cmp(&other.word_length())
                .then_with(|| self.ranks().cmp(other.ranks())),
            (AmbientElement::Free(_), AmbientElement::Zd(_)) => Ordering::Less,
            (AmbientElement::Zd(_), AmbientElement::Free(_)) => Ordering::Greater,
        }
    }
}

impl PartialOrd for AmbientElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for AmbientElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("e");
        }
        match self {
            AmbientElement::Free(w) => {
                for (i, &l) in w.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "x{}", l.unsigned_abs())?;
                    if l < 0 {
                        f.write_str("^-1")?;
                    }
                }
                Ok(())
            }
            AmbientElement::Zd(v) => {
                f.write_str("(")?;
                for (i, m) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{m}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ambient::Free { rank } => write!(f, "free:{rank}"),
            Ambient::Zd { dim } => write!(f, "zd:{dim}"),
        }
    }
}

impl FromStr for Ambient {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, n) = s
            .split_once(':')
            .ok_or_else(|| Error::Usage(format!("expected free:<k> or zd:<d>, got `{s}`")))?;
        let n: usize = n
            .parse()
            .map_err(|_| Error::Usage(format!("invalid backend size in `{s}`")))?;
        match kind {
            "free" => Ambient::free(n),
            "zd" => Ambient::zd(n),
            _ => Err(Error::Usage(format!("unknown backend `{kind}`"))),
        }
    }
}

/// Iterator over `H` in shortlex order; see [`Ambient::shortlex_from`].
pub struct Shortlex {
    ambient: Ambient,
    state: ShortlexState,
}

enum ShortlexState {
    Free(AmbientElement),
    Zd {
        sphere: Vec<AmbientElement>,
        pos: usize,
        len: usize,
    },
}

impl Iterator for Shortlex {
    type Item = AmbientElement;

    fn next(&mut self) -> Option<AmbientElement> {
        match &mut self.state {
            ShortlexState::Free(current) => {
                let next = self.ambient.successor(current);
                Some(std::mem::replace(current, next))
            }
            ShortlexState::Zd { sphere, pos, len } => {
                if *pos == sphere.len() {
                    *len += 1;
                    *sphere = self.ambient.sphere(*len);
                    *pos = 0;
                }
                *pos += 1;
                Some(sphere[*pos - 1].clone())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free2() -> Ambient {
        Ambient::free(2).unwrap()
    }

    fn el(a: &Ambient, s: &str) -> AmbientElement {
        a.parse_element(s).unwrap()
    }

    #[test]
    fn free_products() {
        let h = free2();
        assert!(h.mul(&el(&h, "x1"), &el(&h, "x1^-1")).unwrap().is_identity());
        assert_eq!(
            h.mul(&el(&h, "x1 x2"), &el(&h, "x2^-1 x1")).unwrap(),
            el(&h, "x1 x1")
        );
    }

    #[test]
    fn lattice_products() {
        let h = Ambient::zd(2).unwrap();
        assert_eq!(h.mul(&el(&h, "(1,0)"), &el(&h, "(0,-3)")).unwrap(), el(&h, "(1,-3)"));
    }

    #[test]
    fn mixed_backends_are_rejected() {
        let f = free2();
        let z = Ambient::zd(2).unwrap();
        let err = f.mul(&el(&f, "x1"), &el(&z, "(1,0)")).unwrap_err();
        assert!(matches!(err, Error::BackendMismatch(_)));
        assert!(el(&f, "x1").try_mul(&el(&z, "(0,1)")).is_err());
    }

    #[test]
    fn word_lengths() {
        let f = free2();
        assert_eq!(f.identity().word_length(), 0);
        assert_eq!(el(&f, "x1 x2^-1 x1").word_length(), 3);
        let z = Ambient::zd(2).unwrap();
        assert_eq!(el(&z, "(2,-1)").word_length(), 3);
    }

    #[test]
    fn ball_census() {
        let f = free2();
        assert_eq!(f.ball(0, 100).unwrap().elements, vec![f.identity()]);
        let sizes: Vec<usize> = (0..=4).map(|n| f.ball(n, 10_000).unwrap().len()).collect();
        assert_eq!(sizes, vec![1, 5, 17, 53, 161]);
        assert_eq!(Ambient::zd(2).unwrap().ball(2, 100).unwrap().len(), 13);
        assert_eq!(Ambient::zd(3).unwrap().ball(2, 100).unwrap().len(), 25);
    }

    #[test]
    fn ball_is_sorted_and_starts_at_identity() {
        for h in [free2(), Ambient::free(3).unwrap(), Ambient::zd(2).unwrap(), Ambient::zd(3).unwrap()] {
            let b = h.ball(3, 100_000).unwrap();
            assert!(b.elements[0].is_identity());
            assert!(b.elements.windows(2).all(|p| p[0] < p[1]));
            assert_eq!(Some(b.len()), h.ball_size(3));
        }
    }

    #[test]
    fn ball_capacity() {
        let err = free2().ball(12, 1000).unwrap_err();
        assert!(matches!(err, Error::Capacity { limit: 1000, .. }));
    }

    #[test]
    fn free_ball_order_starts_as_expected() {
        let f = free2();
        let b = f.ball(2, 100).unwrap();
        let text: Vec<String> = b.elements[..6].iter().map(|g| g.to_string()).collect();
        assert_eq!(text, ["e", "x1", "x1^-1", "x2", "x2^-1", "x1 x1"]);
        // x1^-1 x1 is not reduced, so x1^-1 is followed by x1^-1 x1^-1
        let pos = b.elements.iter().position(|g| g.to_string() == "x1^-1 x1^-1").unwrap();
        assert_eq!(b.elements[pos - 1].to_string(), "x1 x2^-1");
    }

    #[test]
    fn text_round_trip() {
        let f = free2();
        for s in ["e", "x1", "x1 x2^-1", "x2^-1 x2^-1 x1"] {
            assert_eq!(el(&f, s).to_string(), s);
        }
        let z = Ambient::zd(3).unwrap();
        assert_eq!(el(&z, "(0,0,0)").to_string(), "e");
        assert_eq!(el(&z, "(1,-2,0)").to_string(), "(1,-2,0)");
    }

    #[test]
    fn parse_errors_carry_columns() {
        let f = free2();
        let err = f.parse_element("x1 x3").unwrap_err();
        assert_eq!(err.column, 4);
        assert!(f.parse_element("x0").is_err());
        assert!(f.parse_element("y1").is_err());
        let z = Ambient::zd(2).unwrap();
        assert!(z.parse_element("(1,2,3)").is_err());
        assert!(z.parse_element("(1,a)").is_err());
    }

    #[test]
    fn backend_spec_strings() {
        assert_eq!("free:2".parse::<Ambient>().unwrap(), Ambient::Free { rank: 2 });
        assert_eq!("zd:3".parse::<Ambient>().unwrap().to_string(), "zd:3");
        assert!("free:1".parse::<Ambient>().is_err());
        assert!("zd:0".parse::<Ambient>().is_err());
        assert!("heis:3".parse::<Ambient>().is_err());
    }
}
