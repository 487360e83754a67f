//! Lazily forced subsets `S ⊆ H`.
//!
//! A [`ForcedSubset`] is a finite, append-only record of membership bits.
//! Reading an unpinned element pins it to `false`, so every answer ever
//! given stays valid for all later extensions. Density requirements for the
//! left and right translation actions are fulfilled on demand: a pattern
//! `(E ⊆ F)` is realized by pinning `S` on a fresh translate of `F`, and the
//! fulfilled requirement is logged so it can be re-checked later.
//!
//! Fresh translates are searched in shortlex order from a persistent cursor,
//! starting no lower than `max(snapshot radius, ρ) + ρ + 1` where `ρ` is the
//! radius of the pattern. A candidate is accepted once its whole window avoids
//! every pinned element.

use std::collections::HashMap;
use std::fmt;
use std::hash::{DefaultHasher, Hash, Hasher};
use std::str::FromStr;

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::groups::{Ambient, AmbientElement};

/// A membership oracle for a subset of `H`.
pub trait Membership {
    fn contains(&mut self, x: &AmbientElement) -> bool;
}

impl<F: FnMut(&AmbientElement) -> bool> Membership for F {
    fn contains(&mut self, x: &AmbientElement) -> bool {
        self(x)
    }
}

/// A finite pattern `E ⊆ F`: the requirement "`Q ∩ F = E`" on a subset `Q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pattern {
    included: Vec<AmbientElement>,
    window: Vec<AmbientElement>,
}

impl Pattern {
    pub fn new(included: Vec<AmbientElement>, window: Vec<AmbientElement>) -> Result<Self> {
        let mut included = included;
        let mut window = window;
        included.sort();
        included.dedup();
        window.sort();
        window.dedup();
        if let Some(x) = included.iter().find(|x| window.binary_search(x).is_err()) {
            return Err(Error::Usage(format!("pattern element {x} is in E but not in F")));
        }
        Ok(Self { included, window })
    }

    /// The pattern `Q ∩ F` read off a membership predicate.
    pub fn from_fn(
        window: impl IntoIterator<Item = AmbientElement>,
        mut member: impl FnMut(&AmbientElement) -> bool,
    ) -> Self {
        let mut window: Vec<AmbientElement> = window.into_iter().collect();
        window.sort();
        window.dedup();
        let included = window.iter().filter(|x| member(x)).cloned().collect();
        Self { included, window }
    }

    /// `F` in shortlex order.
    pub fn window(&self) -> &[AmbientElement] {
        &self.window
    }

    /// `E` in shortlex order.
    pub fn included(&self) -> &[AmbientElement] {
        &self.included
    }

    /// Whether `x ∈ E`.
    pub fn contains(&self, x: &AmbientElement) -> bool {
        self.included.binary_search(x).is_ok()
    }

    /// Whether `x ∈ F`.
    pub fn covers(&self, x: &AmbientElement) -> bool {
        self.window.binary_search(x).is_ok()
    }

    pub fn len(&self) -> usize {
        self.window.len()
    }

    pub fn is_empty(&self) -> bool {
        self.window.is_empty()
    }

    /// `max |f|_X` over `F` (0 when empty).
    pub fn radius(&self) -> usize {
        self.window.last().map_or(0, |f| f.word_length())
    }

    /// `(f, f ∈ E)` for every `f ∈ F`, in shortlex order.
    pub fn entries(&self) -> impl Iterator<Item = (&AmbientElement, bool)> + '_ {
        self.window.iter().map(|f| (f, self.contains(f)))
    }
}

/// Left action `Q ↦ hQ` or right action `Q ↦ Qg`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "L",
            Side::Right => "R",
        })
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "L" | "l" | "left" => Ok(Side::Left),
            "R" | "r" | "right" => Ok(Side::Right),
            _ => Err(Error::Usage(format!("side must be L or R, got `{s}`"))),
        }
    }
}

/// A fulfilled density requirement: `(witness·S) ∩ F = E` for side L,
/// `(S·witness) ∩ F = E` for side R.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    pub side: Side,
    pub pattern: Pattern,
    pub witness: AmbientElement,
}

/// Resource caps shared by every enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest ball (in `H` or in a marked group) any operation may enumerate.
    pub ball_cap: usize,
    /// Longest translate the freshness search may return.
    pub max_translate_len: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            ball_cap: 4_000_000,
            max_translate_len: 512,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pin {
    value: bool,
    /// Set by a realization window rather than by a query or direct pin.
    realized: bool,
}

/// The lazily built subset `S ⊆ H`.
#[derive(Clone, Debug)]
pub struct ForcedSubset {
    ambient: Ambient,
    limits: Limits,
    pinned: IndexMap<AmbientElement, Pin>,
    realizations: Vec<Realization>,
    right_index: HashMap<Pattern, usize>,
    frontier: usize,
    snapshot_radius: Option<usize>,
    cursor: AmbientElement,
}

impl ForcedSubset {
    pub fn new(ambient: Ambient, limits: Limits) -> Self {
        Self {
            ambient,
            limits,
            pinned: IndexMap::new(),
            realizations: Vec::new(),
            right_index: HashMap::new(),
            frontier: 0,
            snapshot_radius: None,
            cursor: ambient.identity(),
        }
    }

    /// Rebuilds a subset from its stored parts: realization windows are
    /// re-pinned from the log, then the explicit pins are applied, then the
    /// rest of `Ball_H(snapshot_radius)` is pinned `false`. Overlapping
    /// windows, duplicate pins and failed invariants are rejected.
    pub fn restore(
        ambient: Ambient,
        limits: Limits,
        explicit: Vec<(AmbientElement, bool)>,
        realizations: Vec<Realization>,
        snapshot_radius: Option<usize>,
        cursor: AmbientElement,
    ) -> Result<Self> {
        let mut s = Self::new(ambient, limits);
        for r in realizations {
            if r.witness.is_identity() || !ambient.contains(&r.witness) {
                return Err(Error::State(format!("invalid realization witness {}", r.witness)));
            }
            if let Some(x) = r.pattern.window().iter().find(|x| !ambient.contains(x)) {
                return Err(Error::State(format!("pattern element {x} is not in {ambient}")));
            }
            for (x, v) in s.window_of(&r) {
                if s.pinned.contains_key(&x) || r.pattern.covers(&x) {
                    return Err(Error::State(format!(
                        "realization window of witness {} is not fresh at {x}",
                        r.witness
                    )));
                }
                s.pin_unchecked(x, v, true);
            }
            s.record(r);
        }
        for (x, v) in explicit {
            if !ambient.contains(&x) {
                return Err(Error::State(format!("pinned element {x} is not in {ambient}")));
            }
            if s.pinned.contains_key(&x) {
                return Err(Error::State(format!("element {x} pinned twice")));
            }
            s.pin_unchecked(x, v, false);
        }
        if let Some(n) = snapshot_radius {
            s.snapshot(n)?;
        }
        if !ambient.contains(&cursor) {
            return Err(Error::State(format!("cursor {cursor} is not in {ambient}")));
        }
        s.cursor = cursor;
        s.check_invariants()?;
        Ok(s)
    }

    /// Pins that are not implied by the realization log or by the snapshot
    /// ball (where unpinned means `false`), in pinning order.
    pub fn explicit_pins(&self) -> impl Iterator<Item = (&AmbientElement, bool)> + '_ {
        self.pinned.iter().filter_map(|(k, p)| {
            let implied = p.realized || (!p.value && self.snapshot_radius.is_some_and(|n| k.word_length() <= n));
            (!implied).then_some((k, p.value))
        })
    }

    /// The pins a realization imposes: `(window element, value)` in pattern order.
    fn window_of(&self, r: &Realization) -> Vec<(AmbientElement, bool)> {
        let t_inv = r.witness.inverse();
        r.pattern
            .entries()
            .map(|(f, v)| {
                let x = match r.side {
                    Side::Left => &t_inv * f,
                    Side::Right => f * &t_inv,
                };
                (x, v)
            })
            .collect()
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    /// `max |k|_X` over pinned keys.
    pub fn frontier(&self) -> usize {
        self.frontier
    }

    /// Largest radius ever passed to [`ForcedSubset::snapshot`], if any.
    pub fn snapshot_radius(&self) -> Option<usize> {
        self.snapshot_radius
    }

    /// Next candidate the freshness search will consider.
    pub fn cursor(&self) -> &AmbientElement {
        &self.cursor
    }

    /// Pinned bits in pinning order.
    pub fn pinned(&self) -> impl Iterator<Item = (&AmbientElement, bool)> + '_ {
        self.pinned.iter().map(|(k, p)| (k, p.value))
    }

    pub fn pinned_len(&self) -> usize {
        self.pinned.len()
    }

    pub fn realizations(&self) -> &[Realization] {
        &self.realizations
    }

    /// The pinned bit of `x`, without pinning.
    pub fn pinned_value(&self, x: &AmbientElement) -> Option<bool> {
        self.pinned.get(x).map(|p| p.value)
    }

    /// Membership with pin-on-read: an unpinned element is pinned to `false`.
    pub fn query(&mut self, x: &AmbientElement) -> bool {
        if let Some(p) = self.pinned.get(x) {
            return p.value;
        }
        self.pin_unchecked(x.clone(), false, false);
        false
    }

    fn pin_unchecked(&mut self, x: AmbientElement, value: bool, realized: bool) {
        self.frontier = self.frontier.max(x.word_length());
        self.pinned.insert(x, Pin { value, realized });
    }

    /// Pins one element; re-pinning to the same value is a no-op.
    pub fn pin(&mut self, x: &AmbientElement, value: bool) -> Result<()> {
        self.check_pin(x, value)?;
        if !self.pinned.contains_key(x) {
            self.pin_unchecked(x.clone(), value, false);
        }
        Ok(())
    }

    fn check_pin(&self, x: &AmbientElement, value: bool) -> Result<()> {
        if !self.ambient.contains(x) {
            return Err(Error::BackendMismatch(format!("{x} is not an element of {}", self.ambient)));
        }
        match self.pinned.get(x) {
            Some(old) if old.value != value => Err(Error::Conflict {
                element: x.to_string(),
                pinned: old.value,
                requested: value,
            }),
            _ => Ok(()),
        }
    }

    /// Pins every `f ∈ F` to `f ∈ E`. Nothing is pinned if any element conflicts.
    pub fn pin_window(&mut self, p: &Pattern) -> Result<()> {
        for (f, v) in p.entries() {
            self.check_pin(f, v)?;
        }
        for (f, v) in p.entries() {
            if !self.pinned.contains_key(f) {
                self.pin_unchecked(f.clone(), v, false);
            }
        }
        Ok(())
    }

    /// Queries every element of `Ball_H(n)` and returns `(S ∩ Ball(n), Ball(n))`.
    pub fn snapshot(&mut self, n: usize) -> Result<Pattern> {
        let ball = self.ambient.ball(n, self.limits.ball_cap)?;
        let included = ball.iter().filter(|x| self.query(x)).cloned().collect();
        self.snapshot_radius = Some(self.snapshot_radius.map_or(n, |m| m.max(n)));
        Ok(Pattern {
            included,
            window: ball.elements,
        })
    }

    /// Finds `h ≠ 1` with `h⁻¹F` unpinned and disjoint from `F`, then pins
    /// `S` on `h⁻¹F` so that `(hS) ∩ F = E`.
    pub fn realize_left(&mut self, p: &Pattern) -> Result<AmbientElement> {
        self.realize(Side::Left, p)
    }

    /// Finds `g ≠ 1` with `F·g⁻¹` unpinned and disjoint from `F`, then pins
    /// `S` on `F·g⁻¹` so that `(Sg) ∩ F = E`.
    pub fn realize_right(&mut self, p: &Pattern) -> Result<AmbientElement> {
        self.realize(Side::Right, p)
    }

    fn realize(&mut self, side: Side, p: &Pattern) -> Result<AmbientElement> {
        if let Some(x) = p.window().iter().find(|x| !self.ambient.contains(x)) {
            return Err(Error::BackendMismatch(format!("{x} is not an element of {}", self.ambient)));
        }
        let rho = p.radius();
        let min_len = self.snapshot_radius.unwrap_or(0).max(rho) + rho + 1;
        let (t, window) = self.next_fresh(min_len, |t, pinned| {
            let t_inv = t.inverse();
            let mut window = Vec::with_capacity(p.len());
            for f in p.window() {
                let x = match side {
                    Side::Left => &t_inv * f,
                    Side::Right => f * &t_inv,
                };
                if pinned(&x) || p.covers(&x) {
                    return None;
                }
                window.push(x);
            }
            Some(window)
        })?;
        for (x, (_, v)) in window.into_iter().zip(p.entries()) {
            self.pin_unchecked(x, v, true);
        }
        self.record(Realization {
            side,
            pattern: p.clone(),
            witness: t.clone(),
        });
        Ok(t)
    }

    fn record(&mut self, r: Realization) {
        if r.side == Side::Right {
            self.right_index
                .entry(r.pattern.clone())
                .or_insert(self.realizations.len());
        }
        self.realizations.push(r);
    }

    /// Shortlex search from `max(cursor, least element of length min_len)` for
    /// a candidate whose window (built by `window`) avoids all pinned keys.
    /// Advances the cursor past the accepted candidate.
    pub(crate) fn next_fresh(
        &mut self,
        min_len: usize,
        mut window: impl FnMut(&AmbientElement, &dyn Fn(&AmbientElement) -> bool) -> Option<Vec<AmbientElement>>,
    ) -> Result<(AmbientElement, Vec<AmbientElement>)> {
        let floor = self.ambient.least_of_length(min_len.max(1));
        let start = if self.cursor > floor {
            self.cursor.clone()
        } else {
            floor
        };
        let pinned = &self.pinned;
        let is_pinned = |x: &AmbientElement| pinned.contains_key(x);
        for candidate in self.ambient.shortlex_from(start) {
            if candidate.word_length() > self.limits.max_translate_len {
                return Err(Error::Capacity {
                    what: "fresh translate length".into(),
                    limit: self.limits.max_translate_len,
                });
            }
            if let Some(w) = window(&candidate, &is_pinned) {
                self.cursor = self.ambient.successor(&candidate);
                return Ok((candidate, w));
            }
        }
        unreachable!("shortlex enumeration of an infinite group never ends")
    }

    /// Finds `h` with `f·h ∈ S ⟺ f ∈ included` for every `f ∈ window`, and
    /// `avoid(h)` false. Reuses a logged right realization of the normalized
    /// pattern when one fits, otherwise realizes a new one.
    pub(crate) fn realize_firing(
        &mut self,
        window: &[AmbientElement],
        included: &[AmbientElement],
        avoid: impl Fn(&AmbientElement) -> bool,
    ) -> Result<AmbientElement> {
        let Some(least) = window.iter().min() else {
            return Err(Error::Usage("firing pattern with empty window".into()));
        };
        // normalize by right translation so that the least element becomes 1
        let c = least.inverse();
        let pattern = Pattern::new(
            included.iter().map(|x| x * &c).collect(),
            window.iter().map(|x| x * &c).collect(),
        )?;
        if let Some(&i) = self.right_index.get(&pattern) {
            let h = &c * &self.realizations[i].witness.inverse();
            if !avoid(&h) {
                return Ok(h);
            }
        }
        loop {
            let g = self.realize_right(&pattern)?;
            let h = &c * &g.inverse();
            if !avoid(&h) {
                return Ok(h);
            }
        }
    }

    /// Re-verifies a realization against pinned bits only (unpinned counts as failure).
    pub fn realization_holds(&self, r: &Realization) -> bool {
        !r.witness.is_identity()
            && self
                .window_of(r)
                .iter()
                .all(|(x, v)| self.pinned_value(x) == Some(*v))
    }

    /// Frontier bound and realization log.
    pub fn check_invariants(&self) -> Result<()> {
        if let Some(k) = self.pinned.keys().find(|k| k.word_length() > self.frontier) {
            return Err(Error::State(format!("pinned key {k} lies beyond the frontier")));
        }
        if let Some(r) = self.realizations.iter().find(|r| !self.realization_holds(r)) {
            return Err(Error::State(format!("realization with witness {} fails", r.witness)));
        }
        Ok(())
    }

    /// The oracle of `S` itself.
    pub fn view(&mut self) -> SubsetView<'_> {
        let e = self.ambient.identity();
        self.translate(e)
    }

    /// The oracle of the translate `hS`: `x ∈ hS ⟺ h⁻¹x ∈ S`.
    pub fn translate(&mut self, h: AmbientElement) -> SubsetView<'_> {
        let shift_inv = h.inverse();
        SubsetView {
            subset: self,
            shift: h,
            shift_inv,
        }
    }

    /// A read-only oracle that answers `fallback` off the pinned set.
    pub fn frozen(&self, shift: &AmbientElement, fallback: Fallback) -> FrozenView<'_> {
        FrozenView {
            subset: self,
            shift_inv: shift.inverse(),
            fallback,
        }
    }
}

/// Membership in a translate `hS` of a forced subset, pinning on read.
pub struct SubsetView<'a> {
    subset: &'a mut ForcedSubset,
    shift: AmbientElement,
    shift_inv: AmbientElement,
}

impl SubsetView<'_> {
    pub fn ambient(&self) -> Ambient {
        self.subset.ambient
    }

    pub fn shift(&self) -> &AmbientElement {
        &self.shift
    }

    pub fn subset(&self) -> &ForcedSubset {
        self.subset
    }

    fn to_base(&self, x: &AmbientElement) -> AmbientElement {
        &self.shift_inv * x
    }

    pub fn pinned_value(&self, x: &AmbientElement) -> Option<bool> {
        self.subset.pinned_value(&self.to_base(x))
    }

    /// `h` with `f·h ∈ hS ⟺ f ∈ included` on `window`, avoiding `avoid`.
    pub fn realize_firing(
        &mut self,
        window: &[AmbientElement],
        included: &[AmbientElement],
        avoid: impl Fn(&AmbientElement) -> bool,
    ) -> Result<AmbientElement> {
        let window: Vec<_> = window.iter().map(|x| self.to_base(x)).collect();
        let included: Vec<_> = included.iter().map(|x| self.to_base(x)).collect();
        self.subset.realize_firing(&window, &included, avoid)
    }

    pub fn limits(&self) -> Limits {
        self.subset.limits
    }
}

impl Membership for SubsetView<'_> {
    fn contains(&mut self, x: &AmbientElement) -> bool {
        if self.shift.is_identity() {
            self.subset.query(x)
        } else {
            let y = self.to_base(x);
            self.subset.query(&y)
        }
    }
}

impl Membership for ForcedSubset {
    fn contains(&mut self, x: &AmbientElement) -> bool {
        self.query(x)
    }
}

impl Membership for &mut ForcedSubset {
    fn contains(&mut self, x: &AmbientElement) -> bool {
        self.query(x)
    }
}

impl Membership for &mut SubsetView<'_> {
    fn contains(&mut self, x: &AmbientElement) -> bool {
        (**self).contains(x)
    }
}

/// How a [`FrozenView`] answers for unpinned elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fallback {
    /// The default extension: unpinned means absent.
    False,
    /// A pseudo-random extension determined by the seed.
    Hashed(u64),
}

/// Read-only membership in a translate of some extension of a forced subset.
pub struct FrozenView<'a> {
    subset: &'a ForcedSubset,
    shift_inv: AmbientElement,
    fallback: Fallback,
}

impl FrozenView<'_> {
    pub fn value(&self, x: &AmbientElement) -> bool {
        let y = &self.shift_inv * x;
        match self.subset.pinned_value(&y) {
            Some(v) => v,
            None => match self.fallback {
                Fallback::False => false,
                Fallback::Hashed(seed) => {
                    let mut hasher = DefaultHasher::new();
                    seed.hash(&mut hasher);
                    y.hash(&mut hasher);
                    hasher.finish() & 1 == 1
                }
            },
        }
    }
}

impl Membership for FrozenView<'_> {
    fn contains(&mut self, x: &AmbientElement) -> bool {
        self.value(x)
    }
}

/// Finite witness for topological transitivity of the left (or right)
/// action on `2^H`: a translate `h` moving the window of `U` off the window
/// of `V`, and the set `R = hE_U ∪ E_V` (resp. `E_U·h ∪ E_V`) described on
/// its support `hF_U ∪ F_V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitivityWitness {
    pub side: Side,
    pub h: AmbientElement,
    pub r_pattern: Pattern,
}

fn act(side: Side, h: &AmbientElement, f: &AmbientElement) -> AmbientElement {
    match side {
        Side::Left => h * f,
        Side::Right => f * h,
    }
}

/// The shortlex-least `h` with `h·F_U ∩ F_V = ∅` (or `F_U·h ∩ F_V = ∅`), and `R`.
pub fn transitivity_witness(ambient: Ambient, su: &Pattern, tv: &Pattern, side: Side) -> TransitivityWitness {
    let h = ambient
        .shortlex_from(ambient.identity())
        .find(|h| su.window().iter().all(|f| !tv.covers(&act(side, h, f))))
        .expect("an infinite group always has such a translate");
    let moved = su.window().iter().map(|f| act(side, &h, f));
    let included = su
        .included()
        .iter()
        .map(|f| act(side, &h, f))
        .chain(tv.included().iter().cloned())
        .collect();
    let window = moved.chain(tv.window().iter().cloned()).collect();
    let r_pattern = Pattern::new(included, window).expect("hE_U ⊆ hF_U and E_V ⊆ F_V");
    TransitivityWitness { side, h, r_pattern }
}

impl TransitivityWitness {
    /// Checks disjointness, `h⁻¹R ∩ F_U = E_U` and `R ∩ F_V = E_V` on the supports.
    pub fn verify(&self, su: &Pattern, tv: &Pattern) -> bool {
        let disjoint = su
            .window()
            .iter()
            .all(|f| !tv.covers(&act(self.side, &self.h, f)));
        let left_identity = su.entries().all(|(f, v)| {
            let x = act(self.side, &self.h, f);
            self.r_pattern.covers(&x) && self.r_pattern.contains(&x) == v
        });
        let right_identity = tv
            .entries()
            .all(|(f, v)| self.r_pattern.covers(f) && self.r_pattern.contains(f) == v);
        disjoint && left_identity && right_identity
    }
}

impl Membership for &FrozenView<'_> {
    fn contains(&mut self, x: &AmbientElement) -> bool {
        self.value(x)
    }
}
