use std::collections::HashMap;

use crate::forcing::Membership;
use crate::groups::{Ambient, AmbientElement, BallSpec, FiniteGroupTable};

use super::word::{Generator, Letter, MarkedWord};

/// An element `(f, t)` of `B Wr H` with `f` known on a finite window only.
/// Points outside the window are undetermined, not trivial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowElement {
    values: HashMap<AmbientElement, usize>,
    tail: AmbientElement,
    window_radius: usize,
}

impl WindowElement {
    fn from_values(values: HashMap<AmbientElement, usize>, tail: AmbientElement) -> Self {
        let window_radius = values.keys().map(|x| x.word_length()).max().unwrap_or(0);
        Self {
            values,
            tail,
            window_radius,
        }
    }

    /// The identity of `W`, known on `points`.
    pub fn identity(ambient: Ambient, table: &FiniteGroupTable, points: impl IntoIterator<Item = AmbientElement>) -> Self {
        let values = points.into_iter().map(|x| (x, table.id())).collect();
        Self::from_values(values, ambient.identity())
    }

    /// A single marked generator on `points`: `x_i` is `(1, x_i)`, `ā` is the
    /// delta at `1` with value `a`, `b̄_S` is `b` on `S`.
    pub fn of_letter(
        letter: Letter,
        ambient: Ambient,
        table: &FiniteGroupTable,
        subset: &mut impl Membership,
        points: impl IntoIterator<Item = AmbientElement>,
    ) -> Self {
        let mut tail = ambient.identity();
        let values = points
            .into_iter()
            .map(|x| {
                let v = match letter.generator {
                    Generator::X(_) => table.id(),
                    Generator::A if x.is_identity() => table.gen_a(),
                    Generator::A => table.id(),
                    Generator::B if subset.contains(&x) => table.gen_b(),
                    Generator::B => table.id(),
                };
                let v = if letter.inverse { table.inv(v) } else { v };
                (x, v)
            })
            .collect();
        if let Generator::X(i) = letter.generator {
            tail.push_generator(i as usize, letter.inverse);
        }
        Self::from_values(values, tail)
    }

    /// `(f₁, t₁)(f₂, t₂) = (x ↦ f₁(x)·f₂(t₁⁻¹x), t₁t₂)`, on the points where both are known.
    pub fn mul(&self, other: &Self, table: &FiniteGroupTable) -> Self {
        let t_inv = self.tail.inverse();
        let values = self
            .values
            .iter()
            .filter_map(|(x, &v)| {
                other
                    .values
                    .get(&(&t_inv * x))
                    .map(|&w| (x.clone(), table.mul(v, w)))
            })
            .collect();
        Self::from_values(values, &self.tail * &other.tail)
    }

    /// Letter-by-letter product of `w`, with each letter's window shifted so
    /// that the result is known on all of `ball`.
    pub fn of_word(
        w: &MarkedWord,
        ambient: Ambient,
        table: &FiniteGroupTable,
        subset: &mut impl Membership,
        ball: &BallSpec,
    ) -> Self {
        let mut acc = Self::identity(ambient, table, ball.iter().cloned());
        for &l in w.letters() {
            let prefix_inv = acc.tail.inverse();
            let points = ball.iter().map(|x| &prefix_inv * x);
            let step = Self::of_letter(l, ambient, table, subset, points);
            acc = acc.mul(&step, table);
        }
        acc
    }

    pub fn value(&self, x: &AmbientElement) -> Option<usize> {
        self.values.get(x).copied()
    }

    pub fn tail(&self) -> &AmbientElement {
        &self.tail
    }

    pub fn window_radius(&self) -> usize {
        self.window_radius
    }

    pub fn support_len(&self) -> usize {
        self.values.len()
    }

    /// Restriction to the points of `ball` (points unknown here stay unknown).
    pub fn restrict(&self, ball: &BallSpec) -> Self {
        let values = ball
            .iter()
            .filter_map(|x| self.values.get(x).map(|&v| (x.clone(), v)))
            .collect();
        Self::from_values(values, self.tail.clone())
    }
}
