use std::fmt;

use crate::forcing::Membership;
use crate::groups::{Ambient, AmbientElement, FiniteGroupTable};

use super::word::{Generator, MarkedWord};

/// Which non-ambient generator a factor carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Lamp {
    A,
    B,
}

/// `c·g^exp·c⁻¹` with `g ∈ {ā, b̄}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub conjugator: AmbientElement,
    pub lamp: Lamp,
    pub exp: i64,
}

/// A marked word rewritten as `(∏ c_j g_j^{ε_j} c_j⁻¹)·t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollectedForm {
    pub factors: Vec<Factor>,
    pub tail: AmbientElement,
}

/// Rewrites `w`: each `ā`/`b̄` letter is conjugated by the product of the
/// ambient letters before it; the ambient letters themselves form the tail.
/// Consecutive factors with equal conjugator and generator are merged and
/// zero exponents dropped.
pub fn collect(w: &MarkedWord, ambient: Ambient) -> CollectedForm {
    let mut prefix = ambient.identity();
    let mut factors: Vec<Factor> = Vec::new();
    for l in w.letters() {
        let lamp = match l.generator {
            Generator::X(i) => {
                prefix.push_generator(i as usize, l.inverse);
                continue;
            }
            Generator::A => Lamp::A,
            Generator::B => Lamp::B,
        };
        let exp = if l.inverse { -1 } else { 1 };
        match factors.last_mut() {
            Some(last) if last.lamp == lamp && last.conjugator == prefix => {
                last.exp += exp;
                if last.exp == 0 {
                    factors.pop();
                }
            }
            _ => factors.push(Factor {
                conjugator: prefix.clone(),
                lamp,
                exp,
            }),
        }
    }
    CollectedForm {
        factors,
        tail: prefix,
    }
}

/// One class of `b̄`-factors sharing a conjugator `v`, with exponent sum `σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BClass {
    pub conjugator: AmbientElement,
    pub members: Vec<usize>,
    pub sum: i64,
}

/// The `b̄`-factors grouped by equal conjugator, in order of first appearance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassPartition {
    pub classes: Vec<BClass>,
}

impl CollectedForm {
    /// Partition of the `b̄`-factor indices (indices into `factors`).
    pub fn b_classes(&self) -> ClassPartition {
        let mut classes: Vec<BClass> = Vec::new();
        for (i, f) in self.factors.iter().enumerate() {
            if f.lamp != Lamp::B {
                continue;
            }
            match classes.iter_mut().find(|c| c.conjugator == f.conjugator) {
                Some(c) => {
                    c.members.push(i);
                    c.sum += f.exp;
                }
                None => classes.push(BClass {
                    conjugator: f.conjugator.clone(),
                    members: vec![i],
                    sum: f.exp,
                }),
            }
        }
        ClassPartition { classes }
    }

    /// Distinct `ā`-factor conjugators, in order of first appearance.
    pub fn a_points(&self) -> Vec<AmbientElement> {
        let mut out: Vec<AmbientElement> = Vec::new();
        for f in &self.factors {
            if f.lamp == Lamp::A && !out.contains(&f.conjugator) {
                out.push(f.conjugator.clone());
            }
        }
        out
    }

    /// Largest conjugator length.
    pub fn reach(&self) -> usize {
        self.factors
            .iter()
            .map(|f| f.conjugator.word_length())
            .max()
            .unwrap_or(0)
    }

    /// The value at `h` of the function part: the left-to-right product of
    /// `ā^α(u⁻¹h)` and `b̄_S^β(v⁻¹h)` over the factors. Queries `S` at `v⁻¹h`.
    pub fn evaluate_at(
        &self,
        table: &FiniteGroupTable,
        subset: &mut impl Membership,
        h: &AmbientElement,
    ) -> usize {
        let mut value = table.id();
        for f in &self.factors {
            let fires = match f.lamp {
                Lamp::A => f.conjugator == *h,
                Lamp::B => subset.contains(&(&f.conjugator.inverse() * h)),
            };
            if fires {
                let g = match f.lamp {
                    Lamp::A => table.gen_a(),
                    Lamp::B => table.gen_b(),
                };
                value = table.mul(value, table.power(g, f.exp));
            }
        }
        value
    }
}

impl fmt::Display for CollectedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            let lamp = match factor.lamp {
                Lamp::A => "A",
                Lamp::B => "B",
            };
            write!(f, "({}, {lamp}, {:+})", factor.conjugator, factor.exp)?;
        }
        write!(f, "] tail {}", self.tail)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (Ambient, FiniteGroupTable) {
        (Ambient::free(2).unwrap(), FiniteGroupTable::preset("s3").unwrap())
    }

    fn cf(text: &str) -> CollectedForm {
        collect(&MarkedWord::parse(text, 2).unwrap(), Ambient::free(2).unwrap())
    }

    #[test]
    fn collect_examples() {
        assert_eq!(cf("x1").to_string(), "[] tail x1");
        assert_eq!(cf("a x1 b x1^-1").to_string(), "[(e, A, +1), (x1, B, +1)] tail e");
        assert_eq!(cf("x1 a x1^-1 x1 b").to_string(), "[(x1, A, +1), (x1, B, +1)] tail x1");
    }

    #[test]
    fn merging_drops_cancelled_factors() {
        assert_eq!(cf("b x1 x1^-1 b^-1 a").to_string(), "[(e, A, +1)] tail e");
        assert_eq!(cf("b b").to_string(), "[(e, B, +2)] tail e");
        // re-merge after a cancellation exposes equal neighbours
        assert_eq!(cf("a b b^-1 a").to_string(), "[(e, A, +2)] tail e");
    }

    #[test]
    fn classes_and_points() {
        let c = cf("x1 b x1^-1 b a x1 b^-1 a");
        let p = c.b_classes();
        assert_eq!(p.classes.len(), 2);
        assert_eq!(p.classes[0].sum, 0);
        assert_eq!(p.classes[0].members.len(), 2);
        assert_eq!(p.classes[1].sum, 1);
        assert_eq!(c.a_points().len(), 2);
    }

    #[test]
    fn evaluation_examples() {
        let (h, t) = setup();
        let mut nobody = |_: &AmbientElement| false;
        let e = h.identity();
        let x1 = h.parse_element("x1").unwrap();
        assert_eq!(cf("a").evaluate_at(&t, &mut nobody, &e), t.gen_a());
        assert_eq!(cf("a").evaluate_at(&t, &mut nobody, &x1), t.id());
        let mut identity_in = |x: &AmbientElement| x.is_identity();
        let v = cf("a b a^-1 b^-1").evaluate_at(&t, &mut identity_in, &e);
        let expected = t.mul(t.mul(t.mul(t.gen_a(), t.gen_b()), t.inv(t.gen_a())), t.inv(t.gen_b()));
        assert_eq!(v, expected);
        assert_ne!(v, t.id());
    }
}
