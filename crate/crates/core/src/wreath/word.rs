use std::cmp::Ordering;
use std::fmt;

use crate::error::ParseError;
use crate::groups::{parse_x_token, split_exponent, tokens, AmbientElement};

/// One marked generator: `x_i` (0-based index), `ā` or `b̄`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    X(u8),
    A,
    B,
}

/// A generator with exponent ±1. The derived order is the marked-word letter
/// order `x1 < x1^-1 < x2 < ... < a < a^-1 < b < b^-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: Generator,
    pub inverse: bool,
}

impl Letter {
    pub const fn new(generator: Generator, inverse: bool) -> Self {
        Self { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Self {
            inverse: !self.inverse,
            ..self
        }
    }

    /// All `2(n+2)` signed letters for `n` ambient generators, in letter order.
    pub fn alphabet(rank: usize) -> Vec<Letter> {
        (0..rank as u8)
            .map(Generator::X)
            .chain([Generator::A, Generator::B])
            .flat_map(|g| [Letter::new(g, false), Letter::new(g, true)])
            .collect()
    }

    /// Position of this letter in [`Letter::alphabet`].
    pub fn index(self, rank: usize) -> usize {
        let g = match self.generator {
            Generator::X(i) => i as usize,
            Generator::A => rank,
            Generator::B => rank + 1,
        };
        2 * g + usize::from(self.inverse)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.generator {
            Generator::X(i) => write!(f, "x{}", i + 1)?,
            Generator::A => f.write_str("a")?,
            Generator::B => f.write_str("b")?,
        }
        if self.inverse {
            f.write_str("^-1")?;
        }
        Ok(())
    }
}

/// A word over `Y^{±1}` with `Y = (x_1, ..., x_n, ā, b̄)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MarkedWord {
    letters: Vec<Letter>,
}

impl MarkedWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        Self { letters }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn push(&mut self, letter: Letter) {
        self.letters.push(letter);
    }

    pub fn with(&self, letter: Letter) -> Self {
        let mut w = self.clone();
        w.push(letter);
        w
    }

    pub fn concat(&self, other: &MarkedWord) -> Self {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Self { letters }
    }

    /// The formal inverse: letters reversed and inverted.
    pub fn inverse(&self) -> Self {
        Self {
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    /// Free reduction (cancels adjacent `ℓ ℓ⁻¹`).
    pub fn reduced(&self) -> Self {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Self { letters: out }
    }

    /// The geodesic spelling of an ambient element in the `x_i`.
    pub fn from_ambient(h: &AmbientElement) -> Self {
        Self {
            letters: h
                .letters()
                .into_iter()
                .map(|(i, inv)| Letter::new(Generator::X(i as u8), inv))
                .collect(),
        }
    }

    /// `s⁻¹ b s a s⁻¹ b⁻¹ s a⁻¹`, the commutator of `s⁻¹ b̄ s` with `ā`.
    pub fn commutator_probe(s: &AmbientElement) -> Self {
        let s_word = Self::from_ambient(s);
        let s_inv = s_word.inverse();
        let a = Letter::new(Generator::A, false);
        let b = Letter::new(Generator::B, false);
        let mut w = Self::empty();
        for (prefix, letter) in [(&s_inv, b), (&s_word, a), (&s_inv, b.inv()), (&s_word, a.inv())] {
            w.letters.extend_from_slice(&prefix.letters);
            w.push(letter);
        }
        w
    }

    /// Parses `x<i>`, `a`, `b` tokens with optional `^-1`; `e` is the empty word.
    pub fn parse(text: &str, rank: usize) -> Result<Self, ParseError> {
        if text.trim() == "e" {
            return Ok(Self::empty());
        }
        let mut letters = Vec::new();
        for (column, token) in tokens(text) {
            let (body, inverse) = split_exponent(token, column)?;
            let generator = match body {
                "a" => Generator::A,
                "b" => Generator::B,
                _ => Generator::X(parse_x_token(token, column, rank)?.0 as u8),
            };
            letters.push(Letter::new(generator, inverse));
        }
        if letters.is_empty() {
            return Err(ParseError::new(1, "empty word (write `e` for the empty word)"));
        }
        Ok(Self { letters })
    }
}

impl Ord for MarkedWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for MarkedWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MarkedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("e");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Ambient;

    #[test]
    fn parse_examples() {
        assert_eq!(MarkedWord::parse("x1 b^-1 a", 2).unwrap().len(), 3);
        assert!(MarkedWord::parse("e", 2).unwrap().is_empty());
        let err = MarkedWord::parse("x0", 2).unwrap_err();
        assert_eq!(err.column, 1);
        let err = MarkedWord::parse("a x3", 2).unwrap_err();
        assert_eq!(err.column, 3);
        assert!(MarkedWord::parse("c", 2).is_err());
        assert!(MarkedWord::parse("a^2", 2).is_err());
    }

    #[test]
    fn display_round_trip() {
        for text in ["e", "x1 b^-1 a", "x2^-1 x2^-1 b a^-1"] {
            assert_eq!(MarkedWord::parse(text, 2).unwrap().to_string(), text);
        }
    }

    #[test]
    fn alphabet_order_and_indices() {
        let alpha = Letter::alphabet(2);
        let shown: Vec<String> = alpha.iter().map(|l| l.to_string()).collect();
        assert_eq!(shown, ["x1", "x1^-1", "x2", "x2^-1", "a", "a^-1", "b", "b^-1"]);
        assert!(alpha.windows(2).all(|w| w[0] < w[1]));
        for (i, l) in alpha.iter().enumerate() {
            assert_eq!(l.index(2), i);
        }
    }

    #[test]
    fn inverse_and_reduction() {
        let w = MarkedWord::parse("x1 a b^-1", 2).unwrap();
        assert_eq!(w.inverse().to_string(), "b a^-1 x1^-1");
        assert!(w.concat(&w.inverse()).reduced().is_empty());
    }

    #[test]
    fn commutator_probe_spelling() {
        let h = Ambient::free(2).unwrap();
        let s = h.parse_element("x1 x2").unwrap();
        assert_eq!(
            MarkedWord::commutator_probe(&s).to_string(),
            "x2^-1 x1^-1 b x1 x2 a x2^-1 x1^-1 b^-1 x1 x2 a^-1"
        );
        let z = Ambient::zd(2).unwrap();
        let p = z.parse_element("(2,-1)").unwrap();
        assert_eq!(MarkedWord::from_ambient(&p).to_string(), "x1 x1 x2^-1");
    }

    #[test]
    fn shortlex_order() {
        let w = |s| MarkedWord::parse(s, 2).unwrap();
        assert!(w("b") < w("x1 x1"));
        assert!(w("x1 a") < w("x1^-1 a"));
        assert!(w("e") < w("x1"));
    }
}
