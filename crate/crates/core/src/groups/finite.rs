//! The finite non-abelian group `B` as an explicit multiplication table,
//! together with the chosen non-commuting pair `a, b`.
//!
//! Convention: `mul(g, h)` is the product `g·h` ("g then h"); row is the left factor.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};

pub const MAX_TABLE_ORDER: usize = 64;

/// The raw, unvalidated contents of a table file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableData {
    pub mul: Vec<Vec<usize>>,
    pub id: usize,
    pub a: usize,
    pub b: usize,
}

/// First violated axiom found by [`validate_table`].
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TableDiagnostic {
    #[error("empty table")]
    Empty,
    #[error("order {0} exceeds the maximum of {MAX_TABLE_ORDER}")]
    TooLarge(usize),
    #[error("row {row} has {len} entries, expected {order}")]
    Shape { row: usize, len: usize, order: usize },
    #[error("entry ({row},{col}) = {value} is not an element index")]
    IndexOutOfRange { row: usize, col: usize, value: usize },
    #[error("identity index {0} out of range")]
    IdentityOutOfRange(usize),
    #[error("{id} is not a two-sided identity: fails at element {x}")]
    NotIdentity { id: usize, x: usize },
    #[error("element {x} has no two-sided inverse")]
    NoInverse { x: usize },
    #[error("associativity fails on the triple ({x},{y},{z})")]
    NonAssociative { x: usize, y: usize, z: usize },
    #[error("generator {which} = {index} is not an element index")]
    GeneratorOutOfRange { which: char, index: usize },
    #[error("the group is abelian")]
    Abelian,
    #[error("the chosen pair a = {a}, b = {b} commutes")]
    CommutingPair { a: usize, b: usize },
}

/// A validated finite group with a non-commuting marked pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupTable {
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    orders: Vec<usize>,
    id: usize,
    gen_a: usize,
    gen_b: usize,
}

/// Checks every group axiom plus the non-commuting choice of `a, b`,
/// reporting the first violation with a witness.
pub fn validate_table(t: &TableData) -> Result<(), TableDiagnostic> {
    let n = t.mul.len();
    if n == 0 {
        return Err(TableDiagnostic::Empty);
    }
    if n > MAX_TABLE_ORDER {
        return Err(TableDiagnostic::TooLarge(n));
    }
    for (row, entries) in t.mul.iter().enumerate() {
        if entries.len() != n {
            return Err(TableDiagnostic::Shape { row, len: entries.len(), order: n });
        }
        if let Some((col, &value)) = entries.iter().enumerate().find(|(_, &v)| v >= n) {
            return Err(TableDiagnostic::IndexOutOfRange { row, col, value });
        }
    }
    let m = |x: usize, y: usize| t.mul[x][y];
    if t.id >= n {
        return Err(TableDiagnostic::IdentityOutOfRange(t.id));
    }
    if let Some(x) = (0..n).find(|&x| m(t.id, x) != x || m(x, t.id) != x) {
        return Err(TableDiagnostic::NotIdentity { id: t.id, x });
    }
    for x in 0..n {
        if !(0..n).any(|y| m(x, y) == t.id && m(y, x) == t.id) {
            return Err(TableDiagnostic::NoInverse { x });
        }
    }
    for x in 0..n {
        for y in 0..n {
            let xy = m(x, y);
            for z in 0..n {
                if m(xy, z) != m(x, m(y, z)) {
                    return Err(TableDiagnostic::NonAssociative { x, y, z });
                }
            }
        }
    }
    if t.a >= n {
        return Err(TableDiagnostic::GeneratorOutOfRange { which: 'a', index: t.a });
    }
    if t.b >= n {
        return Err(TableDiagnostic::GeneratorOutOfRange { which: 'b', index: t.b });
    }
    if (0..n).all(|x| (0..n).all(|y| m(x, y) == m(y, x))) {
        return Err(TableDiagnostic::Abelian);
    }
    if m(t.a, t.b) == m(t.b, t.a) {
        return Err(TableDiagnostic::CommutingPair { a: t.a, b: t.b });
    }
    Ok(())
}

impl FiniteGroupTable {
    pub fn new(data: &TableData) -> Result<Self, TableDiagnostic> {
        validate_table(data)?;
        let n = data.mul.len();
        let mul: Vec<usize> = data.mul.iter().flatten().copied().collect();
        let inv = (0..n)
            .map(|x| (0..n).find(|&y| mul[x * n + y] == data.id).expect("validated"))
            .collect();
        let orders = (0..n)
            .map(|x| {
                let mut acc = x;
                let mut k = 1;
                while acc != data.id {
                    acc = mul[acc * n + x];
                    k += 1;
                }
                k
            })
            .collect();
        Ok(Self {
            order: n,
            mul,
            inv,
            orders,
            id: data.id,
            gen_a: data.a,
            gen_b: data.b,
        })
    }

    /// One of the built-in presets `s3`, `d4`, `q8`.
    pub fn preset(name: &str) -> Option<Self> {
        let data = match name {
            "s3" => s3(),
            "d4" => d4(),
            "q8" => q8(),
            _ => return None,
        };
        Some(Self::new(&data).expect("presets are valid"))
    }

    pub const PRESETS: [&'static str; 3] = ["s3", "d4", "q8"];

    /// Same group with a different marked pair.
    pub fn with_generators(&self, a: usize, b: usize) -> Result<Self, TableDiagnostic> {
        let mut data = self.data();
        data.a = a;
        data.b = b;
        Self::new(&data)
    }

    pub fn data(&self) -> TableData {
        TableData {
            mul: self.mul.chunks(self.order).map(|r| r.to_vec()).collect(),
            id: self.id,
            a: self.gen_a,
            b: self.gen_b,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn gen_a(&self) -> usize {
        self.gen_a
    }

    pub fn gen_b(&self) -> usize {
        self.gen_b
    }

    #[inline]
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.mul[g * self.order + h]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inv[g]
    }

    pub fn element_order(&self, g: usize) -> usize {
        self.orders[g]
    }

    /// `g^e`; negative exponents go through the inverse table.
    pub fn power(&self, g: usize, e: i64) -> usize {
        let base = if e < 0 { self.inv[g] } else { g };
        let k = e.unsigned_abs() % self.orders[g] as u64;
        (0..k).fold(self.id, |acc, _| self.mul(acc, base))
    }
}

impl fmt::Display for TableData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "order {}", self.mul.len())?;
        for row in &self.mul {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        writeln!(f, "id {}", self.id)?;
        writeln!(f, "a {}", self.a)?;
        writeln!(f, "b {}", self.b)
    }
}

impl FromStr for TableData {
    type Err = Error;

    /// Table file: `order k`, `k` rows of `k` indices, then `id i`, `a j`, `b l`.
    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let bad = |line: usize, msg: &str| Error::Usage(format!("table file line {line}: {msg}"));
        let keyed = |entry: Option<(usize, &str)>, key: &str| -> Result<usize> {
            let (line, text) = entry.ok_or_else(|| Error::Usage(format!("table file: missing `{key}` line")))?;
            let value = text
                .strip_prefix(key)
                .and_then(|rest| rest.trim().parse().ok())
                .ok_or_else(|| bad(line, &format!("expected `{key} <index>`")))?;
            Ok(value)
        };
        let order = keyed(lines.next(), "order")?;
        let mut mul = Vec::with_capacity(order);
        for _ in 0..order {
            let (line, text) = lines
                .next()
                .ok_or_else(|| Error::Usage("table file: too few rows".into()))?;
            let row = text
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| bad(line, "row entries must be non-negative integers"))?;
            mul.push(row);
        }
        let id = keyed(lines.next(), "id")?;
        let a = keyed(lines.next(), "a")?;
        let b = keyed(lines.next(), "b")?;
        if let Some((line, _)) = lines.next() {
            return Err(bad(line, "unexpected trailing content"));
        }
        Ok(TableData { mul, id, a, b })
    }
}

/// Multiplication table of the permutation group generated by `gens`,
/// elements sorted lexicographically (so the identity is index 0).
fn permutation_group(gens: &[Vec<usize>]) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let degree = gens[0].len();
    // "g then h": (g·h)(x) = h(g(x))
    let then = |g: &[usize], h: &[usize]| -> Vec<usize> { (0..degree).map(|x| h[g[x]]).collect() };
    let mut elements: Vec<Vec<usize>> = vec![(0..degree).collect()];
    let mut frontier = elements.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for g in &frontier {
            for s in gens {
                let p = then(g, s);
                if !elements.contains(&p) {
                    elements.push(p.clone());
                    next.push(p);
                }
            }
        }
        frontier = next;
    }
    elements.sort();
    let index = |p: &Vec<usize>| elements.iter().position(|q| q == p).unwrap();
    let mul = elements
        .iter()
        .map(|g| elements.iter().map(|h| index(&then(g, h))).collect())
        .collect();
    (elements, mul)
}

fn s3() -> TableData {
    let a = vec![1, 0, 2]; // (1 2)
    let b = vec![0, 2, 1]; // (2 3)
    let (elements, mul) = permutation_group(&[a.clone(), b.clone()]);
    let pos = |p: &Vec<usize>| elements.iter().position(|q| q == p).unwrap();
    TableData { id: 0, a: pos(&a), b: pos(&b), mul }
}

fn d4() -> TableData {
    let reflection = vec![0, 3, 2, 1];
    let rotation = vec![1, 2, 3, 0];
    let (elements, mul) = permutation_group(&[reflection.clone(), rotation.clone()]);
    let pos = |p: &Vec<usize>| elements.iter().position(|q| q == p).unwrap();
    TableData { id: 0, a: pos(&reflection), b: pos(&rotation), mul }
}

fn q8() -> TableData {
    // index = 2*unit + negative, units 1, i, j, k
    const UNIT: [[(usize, bool); 4]; 4] = [
        [(0, false), (1, false), (2, false), (3, false)],
        [(1, false), (0, true), (3, false), (2, true)],
        [(2, false), (3, true), (0, true), (1, false)],
        [(3, false), (2, false), (1, true), (0, true)],
    ];
    let mul = (0..8)
        .map(|x: usize| {
            (0..8)
                .map(|y: usize| {
                    let (u, neg) = UNIT[x / 2][y / 2];
                    let sign = neg ^ (x % 2 == 1) ^ (y % 2 == 1);
                    2 * u + usize::from(sign)
                })
                .collect()
        })
        .collect();
    TableData { id: 0, a: 2, b: 4, mul }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> TableData {
        TableData {
            mul: (0..n).map(|x| (0..n).map(|y| (x + y) % n).collect()).collect(),
            id: 0,
            a: 1,
            b: 2,
        }
    }

    #[test]
    fn presets_validate() {
        for name in FiniteGroupTable::PRESETS {
            let t = FiniteGroupTable::preset(name).unwrap();
            assert!(validate_table(&t.data()).is_ok(), "{name}");
        }
        assert_eq!(FiniteGroupTable::preset("s3").unwrap().order(), 6);
        assert_eq!(FiniteGroupTable::preset("d4").unwrap().order(), 8);
        assert_eq!(FiniteGroupTable::preset("q8").unwrap().order(), 8);
        assert!(FiniteGroupTable::preset("a5").is_none());
    }

    #[test]
    fn s3_generators() {
        let t = FiniteGroupTable::preset("s3").unwrap();
        assert_eq!(t.element_order(t.gen_a()), 2);
        assert_eq!(t.element_order(t.gen_b()), 2);
        let ab = t.mul(t.gen_a(), t.gen_b());
        assert_eq!(t.element_order(ab), 3);
        assert_eq!(t.power(ab, 3), t.id());
        assert_ne!(t.power(ab, 1), t.id());
    }

    #[test]
    fn powers() {
        let t = FiniteGroupTable::preset("d4").unwrap();
        let r = t.gen_b();
        assert_eq!(t.element_order(r), 4);
        assert_eq!(t.power(r, 0), t.id());
        assert_eq!(t.power(r, -1), t.inv(r));
        assert_eq!(t.power(r, 5), r);
        assert_eq!(t.power(r, -3), r);
        assert_eq!(t.power(t.gen_b(), 2), t.mul(r, r));
    }

    #[test]
    fn power_of_order_is_identity() {
        for name in FiniteGroupTable::PRESETS {
            let t = FiniteGroupTable::preset(name).unwrap();
            for g in 0..t.order() {
                assert_eq!(t.power(g, t.element_order(g) as i64), t.id());
                assert_eq!(t.power(g, -(t.element_order(g) as i64)), t.id());
            }
        }
    }

    #[test]
    fn cyclic_group_is_abelian() {
        assert_eq!(validate_table(&cyclic(4)), Err(TableDiagnostic::Abelian));
    }

    #[test]
    fn broken_associativity_names_a_triple() {
        let mut data = FiniteGroupTable::preset("s3").unwrap().data();
        // swap two products in a row away from the identity
        data.mul[1].swap(2, 3);
        match validate_table(&data) {
            Err(TableDiagnostic::NonAssociative { x, y, z }) => {
                let m = |p: usize, q: usize| data.mul[p][q];
                assert_ne!(m(m(x, y), z), m(x, m(y, z)));
            }
            Err(TableDiagnostic::NoInverse { .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn commuting_choice_is_reported() {
        let mut data = FiniteGroupTable::preset("s3").unwrap().data();
        data.b = data.a;
        assert!(matches!(validate_table(&data), Err(TableDiagnostic::CommutingPair { .. })));
        data.b = 99;
        assert!(matches!(
            validate_table(&data),
            Err(TableDiagnostic::GeneratorOutOfRange { which: 'b', .. })
        ));
    }

    #[test]
    fn structural_errors() {
        let mut data = cyclic(3);
        data.mul[1].pop();
        assert!(matches!(validate_table(&data), Err(TableDiagnostic::Shape { row: 1, .. })));
        let mut data = cyclic(3);
        data.mul[2][2] = 7;
        assert!(matches!(validate_table(&data), Err(TableDiagnostic::IndexOutOfRange { .. })));
        let mut data = cyclic(3);
        data.id = 1;
        assert!(matches!(validate_table(&data), Err(TableDiagnostic::NotIdentity { .. })));
        let big = cyclic(65);
        assert_eq!(validate_table(&big), Err(TableDiagnostic::TooLarge(65)));
    }

    #[test]
    fn table_file_round_trip() {
        let data = FiniteGroupTable::preset("q8").unwrap().data();
        let text = data.to_string();
        assert!(text.starts_with("order 8\n"));
        assert_eq!(text.parse::<TableData>().unwrap(), data);
        assert!("order 2\n0 1\n".parse::<TableData>().is_err());
    }
}
