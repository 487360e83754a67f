//! The map `ξ`, distinctness witnesses, and condensation certificates: a
//! translate `hS` whose marked group agrees with `ξ(S)` on the radius-`r`
//! ball while being a different point of the space of marked groups.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forcing::{Fallback, ForcedSubset, Pattern};
use crate::groups::{Ambient, AmbientElement, BallSpec, FiniteGroupTable};
use crate::marked::{r_similar, MarkedPair, MarkedSpec, PairSide, Subsets};
use crate::wreath::{is_identity_window, MarkedWord, Verdict, WindowElement, WindowVerdict};

pub const TOOL_VERSION: &str = concat!("condense ", env!("CARGO_PKG_VERSION"));

/// Largest window ball on which [`distinguish`] re-runs the brute-force oracle.
pub const WINDOW_CHECK_BUDGET: usize = 200_000;

/// `ξ(S)` for the base subset, or `ξ(hS)` for a translate.
pub fn xi(ambient: Ambient, table: &FiniteGroupTable, translate: Option<&AmbientElement>) -> MarkedSpec {
    match translate {
        Some(h) => MarkedSpec::translated(ambient, table.clone(), h.clone()),
        None => MarkedSpec::xi(ambient, table.clone()),
    }
}

/// A point `s` in exactly one of the two subsets, and the word
/// `s⁻¹ b s a s⁻¹ b⁻¹ s a⁻¹` that is trivial in one marked group only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistinctnessWitness {
    pub s: AmbientElement,
    /// The side whose subset contains `s`.
    pub side: PairSide,
    pub word: MarkedWord,
}

/// Scans `Ball_H(search_radius)` in shortlex order for a point where the two
/// subsets differ and checks the resulting witness. `None` means
/// inconclusive: the subsets agree on the whole ball.
pub fn distinguish(pair: &mut MarkedPair<'_>, search_radius: usize) -> Result<Option<DistinctnessWitness>> {
    let ambient = pair.first.ambient();
    let cap = pair.side(PairSide::First).1.limits().ball_cap;
    let ball = ambient.ball(search_radius, cap)?;
    for s in ball.iter() {
        let first = pair.contains(PairSide::First, s);
        let second = pair.contains(PairSide::Second, s);
        if first != second {
            let side = if first { PairSide::First } else { PairSide::Second };
            return witness_at(pair, s, side).map(Some);
        }
    }
    Ok(None)
}

/// Builds the witness at `s`, which must lie in `side`'s subset only, and
/// checks it three ways: generic verdicts, letter-by-letter recomposition at
/// the identity, and (when `Ball_H(|s|+2)` is small) the window oracle.
pub fn witness_at(pair: &mut MarkedPair<'_>, s: &AmbientElement, side: PairSide) -> Result<DistinctnessWitness> {
    if !pair.contains(side, s) || pair.contains(side.other(), s) {
        return Err(Error::Verification(format!("{s} is not in the {side} subset only")));
    }
    let word = MarkedWord::commutator_probe(s);
    let ambient = pair.first.ambient();
    let table = pair.first.table().clone();
    let origin = BallSpec {
        radius: 0,
        elements: vec![ambient.identity()],
    };
    let radius = s.word_length() + 2;
    let brute = ambient.ball_size(radius).is_some_and(|n| n <= WINDOW_CHECK_BUDGET);
    for (current, nontrivial) in [(side, true), (side.other(), false)] {
        if pair.verdict(current, &word)?.is_identity() == nontrivial {
            return Err(Error::Verification(format!(
                "generic verdict on the {current} side does not separate at {s}"
            )));
        }
        let (spec, subset) = pair.side(current);
        let shift = spec.translate().clone();
        let mut view = subset.translate(shift.clone());
        let at_origin = WindowElement::of_word(&word, ambient, &table, &mut view, &origin);
        if (at_origin.value(&ambient.identity()) != Some(table.id())) != nontrivial {
            return Err(Error::Verification(format!(
                "recomposed value at the identity on the {current} side does not separate at {s}"
            )));
        }
        // a forced subset is only known on its pinned bits; every extension
        // must give the same answer, so the default one is checked
        if brute {
            let frozen = subset.frozen(&shift, Fallback::False);
            let v = is_identity_window(&word, ambient, &table, &frozen, radius, WINDOW_CHECK_BUDGET)?;
            if matches!(v, WindowVerdict::NonIdentity(_)) != nontrivial {
                return Err(Error::Verification(format!(
                    "window oracle on the {current} side does not separate at {s}"
                )));
            }
        }
    }
    Ok(DistinctnessWitness {
        s: s.clone(),
        side,
        word,
    })
}

/// A finite witness that `ξ(hS) ∈ U_{ξ(S)}(r) ∖ {ξ(S)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CondensationCertificate {
    pub r: usize,
    pub h: AmbientElement,
    /// `S ∩ Ball_H(4r)`, equal to `hS ∩ Ball_H(4r)`.
    pub agreement: Pattern,
    pub witness: DistinctnessWitness,
    /// Dumps of the radius-`r` balls of `ξ(S)` and `ξ(hS)`.
    pub ball_digest: [String; 2],
    pub tool_version: String,
}

/// Produces a certificate for radius `r ≥ 1` against the shared subset:
///
/// 1. snapshot `S ∩ Ball_H(4r)`;
/// 2. realize it on a fresh left translate, so `hS ∩ Ball(4r) = S ∩ Ball(4r)`;
/// 3. pin a fresh point `p ∈ S` with `hp ∉ S` and `|hp| > 4r`, so `s = hp ∈ hS ∖ S`;
/// 4. build both radius-`r` balls and require them to be equal;
/// 5. check the distinctness witness at `s`.
pub fn certify_condensed(
    subset: &mut ForcedSubset,
    table: &FiniteGroupTable,
    r: usize,
) -> Result<CondensationCertificate> {
    if r == 0 {
        return Err(Error::Usage("certificate radius must be at least 1".into()));
    }
    let ambient = subset.ambient();
    let window = 4 * r;
    let agreement = subset.snapshot(window)?;
    let h = subset.realize_left(&agreement)?;
    let p = inject_distinction(subset, &h, window)?;
    let s = &h * &p;
    let mut pair = MarkedPair::new(
        xi(ambient, table, None),
        xi(ambient, table, Some(&h)),
        Subsets::Shared(subset),
    )?;
    let base = pair.build_ball(PairSide::First, r)?;
    let moved = pair.build_ball(PairSide::Second, r)?;
    if !r_similar(&base, &moved)? {
        return Err(Error::Verification(format!(
            "balls of radius {r} differ although S and hS agree on Ball_H({window})"
        )));
    }
    let witness = witness_at(&mut pair, &s, PairSide::Second)?;
    Ok(CondensationCertificate {
        r,
        h,
        agreement,
        witness,
        ball_digest: [base.dump(), moved.dump()],
        tool_version: TOOL_VERSION.to_string(),
    })
}

/// Pins a fresh `p ↦ true` and `hp ↦ false` with `|hp| > radius`; returns `p`.
fn inject_distinction(subset: &mut ForcedSubset, h: &AmbientElement, radius: usize) -> Result<AmbientElement> {
    let floor = subset.snapshot_radius().unwrap_or(0).max(radius) + 1;
    let (p, _) = subset.next_fresh(floor, |p, pinned| {
        let hp = h * p;
        let admissible = !pinned(p) && !pinned(&hp) && hp.word_length() > radius && hp != *p;
        admissible.then(|| vec![p.clone(), hp])
    })?;
    subset.pin(&p, true)?;
    subset.pin(&(h * &p), false)?;
    Ok(p)
}

/// Re-checks a certificate against a subset loaded from a state file. Works
/// on a private copy, so the caller's subset is never modified.
pub fn verify_certificate(
    cert: &CondensationCertificate,
    subset: &ForcedSubset,
    table: &FiniteGroupTable,
) -> Result<()> {
    let fail = |reason: String| Err(Error::Verification(reason));
    let ambient = subset.ambient();
    if cert.h.is_identity() {
        return fail("h is identity".into());
    }
    if cert.r == 0 {
        return fail("radius is zero".into());
    }
    let window = 4 * cert.r;
    let ball = ambient.ball(window, subset.limits().ball_cap)?;
    if cert.agreement.window() != ball.elements.as_slice() {
        return fail(format!("agreement window is not Ball_H({window})"));
    }
    let h_inv = cert.h.inverse();
    for (x, v) in cert.agreement.entries() {
        let in_s = subset.pinned_value(x);
        let in_hs = subset.pinned_value(&(&h_inv * x));
        if in_s != Some(v) || in_hs != Some(v) {
            return fail(format!("agreement mismatch at {x}"));
        }
    }
    let w = &cert.witness;
    if w.word != MarkedWord::commutator_probe(&w.s) {
        return fail("witness word is not the commutator probe of s".into());
    }
    let (in_s, in_hs) = (subset.pinned_value(&w.s), subset.pinned_value(&(&h_inv * &w.s)));
    let expected = match w.side {
        PairSide::First => (Some(true), Some(false)),
        PairSide::Second => (Some(false), Some(true)),
    };
    if (in_s, in_hs) != expected {
        return fail(format!("witness point {} is not pinned as claimed", w.s));
    }
    let mut copy = subset.clone();
    let mut pair = MarkedPair::new(
        xi(ambient, table, None),
        xi(ambient, table, Some(&cert.h)),
        Subsets::Shared(&mut copy),
    )?;
    for (side, nontrivial) in [(w.side, true), (w.side.other(), false)] {
        if matches!(pair.verdict(side, &w.word)?, Verdict::Identity) == nontrivial {
            return fail(format!("witness verdict on the {side} side is wrong"));
        }
    }
    let base = pair.build_ball(PairSide::First, cert.r)?;
    let moved = pair.build_ball(PairSide::Second, cert.r)?;
    for (i, ball) in [&base, &moved].into_iter().enumerate() {
        if let Err(e) = ball.check_invariants() {
            return fail(format!("rebuilt ball {} is malformed: {e}", i + 1));
        }
        if ball.dump() != cert.ball_digest[i] {
            return fail(format!("ball digest {} does not match the rebuilt ball", i + 1));
        }
    }
    if !r_similar(&base, &moved)? {
        return fail("balls are not r-similar".into());
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct WitnessFile {
    s: String,
    side: String,
    word: String,
}

#[derive(Serialize, Deserialize)]
struct CertificateFile {
    r: usize,
    h: String,
    agreement: Vec<(String, bool)>,
    witness: WitnessFile,
    ball_digest: [String; 2],
    tool_version: String,
}

impl CondensationCertificate {
    pub fn to_json(&self) -> Result<String> {
        let file = CertificateFile {
            r: self.r,
            h: self.h.to_string(),
            agreement: self.agreement.entries().map(|(x, v)| (x.to_string(), v)).collect(),
            witness: WitnessFile {
                s: self.witness.s.to_string(),
                side: self.witness.side.to_string(),
                word: self.witness.word.to_string(),
            },
            ball_digest: self.ball_digest.clone(),
            tool_version: self.tool_version.clone(),
        };
        Ok(crate::json::to_string(&file, 2)?)
    }

    pub fn from_json(text: &str, ambient: Ambient) -> Result<Self> {
        let file: CertificateFile = serde_json::from_str(text)?;
        let parse = |t: &str| {
            ambient
                .parse_element(t)
                .map_err(|e| Error::State(format!("certificate element `{t}`: {e}")))
        };
        let mut window = Vec::with_capacity(file.agreement.len());
        let mut included = Vec::new();
        for (x, v) in &file.agreement {
            let x = parse(x)?;
            if *v {
                included.push(x.clone());
            }
            window.push(x);
        }
        let word = MarkedWord::parse(&file.witness.word, ambient.generator_count())
            .map_err(|e| Error::State(format!("certificate word: {e}")))?;
        Ok(Self {
            r: file.r,
            h: parse(&file.h)?,
            agreement: Pattern::new(included, window)?,
            witness: DistinctnessWitness {
                s: parse(&file.witness.s)?,
                side: file.witness.side.parse()?,
                word,
            },
            ball_digest: file.ball_digest,
            tool_version: file.tool_version,
        })
    }
}
