use condense_core::condense::witness_at;
use condense_core::wreath::{is_identity_window, Generator, Letter, WindowElement, WindowVerdict};
use condense_core::{
    certify_condensed, distinguish, r_similar, verify_certificate, xi, Ambient, AmbientElement, CondensationCertificate,
    Error, Fallback, FiniteGroupTable, ForcedSubset, Limits, MarkedPair, MarkedWord, PairSide, Subsets, Verdict,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn h() -> Ambient {
    Ambient::free(2).unwrap()
}

fn s3() -> FiniteGroupTable {
    FiniteGroupTable::preset("s3").unwrap()
}

fn fresh() -> ForcedSubset {
    ForcedSubset::new(h(), Limits::default())
}

#[test]
fn single_point_differences_are_always_found() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let ball = h().ball(3, usize::MAX).unwrap();
    for _ in 0..20 {
        let mut s = fresh();
        let mut t = fresh();
        for x in ball.iter() {
            let v = rng.random_bool(0.5);
            s.pin(x, v).unwrap();
            t.pin(x, v).unwrap();
        }
        let p = &ball.elements[rng.random_range(0..ball.len())];
        let mut t2 = fresh();
        for (x, v) in t.pinned() {
            t2.pin(x, if x == p { !v } else { v }).unwrap();
        }
        let mut pair = MarkedPair::new(xi(h(), &s3(), None), xi(h(), &s3(), None), Subsets::Separate(&mut s, &mut t2)).unwrap();
        let w = distinguish(&mut pair, 3).unwrap().expect("a difference inside Ball(3)");
        assert_eq!(&w.s, p);
        assert_eq!(w.word, MarkedWord::commutator_probe(p));
        let radius = p.word_length() + 2;
        let (inside, outside) = match w.side {
            PairSide::First => (&s, &t2),
            PairSide::Second => (&t2, &s),
        };
        let id = h().identity();
        let v_in = is_identity_window(&w.word, h(), &s3(), &inside.frozen(&id, Fallback::False), radius, 1 << 20).unwrap();
        let v_out = is_identity_window(&w.word, h(), &s3(), &outside.frozen(&id, Fallback::False), radius, 1 << 20).unwrap();
        assert!(matches!(v_in, WindowVerdict::NonIdentity(_)));
        assert!(matches!(v_out, WindowVerdict::IdentityUpToWindow));
    }
}

#[test]
fn the_probe_word_separates_one_pinned_point() {
    let p = h().parse_element("x2 x1^-1").unwrap();
    let mut s = fresh();
    let mut t = fresh();
    s.pin(&p, true).unwrap();
    t.pin(&p, false).unwrap();
    let mut pair = MarkedPair::new(xi(h(), &s3(), None), xi(h(), &s3(), None), Subsets::Separate(&mut s, &mut t)).unwrap();
    let w = witness_at(&mut pair, &p, PairSide::First).unwrap();
    assert_eq!(w.word.to_string(), "x1 x2^-1 b x2 x1^-1 a x1 x2^-1 b^-1 x2 x1^-1 a^-1");
    assert!(!pair.verdict(PairSide::First, &w.word).unwrap().is_identity());
    assert_eq!(pair.verdict(PairSide::Second, &w.word).unwrap(), Verdict::Identity);
    assert!(witness_at(&mut pair, &p, PairSide::Second).is_err());
}

fn conjugate_b(g: &AmbientElement) -> MarkedWord {
    let hw = MarkedWord::from_ambient(g);
    let b = MarkedWord::new(vec![Letter {
        generator: Generator::B,
        inverse: false,
    }]);
    hw.concat(&b).concat(&hw.inverse())
}

#[test]
fn sequential_certificates_verify_and_translate_coherently() {
    let mut s = fresh();
    let table = s3();
    let mut certs: Vec<CondensationCertificate> = Vec::new();
    for r in [1, 2] {
        let c = certify_condensed(&mut s, &table, r).unwrap();
        assert!(!c.h.is_identity());
        assert!(certs.iter().all(|d| d.h != c.h));
        assert!(c.witness.s.word_length() > 4 * r);
        assert_eq!(c.witness.side, PairSide::Second);
        assert_eq!(c.ball_digest[0], c.ball_digest[1]);
        // b̄_{hS} = h b̄_S h⁻¹ on Ball(4r)
        let ball = h().ball(4 * r, usize::MAX).unwrap();
        let b = MarkedWord::parse("b", 2).unwrap();
        let moved = WindowElement::of_word(&b, h(), &table, &mut s.translate(c.h.clone()), &ball);
        let conj = WindowElement::of_word(&conjugate_b(&c.h), h(), &table, &mut s.view(), &ball);
        assert!(conj.tail().is_identity());
        for x in ball.iter() {
            assert_eq!(moved.value(x), conj.value(x), "at {x}");
            assert!(moved.value(x).is_some());
        }
        // the independent check: the rebuilt balls agree
        let mut pair = MarkedPair::new(xi(h(), &table, None), xi(h(), &table, Some(&c.h)), Subsets::Shared(&mut s)).unwrap();
        let b1 = pair.build_ball(PairSide::First, r).unwrap();
        let b2 = pair.build_ball(PairSide::Second, r).unwrap();
        assert!(r_similar(&b1, &b2).unwrap());
        certs.push(c);
        for d in &certs {
            verify_certificate(d, &s, &table).unwrap();
            let back = CondensationCertificate::from_json(&d.to_json().unwrap(), h()).unwrap();
            assert_eq!(&back, d);
        }
    }
    s.check_invariants().unwrap();
}

#[test]
fn tampered_certificates_fail() {
    let mut s = fresh();
    let table = s3();
    let c = certify_condensed(&mut s, &table, 1).unwrap();
    let reason = |c: &CondensationCertificate| match verify_certificate(c, &s, &table) {
        Err(Error::Verification(m)) => m,
        other => panic!("expected a verification failure, got {other:?}"),
    };
    let mut bad = c.clone();
    bad.h = h().identity();
    assert_eq!(reason(&bad), "h is identity");

    let flip = c.agreement.window()[3].clone();
    let mut included: Vec<AmbientElement> = c.agreement.included().to_vec();
    if let Some(i) = included.iter().position(|x| *x == flip) {
        included.remove(i);
    } else {
        included.push(flip.clone());
    }
    let mut bad = c.clone();
    bad.agreement = condense_core::Pattern::new(included, c.agreement.window().to_vec()).unwrap();
    assert_eq!(reason(&bad), format!("agreement mismatch at {flip}"));

    let mut bad = c.clone();
    bad.ball_digest[1].push_str("0 a 0\n");
    assert!(reason(&bad).contains("digest"));

    let mut bad = c.clone();
    bad.witness.side = PairSide::First;
    assert!(reason(&bad).contains("witness"));
}

#[test]
fn radius_zero_is_rejected() {
    let mut s = fresh();
    assert!(matches!(certify_condensed(&mut s, &s3(), 0), Err(Error::Usage(_))));
    assert_eq!(s.pinned_len(), 0);
}
