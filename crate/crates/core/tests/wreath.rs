use condense_core::wreath::{collect, is_identity_generic, Generator, Letter, WindowOracle};
use condense_core::{
    Ambient, AmbientElement, Fallback, FiniteGroupTable, ForcedSubset, Limits, MarkedWord, Verdict, WindowElement,
    WindowVerdict, Witness,
};
use proptest::prelude::*;

fn h() -> Ambient {
    Ambient::free(2).unwrap()
}

fn s3() -> FiniteGroupTable {
    FiniteGroupTable::preset("s3").unwrap()
}

fn letter() -> impl Strategy<Value = Letter> {
    prop::sample::select(Letter::alphabet(2))
}

fn word(max: usize) -> impl Strategy<Value = MarkedWord> {
    prop::collection::vec(letter(), 0..=max).prop_map(MarkedWord::new)
}

/// Words `p·q·p⁻¹`, where `q` is often a relation of `G_S` for every `S`.
fn conjugated_word() -> impl Strategy<Value = MarkedWord> {
    let cores = prop::sample::select(vec!["b b", "a a", "a^-1 a^-1", "x1 b b x1^-1", "b a a b", "x2 a x2^-1 b a"]);
    (word(2), cores, word(2)).prop_map(|(p, core, extra)| {
        let q = MarkedWord::parse(core, 2).unwrap().concat(&extra);
        p.concat(&q).concat(&p.inverse())
    })
}

/// A forced subset with a few points pinned `true` near the identity.
fn subset() -> impl Strategy<Value = ForcedSubset> {
    let points: Vec<AmbientElement> = h().ball(3, 100).unwrap().elements;
    prop::collection::vec(any::<bool>(), points.len()).prop_map(move |bits| {
        let mut s = ForcedSubset::new(h(), Limits::default());
        for (p, bit) in points.iter().zip(bits) {
            if bit && p.word_length() % 2 == 1 {
                s.pin(p, true).unwrap();
            }
        }
        s
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn letter_by_letter_recomposition(w in word(6), mut s in subset()) {
        let t = s3();
        let ball = h().ball(8, 1 << 20).unwrap();
        let we = WindowElement::of_word(&w, h(), &t, &mut s, &ball);
        let cf = collect(&w, h());
        prop_assert_eq!(we.tail(), &cf.tail);
        for x in ball.iter() {
            prop_assert_eq!(we.value(x), Some(cf.evaluate_at(&t, &mut s, x)));
        }
    }

    #[test]
    fn collected_form_invariants(w in word(8)) {
        let cf = collect(&w, h());
        prop_assert!(cf.factors.iter().all(|f| f.conjugator.word_length() <= w.len() && f.exp != 0));
        prop_assert!(cf.factors.windows(2).all(|p| p[0].conjugator != p[1].conjugator || p[0].lamp != p[1].lamp));
        // the tail is the projection W -> H
        let mut tail = h().identity();
        for l in w.letters() {
            if let Generator::X(i) = l.generator {
                tail = &tail * &h().generator(i as usize, l.inverse);
            }
        }
        prop_assert_eq!(&cf.tail, &tail);
        let partition = cf.b_classes();
        let members: usize = partition.classes.iter().map(|c| c.members.len()).sum();
        prop_assert_eq!(members, cf.factors.iter().filter(|f| f.lamp == condense_core::wreath::Lamp::B).count());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn non_identity_witnesses_re_evaluate(w in prop_oneof![word(6), conjugated_word()], mut s in subset()) {
        let t = s3();
        let verdict = is_identity_generic(&w, &t, &mut s.view()).unwrap();
        let cf = collect(&w, h());
        match verdict {
            Verdict::Identity => prop_assert!(cf.tail.is_identity()),
            Verdict::NonIdentity(Witness::Tail(tail)) => {
                prop_assert!(!tail.is_identity());
                prop_assert_eq!(tail, cf.tail);
            }
            Verdict::NonIdentity(Witness::Point(p)) => {
                prop_assert!(cf.tail.is_identity());
                prop_assert_ne!(cf.evaluate_at(&t, &mut s, &p), t.id());
            }
        }
    }

    #[test]
    fn generic_and_window_oracles_agree(w in prop_oneof![word(6), conjugated_word()], mut s in subset()) {
        let t = s3();
        let generic = is_identity_generic(&w, &t, &mut s.view()).unwrap();
        let frozen = s.frozen(&h().identity(), Fallback::False);
        let window = WindowOracle::new(h(), 6, 1 << 20, &frozen).unwrap().check(&w, &t);
        if generic.is_identity() {
            prop_assert_eq!(&window, &WindowVerdict::IdentityUpToWindow);
        }
        if matches!(window, WindowVerdict::NonIdentity(_)) {
            prop_assert!(!generic.is_identity());
        }
    }

    #[test]
    fn identity_holds_for_every_extension(w in conjugated_word(), mut s in subset(), seed in any::<u64>()) {
        let t = s3();
        if is_identity_generic(&w, &t, &mut s.view()).unwrap().is_identity() {
            for k in 0..5 {
                let frozen = s.frozen(&h().identity(), Fallback::Hashed(seed.wrapping_add(k)));
                let v = WindowOracle::new(h(), 5, 1 << 20, &frozen).unwrap().check(&w, &t);
                prop_assert_eq!(v, WindowVerdict::IdentityUpToWindow);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    /// `b̄_{hS} = h·b̄_S·h⁻¹` on `Ball(5)`.
    #[test]
    fn conjugation_identity(letters in prop::collection::vec((0..2usize, any::<bool>()), 0..=4), mut s in subset()) {
        let t = s3();
        let mut g = h().identity();
        for (i, inv) in letters {
            g.push_generator(i, inv);
        }
        let ball = h().ball(5, 1 << 20).unwrap();
        let b = MarkedWord::parse("b", 2).unwrap();
        let g_word = MarkedWord::from_ambient(&g);
        let conjugated = g_word.concat(&b).concat(&g_word.inverse());
        let lhs = WindowElement::of_word(&conjugated, h(), &t, &mut s, &ball);
        let rhs = WindowElement::of_word(&b, h(), &t, &mut s.translate(g.clone()), &ball);
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn word_problem_examples() {
    let t = s3();
    let mut s = ForcedSubset::new(h(), Limits::default());
    let w = |text: &str| MarkedWord::parse(text, 2).unwrap();
    assert!(is_identity_generic(&w("x1 x1^-1"), &t, &mut s.view()).unwrap().is_identity());
    assert!(is_identity_generic(&w("b b"), &t, &mut s.view()).unwrap().is_identity());
    let frozen = s.frozen(&h().identity(), Fallback::Hashed(1));
    let v = WindowOracle::new(h(), 8, 1 << 20, &frozen).unwrap().check(&w("b b"), &t);
    assert_eq!(v, WindowVerdict::IdentityUpToWindow);
}
