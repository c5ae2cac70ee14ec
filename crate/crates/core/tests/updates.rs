mod common;

use common::*;
use netdyn_core::{new_model, Error, LinkMode, Model, Params, Rational, Update, UpdateSequence};

fn seq(s: &str) -> UpdateSequence {
    s.parse().unwrap()
}

#[test]
fn updates_match_reference_on_small_corpus() {
    let modes = [LinkMode::Literal, LinkMode::Irreflexive];
    let mut checked = 0;
    for m in
        small_corpus(3, 1, &[(1, 2), (1, 1)], &modes).chain(small_corpus(2, 2, &THRESHOLDS, &modes))
    {
        let naive = Naive::of(&m);
        for u in Update::ALL {
            assert_eq!(Naive::of(&m.apply(u)), naive.apply(u), "{u} on {m:?}");
        }
        checked += 1;
    }
    assert!(checked > 10_000);
}

#[test]
fn updates_match_reference_on_random_models() {
    let mut g = rng(11);
    for _ in 0..2_000 {
        let m = random_small_model(&mut g, 5, 4);
        let naive = Naive::of(&m);
        for u in Update::ALL {
            assert_eq!(Naive::of(&m.apply(u)), naive.apply(u));
        }
    }
}

#[test]
fn monotone_and_framed() {
    let mut g = rng(12);
    for _ in 0..1_000 {
        let m = random_small_model(&mut g, 5, 3);
        let d = m.diffusion_update();
        let n = m.network_update();
        let s = m.synchronous_update();
        assert_eq!(d.influence_matrix(), m.influence_matrix());
        assert_eq!(n.valuation_matrix(), m.valuation_matrix());
        assert_eq!(s.valuation_matrix(), d.valuation_matrix());
        assert_eq!(s.influence_matrix(), n.influence_matrix());
        for next in [&d, &n, &s] {
            let grows = |old: &[bool], new: &[bool]| old.iter().zip(new).all(|(o, n)| !o || *n);
            assert!(grows(m.influence_matrix(), next.influence_matrix()));
            assert!(grows(m.valuation_matrix(), next.valuation_matrix()));
        }
    }
}

#[test]
fn network_idempotent_and_diffusion_stabilizes() {
    let mut g = rng(13);
    for _ in 0..1_000 {
        let m = random_small_model(&mut g, 5, 3);
        let n = m.network_update();
        assert_eq!(n.network_update(), n);
        for k in 2..=4 {
            assert_eq!(
                m.apply_sequence(&UpdateSequence::repeat(Update::Net, k).unwrap()),
                n
            );
        }
        let a = m.agent_count();
        let da = m.apply_sequence(&UpdateSequence::repeat(Update::Diff, a).unwrap());
        assert_eq!(da.diffusion_update(), da);

        let (fix, steps) = m.stabilize(Update::Diff);
        assert!(steps < a.max(1), "{steps} diffusion steps with {a} agents");
        assert_eq!(fix, da);
        let (_, net_steps) = m.stabilize(Update::Net);
        assert!(net_steps <= 1);
        let (sfix, sync_steps) = m.stabilize(Update::Sync);
        assert_eq!(sfix.synchronous_update(), sfix);
        let n = a * m.feature_count() + a * a;
        assert!(sync_steps <= n);
    }
}

#[test]
fn similarity_symmetric_and_reflexive() {
    let mut g = rng(14);
    for _ in 0..500 {
        let m = random_small_model(&mut g, 4, 4);
        for a in m.signature().agents() {
            assert_eq!(m.similarity(a.as_str(), a.as_str()).unwrap(), Rational::ONE);
            for b in m.signature().agents() {
                assert_eq!(
                    m.similarity(a.as_str(), b.as_str()).unwrap(),
                    m.similarity(b.as_str(), a.as_str()).unwrap()
                );
            }
        }
    }
}

#[test]
fn insertion_order_does_not_matter() {
    let p = Params::new(r(1, 2), r(1, 2), LinkMode::Literal).unwrap();
    let m1 = new_model(
        ["a", "b", "c"],
        ["f", "g"],
        [("a", "b"), ("c", "b"), ("b", "c")],
        [("a", vec!["f", "g"]), ("c", vec!["g"])],
        p,
    )
    .unwrap();
    let m2 = new_model(
        ["c", "a", "b"],
        ["g", "f"],
        [("b", "c"), ("c", "b"), ("a", "b")],
        [("c", vec!["g"]), ("a", vec!["g", "f"])],
        p,
    )
    .unwrap();
    assert_eq!(m1, m2);
    for u in Update::ALL {
        assert_eq!(m1.apply(u), m2.apply(u));
    }
}

#[test]
fn validation_errors() {
    let ok = |o: Rational, t: Rational| Params::new(o, t, LinkMode::Literal);
    assert!(matches!(
        ok(r(1, 2), Rational::ZERO),
        Err(Error::ThresholdOutOfRange { .. })
    ));
    assert!(matches!(
        ok(r(3, 2), r(1, 2)),
        Err(Error::ThresholdOutOfRange { .. })
    ));
    assert!(ok(Rational::ZERO, Rational::ONE).is_ok());

    let p = ok(r(1, 2), r(1, 2)).unwrap();
    let e = new_model(
        ["a", "b"],
        ["f"],
        [("a", "c")],
        Vec::<(&str, Vec<&str>)>::new(),
        p,
    );
    assert!(matches!(e, Err(Error::UnknownAgent(c)) if c == "c"));
    let e = new_model(
        ["a"],
        ["f"],
        Vec::<(&str, &str)>::new(),
        [("a", vec!["z"])],
        p,
    );
    assert!(matches!(e, Err(Error::UnknownFeature(_))));
    let e = new_model(
        ["a", "a"],
        ["f"],
        Vec::<(&str, &str)>::new(),
        Vec::<(&str, Vec<&str>)>::new(),
        p,
    );
    assert!(matches!(e, Err(Error::DuplicateAgent(_))));
    let e = new_model(
        Vec::<&str>::new(),
        ["f"],
        Vec::<(&str, &str)>::new(),
        Vec::<(&str, Vec<&str>)>::new(),
        p,
    );
    assert!(matches!(e, Err(Error::EmptyAgents)));
    let e = new_model(
        ["a"],
        Vec::<&str>::new(),
        Vec::<(&str, &str)>::new(),
        Vec::<(&str, Vec<&str>)>::new(),
        p,
    );
    assert!(matches!(e, Err(Error::EmptyFeatures)));
    let e = new_model(
        ["1a"],
        ["f"],
        Vec::<(&str, &str)>::new(),
        Vec::<(&str, Vec<&str>)>::new(),
        p,
    );
    assert!(matches!(e, Err(Error::InvalidIdentifier(_))));

    let irr = p.with_mode(LinkMode::Irreflexive);
    let e = new_model(
        ["a"],
        ["f"],
        [("a", "a")],
        Vec::<(&str, Vec<&str>)>::new(),
        irr,
    );
    assert!(matches!(e, Err(Error::SelfLoop(_))));
}

#[test]
fn mt_examples() {
    let m = mt();
    let names = |v: Vec<netdyn_core::AgentId>| v.iter().map(|a| a.to_string()).collect::<Vec<_>>();
    assert_eq!(names(m.influencers("b").unwrap()), ["a"]);
    assert!(m.influencers("a").unwrap().is_empty());
    assert!(m.has_pressure("b", "f").unwrap());
    assert!(!m.has_pressure("a", "f").unwrap());
    assert!(m.are_similar("a", "b").unwrap());

    let d = m.diffusion_update();
    assert_eq!(d.features_of("b").unwrap().len(), 1);
    let (_, steps) = m.stabilize(Update::Diff);
    assert_eq!(steps, 1);

    let dn = m.apply_sequence(&seq("diff,net"));
    assert_eq!(dn.edges().len(), 4);
    assert_eq!(dn.features_of("a").unwrap(), dn.features_of("b").unwrap());
    assert_eq!(m.apply_sequence(&seq("diff")), d);
}

#[test]
fn pressure_thresholds() {
    let build = |tau: Rational| {
        new_model(
            ["a", "b", "c"],
            ["f"],
            [("b", "a"), ("c", "a")],
            [("b", vec!["f"])],
            Params::new(r(1, 2), tau, LinkMode::Literal).unwrap(),
        )
        .unwrap()
    };
    assert!(build(r(1, 2)).has_pressure("a", "f").unwrap());
    assert!(!build(r(2, 3)).has_pressure("a", "f").unwrap());

    let three = new_model(
        ["a", "b"],
        ["f", "g", "h"],
        Vec::<(&str, &str)>::new(),
        [("a", vec!["f"]), ("b", vec!["f", "g"])],
        Params::new(r(1, 2), r(1, 2), LinkMode::Literal).unwrap(),
    )
    .unwrap();
    assert_eq!(three.similarity("a", "b").unwrap(), r(2, 3));
}

#[test]
fn threshold_edge_cases() {
    let m = mt();
    // ω = 0: every pair links, self-loops included in literal mode
    let zero = Model::from_matrices(
        m.signature().clone(),
        Params::new(Rational::ZERO, r(1, 2), LinkMode::Literal).unwrap(),
        m.influence_matrix().to_vec(),
        m.valuation_matrix().to_vec(),
    )
    .unwrap();
    assert!(zero.network_update().influence_matrix().iter().all(|&e| e));
    let zero_irr = zero.clone().with_mode(LinkMode::Irreflexive).unwrap();
    assert_eq!(zero_irr.network_update().edges().len(), 2);

    let no_influence = fixture("no_influence.json");
    assert_eq!(no_influence.diffusion_update(), no_influence);
    let saturated = fixture("saturated.json");
    assert_eq!(saturated.diffusion_update(), saturated);
}
