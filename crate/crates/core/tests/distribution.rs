mod common;

use rkbench::distribution::{
    build_blueprint, check_blueprint, il_obligations, realize_corollary, validate_registry, Corollary, Lasso,
    NamedSequence, Part, Reason, SmallCase, TheoryClass, Variant, Verdict,
};
use rkbench::limitcount::{count_classes, normal_form, IdentitySystem, Word};
use rkbench::operators::{replay, Step};
use rkbench::*;

fn c(s: &str) -> Cardinal {
    s.parse().unwrap()
}

fn triple(s: &str) -> Cm3Triple {
    s.parse().unwrap()
}

#[test]
fn classifier_examples() {
    let v = |t: &str, class| classify_triple(triple(t), class, true).verdict;
    assert_eq!(v("1,0,0", TheoryClass::Small), Verdict::AdmissibleSmall(SmallCase::Categorical));
    assert_eq!(v("w,c,0", TheoryClass::Small), Verdict::AdmissibleSmall(SmallCase::NonCategorical));
    assert_eq!(v("w,1,1", TheoryClass::Small), Verdict::Inadmissible(Reason::SmallNplNonzero));
    assert_eq!(v("0,0,c", TheoryClass::Tc), Verdict::AdmissibleTc(2));
    assert_eq!(v("2,c,0", TheoryClass::Tc), Verdict::Inadmissible(Reason::ContinuumLimitsOnly));
    assert_eq!(v("c,0,w", TheoryClass::Tc), Verdict::Inadmissible(Reason::ContinuumPrimesOnly));
    assert_eq!(v("0,3,c", TheoryClass::Tc), Verdict::Inadmissible(Reason::PrimeZeroLimitNonzero));
    assert_eq!(v("1,1,1", TheoryClass::Tc), Verdict::Inadmissible(Reason::NoContinuumCoordinate));
}

#[test]
fn decomposition_examples() {
    assert_eq!(decompose(c("4"), &[c("1"), c("0"), c("2"), c("1")], c("0")), c("8"));
    assert_eq!(decompose(c("3"), &[c("c")], c("0")), c("c"));
    assert_eq!(rkbench::distribution::decompose_tc(c("2"), &[c("1")], c("c")), (c("c"), true));
    assert_eq!(rkbench::distribution::decompose_tc(c("2"), &[c("w")], c("1")), (c("w"), false));
    assert_eq!(rkbench::distribution::uniform_choice_rule(true, true), Some(c("c")));
    assert_eq!(rkbench::distribution::uniform_choice_rule(true, false), None);
}

#[test]
fn validation_examples() {
    let mut spec = DistributionSpec::finite(Preorder::identity(3), TheoryClass::Tc);
    assert!(validate_f(&spec).unwrap().all_passed());
    // Merging two elements into one class with f = 0 trips only the class rule.
    spec.x = Preorder::from_pairs(3, &[(0, 1), (1, 0)]).unwrap().close();
    let r = validate_f(&spec).unwrap();
    assert_eq!(r.failed_rules(), vec!["class-positive"]);

    let mut small = DistributionSpec::finite(Preorder::chain(3), TheoryClass::Small);
    small.f_classes.insert(2, c("1"));
    assert!(validate_f(&small).unwrap().all_passed());
    small.f_classes.insert(0, c("2"));
    assert_eq!(validate_f(&small).unwrap().failed_rules(), vec!["least-zero"]);

    let mut seq = DistributionSpec::sequences(Preorder::chain(3), TheoryClass::Tc);
    let y = Lasso::new(vec![], vec![1]).unwrap();
    let sub = Lasso::new(vec![0], vec![1]).unwrap();
    seq.f_sequences.push(NamedSequence { name: "y".into(), seq: sub, value: c("3") });
    seq.f_sequences.push(NamedSequence { name: "z".into(), seq: y, value: c("1") });
    let r = validate_f(&seq).unwrap();
    assert!(r.failed_rules().contains(&"subsequence-monotone"));
    assert!(r.failed_rules().contains(&"tail-invariant"));
}

#[test]
fn malformed_specs_are_rejected() {
    for text in [
        "elements: 2\nf: 5 = 1\n",
        "elements: 2\n0 <= 1\n1 <= 0\nf: 0 = 1\nf: 1 = 2\n",
        "mode: sequence\nelements: 2\nf: s 1 [0] = 1\n",
        "elements: 2\nf: s [0] = 1\n",
        "elements: 2\npartition: P 0\n",
        "elements: 2\nf: 0 = banana\n",
    ] {
        assert!(DistributionSpec::parse(text).is_err(), "{text}");
    }
}

#[test]
fn singleton_blueprint() {
    let spec = DistributionSpec::finite(Preorder::identity(1), TheoryClass::Tc);
    let bp = build_blueprint(&spec, Variant::Finite).unwrap();
    assert_eq!(bp.predicates.len(), 1);
    assert!(bp.pipeline.steps.iter().any(|s| matches!(s, Step::Icp { .. })));
    assert!(bp.pipeline.steps.iter().any(|s| matches!(s, Step::Css { .. })));
    let out = replay(&bp.pipeline).unwrap();
    assert_eq!(out.spec.registry.graph.rk_structure().quotient.len(), 1);
    assert!(check_blueprint(&spec, &bp).unwrap().all_passed());
}

#[test]
fn two_chain_blueprint() {
    let spec = DistributionSpec::finite(Preorder::chain(2), TheoryClass::Tc);
    let bp = build_blueprint(&spec, Variant::Finite).unwrap();
    assert_eq!(bp.q_edges, vec![(0, 1, true)]);
    let out = replay(&bp.pipeline).unwrap();
    let g = &out.spec.registry.graph;
    let ids: Vec<usize> = bp.predicates.iter().map(|p| g.index_of(&format!("p.{p}")).unwrap()).collect();
    let order = g.rk_preorder().restrict(&ids);
    assert!(order.le(0, 1) && !order.le(1, 0));
}

#[test]
fn partition_variants_differ_only_in_order() {
    let mut spec = DistributionSpec::sequences(Preorder::chain(3), TheoryClass::Tc);
    spec.partition = Some(vec![Part::P, Part::P, Part::Npl]);
    spec.f_sequences.push(NamedSequence { name: "s".into(), seq: Lasso::new(vec![0], vec![1]).unwrap(), value: c("w") });
    assert!(build_blueprint(&DistributionSpec { partition: None, ..spec.clone() }, Variant::AllocateFirst).is_err());
    assert!(build_blueprint(&spec, Variant::Finite).is_err());
    let a = build_blueprint(&spec, Variant::AllocateFirst).unwrap();
    let b = build_blueprint(&spec, Variant::PartitionFirst).unwrap();
    assert_ne!(a.pipeline, b.pipeline);
    let key = |bp: &rkbench::TheoryBlueprint| {
        let mut s: Vec<String> = bp.pipeline.steps.iter().map(|s| s.to_string()).collect();
        s.sort();
        s
    };
    assert_eq!(key(&a), key(&b));
    for bp in [&a, &b] {
        let r = check_blueprint(&spec, bp).unwrap();
        assert!(r.all_passed(), "{}", r.render_human());
    }
}

#[test]
fn witness_patterns() {
    let cases = [
        (Corollary::FinitePrime, vec![c("2"), c("w")], "(2,w,c)", 3, Variant::Finite),
        (Corollary::CountablePrime, vec![c("c")], "(w,c,c)", 3, Variant::Sequence),
        (Corollary::ContinualPrime, vec![c("0")], "(c,c,0)", 1, Variant::PartitionFirst),
        (Corollary::ContinualPrime, vec![c("w")], "(c,c,w)", 1, Variant::AllocateFirst),
    ];
    for (kind, params, want, family, variant) in cases {
        let spec = realize_corollary(kind, &params).unwrap();
        let t = spec.target.unwrap();
        assert_eq!(t.to_string(), want);
        assert_eq!(classify_triple(t, TheoryClass::Tc, true).verdict, Verdict::AdmissibleTc(family));
        let bp = build_blueprint(&spec, variant).unwrap();
        assert!(check_blueprint(&spec, &bp).unwrap().all_passed());
    }
    assert!(realize_corollary(Corollary::CountablePrime, &[c("w1")]).is_err());
}

#[test]
fn registry_obligations() {
    let g = DominationGraph::parse(
        "type a prime\ntype b prime\nb dominates a via phi\na dominates b via psi\n",
    )
    .unwrap();
    assert_eq!(il_obligations(&g).len(), 1);
    let mut spec = DistributionSpec::finite(Preorder::from_pairs(2, &[(0, 1), (1, 0)]).unwrap(), TheoryClass::Tc);
    let nodes = vec!["a".to_string(), "b".to_string()];
    let r = validate_registry(&spec, &g, &nodes, &[]).unwrap();
    assert_eq!(r.failed_rules(), vec!["class-positive"]);
    spec.f_classes.insert(0, c("1"));
    assert!(validate_registry(&spec, &g, &nodes, &[]).unwrap().all_passed());
}

#[test]
fn limit_count_examples() {
    let one = IdentitySystem::limit_over_type(c("1")).unwrap();
    let r = count_classes(&one, 3, 4).unwrap();
    assert_eq!(r.count, 1);
    assert_eq!(r.representatives, vec![Word(vec![0])]);
    assert_eq!(normal_form(&one, 3, &Word(vec![2, 1, 2]), 4).unwrap(), Word(vec![0]));
    assert_eq!(count_classes(&IdentitySystem::empty(), 2, 2).unwrap().count, 6);
    let two = IdentitySystem::limit_over_type(c("2")).unwrap();
    let at4 = count_classes(&two, 3, 4).unwrap().count;
    let at5 = count_classes(&two, 3, 5).unwrap().count;
    assert_eq!(at4, common::oracle_count(common::Family::OverType, c("2"), &[], 3, 4));
    assert_eq!(at5, common::oracle_count(common::Family::OverType, c("2"), &[], 3, 5));
    assert_eq!(at4, at5);
}
