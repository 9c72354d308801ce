//! Every text serializer reparses its own output to an equal value.

use proptest::prelude::*;

use rkbench::distribution::{Lasso, NamedSequence, Part, TheoryClass};
use rkbench::limitcount::PlateauReading;
use rkbench::models::Count;
use rkbench::operators::{replay, Step};
use rkbench::preorder::JointConeCase;
use rkbench::typespace::{Base, TypeId};
use rkbench::*;

fn cardinal() -> impl Strategy<Value = Cardinal> {
    prop_oneof![
        (0u64..50).prop_map(Cardinal::Fin),
        Just(Cardinal::Omega),
        Just(Cardinal::Omega1),
        Just(Cardinal::Continuum),
    ]
}

fn countable_value() -> impl Strategy<Value = Cardinal> {
    prop_oneof![(0u64..5).prop_map(Cardinal::Fin), Just(Cardinal::Omega), Just(Cardinal::Continuum)]
}

fn preorder() -> impl Strategy<Value = Preorder> {
    (1usize..8)
        .prop_flat_map(|n| (Just(n), prop::collection::vec((0..n, 0..n), 0..(2 * n))))
        .prop_map(|(n, pairs)| Preorder::from_pairs(n, &pairs).unwrap().close())
}

fn graph() -> impl Strategy<Value = DominationGraph> {
    (
        prop::collection::vec((any::<bool>(), any::<bool>()), 1..7),
        prop::collection::vec((0usize..7, 0usize..7, 0u8..3, any::<bool>()), 0..12),
    )
        .prop_map(|(nodes, edges)| {
            let mut g = DominationGraph::new();
            for (i, &(principal, prime)) in nodes.iter().enumerate() {
                g.add_node(format!("t{i}"), principal, prime || principal).unwrap();
            }
            for (a, b, label, principal) in edges {
                let (a, b) = (a % nodes.len(), b % nodes.len());
                let _ = g.add_edge(&format!("t{a}"), &format!("t{b}"), &format!("phi{label}"), principal);
            }
            g
        })
}

fn model() -> impl Strategy<Value = ModelSpec> {
    (1usize..4, any::<bool>(), prop::collection::vec(prop_oneof![(0u32..5).prop_map(Count::Fin), Just(Count::Omega)], 8))
        .prop_map(|(d, all, counts)| {
            let ts = TypeSpace::iup(d);
            let mut m = ModelSpec::new(ts, if all { Base::All } else { Base::None });
            let cells: Vec<TypeId> = enumerate_types(&ts).unwrap().into_iter().map(|c| c.id).collect();
            for (id, c) in cells.into_iter().zip(counts) {
                m.set(id, c).unwrap();
            }
            m
        })
}

fn profile() -> impl Strategy<Value = PremodelProfile> {
    (
        cardinal(),
        any::<bool>(),
        cardinal(),
        cardinal(),
        cardinal(),
        prop::collection::vec((cardinal(), cardinal(), any::<bool>()), 0..4),
    )
        .prop_map(|(size, directed, lower, class, height, cases)| PremodelProfile {
            size,
            directed,
            lower_cone_card: lower,
            class_card: class,
            height,
            joint_upper_cone_cases: cases
                .into_iter()
                .map(|(cone_card, complement_card, equals_x)| JointConeCase { cone_card, complement_card, equals_x })
                .collect(),
        })
}

fn finite_spec() -> impl Strategy<Value = DistributionSpec> {
    (preorder(), any::<bool>(), prop::collection::vec(countable_value(), 8), any::<bool>()).prop_map(
        |(x, small, values, targeted)| {
            let n = x.len();
            let theory = if small { TheoryClass::Small } else { TheoryClass::Tc };
            let mut spec = DistributionSpec::finite(x, theory);
            let q = spec.quotient();
            for (class, v) in q.classes.iter().zip(values) {
                spec.f_classes.insert(class[0], v);
            }
            if targeted {
                spec.target = Some(Cm3Triple::new(Cardinal::Fin(n as u64), Cardinal::Omega, Cardinal::Continuum));
            }
            spec
        },
    )
}

fn sequence_spec() -> impl Strategy<Value = DistributionSpec> {
    (2usize..6)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec((prop::collection::vec(0..n, 0..3), 0..n, countable_value()), 1..4),
                prop::collection::vec(any::<bool>(), n),
                any::<bool>(),
            )
        })
        .prop_map(|(n, seqs, parts, extendable)| {
            let mut spec = DistributionSpec::sequences(Preorder::chain(n), TheoryClass::Tc);
            for (i, (mut prefix, top, value)) in seqs.into_iter().enumerate() {
                prefix.sort_unstable();
                let top = prefix.last().copied().unwrap_or(0).max(top);
                spec.f_sequences.push(NamedSequence { name: format!("s{i}"), seq: Lasso::new(prefix, vec![top]).unwrap(), value });
            }
            spec.partition = Some(parts.into_iter().map(|p| if p { Part::P } else { Part::Npl }).collect());
            spec.extendable = extendable;
            spec
        })
}

fn pipeline() -> impl Strategy<Value = Pipeline> {
    let step = prop_oneof![
        (1usize..4).prop_map(Step::Fanout),
        (0u8..3, 0u32..3).prop_map(|(k, colors)| Step::Carrier { name: format!("A{k}"), colors }),
        (0u8..3, 0u8..3, any::<bool>()).prop_map(|(a, b, principal)| Step::Link {
            lower: format!("A{a}"),
            upper: format!("A{b}"),
            principal
        }),
        (0u8..3, prop::option::of(1usize..40), 1u32..4).prop_map(|(k, fresh, depth)| Step::Icp {
            sub: format!("A{k}"),
            fresh,
            depth
        }),
        (0u8..3, any::<bool>()).prop_map(|(k, linked)| Step::Css {
            sub: format!("A{k}"),
            stubs: vec!["q.aux.0".into(), "q.aux.1".into()],
            linked
        }),
        (countable_value().prop_filter("positive countable", |c| !c.is_zero() && *c != Cardinal::Continuum))
            .prop_map(|lambda| Step::Lmt { node: "p.A0".into(), lambda }),
        (1usize..5, any::<bool>()).prop_map(|(len, strict)| Step::Lms {
            seq: "s0".into(),
            len,
            lambda: Cardinal::Omega,
            reading: if strict { PlateauReading::StrictBound } else { PlateauReading::TargetOnly },
        }),
        Just(Step::Lfree { key: "seq:s1".into() }),
    ];
    prop::collection::vec(step, 0..8).prop_map(|steps| Pipeline { steps })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cardinals(c in cardinal()) {
        prop_assert_eq!(c.to_string().parse::<Cardinal>().unwrap(), c);
    }

    #[test]
    fn triples(p in cardinal(), l in cardinal(), npl in cardinal()) {
        let t = Cm3Triple::new(p, l, npl);
        prop_assert_eq!(t.to_string().parse::<Cm3Triple>().unwrap(), t);
    }

    #[test]
    fn preorders(p in preorder()) {
        prop_assert_eq!(Preorder::parse(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn domination_graphs(g in graph()) {
        prop_assert_eq!(DominationGraph::parse(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn model_specs(m in model()) {
        prop_assert_eq!(ModelSpec::parse(&m.to_text()).unwrap(), m);
    }

    #[test]
    fn premodel_profiles(p in profile()) {
        prop_assert_eq!(PremodelProfile::parse(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn finite_distribution_specs(s in finite_spec()) {
        prop_assert_eq!(DistributionSpec::parse(&s.to_text()).unwrap(), s);
    }

    #[test]
    fn sequence_distribution_specs(s in sequence_spec()) {
        prop_assert_eq!(DistributionSpec::parse(&s.to_text()).unwrap(), s);
    }

    #[test]
    fn pipelines(p in pipeline()) {
        prop_assert_eq!(Pipeline::parse(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn structures(p in pipeline()) {
        let mut steps = vec![
            Step::Carrier { name: "A0".into(), colors: 1 },
            Step::Carrier { name: "aux".into(), colors: 1 },
            Step::Icp { sub: "aux".into(), fresh: None, depth: 1 },
        ];
        steps.extend(p.steps);
        // Random tails may name missing predicates; those fail to replay.
        if let Ok(r) = replay(&Pipeline { steps }) {
            prop_assert_eq!(StructSpec::parse(&r.spec.to_text()).unwrap(), r.spec);
        }
    }
}
