use sigmak::abg::score;
use sigmak::bp_graph::SigmaIndex;
use sigmak::genome::{classify_pair, PairClass, Shape, Side};
use sigmak::reduction::{
    all_satisfying, assignment_to_solution, build_reduction, example_instance, extract_genomes,
    micro_gadget, random_instance, sat_brute, solution_to_assignment, verify_structure, Assignment,
    GadgetKind, ReductionShape,
};
use sigmak::solver::{ss_mis, ss_naive, Budget};
use sigmak::HalfInt;

#[test]
fn example_formula_mis_reaches_bound() {
    let r = build_reduction(&example_instance(), 8, ReductionShape::Circular).unwrap();
    let res = ss_mis(&r.graph, 8, &Budget::default()).unwrap();
    assert!(res.optimal);
    assert_eq!(res.score, HalfInt::from_int(20));
    let a = solution_to_assignment(&r, &res.tau).expect("optimal resolution encodes an assignment");
    assert!(r.instance.is_satisfied_by(&a.values));
}

#[test]
fn extraction_round_trip_circular() {
    for k in [8, 10] {
        let r = build_reduction(&example_instance(), k, ReductionShape::Circular).unwrap();
        let x = extract_genomes(&r).unwrap();
        assert!(x
            .s
            .chromosomes()
            .iter()
            .all(|c| c.shape() == Shape::Circular));
        assert!(x
            .d
            .chromosomes()
            .iter()
            .all(|c| c.shape() == Shape::Circular));
        assert_eq!(
            classify_pair(&x.s, &x.d),
            PairClass::OneTwoCognate {
                singular: Side::First
            }
        );
        let rebuilt = x.verify(&r.graph).unwrap();
        assert_eq!(rebuilt.a_star(), r.graph.a_star());
    }
}

#[test]
fn extraction_round_trip_linear() {
    let r = build_reduction(&example_instance(), 8, ReductionShape::Linear).unwrap();
    let x = extract_genomes(&r).unwrap();
    assert!(x.s.chromosomes().iter().all(|c| c.shape() == Shape::Linear));
    assert!(x.d.chromosomes().iter().all(|c| c.shape() == Shape::Linear));
    assert_eq!(
        classify_pair(&x.s, &x.d),
        PairClass::OneTwoCognate {
            singular: Side::First
        }
    );
    let rebuilt = x.verify(&r.graph).unwrap();
    assert_eq!(rebuilt.isolated_count(), 944);
    let res = ss_mis(&r.graph, 8, &Budget::default()).unwrap();
    assert!(res.optimal);
    assert_eq!(res.score, r.bound);
}

#[test]
fn every_satisfying_assignment_meets_bound() {
    for k in [8, 10, 12] {
        let r = build_reduction(&example_instance(), k, ReductionShape::Circular).unwrap();
        for values in all_satisfying(&r.instance).unwrap() {
            let tau = assignment_to_solution(&r, &Assignment::new(values.clone())).unwrap();
            assert_eq!(
                score(&r.graph, &tau, SigmaIndex::Finite(k)).unwrap(),
                r.bound,
                "k={k} {values:?}"
            );
            assert_eq!(solution_to_assignment(&r, &tau).unwrap().values, values);
        }
    }
}

#[test]
fn random_instances_small_sweep() {
    for seed in 0..12u64 {
        let inst = random_instance(3 + (seed % 4) as usize, seed).unwrap();
        let sat = sat_brute(&inst).unwrap().is_some();
        let r = build_reduction(&inst, 8, ReductionShape::Circular).unwrap();
        let rep = verify_structure(&r).unwrap();
        assert!(rep.ok(), "seed {seed}: {:?}", rep.violations);
        let res = ss_mis(&r.graph, 8, &Budget::default()).unwrap();
        assert!(res.optimal);
        assert_eq!(res.score == r.bound, sat, "seed {seed}");
        assert!(res.score <= r.bound);
    }
}

#[test]
fn micro_gadgets_agree_across_engines() {
    for kind in GadgetKind::ALL {
        let m = micro_gadget(kind, 8).unwrap();
        if m.graph.a_star() > 21 {
            continue;
        }
        for k in [2, 4, 6, 8, 10] {
            let naive = ss_naive(&m.graph, SigmaIndex::Finite(k), &Budget::default()).unwrap();
            let mis = ss_mis(&m.graph, k, &Budget::default()).unwrap();
            assert_eq!(naive.score, mis.score, "{kind:?} k={k}");
        }
    }
}
