mod common;

use common::{corpus, feasible_sets, random_instance, random_subset, rng, Oracle, PowerKind};
use proptest::prelude::*;
use sinrsched::affectance::{
    affectance, affectance_sums, incoming_uncapped, is_delta_signal, is_feasible, partition_delta_signal, sinr, Cap,
};
use sinrsched::dual::{dual_instance, reversed_with_power};
use sinrsched::instances::{from_json_str, to_json_string};
use sinrsched::measures::{
    lambda_exact, lambda_sampled, max_avg_affectance, schedule_first_fit, scheduling_number_exact, AvgMode,
};
use sinrsched::{Directionality, Instance, PowerAssignment};

fn arb_instance(max_n: usize) -> impl Strategy<Value = Instance> {
    (any::<u64>(), 2..=max_n, 0usize..3, any::<bool>(), any::<bool>()).prop_map(move |(seed, n, p, noisy, bi)| {
        let power = [PowerKind::Uniform, PowerKind::Linear, PowerKind::Mean][p];
        let dir = if bi { Directionality::Bidirectional } else { Directionality::Unidirectional };
        random_instance(&mut rng(seed), n, power, noisy, dir)
    })
}

fn arb_instance_and_subset(max_n: usize) -> impl Strategy<Value = (Instance, Vec<usize>)> {
    (arb_instance(max_n), any::<u64>()).prop_map(|(inst, s)| {
        let set = random_subset(&mut rng(s), inst.len());
        (inst, set)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn sinr_matches_geometric_oracle((inst, set) in arb_instance_and_subset(12)) {
        let o = Oracle::new(&inst);
        for &v in &set {
            let lib = sinr(&inst, v, &set).unwrap();
            let want = o.sinr(v, &set);
            if want.is_finite() {
                prop_assert!((lib - want).abs() <= 1e-9 * want.abs());
            } else {
                prop_assert!(lib.is_infinite());
            }
        }
    }

    #[test]
    fn affectance_matches_oracle(inst in arb_instance(10)) {
        let o = Oracle::new(&inst);
        for w in inst.link_ids() {
            for v in inst.link_ids() {
                let lib = affectance(&inst, w, v, Cap::Uncapped).unwrap();
                let want = o.affectance(w, v);
                prop_assert!((lib - want).abs() <= 1e-9 * want.max(1e-300));
            }
        }
    }

    #[test]
    fn feasibility_equivalence((inst, set) in arb_instance_and_subset(12)) {
        let o = Oracle::new(&inst);
        for &v in &set {
            let s = o.sinr(v, &set) / o.beta();
            // skip draws within the comparison tolerance of the threshold
            if (s - 1.0).abs() <= 1e-9 {
                continue;
            }
            let by_aff = incoming_uncapped(&inst, &set, v).unwrap() <= 1.0;
            prop_assert_eq!(by_aff, s >= 1.0);
        }
        if set.iter().all(|&v| (o.sinr(v, &set) / o.beta() - 1.0).abs() > 1e-9) {
            prop_assert_eq!(is_feasible(&inst, &set).unwrap(), o.feasible(&set));
        }
    }

    #[test]
    fn monotone_under_subsets((inst, set) in arb_instance_and_subset(12), drop_seed in any::<u64>()) {
        let sub = random_subset(&mut rng(drop_seed), set.len()).into_iter().map(|i| set[i]).collect::<Vec<_>>();
        for v in inst.link_ids() {
            let big = incoming_uncapped(&inst, &set, v).unwrap();
            let small = incoming_uncapped(&inst, &sub, v).unwrap();
            prop_assert!(small <= big + 1e-12 * big.max(1.0));
        }
        if is_feasible(&inst, &set).unwrap() {
            prop_assert!(is_feasible(&inst, &sub).unwrap());
        }
    }

    #[test]
    fn capping_properties(inst in arb_instance(10)) {
        for w in inst.link_ids() {
            for v in inst.link_ids() {
                let c = affectance(&inst, w, v, Cap::Capped).unwrap();
                let u = affectance(&inst, w, v, Cap::Uncapped).unwrap();
                prop_assert!((0.0..=1.0).contains(&c));
                prop_assert!(c <= u);
                if u <= 1.0 {
                    prop_assert_eq!(c, u);
                }
            }
        }
    }

    #[test]
    fn capped_sums_are_consistent((inst, set) in arb_instance_and_subset(10)) {
        for &v in &set {
            let sums = affectance_sums(&inst, &set, v).unwrap();
            let inc: f64 = set.iter().map(|&w| affectance(&inst, w, v, Cap::Capped).unwrap()).sum();
            let out: f64 = set.iter().map(|&w| affectance(&inst, v, w, Cap::Capped).unwrap()).sum();
            prop_assert!((sums.incoming - inc).abs() < 1e-12 && (sums.outgoing - out).abs() < 1e-12);
        }
    }

    #[test]
    fn delta_partition_is_a_partition_into_signal_sets(inst in arb_instance(12), s in any::<u64>(), d in 0usize..3) {
        let mut r = rng(s);
        let delta = [1.0, 2.0, 3f64.powf(inst.params().alpha)][d];
        for set in feasible_sets(&inst, &mut r, 5) {
            let parts = partition_delta_signal(&inst, &set, delta).unwrap();
            let mut all: Vec<_> = parts.concat();
            all.sort_unstable();
            let mut want = set.clone();
            want.sort_unstable();
            prop_assert_eq!(all, want);
            for p in &parts {
                prop_assert!(is_delta_signal(&inst, p, delta).unwrap());
            }
        }
    }

    #[test]
    fn measure_dominance(inst in arb_instance(10), seed in any::<u64>()) {
        let (t, sched) = scheduling_number_exact(&inst).unwrap();
        sched.validate(&inst).unwrap();
        prop_assert_eq!(sched.len(), t);
        let ff = schedule_first_fit(&inst);
        ff.validate(&inst).unwrap();
        prop_assert!(t <= ff.len());
        let exact = max_avg_affectance(&inst, AvgMode::Exact).unwrap();
        let peel = max_avg_affectance(&inst, AvgMode::Peeling).unwrap();
        prop_assert!(peel.value <= exact.value + 1e-12);
        let lam = lambda_exact(&inst).unwrap();
        let sampled = lambda_sampled(&inst, 200, seed).unwrap();
        prop_assert!(sampled.value <= lam.value + 1e-12);
    }

    #[test]
    fn lambda_monotone_under_restriction(inst in arb_instance(12), s in any::<u64>()) {
        let keep = random_subset(&mut rng(s), inst.len());
        prop_assume!(!keep.is_empty());
        let sub = inst.restrict(&keep).unwrap();
        prop_assert!(lambda_exact(&sub).unwrap().value <= lambda_exact(&inst).unwrap().value + 1e-12);
    }

    #[test]
    fn json_round_trip(inst in arb_instance(12)) {
        let text = to_json_string(&inst);
        let back = from_json_str(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(to_json_string(&back), text);
        for w in inst.link_ids() {
            for v in inst.link_ids().filter(|&v| v != w) {
                let (a, b) = (inst.link_distance(w, v).unwrap(), back.link_distance(w, v).unwrap());
                prop_assert!((a - b).abs() <= 1e-12 * a);
            }
        }
    }

    #[test]
    fn dual_of_dual_restores_geometry(inst in arb_instance(10)) {
        prop_assume!(inst.directionality() == Directionality::Unidirectional);
        let dd = dual_instance(&dual_instance(&inst).unwrap()).unwrap();
        prop_assert_eq!(dd.links(), inst.links());
        for w in inst.link_ids() {
            for v in inst.link_ids().filter(|&v| v != w) {
                prop_assert_eq!(dd.link_distance(w, v).unwrap(), inst.link_distance(w, v).unwrap());
            }
        }
    }
}

#[test]
fn delta_signal_parts_are_well_separated() {
    let mut r = rng(41);
    let mut checked = 0;
    for inst in corpus(150, 12, 5) {
        let o = Oracle::new(&inst);
        let alpha = inst.params().alpha;
        for set in feasible_sets(&inst, &mut r, 10) {
            for delta in [1.0, 2.0, 3f64.powf(alpha)] {
                let q = delta.powf(1.0 / alpha);
                for part in partition_delta_signal(&inst, &set, delta).unwrap() {
                    for &u in &part {
                        for &v in &part {
                            if u == v {
                                continue;
                            }
                            let lhs = o.dist(u, v) * o.dist(v, u);
                            let rhs = q * q * o.len(u) * o.len(v);
                            assert!(lhs >= rhs - 1e-9 * rhs, "u={u} v={v}: {lhs} < {rhs}");
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    assert!(checked > 1000, "only {checked} pairs checked");
}

#[test]
fn half_of_each_feasible_set_has_low_outgoing_affectance() {
    let mut r = rng(8);
    let mut sets = 0;
    for inst in corpus(150, 12, 6) {
        for set in feasible_sets(&inst, &mut r, 10) {
            let low = set
                .iter()
                .filter(|&&v| set.iter().map(|&w| affectance(&inst, v, w, Cap::Uncapped).unwrap()).sum::<f64>() <= 2.0)
                .count();
            assert!(2 * low >= set.len(), "{low} of {}", set.len());
            sets += 1;
        }
    }
    assert!(sets > 500);
}

#[test]
fn incoming_to_shorter_links_is_bounded() {
    let mut r = rng(3);
    let mut worst: f64 = 0.0;
    for i in 0..60 {
        let power = [PowerKind::Uniform, PowerKind::Linear, PowerKind::Mean][i % 3];
        let inst = random_instance(&mut r, 40, power, i % 2 == 1, Directionality::Unidirectional);
        for slot in schedule_first_fit(&inst).slots {
            let shortest = slot.iter().map(|&v| inst.derived(v).unwrap().length).fold(f64::INFINITY, f64::min);
            for u in inst.link_ids().filter(|u| !slot.contains(u)) {
                if inst.derived(u).unwrap().length <= shortest {
                    let a: f64 = slot.iter().map(|&w| affectance(&inst, w, u, Cap::Capped).unwrap()).sum();
                    worst = worst.max(a);
                }
            }
        }
    }
    println!("largest capped a_L(u) for u shorter than a feasible L: {worst}");
    assert!(worst <= 20.0);
}

#[test]
fn dual_affectance_ratios() {
    let mut r = rng(12);
    let (mut max_ratio, mut min_ratio): (f64, f64) = (0.0, f64::INFINITY);
    let mut pairs = 0;
    for i in 0..120 {
        let noisy = i % 2 == 1;
        let inst = random_instance(&mut r, 12, PowerKind::Uniform, noisy, Directionality::Unidirectional);
        let alpha = inst.params().alpha;
        let same = reversed_with_power(&inst, inst.power().clone()).unwrap();
        let dual = dual_instance(&inst).unwrap();
        for u in inst.link_ids() {
            for v in inst.link_ids() {
                if u == v {
                    continue;
                }
                if !noisy {
                    let a = affectance(&inst, u, v, Cap::Uncapped).unwrap();
                    let b = affectance(&dual, v, u, Cap::Uncapped).unwrap();
                    assert!((b / a - 1.0).abs() <= 1e-9, "swapped dual ratio {}", b / a);
                }
                if is_feasible(&inst, &[u, v]).unwrap() {
                    let a = affectance(&inst, u, v, Cap::Capped).unwrap();
                    let b = affectance(&same, u, v, Cap::Capped).unwrap();
                    let ratio = b / a;
                    assert!(ratio <= 3f64.powf(alpha) * (1.0 + 1e-9), "ratio {ratio}");
                    max_ratio = max_ratio.max(ratio);
                    min_ratio = min_ratio.min(ratio);
                    pairs += 1;
                }
            }
        }
    }
    println!("same-power dual over {pairs} feasible pairs: ratio in [{min_ratio}, {max_ratio}]");
    assert!(pairs > 1000);
}

/// The reverse direction has no constant bound: a long link whose sender sits
/// next to a short link's receiver hits it at full strength, while in the
/// reversed set the two are a long link length apart.
#[test]
fn same_power_dual_ratio_has_no_lower_bound() {
    use sinrsched::metric::{EuclideanMetric, Metric, NodeId};
    use sinrsched::{Link, SinrParams};
    use std::collections::BTreeMap;
    let mut last = f64::INFINITY;
    for big in [10.0, 100.0, 1000.0] {
        // v: 0 -> 1 on [0, 1]; u: sender at 2, receiver at 2 + big
        let pts = BTreeMap::from([
            (NodeId(0), vec![0.0]),
            (NodeId(1), vec![1.0]),
            (NodeId(2), vec![2.0]),
            (NodeId(3), vec![2.0 + big]),
        ]);
        let inst = Instance::new(
            Metric::Euclidean(EuclideanMetric::new(1, pts).unwrap()),
            vec![Link::new(0, NodeId(0), NodeId(1)), Link::new(1, NodeId(2), NodeId(3))],
            SinrParams::new(2.0, 1.0, 0.0).unwrap(),
            PowerAssignment::Uniform(1.0),
            Directionality::Unidirectional,
        )
        .unwrap();
        assert!(is_feasible(&inst, &[0, 1]).unwrap());
        let same = reversed_with_power(&inst, inst.power().clone()).unwrap();
        let ratio = affectance(&same, 1, 0, Cap::Capped).unwrap() / affectance(&inst, 1, 0, Cap::Capped).unwrap();
        assert!(ratio < last / 50.0);
        last = ratio;
    }
    assert!(last < 1e-5);
}

#[test]
fn power_kinds_validate_as_expected() {
    let mut r = rng(2);
    for kind in [PowerKind::Uniform, PowerKind::Linear, PowerKind::Mean] {
        let inst = random_instance(&mut r, 10, kind, false, Directionality::Unidirectional);
        let rep = inst.validate_power();
        assert!(rep.length_monotone && rep.sub_linear, "{kind:?}");
        if let PowerAssignment::Table(_) = inst.power() {
            assert_eq!(kind, PowerKind::Mean);
        }
    }
}

/// Duals of feasible linear-power sets are uniform-power sets whose
/// outgoing affectance stays bounded. The bound (1 without noise) is the
/// anti-feasibility constant used below.
#[test]
fn dual_sets_of_feasible_linear_sets_are_anti_feasible() {
    let mut r = rng(44);
    let (mut sets, mut worst_out, mut worst_outside): (usize, f64, f64) = (0, 0.0, 0.0);
    for _ in 0..120 {
        let inst = random_instance(&mut r, 12, PowerKind::Linear, false, Directionality::Unidirectional);
        let dual = dual_instance(&inst).unwrap();
        assert!(matches!(dual.power(), PowerAssignment::Uniform(_)));
        for set in feasible_sets(&inst, &mut r, 10) {
            let out = |u| set.iter().map(|&v| affectance(&dual, u, v, Cap::Capped).unwrap()).sum::<f64>();
            let anti = set.iter().map(|&u| out(u)).fold(0.0, f64::max);
            worst_out = worst_out.max(anti);
            let c4 = 1.0;
            let low = set
                .iter()
                .filter(|&&v| {
                    set.iter().map(|&w| affectance(&dual, w, v, Cap::Capped).unwrap()).sum::<f64>() <= 4.0 * c4
                })
                .count();
            assert!(2 * low >= set.len());
            for u in dual.link_ids().filter(|u| !set.contains(u)) {
                worst_outside = worst_outside.max(out(u));
            }
            sets += 1;
        }
    }
    println!("{sets} dual sets: max outgoing within set {worst_out}, max from an outside link {worst_outside}");
    assert!(worst_out <= 1.0 + 1e-9);
    assert!(worst_outside <= 20.0);
}
