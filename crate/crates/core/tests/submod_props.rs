mod common;

use common::{assignment, mask_of, random_poly, submodularize, Oracle};
use gibbscut::submod::{boundary_minimize, boundary_polynomial, in_p_suf, is_submodular_def, is_submodular_pairwise};
use gibbscut::{PartialAssignment, Polynomial, SolverLimits, VarId};
use num_traits::Signed;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn submodular_instance(seed: u64, max_n: usize) -> (ChaCha8Rng, Polynomial) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=max_n);
    let terms = rng.gen_range(1..=2 * n);
    let raw = random_poly(&mut rng, n, 4, terms, 4);
    let p = submodularize(&mut rng, &raw);
    (rng, p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn definition_and_pairwise_agree(seed in any::<u64>(), fix in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=10);
        let mut p = random_poly(&mut rng, n, 4, 2 * n, 4);
        if fix {
            p = submodularize(&mut rng, &p);
        }
        let limits = SolverLimits::default();
        let w = is_submodular_pairwise(&p, &limits).unwrap();
        prop_assert_eq!(is_submodular_def(&p, &limits).unwrap(), w.verdict);
        if let Some(v) = w.violation {
            prop_assert!(v.value.is_positive());
            let dec = p.pair_decompose(v.i, v.j).unwrap();
            prop_assert_eq!(dec.p_ij.evaluate(&v.context).unwrap(), v.value);
        }
        let (q, _) = p.nonlinear_part();
        prop_assert_eq!(is_submodular_def(&q, &limits).unwrap(), w.verdict);
    }

    #[test]
    fn nonlinear_part_is_antitone(seed in any::<u64>()) {
        let (_, p) = submodular_instance(seed, 7);
        let (q, _) = p.nonlinear_part();
        let o = Oracle::new(&q);
        let n = p.n_vars();
        for mask in 0..1usize << n {
            for i in (0..n).filter(|i| mask >> i & 1 == 0) {
                prop_assert!(o.values[mask | 1 << i] <= o.values[mask]);
            }
        }
        prop_assert_eq!(o.minimum().join, (1usize << n) - 1);
    }

    #[test]
    fn restriction_stays_submodular(seed in any::<u64>()) {
        let (mut rng, p) = submodular_instance(seed, 10);
        let n = p.n_vars();
        let block: Vec<VarId> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        prop_assume!(!block.is_empty());
        let boundary: PartialAssignment = (0..n).filter(|v| !block.contains(v)).map(|v| (v, rng.gen_bool(0.5))).collect();
        let (local, _) = boundary_polynomial(&p, &block, &boundary).unwrap();
        prop_assert!(is_submodular_def(&local, &SolverLimits::default()).unwrap());
    }

    #[test]
    fn boundary_minimizers_are_monotone(seed in any::<u64>()) {
        let (mut rng, p) = submodular_instance(seed, 10);
        let n = p.n_vars();
        let block: Vec<VarId> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        prop_assume!(!block.is_empty() && block.len() < n);
        let mut lo = PartialAssignment::new();
        let mut hi = PartialAssignment::new();
        for v in (0..n).filter(|v| !block.contains(v)) {
            let b = rng.gen_bool(0.5);
            lo.insert(v, b);
            hi.insert(v, b || rng.gen_bool(0.5));
        }
        let limits = SolverLimits::default();
        let a = boundary_minimize(&p, &block, &lo, &limits).unwrap();
        let b = boundary_minimize(&p, &block, &hi, &limits).unwrap();
        prop_assert!(a.minimal.le(&b.minimal));
        prop_assert!(a.maximal.le(&b.maximal));
        let o = Oracle::new(&p).minimum();
        for &x in &o.minimizers {
            for &y in &o.minimizers {
                prop_assert!(o.minimizers.binary_search(&(x & y)).is_ok());
                prop_assert!(o.minimizers.binary_search(&(x | y)).is_ok());
            }
        }
    }

    #[test]
    fn p_suf_implies_submodular(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=10);
        let raw = random_poly(&mut rng, n, 4, 2 * n, 4);
        let p = if rng.gen_bool(0.5) { common::psufize(&mut rng, &raw) } else { raw };
        if in_p_suf(&p).verdict {
            prop_assert!(is_submodular_def(&p, &SolverLimits::default()).unwrap());
        }
    }

    #[test]
    fn pair_condition_exact_on_nonnegative_higher_order(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(3..=8);
        let raw = random_poly(&mut rng, n, 4, 2 * n, 4);
        let terms: Vec<(Vec<VarId>, _)> = raw
            .terms()
            .map(|(v, c)| (v.to_vec(), if v.len() >= 3 { c.abs() } else { c.clone() }))
            .collect();
        let mut p = Polynomial::new(n, raw.constant().clone(), terms).unwrap();
        if rng.gen_bool(0.5) {
            p = submodularize(&mut rng, &p);
        }
        let report = in_p_suf(&p);
        let sub = is_submodular_def(&p, &SolverLimits::default()).unwrap();
        prop_assert_eq!(report.verdict, sub);
        prop_assert_eq!(report.f_plus, sub);
    }

    #[test]
    fn brute_extremes_match_enumeration(seed in any::<u64>()) {
        let (_, p) = submodular_instance(seed, 10);
        let r = gibbscut::submod::brute_minimize(&p, &SolverLimits::default()).unwrap();
        let o = Oracle::new(&p).minimum();
        prop_assert!(r.lattice);
        prop_assert_eq!(r.min_value, o.min);
        prop_assert_eq!(mask_of(&r.minimal), o.meet);
        prop_assert_eq!(r.maximal, assignment(o.join, p.n_vars()));
    }
}
