mod common;

use common::{assignment, mask_of, psufize, random_poly, random_quadratic, Oracle};
use gibbscut::graphcut::dimacs::{read_dimacs, write_dimacs};
use gibbscut::graphcut::{build_network, max_flow_min_cut, minimize_via_cut, quadratic_to_network};
use gibbscut::submod::brute_minimize;
use gibbscut::{Error, SolverLimits};
use num_traits::Signed;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn psuf_instance(seed: u64, max_n: usize, max_degree: usize) -> gibbscut::Polynomial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=max_n);
    let terms = rng.gen_range(1..=2 * n);
    let raw = random_poly(&mut rng, n, max_degree, terms, 4);
    psufize(&mut rng, &raw)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cut_cost_equals_lifted_polynomial(seed in any::<u64>()) {
        let p = psuf_instance(seed, 7, 5);
        let rep = build_network(&p).unwrap();
        let total = rep.lifted.n_vars();
        prop_assume!(total + 2 <= 16);
        let o = Oracle::new(&rep.lifted);
        for mask in 0..1usize << total {
            let z = assignment(mask, total);
            prop_assert_eq!(rep.network.labeling_cost(&z) + &rep.network.offset, o.value(mask));
        }
        for a in &rep.network.arcs {
            prop_assert!(!a.capacity.is_negative());
            prop_assert!(a.from != a.to);
        }
        let aux: usize = rep.gadgets.iter().map(|g| g.aux_count()).sum();
        prop_assert!(rep.network.n_nodes <= p.n_vars() + aux + 2);
    }

    #[test]
    fn lifted_minimum_projects_to_minimum(seed in any::<u64>()) {
        let p = psuf_instance(seed, 8, 5);
        let rep = build_network(&p).unwrap();
        prop_assume!(rep.lifted.n_vars() <= 18);
        let n = p.n_vars();
        let lifted = Oracle::new(&rep.lifted).minimum();
        let orig = Oracle::new(&p).minimum();
        let low = (1usize << n) - 1;
        prop_assert_eq!(&lifted.min, &orig.min);
        prop_assert_eq!(lifted.meet & low, orig.meet);
        prop_assert_eq!(lifted.join & low, orig.join);
    }

    #[test]
    fn cut_matches_brute_force(seed in any::<u64>()) {
        let p = psuf_instance(seed, 12, 5);
        let cut = minimize_via_cut(&p).unwrap();
        let brute = brute_minimize(&p, &SolverLimits::default()).unwrap();
        prop_assert_eq!(&cut, &brute);
        let o = Oracle::new(&p).minimum();
        prop_assert_eq!(mask_of(&cut.minimal), o.meet);
    }

    #[test]
    fn min_side_inside_max_side(seed in any::<u64>()) {
        let p = psuf_instance(seed, 12, 4);
        let rep = build_network(&p).unwrap();
        let cut = max_flow_min_cut(&rep.network).unwrap();
        prop_assert!(cut.min_source_side[0] && cut.max_source_side[0]);
        let t = rep.network.sink();
        prop_assert!(!cut.min_source_side[t] && !cut.max_source_side[t]);
        for (a, b) in cut.min_source_side.iter().zip(&cut.max_source_side) {
            prop_assert!(!a || *b);
        }
    }

    #[test]
    fn dimacs_dump_reproduces_minimum(seed in any::<u64>()) {
        let p = psuf_instance(seed, 10, 5);
        let rep = build_network(&p).unwrap();
        let back = read_dimacs(&write_dimacs(&rep.network)).unwrap();
        prop_assert_eq!(&back, &rep.network);
        let cut = max_flow_min_cut(&back).unwrap();
        prop_assert_eq!(cut.cut_value + &back.offset, minimize_via_cut(&p).unwrap().min_value);
    }

    #[test]
    fn quadratic_rejection_is_nonsubmodularity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=8);
        let p = random_quadratic(&mut rng, n, 2 * n, 4);
        let sub = Oracle::new(&p).submodular();
        match quadratic_to_network(&p) {
            Ok(_) => prop_assert!(sub),
            Err(Error::PositivePair { i, j }) => {
                prop_assert!(!sub);
                prop_assert!(p.coefficient(&[i, j]).is_positive());
            }
            Err(e) => prop_assert!(false, "unexpected error {}", e),
        }
    }
}
