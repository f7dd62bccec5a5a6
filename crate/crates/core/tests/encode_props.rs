mod common;

use common::{IntGrid, Oracle};
use gibbscut::encode::{
    apply_order_penalty, expand_energy_model, expand_function, mixed_difference, penalty_constant, LabelFunction,
    LevelMap,
};
use gibbscut::rational::{int, ratio};
use gibbscut::submod::is_submodular_def;
use gibbscut::SolverLimits;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn table_function(rng: &mut ChaCha8Rng, n: usize, k: usize) -> LabelFunction {
    let size = (k + 1).pow(n as u32);
    let table = (0..size).map(|_| ratio(rng.gen_range(-12..=12), rng.gen_range(1..=3))).collect();
    LabelFunction::from_table(n, k, table).unwrap()
}

fn points(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..(k + 1).pow(n as u32))
        .map(|mut c| {
            let mut j = vec![0; n];
            for slot in j.iter_mut().rev() {
                *slot = c % (k + 1);
                c /= k + 1;
            }
            j
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn expansion_reproduces_differences(seed in any::<u64>(), n in 1usize..=3, k in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = table_function(&mut rng, n, k);
        let exp = expand_function(&v, &SolverLimits::default()).unwrap();
        let v0 = v.eval(&vec![0; n]);
        for j in points(n, k) {
            prop_assert_eq!(exp.poly.evaluate(&exp.map.encode(&j)).unwrap(), v.eval(&j) - &v0);
        }
    }

    #[test]
    fn mixed_difference_ignores_index_order(seed in any::<u64>(), k in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 3;
        let v = table_function(&mut rng, n, k);
        let j: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=k)).collect();
        let base = mixed_difference(&v, &[0, 1, 2], &j).unwrap();
        for perm in [[0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            prop_assert_eq!(&mixed_difference(&v, &perm, &j).unwrap(), &base);
        }
    }

    #[test]
    fn penalty_dominates(seed in any::<u64>(), n in 1usize..=3, k in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = table_function(&mut rng, n, k);
        let exp = expand_function(&v, &SolverLimits::default()).unwrap();
        let c = penalty_constant(&exp.poly);
        let pv = apply_order_penalty(&exp.poly, &c, &LevelMap::new(n, k)).unwrap();
        let o = Oracle::new(&pv).minimum();
        let v0 = v.eval(&vec![0; n]);
        let best = points(n, k).iter().map(|j| v.eval(j) - &v0).min().unwrap();
        prop_assert_eq!(&o.min, &best);
        let map = LevelMap::new(n, k);
        let decoded = map.decode(&common::assignment(o.minimizers[0], n * k)).unwrap();
        prop_assert_eq!(v.eval(&decoded) - &v0, best);
    }

    #[test]
    fn penalty_keeps_submodularity(seed in any::<u64>(), n in 1usize..=3, k in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw = common::random_poly(&mut rng, n * k, 3, 2 * n * k, 4);
        let tilde = common::submodularize(&mut rng, &raw);
        let pv = apply_order_penalty(&tilde, &penalty_constant(&tilde), &LevelMap::new(n, k)).unwrap();
        let limits = SolverLimits::default();
        prop_assert!(is_submodular_def(&tilde, &limits).unwrap());
        prop_assert!(is_submodular_def(&pv, &limits).unwrap());
    }

    #[test]
    fn energy_expansion_matches_model(seed in any::<u64>(), w in 1usize..=3, h in 1usize..=3, k in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let grid = IntGrid::random(&mut rng, w, h, k);
        let model = grid.model();
        let exp = expand_energy_model(&model).unwrap();
        for _ in 0..20 {
            let labels: Vec<usize> = (0..w * h).map(|_| rng.gen_range(0..=k)).collect();
            prop_assert_eq!(exp.poly.evaluate(&exp.map.encode(&labels)).unwrap(), model.energy(&labels));
        }
        prop_assert!(exp.penalty > int(0));
    }
}
