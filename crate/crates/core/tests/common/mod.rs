#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use gibbscut::encode::{EnergyModel, OrderedDomain};
use gibbscut::rational::{int, ratio};
use gibbscut::{Assignment, Polynomial, Rational, VarId};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

/// Exhaustive values of a polynomial, scaled to integers.
pub struct Oracle {
    pub n: usize,
    pub scale: i128,
    pub values: Vec<i128>,
}

pub struct OracleMin {
    pub min: Rational,
    pub minimizers: Vec<usize>,
    pub meet: usize,
    pub join: usize,
}

impl Oracle {
    pub fn new(p: &Polynomial) -> Oracle {
        let n = p.n_vars();
        assert!(n <= 20, "oracle enumeration limited to 20 variables");
        let mut den = BigInt::one();
        for (_, c) in p.terms() {
            den = den.lcm(c.denom());
        }
        den = den.lcm(p.constant().denom());
        let scale = den.to_i128().expect("small denominators");
        let to_int = |c: &Rational| (c * Rational::from_integer(den.clone())).to_integer().to_i128().unwrap();
        let terms: Vec<(usize, i128)> = p
            .terms()
            .map(|(vars, c)| (vars.iter().fold(0usize, |m, &v| m | 1 << v), to_int(c)))
            .collect();
        let base = to_int(p.constant());
        let values = (0..1usize << n)
            .map(|mask| base + terms.iter().filter(|(t, _)| t & mask == *t).map(|(_, c)| c).sum::<i128>())
            .collect();
        Oracle { n, scale, values }
    }

    pub fn value(&self, mask: usize) -> Rational {
        Rational::new(BigInt::from(self.values[mask]), BigInt::from(self.scale))
    }

    pub fn minimum(&self) -> OracleMin {
        let min = *self.values.iter().min().unwrap();
        let minimizers: Vec<usize> = (0..self.values.len()).filter(|&m| self.values[m] == min).collect();
        let meet = minimizers.iter().fold(usize::MAX, |a, &m| a & m) & ((1usize << self.n) - 1);
        let join = minimizers.iter().fold(0, |a, &m| a | m);
        OracleMin { min: self.value(minimizers[0]), minimizers, meet, join }
    }

    /// `f(x & y) + f(x | y) <= f(x) + f(y)` for all pairs.
    pub fn submodular(&self) -> bool {
        let len = self.values.len();
        (0..len).all(|x| (0..x).all(|y| self.values[x & y] + self.values[x | y] <= self.values[x] + self.values[y]))
    }
}

pub fn mask_of(x: &Assignment) -> usize {
    x.0.iter().enumerate().filter(|(_, &b)| b).fold(0, |m, (i, _)| m | 1 << i)
}

pub fn assignment(mask: usize, n: usize) -> Assignment {
    Assignment::from_mask(mask as u64, n)
}

fn random_coef(rng: &mut impl Rng, range: i64) -> Rational {
    let num = rng.gen_range(-range..=range);
    if rng.gen_bool(0.2) {
        ratio(num, 2)
    } else {
        int(num)
    }
}

fn random_subset(rng: &mut impl Rng, n: usize, size: usize) -> Vec<VarId> {
    let mut vars: Vec<VarId> = (0..n).collect();
    for i in 0..size {
        let j = rng.gen_range(i..n);
        vars.swap(i, j);
    }
    let mut s = vars[..size].to_vec();
    s.sort_unstable();
    s
}

/// Random polynomial with `terms` monomials of degree `1..=max_degree`.
pub fn random_poly(rng: &mut impl Rng, n: usize, max_degree: usize, terms: usize, range: i64) -> Polynomial {
    let mut list: Vec<(Vec<VarId>, Rational)> = Vec::new();
    for _ in 0..terms {
        let deg = rng.gen_range(1..=max_degree.min(n));
        list.push((random_subset(rng, n, deg), random_coef(rng, range)));
    }
    Polynomial::new(n, random_coef(rng, range), list).unwrap()
}

/// Random polynomial with only degree-2 and linear monomials.
pub fn random_quadratic(rng: &mut impl Rng, n: usize, terms: usize, range: i64) -> Polynomial {
    let mut list: Vec<(Vec<VarId>, Rational)> = Vec::new();
    for _ in 0..terms {
        let deg = if n >= 2 && rng.gen_bool(0.7) { 2 } else { 1 };
        list.push((random_subset(rng, n, deg), random_coef(rng, range)));
    }
    Polynomial::new(n, int(0), list).unwrap()
}

/// `max over contexts of P_ij`, enumerating the variables that share a
/// monomial with both `i` and `j`.
pub fn pair_max(p: &Polynomial, i: VarId, j: VarId) -> Rational {
    let parts: Vec<(Vec<VarId>, Rational)> = p
        .terms()
        .filter(|(v, _)| v.contains(&i) && v.contains(&j))
        .map(|(v, c)| (v.iter().copied().filter(|&u| u != i && u != j).collect(), c.clone()))
        .collect();
    let ctx: Vec<VarId> = parts.iter().flat_map(|(v, _)| v.iter().copied()).collect::<BTreeSet<_>>().into_iter().collect();
    assert!(ctx.len() <= 16);
    let mut best: Option<Rational> = None;
    for mask in 0..1usize << ctx.len() {
        let on = |v: &VarId| mask >> ctx.binary_search(v).unwrap() & 1 == 1;
        let val: Rational = parts.iter().filter(|(v, _)| v.iter().all(on)).map(|(_, c)| c).sum();
        if best.as_ref().is_none_or(|b| val > *b) {
            best = Some(val);
        }
    }
    best.unwrap_or_else(Rational::zero)
}

fn interacting_pairs(p: &Polynomial) -> BTreeSet<(VarId, VarId)> {
    let mut pairs = BTreeSet::new();
    for (vars, _) in p.terms() {
        for a in 0..vars.len() {
            for b in a + 1..vars.len() {
                pairs.insert((vars[a], vars[b]));
            }
        }
    }
    pairs
}

fn add_pairs(p: &Polynomial, shifts: BTreeMap<(VarId, VarId), Rational>) -> Polynomial {
    let extra = Polynomial::new(p.n_vars(), int(0), shifts.into_iter().map(|((i, j), c)| (vec![i, j], c))).unwrap();
    p + &extra
}

/// Lowers every pair coefficient until `max P_ij <= 0`.
pub fn submodularize(rng: &mut impl Rng, p: &Polynomial) -> Polynomial {
    let mut shifts = BTreeMap::new();
    for (i, j) in interacting_pairs(p) {
        let m = pair_max(p, i, j);
        if m.is_positive() {
            let slack = if rng.gen_bool(0.5) { int(0) } else { int(rng.gen_range(0..=2)) };
            shifts.insert((i, j), -(m + slack));
        }
    }
    add_pairs(p, shifts)
}

/// Lowers every pair coefficient until `a_ij + sum b+ <= 0`.
pub fn psufize(rng: &mut impl Rng, p: &Polynomial) -> Polynomial {
    let mut shifts = BTreeMap::new();
    for (i, j) in interacting_pairs(p) {
        let a = p.coefficient(&[i, j]);
        let b_plus: Rational = p
            .terms()
            .filter(|(v, c)| v.len() >= 3 && c.is_positive() && v.contains(&i) && v.contains(&j))
            .map(|(_, c)| c)
            .sum();
        let excess = a + b_plus;
        if excess.is_positive() {
            let slack = if rng.gen_bool(0.5) { int(0) } else { int(rng.gen_range(0..=2)) };
            shifts.insert((i, j), -(excess + slack));
        }
    }
    add_pairs(p, shifts)
}

/// Integer grid energy used by the row-DP oracle.
#[derive(Debug, Clone)]
pub struct IntGrid {
    pub width: usize,
    pub height: usize,
    pub k: usize,
    pub unary: Vec<Vec<i64>>,
    pub g: Vec<i64>,
    pub lambda: i64,
}

pub struct GridMin {
    pub min: i64,
    /// Coordinatewise least and greatest minimizing labelings.
    pub low: Vec<usize>,
    pub high: Vec<usize>,
}

impl IntGrid {
    pub fn random(rng: &mut impl Rng, width: usize, height: usize, k: usize) -> IntGrid {
        let unary = (0..width * height).map(|_| (0..=k).map(|_| rng.gen_range(0..12)).collect()).collect();
        let mut g = vec![0i64];
        let mut step = rng.gen_range(0..3);
        for _ in 0..k {
            g.push(g.last().unwrap() + step);
            step += rng.gen_range(0..3);
        }
        IntGrid { width, height, k, unary, g, lambda: rng.gen_range(0..4) }
    }

    pub fn model(&self) -> EnergyModel {
        EnergyModel::new(
            self.width,
            self.height,
            OrderedDomain::indices(self.k),
            self.unary.iter().map(|h| h.iter().map(|&v| int(v)).collect()).collect(),
            self.g.iter().map(|&v| int(v)).collect(),
            int(self.lambda),
        )
        .unwrap()
    }

    fn row_states(&self) -> Vec<Vec<usize>> {
        let side = self.k + 1;
        let count = side.pow(self.width as u32);
        (0..count)
            .map(|mut c| {
                let mut s = vec![0; self.width];
                for x in (0..self.width).rev() {
                    s[x] = c % side;
                    c /= side;
                }
                s
            })
            .collect()
    }

    /// Exact minimum over all `(k+1)^(width*height)` labelings by a
    /// row-by-row transfer recursion with min-marginals per site.
    pub fn solve(&self) -> GridMin {
        let (w, h) = (self.width, self.height);
        let states = self.row_states();
        let gd = |a: usize, b: usize| self.lambda * self.g[a.abs_diff(b)];
        let row_cost = |r: usize, s: &[usize]| -> i64 {
            let u: i64 = (0..w).map(|x| self.unary[r * w + x][s[x]]).sum();
            u + (1..w).map(|x| gd(s[x - 1], s[x])).sum::<i64>()
        };
        let trans: Vec<Vec<i64>> = states
            .iter()
            .map(|s| states.iter().map(|t| (0..w).map(|x| gd(s[x], t[x])).sum()).collect())
            .collect();
        let rc: Vec<Vec<i64>> = (0..h).map(|r| states.iter().map(|s| row_cost(r, s)).collect()).collect();
        let ns = states.len();
        let mut fwd = vec![rc[0].clone()];
        for r in 1..h {
            let prev = &fwd[r - 1];
            let row = (0..ns).map(|t| rc[r][t] + (0..ns).map(|s| prev[s] + trans[s][t]).min().unwrap()).collect();
            fwd.push(row);
        }
        let mut bwd = vec![vec![0i64; ns]; h];
        for r in (0..h - 1).rev() {
            bwd[r] = (0..ns).map(|s| (0..ns).map(|t| trans[s][t] + rc[r + 1][t] + bwd[r + 1][t]).min().unwrap()).collect();
        }
        let min = fwd[h - 1].iter().min().copied().unwrap();
        let mut low = vec![usize::MAX; w * h];
        let mut high = vec![0; w * h];
        for r in 0..h {
            for (si, s) in states.iter().enumerate() {
                if fwd[r][si] + bwd[r][si] == min {
                    for x in 0..w {
                        low[r * w + x] = low[r * w + x].min(s[x]);
                        high[r * w + x] = high[r * w + x].max(s[x]);
                    }
                }
            }
        }
        GridMin { min, low, high }
    }
}
