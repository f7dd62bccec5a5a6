//! Auxiliary-node gadgets for monomials of degree three and higher.
//!
//! Every gadget polynomial has the form
//! `p(x, z) = sum_j b_j sum_i (z_j - x_i) z_j + sum_j e_j z_j` with `b_j > 0`,
//! `e_j < 0`. On an input of Hamming weight `w` the coefficient of `z_j` is
//! `(m - w) b_j + e_j`, so `min_z p = sum_j min(0, (m - w) b_j + e_j)`.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::VarId;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GadgetKind {
    /// Represents `a * prod x` with `a < 0` using one auxiliary node.
    Negative,
    /// Represents `a * prod x - a * sum_{i<j} x_i x_j` with `a > 0`.
    Positive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Gadget {
    pub kind: GadgetKind,
    pub vars: Vec<VarId>,
    #[serde(with = "rational::serde_text")]
    pub coef: Rational,
    #[serde(with = "rational::serde_text_vec")]
    pub b: Vec<Rational>,
    #[serde(with = "rational::serde_text_vec")]
    pub e: Vec<Rational>,
    /// For positive gadgets, `a`: the quadratic layer must receive
    /// `+a x_i x_j` for every pair of `vars` to recover `a * prod x` exactly.
    #[serde(skip)]
    pub compensation: Option<Rational>,
    /// `witnesses[w]` is an aux assignment attaining the minimum on inputs of
    /// Hamming weight `w`.
    #[serde(skip)]
    pub witnesses: Vec<Vec<bool>>,
}

fn check_vars(vars: &[VarId]) -> Result<Vec<VarId>> {
    let mut sorted = vars.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != vars.len() {
        return Err(Error::GadgetPrecondition("repeated variable".into()));
    }
    if sorted.len() < 3 {
        return Err(Error::GadgetPrecondition(format!(
            "monomial degree {} below 3",
            sorted.len()
        )));
    }
    Ok(sorted)
}

pub fn neg_monomial_gadget(vars: &[VarId], a: &Rational) -> Result<Gadget> {
    if !a.is_negative() {
        return Err(Error::GadgetPrecondition(format!("coefficient {a} is not negative")));
    }
    let vars = check_vars(vars)?;
    let m = vars.len();
    let witnesses = (0..=m).map(|w| vec![w == m]).collect();
    Ok(Gadget {
        kind: GadgetKind::Negative,
        vars,
        coef: a.clone(),
        b: vec![-a.clone()],
        e: vec![a.clone()],
        compensation: None,
        witnesses,
    })
}

pub fn pos_monomial_gadget(vars: &[VarId], a: &Rational) -> Result<Gadget> {
    if !a.is_positive() {
        return Err(Error::GadgetPrecondition(format!("coefficient {a} is not positive")));
    }
    let vars = check_vars(vars)?;
    let m = vars.len();
    let two_a = a * rational::int(2);
    let e_at = |j: usize| -(a * rational::int(2 * m as i64 - 4 * j as i64 + 1));
    let (b, e) = if m % 2 == 1 {
        let l = (m - 1) / 2;
        let mut b = vec![two_a.clone(); l - 1];
        b.push(a.clone());
        let mut e: Vec<Rational> = (1..l).map(e_at).collect();
        e.push(-two_a.clone());
        (b, e)
    } else {
        let l = (m - 2) / 2;
        (vec![two_a.clone(); l], (1..=l).map(e_at).collect())
    };
    let l = b.len();
    let witnesses = (0..=m)
        .map(|w| (0..l).map(|j| j < (w / 2).min(l)).collect())
        .collect();
    Ok(Gadget {
        kind: GadgetKind::Positive,
        vars,
        coef: a.clone(),
        b,
        e,
        compensation: Some(a.clone()),
        witnesses,
    })
}

impl Gadget {
    pub fn degree(&self) -> usize {
        self.vars.len()
    }

    pub fn aux_count(&self) -> usize {
        self.b.len()
    }

    /// Value of the represented polynomial on any input of Hamming weight `w`.
    pub fn target_value(&self, w: usize) -> Rational {
        let m = self.degree();
        let mut v = if w == m { self.coef.clone() } else { Rational::zero() };
        if self.kind == GadgetKind::Positive {
            let pairs = (w * w.saturating_sub(1) / 2) as i64;
            v -= &self.coef * rational::int(pairs);
        }
        v
    }

    /// `p(x, z)` for `x` over `vars` (in order) and `z` over the aux nodes.
    pub fn lifted_value(&self, x: &[bool], z: &[bool]) -> Rational {
        assert_eq!(x.len(), self.degree());
        assert_eq!(z.len(), self.aux_count());
        let off = x.iter().filter(|&&b| !b).count() as i64;
        let mut v = Rational::zero();
        for ((bj, ej), &zj) in self.b.iter().zip(&self.e).zip(z) {
            if zj {
                v += bj * rational::int(off) + ej;
            }
        }
        v
    }

    /// `min_z p(x, z)` by enumerating every aux assignment.
    pub fn min_over_aux(&self, x: &[bool]) -> Rational {
        let l = self.aux_count();
        (0..1u64 << l)
            .map(|mask| {
                let z: Vec<bool> = (0..l).map(|j| mask >> j & 1 == 1).collect();
                self.lifted_value(x, &z)
            })
            .min()
            .expect("at least one aux assignment")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn weight_input(m: usize, w: usize) -> Vec<bool> {
        (0..m).map(|i| i < w).collect()
    }

    #[test]
    fn negative_gadget_values() {
        let g = neg_monomial_gadget(&[0, 1, 2], &int(-1)).unwrap();
        assert_eq!(g.aux_count(), 1);
        assert_eq!(g.min_over_aux(&[true, true, true]), int(-1));
        assert_eq!(g.min_over_aux(&[true, false, true]), int(0));

        let g = neg_monomial_gadget(&[0, 1, 2, 3, 4], &int(-3)).unwrap();
        assert_eq!(g.min_over_aux(&[true, false, true, false, true]), int(0));
    }

    #[test]
    fn gadget_preconditions() {
        assert!(neg_monomial_gadget(&[0, 1, 2], &int(1)).is_err());
        assert!(neg_monomial_gadget(&[0, 1], &int(-1)).is_err());
        assert!(pos_monomial_gadget(&[0, 1, 2], &int(0)).is_err());
        assert!(pos_monomial_gadget(&[0, 1], &int(1)).is_err());
        assert!(pos_monomial_gadget(&[0, 1, 1], &int(1)).is_err());
    }

    #[test]
    fn positive_gadget_coefficients() {
        let g = pos_monomial_gadget(&[0, 1, 2], &int(1)).unwrap();
        assert_eq!((g.b.clone(), g.e.clone()), (vec![int(1)], vec![int(-2)]));
        let g = pos_monomial_gadget(&[0, 1, 2, 3], &int(1)).unwrap();
        assert_eq!((g.b.clone(), g.e.clone()), (vec![int(2)], vec![int(-5)]));
        let g = pos_monomial_gadget(&[0, 1, 2, 3, 4], &int(1)).unwrap();
        assert_eq!(g.b, vec![int(2), int(1)]);
        assert_eq!(g.e, vec![int(-7), int(-2)]);
        for w in 0..=5 {
            assert_eq!(g.min_over_aux(&weight_input(5, w)), g.target_value(w));
        }
    }

    #[test]
    fn even_gadget_implied_equation() {
        // sum_j e_j = -a C(m,2) + a follows from the last two equations.
        for m in [4usize, 6, 8] {
            let a = ratio(5, 2);
            let g = pos_monomial_gadget(&(0..m).collect::<Vec<_>>(), &a).unwrap();
            let sum: Rational = g.e.iter().sum();
            let expect = -(&a * int((m * (m - 1) / 2) as i64)) + &a;
            assert_eq!(sum, expect);
        }
    }

    #[test]
    fn witnesses_attain_minimum() {
        for m in 3..=8 {
            let vars: Vec<VarId> = (0..m).collect();
            for g in [
                neg_monomial_gadget(&vars, &int(-3)).unwrap(),
                pos_monomial_gadget(&vars, &int(3)).unwrap(),
            ] {
                for w in 0..=m {
                    let x = weight_input(m, w);
                    assert_eq!(g.lifted_value(&x, &g.witnesses[w]), g.target_value(w), "m={m} w={w}");
                }
            }
        }
    }
}
