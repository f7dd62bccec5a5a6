//! Graph representation of polynomials in `P_suf` and minimization by
//! minimum s-t cut.

pub mod dimacs;
pub mod gadget;
pub mod maxflow;
pub mod network;

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{Assignment, Polynomial, PolynomialBuilder, VarId};
use crate::rational::{self, Rational};
use crate::submod::{in_p_suf, MinimizerReport};

pub use gadget::{neg_monomial_gadget, pos_monomial_gadget, Gadget, GadgetKind};
pub use maxflow::{max_flow_min_cut, CutResult};
pub use network::{quadratic_to_network, Arc, FlowNetwork};

use network::{add_quadratic_layer, NetworkBuilder};

/// A network together with the lifted quadratic polynomial it realizes.
///
/// `lifted` is over the original variables followed by every gadget's aux
/// variables, in gadget order; `cut(z) + network.offset = lifted(z)`.
#[derive(Debug, Clone)]
pub struct Representation {
    pub network: FlowNetwork,
    pub lifted: Polynomial,
    pub gadgets: Vec<Gadget>,
}

impl Representation {
    pub fn n_vars(&self) -> usize {
        self.network.var_nodes.len()
    }

    pub fn n_aux(&self) -> usize {
        self.network.aux_nodes.len()
    }

    /// First aux variable (in lifted numbering) of each gadget.
    pub fn aux_offsets(&self) -> Vec<usize> {
        let mut next = self.n_vars();
        self.gadgets
            .iter()
            .map(|g| {
                let at = next;
                next += g.aux_count();
                at
            })
            .collect()
    }

    /// Aux labeling attaining `min_z lifted(x, z)`, built from the gadget
    /// witnesses.
    pub fn best_aux(&self, x: &Assignment) -> Assignment {
        let mut z = Vec::with_capacity(self.n_aux());
        for g in &self.gadgets {
            let w = g.vars.iter().filter(|&&v| x.get(v)).count();
            z.extend_from_slice(&g.witnesses[w]);
        }
        Assignment(z)
    }
}

/// Builds the gadget network for a polynomial in `P_suf`.
///
/// Degree >= 3 monomials get a gadget each; negative pair coefficients go to
/// the quadratic layer directly, together with the `+a` compensation of every
/// positive gadget.
pub fn build_network(p: &Polynomial) -> Result<Representation> {
    let report = in_p_suf(p);
    if let Some((i, j)) = report.violation {
        let excess = report
            .pairs
            .iter()
            .find(|e| e.i == i && e.j == j)
            .map(|e| rational::format_rational(&e.corrected))
            .unwrap_or_default();
        return Err(Error::NotInPsuf { i, j, excess });
    }
    let n = p.n_vars();
    let mut linear: BTreeMap<VarId, Rational> = BTreeMap::new();
    let mut quad: BTreeMap<(VarId, VarId), Rational> = BTreeMap::new();
    let mut gadgets = Vec::new();
    for (vars, coef) in p.terms() {
        match *vars {
            [v] => *linear.entry(v).or_insert_with(Rational::zero) += coef,
            [i, j] => *quad.entry((i, j)).or_insert_with(Rational::zero) += coef,
            _ if coef.is_negative() => gadgets.push(neg_monomial_gadget(vars, coef)?),
            _ => {
                let g = pos_monomial_gadget(vars, coef)?;
                for a in 0..vars.len() {
                    for b in a + 1..vars.len() {
                        *quad.entry((vars[a], vars[b])).or_insert_with(Rational::zero) += coef;
                    }
                }
                gadgets.push(g);
            }
        }
    }
    quad.retain(|_, c| !c.is_zero());

    let n_aux: usize = gadgets.iter().map(Gadget::aux_count).sum();
    let mut builder = NetworkBuilder::new(n, n_aux);
    let mut lifted = PolynomialBuilder::new(n + n_aux);
    builder.add_constant(p.constant());
    lifted.add_constant(p.constant());
    for (&v, c) in &linear {
        builder.add_linear(v, c);
        lifted.add_sorted(vec![v], c);
    }
    add_quadratic_layer(&mut builder, &quad)?;
    for (&(i, j), c) in &quad {
        lifted.add_sorted(vec![i, j], c);
    }
    let mut z = n;
    for g in &gadgets {
        let m = rational::int(g.degree() as i64);
        for (b, e) in g.b.iter().zip(&g.e) {
            let neg_b = -b;
            for &x in &g.vars {
                builder.add_pair(z, x, &neg_b);
                lifted.add_sorted(vec![x, z], &neg_b);
            }
            let lin = &m * b + e;
            builder.add_linear(z, &lin);
            lifted.add_sorted(vec![z], &lin);
            z += 1;
        }
    }
    Ok(Representation { network: builder.finish(), lifted: lifted.build(), gadgets })
}

/// Minimum, minimal and maximal minimizers of a `P_suf` polynomial from the
/// extreme minimum cuts of its network.
pub fn minimize_via_cut(p: &Polynomial) -> Result<MinimizerReport> {
    let rep = build_network(p)?;
    let cut = max_flow_min_cut(&rep.network)?;
    let project = |side: &[bool]| Assignment(rep.network.var_nodes.iter().map(|&u| side[u]).collect());
    Ok(MinimizerReport {
        min_value: cut.cut_value + &rep.network.offset,
        minimal: project(&cut.min_source_side),
        maximal: project(&cut.max_source_side),
        lattice: true,
    })
}
