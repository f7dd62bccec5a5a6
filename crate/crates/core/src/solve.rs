//! Solver dispatch shared by the block solves and the command line.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphcut::minimize_via_cut;
use crate::limits::SolverLimits;
use crate::poly::{Assignment, Polynomial, VarId};
use crate::submod::{brute_minimize, in_p_suf, MinimizerReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Brute,
    Cut,
    Msfm,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Brute => "brute",
            Method::Cut => "cut",
            Method::Msfm => "msfm",
        })
    }
}

/// Exhaustive minimization over the variables that occur in some monomial.
/// Variables outside the support are 0 in the minimal and 1 in the maximal
/// minimizer.
pub fn brute_on_support(p: &Polynomial, limits: &SolverLimits) -> Result<MinimizerReport> {
    let support: Vec<VarId> = p.support().into_iter().collect();
    if support.len() > limits.brute_cap {
        return Err(Error::BruteCapExceeded { n: support.len(), cap: limits.brute_cap });
    }
    let local = brute_minimize(&p.relabel(&support)?, limits)?;
    let mut minimal = Assignment::zeros(p.n_vars());
    let mut maximal = Assignment::ones(p.n_vars());
    for (t, &v) in support.iter().enumerate() {
        minimal.0[v] = local.minimal.get(t);
        maximal.0[v] = local.maximal.get(t);
    }
    Ok(MinimizerReport { min_value: local.min_value, minimal, maximal, lattice: local.lattice })
}

/// Graph cut when the polynomial is in `P_suf`, otherwise exhaustive search
/// on its support when that fits the cap.
pub fn exact_minimize(p: &Polynomial, limits: &SolverLimits) -> Result<(MinimizerReport, Method)> {
    if in_p_suf(p).verdict {
        return Ok((minimize_via_cut(p)?, Method::Cut));
    }
    match brute_on_support(p, limits) {
        Ok(r) => Ok((r, Method::Brute)),
        Err(Error::BruteCapExceeded { n, .. }) => Err(Error::NoApplicableMethod { n }),
        Err(e) => Err(e),
    }
}
