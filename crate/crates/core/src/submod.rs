//! Submodularity and `P_suf` membership tests, the exhaustive oracle solver,
//! and boundary-restricted minimization.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits::SolverLimits;
use crate::poly::{Assignment, PartialAssignment, Polynomial, PolynomialBuilder, VarId};
use crate::rational::{self, Rational};
use crate::table::ValueTable;

/// Minimum value with the coordinatewise least and greatest minimizers.
///
/// `lattice` is true when `minimal`/`maximal` are the AND/OR of the whole
/// minimizer set (always the case for submodular inputs). Otherwise they are
/// the first and last minimizers in enumeration order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimizerReport {
    #[serde(with = "rational::serde_text")]
    pub min_value: Rational,
    pub minimal: Assignment,
    pub maximal: Assignment,
    pub lattice: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairViolation {
    pub i: VarId,
    pub j: VarId,
    /// Full-length assignment; coordinates `i`, `j` and variables outside the
    /// pair's context are 0.
    pub context: Assignment,
    #[serde(with = "rational::serde_text")]
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubmodularityWitness {
    pub verdict: bool,
    pub violation: Option<PairViolation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairLedgerEntry {
    pub i: VarId,
    pub j: VarId,
    #[serde(with = "rational::serde_text")]
    pub a_ij: Rational,
    /// Sum of positive coefficients of degree >= 3 monomials containing both.
    #[serde(with = "rational::serde_text")]
    pub b_plus: Rational,
    /// `a_ij + b_plus`, the quantity that must be `<= 0`.
    #[serde(with = "rational::serde_text")]
    pub corrected: Rational,
    /// `-a_ij + b_plus`, as the condition is literally printed.
    #[serde(with = "rational::serde_text")]
    pub literal: Rational,
    pub strict: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PsufReport {
    pub verdict: bool,
    pub pairs: Vec<PairLedgerEntry>,
    pub violation: Option<(VarId, VarId)>,
    /// Verdict under the literal `-a_ij + sum b+ <= 0` reading.
    pub literal_verdict: bool,
    /// Every interacting pair has `a_ij < 0`.
    pub all_strict: bool,
    /// All coefficients of nonlinear monomials are `<= 0`.
    pub f_minus: bool,
    /// Submodular with all coefficients of degree >= 3 nonnegative.
    pub f_plus: bool,
}

/// Submodularity straight from `f(x & y) + f(x | y) <= f(x) + f(y)`.
pub fn is_submodular_def(p: &Polynomial, limits: &SolverLimits) -> Result<bool> {
    let n = p.n_vars();
    if n > limits.brute_cap {
        return Err(Error::BruteCapExceeded { n, cap: limits.brute_cap });
    }
    let t = ValueTable::build(p)?;
    let size = 1usize << n;
    for x in 0..size {
        for y in (x + 1)..size {
            let (meet, join) = (x & y, x | y);
            if meet == x || meet == y {
                continue;
            }
            if t.values[meet] + t.values[join] > t.values[x] + t.values[y] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Monomials (as index lists into `terms`) containing each co-occurring pair.
fn pair_incidence(terms: &[(&[VarId], &Rational)]) -> BTreeMap<(VarId, VarId), Vec<usize>> {
    let mut pairs: BTreeMap<(VarId, VarId), Vec<usize>> = BTreeMap::new();
    for (idx, (vars, _)) in terms.iter().enumerate() {
        for a in 0..vars.len() {
            for b in (a + 1)..vars.len() {
                pairs.entry((vars[a], vars[b])).or_default().push(idx);
            }
        }
    }
    pairs
}

/// Maximum over contexts of `P_ij`, and the smallest-mask context reaching it.
fn pair_max(
    terms: &[(&[VarId], &Rational)],
    members: &[usize],
    i: VarId,
    j: VarId,
    n_vars: usize,
    cap: usize,
) -> Result<(Rational, Assignment)> {
    let context: Vec<VarId> = members
        .iter()
        .flat_map(|&m| terms[m].0.iter().copied())
        .filter(|&v| v != i && v != j)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if context.len() > cap {
        return Err(Error::PairContextExceeded { i, j, size: context.len(), cap });
    }
    let local: BTreeMap<VarId, VarId> = context.iter().enumerate().map(|(t, &v)| (v, t)).collect();
    let mut b = PolynomialBuilder::new(context.len());
    for &m in members {
        let (vars, coef) = terms[m];
        let key: Vec<VarId> = vars.iter().filter(|&&v| v != i && v != j).map(|v| local[v]).collect();
        b.add_sorted(key, coef);
    }
    let table = ValueTable::build(&b.build())?;
    let (best_mask, _) = table
        .values
        .iter()
        .enumerate()
        .fold((0usize, i128::MIN), |(bm, bv), (m, &v)| if v > bv { (m, v) } else { (bm, bv) });
    let mut witness = Assignment::zeros(n_vars);
    for (t, &v) in context.iter().enumerate() {
        witness.0[v] = best_mask >> t & 1 == 1;
    }
    Ok((table.value(best_mask), witness))
}

/// Submodular iff `max_x P_ij(x) <= 0` for every pair. Only pairs that share
/// a monomial are checked; `P_ij` of any other pair is identically zero.
pub fn is_submodular_pairwise(p: &Polynomial, limits: &SolverLimits) -> Result<SubmodularityWitness> {
    let terms: Vec<_> = p.terms().collect();
    for ((i, j), members) in pair_incidence(&terms) {
        let (max, context) = pair_max(&terms, &members, i, j, p.n_vars(), limits.pair_context_cap)?;
        if max.is_positive() {
            return Ok(SubmodularityWitness {
                verdict: false,
                violation: Some(PairViolation { i, j, context, value: max }),
            });
        }
    }
    Ok(SubmodularityWitness { verdict: true, violation: None })
}

/// Membership in the graph-representable class: for every interacting pair,
/// `a_ij + sum of positive higher-order coefficients containing i and j <= 0`.
pub fn in_p_suf(p: &Polynomial) -> PsufReport {
    let mut ledger: BTreeMap<(VarId, VarId), (Rational, Rational)> = BTreeMap::new();
    let mut f_minus = true;
    let mut higher_nonneg = true;
    for (vars, coef) in p.terms() {
        match vars.len() {
            0 | 1 => {}
            2 => {
                f_minus &= !coef.is_positive();
                ledger.entry((vars[0], vars[1])).or_default().0 += coef;
            }
            _ => {
                f_minus &= !coef.is_positive();
                higher_nonneg &= !coef.is_negative();
                for a in 0..vars.len() {
                    for b in (a + 1)..vars.len() {
                        let entry = ledger.entry((vars[a], vars[b])).or_default();
                        if coef.is_positive() {
                            entry.1 += coef;
                        }
                    }
                }
            }
        }
    }
    let mut pairs = Vec::with_capacity(ledger.len());
    let mut violation = None;
    let mut literal_verdict = true;
    let mut all_strict = true;
    for ((i, j), (a_ij, b_plus)) in ledger {
        let corrected = &a_ij + &b_plus;
        let literal = &b_plus - &a_ij;
        if corrected.is_positive() && violation.is_none() {
            violation = Some((i, j));
        }
        literal_verdict &= !literal.is_positive();
        let strict = a_ij.is_negative();
        all_strict &= strict;
        pairs.push(PairLedgerEntry { i, j, a_ij, b_plus, corrected, literal, strict });
    }
    let verdict = violation.is_none();
    PsufReport {
        verdict,
        pairs,
        violation,
        literal_verdict,
        all_strict,
        f_minus,
        // With no negative higher-order coefficient, max_x P_ij is reached at
        // the all-ones context and equals a_ij + sum b+.
        f_plus: higher_nonneg && verdict,
    }
}

/// Exhaustive minimum over `{0,1}^n`.
pub fn brute_minimize(p: &Polynomial, limits: &SolverLimits) -> Result<MinimizerReport> {
    let n = p.n_vars();
    if n > limits.brute_cap {
        return Err(Error::BruteCapExceeded { n, cap: limits.brute_cap });
    }
    let table = ValueTable::build(p)?;
    let min = *table.values.iter().min().expect("table is nonempty");
    let mut meet = usize::MAX;
    let mut join = 0usize;
    let mut first = None;
    let mut last = 0usize;
    for (mask, &v) in table.values.iter().enumerate() {
        if v == min {
            meet &= mask;
            join |= mask;
            first.get_or_insert(mask);
            last = mask;
        }
    }
    let meet = meet & ((1usize << n) - 1);
    let lattice = table.values[meet] == min && table.values[join] == min;
    let (lo, hi) = if lattice { (meet, join) } else { (first.unwrap_or(0), last) };
    Ok(MinimizerReport {
        min_value: table.value(lo),
        minimal: Assignment::from_mask(lo as u64, n),
        maximal: Assignment::from_mask(hi as u64, n),
        lattice,
    })
}

/// The polynomial `P{D}(x_D, boundary)` over the block variables, renumbered
/// so that local variable `t` is `block[t]` (block taken in ascending order).
pub fn boundary_polynomial(
    p: &Polynomial,
    block: &[VarId],
    boundary: &PartialAssignment,
) -> Result<(Polynomial, Vec<VarId>)> {
    let sorted: Vec<VarId> = block.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let in_block: BTreeSet<VarId> = sorted.iter().copied().collect();
    for v in 0..p.n_vars() {
        if !in_block.contains(&v) && !boundary.contains_key(&v) {
            return Err(Error::IncompleteBoundary(v));
        }
    }
    if let Some(&v) = boundary.keys().find(|v| in_block.contains(v)) {
        return Err(Error::InvalidModel(format!("boundary fixes block variable {v}")));
    }
    let (touching, _) = p.split_boundary(&sorted)?;
    let local = touching.fix_variables(boundary)?.relabel(&sorted)?;
    Ok((local, sorted))
}

/// Minimizes `P{D}` with the complement of `D` fixed to `boundary`. The
/// report is over `x_D` with `D` in ascending order.
pub fn boundary_minimize(
    p: &Polynomial,
    block: &[VarId],
    boundary: &PartialAssignment,
    limits: &SolverLimits,
) -> Result<MinimizerReport> {
    let (local, _) = boundary_polynomial(p, block, boundary)?;
    crate::solve::exact_minimize(&local, limits).map(|(report, _)| report)
}

/// Pairs `(i, j)` whose quadratic coefficient is positive.
pub fn positive_pairs(p: &Polynomial) -> Vec<(VarId, VarId)> {
    p.terms()
        .filter(|(v, c)| v.len() == 2 && c.is_positive())
        .map(|(v, _)| (v[0], v[1]))
        .collect()
}

/// True when the polynomial has no monomial of degree three or more.
pub fn is_quadratic(p: &Polynomial) -> bool {
    p.degree() <= 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use num_traits::Zero;

    fn poly(n: usize, terms: &[(&[VarId], i64)]) -> Polynomial {
        Polynomial::new(n, int(0), terms.iter().map(|(v, a)| (v.to_vec(), int(*a)))).unwrap()
    }

    fn limits() -> SolverLimits {
        SolverLimits::default()
    }

    const TIGHT: &[(&[VarId], i64)] = &[(&[0, 1, 2], 2), (&[0, 1], -3), (&[0, 2], -3), (&[1, 2], -3)];
    const LOOSE: &[(&[VarId], i64)] = &[(&[0, 1, 2], 2), (&[0, 1], -1), (&[0, 2], -3), (&[1, 2], -3)];

    #[test]
    fn definition_examples() {
        assert!(is_submodular_def(&poly(2, &[(&[0, 1], -1)]), &limits()).unwrap());
        assert!(!is_submodular_def(&poly(2, &[(&[0, 1], 1)]), &limits()).unwrap());
        assert!(is_submodular_def(&poly(3, TIGHT), &limits()).unwrap());
        let big = Polynomial::zero(15);
        assert!(matches!(
            is_submodular_def(&big, &limits()),
            Err(Error::BruteCapExceeded { n: 15, cap: 14 })
        ));
    }

    #[test]
    fn pairwise_examples() {
        let w = is_submodular_pairwise(&poly(2, &[(&[0], 1), (&[1], 1), (&[0, 1], -2)]), &limits()).unwrap();
        assert!(w.verdict);

        let w = is_submodular_pairwise(&poly(3, &[(&[0, 1, 2], 2), (&[0, 1], -1)]), &limits()).unwrap();
        assert!(!w.verdict);
        let v = w.violation.unwrap();
        assert_eq!((v.i, v.j), (0, 1));
        assert_eq!(v.context, Assignment::from_bits(&[0, 0, 1]));
        assert_eq!(v.value, int(1));

        let w = is_submodular_pairwise(&poly(3, &[(&[0], 5), (&[2], -1)]), &limits()).unwrap();
        assert!(w.verdict && w.violation.is_none());
    }

    #[test]
    fn pair_context_cap_enforced() {
        let vars: Vec<VarId> = (0..6).collect();
        let p = Polynomial::new(6, int(0), [(vars, int(1))]).unwrap();
        let tight = SolverLimits { pair_context_cap: 3, ..limits() };
        assert!(matches!(
            is_submodular_pairwise(&p, &tight),
            Err(Error::PairContextExceeded { size: 4, cap: 3, .. })
        ));
    }

    #[test]
    fn p_suf_examples() {
        let r = in_p_suf(&poly(3, TIGHT));
        assert!(r.verdict && r.f_plus && !r.f_minus);
        assert!(r.pairs.iter().all(|e| e.corrected == int(-1)));
        assert!(!r.literal_verdict);

        let r = in_p_suf(&poly(3, LOOSE));
        assert!(!r.verdict);
        assert_eq!(r.violation, Some((0, 1)));
        assert_eq!(r.pairs[0].corrected, int(1));

        let r = in_p_suf(&poly(4, &[(&[0, 1, 2], -2), (&[2, 3], -1), (&[0], 4)]));
        assert!(r.verdict && r.f_minus);
        assert!(r.pairs.iter().all(|e| e.b_plus.is_zero()));
    }

    #[test]
    fn brute_examples() {
        let r = brute_minimize(&poly(2, &[(&[0, 1], -1)]), &limits()).unwrap();
        assert_eq!(r.min_value, int(-1));
        assert_eq!(r.minimal, Assignment::from_bits(&[1, 1]));
        assert_eq!(r.maximal, Assignment::from_bits(&[1, 1]));

        let r = brute_minimize(&poly(2, &[(&[0], 1), (&[1], 1), (&[0, 1], -2)]), &limits()).unwrap();
        assert_eq!(r.min_value, int(0));
        assert_eq!(r.minimal, Assignment::from_bits(&[0, 0]));
        assert_eq!(r.maximal, Assignment::from_bits(&[1, 1]));
        assert!(r.lattice);

        let r = brute_minimize(&poly(3, TIGHT), &limits()).unwrap();
        assert_eq!(r.min_value, int(-7));
        assert_eq!(r.minimal, Assignment::ones(3));
    }

    #[test]
    fn brute_non_lattice_reports_real_minimizers() {
        // x0 + x1 - 2 x0 x1 negated: minimizers (1,0) and (0,1) only.
        let p = poly(2, &[(&[0], -1), (&[1], -1), (&[0, 1], 2)]);
        let r = brute_minimize(&p, &limits()).unwrap();
        assert!(!r.lattice);
        assert_eq!(r.min_value, int(-1));
        assert_eq!(p.evaluate(&r.minimal).unwrap(), int(-1));
        assert_eq!(p.evaluate(&r.maximal).unwrap(), int(-1));
    }

    #[test]
    fn boundary_examples() {
        let p = poly(2, &[(&[0, 1], -1)]);
        let r = boundary_minimize(&p, &[0], &[(1, true)].into(), &limits()).unwrap();
        assert_eq!(r.min_value, int(-1));
        assert_eq!(r.minimal, Assignment::from_bits(&[1]));

        let r = boundary_minimize(&p, &[0], &[(1, false)].into(), &limits()).unwrap();
        assert_eq!(r.min_value, int(0));
        assert_eq!(r.minimal, Assignment::from_bits(&[0]));
        assert_eq!(r.maximal, Assignment::from_bits(&[1]));

        let p = poly(2, &[(&[0], 1), (&[0, 1], -2)]);
        let r = boundary_minimize(&p, &[0], &[(1, true)].into(), &limits()).unwrap();
        assert_eq!(r.min_value, int(-1));
        assert_eq!(r.maximal, Assignment::from_bits(&[1]));

        assert!(matches!(
            boundary_minimize(&p, &[0], &PartialAssignment::new(), &limits()),
            Err(Error::IncompleteBoundary(1))
        ));
    }
}
