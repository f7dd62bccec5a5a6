//! Block-wise coordinate fixing for submodular polynomials.
//!
//! Each level partitions the free variables into blocks. A block `D` is
//! minimized twice with everything outside it held at a constant: with all
//! ones the maximal minimizer `x1` is taken, with all zeros the minimal
//! minimizer `x0`. For submodular `P` the maximal global minimizer lies below
//! `x1` and the minimal one above `x0`, so zeros of `x1` and ones of `x0` hold
//! in every global minimizer and can be fixed. Whatever is still free after
//! the last level is handed to the base solver.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::SolverLimits;
use crate::poly::{Assignment, PartialAssignment, Polynomial, PolynomialBuilder, VarId};
use crate::rational::Rational;
use crate::solve::exact_minimize;
use crate::submod::MinimizerReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PartitionStrategy {
    /// Consecutive runs of `size` free variables in ascending id order.
    Chunks { size: usize },
    /// Rectangular tiles of grid sites; variable `v` belongs to site `v / k`
    /// at column `site % width`, row `site / width`.
    GridTiles { width: usize, height: usize, k: usize, tile_w: usize, tile_h: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionPlan {
    pub blocks: Vec<Vec<VarId>>,
    pub strategy: PartitionStrategy,
}

pub fn make_partition(free_vars: &[VarId], strategy: PartitionStrategy) -> Result<PartitionPlan> {
    if free_vars.is_empty() {
        return Err(Error::EmptyPartition);
    }
    let mut vars = free_vars.to_vec();
    vars.sort_unstable();
    vars.dedup();
    let blocks = match strategy {
        PartitionStrategy::Chunks { size } => {
            if size == 0 {
                return Err(Error::ZeroPartitionSize);
            }
            vars.chunks(size).map(<[VarId]>::to_vec).collect()
        }
        PartitionStrategy::GridTiles { width, height, k, tile_w, tile_h } => {
            if tile_w == 0 || tile_h == 0 || k == 0 {
                return Err(Error::ZeroPartitionSize);
            }
            let tiles_x = width.div_ceil(tile_w);
            let mut tiles: BTreeMap<usize, Vec<VarId>> = BTreeMap::new();
            for &v in &vars {
                let site = v / k;
                if site >= width * height {
                    return Err(Error::VarOutOfRange { var: v, n_vars: width * height * k });
                }
                let (x, y) = (site % width, site / width);
                tiles.entry(y / tile_h * tiles_x + x / tile_w).or_default().push(v);
            }
            tiles.into_values().collect()
        }
    };
    Ok(PartitionPlan { blocks, strategy })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MsfmConfig {
    pub max_levels: usize,
    /// Strategy for level `m` is `strategies[m - 1]`, the last one repeating.
    pub strategies: Vec<PartitionStrategy>,
    #[serde(skip)]
    pub limits: SolverLimits,
}

impl Default for MsfmConfig {
    fn default() -> Self {
        MsfmConfig {
            max_levels: 3,
            strategies: vec![
                PartitionStrategy::Chunks { size: 8 },
                PartitionStrategy::Chunks { size: 12 },
                PartitionStrategy::Chunks { size: 14 },
            ],
            limits: SolverLimits::default(),
        }
    }
}

impl MsfmConfig {
    pub fn with_strategy(strategy: PartitionStrategy) -> Self {
        MsfmConfig { strategies: vec![strategy], ..Self::default() }
    }

    fn strategy(&self, level: usize) -> Result<PartitionStrategy> {
        self.strategies
            .get(level - 1)
            .or(self.strategies.last())
            .copied()
            .ok_or(Error::ZeroPartitionSize)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelEntry {
    pub level: usize,
    pub blocks: Vec<Vec<VarId>>,
    /// Per block, the coordinates fixed to 0.
    pub fixed_zero: Vec<Vec<VarId>>,
    /// Per block, the coordinates fixed to 1.
    pub fixed_one: Vec<Vec<VarId>>,
    /// Every coordinate fixed so far, this level included.
    pub cumulative: Vec<VarId>,
}

impl LevelEntry {
    pub fn newly_fixed(&self) -> usize {
        self.fixed_zero.iter().chain(&self.fixed_one).map(Vec::len).sum()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LevelTrace {
    pub levels: Vec<LevelEntry>,
    /// The base solver ran on a nonempty residual.
    pub fallback: bool,
    pub residual_vars: usize,
}

impl LevelTrace {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }
}

/// Monomials of `p` indexed by the variables they contain.
struct Incidence<'a> {
    terms: Vec<(&'a [VarId], &'a Rational)>,
    by_var: Vec<Vec<usize>>,
}

impl<'a> Incidence<'a> {
    fn new(p: &'a Polynomial) -> Self {
        let terms: Vec<_> = p.terms().collect();
        let mut by_var = vec![Vec::new(); p.n_vars()];
        for (t, (vars, _)) in terms.iter().enumerate() {
            for &v in vars.iter() {
                by_var[v].push(t);
            }
        }
        Incidence { terms, by_var }
    }

    /// `P{D}` with every variable outside the sorted block set to `outside`,
    /// over local variables `0..block.len()`.
    fn local(&self, block: &[VarId], outside: bool) -> Polynomial {
        let mut ids: Vec<usize> = block.iter().flat_map(|&v| self.by_var[v].iter().copied()).collect();
        ids.sort_unstable();
        ids.dedup();
        let mut b = PolynomialBuilder::new(block.len());
        'terms: for t in ids {
            let (vars, coef) = self.terms[t];
            let mut key = Vec::with_capacity(vars.len());
            for v in vars {
                match block.binary_search(v) {
                    Ok(pos) => key.push(pos),
                    Err(_) if outside => {}
                    Err(_) => continue 'terms,
                }
            }
            b.add_sorted(key, coef);
        }
        b.build()
    }
}

fn solve_block(inc: &Incidence<'_>, block: &[VarId], limits: &SolverLimits) -> Result<(Vec<VarId>, Vec<VarId>)> {
    let solve = |outside: bool| -> Result<MinimizerReport> {
        let local = inc.local(block, outside);
        match exact_minimize(&local, limits) {
            Ok((r, _)) => Ok(r),
            Err(Error::NoApplicableMethod { n }) => Err(Error::BlockUnsolvable { size: n }),
            Err(e) => Err(e),
        }
    };
    let x1 = solve(true)?.maximal;
    let x0 = solve(false)?.minimal;
    if let Some(t) = (0..block.len()).find(|&t| x0.get(t) && !x1.get(t)) {
        return Err(Error::SandwichViolated(block[t]));
    }
    let zeros = (0..block.len()).filter(|&t| !x1.get(t)).map(|t| block[t]).collect();
    let ones = (0..block.len()).filter(|&t| x0.get(t)).map(|t| block[t]).collect();
    Ok((zeros, ones))
}

/// One level over the residual `p`: blocks are solved concurrently and the
/// coordinates they force are returned. `fixed` lists what earlier levels
/// fixed and only feeds the cumulative trace set; `p` must no longer contain
/// those variables.
pub fn level_pass(
    p: &Polynomial,
    plan: &PartitionPlan,
    fixed: &PartialAssignment,
    limits: &SolverLimits,
) -> Result<(PartialAssignment, LevelEntry)> {
    let inc = Incidence::new(p);
    let mut blocks = plan.blocks.clone();
    for block in &mut blocks {
        block.sort_unstable();
        if let Some(&v) = block.iter().find(|&&v| v >= p.n_vars()) {
            return Err(Error::VarOutOfRange { var: v, n_vars: p.n_vars() });
        }
        if let Some(&v) = block.iter().find(|v| fixed.contains_key(v)) {
            return Err(Error::InvalidModel(format!("block contains fixed variable {v}")));
        }
    }
    let results: Vec<(Vec<VarId>, Vec<VarId>)> =
        blocks.par_iter().map(|block| solve_block(&inc, block, limits)).collect::<Result<_>>()?;
    let mut newly = PartialAssignment::new();
    let (mut fixed_zero, mut fixed_one) = (Vec::new(), Vec::new());
    for (zeros, ones) in results {
        newly.extend(zeros.iter().map(|&v| (v, false)));
        newly.extend(ones.iter().map(|&v| (v, true)));
        fixed_zero.push(zeros);
        fixed_one.push(ones);
    }
    let cumulative = fixed.keys().chain(newly.keys()).copied().collect::<std::collections::BTreeSet<_>>();
    let entry = LevelEntry {
        level: 0,
        blocks,
        fixed_zero,
        fixed_one,
        cumulative: cumulative.into_iter().collect(),
    };
    Ok((newly, entry))
}

/// Minimum with minimal and maximal minimizers by repeated level passes and
/// a final base solve of the residual.
pub fn msfm_minimize(p: &Polynomial, cfg: &MsfmConfig) -> Result<(MinimizerReport, LevelTrace)> {
    let n = p.n_vars();
    let mut trace = LevelTrace::default();
    if p.is_constant() {
        let report = MinimizerReport {
            min_value: p.constant().clone(),
            minimal: Assignment::zeros(n),
            maximal: Assignment::ones(n),
            lattice: true,
        };
        return Ok((report, trace));
    }
    let mut fixed = PartialAssignment::new();
    let mut residual = p.clone();
    for level in 1..=cfg.max_levels {
        let free: Vec<VarId> = (0..n).filter(|v| !fixed.contains_key(v)).collect();
        if free.is_empty() {
            break;
        }
        let plan = make_partition(&free, cfg.strategy(level)?)?;
        let (newly, mut entry) = level_pass(&residual, &plan, &fixed, &cfg.limits)?;
        entry.level = level;
        let progress = !newly.is_empty();
        trace.levels.push(entry);
        if !progress {
            break;
        }
        residual = residual.fix_variables(&newly)?;
        fixed.extend(newly);
    }
    let free = n - fixed.len();
    trace.residual_vars = free;
    let (mut minimal, mut maximal, min_value) = if free == 0 {
        (Assignment::zeros(n), Assignment::zeros(n), residual.constant().clone())
    } else {
        trace.fallback = true;
        let (r, _) = exact_minimize(&residual, &cfg.limits)?;
        (r.minimal, r.maximal, r.min_value)
    };
    for (&v, &b) in &fixed {
        minimal.0[v] = b;
        maximal.0[v] = b;
    }
    Ok((MinimizerReport { min_value, minimal, maximal, lattice: true }, trace))
}
