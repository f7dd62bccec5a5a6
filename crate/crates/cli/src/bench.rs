//! Seeded benchmark suites. Every instance is solved by each applicable
//! method and the minima must agree.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use gibbscut::encode::{expand_energy_model, EnergyModel, OrderedDomain};
use gibbscut::graphcut::minimize_via_cut;
use gibbscut::msfm::{msfm_minimize, MsfmConfig, PartitionStrategy};
use gibbscut::rational::{format_rational, int, parse_rational};
use gibbscut::solve::{brute_on_support, Method};
use gibbscut::{MinimizerReport, Polynomial, PolynomialBuilder, SolverLimits};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::failure::Failure;

#[derive(Debug, Deserialize)]
pub struct Suite {
    #[serde(default)]
    pub families: Vec<Family>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    /// Pairwise and triple interactions along a path.
    Chain {
        sizes: Vec<usize>,
        #[serde(default = "one")]
        count: usize,
    },
    /// Grid energy with random unaries and `g(d) = d`.
    Grid {
        width: usize,
        height: usize,
        k: usize,
        #[serde(default = "default_lambda")]
        lambda: String,
        #[serde(default = "one")]
        count: usize,
        #[serde(default = "default_tile")]
        tile: usize,
    },
}

fn one() -> usize {
    1
}

fn default_lambda() -> String {
    "2".into()
}

fn default_tile() -> usize {
    2
}

struct Instance {
    family: &'static str,
    name: String,
    poly: Polynomial,
    msfm: MsfmConfig,
}

/// Random polynomial in `P_suf`: every positive triple coefficient is paid
/// for by lowering the three pair coefficients it covers.
fn chain(rng: &mut ChaCha8Rng, n: usize) -> Result<Polynomial> {
    let mut pairs = vec![0i64; n.saturating_sub(1)];
    let mut skip = vec![0i64; n.saturating_sub(2)];
    let mut b = PolynomialBuilder::new(n);
    for v in 0..n {
        b.add_term(&[v], &int(rng.gen_range(-6..=6)))?;
    }
    for a in pairs.iter_mut() {
        *a = -rng.gen_range(0..=4);
    }
    for i in 0..n.saturating_sub(2) {
        if rng.gen_bool(0.5) {
            let t = rng.gen_range(-3..=3);
            b.add_term(&[i, i + 1, i + 2], &int(t))?;
            if t > 0 {
                pairs[i] -= t;
                pairs[i + 1] -= t;
                skip[i] -= t;
            }
        }
    }
    for (i, &a) in pairs.iter().enumerate() {
        b.add_term(&[i, i + 1], &int(a))?;
    }
    for (i, &a) in skip.iter().enumerate() {
        b.add_term(&[i, i + 2], &int(a))?;
    }
    Ok(b.build())
}

fn grid(rng: &mut ChaCha8Rng, width: usize, height: usize, k: usize, lambda: &str) -> Result<Polynomial> {
    let unary = (0..width * height)
        .map(|_| (0..=k).map(|_| int(rng.gen_range(0..=20))).collect())
        .collect();
    let g = (0..=k as i64).map(int).collect();
    let model = EnergyModel::new(width, height, OrderedDomain::indices(k), unary, g, parse_rational(lambda)?)?;
    Ok(expand_energy_model(&model)?.poly)
}

fn instances(suite: &Suite, seed: u64, limits: &SolverLimits) -> Result<Vec<Instance>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for family in &suite.families {
        match family {
            Family::Chain { sizes, count } => {
                for &n in sizes {
                    for c in 0..*count {
                        out.push(Instance {
                            family: "chain",
                            name: format!("n{n}-{c}"),
                            poly: chain(&mut rng, n)?,
                            msfm: MsfmConfig { limits: *limits, ..MsfmConfig::default() },
                        });
                    }
                }
            }
            Family::Grid { width, height, k, lambda, count, tile } => {
                if *k == 0 || *tile == 0 {
                    anyhow::bail!("grid family needs k >= 1 and tile >= 1");
                }
                let strategies: Vec<PartitionStrategy> = (0..3)
                    .map(|m| PartitionStrategy::GridTiles {
                        width: *width,
                        height: *height,
                        k: *k,
                        tile_w: tile << m,
                        tile_h: tile << m,
                    })
                    .collect();
                for c in 0..*count {
                    out.push(Instance {
                        family: "grid",
                        name: format!("{width}x{height}k{k}-{c}"),
                        poly: grid(&mut rng, *width, *height, *k, lambda)?,
                        msfm: MsfmConfig { max_levels: 3, strategies: strategies.clone(), limits: *limits },
                    });
                }
            }
        }
    }
    Ok(out)
}

struct Row {
    method: Method,
    report: MinimizerReport,
    millis: f64,
    fixed_level1: Option<usize>,
}

fn solve(inst: &Instance, method: Method) -> Result<Option<Row>> {
    let start = Instant::now();
    let (report, fixed_level1) = match method {
        Method::Brute => match brute_on_support(&inst.poly, &inst.msfm.limits) {
            Ok(r) => (r, None),
            Err(gibbscut::Error::BruteCapExceeded { .. }) => return Ok(None),
            Err(e) => return Err(e.into()),
        },
        Method::Cut => (minimize_via_cut(&inst.poly)?, None),
        Method::Msfm => {
            let (r, trace) = msfm_minimize(&inst.poly, &inst.msfm)?;
            let first = trace.levels.first().map_or(0, |l| l.newly_fixed());
            (r, Some(first))
        }
    };
    let millis = start.elapsed().as_secs_f64() * 1e3;
    Ok(Some(Row { method, report, millis, fixed_level1 }))
}

pub const HEADER: &str = "family,instance,n_vars,terms,method,min_value,time_ms,fixed_level1,agree";

/// Runs the suite and renders the CSV table. Disagreeing methods are marked
/// in the table and reported as an error after it is complete.
pub fn table(suite: &Suite, seed: u64, limits: &SolverLimits) -> Result<(String, Vec<String>)> {
    let mut csv = String::from(HEADER);
    csv.push('\n');
    let mut disagreements = Vec::new();
    for inst in instances(suite, seed, limits)? {
        let mut rows = Vec::new();
        for method in [Method::Brute, Method::Cut, Method::Msfm] {
            if let Some(row) = solve(&inst, method)? {
                rows.push(row);
            }
        }
        let reference = rows.first().map(|r| r.report.clone());
        for row in &rows {
            let agree = reference.as_ref().is_some_and(|r| *r == row.report);
            if !agree {
                disagreements.push(format!("{} {} ({})", inst.family, inst.name, row.method));
            }
            writeln!(
                csv,
                "{},{},{},{},{},{},{:.3},{},{}",
                inst.family,
                inst.name,
                inst.poly.n_vars(),
                inst.poly.num_terms(),
                row.method,
                format_rational(&row.report.min_value),
                row.millis,
                row.fixed_level1.map_or(String::new(), |f| f.to_string()),
                agree
            )?;
        }
    }
    Ok((csv, disagreements))
}

pub fn run(path: &Path, seed: u64, out: Option<&Path>, limits: &SolverLimits) -> Result<()> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let suite: Suite = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let (csv, disagreements) = table(&suite, seed, limits)?;
    match out {
        Some(p) => fs::write(p, &csv).with_context(|| format!("writing {}", p.display()))?,
        None => crate::commands::print_stdout(&csv)?,
    }
    if !disagreements.is_empty() {
        return Err(Failure::Internal(format!("methods disagree on {}", disagreements.join(", "))).into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use gibbscut::submod::in_p_suf;

    #[test]
    fn chain_instances_are_in_p_suf() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=12 {
            let p = chain(&mut rng, n).unwrap();
            assert_eq!(p.n_vars(), n);
            assert!(in_p_suf(&p).verdict);
        }
    }

    #[test]
    fn empty_suite_gives_header_only() {
        let suite: Suite = serde_json::from_str("{}").unwrap();
        let (csv, bad) = table(&suite, 0, &SolverLimits::default()).unwrap();
        assert_eq!(csv.trim_end(), HEADER);
        assert!(bad.is_empty());
    }

    #[test]
    fn same_seed_same_instances() {
        let suite: Suite = serde_json::from_str(r#"{"families":[{"family":"chain","sizes":[5,6]}]}"#).unwrap();
        let limits = SolverLimits::default();
        let a: Vec<Polynomial> = instances(&suite, 7, &limits).unwrap().into_iter().map(|i| i.poly).collect();
        let b: Vec<Polynomial> = instances(&suite, 7, &limits).unwrap().into_iter().map(|i| i.poly).collect();
        let c: Vec<Polynomial> = instances(&suite, 8, &limits).unwrap().into_iter().map(|i| i.poly).collect();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
