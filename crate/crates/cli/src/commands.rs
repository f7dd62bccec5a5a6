use std::collections::BTreeMap;
use std::fs;
use std::io::Write as _;
use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use gibbscut::denoise::{denoise as run_denoise, DenoiseMethod, DenoiseParams, Smoothness};
use gibbscut::encode::{
    apply_order_penalty, expand_energy_model, expand_function, penalty_constant, DataTerm, EnergyModel,
    LabelFunctionFile,
};
use gibbscut::graphcut::dimacs::write_dimacs;
use gibbscut::graphcut::{build_network, minimize_via_cut};
use gibbscut::msfm::{msfm_minimize, LevelTrace, MsfmConfig, PartitionStrategy};
use gibbscut::pgm::{GrayImage, PgmFormat};
use gibbscut::rational::{format_rational, parse_rational};
use gibbscut::solve::{brute_on_support, Method};
use gibbscut::submod::{in_p_suf, is_submodular_pairwise};
use gibbscut::{MinimizerReport, Polynomial, SolverLimits};
use serde_json::json;

use crate::failure::Failure;
use crate::{DataArg, FormatArg, MethodArg, SmoothArg};

pub fn read_polynomial(path: &Path) -> Result<Polynomial> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Polynomial::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Writes to stdout, treating a closed pipe as success.
pub fn print_stdout(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => print_stdout(&format!("{}\n", text.trim_end())),
    }
}

fn print_json(doc: &serde_json::Value) -> Result<()> {
    emit(&serde_json::to_string_pretty(doc)?, None)
}

fn degree_counts(p: &Polynomial) -> BTreeMap<usize, usize> {
    let mut counts = BTreeMap::new();
    for (vars, _) in p.terms() {
        *counts.entry(vars.len()).or_insert(0) += 1;
    }
    counts
}

pub fn expand(input: &Path, out: Option<&Path>, map_out: Option<&Path>) -> Result<()> {
    let text = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", input.display()))?;
    let (poly, map, penalty, base) = if value.get("table").is_some() {
        let file: LabelFunctionFile = serde_json::from_value(value)?;
        let v = file.into_function()?;
        let exp = expand_function(&v, &SolverLimits::from_env())?;
        let c = penalty_constant(&exp.poly);
        let poly = apply_order_penalty(&exp.poly, &c, &exp.map)?;
        (poly, exp.map, c, Some(exp.base_value))
    } else {
        let model = EnergyModel::from_json(&text, input.parent())?;
        let exp = expand_energy_model(&model)?;
        (exp.poly, exp.map, exp.penalty, None)
    };
    emit(&poly.to_json(), out)?;
    if let Some(path) = map_out {
        let mut doc = json!({ "n": map.n, "k": map.k, "penalty": format_rational(&penalty) });
        if let Some(b) = &base {
            doc["base_value"] = json!(format_rational(b));
        }
        fs::write(path, serde_json::to_string_pretty(&doc)?)?;
    }
    let counts = degree_counts(&poly);
    let by_degree: Vec<String> = counts.iter().map(|(d, c)| format!("degree {d}: {c}")).collect();
    eprintln!("C = {}", format_rational(&penalty));
    eprintln!("{} variables, {} terms ({})", poly.n_vars(), poly.num_terms(), by_degree.join(", "));
    Ok(())
}

pub fn check(input: &Path, limits: &SolverLimits) -> Result<()> {
    let p = read_polynomial(input)?;
    let witness = is_submodular_pairwise(&p, limits)?;
    let suf = in_p_suf(&p);
    let class = match (suf.f_minus, suf.f_plus) {
        (true, true) => "both",
        (true, false) => "F-",
        (false, true) => "F+",
        (false, false) => "none",
    };
    let report = json!({
        "n_vars": p.n_vars(),
        "degree": p.degree(),
        "terms": p.num_terms(),
        "submodular": witness.verdict,
        "witness": witness.violation,
        "p_suf": suf,
        "class": class,
    });
    print_json(&report)?;
    Ok(())
}

pub fn msfm_config(block: &[usize], levels: usize, limits: SolverLimits) -> Result<MsfmConfig> {
    if block.is_empty() || block.contains(&0) || levels == 0 {
        anyhow::bail!("block sizes and level count must be positive");
    }
    Ok(MsfmConfig {
        max_levels: levels,
        strategies: block.iter().map(|&size| PartitionStrategy::Chunks { size }).collect(),
        limits,
    })
}

struct Solved {
    report: MinimizerReport,
    method: Method,
    trace: Option<LevelTrace>,
}

fn solve_msfm(p: &Polynomial, cfg: &MsfmConfig) -> Result<Solved> {
    if !is_submodular_pairwise(p, &cfg.limits)?.verdict {
        return Err(Failure::Infeasible("block fixing needs a submodular polynomial".into()).into());
    }
    let (report, trace) = msfm_minimize(p, cfg)?;
    Ok(Solved { report, method: Method::Msfm, trace: Some(trace) })
}

fn solve_with(p: &Polynomial, method: Method, cfg: &MsfmConfig) -> Result<Solved> {
    let report = match method {
        Method::Brute => brute_on_support(p, &cfg.limits)?,
        Method::Cut => minimize_via_cut(p)?,
        Method::Msfm => return solve_msfm(p, cfg),
    };
    Ok(Solved { report, method, trace: None })
}

fn infeasible(e: &anyhow::Error) -> bool {
    crate::failure::exit_code(e) == crate::failure::INFEASIBLE
}

/// Graph cut when the polynomial is in `P_suf`, then block fixing when it is
/// submodular, then exhaustive search.
fn solve_auto(p: &Polynomial, cfg: &MsfmConfig) -> Result<Solved> {
    if in_p_suf(p).verdict {
        return solve_with(p, Method::Cut, cfg);
    }
    match solve_msfm(p, cfg) {
        Ok(s) => return Ok(s),
        Err(e) if !infeasible(&e) => return Err(e),
        Err(_) => {}
    }
    solve_with(p, Method::Brute, cfg).map_err(|e| {
        if infeasible(&e) {
            Failure::Infeasible(format!("{e:#}")).into()
        } else {
            e
        }
    })
}

fn agree(a: &MinimizerReport, b: &MinimizerReport) -> bool {
    a.min_value == b.min_value && (!(a.lattice && b.lattice) || (a.minimal == b.minimal && a.maximal == b.maximal))
}

fn report_json(s: &Solved, seconds: f64) -> serde_json::Value {
    json!({
        "min_value": format_rational(&s.report.min_value),
        "minimal": s.report.minimal,
        "maximal": s.report.maximal,
        "lattice": s.report.lattice,
        "method": s.method,
        "wall_time": seconds,
    })
}

pub fn minimize(input: &Path, method: MethodArg, trace: bool, verify: bool, cfg: &MsfmConfig) -> Result<()> {
    let p = read_polynomial(input)?;
    let start = Instant::now();
    let solved = match method {
        MethodArg::Auto => solve_auto(&p, cfg)?,
        MethodArg::Brute => solve_with(&p, Method::Brute, cfg)?,
        MethodArg::Cut => solve_with(&p, Method::Cut, cfg)?,
        MethodArg::Msfm => solve_with(&p, Method::Msfm, cfg)?,
    };
    let seconds = start.elapsed().as_secs_f64();
    let mut doc = report_json(&solved, seconds);
    if trace {
        doc["trace"] = serde_json::to_value(&solved.trace)?;
    }
    if verify {
        let mut checked = Vec::new();
        for other in [Method::Brute, Method::Cut, Method::Msfm] {
            if other == solved.method {
                continue;
            }
            match solve_with(&p, other, cfg) {
                Ok(s) if agree(&s.report, &solved.report) => checked.push(other),
                Ok(s) => {
                    return Err(Failure::Internal(format!(
                        "{} reports {} but {} reports {}",
                        solved.method,
                        format_rational(&solved.report.min_value),
                        other,
                        format_rational(&s.report.min_value)
                    ))
                    .into())
                }
                Err(e) if infeasible(&e) => {}
                Err(e) => return Err(e),
            }
        }
        doc["verified_with"] = json!(checked);
    }
    print_json(&doc)?;
    Ok(())
}

pub fn msfm(input: &Path, cfg: &MsfmConfig) -> Result<()> {
    let p = read_polynomial(input)?;
    let start = Instant::now();
    let solved = solve_msfm(&p, cfg)?;
    let mut doc = report_json(&solved, start.elapsed().as_secs_f64());
    doc["config"] = serde_json::to_value(cfg)?;
    doc["trace"] = serde_json::to_value(&solved.trace)?;
    print_json(&doc)?;
    Ok(())
}

pub fn gadget_dump(input: &Path, out: Option<&Path>) -> Result<()> {
    let p = read_polynomial(input)?;
    let rep = build_network(&p)?;
    emit(&write_dimacs(&rep.network), out)?;
    eprintln!(
        "{} nodes ({} variables, {} auxiliary), {} arcs",
        rep.network.n_nodes,
        rep.n_vars(),
        rep.n_aux(),
        rep.network.arcs.len()
    );
    Ok(())
}

pub struct DenoiseOpts {
    pub levels: usize,
    pub lambda: String,
    pub data: DataArg,
    pub smooth: SmoothArg,
    pub method: MethodArg,
    pub tile: usize,
    pub format: Option<FormatArg>,
    pub limits: SolverLimits,
}

pub fn denoise(input: &Path, output: &Path, opts: &DenoiseOpts) -> Result<()> {
    let bytes = fs::read(input).with_context(|| format!("reading {}", input.display()))?;
    let image = GrayImage::parse(&bytes).with_context(|| format!("parsing {}", input.display()))?;
    let format = match opts.format {
        Some(FormatArg::Plain) => PgmFormat::Plain,
        Some(FormatArg::Raw) => PgmFormat::Raw,
        None if bytes.starts_with(b"P5") => PgmFormat::Raw,
        None => PgmFormat::Plain,
    };
    let params = DenoiseParams {
        levels: opts.levels,
        lambda: parse_rational(&opts.lambda).context("--lambda")?,
        data: match opts.data {
            DataArg::Absolute => DataTerm::Absolute,
            DataArg::Quadratic => DataTerm::Quadratic,
        },
        smooth: match opts.smooth {
            SmoothArg::Linear => Smoothness::Linear,
            SmoothArg::Quadratic => Smoothness::Quadratic,
        },
        method: match opts.method {
            MethodArg::Auto => DenoiseMethod::Auto,
            MethodArg::Brute => DenoiseMethod::Brute,
            MethodArg::Cut => DenoiseMethod::Cut,
            MethodArg::Msfm => DenoiseMethod::Msfm,
        },
        limits: opts.limits,
        tile: opts.tile,
        ..DenoiseParams::default()
    };
    let start = Instant::now();
    let result = run_denoise(&image, &params)?;
    let seconds = start.elapsed().as_secs_f64();
    result.image.write_file(output, format)?;
    eprintln!(
        "{}x{} image, {} levels, method {}, energy {}, {:.3}s",
        image.width,
        image.height,
        params.levels,
        result.method,
        format_rational(&result.report.min_value),
        seconds
    );
    if let Some(trace) = &result.trace {
        let fixed: usize = trace.levels.iter().map(|l| l.newly_fixed()).sum();
        eprintln!("{fixed} coordinates fixed over {} levels", trace.levels.len());
    }
    Ok(())
}
