//! Gray-level image restoration with a convex smoothness prior.
//!
//! Pixel values are mapped onto `k + 1` uniformly spaced representatives
//! `r_j = j * max_value / k`. The energy is a data term between the observed
//! pixel and `r_j` plus `lambda * g(|j_s - j_t|)` over 4-neighbors.

use serde::{Deserialize, Serialize};

use crate::encode::{expand_energy_model, DataTerm, EnergyModel, OrderedDomain};
use crate::error::{Error, Result};
use crate::graphcut::minimize_via_cut;
use crate::limits::SolverLimits;
use crate::msfm::{msfm_minimize, LevelTrace, MsfmConfig, PartitionStrategy};
use crate::pgm::GrayImage;
use crate::rational::{int, Rational};
use crate::solve::{brute_on_support, Method};
use crate::submod::{in_p_suf, MinimizerReport};

pub const MAX_LEVELS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Smoothness {
    /// `g(d) = d`
    Linear,
    /// `g(d) = d^2`
    Quadratic,
}

impl Smoothness {
    pub fn table(self, k: usize) -> Vec<Rational> {
        (0..=k as i64)
            .map(|d| match self {
                Smoothness::Linear => int(d),
                Smoothness::Quadratic => int(d * d),
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DenoiseMethod {
    Auto,
    Brute,
    Cut,
    Msfm,
}

#[derive(Debug, Clone)]
pub struct DenoiseParams {
    /// Number of gray levels `k + 1`, between 2 and [`MAX_LEVELS`].
    pub levels: usize,
    pub lambda: Rational,
    pub data: DataTerm,
    pub smooth: Smoothness,
    pub method: DenoiseMethod,
    pub limits: SolverLimits,
    pub msfm_levels: usize,
    /// Tile side, in sites, of the first MSFM level; it doubles per level.
    pub tile: usize,
}

impl Default for DenoiseParams {
    fn default() -> Self {
        DenoiseParams {
            levels: 4,
            lambda: int(1),
            data: DataTerm::Absolute,
            smooth: Smoothness::Linear,
            method: DenoiseMethod::Auto,
            limits: SolverLimits::default(),
            msfm_levels: 3,
            tile: 4,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DenoiseOutput {
    pub image: GrayImage,
    pub labels: Vec<usize>,
    pub report: MinimizerReport,
    pub method: Method,
    pub trace: Option<LevelTrace>,
}

/// Representatives `j * max_value / k` for `j = 0..=k`.
pub fn quantization_domain(max_value: u16, k: usize) -> Result<OrderedDomain> {
    if k == 0 {
        return Err(Error::InvalidModel("need at least two levels".into()));
    }
    OrderedDomain::new((0..=k).map(|j| Rational::new((j as i64 * max_value as i64).into(), (k as i64).into())).collect())
}

/// Index of the nearest representative, the lower one on ties.
pub fn quantize(image: &GrayImage, domain: &OrderedDomain) -> Vec<usize> {
    image
        .pixels
        .iter()
        .map(|&p| {
            let p = int(p as i64);
            (0..=domain.k())
                .min_by_key(|&j| {
                    let d = &p - domain.value(j);
                    if d < int(0) { -d } else { d }
                })
                .expect("domain is nonempty")
        })
        .collect()
}

pub fn unary_costs(image: &GrayImage, domain: &OrderedDomain, data: DataTerm) -> Vec<Vec<Rational>> {
    image
        .pixels
        .iter()
        .map(|&p| {
            let p = int(p as i64);
            domain.values().iter().map(|r| data.cost(&p, r)).collect()
        })
        .collect()
}

pub fn build_model(image: &GrayImage, params: &DenoiseParams) -> Result<EnergyModel> {
    if !(2..=MAX_LEVELS).contains(&params.levels) {
        return Err(Error::InvalidModel(format!(
            "levels must be between 2 and {MAX_LEVELS}, got {}",
            params.levels
        )));
    }
    let k = params.levels - 1;
    let domain = quantization_domain(image.max_value, k)?;
    let unary = unary_costs(image, &domain, params.data);
    EnergyModel::new(image.width, image.height, domain, unary, params.smooth.table(k), params.lambda.clone())
}

/// Pixel values `round(r_j)` for a labeling.
pub fn render(labels: &[usize], model: &EnergyModel, max_value: u16) -> Result<GrayImage> {
    let pixels = labels
        .iter()
        .map(|&j| {
            let v = model.domain.value(j).round().to_integer();
            u16::try_from(&v).map_err(|_| Error::Image(format!("level value {v} out of range")))
        })
        .collect::<Result<Vec<_>>>()?;
    GrayImage::new(model.width, model.height, max_value, pixels)
}

pub fn msfm_config(model: &EnergyModel, params: &DenoiseParams) -> MsfmConfig {
    let tile = params.tile.max(1);
    MsfmConfig {
        max_levels: params.msfm_levels.max(1),
        strategies: (0..params.msfm_levels.max(1))
            .map(|m| {
                let side = tile << m.min(16);
                PartitionStrategy::GridTiles {
                    width: model.width,
                    height: model.height,
                    k: model.k(),
                    tile_w: side,
                    tile_h: side,
                }
            })
            .collect(),
        limits: params.limits,
    }
}

pub fn denoise(image: &GrayImage, params: &DenoiseParams) -> Result<DenoiseOutput> {
    let model = build_model(image, params)?;
    let expansion = expand_energy_model(&model)?;
    let p = &expansion.poly;
    let method = match params.method {
        DenoiseMethod::Auto if in_p_suf(p).verdict => Method::Cut,
        DenoiseMethod::Auto if p.n_vars() <= params.limits.brute_cap => Method::Brute,
        DenoiseMethod::Auto => Method::Msfm,
        DenoiseMethod::Brute => Method::Brute,
        DenoiseMethod::Cut => Method::Cut,
        DenoiseMethod::Msfm => Method::Msfm,
    };
    let (report, trace) = match method {
        Method::Brute => (brute_on_support(p, &params.limits)?, None),
        Method::Cut => (minimize_via_cut(p)?, None),
        Method::Msfm => {
            let (r, t) = msfm_minimize(p, &msfm_config(&model, params))?;
            (r, Some(t))
        }
    };
    let labels = expansion.map.decode(&report.minimal)?;
    let out = render(&labels, &model, image.max_value)?;
    Ok(DenoiseOutput { image: out, labels, report, method, trace })
}
