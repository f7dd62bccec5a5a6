//! Expansion of functions over finite totally ordered label sets into
//! polynomials of ordered Boolean level variables.
//!
//! A label `j_i` in `0..=k` is written as `x_i(1) + ... + x_i(k)` with
//! `x_i(1) >= ... >= x_i(k)`. The coefficient of `x_{l1}(mu1)...x_{lm}(mum)` is
//! the mixed backward difference of `V` along `l1..lm` at the point
//! `sum mu_t e_{l_t}`; a quadratic penalty makes every unordered level
//! assignment strictly worse than the best ordered one.

use std::path::Path;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::SolverLimits;
use crate::poly::{Assignment, Polynomial, PolynomialBuilder, VarId};
use crate::rational::{self, Rational, RationalText};

/// Label values `r_0 <= r_1 <= ... <= r_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedDomain {
    values: Vec<Rational>,
}

impl OrderedDomain {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidModel("domain needs at least two values".into()));
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidModel("domain values must be nondecreasing".into()));
        }
        Ok(OrderedDomain { values })
    }

    /// `0, 1, ..., k`.
    pub fn indices(k: usize) -> Self {
        OrderedDomain {
            values: (0..=k as i64).map(rational::int).collect(),
        }
    }

    pub fn k(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, level: usize) -> &Rational {
        &self.values[level]
    }
}

type Oracle = Arc<dyn Fn(&[usize]) -> Rational + Send + Sync>;

#[derive(Clone)]
enum Backend {
    /// Row-major over `{0..k}^n`, variable 0 most significant.
    Table(Vec<Rational>),
    Oracle(Oracle),
}

/// A total function `V: {0..k}^n -> Q`.
#[derive(Clone)]
pub struct LabelFunction {
    n: usize,
    k: usize,
    backend: Backend,
}

impl std::fmt::Debug for LabelFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match self.backend {
            Backend::Table(_) => "table",
            Backend::Oracle(_) => "oracle",
        };
        f.debug_struct("LabelFunction")
            .field("n", &self.n)
            .field("k", &self.k)
            .field("backend", &kind)
            .finish()
    }
}

impl LabelFunction {
    pub fn from_table(n: usize, k: usize, table: Vec<Rational>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidModel("k must be at least 1".into()));
        }
        let expected = grid_points(n, k);
        if expected != Some(table.len()) {
            return Err(Error::InvalidModel(format!(
                "table has {} entries, expected (k+1)^n for n={n}, k={k}",
                table.len()
            )));
        }
        Ok(LabelFunction { n, k, backend: Backend::Table(table) })
    }

    pub fn from_fn<F>(n: usize, k: usize, f: F) -> Self
    where
        F: Fn(&[usize]) -> Rational + Send + Sync + 'static,
    {
        assert!(k >= 1, "label functions need k >= 1");
        LabelFunction { n, k, backend: Backend::Oracle(Arc::new(f)) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn eval(&self, j: &[usize]) -> Rational {
        assert_eq!(j.len(), self.n, "label point of wrong length");
        match &self.backend {
            Backend::Table(t) => t[self.flat_index(j)].clone(),
            Backend::Oracle(f) => f(j),
        }
    }

    fn flat_index(&self, j: &[usize]) -> usize {
        j.iter().fold(0, |acc, &ji| {
            assert!(ji <= self.k, "label {ji} above k={}", self.k);
            acc * (self.k + 1) + ji
        })
    }

    /// Values in row-major order, refusing grids above `cap` points.
    pub fn tabulate(&self, cap: usize) -> Result<Vec<Rational>> {
        let points = grid_points(self.n, self.k)
            .filter(|&p| p <= cap)
            .ok_or(Error::GridTooLarge {
                points: (self.k as u128 + 1).saturating_pow(self.n as u32),
                cap,
            })?;
        match &self.backend {
            Backend::Table(t) => Ok(t.clone()),
            Backend::Oracle(f) => {
                let mut out = Vec::with_capacity(points);
                let mut j = vec![0usize; self.n];
                for _ in 0..points {
                    out.push(f(&j));
                    advance(&mut j, self.k);
                }
                Ok(out)
            }
        }
    }
}

fn grid_points(n: usize, k: usize) -> Option<usize> {
    (k + 1).checked_pow(n as u32)
}

/// Odometer increment, last coordinate fastest.
fn advance(j: &mut [usize], k: usize) {
    for ji in j.iter_mut().rev() {
        if *ji < k {
            *ji += 1;
            return;
        }
        *ji = 0;
    }
}

/// Level variable layout: `id(i, l) = i*k + (l - 1)` for `l` in `1..=k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelMap {
    pub n: usize,
    pub k: usize,
}

impl LevelMap {
    pub fn new(n: usize, k: usize) -> Self {
        LevelMap { n, k }
    }

    pub fn n_bool(&self) -> usize {
        self.n * self.k
    }

    pub fn id(&self, var: usize, level: usize) -> VarId {
        debug_assert!(var < self.n && (1..=self.k).contains(&level));
        var * self.k + level - 1
    }

    /// Inverse of [`LevelMap::id`].
    pub fn var_level(&self, id: VarId) -> (usize, usize) {
        (id / self.k, id % self.k + 1)
    }

    /// The ordered Boolean encoding of a label vector.
    pub fn encode(&self, labels: &[usize]) -> Assignment {
        assert_eq!(labels.len(), self.n);
        let mut x = Assignment::zeros(self.n_bool());
        for (i, &j) in labels.iter().enumerate() {
            assert!(j <= self.k, "label {j} above k={}", self.k);
            for l in 1..=j {
                x.0[self.id(i, l)] = true;
            }
        }
        x
    }

    /// `j_i = sum_l x_i(l)`, rejecting unordered level vectors.
    pub fn decode(&self, x: &Assignment) -> Result<Vec<usize>> {
        if x.len() != self.n_bool() {
            return Err(Error::LengthMismatch { expected: self.n_bool(), got: x.len() });
        }
        (0..self.n)
            .map(|i| {
                let levels: Vec<bool> = (1..=self.k).map(|l| x.get(self.id(i, l))).collect();
                if levels.windows(2).any(|w| !w[0] && w[1]) {
                    return Err(Error::UnorderedLevels { var: i });
                }
                Ok(levels.iter().filter(|&&b| b).count())
            })
            .collect()
    }
}

pub fn decode_levels(x: &Assignment, map: &LevelMap) -> Result<Vec<usize>> {
    map.decode(x)
}

/// Mixed backward difference `Delta_L V(j)` by the defining recursion
/// `Delta_{L+i} V(j) = Delta_L V(j) - Delta_L V(j - e_i)`.
pub fn mixed_difference(v: &LabelFunction, indices: &[usize], j: &[usize]) -> Result<Rational> {
    for (pos, &i) in indices.iter().enumerate() {
        if i >= v.n() {
            return Err(Error::InvalidModel(format!("difference index {i} out of range")));
        }
        if indices[..pos].contains(&i) {
            return Err(Error::DuplicateIndex(i));
        }
        if j[i] == 0 {
            return Err(Error::DifferenceAtZero { index: i });
        }
    }
    let mut point = j.to_vec();
    Ok(mixed_difference_rec(v, indices, &mut point))
}

fn mixed_difference_rec(v: &LabelFunction, indices: &[usize], point: &mut Vec<usize>) -> Rational {
    match indices.split_last() {
        None => v.eval(point),
        Some((&last, rest)) => {
            let here = mixed_difference_rec(v, rest, point);
            point[last] -= 1;
            let below = mixed_difference_rec(v, rest, point);
            point[last] += 1;
            here - below
        }
    }
}

/// In place: `table[j]` becomes `Delta_{supp(j)} V(j)`, the mixed difference
/// along every axis where `j` is positive.
fn difference_transform(table: &mut [Rational], n: usize, k: usize) {
    let side = k + 1;
    for axis in 0..n {
        let stride = side.pow((n - 1 - axis) as u32);
        for idx in (0..table.len()).rev() {
            if !(idx / stride).is_multiple_of(side) {
                let below = table[idx - stride].clone();
                table[idx] -= below;
            }
        }
    }
}

/// Adds the expansion of a row-major `(k+1)^sites.len()` table over the given
/// label variables. The grid-origin value lands in the constant.
fn add_expanded_table(
    builder: &mut PolynomialBuilder,
    map: &LevelMap,
    sites: &[usize],
    diffs: &[Rational],
) {
    let k = map.k;
    let mut j = vec![0usize; sites.len()];
    for d in diffs {
        if !d.is_zero() {
            let mut key: Vec<VarId> = j
                .iter()
                .zip(sites)
                .filter(|(&jj, _)| jj > 0)
                .map(|(&jj, &site)| map.id(site, jj))
                .collect();
            key.sort_unstable();
            builder.add_sorted(key, d);
        }
        advance(&mut j, k);
    }
}

/// `tildeP` with `tildeP(encode(j)) = V(j) - V(0)`, plus `V(0)`.
#[derive(Debug, Clone)]
pub struct Expansion {
    pub poly: Polynomial,
    pub map: LevelMap,
    pub base_value: Rational,
}

pub fn expand_function(v: &LabelFunction, limits: &SolverLimits) -> Result<Expansion> {
    let mut table = v.tabulate(limits.table_cap)?;
    let map = LevelMap::new(v.n(), v.k());
    difference_transform(&mut table, v.n(), v.k());
    let sites: Vec<usize> = (0..v.n()).collect();
    let mut b = PolynomialBuilder::new(map.n_bool());
    add_expanded_table(&mut b, &map, &sites, &table);
    let (poly, base_value) = b.build().normalize_zero();
    Ok(Expansion { poly, map, base_value })
}

/// `1 + sum |coef|` over the nonconstant monomials: exceeds the range of
/// `tildeP`, so any ordering violation costs more than it can gain.
pub fn penalty_constant(tilde: &Polynomial) -> Rational {
    tilde
        .terms()
        .fold(Rational::one(), |acc, (_, c)| acc + rational::abs(c))
}

/// `tildeP + C sum_i sum_{l>=2} (x_i(l) - x_i(l-1)) x_i(l)`.
pub fn apply_order_penalty(tilde: &Polynomial, c: &Rational, map: &LevelMap) -> Result<Polynomial> {
    if !c.is_positive() {
        return Err(Error::NonPositivePenalty);
    }
    let mut b = PolynomialBuilder::new(tilde.n_vars().max(map.n_bool()));
    b.add_constant(tilde.constant());
    for (vars, coef) in tilde.terms() {
        b.add_sorted(vars.to_vec(), coef);
    }
    add_penalty(&mut b, c, map);
    Ok(b.build())
}

fn add_penalty(b: &mut PolynomialBuilder, c: &Rational, map: &LevelMap) {
    let neg = -c.clone();
    for i in 0..map.n {
        for l in 2..=map.k {
            let (lo, hi) = (map.id(i, l - 1), map.id(i, l));
            b.add_sorted(vec![hi], c);
            b.add_sorted(vec![lo, hi], &neg);
        }
    }
}

/// `U(j) = sum_s h_s(j_s) + lambda sum_{s~t} g(|j_s - j_t|)` on a
/// 4-neighbor `width x height` lattice, sites in row-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnergyModel {
    pub width: usize,
    pub height: usize,
    pub domain: OrderedDomain,
    pub unary: Vec<Vec<Rational>>,
    pub g: Vec<Rational>,
    pub lambda: Rational,
}

impl EnergyModel {
    pub fn new(
        width: usize,
        height: usize,
        domain: OrderedDomain,
        unary: Vec<Vec<Rational>>,
        g: Vec<Rational>,
        lambda: Rational,
    ) -> Result<Self> {
        let m = EnergyModel { width, height, domain, unary, g, lambda };
        m.validate()?;
        Ok(m)
    }

    pub fn k(&self) -> usize {
        self.domain.k()
    }

    pub fn n_sites(&self) -> usize {
        self.width * self.height
    }

    pub fn level_map(&self) -> LevelMap {
        LevelMap::new(self.n_sites(), self.k())
    }

    fn validate(&self) -> Result<()> {
        let k = self.k();
        if self.width == 0 || self.height == 0 {
            return Err(Error::InvalidModel("grid must be nonempty".into()));
        }
        if self.unary.len() != self.n_sites() {
            return Err(Error::InvalidModel(format!(
                "{} unary tables for {} sites",
                self.unary.len(),
                self.n_sites()
            )));
        }
        if let Some(s) = self.unary.iter().position(|h| h.len() != k + 1) {
            return Err(Error::InvalidModel(format!("unary table of site {s} needs k+1 entries")));
        }
        if self.g.len() != k + 1 {
            return Err(Error::InvalidModel("g needs k+1 entries".into()));
        }
        if self.lambda.is_negative() {
            return Err(Error::InvalidModel("lambda must be nonnegative".into()));
        }
        check_convex(&self.g)
    }

    /// Unordered neighbor pairs `(s, t)` with `s < t`: right then down.
    pub fn neighbor_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let (w, h) = (self.width, self.height);
        (0..h).flat_map(move |y| {
            (0..w).flat_map(move |x| {
                let s = y * w + x;
                let right = (x + 1 < w).then_some((s, s + 1));
                let down = (y + 1 < h).then_some((s, s + w));
                right.into_iter().chain(down)
            })
        })
    }

    pub fn energy(&self, labels: &[usize]) -> Rational {
        assert_eq!(labels.len(), self.n_sites());
        let mut u = Rational::zero();
        for (h, &j) in self.unary.iter().zip(labels) {
            u += &h[j];
        }
        let mut smooth = Rational::zero();
        for (s, t) in self.neighbor_pairs() {
            smooth += &self.g[labels[s].abs_diff(labels[t])];
        }
        u + &self.lambda * smooth
    }

    /// The energy as a label function over all sites (for small models).
    pub fn to_label_function(&self) -> LabelFunction {
        let model = self.clone();
        LabelFunction::from_fn(self.n_sites(), self.k(), move |j| model.energy(j))
    }

    pub fn from_json(text: &str, base_dir: Option<&Path>) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(text)?;
        file.into_model(base_dir)
    }
}

/// `g(d+1) - g(d)` nondecreasing on `0..=k`.
pub fn check_convex(g: &[Rational]) -> Result<()> {
    for d in 1..g.len().saturating_sub(1) {
        if &g[d + 1] - &g[d] < &g[d] - &g[d - 1] {
            return Err(Error::NonConvex { d });
        }
    }
    Ok(())
}

/// `P_V` for an energy model: per-term expansions summed, plus one shared
/// ordering penalty. Keeps the constant so that `min P_V = min U`.
#[derive(Debug, Clone)]
pub struct EnergyExpansion {
    pub poly: Polynomial,
    pub map: LevelMap,
    pub penalty: Rational,
}

pub fn expand_energy_model(m: &EnergyModel) -> Result<EnergyExpansion> {
    m.validate()?;
    let k = m.k();
    let map = m.level_map();
    let mut b = PolynomialBuilder::new(map.n_bool());

    for (site, h) in m.unary.iter().enumerate() {
        let mut diffs = h.clone();
        difference_transform(&mut diffs, 1, k);
        add_expanded_table(&mut b, &map, &[site], &diffs);
    }

    if !m.lambda.is_zero() {
        let mut pair_table: Vec<Rational> = (0..=k)
            .flat_map(|a| (0..=k).map(move |c| (a, c)))
            .map(|(a, c)| &m.lambda * &m.g[a.abs_diff(c)])
            .collect();
        difference_transform(&mut pair_table, 2, k);
        for (s, t) in m.neighbor_pairs() {
            add_expanded_table(&mut b, &map, &[s, t], &pair_table);
        }
    }

    let tilde = b.build();
    let penalty = penalty_constant(&tilde);
    let poly = apply_order_penalty(&tilde, &penalty, &map)?;
    Ok(EnergyExpansion { poly, map, penalty })
}

/// Data term comparing an observed value with a label value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DataTerm {
    Absolute,
    Quadratic,
}

impl DataTerm {
    pub fn cost(self, observed: &Rational, label_value: &Rational) -> Rational {
        let d = observed - label_value;
        match self {
            DataTerm::Absolute => d.abs(),
            DataTerm::Quadratic => &d * &d,
        }
    }
}

#[derive(Deserialize)]
struct ModelFile {
    width: usize,
    height: usize,
    k: usize,
    #[serde(default)]
    domain: Option<Vec<RationalText>>,
    unary: UnarySpec,
    pairwise: PairwiseSpec,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum UnarySpec {
    Tables(Vec<Vec<RationalText>>),
    FromImage { from_image: String, data: DataTerm },
}

#[derive(Deserialize)]
struct PairwiseSpec {
    g: Vec<RationalText>,
    lambda: RationalText,
}

fn texts(v: Vec<RationalText>) -> Result<Vec<Rational>> {
    v.into_iter().map(RationalText::into_rational).collect()
}

impl ModelFile {
    fn into_model(self, base_dir: Option<&Path>) -> Result<EnergyModel> {
        let domain = match self.domain {
            Some(values) => OrderedDomain::new(texts(values)?)?,
            None => OrderedDomain::indices(self.k),
        };
        if domain.k() != self.k {
            return Err(Error::InvalidModel("domain must have k+1 values".into()));
        }
        let unary = match self.unary {
            UnarySpec::Tables(tables) => tables.into_iter().map(texts).collect::<Result<_>>()?,
            UnarySpec::FromImage { from_image, data } => {
                let path = match base_dir {
                    Some(dir) => dir.join(&from_image),
                    None => from_image.into(),
                };
                let image = crate::pgm::GrayImage::read_file(&path)?;
                if image.width != self.width || image.height != self.height {
                    return Err(Error::InvalidModel(format!(
                        "image is {}x{}, model is {}x{}",
                        image.width, image.height, self.width, self.height
                    )));
                }
                crate::denoise::unary_costs(&image, &domain, data)
            }
        };
        EnergyModel::new(
            self.width,
            self.height,
            domain,
            unary,
            texts(self.pairwise.g)?,
            self.pairwise.lambda.into_rational()?,
        )
    }
}

/// `{"n", "k", "table": [...]}` with the table in row-major order.
#[derive(Debug, Serialize, Deserialize)]
pub struct LabelFunctionFile {
    pub n: usize,
    pub k: usize,
    #[serde(with = "rational::serde_text_vec")]
    pub table: Vec<Rational>,
}

impl LabelFunctionFile {
    pub fn into_function(self) -> Result<LabelFunction> {
        LabelFunction::from_table(self.n, self.k, self.table)
    }
}
