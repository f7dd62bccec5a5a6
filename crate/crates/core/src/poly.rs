//! Canonical multilinear pseudo-Boolean polynomials with exact rational
//! coefficients, and the decompositions used by the submodularity and
//! minimization machinery.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

pub type VarId = usize;

/// A vector of Boolean values indexed by [`VarId`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Assignment(pub Vec<bool>);

impl Assignment {
    pub fn zeros(n: usize) -> Self {
        Assignment(vec![false; n])
    }

    pub fn ones(n: usize) -> Self {
        Assignment(vec![true; n])
    }

    /// Low `n` bits of `mask`, bit `i` giving variable `i`.
    pub fn from_mask(mask: u64, n: usize) -> Self {
        Assignment((0..n).map(|i| mask >> i & 1 == 1).collect())
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        Assignment(bits.iter().map(|&b| b != 0).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: VarId) -> bool {
        self.0[i]
    }

    pub fn bits(&self) -> Vec<u8> {
        self.0.iter().map(|&b| b as u8).collect()
    }

    /// Coordinatewise `x <= y`.
    pub fn le(&self, other: &Assignment) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(&a, &b)| !a || b)
    }

    pub fn meet(&self, other: &Assignment) -> Assignment {
        Assignment(self.0.iter().zip(&other.0).map(|(&a, &b)| a && b).collect())
    }

    pub fn join(&self, other: &Assignment) -> Assignment {
        Assignment(self.0.iter().zip(&other.0).map(|(&a, &b)| a || b).collect())
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            write!(f, "{}", b as u8)?;
        }
        Ok(())
    }
}

impl Serialize for Assignment {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.bits().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Assignment {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let bits = Vec::<u8>::deserialize(d)?;
        if bits.iter().any(|&b| b > 1) {
            return Err(serde::de::Error::custom("assignment entries must be 0 or 1"));
        }
        Ok(Assignment::from_bits(&bits))
    }
}

/// Values for a subset of variables.
pub type PartialAssignment = BTreeMap<VarId, bool>;

/// `P = constant + sum coef * prod x_v` with var-sets stored as strictly
/// increasing sequences and no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    n_vars: usize,
    constant: Rational,
    terms: BTreeMap<Vec<VarId>, Rational>,
}

/// `P = base + x_i p_i + x_j p_j + x_i x_j p_ij`, none of the four parts
/// mentioning `x_i` or `x_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairDecomposition {
    pub i: VarId,
    pub j: VarId,
    pub base: Polynomial,
    pub p_i: Polynomial,
    pub p_j: Polynomial,
    pub p_ij: Polynomial,
}

impl PairDecomposition {
    pub fn recombine_at(&self, x: &Assignment) -> Result<Rational> {
        let mut value = self.base.evaluate(x)?;
        let (xi, xj) = (x.get(self.i), x.get(self.j));
        if xi {
            value += self.p_i.evaluate(x)?;
        }
        if xj {
            value += self.p_j.evaluate(x)?;
        }
        if xi && xj {
            value += self.p_ij.evaluate(x)?;
        }
        Ok(value)
    }
}

/// Accumulates terms in canonical form; used wherever polynomials are built
/// incrementally.
#[derive(Debug, Clone)]
pub struct PolynomialBuilder {
    n_vars: usize,
    constant: Rational,
    terms: BTreeMap<Vec<VarId>, Rational>,
}

impl PolynomialBuilder {
    pub fn new(n_vars: usize) -> Self {
        PolynomialBuilder {
            n_vars,
            constant: Rational::zero(),
            terms: BTreeMap::new(),
        }
    }

    pub fn add_constant(&mut self, c: &Rational) -> &mut Self {
        self.constant += c;
        self
    }

    /// Adds `coef * prod vars`; `vars` may be in any order but must be
    /// duplicate-free and in range. An empty var-set adds to the constant.
    pub fn add_term(&mut self, vars: &[VarId], coef: &Rational) -> Result<&mut Self> {
        let mut key = vars.to_vec();
        key.sort_unstable();
        for w in key.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateVar(w[0]));
            }
        }
        if let Some(&v) = key.last() {
            if v >= self.n_vars {
                return Err(Error::VarOutOfRange { var: v, n_vars: self.n_vars });
            }
        }
        self.add_sorted(key, coef);
        Ok(self)
    }

    pub(crate) fn add_sorted(&mut self, key: Vec<VarId>, coef: &Rational) {
        if coef.is_zero() {
            return;
        }
        if key.is_empty() {
            self.constant += coef;
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coef.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coef;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn build(self) -> Polynomial {
        Polynomial {
            n_vars: self.n_vars,
            constant: self.constant,
            terms: self.terms,
        }
    }
}

impl Polynomial {
    /// Canonicalizes a list of `(var-set, coef)` terms: var-sets are sorted,
    /// duplicates merged and zero coefficients dropped.
    pub fn new<I, V>(n_vars: usize, constant: Rational, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (V, Rational)>,
        V: AsRef<[VarId]>,
    {
        let mut b = PolynomialBuilder::new(n_vars);
        b.add_constant(&constant);
        for (vars, coef) in terms {
            b.add_term(vars.as_ref(), &coef)?;
        }
        Ok(b.build())
    }

    pub fn zero(n_vars: usize) -> Self {
        PolynomialBuilder::new(n_vars).build()
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    /// Nonconstant monomials in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&[VarId], &Rational)> + '_ {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, vars: &[VarId]) -> Rational {
        if vars.is_empty() {
            return self.constant.clone();
        }
        let mut key = vars.to_vec();
        key.sort_unstable();
        self.terms.get(&key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.constant.is_zero()
    }

    /// True when no monomial depends on a variable.
    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    /// Variables that occur in at least one monomial.
    pub fn support(&self) -> BTreeSet<VarId> {
        self.terms.keys().flatten().copied().collect()
    }

    pub fn evaluate(&self, x: &Assignment) -> Result<Rational> {
        if x.len() != self.n_vars {
            return Err(Error::LengthMismatch { expected: self.n_vars, got: x.len() });
        }
        let mut value = self.constant.clone();
        for (vars, coef) in &self.terms {
            if vars.iter().all(|&v| x.get(v)) {
                value += coef;
            }
        }
        Ok(value)
    }

    /// Substitutes the fixed values. Variable ids are kept; the result simply
    /// no longer mentions the fixed variables, so it evaluates on any
    /// completion to the value of `self` at the combined assignment.
    pub fn fix_variables(&self, part: &PartialAssignment) -> Result<Polynomial> {
        if let Some((&v, _)) = part.iter().find(|(&v, _)| v >= self.n_vars) {
            return Err(Error::VarOutOfRange { var: v, n_vars: self.n_vars });
        }
        let mut b = PolynomialBuilder::new(self.n_vars);
        b.add_constant(&self.constant);
        'terms: for (vars, coef) in &self.terms {
            let mut rest = Vec::with_capacity(vars.len());
            for &v in vars {
                match part.get(&v) {
                    Some(false) => continue 'terms,
                    Some(true) => {}
                    None => rest.push(v),
                }
            }
            b.add_sorted(rest, coef);
        }
        Ok(b.build())
    }

    /// `(P{D}, rest)`: monomials touching `D`, and everything else
    /// (including the constant).
    pub fn split_boundary(&self, d: &[VarId]) -> Result<(Polynomial, Polynomial)> {
        let set = self.var_set(d)?;
        let mut touching = PolynomialBuilder::new(self.n_vars);
        let mut rest = PolynomialBuilder::new(self.n_vars);
        rest.add_constant(&self.constant);
        for (vars, coef) in &self.terms {
            if vars.iter().any(|v| set.contains(v)) {
                touching.add_sorted(vars.clone(), coef);
            } else {
                rest.add_sorted(vars.clone(), coef);
            }
        }
        Ok((touching.build(), rest.build()))
    }

    pub fn pair_decompose(&self, i: VarId, j: VarId) -> Result<PairDecomposition> {
        if i == j {
            return Err(Error::SamePair(i));
        }
        for v in [i, j] {
            if v >= self.n_vars {
                return Err(Error::VarOutOfRange { var: v, n_vars: self.n_vars });
            }
        }
        let mut parts: [PolynomialBuilder; 4] =
            std::array::from_fn(|_| PolynomialBuilder::new(self.n_vars));
        parts[0].add_constant(&self.constant);
        for (vars, coef) in &self.terms {
            let has_i = vars.contains(&i);
            let has_j = vars.contains(&j);
            let rest: Vec<VarId> = vars.iter().copied().filter(|&v| v != i && v != j).collect();
            let slot = match (has_i, has_j) {
                (false, false) => 0,
                (true, false) => 1,
                (false, true) => 2,
                (true, true) => 3,
            };
            parts[slot].add_sorted(rest, coef);
        }
        let [base, p_i, p_j, p_ij] = parts.map(PolynomialBuilder::build);
        Ok(PairDecomposition { i, j, base, p_i, p_j, p_ij })
    }

    /// `(Q, L)`: monomials of degree at least two, and the linear part plus
    /// constant.
    pub fn nonlinear_part(&self) -> (Polynomial, Polynomial) {
        let mut q = PolynomialBuilder::new(self.n_vars);
        let mut l = PolynomialBuilder::new(self.n_vars);
        l.add_constant(&self.constant);
        for (vars, coef) in &self.terms {
            if vars.len() >= 2 {
                q.add_sorted(vars.clone(), coef);
            } else {
                l.add_sorted(vars.clone(), coef);
            }
        }
        (q.build(), l.build())
    }

    /// Splits off the constant so that the returned polynomial vanishes at
    /// the zero vector.
    pub fn normalize_zero(&self) -> (Polynomial, Rational) {
        let mut p = self.clone();
        let c = std::mem::take(&mut p.constant);
        (p, c)
    }

    /// Renumbers onto `keep` (variable `keep[t]` becomes `t`). Every variable
    /// occurring in a monomial must be listed.
    pub fn relabel(&self, keep: &[VarId]) -> Result<Polynomial> {
        let index: BTreeMap<VarId, VarId> = keep.iter().enumerate().map(|(t, &v)| (v, t)).collect();
        if index.len() != keep.len() {
            let mut seen = BTreeSet::new();
            let dup = keep.iter().find(|v| !seen.insert(**v)).copied().unwrap_or(0);
            return Err(Error::DuplicateVar(dup));
        }
        let mut b = PolynomialBuilder::new(keep.len());
        b.add_constant(&self.constant);
        for (vars, coef) in &self.terms {
            let mut key = Vec::with_capacity(vars.len());
            for v in vars {
                let t = index
                    .get(v)
                    .ok_or(Error::VarOutOfRange { var: *v, n_vars: keep.len() })?;
                key.push(*t);
            }
            key.sort_unstable();
            b.add_sorted(key, coef);
        }
        Ok(b.build())
    }

    /// The same polynomial viewed over more variables.
    pub fn widen(&self, n_vars: usize) -> Polynomial {
        let mut p = self.clone();
        p.n_vars = p.n_vars.max(n_vars);
        p
    }

    fn var_set(&self, d: &[VarId]) -> Result<BTreeSet<VarId>> {
        let mut set = BTreeSet::new();
        for &v in d {
            if v >= self.n_vars {
                return Err(Error::VarOutOfRange { var: v, n_vars: self.n_vars });
            }
            set.insert(v);
        }
        Ok(set)
    }

    pub fn to_file(&self) -> PolynomialFile {
        PolynomialFile {
            n_vars: self.n_vars,
            constant: self.constant.clone(),
            monomials: self
                .terms
                .iter()
                .map(|(vars, coef)| MonomialEntry { vars: vars.clone(), coef: coef.clone() })
                .collect(),
        }
    }

    pub fn from_file(file: PolynomialFile) -> Result<Polynomial> {
        Polynomial::new(
            file.n_vars,
            file.constant,
            file.monomials.into_iter().map(|m| (m.vars, m.coef)),
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("polynomial serializes")
    }

    pub fn from_json(text: &str) -> Result<Polynomial> {
        Polynomial::from_file(serde_json::from_str(text)?)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if !self.constant.is_zero() || self.terms.is_empty() {
            write!(f, "{}", self.constant)?;
            first = false;
        }
        for (vars, coef) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if !coef.is_one() {
                write!(f, "{}*", coef)?;
            }
            let names: Vec<String> = vars.iter().map(|v| format!("x{v}")).collect();
            write!(f, "{}", names.join("*"))?;
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut b = PolynomialBuilder::new(self.n_vars.max(rhs.n_vars));
        b.add_constant(&self.constant).add_constant(&rhs.constant);
        for (vars, coef) in self.terms.iter().chain(&rhs.terms) {
            b.add_sorted(vars.clone(), coef);
        }
        b.build()
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut b = PolynomialBuilder::new(self.n_vars.max(rhs.n_vars));
        b.add_constant(&self.constant).add_constant(&-rhs.constant.clone());
        for (vars, coef) in &self.terms {
            b.add_sorted(vars.clone(), coef);
        }
        for (vars, coef) in &rhs.terms {
            b.add_sorted(vars.clone(), &-coef.clone());
        }
        b.build()
    }
}

/// JSON form: `{"n_vars", "constant": "p/q", "monomials": [{"vars", "coef"}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolynomialFile {
    pub n_vars: usize,
    #[serde(with = "rational::serde_text", default = "Rational::zero")]
    pub constant: Rational,
    #[serde(default)]
    pub monomials: Vec<MonomialEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonomialEntry {
    pub vars: Vec<VarId>,
    #[serde(with = "rational::serde_text")]
    pub coef: Rational,
}
