use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{Assignment, Polynomial, VarId};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub capacity: Rational,
}

/// An s-t network whose cut costs equal a polynomial minus `offset`.
///
/// Node 0 is the source and node `n_nodes - 1` the sink. Inner node `t + 1`
/// carries lifted variable `t`: original variables first, auxiliary nodes
/// after them. A node on the source side reads as 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowNetwork {
    pub n_nodes: usize,
    pub arcs: Vec<Arc>,
    pub offset: Rational,
    pub var_nodes: Vec<usize>,
    pub aux_nodes: Vec<usize>,
}

impl FlowNetwork {
    pub fn source(&self) -> usize {
        0
    }

    pub fn sink(&self) -> usize {
        self.n_nodes - 1
    }

    /// Total capacity of arcs leaving the source side.
    pub fn cut_cost(&self, source_side: &[bool]) -> Rational {
        assert_eq!(source_side.len(), self.n_nodes);
        self.arcs
            .iter()
            .filter(|a| source_side[a.from] && !source_side[a.to])
            .map(|a| &a.capacity)
            .sum()
    }

    /// Cut cost of the labeling `z` over all inner nodes (originals then aux).
    pub fn labeling_cost(&self, z: &Assignment) -> Rational {
        assert_eq!(z.len(), self.n_nodes - 2);
        let mut side = Vec::with_capacity(self.n_nodes);
        side.push(true);
        side.extend(z.0.iter().copied());
        side.push(false);
        self.cut_cost(&side)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_nodes < 2 {
            return Err(Error::MalformedNetwork("fewer than two nodes".into()));
        }
        for a in &self.arcs {
            if a.from >= self.n_nodes || a.to >= self.n_nodes {
                return Err(Error::MalformedNetwork(format!("arc {}->{} out of range", a.from, a.to)));
            }
            if a.from == a.to {
                return Err(Error::MalformedNetwork(format!("self arc at node {}", a.from)));
            }
            if a.capacity.is_negative() {
                return Err(Error::MalformedNetwork(format!(
                    "negative capacity on {}->{}",
                    a.from, a.to
                )));
            }
        }
        Ok(())
    }
}

/// Accumulates a quadratic polynomial with nonpositive pair coefficients,
/// each pair carrying an arc orientation, over `n_inner` lifted variables.
pub(crate) struct NetworkBuilder {
    n_vars: usize,
    n_inner: usize,
    linear: Vec<Rational>,
    pairs: BTreeMap<(usize, usize), Rational>,
    constant: Rational,
}

impl NetworkBuilder {
    pub fn new(n_vars: usize, n_aux: usize) -> Self {
        let n_inner = n_vars + n_aux;
        NetworkBuilder {
            n_vars,
            n_inner,
            linear: vec![Rational::zero(); n_inner],
            pairs: BTreeMap::new(),
            constant: Rational::zero(),
        }
    }

    pub fn add_constant(&mut self, c: &Rational) {
        self.constant += c;
    }

    pub fn add_linear(&mut self, v: usize, c: &Rational) {
        self.linear[v] += c;
    }

    /// `coef * z_from * z_to` with `coef <= 0`, realized as the arc
    /// `from -> to` of capacity `-coef` (cost `z_from (1 - z_to)`) plus
    /// `coef * z_from`.
    pub fn add_pair(&mut self, from: usize, to: usize, coef: &Rational) {
        debug_assert!(!coef.is_positive());
        if coef.is_zero() {
            return;
        }
        *self.pairs.entry((from, to)).or_insert_with(Rational::zero) -= coef;
        self.linear[from] += coef;
    }

    pub fn finish(self) -> FlowNetwork {
        let sink = self.n_inner + 1;
        let mut offset = self.constant;
        let mut source_arcs = Vec::new();
        let mut sink_arcs = Vec::new();
        for (v, c) in self.linear.into_iter().enumerate() {
            if c.is_positive() {
                sink_arcs.push(Arc { from: v + 1, to: sink, capacity: c });
            } else if c.is_negative() {
                offset += &c;
                source_arcs.push(Arc { from: 0, to: v + 1, capacity: -c });
            }
        }
        let inner = self
            .pairs
            .into_iter()
            .filter(|(_, cap)| !cap.is_zero())
            .map(|((from, to), capacity)| Arc { from: from + 1, to: to + 1, capacity });
        let mut arcs = source_arcs;
        arcs.extend(inner);
        arcs.extend(sink_arcs);
        FlowNetwork {
            n_nodes: self.n_inner + 2,
            arcs,
            offset,
            var_nodes: (1..=self.n_vars).collect(),
            aux_nodes: (self.n_vars + 1..=self.n_inner).collect(),
        }
    }
}

/// Network for a quadratic polynomial whose pair coefficients are all
/// nonpositive. Pair `(i, j)`, `i < j`, becomes the arc `i -> j`.
pub fn quadratic_to_network(p: &Polynomial) -> Result<FlowNetwork> {
    let mut b = NetworkBuilder::new(p.n_vars(), 0);
    b.add_constant(p.constant());
    for (vars, coef) in p.terms() {
        match *vars {
            [v] => b.add_linear(v, coef),
            [i, j] => {
                if coef.is_positive() {
                    return Err(Error::PositivePair { i, j });
                }
                b.add_pair(i, j, coef);
            }
            _ => {
                return Err(Error::MalformedNetwork(format!(
                    "monomial of degree {} in a quadratic network",
                    vars.len()
                )))
            }
        }
    }
    Ok(b.finish())
}

pub(crate) fn add_quadratic_layer(b: &mut NetworkBuilder, quad: &BTreeMap<(VarId, VarId), Rational>) -> Result<()> {
    for (&(i, j), coef) in quad {
        if coef.is_positive() {
            return Err(Error::Verification(format!(
                "compensated quadratic coefficient on ({i}, {j}) is {coef}"
            )));
        }
        b.add_pair(i, j, coef);
    }
    Ok(())
}
