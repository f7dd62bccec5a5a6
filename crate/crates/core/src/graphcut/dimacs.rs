//! DIMACS max-flow text format. Nodes are 1-indexed on disk; capacities are
//! written as integers after multiplying by the `c scale` factor.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::rational::{self, common_denominator, Rational};

use super::network::{Arc, FlowNetwork};

pub fn write_dimacs(net: &FlowNetwork) -> String {
    let scale = common_denominator(net.arcs.iter().map(|a| &a.capacity));
    let scale_r = Rational::from_integer(scale.clone());
    let mut out = String::new();
    writeln!(out, "c scale {scale}").unwrap();
    writeln!(out, "c offset {}", rational::format_rational(&net.offset)).unwrap();
    writeln!(out, "c vars {} aux {}", net.var_nodes.len(), net.aux_nodes.len()).unwrap();
    writeln!(out, "p max {} {}", net.n_nodes, net.arcs.len()).unwrap();
    writeln!(out, "n {} s", net.source() + 1).unwrap();
    writeln!(out, "n {} t", net.sink() + 1).unwrap();
    for a in &net.arcs {
        let cap = (&a.capacity * &scale_r).to_integer();
        writeln!(out, "a {} {} {cap}", a.from + 1, a.to + 1).unwrap();
    }
    out
}

fn bad(line: usize, what: &str) -> Error {
    Error::MalformedNetwork(format!("line {line}: {what}"))
}

/// Parses a dump produced by [`write_dimacs`]. Source and sink must be the
/// first and last node; `c scale`/`c offset`/`c vars` comments are honored
/// when present.
pub fn read_dimacs(text: &str) -> Result<FlowNetwork> {
    let mut scale = BigInt::one();
    let mut offset = Rational::from_integer(BigInt::from(0));
    let mut counts: Option<(usize, usize)> = None;
    let mut vars: Option<(usize, usize)> = None;
    let (mut source, mut sink) = (None, None);
    let mut raw_arcs = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.as_slice() {
            [] => {}
            ["c", "scale", s] => scale = s.parse().map_err(|_| bad(lineno, "bad scale"))?,
            ["c", "offset", s] => offset = rational::parse_rational(s)?,
            ["c", "vars", v, "aux", a] => {
                vars = Some((
                    v.parse().map_err(|_| bad(lineno, "bad var count"))?,
                    a.parse().map_err(|_| bad(lineno, "bad aux count"))?,
                ))
            }
            ["c", ..] => {}
            ["p", "max", n, m] => {
                counts = Some((
                    n.parse().map_err(|_| bad(lineno, "bad node count"))?,
                    m.parse().map_err(|_| bad(lineno, "bad arc count"))?,
                ))
            }
            ["n", id, kind] => {
                let id: usize = id.parse().map_err(|_| bad(lineno, "bad node id"))?;
                match *kind {
                    "s" => source = Some(id),
                    "t" => sink = Some(id),
                    _ => return Err(bad(lineno, "node designation must be s or t")),
                }
            }
            ["a", u, v, cap] => {
                let u: usize = u.parse().map_err(|_| bad(lineno, "bad tail"))?;
                let v: usize = v.parse().map_err(|_| bad(lineno, "bad head"))?;
                let cap: BigInt = cap.parse().map_err(|_| bad(lineno, "bad capacity"))?;
                if u == 0 || v == 0 {
                    return Err(bad(lineno, "node ids start at 1"));
                }
                raw_arcs.push((u - 1, v - 1, cap));
            }
            _ => return Err(bad(lineno, "unrecognized line")),
        }
    }
    let (n_nodes, n_arcs) = counts.ok_or_else(|| Error::MalformedNetwork("missing problem line".into()))?;
    if n_nodes < 2 || source != Some(1) || sink != Some(n_nodes) {
        return Err(Error::MalformedNetwork("source must be node 1 and sink node N".into()));
    }
    if raw_arcs.len() != n_arcs {
        return Err(Error::MalformedNetwork(format!(
            "expected {n_arcs} arcs, found {}",
            raw_arcs.len()
        )));
    }
    let (n_vars, n_aux) = vars.unwrap_or((n_nodes - 2, 0));
    if n_vars + n_aux != n_nodes - 2 {
        return Err(Error::MalformedNetwork("variable counts do not match node count".into()));
    }
    let arcs = raw_arcs
        .into_iter()
        .map(|(from, to, cap)| Arc { from, to, capacity: Rational::new(cap, scale.clone()) })
        .collect();
    let net = FlowNetwork {
        n_nodes,
        arcs,
        offset,
        var_nodes: (1..=n_vars).collect(),
        aux_nodes: (n_vars + 1..=n_vars + n_aux).collect(),
    };
    net.validate()?;
    Ok(net)
}
