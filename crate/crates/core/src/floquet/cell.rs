//! Unit cell of a periodic graph and its text format `bsgraph.cell.v1`.
//!
//! ```text
//! bsgraph.cell.v1
//! nu 2
//! vertex 0 n=4 r=1
//! T 1+0i 1+0i 1+0i
//! S 2.5+0i
//! edge length=1 from=0:0 to=0:1 phase=1
//! edge length=1.618 from=0:2 to=0:3 phase=2
//! ```
//!
//! A vertex block has `r` rows `T` with `n - r` entries and `r` rows `S`
//! with `r` entries. An edge joins port `from` to port `to`; with a phase
//! index `l` it crosses the cell boundary and its forward bond picks up
//! `exp(i theta_l)`.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_complex::Complex64;

use super::coupling::{CMatrix, VertexCouplingST};
use super::FloquetError;

pub const CELL_FORMAT: &str = "bsgraph.cell.v1";

/// A vertex port `(vertex, port)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Port {
    pub vertex: usize,
    pub port: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub length: f64,
    pub from: Port,
    pub to: Port,
    /// Quasimomentum component (0-based) for edges crossing the cell boundary.
    pub phase: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnitCellGraph {
    nu: usize,
    vertices: Vec<VertexCouplingST>,
    edges: Vec<Edge>,
}

impl UnitCellGraph {
    /// Checks that every port is used by exactly one edge end, lengths are
    /// positive and phase indices are below `nu`.
    pub fn new(nu: usize, vertices: Vec<VertexCouplingST>, edges: Vec<Edge>) -> Result<Self, FloquetError> {
        let mut used: Vec<Vec<bool>> = vertices.iter().map(|v| vec![false; v.degree()]).collect();
        for (i, e) in edges.iter().enumerate() {
            if !(e.length > 0.0 && e.length.is_finite()) {
                return Err(FloquetError::InvalidCell(format!("edge {i}: length must be positive")));
            }
            if let Some(l) = e.phase {
                if l >= nu {
                    return Err(FloquetError::InvalidCell(format!("edge {i}: phase index {} exceeds nu = {nu}", l + 1)));
                }
            }
            for p in [e.from, e.to] {
                let slot = used
                    .get_mut(p.vertex)
                    .and_then(|v| v.get_mut(p.port))
                    .ok_or_else(|| FloquetError::InvalidCell(format!("edge {i}: no port {}:{}", p.vertex, p.port)))?;
                if *slot {
                    return Err(FloquetError::InvalidCell(format!("port {}:{} used twice", p.vertex, p.port)));
                }
                *slot = true;
            }
        }
        if let Some((v, _)) = used.iter().enumerate().find(|(_, ports)| ports.iter().any(|u| !u)) {
            return Err(FloquetError::InvalidCell(format!("vertex {v} has unconnected ports")));
        }
        Ok(UnitCellGraph { nu, vertices, edges })
    }

    /// Rectangular lattice: one degree-4 delta vertex, loops of lengths `a`, `b`.
    pub fn rectangular_lattice(a: f64, b: f64, alpha: f64) -> Result<Self, FloquetError> {
        let v = Port { vertex: 0, port: 0 };
        let port = |p| Port { port: p, ..v };
        UnitCellGraph::new(
            2,
            vec![VertexCouplingST::delta(4, alpha)],
            vec![
                Edge { length: a, from: port(0), to: port(1), phase: Some(0) },
                Edge { length: b, from: port(2), to: port(3), phase: Some(1) },
            ],
        )
    }

    /// Chain with two vertices per cell joined by edges of lengths `l0`
    /// (inside the cell) and `l1` (across the boundary).
    pub fn chain(l0: f64, l1: f64, v0: VertexCouplingST, v1: VertexCouplingST) -> Result<Self, FloquetError> {
        let p = |vertex, port| Port { vertex, port };
        UnitCellGraph::new(
            1,
            vec![v0, v1],
            vec![
                Edge { length: l0, from: p(0, 1), to: p(1, 0), phase: None },
                Edge { length: l1, from: p(1, 1), to: p(0, 0), phase: Some(0) },
            ],
        )
    }

    pub fn nu(&self) -> usize {
        self.nu
    }
    pub fn vertices(&self) -> &[VertexCouplingST] {
        &self.vertices
    }
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn is_scale_invariant(&self) -> bool {
        self.vertices.iter().all(VertexCouplingST::is_scale_invariant)
    }

    /// The cell with every coupling replaced by its scale-invariant part.
    pub fn associated_scale_invariant(&self) -> Self {
        UnitCellGraph {
            vertices: self.vertices.iter().map(VertexCouplingST::associated_scale_invariant).collect(),
            ..self.clone()
        }
    }

    /// Distinct edge lengths in order of first appearance.
    pub fn distinct_lengths(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for e in &self.edges {
            if !out.contains(&e.length) {
                out.push(e.length);
            }
        }
        out
    }
}

fn fmt_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", z.re, sign, z.im.abs())
}

fn parse_complex(s: &str) -> Result<Complex64, FloquetError> {
    let err = || FloquetError::Parse(format!("invalid complex number {s:?}"));
    let body = s.strip_suffix('i').ok_or_else(err)?;
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'))
        .ok_or_else(err)?;
    let re = body[..split].parse::<f64>().map_err(|_| err())?;
    let im = body[split..].parse::<f64>().map_err(|_| err())?;
    Ok(Complex64::new(re, im))
}

impl fmt::Display for UnitCellGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        writeln!(out, "{CELL_FORMAT}")?;
        writeln!(out, "nu {}", self.nu)?;
        let row = |m: &CMatrix, i: usize| (0..m.ncols()).map(|j| format!(" {}", fmt_complex(m[(i, j)]))).collect::<String>();
        for (id, v) in self.vertices.iter().enumerate() {
            writeln!(out, "vertex {id} n={} r={}", v.degree(), v.rank())?;
            for i in 0..v.rank() {
                writeln!(out, "T{}", row(v.t(), i))?;
            }
            for i in 0..v.rank() {
                writeln!(out, "S{}", row(v.s(), i))?;
            }
        }
        for e in &self.edges {
            write!(out, "edge length={} from={}:{} to={}:{}", e.length, e.from.vertex, e.from.port, e.to.vertex, e.to.port)?;
            if let Some(l) = e.phase {
                write!(out, " phase={}", l + 1)?;
            }
            writeln!(out)?;
        }
        f.write_str(&out)
    }
}

struct PendingVertex {
    n: usize,
    r: usize,
    t_rows: Vec<Vec<Complex64>>,
    s_rows: Vec<Vec<Complex64>>,
}

impl PendingVertex {
    fn finish(self) -> Result<VertexCouplingST, FloquetError> {
        let (n, r) = (self.n, self.r);
        if r > n || self.t_rows.len() != r || self.s_rows.len() != r {
            return Err(FloquetError::Parse(format!("vertex block needs {r} T rows and {r} S rows")));
        }
        let t: Vec<Complex64> = self.t_rows.into_iter().flatten().collect();
        let s: Vec<Complex64> = self.s_rows.into_iter().flatten().collect();
        if t.len() != r * (n - r) || s.len() != r * r {
            return Err(FloquetError::Parse("T or S rows have the wrong length".into()));
        }
        VertexCouplingST::new(n, r, CMatrix::from_row_slice(r, n - r, &t), CMatrix::from_row_slice(r, r, &s))
    }
}

fn key_value<'a>(token: &'a str, key: &str) -> Result<&'a str, FloquetError> {
    token
        .strip_prefix(key)
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| FloquetError::Parse(format!("expected {key}=..., got {token:?}")))
}

fn parse_num<T: FromStr>(s: &str) -> Result<T, FloquetError> {
    s.parse().map_err(|_| FloquetError::Parse(format!("invalid number {s:?}")))
}

fn parse_port(s: &str) -> Result<Port, FloquetError> {
    let (v, p) = s.split_once(':').ok_or_else(|| FloquetError::Parse(format!("expected vertex:port, got {s:?}")))?;
    Ok(Port { vertex: parse_num(v)?, port: parse_num(p)? })
}

impl FromStr for UnitCellGraph {
    type Err = FloquetError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        if lines.next() != Some(CELL_FORMAT) {
            return Err(FloquetError::Parse(format!("first line must be {CELL_FORMAT}")));
        }
        let mut nu = None;
        let mut vertices = Vec::new();
        let mut pending: Option<PendingVertex> = None;
        let mut edges = Vec::new();
        for line in lines {
            let mut tokens = line.split_whitespace();
            let head = tokens.next().unwrap_or_default();
            let rest: Vec<&str> = tokens.collect();
            match head {
                "nu" => nu = Some(parse_num::<usize>(rest.first().copied().unwrap_or_default())?),
                "vertex" => {
                    if let Some(v) = pending.take() {
                        vertices.push(v.finish()?);
                    }
                    let [id, n, r] = rest[..] else {
                        return Err(FloquetError::Parse(format!("malformed vertex line {line:?}")));
                    };
                    if parse_num::<usize>(id)? != vertices.len() {
                        return Err(FloquetError::Parse("vertices must be numbered 0, 1, ... in order".into()));
                    }
                    pending = Some(PendingVertex {
                        n: parse_num(key_value(n, "n")?)?,
                        r: parse_num(key_value(r, "r")?)?,
                        t_rows: Vec::new(),
                        s_rows: Vec::new(),
                    });
                }
                "T" | "S" => {
                    let v = pending.as_mut().ok_or_else(|| FloquetError::Parse(format!("{head} row outside a vertex")))?;
                    let row = rest.iter().map(|t| parse_complex(t)).collect::<Result<Vec<_>, _>>()?;
                    if head == "T" { &mut v.t_rows } else { &mut v.s_rows }.push(row);
                }
                "edge" => {
                    if let Some(v) = pending.take() {
                        vertices.push(v.finish()?);
                    }
                    if !(3..=4).contains(&rest.len()) {
                        return Err(FloquetError::Parse(format!("malformed edge line {line:?}")));
                    }
                    let phase = match rest.get(3) {
                        Some(tok) => {
                            let l: usize = parse_num(key_value(tok, "phase")?)?;
                            Some(l.checked_sub(1).ok_or_else(|| FloquetError::Parse("phase indices start at 1".into()))?)
                        }
                        None => None,
                    };
                    edges.push(Edge {
                        length: parse_num(key_value(rest[0], "length")?)?,
                        from: parse_port(key_value(rest[1], "from")?)?,
                        to: parse_port(key_value(rest[2], "to")?)?,
                        phase,
                    });
                }
                other => return Err(FloquetError::Parse(format!("unknown line kind {other:?}"))),
            }
        }
        if let Some(v) = pending.take() {
            vertices.push(v.finish()?);
        }
        let nu = nu.ok_or_else(|| FloquetError::Parse("missing nu line".into()))?;
        UnitCellGraph::new(nu, vertices, edges)
    }
}
