//! Coxeter graphs: edge labels, JSON input and the built-in examples.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// Label on the edge between two distinct generators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EdgeLabel {
    /// `m_st` finite, at least 2.
    Finite(u32),
    /// `m_st = ∞` with parameter `c_st >= 1`, so that `B(α_s, α_t) = -c_st`.
    Infinite { c: f64 },
}

impl EdgeLabel {
    /// `B(α_s, α_t)` for this label.
    pub fn pairing(self) -> f64 {
        match self {
            EdgeLabel::Finite(m) => -(std::f64::consts::PI / f64::from(m)).cos(),
            EdgeLabel::Infinite { c } => -c,
        }
    }
}

/// Coxeter graph of rank `n` with symmetric labels. Pairs without an entry
/// commute (`m = 2`).
#[derive(Clone, Debug, PartialEq)]
pub struct CoxeterGraph {
    rank: usize,
    labels: BTreeMap<(usize, usize), EdgeLabel>,
}

fn ordered(i: usize, j: usize) -> (usize, usize) {
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

impl CoxeterGraph {
    pub fn new(rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidGraph("rank must be positive".into()));
        }
        Ok(Self {
            rank,
            labels: BTreeMap::new(),
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Sets the label between `i` and `j`, replacing any previous one.
    pub fn set_edge(&mut self, i: usize, j: usize, label: EdgeLabel) -> Result<()> {
        if i >= self.rank || j >= self.rank {
            return Err(Error::InvalidGraph(format!(
                "edge ({i},{j}) out of range for rank {}",
                self.rank
            )));
        }
        if i == j {
            return Err(Error::InvalidGraph(format!("self-loop on vertex {i}")));
        }
        match label {
            EdgeLabel::Finite(m) if m < 2 => {
                return Err(Error::InvalidGraph(format!("edge ({i},{j}): m = {m} < 2")))
            }
            EdgeLabel::Infinite { c } if !(c >= 1.0) || !c.is_finite() => {
                return Err(Error::InvalidGraph(format!("edge ({i},{j}): c = {c} must be >= 1")))
            }
            _ => {}
        }
        self.labels.insert(ordered(i, j), label);
        Ok(())
    }

    pub fn with_edge(mut self, i: usize, j: usize, m: u32) -> Result<Self> {
        self.set_edge(i, j, EdgeLabel::Finite(m))?;
        Ok(self)
    }

    pub fn with_infinite_edge(mut self, i: usize, j: usize, c: f64) -> Result<Self> {
        self.set_edge(i, j, EdgeLabel::Infinite { c })?;
        Ok(self)
    }

    /// Label between distinct generators; `m = 2` when no edge was given.
    pub fn label(&self, i: usize, j: usize) -> EdgeLabel {
        self.labels
            .get(&ordered(i, j))
            .copied()
            .unwrap_or(EdgeLabel::Finite(2))
    }

    /// Explicit edges with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, EdgeLabel)> + '_ {
        self.labels.iter().map(|(&(i, j), &l)| (i, j, l))
    }

    /// Universal Coxeter graph: every pair joined by an ∞-edge with parameter `c`.
    pub fn universal(rank: usize, c: f64) -> Result<Self> {
        let mut g = Self::new(rank)?;
        for i in 0..rank {
            for j in i + 1..rank {
                g.set_edge(i, j, EdgeLabel::Infinite { c })?;
            }
        }
        Ok(g)
    }

    /// Built-in graphs by name: `fig1a`, `fig1b`, `fig8`, `a2`, and
    /// `universal<n>:<c>` (e.g. `universal3:1.1`).
    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            // path s1 -∞(1.05)- s2 -3- s3 -∞(1.05)- s4
            "fig1a" => Self::new(4)?
                .with_infinite_edge(0, 1, 1.05)?
                .with_edge(1, 2, 3)?
                .with_infinite_edge(2, 3, 1.05),
            // s1 joined to s2, s3 by 5-edges and to s4 by an ∞-edge; s2 s3 s4 a 3-triangle
            "fig1b" => Self::new(4)?
                .with_edge(0, 1, 5)?
                .with_edge(0, 2, 5)?
                .with_infinite_edge(0, 3, 1.0)?
                .with_edge(1, 2, 3)?
                .with_edge(2, 3, 3)?
                .with_edge(1, 3, 3),
            // path s1 -∞(2)- s2 -3- s3 -3- s4 -∞(2)- s5, signature (3,2)
            "fig8" => Self::new(5)?
                .with_infinite_edge(0, 1, 2.0)?
                .with_edge(1, 2, 3)?
                .with_edge(2, 3, 3)?
                .with_infinite_edge(3, 4, 2.0),
            "a2" => Self::new(2)?.with_edge(0, 1, 3),
            _ => {
                let rest = name
                    .strip_prefix("universal")
                    .ok_or_else(|| Error::InvalidGraph(format!("unknown built-in graph '{name}'")))?;
                let (rank, c) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::InvalidGraph(format!("expected universal<n>:<c>, got '{name}'")))?;
                let rank = rank
                    .parse()
                    .map_err(|_| Error::InvalidGraph(format!("bad rank in '{name}'")))?;
                let c = c
                    .parse()
                    .map_err(|_| Error::InvalidGraph(format!("bad c parameter in '{name}'")))?;
                Self::universal(rank, c)
            }
        }
    }

    /// Names accepted by [`CoxeterGraph::builtin`] besides the `universal` family.
    pub const BUILTIN_NAMES: [&'static str; 4] = ["fig1a", "fig1b", "fig8", "a2"];

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: GraphJson = serde_json::from_str(text)?;
        let mut g = Self::new(raw.rank)?;
        let mut seen = BTreeMap::new();
        for (k, e) in raw.edges.iter().enumerate() {
            let ctx = |msg: String| Error::InvalidGraph(format!("edge #{k} ({},{}): {msg}", e.i, e.j));
            let label = match &e.m {
                Value::Number(n) => {
                    let m = n
                        .as_u64()
                        .filter(|m| *m >= 2 && *m <= u64::from(u32::MAX))
                        .ok_or_else(|| ctx(format!("m = {n} is not an integer >= 2")))?;
                    if e.c.is_some() {
                        return Err(ctx("c is only allowed on infinite edges".into()));
                    }
                    EdgeLabel::Finite(m as u32)
                }
                Value::String(s) if s == "inf" => {
                    let c = e.c.ok_or(Error::MissingCParam { i: e.i, j: e.j })?;
                    EdgeLabel::Infinite { c }
                }
                other => return Err(ctx(format!("m must be an integer or \"inf\", got {other}"))),
            };
            if seen.insert(ordered(e.i, e.j), k).is_some() {
                return Err(ctx("duplicate edge".into()));
            }
            g.set_edge(e.i, e.j, label).map_err(|err| ctx(err.to_string()))?;
        }
        Ok(g)
    }

    pub fn to_json(&self) -> String {
        let edges = self
            .edges()
            .map(|(i, j, l)| match l {
                EdgeLabel::Finite(m) => EdgeJson {
                    i,
                    j,
                    m: Value::from(m),
                    c: None,
                },
                EdgeLabel::Infinite { c } => EdgeJson {
                    i,
                    j,
                    m: Value::from("inf"),
                    c: Some(c),
                },
            })
            .collect();
        serde_json::to_string(&GraphJson {
            rank: self.rank,
            edges,
        })
        .expect("graph serializes")
    }
}

impl fmt::Display for CoxeterGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rank {}", self.rank)?;
        for (i, j, l) in self.edges() {
            match l {
                EdgeLabel::Finite(m) => write!(f, ", {i}-{j}: {m}")?,
                EdgeLabel::Infinite { c } => write!(f, ", {i}-{j}: inf(c={c})")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    rank: usize,
    edges: Vec<EdgeJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeJson {
    i: usize,
    j: usize,
    m: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    c: Option<f64>,
}
