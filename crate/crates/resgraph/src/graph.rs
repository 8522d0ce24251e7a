//! Resolution graph model: weighted vertices (exceptional curves), edge
//! multiplicities (pairwise intersection numbers), a line-oriented text
//! format, validation against the resolution-graph axioms, and the
//! intersection form together with the adjunction degrees K.A_i.
//!
//! Text format, one declaration per line, `#` starts a comment:
//!
//! ```text
//! vertex <id> e=<int> [g=<uint>] [nodes=<uint>] [cusps=<uint>]
//! edge <id> <id>
//! ```
//!
//! Omitted attributes default to 0. Repeating an `edge` line accumulates
//! intersection multiplicity. Vertex declaration order fixes the coefficient
//! order used by every cycle and matrix in the library.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;

use crate::cycle::Cycle;
use crate::linalg;
use crate::{Error, Result};

/// One exceptional curve: self-intersection, genus, and the singularities of
/// the curve itself (nodes and cusps enter the adjunction degree through
/// delta = nodes + cusps).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexData {
    pub name: String,
    pub self_int: i64,
    pub genus: u32,
    pub nodes: u32,
    pub cusps: u32,
}

impl VertexData {
    pub fn new(name: impl Into<String>, self_int: i64) -> Self {
        VertexData {
            name: name.into(),
            self_int,
            genus: 0,
            nodes: 0,
            cusps: 0,
        }
    }

    pub fn with_genus(mut self, genus: u32) -> Self {
        self.genus = genus;
        self
    }

    pub fn with_nodes(mut self, nodes: u32) -> Self {
        self.nodes = nodes;
        self
    }

    pub fn with_cusps(mut self, cusps: u32) -> Self {
        self.cusps = cusps;
        self
    }

    pub fn delta(&self) -> u32 {
        self.nodes + self.cusps
    }

    pub fn is_smooth_rational(&self) -> bool {
        self.genus == 0 && self.delta() == 0
    }

    /// Adjunction: K.A_i = -e - 2 + 2 genus + 2 delta.
    pub fn k_degree(&self) -> i64 {
        -self.self_int - 2 + 2 * i64::from(self.genus) + 2 * i64::from(self.delta())
    }

    /// chi of the single curve: 1 - genus - delta.
    pub fn curve_chi(&self) -> i64 {
        1 - i64::from(self.genus) - i64::from(self.delta())
    }
}

/// Weighted dual graph. Edges are unordered pairs with multiplicity; no
/// self-loops. Construction enforces only shape (index range, distinct
/// endpoints, unique names); the mathematical axioms live in [`validate`].
///
/// [`validate`]: ResolutionGraph::validate
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionGraph {
    vertices: Vec<VertexData>,
    edges: BTreeMap<(usize, usize), u32>,
}

impl ResolutionGraph {
    pub fn new(
        vertices: Vec<VertexData>,
        edge_list: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let n = vertices.len();
        let mut seen = BTreeSet::new();
        for v in &vertices {
            if !seen.insert(v.name.as_str()) {
                return Err(Error::Precondition(format!(
                    "duplicate vertex id `{}`",
                    v.name
                )));
            }
        }
        let mut edges: BTreeMap<(usize, usize), u32> = BTreeMap::new();
        for (a, b) in edge_list {
            if a >= n || b >= n {
                return Err(Error::Precondition(format!(
                    "edge ({a}, {b}) out of range for {n} vertices"
                )));
            }
            if a == b {
                return Err(Error::Precondition(format!(
                    "self-loop on vertex `{}`",
                    vertices[a].name
                )));
            }
            let key = (a.min(b), a.max(b));
            *edges.entry(key).or_insert(0) += 1;
        }
        Ok(ResolutionGraph { vertices, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex(&self, i: usize) -> &VertexData {
        &self.vertices[i]
    }

    pub fn vertices(&self) -> &[VertexData] {
        &self.vertices
    }

    pub fn vertex_names(&self) -> Vec<String> {
        self.vertices.iter().map(|v| v.name.clone()).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.name == name)
    }

    /// Edge multiplicity between two distinct vertices (A_i . A_j).
    pub fn edge_multiplicity(&self, a: usize, b: usize) -> u32 {
        if a == b {
            return 0;
        }
        let key = (a.min(b), a.max(b));
        self.edges.get(&key).copied().unwrap_or(0)
    }

    /// Unordered edges with multiplicities, ascending by index pair.
    pub fn edges(&self) -> impl Iterator<Item = ((usize, usize), u32)> + '_ {
        self.edges.iter().map(|(&k, &m)| (k, m))
    }

    /// Total edge count with multiplicity.
    pub fn edge_count(&self) -> u64 {
        self.edges.values().map(|&m| u64::from(m)).sum()
    }

    pub fn neighbors(&self, i: usize) -> Vec<(usize, u32)> {
        let mut out = Vec::new();
        for (&(a, b), &m) in &self.edges {
            if a == i {
                out.push((b, m));
            } else if b == i {
                out.push((a, m));
            }
        }
        out
    }

    pub fn full_support(&self) -> BTreeSet<usize> {
        (0..self.vertex_count()).collect()
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() > 0 && self.is_connected_subset(&self.full_support())
    }

    /// Connectivity of the subgraph induced by `subset`.
    pub fn is_connected_subset(&self, subset: &BTreeSet<usize>) -> bool {
        let Some(&start) = subset.iter().next() else {
            return false;
        };
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for (j, _) in self.neighbors(i) {
                if subset.contains(&j) && seen.insert(j) {
                    stack.push(j);
                }
            }
        }
        seen.len() == subset.len()
    }

    /// Connected components of the subgraph induced by `subset`.
    pub fn components_of(&self, subset: &BTreeSet<usize>) -> Vec<BTreeSet<usize>> {
        let mut remaining: BTreeSet<usize> = subset.clone();
        let mut out = Vec::new();
        while let Some(&start) = remaining.iter().next() {
            let mut comp = BTreeSet::from([start]);
            let mut stack = vec![start];
            remaining.remove(&start);
            while let Some(i) = stack.pop() {
                for (j, _) in self.neighbors(i) {
                    if remaining.remove(&j) {
                        comp.insert(j);
                        stack.push(j);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// True when the graph is a tree counting edge multiplicities (so a
    /// double edge already makes a cycle).
    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.edge_count() == self.vertex_count() as u64 - 1
    }

    /// Checks the resolution-graph axioms: every self-intersection <= -1,
    /// connected, minimal (no smooth rational -1 curve), negative definite.
    /// The report lists every violated axiom.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if v.self_int > -1 {
                violations.push(Violation::SelfIntersectionNotNegative { vertex: i });
            }
        }
        if !self.is_connected() {
            violations.push(Violation::NotConnected);
        }
        for (i, v) in self.vertices.iter().enumerate() {
            if v.self_int == -1 && v.is_smooth_rational() {
                violations.push(Violation::ContractibleCurve { vertex: i });
            }
        }
        if !self.intersection_form().is_negative_definite() {
            violations.push(Violation::NotNegativeDefinite);
        }
        ValidationReport { violations }
    }

    /// True when the only violations are contractible -1 curves. The
    /// escape hatch for deliberately non-minimal resolutions; downstream
    /// guarantees that depend on minimality are off.
    pub fn is_valid_allowing_nonminimal(&self) -> bool {
        self.validate()
            .violations
            .iter()
            .all(|v| matches!(v, Violation::ContractibleCurve { .. }))
    }

    /// True when no vertex is a smooth rational -1 curve.
    pub fn is_minimal(&self) -> bool {
        !self
            .vertices
            .iter()
            .any(|v| v.self_int == -1 && v.is_smooth_rational())
    }

    /// Symmetric intersection matrix (self-intersections on the diagonal,
    /// edge multiplicities off it) plus the adjunction degrees.
    pub fn intersection_form(&self) -> IntersectionForm {
        let n = self.vertex_count();
        let mut matrix = vec![vec![0i64; n]; n];
        for (i, v) in self.vertices.iter().enumerate() {
            matrix[i][i] = v.self_int;
        }
        for (&(a, b), &m) in &self.edges {
            matrix[a][b] = i64::from(m);
            matrix[b][a] = i64::from(m);
        }
        let k_degrees = self.vertices.iter().map(VertexData::k_degree).collect();
        IntersectionForm { matrix, k_degrees }
    }

    /// Parses the text format. Two passes: all `vertex` lines first, so
    /// edges may reference vertices declared later in the file.
    pub fn parse(text: &str) -> Result<Self> {
        fn strip(line: &str) -> &str {
            match line.find('#') {
                Some(p) => &line[..p],
                None => line,
            }
            .trim()
        }
        fn check_id(line_no: usize, id: &str) -> Result<()> {
            let ok = !id.is_empty() && id.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if ok {
                Ok(())
            } else {
                Err(Error::Parse {
                    line: line_no,
                    message: format!("invalid id `{id}` (want [A-Za-z0-9_]+)"),
                })
            }
        }

        let mut vertices: Vec<VertexData> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = strip(raw);
            if line.is_empty() {
                continue;
            }
            let mut tokens = line.split_whitespace();
            match tokens.next() {
                Some("vertex") => {
                    let id = tokens.next().ok_or_else(|| Error::Parse {
                        line: line_no,
                        message: "vertex line needs an id".into(),
                    })?;
                    check_id(line_no, id)?;
                    if vertices.iter().any(|v| v.name == id) {
                        return Err(Error::Parse {
                            line: line_no,
                            message: format!("duplicate vertex id `{id}`"),
                        });
                    }
                    let mut self_int: Option<i64> = None;
                    let mut genus: Option<u32> = None;
                    let mut nodes: Option<u32> = None;
                    let mut cusps: Option<u32> = None;
                    for tok in tokens {
                        let (key, value) = tok.split_once('=').ok_or_else(|| Error::Parse {
                            line: line_no,
                            message: format!("expected key=value, got `{tok}`"),
                        })?;
                        let dup = |k: &str| Error::Parse {
                            line: line_no,
                            message: format!("attribute `{k}` given twice"),
                        };
                        let bad = |k: &str, v: &str| Error::Parse {
                            line: line_no,
                            message: format!("bad value `{v}` for `{k}`"),
                        };
                        match key {
                            "e" => {
                                if self_int.is_some() {
                                    return Err(dup("e"));
                                }
                                self_int = Some(value.parse().map_err(|_| bad("e", value))?);
                            }
                            "g" => {
                                if genus.is_some() {
                                    return Err(dup("g"));
                                }
                                genus = Some(value.parse().map_err(|_| bad("g", value))?);
                            }
                            "nodes" => {
                                if nodes.is_some() {
                                    return Err(dup("nodes"));
                                }
                                nodes = Some(value.parse().map_err(|_| bad("nodes", value))?);
                            }
                            "cusps" => {
                                if cusps.is_some() {
                                    return Err(dup("cusps"));
                                }
                                cusps = Some(value.parse().map_err(|_| bad("cusps", value))?);
                            }
                            other => {
                                return Err(Error::Parse {
                                    line: line_no,
                                    message: format!("unknown attribute `{other}`"),
                                })
                            }
                        }
                    }
                    let self_int = self_int.ok_or_else(|| Error::Parse {
                        line: line_no,
                        message: format!("vertex `{id}` is missing e=<int>"),
                    })?;
                    vertices.push(VertexData {
                        name: id.to_string(),
                        self_int,
                        genus: genus.unwrap_or(0),
                        nodes: nodes.unwrap_or(0),
                        cusps: cusps.unwrap_or(0),
                    });
                }
                Some("edge") => {} // second pass
                Some(other) => {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("expected `vertex` or `edge`, got `{other}`"),
                    })
                }
                None => unreachable!("blank lines are skipped"),
            }
        }

        let mut edge_list: Vec<(usize, usize)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = strip(raw);
            if !line.starts_with("edge") {
                continue;
            }
            let mut tokens = line.split_whitespace();
            tokens.next();
            let mut endpoint = |what: &str| -> Result<usize> {
                let id = tokens.next().ok_or_else(|| Error::Parse {
                    line: line_no,
                    message: format!("edge line needs a {what} vertex id"),
                })?;
                check_id(line_no, id)?;
                vertices
                    .iter()
                    .position(|v| v.name == id)
                    .ok_or_else(|| Error::Parse {
                        line: line_no,
                        message: format!("edge references unknown vertex `{id}`"),
                    })
            };
            let a = endpoint("first")?;
            let b = endpoint("second")?;
            if let Some(extra) = tokens.next() {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("unexpected token `{extra}` after edge"),
                });
            }
            if a == b {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("self-loop on vertex `{}`", vertices[a].name),
                });
            }
            edge_list.push((a, b));
        }

        ResolutionGraph::new(vertices, edge_list)
    }

    /// Canonical text form: vertices in declaration order with zero-valued
    /// attributes omitted, then edges ascending, one line per multiplicity.
    /// `parse(to_text(g)) == g`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in &self.vertices {
            out.push_str(&format!("vertex {} e={}", v.name, v.self_int));
            if v.genus != 0 {
                out.push_str(&format!(" g={}", v.genus));
            }
            if v.nodes != 0 {
                out.push_str(&format!(" nodes={}", v.nodes));
            }
            if v.cusps != 0 {
                out.push_str(&format!(" cusps={}", v.cusps));
            }
            out.push('\n');
        }
        for (&(a, b), &m) in &self.edges {
            for _ in 0..m {
                out.push_str(&format!(
                    "edge {} {}\n",
                    self.vertices[a].name, self.vertices[b].name
                ));
            }
        }
        out
    }
}

/// A violated resolution-graph axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    SelfIntersectionNotNegative { vertex: usize },
    NotConnected,
    ContractibleCurve { vertex: usize },
    NotNegativeDefinite,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl ValidationReport {
    /// One human-readable line per violation, vertex ids spelled out.
    pub fn describe(&self, g: &ResolutionGraph) -> Vec<String> {
        self.violations
            .iter()
            .map(|v| match v {
                Violation::SelfIntersectionNotNegative { vertex } => format!(
                    "vertex `{}` has self-intersection {} (must be <= -1)",
                    g.vertex(*vertex).name,
                    g.vertex(*vertex).self_int
                ),
                Violation::NotConnected => "graph is not connected".into(),
                Violation::ContractibleCurve { vertex } => format!(
                    "vertex `{}` is a smooth rational -1 curve (resolution is not minimal)",
                    g.vertex(*vertex).name
                ),
                Violation::NotNegativeDefinite => {
                    "intersection form is not negative definite".into()
                }
            })
            .collect()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "no violations");
        }
        let parts: Vec<String> = self
            .violations
            .iter()
            .map(|v| match v {
                Violation::SelfIntersectionNotNegative { vertex } => {
                    format!("vertex #{vertex} has self-intersection > -1")
                }
                Violation::NotConnected => "not connected".into(),
                Violation::ContractibleCurve { vertex } => {
                    format!("vertex #{vertex} is a smooth rational -1 curve")
                }
                Violation::NotNegativeDefinite => "not negative definite".into(),
            })
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Intersection matrix plus adjunction degrees. The matrix is symmetric by
/// construction; entries are small, the derived quantities are not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionForm {
    matrix: Vec<Vec<i64>>,
    k_degrees: Vec<i64>,
}

impl IntersectionForm {
    pub fn n(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.matrix[i][j]
    }

    pub fn k_degrees(&self) -> &[i64] {
        &self.k_degrees
    }

    pub fn is_negative_definite(&self) -> bool {
        linalg::negative_definite(&self.matrix)
    }

    /// A_i . D for the cycle D.
    pub fn row_dot(&self, i: usize, d: &Cycle) -> BigInt {
        assert_eq!(d.len(), self.n());
        let mut acc = BigInt::from(0);
        for (j, c) in d.coeffs().iter().enumerate() {
            let e = self.matrix[i][j];
            if e != 0 {
                acc += c * e;
            }
        }
        acc
    }

    /// M . D as a vector.
    pub fn apply(&self, d: &Cycle) -> Vec<BigInt> {
        (0..self.n()).map(|i| self.row_dot(i, d)).collect()
    }

    /// A . B under the intersection form.
    pub fn pairing(&self, a: &Cycle, b: &Cycle) -> BigInt {
        assert_eq!(a.len(), self.n());
        let mb = self.apply(b);
        a.coeffs().iter().zip(&mb).map(|(x, y)| x * y).sum()
    }

    /// K . D via the adjunction degrees.
    pub fn k_dot(&self, d: &Cycle) -> BigInt {
        assert_eq!(d.len(), self.n());
        d.coeffs()
            .iter()
            .zip(&self.k_degrees)
            .map(|(c, &k)| c * k)
            .sum()
    }
}
