//! Disorder graph, assignment costs and minimum weight perfect matchings.
//!
//! Every perfect matching between the disordered ground levels and the
//! disordered excited levels is one optimal cooling unitary; the cost picks
//! the cheapest to implement.

use std::fmt::Write as _;

use itertools::Itertools;
use serde::Serialize;

use crate::bitstring::{hamming_distance, BitString};
use crate::error::{Error, Result};
use crate::machine::MachineSpec;

/// Largest size accepted by [`enumerate_optimal`].
pub const MAX_ENUMERATE: usize = 8;

/// Relative tolerance used to decide that two totals are equal.
pub const TOTAL_TOLERANCE: f64 = 1e-9;

/// Complete bipartite graph between `A = {0_S i : i ∈ 𝕊}` and
/// `B = {1_S (i ⊕ 1) : i ∈ 𝕊}`. `right[k]` is the partner of `left[k]`
/// under the conjugate pairing; both lists follow ascending `i`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BipartiteCoolingGraph {
    pub left: Vec<BitString>,
    pub right: Vec<BitString>,
}

impl BipartiteCoolingGraph {
    pub fn len(&self) -> usize {
        self.left.len()
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.left.len() * self.right.len()
    }
}

pub fn build_graph(spec: &MachineSpec) -> BipartiteCoolingGraph {
    let set = spec.swappable_set();
    BipartiteCoolingGraph {
        left: set.iter().map(|i| i.prepend(false)).collect(),
        right: set.iter().map(|i| i.conjugate().prepend(true)).collect(),
    }
}

/// Cost of pairing an excited level `row` with a ground level `col`.
pub trait CostFunction {
    fn name(&self) -> &str;
    fn cost(&self, row: &BitString, col: &BitString, spec: &MachineSpec) -> Result<f64>;
}

/// `D_H(row, col)`: a lower bound on the gates needed for the exchange.
#[derive(Clone, Copy, Debug, Default)]
pub struct HammingCost;

impl CostFunction for HammingCost {
    fn name(&self) -> &str {
        "hamming"
    }

    fn cost(&self, row: &BitString, col: &BitString, _spec: &MachineSpec) -> Result<f64> {
        Ok(f64::from(hamming_distance(row, col)?))
    }
}

/// `D_H(row, col)·(E(col) − E(row))` with joint energies. Signed.
#[derive(Clone, Copy, Debug, Default)]
pub struct EnergyCost;

impl CostFunction for EnergyCost {
    fn name(&self) -> &str {
        "energy"
    }

    fn cost(&self, row: &BitString, col: &BitString, spec: &MachineSpec) -> Result<f64> {
        let d = f64::from(hamming_distance(row, col)?);
        Ok(d * (spec.energy(col)? - spec.energy(row)?))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CostKind {
    Hamming,
    Energy,
}

impl CostKind {
    pub fn function(self) -> Box<dyn CostFunction> {
        match self {
            CostKind::Hamming => Box::new(HammingCost),
            CostKind::Energy => Box::new(EnergyCost),
        }
    }
}

impl std::str::FromStr for CostKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hamming" => Ok(CostKind::Hamming),
            "energy" => Ok(CostKind::Energy),
            other => Err(Error::validation(
                "cost",
                format!("unknown cost {other:?} (expected hamming or energy)"),
            )),
        }
    }
}

/// Square cost matrix. Rows are excited levels, columns ground levels. The
/// label lists are empty for matrices built from raw entries.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CostMatrix {
    pub kind: String,
    pub rows: Vec<BitString>,
    pub cols: Vec<BitString>,
    pub entries: Vec<Vec<f64>>,
}

impl CostMatrix {
    /// Unlabelled matrix; fails unless every row has as many entries as
    /// there are rows and all entries are finite.
    pub fn from_entries(entries: Vec<Vec<f64>>) -> Result<Self> {
        let m = entries.len();
        if m == 0 {
            return Err(Error::EmptyGraph);
        }
        for (row, r) in entries.iter().enumerate() {
            if r.len() != m {
                return Err(Error::NotSquare {
                    rows: m,
                    row,
                    cols: r.len(),
                });
            }
            if let Some(x) = r.iter().find(|x| !x.is_finite()) {
                return Err(Error::Usage(format!("non-finite cost {x} in row {row}")));
            }
        }
        Ok(Self {
            kind: "custom".into(),
            rows: Vec::new(),
            cols: Vec::new(),
            entries,
        })
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row][col]
    }

    fn is_labelled(&self) -> bool {
        self.rows.len() == self.size() && self.cols.len() == self.size()
    }

    /// Total of the assignment `row r → column assignment[r]`.
    pub fn total(&self, assignment: &[usize]) -> f64 {
        assignment
            .iter()
            .enumerate()
            .map(|(r, &c)| self.entries[r][c])
            .sum()
    }

    fn matching(&self, assignment: Vec<usize>) -> Matching {
        let pairs = if self.is_labelled() {
            assignment
                .iter()
                .enumerate()
                .map(|(r, &c)| MatchedPair {
                    ground: self.cols[c],
                    excited: self.rows[r],
                    cost: self.entries[r][c],
                })
                .collect()
        } else {
            Vec::new()
        };
        Matching {
            total: self.total(&assignment),
            assignment,
            pairs,
        }
    }
}

pub fn cost_matrix(
    graph: &BipartiteCoolingGraph,
    cost: &dyn CostFunction,
    spec: &MachineSpec,
) -> Result<CostMatrix> {
    if graph.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let entries = graph
        .right
        .iter()
        .map(|b| graph.left.iter().map(|a| cost.cost(b, a, spec)).collect())
        .collect::<Result<Vec<Vec<f64>>>>()?;
    Ok(CostMatrix {
        kind: cost.name().to_string(),
        rows: graph.right.clone(),
        cols: graph.left.clone(),
        entries,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatchedPair {
    pub ground: BitString,
    pub excited: BitString,
    pub cost: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Matching {
    /// Column assigned to each row.
    pub assignment: Vec<usize>,
    /// One pair per row, in row order; empty for unlabelled matrices.
    pub pairs: Vec<MatchedPair>,
    pub total: f64,
}

impl Matching {
    /// Each row and each column used exactly once.
    pub fn is_perfect(&self, size: usize) -> bool {
        let mut seen = vec![false; size];
        self.assignment.len() == size
            && self
                .assignment
                .iter()
                .all(|&c| c < size && !std::mem::replace(&mut seen[c], true))
    }
}

/// Minimum-total assignment by the Kuhn–Munkres algorithm with potentials,
/// `O(m³)`. Entries are shifted by their minimum first so that all reduced
/// costs are non-negative; the reported total uses the original entries.
pub fn hungarian(matrix: &CostMatrix) -> Result<Matching> {
    let m = matrix.size();
    if m == 0 {
        return Err(Error::EmptyGraph);
    }
    for (row, r) in matrix.entries.iter().enumerate() {
        if r.len() != m {
            return Err(Error::NotSquare {
                rows: m,
                row,
                cols: r.len(),
            });
        }
    }
    let shift = matrix
        .entries
        .iter()
        .flatten()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let a = |i: usize, j: usize| matrix.entries[i - 1][j - 1] - shift;

    // 1-based arrays; column 0 is a virtual column holding the current row.
    let mut u = vec![0.0; m + 1];
    let mut v = vec![0.0; m + 1];
    let mut p = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=m {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = a(i0, j) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            if j1 == 0 {
                return Err(Error::Internal("no augmenting column found".into()));
            }
            for j in 0..=m {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0; m];
    for j in 1..=m {
        assignment[p[j] - 1] = j - 1;
    }
    Ok(matrix.matching(assignment))
}

fn totals_equal(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOTAL_TOLERANCE * a.abs().max(b.abs()).max(1.0)
}

/// Every minimum-total assignment, in lexicographic order of the column
/// sequence, at most `limit` of them. Brute force over `m!` permutations.
pub fn enumerate_optimal(matrix: &CostMatrix, limit: usize) -> Result<Vec<Matching>> {
    let m = matrix.size();
    if m == 0 {
        return Err(Error::EmptyGraph);
    }
    if m > MAX_ENUMERATE {
        return Err(Error::TooLarge {
            what: "matching size for enumeration (use hungarian)",
            value: m,
            max: MAX_ENUMERATE,
        });
    }
    let scored: Vec<(Vec<usize>, f64)> = (0..m)
        .permutations(m)
        .map(|p| {
            let t = matrix.total(&p);
            (p, t)
        })
        .collect();
    let best = scored.iter().map(|(_, t)| *t).fold(f64::INFINITY, f64::min);
    Ok(scored
        .into_iter()
        .filter(|(_, t)| totals_equal(*t, best))
        .take(limit)
        .map(|(p, _)| matrix.matching(p))
        .collect())
}

/// DOT rendering of the disorder graph. Matched edges are drawn bold.
pub fn graph_to_dot(
    graph: &BipartiteCoolingGraph,
    matrix: Option<&CostMatrix>,
    matching: Option<&Matching>,
) -> String {
    let mut out = String::from("graph disorder {\n  rankdir=LR;\n");
    out.push_str("  subgraph ground { rank=same;");
    for a in &graph.left {
        let _ = write!(out, " \"{a}\";");
    }
    out.push_str(" }\n  subgraph excited { rank=same;");
    for b in &graph.right {
        let _ = write!(out, " \"{b}\";");
    }
    out.push_str(" }\n");
    for (r, b) in graph.right.iter().enumerate() {
        for (c, a) in graph.left.iter().enumerate() {
            let mut attrs = Vec::new();
            if let Some(mx) = matrix {
                attrs.push(format!("label=\"{}\"", crate::format::float(mx.get(r, c))));
            }
            if matching.is_some_and(|mt| mt.assignment.get(r) == Some(&c)) {
                attrs.push("style=bold".into());
                attrs.push("color=red".into());
            }
            if attrs.is_empty() {
                let _ = writeln!(out, "  \"{a}\" -- \"{b}\";");
            } else {
                let _ = writeln!(out, "  \"{a}\" -- \"{b}\" [{}];", attrs.join(", "));
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ln(x: f64) -> f64 {
        x.ln()
    }

    fn names(v: &[BitString]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn eq14_graph_and_matrix() {
        let spec = MachineSpec::new(ln(2.0), &[ln(2.0), ln(16.0), ln(32.0)]).unwrap();
        let g = build_graph(&spec);
        assert_eq!(names(&g.left), ["0011", "0101", "0111"]);
        assert_eq!(names(&g.right), ["1100", "1010", "1000"]);
        let c = cost_matrix(&g, &HammingCost, &spec).unwrap();
        assert_eq!(
            c.entries,
            vec![
                vec![4.0, 2.0, 3.0],
                vec![2.0, 4.0, 3.0],
                vec![3.0, 3.0, 4.0]
            ]
        );
        let h = hungarian(&c).unwrap();
        assert_eq!(h.total, 8.0);
        assert!(h.is_perfect(3));
        assert_eq!(enumerate_optimal(&c, usize::MAX).unwrap().len(), 3);
    }

    #[test]
    fn empty_graph() {
        let spec = MachineSpec::new(10.0, &[1.0, 2.0]).unwrap();
        let g = build_graph(&spec);
        assert!(g.is_empty());
        assert_eq!(cost_matrix(&g, &HammingCost, &spec), Err(Error::EmptyGraph));
    }

    #[test]
    fn fig9_graph() {
        let spec = MachineSpec::new(ln(2.0), &[ln(3.0), ln(22.0), ln(32.0)]).unwrap();
        let g = build_graph(&spec);
        assert_eq!(g.len(), 4);
        assert_eq!(g.edge_count(), 16);
        let c = cost_matrix(&g, &HammingCost, &spec).unwrap();
        assert_eq!(hungarian(&c).unwrap().total, 10.0);
    }

    #[test]
    fn energy_matrix() {
        let graph_spec = MachineSpec::new(ln(2.0), &[ln(3.0), ln(22.0), ln(32.0)]).unwrap();
        let energy_spec = MachineSpec::new(1.0, &[1.0, 2.0, 4.0]).unwrap();
        let g = build_graph(&graph_spec);
        let c = cost_matrix(&g, &EnergyCost, &energy_spec).unwrap();
        let at = |row: &str, col: &str| {
            let r = c.rows.iter().position(|b| b.to_string() == row).unwrap();
            let k = c.cols.iter().position(|a| a.to_string() == col).unwrap();
            c.get(r, k)
        };
        assert_eq!(at("1001", "0110"), -8.0);
        assert_eq!(at("1000", "0111"), 24.0);
        let h = hungarian(&c).unwrap();
        assert_eq!(h.total, 24.0);
        let mut pairs: Vec<_> = h
            .pairs
            .iter()
            .map(|p| (p.ground.to_string(), p.excited.to_string()))
            .collect();
        pairs.sort();
        let expected = [
            ("0011", "1010"),
            ("0101", "1100"),
            ("0110", "1000"),
            ("0111", "1001"),
        ];
        assert_eq!(pairs, expected.map(|(a, b)| (a.to_string(), b.to_string())));
        assert_eq!(enumerate_optimal(&c, 10).unwrap().len(), 1);
    }

    #[test]
    fn one_by_one() {
        let c = CostMatrix::from_entries(vec![vec![-3.5]]).unwrap();
        let h = hungarian(&c).unwrap();
        assert_eq!(h.assignment, vec![0]);
        assert_eq!(h.total, -3.5);
        assert_eq!(enumerate_optimal(&c, 5).unwrap().len(), 1);
    }

    #[test]
    fn rejects_bad_matrices() {
        assert!(matches!(
            CostMatrix::from_entries(vec![vec![1.0, 2.0], vec![1.0]]),
            Err(Error::NotSquare { .. })
        ));
        assert!(CostMatrix::from_entries(vec![vec![f64::NAN]]).is_err());
        let big = CostMatrix::from_entries(vec![vec![0.0; 9]; 9]).unwrap();
        assert!(matches!(
            enumerate_optimal(&big, 1),
            Err(Error::TooLarge { .. })
        ));
        assert_eq!(hungarian(&big).unwrap().total, 0.0);
    }

    #[test]
    fn dot_export() {
        let spec = MachineSpec::new(ln(2.0), &[ln(3.0), ln(8.0)]).unwrap();
        let g = build_graph(&spec);
        let c = cost_matrix(&g, &HammingCost, &spec).unwrap();
        let h = hungarian(&c).unwrap();
        let dot = graph_to_dot(&g, Some(&c), Some(&h));
        assert!(dot.starts_with("graph disorder {"));
        assert_eq!(dot.matches(" -- ").count(), 4);
        assert_eq!(dot.matches("style=bold").count(), 2);
    }
}
