//! Composite analysis and synthesis results for one machine.

use std::fmt::Write as _;

use serde::Serialize;

use crate::bitstring::BitString;
use crate::circuit::{
    cooling_unitary, is_odd, lower_circuit, permutation, requires_toffoli, synthesize_circuit,
    Circuit, TwoLevelPermutation, MAX_SIMULATION_WIDTH,
};
use crate::cooling::{adaptive_anchor, delta_p0};
use crate::error::Result;
use crate::format::{float, serialize_rounded, serialize_rounded_option};
use crate::machine::MachineSpec;
use crate::matching::{
    build_graph, cost_matrix, enumerate_optimal, hungarian, CostKind, CostMatrix, Matching,
};
use crate::reducibility::{irreducibility_witnesses, reducibility};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalyzeReport {
    pub n: usize,
    #[serde(serialize_with = "serialize_rounded")]
    pub omega: f64,
    pub gaps: Vec<f64>,
    pub original_gaps: Vec<f64>,
    pub sort_permutation: Vec<usize>,
    #[serde(serialize_with = "serialize_rounded")]
    pub t_system: f64,
    #[serde(serialize_with = "serialize_rounded")]
    pub t_machine: f64,
    #[serde(serialize_with = "serialize_rounded")]
    pub threshold: f64,
    pub swappable: Vec<BitString>,
    pub swappable_count: usize,
    #[serde(serialize_with = "serialize_rounded")]
    pub p0_initial: f64,
    #[serde(serialize_with = "serialize_rounded")]
    pub p0_final: f64,
    #[serde(serialize_with = "serialize_rounded")]
    pub delta_p0: f64,
    #[serde(serialize_with = "serialize_rounded")]
    pub bound_virtual: f64,
    #[serde(serialize_with = "serialize_rounded_option")]
    pub bound_fixed: Option<f64>,
    pub fixed_applicable: bool,
    #[serde(serialize_with = "serialize_rounded")]
    pub bound_adaptive: f64,
    pub adaptive_anchor: Option<BitString>,
    pub reducibility_order: usize,
    pub irreducible: bool,
    pub witness: Option<BitString>,
    pub witnesses: Vec<BitString>,
    pub n_minus_1_reducible: bool,
    pub cannot_cool: bool,
    pub requires_toffoli: Option<bool>,
    #[serde(serialize_with = "serialize_rounded")]
    pub carnot_efficiency: f64,
}

pub fn analyze(spec: &MachineSpec) -> AnalyzeReport {
    let cooling = delta_p0(spec);
    let red = reducibility(spec);
    let round = |v: &[f64]| v.iter().map(|&x| crate::format::round(x)).collect();
    AnalyzeReport {
        n: spec.n(),
        omega: spec.omega(),
        gaps: round(spec.gaps()),
        original_gaps: round(spec.original_gaps()),
        sort_permutation: spec.sort_permutation().to_vec(),
        t_system: spec.t_system(),
        t_machine: spec.t_machine(),
        threshold: spec.threshold(),
        swappable: spec.swappable_set().members().to_vec(),
        swappable_count: cooling.swappable_count,
        p0_initial: cooling.p0_initial,
        p0_final: cooling.p0_final,
        delta_p0: cooling.delta_p0,
        bound_virtual: cooling.bound_virtual,
        bound_fixed: cooling.bound_fixed,
        fixed_applicable: cooling.bound_fixed.is_some(),
        bound_adaptive: cooling.bound_adaptive,
        adaptive_anchor: adaptive_anchor(spec),
        reducibility_order: red.order,
        irreducible: red.irreducible,
        witness: red.witness,
        witnesses: irreducibility_witnesses(spec),
        n_minus_1_reducible: red.n_minus_1_reducible,
        cannot_cool: red.cannot_cool,
        requires_toffoli: requires_toffoli(spec).ok(),
        carnot_efficiency: spec.carnot_efficiency(),
    }
}

fn list(v: &[BitString]) -> String {
    v.iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

impl AnalyzeReport {
    /// `key: value` lines for people.
    pub fn to_text(&self) -> String {
        let floats = |v: &[f64]| v.iter().map(|&x| float(x)).collect::<Vec<_>>().join(" ");
        let opt = |b: Option<BitString>| b.map_or("-".to_string(), |s| s.to_string());
        let mut out = String::new();
        let mut line = |k: &str, v: String| {
            let _ = writeln!(out, "{k:<20} {v}");
        };
        line("n", self.n.to_string());
        line("omega", float(self.omega));
        line("gaps", floats(&self.gaps));
        line("t_system", float(self.t_system));
        line("t_machine", float(self.t_machine));
        line("threshold", float(self.threshold));
        line("swappable", list(&self.swappable));
        line("p0_initial", float(self.p0_initial));
        line("p0_final", float(self.p0_final));
        line("delta_p0", float(self.delta_p0));
        line("bound_virtual", float(self.bound_virtual));
        line(
            "bound_fixed",
            self.bound_fixed.map_or("not applicable".into(), float),
        );
        line("bound_adaptive", float(self.bound_adaptive));
        line("reducibility_order", self.reducibility_order.to_string());
        line("irreducible", self.irreducible.to_string());
        line("witness", opt(self.witness));
        line("n_minus_1_reducible", self.n_minus_1_reducible.to_string());
        line("cannot_cool", self.cannot_cool.to_string());
        line(
            "requires_toffoli",
            self.requires_toffoli.map_or("-".into(), |b| b.to_string()),
        );
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SynthesisReport {
    pub cost: CostKind,
    pub matrix: CostMatrix,
    pub matching: Matching,
    /// Present when enumeration was requested.
    pub optimal_matchings: Option<Vec<Matching>>,
    pub tlps: Vec<TwoLevelPermutation>,
    pub native_gate_count: usize,
    pub lowered_gate_count: usize,
    pub two_control_gates: usize,
    /// `None` when the circuit is too wide to tabulate.
    pub odd_permutation: Option<bool>,
}

pub struct Synthesis {
    pub report: SynthesisReport,
    pub native: Circuit,
    pub lowered: Circuit,
}

/// Graph from `spec`, costs evaluated with `cost_spec`, solved by the
/// Hungarian algorithm and turned into circuits.
pub fn synthesize(
    spec: &MachineSpec,
    cost: CostKind,
    cost_spec: &MachineSpec,
    enumerate_limit: Option<usize>,
) -> Result<Synthesis> {
    let graph = build_graph(spec);
    let matrix = cost_matrix(&graph, cost.function().as_ref(), cost_spec)?;
    let matching = hungarian(&matrix)?;
    let optimal_matchings = enumerate_limit
        .map(|limit| enumerate_optimal(&matrix, limit))
        .transpose()?;
    let mut tlps = cooling_unitary(&matching)?;
    tlps.sort();
    let native = synthesize_circuit(spec.n() + 1, &tlps)?;
    let (lowered, lowered_gate_count) = lower_circuit(&native);
    let odd_permutation = if native.width <= MAX_SIMULATION_WIDTH {
        Some(is_odd(&permutation(&native)?))
    } else {
        None
    };
    Ok(Synthesis {
        report: SynthesisReport {
            cost,
            matrix,
            matching,
            optimal_matchings,
            tlps,
            native_gate_count: native.len(),
            lowered_gate_count,
            two_control_gates: lowered.count_with_controls(2),
            odd_permutation,
        },
        native,
        lowered,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analyze_two_qubit() {
        let spec = MachineSpec::new(2f64.ln(), &[3f64.ln(), 8f64.ln()]).unwrap();
        let r = analyze(&spec);
        assert_eq!(list(&r.swappable), "01 11");
        assert_eq!(r.reducibility_order, 1);
        assert!((r.p0_final - 8.0 / 9.0).abs() < 1e-12);
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["swappable"], serde_json::json!(["01", "11"]));
        assert_eq!(json["p0_final"], serde_json::json!(0.888888888889));
        assert_eq!(json["requires_toffoli"], serde_json::json!(false));
        assert!(r
            .to_text()
            .lines()
            .any(|l| l.split_whitespace().collect::<Vec<_>>() == ["reducibility_order", "1"]));
    }

    #[test]
    fn synthesize_toffoli_case() {
        let spec = MachineSpec::new(2f64.ln(), &[5f64.ln(), 8f64.ln()]).unwrap();
        let s = synthesize(&spec, CostKind::Hamming, &spec, Some(10)).unwrap();
        assert_eq!(s.report.tlps.len(), 1);
        assert_eq!(s.report.odd_permutation, Some(true));
        assert!(s.report.two_control_gates >= 1);
        assert_eq!(s.report.optimal_matchings.as_ref().unwrap().len(), 1);
    }
}
