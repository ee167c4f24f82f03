//! Machine specification, energetics and the swappable set.
//!
//! Units use `k_B = ħ = 1`. A machine is `n` qubits with gaps `Γ` sorted
//! non-decreasingly at temperature `T_M`; the system is one qubit with gap
//! `ω` at temperature `T_S`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bitstring::{BitString, MAX_WIDTH};
use crate::error::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Closed-form gap families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `γ_i = γ`
    Degenerate,
    /// `γ_i = i·γ`
    Linear,
    /// `γ_i = γ^i`
    Exponential,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Degenerate, Family::Linear, Family::Exponential];

    pub fn gaps(self, gamma: f64, n: usize) -> Vec<f64> {
        (1..=n)
            .map(|i| match self {
                Family::Degenerate => gamma,
                Family::Linear => i as f64 * gamma,
                Family::Exponential => gamma.powi(i as i32),
            })
            .collect()
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Degenerate => "degenerate",
            Family::Linear => "linear",
            Family::Exponential => "exponential",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "degenerate" => Ok(Family::Degenerate),
            "linear" => Ok(Family::Linear),
            "exponential" => Ok(Family::Exponential),
            other => Err(Error::validation(
                "family",
                format!("unknown family {other:?} (expected degenerate, linear or exponential)"),
            )),
        }
    }
}

/// The JSON document accepted by [`load_machine`]. Either `gaps` or the
/// `family`/`gamma`/`n` triple must be given.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MachineDocument {
    pub omega: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gaps: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_system: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_machine: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MachineSpec {
    omega: f64,
    gaps: Vec<f64>,
    t_system: f64,
    t_machine: f64,
    tolerance: f64,
    original_gaps: Vec<f64>,
    sort_permutation: Vec<usize>,
    family: Option<Family>,
}

fn positive(field: &str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::validation(
            field,
            format!("must be a positive finite number, got {value}"),
        ))
    }
}

/// Parse and validate a machine JSON document.
pub fn load_machine(document: &str) -> Result<MachineSpec> {
    let doc: MachineDocument =
        serde_json::from_str(document).map_err(|e| Error::Parse(e.to_string()))?;
    MachineSpec::from_document(&doc)
}

impl MachineSpec {
    /// Equal temperatures `T_S = T_M = 1` and the default tolerance. Gaps are
    /// sorted ascending; the original order is kept for reporting.
    pub fn new(omega: f64, gaps: &[f64]) -> Result<Self> {
        positive("omega", omega)?;
        if gaps.is_empty() {
            return Err(Error::validation("gaps", "at least one gap is required"));
        }
        if gaps.len() > MAX_WIDTH {
            return Err(Error::validation(
                "gaps",
                format!("at most {MAX_WIDTH} gaps are supported, got {}", gaps.len()),
            ));
        }
        for (i, &g) in gaps.iter().enumerate() {
            positive(&format!("gaps[{i}]"), g)?;
        }
        let mut sort_permutation: Vec<usize> = (0..gaps.len()).collect();
        sort_permutation.sort_by(|&a, &b| gaps[a].total_cmp(&gaps[b]));
        let sorted = sort_permutation.iter().map(|&i| gaps[i]).collect();
        Ok(Self {
            omega,
            gaps: sorted,
            t_system: 1.0,
            t_machine: 1.0,
            tolerance: DEFAULT_TOLERANCE,
            original_gaps: gaps.to_vec(),
            sort_permutation,
            family: None,
        })
    }

    pub fn family(family: Family, gamma: f64, n: usize, omega: f64) -> Result<Self> {
        positive("gamma", gamma)?;
        if n == 0 || n > MAX_WIDTH {
            return Err(Error::validation(
                "n",
                format!("must lie in 1..={MAX_WIDTH}, got {n}"),
            ));
        }
        let mut spec = Self::new(omega, &family.gaps(gamma, n))?;
        spec.family = Some(family);
        Ok(spec)
    }

    pub fn with_temperatures(mut self, t_system: f64, t_machine: f64) -> Result<Self> {
        self.t_system = positive("t_system", t_system)?;
        self.t_machine = positive("t_machine", t_machine)?;
        Ok(self)
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Result<Self> {
        if !(tolerance.is_finite() && tolerance >= 0.0) {
            return Err(Error::validation(
                "tolerance",
                format!("must be a non-negative finite number, got {tolerance}"),
            ));
        }
        self.tolerance = tolerance;
        Ok(self)
    }

    pub fn from_document(doc: &MachineDocument) -> Result<Self> {
        let omega = doc
            .omega
            .ok_or_else(|| Error::validation("omega", "missing"))?;
        let spec = match (&doc.gaps, &doc.family) {
            (Some(_), Some(_)) => {
                return Err(Error::validation(
                    "family",
                    "give either explicit gaps or a family, not both",
                ))
            }
            (Some(gaps), None) => Self::new(omega, gaps)?,
            (None, Some(family)) => {
                let family: Family = family.parse()?;
                let gamma = doc
                    .gamma
                    .ok_or_else(|| Error::validation("gamma", "missing for family machine"))?;
                let n = doc
                    .n
                    .ok_or_else(|| Error::validation("n", "missing for family machine"))?;
                Self::family(family, gamma, n, omega)?
            }
            (None, None) => {
                return Err(Error::validation(
                    "gaps",
                    "either gaps or family is required",
                ))
            }
        };
        spec.with_temperatures(doc.t_system.unwrap_or(1.0), doc.t_machine.unwrap_or(1.0))?
            .with_tolerance(doc.tolerance.unwrap_or(DEFAULT_TOLERANCE))
    }

    /// Explicit-gaps document describing this spec (sorted gaps).
    pub fn to_document(&self) -> MachineDocument {
        MachineDocument {
            omega: Some(self.omega),
            gaps: Some(self.gaps.clone()),
            t_system: Some(self.t_system),
            t_machine: Some(self.t_machine),
            tolerance: Some(self.tolerance),
            ..Default::default()
        }
    }

    pub fn n(&self) -> usize {
        self.gaps.len()
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Sorted gaps `γ_1 ≤ … ≤ γ_n`.
    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    pub fn original_gaps(&self) -> &[f64] {
        &self.original_gaps
    }

    /// `gaps()[k] == original_gaps()[sort_permutation()[k]]`.
    pub fn sort_permutation(&self) -> &[usize] {
        &self.sort_permutation
    }

    pub fn family_kind(&self) -> Option<Family> {
        self.family
    }

    pub fn t_system(&self) -> f64 {
        self.t_system
    }

    pub fn t_machine(&self) -> f64 {
        self.t_machine
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn beta_system(&self) -> f64 {
        1.0 / self.t_system
    }

    pub fn beta_machine(&self) -> f64 {
        1.0 / self.t_machine
    }

    /// `T_M / T_S`.
    pub fn temperature_ratio(&self) -> f64 {
        self.t_machine / self.t_system
    }

    /// `(T_M / T_S)·ω`, the quantity every cooling inequality compares against.
    pub fn scaled_omega(&self) -> f64 {
        self.temperature_ratio() * self.omega
    }

    pub fn e_max(&self) -> f64 {
        self.gaps.iter().sum()
    }

    pub fn z_system(&self) -> f64 {
        1.0 + (-self.beta_system() * self.omega).exp()
    }

    pub fn z_machine(&self) -> f64 {
        self.gaps
            .iter()
            .map(|g| 1.0 + (-self.beta_machine() * g).exp())
            .product()
    }

    /// `½((T_M/T_S)·ω + E_Max)`.
    pub fn threshold(&self) -> f64 {
        0.5 * (self.scaled_omega() + self.e_max())
    }

    /// `m·Γ` for a machine string whose width is already known to be `n`.
    /// Bits are summed from the left so that every caller sees identical
    /// rounding for the same string.
    pub(crate) fn machine_energy(&self, m: &BitString) -> f64 {
        debug_assert_eq!(m.width(), self.n());
        let n = self.n();
        let v = m.value();
        let mut e = 0.0;
        for (i, g) in self.gaps.iter().enumerate() {
            if (v >> (n - 1 - i)) & 1 == 1 {
                e += g;
            }
        }
        e
    }

    /// Energy of a machine string (width `n`) or a joint string (width
    /// `n + 1`, system bit first, contributing `ω`).
    pub fn energy(&self, m: &BitString) -> Result<f64> {
        let n = self.n();
        if m.width() == n {
            Ok(self.machine_energy(m))
        } else if m.width() == n + 1 {
            let (system, machine) = m.split_first();
            let e = self.machine_energy(&machine);
            Ok(if system { self.omega + e } else { e })
        } else {
            Err(Error::Usage(format!(
                "bit string {m} has width {}, expected {n} (machine) or {} (joint)",
                m.width(),
                n + 1
            )))
        }
    }

    fn check_machine_width(&self, m: &BitString) -> Result<()> {
        if m.width() != self.n() {
            return Err(Error::width_mismatch(m.width(), self.n()));
        }
        Ok(())
    }

    fn tie_band(&self) -> f64 {
        self.tolerance * self.threshold().max(1.0)
    }

    /// Whether an energy lies strictly above the threshold. Values within
    /// `ε·max(1, threshold)` of it count as not above.
    pub fn exceeds_threshold(&self, energy: f64) -> bool {
        energy - self.threshold() > self.tie_band()
    }

    /// Membership of a machine string in the swappable set.
    pub fn is_swappable(&self, m: &BitString) -> Result<bool> {
        self.check_machine_width(m)?;
        Ok(self.exceeds_threshold(self.machine_energy(m)))
    }

    pub fn swappable_set(&self) -> SwappableSet {
        let members = BitString::all(self.n())
            .filter(|m| self.exceeds_threshold(self.machine_energy(m)))
            .collect();
        SwappableSet {
            width: self.n(),
            members,
            threshold: self.threshold(),
        }
    }

    /// Whether exchanging `|0_S i⟩ ↔ |1_S j⟩` cools the system, i.e.
    /// `(T_M/T_S)·ω < (i − j)·Γ`. Uses the same tie band as the swappable
    /// set so that `cools(i, i⊕1)` and `i ∈ 𝕊` always agree.
    pub fn cools(&self, i: &BitString, j: &BitString) -> Result<bool> {
        self.check_machine_width(i)?;
        self.check_machine_width(j)?;
        let diff = self.machine_energy(i) - self.machine_energy(j);
        Ok(0.5 * (diff - self.scaled_omega()) > self.tie_band())
    }

    /// Relative change of the system's effective gap, `(ω − (i − j)·Γ)/ω`.
    /// For any cooling pair this is below the Carnot efficiency `1 − T_M/T_S`.
    pub fn carnot_margin(&self, i: &BitString, j: &BitString) -> Result<f64> {
        self.check_machine_width(i)?;
        self.check_machine_width(j)?;
        let diff = self.machine_energy(i) - self.machine_energy(j);
        Ok((self.omega - diff) / self.omega)
    }

    pub fn carnot_efficiency(&self) -> f64 {
        1.0 - self.temperature_ratio()
    }
}

/// Machine strings whose ground-subspace level must be exchanged for optimal
/// cooling, ascending.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SwappableSet {
    #[serde(skip)]
    width: usize,
    members: Vec<BitString>,
    threshold: f64,
}

impl SwappableSet {
    pub fn members(&self) -> &[BitString] {
        &self.members
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, m: &BitString) -> bool {
        m.width() == self.width && self.members.binary_search(m).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = &BitString> {
        self.members.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn ln(x: f64) -> f64 {
        x.ln()
    }

    fn set(spec: &MachineSpec) -> Vec<String> {
        spec.swappable_set().iter().map(|m| m.to_string()).collect()
    }

    #[test]
    fn load_sorts_gaps() {
        let spec = load_machine(r#"{"omega": 0.693, "gaps": [2.079, 1.099]}"#).unwrap();
        assert_eq!(spec.gaps(), &[1.099, 2.079]);
        assert_eq!(spec.original_gaps(), &[2.079, 1.099]);
        assert_eq!(spec.sort_permutation(), &[1, 0]);
        assert_eq!(spec.t_system(), 1.0);
        assert_eq!(spec.t_machine(), 1.0);
    }

    #[test]
    fn load_family() {
        let spec = load_machine(r#"{"family": "degenerate", "gamma": 1.0, "n": 3, "omega": 0.5}"#)
            .unwrap();
        assert_eq!(spec.gaps(), &[1.0, 1.0, 1.0]);
        let lin =
            load_machine(r#"{"family": "linear", "gamma": 0.5, "n": 3, "omega": 0.1}"#).unwrap();
        assert_eq!(lin.gaps(), &[0.5, 1.0, 1.5]);
        let exp =
            load_machine(r#"{"family": "exponential", "gamma": 2, "n": 3, "omega": 1}"#).unwrap();
        assert_eq!(exp.gaps(), &[2.0, 4.0, 8.0]);
    }

    #[test]
    fn load_rejects_bad_fields() {
        let field = |doc: &str| match load_machine(doc) {
            Err(Error::Validation { field, .. }) => field,
            other => panic!("expected validation error, got {other:?}"),
        };
        assert_eq!(field(r#"{"omega": -1, "gaps": [1]}"#), "omega");
        assert_eq!(field(r#"{"omega": 1, "gaps": [1, 0]}"#), "gaps[1]");
        assert_eq!(
            field(r#"{"omega": 1, "gaps": [1], "t_machine": 0}"#),
            "t_machine"
        );
        assert_eq!(
            field(r#"{"omega": 1, "family": "cubic", "gamma": 1, "n": 2}"#),
            "family"
        );
        assert_eq!(
            field(r#"{"omega": 1, "family": "linear", "gamma": 1, "n": 25}"#),
            "n"
        );
        let too_many = format!(r#"{{"omega": 1, "gaps": [{}]}}"#, vec!["1"; 25].join(","));
        assert_eq!(field(&too_many), "gaps");
        assert!(matches!(
            load_machine(r#"{"omega": 1, "gapz": [1]}"#),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn energy_examples() {
        let spec = MachineSpec::new(ln(2.0), &[ln(3.0), ln(8.0)]).unwrap();
        assert_eq!(spec.energy(&b("00")).unwrap(), 0.0);
        assert!((spec.energy(&b("11")).unwrap() - ln(24.0)).abs() < 1e-12);
        let spec = MachineSpec::new(1.0, &[1.0, 2.0, 4.0]).unwrap();
        assert_eq!(spec.energy(&b("0110")).unwrap(), 3.0);
        assert_eq!(spec.energy(&b("1001")).unwrap(), 5.0);
        assert!(spec.energy(&b("01")).is_err());
    }

    #[test]
    fn threshold_examples() {
        let spec = MachineSpec::new(ln(2.0), &[ln(3.0), ln(8.0)]).unwrap();
        assert!((spec.threshold() - 0.5 * ln(48.0)).abs() < 1e-12);
        let spec = MachineSpec::family(Family::Degenerate, 1.0, 3, 0.5).unwrap();
        assert!((spec.threshold() - 1.75).abs() < 1e-12);
        let spec = MachineSpec::new(1e-12, &[1.0, 2.0, 4.0]).unwrap();
        assert!((spec.threshold() - 3.5).abs() < 1e-9);
    }

    #[test]
    fn swappable_set_examples() {
        let spec = MachineSpec::new(ln(2.0), &[ln(3.0), ln(8.0)]).unwrap();
        assert_eq!(set(&spec), ["01", "11"]);
        let spec = MachineSpec::new(ln(2.0), &[ln(2.0), ln(16.0), ln(32.0)]).unwrap();
        assert_eq!(set(&spec), ["011", "101", "111"]);
        let spec = MachineSpec::new(ln(2.0), &[ln(3.0), ln(22.0), ln(32.0)]).unwrap();
        assert_eq!(set(&spec), ["011", "101", "110", "111"]);
    }

    #[test]
    fn threshold_ties_are_excluded() {
        // E(01) = 1 = threshold exactly when ω → 0 and Γ = (1, 1).
        let spec = MachineSpec::new(1e-12, &[1.0, 1.0]).unwrap();
        assert_eq!(set(&spec), ["11"]);
    }

    #[test]
    fn cools_examples() {
        let spec = MachineSpec::new(ln(2.0), &[ln(3.0), ln(8.0)]).unwrap();
        assert!(spec.cools(&b("11"), &b("00")).unwrap());
        assert!(!spec.cools(&b("10"), &b("10")).unwrap());
        let spec = MachineSpec::new(ln(2.0), &[ln(5.0), ln(8.0)]).unwrap();
        assert!(!spec.cools(&b("01"), &b("10")).unwrap());
        assert!(spec.cools(&b("1"), &b("00")).is_err());
    }

    #[test]
    fn carnot_examples() {
        let spec = MachineSpec::new(ln(2.0), &[ln(3.0), ln(8.0)]).unwrap();
        assert_eq!(spec.carnot_margin(&b("01"), &b("01")).unwrap(), 1.0);
        let m = spec.carnot_margin(&b("11"), &b("00")).unwrap();
        assert!((m - (ln(2.0) - ln(24.0)) / ln(2.0)).abs() < 1e-12);
        assert!((m + 3.584_962_500_721_156).abs() < 1e-9);
        // Equal temperatures: η_c = 0, every cooling pair has a negative margin.
        for i in BitString::all(2) {
            for j in BitString::all(2) {
                if spec.cools(&i, &j).unwrap() {
                    assert!(spec.carnot_margin(&i, &j).unwrap() < 0.0);
                }
            }
        }
    }
}
