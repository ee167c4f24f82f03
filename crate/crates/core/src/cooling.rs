//! Optimal ground-state gain and its closed-form lower bounds.

use serde::Serialize;

use crate::bitstring::{lex_ge, BitString};
use crate::machine::MachineSpec;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoolingReport {
    #[serde(serialize_with = "crate::format::serialize_rounded")]
    pub p0_initial: f64,
    #[serde(serialize_with = "crate::format::serialize_rounded")]
    pub p0_final: f64,
    #[serde(serialize_with = "crate::format::serialize_rounded")]
    pub delta_p0: f64,
    pub swappable_count: usize,
    #[serde(serialize_with = "crate::format::serialize_rounded")]
    pub bound_virtual: f64,
    /// `None` when `(T_M/T_S)·ω ≥ γ₁`.
    #[serde(serialize_with = "crate::format::serialize_rounded_option")]
    pub bound_fixed: Option<f64>,
    #[serde(serialize_with = "crate::format::serialize_rounded")]
    pub bound_adaptive: f64,
    #[serde(serialize_with = "crate::format::serialize_rounded")]
    pub z_system: f64,
    #[serde(serialize_with = "crate::format::serialize_rounded")]
    pub z_machine: f64,
}

/// Gain in `p₀` from exchanging `|0_S j⟩ ↔ |1_S j⊕1⟩`, positive exactly for
/// the members of the swappable set.
pub fn swap_gain(spec: &MachineSpec, j: &BitString) -> f64 {
    let e = spec.machine_energy(j);
    let bs = spec.beta_system();
    let bm = spec.beta_machine();
    let excited = (-bs * spec.omega() - bm * (spec.e_max() - e)).exp();
    let ground = (-bm * e).exp();
    (excited - ground) / (spec.z_system() * spec.z_machine())
}

/// Sum with the smallest magnitudes first.
fn stable_sum(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    terms.iter().sum()
}

pub fn p0_initial(spec: &MachineSpec) -> f64 {
    1.0 / spec.z_system()
}

/// Exact optimal increase of the system ground population.
pub fn exact_delta(spec: &MachineSpec) -> f64 {
    let set = spec.swappable_set();
    stable_sum(set.iter().map(|j| swap_gain(spec, j)).collect())
}

pub fn delta_p0(spec: &MachineSpec) -> CoolingReport {
    let set = spec.swappable_set();
    let delta = stable_sum(set.iter().map(|j| swap_gain(spec, j)).collect());
    let p0 = p0_initial(spec);
    CoolingReport {
        p0_initial: p0,
        p0_final: p0 + delta,
        delta_p0: delta,
        swappable_count: set.len(),
        bound_virtual: bound_virtual(spec),
        bound_fixed: bound_fixed(spec),
        bound_adaptive: bound_adaptive(spec),
        z_system: spec.z_system(),
        z_machine: spec.z_machine(),
    }
}

/// Gain of the single exchange `|0_S 1^n⟩ ↔ |1_S 0^n⟩`, clamped at zero.
pub fn bound_virtual(spec: &MachineSpec) -> f64 {
    let num =
        (-spec.beta_system() * spec.omega()).exp() - (-spec.beta_machine() * spec.e_max()).exp();
    (num / (spec.z_system() * spec.z_machine())).max(0.0)
}

/// First (1-based) qubit of the coldest block used by the fixed bound.
pub fn fixed_bound_start(n: usize) -> usize {
    if n.is_multiple_of(2) {
        n / 2 + 1
    } else {
        (n + 3) / 2
    }
}

/// Bound from swapping every level whose coldest qubits from `k̃` on are all
/// excited. Only defined when `(T_M/T_S)·ω < γ₁`.
pub fn bound_fixed(spec: &MachineSpec) -> Option<f64> {
    let gaps = spec.gaps();
    if spec.scaled_omega() >= gaps[0] {
        return None;
    }
    let bs = spec.beta_system();
    let bm = spec.beta_machine();
    let tail = &gaps[fixed_bound_start(gaps.len()) - 1..];
    let e_tail: f64 = tail.iter().sum();
    let z_tail: f64 = tail.iter().map(|g| 1.0 + (-bm * g).exp()).product();
    let zs = spec.z_system();
    let first = ((-bs * spec.omega()).exp() - (-bm * e_tail).exp()) / (zs * z_tail);
    let second = ((-bm * e_tail).exp() - (-bs * spec.omega() - bm * (spec.e_max() - e_tail)).exp())
        / (zs * spec.z_machine());
    Some(first + second)
}

/// `1^{2k−n}(01)^{n−k}`.
pub fn anchor(n: usize, k: usize) -> BitString {
    assert!(2 * k >= n && k <= n, "anchor needs n/2 <= k <= n");
    let lead = 2 * k - n;
    let mut value = 0u32;
    for _ in 0..lead {
        value = (value << 1) | 1;
    }
    for _ in 0..n - k {
        value = (value << 2) | 0b01;
    }
    BitString::from_parts(n, value)
}

/// Anchor of the level set summed by [`bound_adaptive`], or `None` when the
/// window condition fails for every `k`.
pub fn adaptive_anchor(spec: &MachineSpec) -> Option<BitString> {
    let n = spec.n();
    let gaps = spec.gaps();
    let tau_omega = spec.scaled_omega();
    if n.is_multiple_of(2) && tau_omega < crate::orders::alternating_margin(gaps) {
        return Some(anchor(n, n / 2));
    }
    ((n + 2) / 2..=n)
        .find(|&k| tau_omega < gaps[..2 * k - n].iter().sum::<f64>())
        .map(|k| anchor(n, k))
}

/// Sum of swap gains over every level above the adaptive anchor.
pub fn bound_adaptive(spec: &MachineSpec) -> f64 {
    match adaptive_anchor(spec) {
        Some(a) => stable_sum(
            BitString::all(spec.n())
                .filter(|j| lex_ge(j, &a))
                .map(|j| swap_gain(spec, &j))
                .collect(),
        ),
        None => 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitstring::upset;
    use crate::machine::Family;

    fn ln(x: f64) -> f64 {
        x.ln()
    }

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn two_qubit_gains() {
        let r = delta_p0(&MachineSpec::new(ln(2.0), &[ln(5.0), ln(8.0)]).unwrap());
        close(r.p0_initial, 2.0 / 3.0, 1e-15);
        close(r.p0_final, 0.901_234_567_9, 1e-10);
        close(r.delta_p0, 0.234_567_901_2, 1e-10);

        let r = delta_p0(&MachineSpec::new(ln(2.0), &[ln(3.0), ln(8.0)]).unwrap());
        close(r.p0_final, 8.0 / 9.0, 1e-12);
        close(r.delta_p0, 2.0 / 9.0, 1e-12);
        close(r.bound_virtual, (0.5 - 1.0 / 24.0) / 2.25, 1e-12);
        assert!(r.bound_virtual <= r.delta_p0);
    }

    #[test]
    fn three_qubit_case_two() {
        let spec = MachineSpec::new(ln(2.0), &[ln(3.0), ln(22.0), ln(32.0)]).unwrap();
        let r = delta_p0(&spec);
        close(r.p0_final, 0.980_895_915_678_524_3, 1e-12);
        let g = spec.gaps();
        let closed = (1.0 + (-g[0]).exp() + (-g[1]).exp() + (-g[2]).exp()) / spec.z_machine();
        close(r.p0_final, closed, 1e-12);
    }

    #[test]
    fn useless_machine() {
        let spec = MachineSpec::new(5.0, &[1.0, 2.0]).unwrap();
        let r = delta_p0(&spec);
        assert_eq!(r.delta_p0, 0.0);
        assert_eq!(r.swappable_count, 0);
        assert_eq!(r.bound_adaptive, 0.0);
        let spec = MachineSpec::new(3.0, &[1.0, 2.0]).unwrap();
        assert_eq!(bound_virtual(&spec), 0.0);
    }

    #[test]
    fn single_qubit_virtual_is_exact() {
        let spec = MachineSpec::new(0.3, &[1.2]).unwrap();
        let r = delta_p0(&spec);
        assert_eq!(r.swappable_count, 1);
        close(r.bound_virtual, r.delta_p0, 1e-15);
        close(r.bound_fixed.unwrap(), r.delta_p0, 1e-15);
    }

    #[test]
    fn degenerate_bounds() {
        let spec = MachineSpec::family(Family::Degenerate, 1.0, 3, 0.5).unwrap();
        let r = delta_p0(&spec);
        close(r.delta_p0, 0.199_456_995_1, 1e-10);
        close(r.bound_fixed.unwrap(), 0.178_105_087_1, 1e-10);

        let spec = MachineSpec::family(Family::Degenerate, 1.0, 4, 0.5).unwrap();
        assert_eq!(fixed_bound_start(4), 3);
        let r = delta_p0(&spec);
        close(r.delta_p0, 0.227_859_907_9, 1e-10);
        close(r.bound_fixed.unwrap(), 0.166_220_816_7, 1e-10);
        close(r.bound_adaptive, 0.197_040_362_3, 1e-10);
        let a = adaptive_anchor(&spec).unwrap();
        assert_eq!(a.to_string(), "1101");
        let names: Vec<_> = upset(&a).iter().map(|s| s.to_string()).collect();
        assert_eq!(names, ["0111", "1011", "1101", "1111"]);
    }

    #[test]
    fn fixed_bound_inapplicable() {
        let spec = MachineSpec::new(1.0, &[1.0, 2.0]).unwrap();
        assert_eq!(bound_fixed(&spec), None);
        let spec = MachineSpec::new(0.5, &[1.0, 2.0])
            .unwrap()
            .with_temperatures(1.0, 2.0)
            .unwrap();
        assert_eq!(bound_fixed(&spec), None);
    }

    #[test]
    fn adaptive_two_qubit_is_virtual() {
        let spec = MachineSpec::new(0.1, &[1.0, 1.0]).unwrap();
        assert_eq!(adaptive_anchor(&spec).unwrap().to_string(), "11");
        close(bound_adaptive(&spec), bound_virtual(&spec), 1e-15);
    }

    #[test]
    fn anchors() {
        assert_eq!(anchor(4, 2).to_string(), "0101");
        assert_eq!(anchor(3, 2).to_string(), "101");
        assert_eq!(anchor(2, 2).to_string(), "11");
        assert_eq!(anchor(5, 3).to_string(), "10101");
    }
}
