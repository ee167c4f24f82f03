//! How many of the warmest machine qubits take no part in optimal cooling.

use serde::Serialize;

use crate::bitstring::BitString;
use crate::machine::{MachineSpec, SwappableSet};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReducibilityReport {
    pub order: usize,
    pub irreducible: bool,
    pub witness: Option<BitString>,
    pub n_minus_1_reducible: bool,
    /// The swappable set is empty, so no unitary cools the system.
    pub cannot_cool: bool,
}

fn closed_under_flip(set: &SwappableSet, bit: usize) -> bool {
    set.iter().all(|m| set.contains(&m.flip(bit)))
}

/// Largest `k` such that flipping any of the first `k` bits maps the
/// swappable set onto itself. An empty set gives `n`.
pub fn reducibility_order(spec: &MachineSpec) -> usize {
    let set = spec.swappable_set();
    if set.is_empty() {
        return spec.n();
    }
    (0..spec.n())
        .take_while(|&i| closed_under_flip(&set, i))
        .count()
}

/// Every `l` of width `n − 1` with `1l ∈ 𝕊` and `0l ∉ 𝕊`, ascending.
pub fn irreducibility_witnesses(spec: &MachineSpec) -> Vec<BitString> {
    let set = spec.swappable_set();
    BitString::all(spec.n() - 1)
        .filter(|l| set.contains(&l.prepend(true)) && !set.contains(&l.prepend(false)))
        .collect()
}

fn witness_key(l: &BitString) -> (u32, usize, u32) {
    (
        l.hamming_weight(),
        l.ones_positions().iter().sum(),
        l.value(),
    )
}

/// Whether the warmest qubit is needed. The returned witness is the least
/// one under the lexicographic partial order, ties broken by weight, then
/// by the sum of the positions of the ones, then numerically.
pub fn is_irreducible(spec: &MachineSpec) -> (bool, Option<BitString>) {
    let witness = irreducibility_witnesses(spec)
        .into_iter()
        .min_by_key(witness_key);
    (witness.is_some(), witness)
}

/// Whether cooling reduces to a SWAP of the system with the coldest qubit,
/// i.e. `0^{n−1}1 ∈ 𝕊`.
pub fn is_n_minus_1_reducible(spec: &MachineSpec) -> bool {
    let n = spec.n();
    spec.exceeds_threshold(spec.machine_energy(&BitString::from_parts(n, 1)))
}

pub fn reducibility(spec: &MachineSpec) -> ReducibilityReport {
    let (irreducible, witness) = is_irreducible(spec);
    ReducibilityReport {
        order: reducibility_order(spec),
        irreducible,
        witness,
        n_minus_1_reducible: is_n_minus_1_reducible(spec),
        cannot_cool: spec.swappable_set().is_empty(),
    }
}

/// Irreducibility test for a degenerate machine of `n` qubits with gap
/// `gamma`. Returns the smallest `t` in `0..n` with
/// `−(n−2t)γ ≤ τω ≤ 2γ − (n−2t)γ`.
pub fn degenerate_irreducibility(n: usize, gamma: f64, tau_omega: f64) -> Option<usize> {
    (0..n).find(|&t| {
        let shift = (n as f64 - 2.0 * t as f64) * gamma;
        -shift <= tau_omega && tau_omega <= 2.0 * gamma - shift
    })
}
