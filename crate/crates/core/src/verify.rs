//! Seeded cross-checks of every module against the brute-force oracle.
//!
//! Random machines draw `n` uniformly from `1..=max_n`, gaps log-uniformly
//! from `[0.1, 10]`, `ω` uniformly from `(0, γ₁]` and both temperatures
//! log-uniformly from `[0.5, 2]`. The generator is ChaCha8 seeded with
//! `seed_from_u64`, so a failing seed reproduces on every platform.

use std::collections::hash_map::Entry;
use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bitstring::{successors, BitString};
use crate::circuit::{
    cooling_unitary, decompose_tlp, lower_circuit, permutation, synthesize_circuit, tlp_permutation,
};
use crate::cooling::delta_p0;
use crate::error::Result;
use crate::machine::MachineSpec;
use crate::matching::{
    build_graph, cost_matrix, enumerate_optimal, hungarian, CostMatrix, HammingCost,
};
use crate::oracle::{apply_permutation, joint_populations, pairwise_cool, sort_cool};
use crate::orders::{ell_range, minimal_swappable_set, never_swappable_set, window_holds};
use crate::reducibility::{is_irreducible, reducibility_order};

/// Agreement tolerance for populations.
pub const POPULATION_TOLERANCE: f64 = 1e-12;

/// Widths at or below which every pair of strings is checked for the Carnot
/// bound; wider machines use sampled pairs.
pub const EXHAUSTIVE_PAIR_WIDTH: usize = 6;

const SAMPLED_PAIRS: usize = 4096;

/// Number of random signed matrices checked against brute force.
pub const MATRIX_TRIALS: usize = 200;

pub fn log_uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..=hi.ln())).exp()
}

pub fn random_gaps(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let mut gaps: Vec<f64> = (0..n).map(|_| log_uniform(rng, 0.1, 10.0)).collect();
    gaps.sort_by(f64::total_cmp);
    gaps
}

pub fn random_spec(rng: &mut impl Rng, max_n: usize) -> Result<MachineSpec> {
    let n = rng.gen_range(1..=max_n);
    let gaps = random_gaps(rng, n);
    let omega = gaps[0] * (1.0 - rng.gen::<f64>());
    MachineSpec::new(omega, &gaps)?
        .with_temperatures(log_uniform(rng, 0.5, 2.0), log_uniform(rng, 0.5, 2.0))
}

/// Square matrix with entries uniform in `[−10, 10]`.
pub fn random_matrix(rng: &mut impl Rng, m: usize) -> CostMatrix {
    let entries = (0..m)
        .map(|_| (0..m).map(|_| rng.gen_range(-10.0..=10.0)).collect())
        .collect();
    CostMatrix::from_entries(entries).expect("square finite matrix")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub description: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: Option<u64>,
    pub trials: usize,
    pub max_n: usize,
    pub passed: bool,
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }
}

const CHECKS: [(&str, &str); 10] = [
    ("swappable_set", "swappable set equals the levels moved by sorting and by pairwise exchange"),
    ("pipeline", "matching, exchanges and circuit reproduce the sorted ground population"),
    ("carnot", "every cooling pair has margin below the Carnot efficiency"),
    ("upward_closed", "swappable set is closed upward under the lexicographic order"),
    ("irreducible", "a witness exists exactly when the reducibility order is 0"),
    ("level_sets", "never set avoids the swappable set; minimal sets lie inside it"),
    ("hungarian", "Hungarian total equals the brute-force minimum"),
    ("tlp_circuits", "each exchange circuit is the exact transposition with lowered count at least the Hamming distance"),
    ("bounds", "every defined bound is at most the exact gain"),
    ("cooling_vs_oracle", "closed-form final population equals the sorted one"),
];

/// Accumulates pass/fail counts per check.
pub struct Checker {
    outcomes: Vec<CheckOutcome>,
    never_sets: HashMap<usize, Vec<BitString>>,
}

impl Default for Checker {
    fn default() -> Self {
        Self::new()
    }
}

impl Checker {
    pub fn new() -> Self {
        Self {
            outcomes: CHECKS
                .iter()
                .map(|&(name, description)| CheckOutcome {
                    name,
                    description,
                    cases: 0,
                    failures: 0,
                    first_failure: None,
                })
                .collect(),
            never_sets: HashMap::new(),
        }
    }

    fn record(&mut self, name: &str, ok: bool, detail: impl FnOnce() -> String) {
        let o = self
            .outcomes
            .iter_mut()
            .find(|o| o.name == name)
            .expect("known check");
        o.cases += 1;
        if !ok {
            o.failures += 1;
            if o.first_failure.is_none() {
                o.first_failure = Some(detail());
            }
        }
    }

    pub fn outcomes(&self) -> &[CheckOutcome] {
        &self.outcomes
    }

    pub fn into_report(self, seed: Option<u64>, trials: usize, max_n: usize) -> VerifyReport {
        let checks: Vec<_> = self.outcomes.into_iter().filter(|o| o.cases > 0).collect();
        VerifyReport {
            seed,
            trials,
            max_n,
            passed: checks.iter().all(CheckOutcome::passed),
            checks,
        }
    }

    /// Every spec-level check. `rng` drives pair sampling for wide machines.
    pub fn check_spec(&mut self, spec: &MachineSpec, rng: &mut impl Rng) -> Result<()> {
        let label = || {
            format!(
                "omega={:?} gaps={:?} t_system={:?} t_machine={:?}",
                spec.omega(),
                spec.gaps(),
                spec.t_system(),
                spec.t_machine()
            )
        };
        let n = spec.n();
        let set = spec.swappable_set();
        let pop = joint_populations(spec)?;
        let sorted = sort_cool(&pop);
        let pairwise = pairwise_cool(&pop);

        let ok = sorted.swapped == set.members() && pairwise.swapped == set.members();
        self.record("swappable_set", ok, || {
            format!(
                "{}: set {:?}, sorted {:?}",
                label(),
                set.members(),
                sorted.swapped
            )
        });

        let report = delta_p0(spec);
        let ok = (report.p0_final - sorted.p0_final).abs() <= POPULATION_TOLERANCE;
        self.record("cooling_vs_oracle", ok, || {
            format!("{}: {} vs {}", label(), report.p0_final, sorted.p0_final)
        });

        let slack = POPULATION_TOLERANCE;
        let ok = report.bound_virtual <= report.delta_p0 + slack
            && report.bound_adaptive <= report.delta_p0 + slack
            && report
                .bound_fixed
                .is_none_or(|f| f <= report.delta_p0 + slack);
        self.record("bounds", ok, || format!("{}: {report:?}", label()));

        if !set.is_empty() {
            let graph = build_graph(spec);
            let matrix = cost_matrix(&graph, &HammingCost, spec)?;
            let matching = hungarian(&matrix)?;
            let tlps = cooling_unitary(&matching)?;
            let circuit = synthesize_circuit(n + 1, &tlps)?;
            let cooled = apply_permutation(&pop, &permutation(&circuit)?)?;
            let p0 = cooled.ground_population();
            let ok = (p0 - sorted.p0_final).abs() <= POPULATION_TOLERANCE;
            self.record("pipeline", ok, || {
                format!("{}: {p0} vs {}", label(), sorted.p0_final)
            });

            for t in &tlps {
                let native = decompose_tlp(t);
                let (_, lowered) = lower_circuit(&native);
                let ok = permutation(&native)? == tlp_permutation(n + 1, &[*t])
                    && lowered >= t.hamming() as usize;
                self.record("tlp_circuits", ok, || {
                    format!("{}: exchange {} {}", label(), t.j, t.k)
                });
            }
        }

        let eta = spec.carnot_efficiency();
        let mut carnot = |i: &BitString, j: &BitString| -> Result<()> {
            if spec.cools(i, j)? {
                let margin = spec.carnot_margin(i, j)?;
                let ok = margin < eta;
                self.record("carnot", ok, || {
                    format!("{}: pair {i} {j} margin {margin} eta {eta}", label())
                });
            }
            Ok(())
        };
        if n <= EXHAUSTIVE_PAIR_WIDTH {
            for i in BitString::all(n) {
                for j in BitString::all(n) {
                    carnot(&i, &j)?;
                }
            }
        } else {
            for i in BitString::all(n) {
                carnot(&i, &i.conjugate())?;
            }
            for _ in 0..SAMPLED_PAIRS {
                let i = BitString::from_parts(n, rng.gen_range(0..1u32 << n));
                let j = BitString::from_parts(n, rng.gen_range(0..1u32 << n));
                carnot(&i, &j)?;
            }
        }

        let ok = set.iter().all(|k| successors(k).all(|j| set.contains(&j)));
        self.record("upward_closed", ok, || {
            format!("{}: {:?}", label(), set.members())
        });

        if !set.is_empty() {
            let (irr, _) = is_irreducible(spec);
            let order = reducibility_order(spec);
            self.record("irreducible", irr == (order == 0), || {
                format!("{}: irreducible {irr}, order {order}", label())
            });
        }

        self.check_level_sets(spec)?;
        Ok(())
    }

    /// Never set disjoint from the swappable set; minimal set inside it
    /// whenever its window holds.
    pub fn check_level_sets(&mut self, spec: &MachineSpec) -> Result<()> {
        let n = spec.n();
        let set = spec.swappable_set();
        let never = match self.never_sets.entry(n) {
            Entry::Occupied(e) => e.into_mut(),
            Entry::Vacant(e) => e.insert(never_swappable_set(n)?),
        };
        let clash = never.iter().find(|j| set.contains(j)).copied();
        self.record("level_sets", clash.is_none(), || {
            format!(
                "n={n} gaps={:?}: {} is never swappable but is in the set",
                spec.gaps(),
                clash.unwrap()
            )
        });
        let (lo, hi) = ell_range(n);
        for ell in lo..=hi {
            if window_holds(spec.gaps(), spec.scaled_omega(), ell) {
                let sets = minimal_swappable_set(n, ell)?;
                let missing = sets.minimal_set.iter().find(|j| !set.contains(j)).copied();
                self.record("level_sets", missing.is_none(), || {
                    format!(
                        "n={n} ell={ell} gaps={:?} omega={}: {} missing",
                        spec.gaps(),
                        spec.omega(),
                        missing.unwrap()
                    )
                });
            }
        }
        Ok(())
    }

    /// Hungarian total against brute force.
    pub fn check_matrix(&mut self, matrix: &CostMatrix) -> Result<()> {
        let h = hungarian(matrix)?;
        let all = enumerate_optimal(matrix, usize::MAX)?;
        let best = all[0].total;
        let ok = h.is_perfect(matrix.size())
            && (h.total - best).abs() <= 1e-9 * best.abs().max(1.0)
            && all.iter().any(|m| m.assignment == h.assignment);
        self.record("hungarian", ok, || {
            format!("{:?}: hungarian {} brute {best}", matrix.entries, h.total)
        });
        Ok(())
    }
}

/// `trials` random machines with `n ≤ max_n`, plus up to
/// [`MATRIX_TRIALS`] random signed matrices of size at most 6.
pub fn run_random(seed: u64, trials: usize, max_n: usize) -> Result<VerifyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checker = Checker::new();
    for _ in 0..trials {
        let spec = random_spec(&mut rng, max_n)?;
        checker.check_spec(&spec, &mut rng)?;
    }
    for _ in 0..trials.min(MATRIX_TRIALS) {
        let m = rng.gen_range(1..=6);
        checker.check_matrix(&random_matrix(&mut rng, m))?;
    }
    Ok(checker.into_report(Some(seed), trials, max_n))
}

/// Spec-level checks for one machine.
pub fn run_machine(spec: &MachineSpec) -> Result<VerifyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut checker = Checker::new();
    checker.check_spec(spec, &mut rng)?;
    Ok(checker.into_report(None, 1, spec.n()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_random_run_passes() {
        let r = run_random(1, 50, 5).unwrap();
        assert!(r.passed, "{r:#?}");
        assert!(r.check("hungarian").unwrap().cases == 50);
    }

    #[test]
    fn random_specs_respect_ranges() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let s = random_spec(&mut rng, 8).unwrap();
            assert!((1..=8).contains(&s.n()));
            assert!(s.omega() > 0.0 && s.omega() <= s.gaps()[0]);
            assert!(s.gaps().iter().all(|&g| (0.1..=10.0).contains(&g)));
            assert!((0.5..=2.0).contains(&s.t_system()));
        }
    }

    #[test]
    fn same_seed_same_report() {
        assert_eq!(run_random(9, 20, 4).unwrap(), run_random(9, 20, 4).unwrap());
    }
}
