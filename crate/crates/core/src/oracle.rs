//! Brute-force reference: the full joint population vector, cooled by
//! sorting.

use std::fmt::Write as _;

use serde::Serialize;

use crate::bitstring::BitString;
use crate::circuit::TwoLevelPermutation;
use crate::error::{Error, Result};
use crate::format::float;
use crate::machine::MachineSpec;

/// Largest machine size for which populations are materialized.
pub const MAX_ORACLE_N: usize = 20;

/// Largest machine size drawn as a hypercube.
pub const MAX_HYPERCUBE_N: usize = 8;

/// Populations of the `2^{n+1}` joint levels, indexed by the numeric value
/// of the joint string (system bit most significant).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PopulationVector {
    pub width: usize,
    pub values: Vec<f64>,
}

impl PopulationVector {
    pub fn get(&self, s: &BitString) -> f64 {
        self.values[s.value() as usize]
    }

    /// Population of the system ground state, traced over the machine.
    pub fn ground_population(&self) -> f64 {
        self.values[..self.values.len() / 2].iter().sum()
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}

pub fn joint_populations(spec: &MachineSpec) -> Result<PopulationVector> {
    let n = spec.n();
    if n > MAX_ORACLE_N {
        return Err(Error::TooLarge {
            what: "n for the population oracle",
            value: n,
            max: MAX_ORACLE_N,
        });
    }
    let z = spec.z_system() * spec.z_machine();
    let bm = spec.beta_machine();
    let excited = (-spec.beta_system() * spec.omega()).exp();
    let machine: Vec<f64> = BitString::all(n)
        .map(|m| (-bm * spec.machine_energy(&m)).exp() / z)
        .collect();
    let mut values = machine.clone();
    values.extend(machine.iter().map(|p| p * excited));
    Ok(PopulationVector {
        width: n + 1,
        values,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SortCoolResult {
    pub p0_final: f64,
    /// Machine strings `i` whose ground level `|0_S i⟩` is exchanged.
    pub swapped: Vec<BitString>,
}

/// Put the `2^n` largest populations in the system ground subspace. Equal
/// populations keep ground levels in place.
pub fn sort_cool(pop: &PopulationVector) -> SortCoolResult {
    let half = pop.values.len() / 2;
    let mut order: Vec<usize> = (0..pop.values.len()).collect();
    order.sort_by(|&a, &b| {
        pop.values[b]
            .total_cmp(&pop.values[a])
            .then_with(|| (a >= half).cmp(&(b >= half)))
            .then_with(|| a.cmp(&b))
    });
    let top = &order[..half];
    let p0_final = top.iter().map(|&i| pop.values[i]).sum();
    let mut kept = vec![false; half];
    for &i in top.iter().filter(|&&i| i < half) {
        kept[i] = true;
    }
    let n = pop.width - 1;
    let swapped = (0..half)
        .filter(|&i| !kept[i])
        .map(|i| BitString::from_parts(n, i as u32))
        .collect();
    SortCoolResult { p0_final, swapped }
}

/// Repeatedly exchange the least populated ground level with the most
/// populated excited level while the excited one is strictly larger.
pub fn pairwise_cool(pop: &PopulationVector) -> SortCoolResult {
    let half = pop.values.len() / 2;
    let v = &pop.values;
    let mut ground: Vec<usize> = (0..half).collect();
    ground.sort_by(|&a, &b| v[a].total_cmp(&v[b]).then_with(|| a.cmp(&b)));
    let mut excited: Vec<usize> = (half..v.len()).collect();
    excited.sort_by(|&a, &b| v[b].total_cmp(&v[a]).then_with(|| a.cmp(&b)));
    let swaps = ground
        .iter()
        .zip(&excited)
        .take_while(|(&g, &e)| v[e] > v[g])
        .count();
    let mut after = v[..half].to_vec();
    for k in 0..swaps {
        after[ground[k]] = v[excited[k]];
    }
    let n = pop.width - 1;
    let mut swapped: Vec<BitString> = ground[..swaps]
        .iter()
        .map(|&i| BitString::from_parts(n, i as u32))
        .collect();
    swapped.sort_unstable();
    SortCoolResult {
        p0_final: after.iter().sum(),
        swapped,
    }
}

pub fn apply_tlps(
    pop: &PopulationVector,
    tlps: &[TwoLevelPermutation],
) -> Result<PopulationVector> {
    let mut out = pop.clone();
    for t in tlps {
        if t.width() != pop.width {
            return Err(Error::width_mismatch(t.width(), pop.width));
        }
        out.values.swap(t.j.value() as usize, t.k.value() as usize);
    }
    Ok(out)
}

/// Populations moved by a permutation table: level `v` ends up at `perm[v]`.
pub fn apply_permutation(pop: &PopulationVector, perm: &[u32]) -> Result<PopulationVector> {
    if perm.len() != pop.values.len() {
        return Err(Error::Usage(format!(
            "permutation has {} entries, population vector {}",
            perm.len(),
            pop.values.len()
        )));
    }
    let mut values = vec![0.0; perm.len()];
    for (v, &image) in perm.iter().enumerate() {
        values[image as usize] = pop.values[v];
    }
    Ok(PopulationVector {
        width: pop.width,
        values,
    })
}

/// The `(n+1)`-cube of joint levels, each labelled with its population;
/// levels that optimal cooling exchanges are filled.
pub fn hypercube_to_dot(spec: &MachineSpec) -> Result<String> {
    let n = spec.n();
    if n > MAX_HYPERCUBE_N {
        return Err(Error::TooLarge {
            what: "n for the hypercube drawing",
            value: n,
            max: MAX_HYPERCUBE_N,
        });
    }
    let pop = joint_populations(spec)?;
    let set = spec.swappable_set();
    let mut out = String::from("graph hypercube {\n");
    for s in BitString::all(n + 1) {
        let (system, machine) = s.split_first();
        let moved = if system {
            set.contains(&machine.conjugate())
        } else {
            set.contains(&machine)
        };
        let style = if moved {
            ", style=filled, fillcolor=lightblue"
        } else {
            ""
        };
        let _ = writeln!(
            out,
            "  \"{s}\" [label=\"{}\\n{}\"{style}];",
            s.render_joint(),
            float(pop.get(&s))
        );
    }
    for s in BitString::all(n + 1) {
        for q in 0..=n {
            let t = s.flip(q);
            if s < t {
                let _ = writeln!(out, "  \"{s}\" -- \"{t}\";");
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
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
    fn populations() {
        let spec = MachineSpec::new(ln(2.0), &[ln(3.0), ln(8.0)]).unwrap();
        let p = joint_populations(&spec).unwrap();
        assert!((p.values[0] - 4.0 / 9.0).abs() < 1e-15);
        assert!((p.total() - 1.0).abs() < 1e-12);

        let w: f64 = 0.7;
        let spec = MachineSpec::new(w, &[w]).unwrap();
        let p = joint_populations(&spec).unwrap();
        let z = (1.0 + (-w).exp()).powi(2);
        let expected = [1.0, (-w).exp(), (-w).exp(), (-2.0 * w).exp()].map(|x| x / z);
        for (a, b) in p.values.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn sort_cool_examples() {
        let spec = MachineSpec::new(ln(2.0), &[ln(3.0), ln(8.0)]).unwrap();
        let r = sort_cool(&joint_populations(&spec).unwrap());
        assert!((r.p0_final - 8.0 / 9.0).abs() < 1e-12);
        assert_eq!(names(&r.swapped), ["01", "11"]);

        let spec = MachineSpec::new(ln(2.0), &[ln(3.0), ln(22.0), ln(32.0)]).unwrap();
        let p = joint_populations(&spec).unwrap();
        let r = sort_cool(&p);
        assert!((r.p0_final - 0.980_895_915_678_524_3).abs() < 1e-12);
        let q = pairwise_cool(&p);
        assert_eq!(r.swapped, q.swapped);
        assert!((r.p0_final - q.p0_final).abs() < 1e-15);

        let spec = MachineSpec::new(10.0, &[1.0, 2.0]).unwrap();
        let p = joint_populations(&spec).unwrap();
        let r = sort_cool(&p);
        assert!(r.swapped.is_empty());
        assert!((r.p0_final - p.ground_population()).abs() < 1e-15);
    }

    #[test]
    fn ties_do_not_swap() {
        // Excited 1_S 0 and ground 0_S 1 are equally populated.
        let spec = MachineSpec::new(1.0, &[1.0]).unwrap();
        let p = joint_populations(&spec).unwrap();
        assert!(sort_cool(&p).swapped.is_empty());
        assert!(pairwise_cool(&p).swapped.is_empty());
    }

    #[test]
    fn single_tlp() {
        let spec = MachineSpec::new(ln(2.0), &[ln(5.0), ln(8.0)]).unwrap();
        let p = joint_populations(&spec).unwrap();
        assert_eq!(apply_tlps(&p, &[]).unwrap(), p);
        let t = TwoLevelPermutation::new("011".parse().unwrap(), "100".parse().unwrap()).unwrap();
        let q = apply_tlps(&p, &[t]).unwrap();
        assert!((q.ground_population() - 0.901_234_567_9).abs() < 1e-10);
        let bad = TwoLevelPermutation::new("01".parse().unwrap(), "10".parse().unwrap()).unwrap();
        assert!(apply_tlps(&p, &[bad]).is_err());
    }

    #[test]
    fn hypercube() {
        let spec = MachineSpec::new(ln(2.0), &[ln(3.0), ln(8.0)]).unwrap();
        let dot = hypercube_to_dot(&spec).unwrap();
        assert_eq!(dot.matches(" -- ").count(), 12);
        assert_eq!(dot.matches("filled").count(), 4);
    }
}
