//! Multi-controlled-X circuits realizing products of two-level permutations.
//!
//! Qubit 0 is the system, qubit `q ≥ 1` is machine qubit `q`; both match the
//! character positions of a joint bit string.

use std::fmt;

use serde::Serialize;

use crate::bitstring::{hamming_distance, BitString};
use crate::error::{Error, Result};
use crate::machine::MachineSpec;
use crate::matching::Matching;

/// Largest width for which full permutation tables are built.
pub const MAX_SIMULATION_WIDTH: usize = 20;

/// Exchange of two joint levels, stored with `j < k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TwoLevelPermutation {
    pub j: BitString,
    pub k: BitString,
}

impl TwoLevelPermutation {
    pub fn new(a: BitString, b: BitString) -> Result<Self> {
        if a.width() != b.width() {
            return Err(Error::width_mismatch(a.width(), b.width()));
        }
        if a == b {
            return Err(Error::Usage(format!(
                "two-level permutation needs distinct levels, got {a} twice"
            )));
        }
        Ok(if a < b {
            Self { j: a, k: b }
        } else {
            Self { j: b, k: a }
        })
    }

    pub fn width(&self) -> usize {
        self.j.width()
    }

    pub fn hamming(&self) -> u32 {
        (self.j.value() ^ self.k.value()).count_ones()
    }

    pub fn apply(&self, s: &BitString) -> BitString {
        if *s == self.j {
            self.k
        } else if *s == self.k {
            self.j
        } else {
            *s
        }
    }
}

/// One exchange per matched pair. Fails if two pairs share a level.
pub fn cooling_unitary(matching: &Matching) -> Result<Vec<TwoLevelPermutation>> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::with_capacity(matching.pairs.len());
    for p in &matching.pairs {
        if !seen.insert(p.ground) || !seen.insert(p.excited) {
            return Err(Error::Internal(format!(
                "matching uses a level twice near pair ({}, {})",
                p.ground, p.excited
            )));
        }
        out.push(TwoLevelPermutation::new(p.ground, p.excited)?);
    }
    Ok(out)
}

/// X on `target`, conditioned on each `(qubit, polarity)` control.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Gate {
    pub target: usize,
    pub controls: Vec<(usize, bool)>,
}

impl Gate {
    pub fn x(target: usize) -> Self {
        Self {
            target,
            controls: Vec::new(),
        }
    }

    pub fn new(target: usize, controls: Vec<(usize, bool)>) -> Result<Self> {
        let mut qubits: Vec<usize> = controls.iter().map(|c| c.0).collect();
        qubits.sort_unstable();
        if qubits.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Usage("repeated control qubit".into()));
        }
        if qubits.contains(&target) {
            return Err(Error::Usage(format!(
                "qubit {target} is both target and control"
            )));
        }
        Ok(Self { target, controls })
    }

    /// Swaps `s` with `s` flipped at `target`; controls fix every other qubit.
    fn exchanging(s: &BitString, target: usize) -> Self {
        let controls = (0..s.width())
            .filter(|&q| q != target)
            .map(|q| (q, s.bit(q)))
            .collect();
        Self { target, controls }
    }

    fn max_qubit(&self) -> usize {
        self.controls
            .iter()
            .map(|c| c.0)
            .chain([self.target])
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.controls.is_empty() {
            return write!(f, "X target={}", self.target);
        }
        write!(f, "MCX target={} controls=", self.target)?;
        for (i, (q, pol)) in self.controls.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{q}:{}", u8::from(*pol))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Circuit {
    pub width: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(width: usize, gates: Vec<Gate>) -> Result<Self> {
        if let Some(g) = gates.iter().find(|g| g.max_qubit() >= width) {
            return Err(Error::Usage(format!("gate `{g}` exceeds width {width}")));
        }
        Ok(Self { width, gates })
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Number of gates with at least `k` controls.
    pub fn count_with_controls(&self, k: usize) -> usize {
        self.gates.iter().filter(|g| g.controls.len() >= k).count()
    }

    pub fn append(&mut self, other: Circuit) {
        self.gates.extend(other.gates);
    }

    /// One gate per line.
    pub fn to_text(&self) -> String {
        self.gates.iter().map(|g| format!("{g}\n")).collect()
    }
}

/// Parse the line format written by [`Circuit::to_text`].
pub fn parse_circuit(text: &str, width: usize) -> Result<Circuit> {
    let bad = |line: &str| Error::Parse(format!("malformed gate line {line:?}"));
    let number = |s: &str, line: &str| s.parse::<usize>().map_err(|_| bad(line));
    let mut gates = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        let mut words = line.split_whitespace();
        let op = words.next().ok_or_else(|| bad(line))?;
        let target = words
            .next()
            .and_then(|w| w.strip_prefix("target="))
            .ok_or_else(|| bad(line))?;
        let target = number(target, line)?;
        let gate = match op {
            "X" => Gate::x(target),
            "MCX" => {
                let list = words
                    .next()
                    .and_then(|w| w.strip_prefix("controls="))
                    .ok_or_else(|| bad(line))?;
                let mut controls = Vec::new();
                for item in list.split(',').filter(|s| !s.is_empty()) {
                    let (q, pol) = item.split_once(':').ok_or_else(|| bad(line))?;
                    let pol = match pol {
                        "0" => false,
                        "1" => true,
                        _ => return Err(bad(line)),
                    };
                    controls.push((number(q, line)?, pol));
                }
                Gate::new(target, controls)?
            }
            _ => return Err(bad(line)),
        };
        if words.next().is_some() {
            return Err(bad(line));
        }
        gates.push(gate);
    }
    Circuit::new(width, gates)
}

/// Circuit for the exchange along `path`, consecutive entries differing in
/// one bit: ladder up to the second-to-last string, exchange the last step,
/// ladder back down. Uses `2d − 1` gates for a path of `d` steps.
pub fn decompose_tlp_with_path(tlp: &TwoLevelPermutation, path: &[BitString]) -> Result<Circuit> {
    let (first, last) = match (path.first(), path.last()) {
        (Some(a), Some(b)) if path.len() >= 2 => (*a, *b),
        _ => return Err(Error::Usage("path needs at least two strings".into())),
    };
    if TwoLevelPermutation::new(first, last)? != *tlp {
        return Err(Error::Usage(format!(
            "path runs from {first} to {last}, not between {} and {}",
            tlp.j, tlp.k
        )));
    }
    let mut distinct = path.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() != path.len() {
        return Err(Error::Usage("path revisits a string".into()));
    }
    let mut steps = Vec::with_capacity(path.len() - 1);
    for w in path.windows(2) {
        if hamming_distance(&w[0], &w[1])? != 1 {
            return Err(Error::Usage(format!(
                "{} and {} differ in more than one bit",
                w[0], w[1]
            )));
        }
        let target = (0..w[0].width())
            .find(|&q| w[0].bit(q) != w[1].bit(q))
            .expect("strings differ in one bit");
        steps.push(Gate::exchanging(&w[0], target));
    }
    let (pivot, ladder) = steps.split_last().expect("at least one step");
    let mut gates = ladder.to_vec();
    gates.push(pivot.clone());
    gates.extend(ladder.iter().rev().cloned());
    Circuit::new(tlp.width(), gates)
}

/// Path from `j` to `k` flipping the differing bits from left to right.
pub fn gray_path(tlp: &TwoLevelPermutation) -> Vec<BitString> {
    let mut path = vec![tlp.j];
    let mut cur = tlp.j;
    for q in 0..tlp.width() {
        if cur.bit(q) != tlp.k.bit(q) {
            cur = cur.flip(q);
            path.push(cur);
        }
    }
    path
}

pub fn decompose_tlp(tlp: &TwoLevelPermutation) -> Circuit {
    decompose_tlp_with_path(tlp, &gray_path(tlp)).expect("gray path is valid")
}

/// Concatenated decompositions; the exchanges act on disjoint levels, so
/// their order does not matter.
pub fn synthesize_circuit(width: usize, tlps: &[TwoLevelPermutation]) -> Result<Circuit> {
    let mut circuit = Circuit::new(width, Vec::new())?;
    for t in tlps {
        if t.width() != width {
            return Err(Error::width_mismatch(t.width(), width));
        }
        circuit.append(decompose_tlp(t));
    }
    Ok(circuit)
}

/// Replace every negative control by a positive one conjugated with X.
pub fn lower_circuit(circuit: &Circuit) -> (Circuit, usize) {
    let mut gates = Vec::new();
    for g in &circuit.gates {
        let negative: Vec<usize> = g.controls.iter().filter(|c| !c.1).map(|c| c.0).collect();
        gates.extend(negative.iter().map(|&q| Gate::x(q)));
        gates.push(Gate {
            target: g.target,
            controls: g.controls.iter().map(|&(q, _)| (q, true)).collect(),
        });
        gates.extend(negative.iter().map(|&q| Gate::x(q)));
    }
    let count = gates.len();
    (
        Circuit {
            width: circuit.width,
            gates,
        },
        count,
    )
}

/// A gate as `(mask, pattern, flip)` over the numeric value.
fn compile(circuit: &Circuit) -> Vec<(u32, u32, u32)> {
    let w = circuit.width;
    let bit = |q: usize| 1u32 << (w - 1 - q);
    circuit
        .gates
        .iter()
        .map(|g| {
            let mask = g.controls.iter().fold(0, |m, &(q, _)| m | bit(q));
            let pattern = g
                .controls
                .iter()
                .filter(|c| c.1)
                .fold(0, |m, &(q, _)| m | bit(q));
            (mask, pattern, bit(g.target))
        })
        .collect()
}

fn run(compiled: &[(u32, u32, u32)], mut v: u32) -> u32 {
    for &(mask, pattern, flip) in compiled {
        if v & mask == pattern {
            v ^= flip;
        }
    }
    v
}

pub fn apply_circuit(circuit: &Circuit, state: &BitString) -> Result<BitString> {
    if state.width() != circuit.width {
        return Err(Error::width_mismatch(state.width(), circuit.width));
    }
    Ok(BitString::from_parts(
        circuit.width,
        run(&compile(circuit), state.value()),
    ))
}

/// Image of every basis state, indexed by numeric value.
pub fn permutation(circuit: &Circuit) -> Result<Vec<u32>> {
    if circuit.width > MAX_SIMULATION_WIDTH {
        return Err(Error::TooLarge {
            what: "circuit width",
            value: circuit.width,
            max: MAX_SIMULATION_WIDTH,
        });
    }
    let compiled = compile(circuit);
    Ok((0..1u32 << circuit.width)
        .map(|v| run(&compiled, v))
        .collect())
}

/// Permutation table of a product of exchanges.
pub fn tlp_permutation(width: usize, tlps: &[TwoLevelPermutation]) -> Vec<u32> {
    let mut table: Vec<u32> = (0..1u32 << width).collect();
    for t in tlps {
        table.swap(t.j.value() as usize, t.k.value() as usize);
    }
    table
}

/// `true` for odd permutations.
pub fn is_odd(perm: &[u32]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut cycles = 0;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i] as usize;
        }
    }
    (perm.len() - cycles) % 2 == 1
}

/// For a two-qubit machine: whether optimal cooling is an odd permutation of
/// the three qubits, so no circuit of X and CX gates alone can realize it.
pub fn requires_toffoli(spec: &MachineSpec) -> Result<bool> {
    if spec.n() != 2 {
        return Err(Error::validation(
            "gaps",
            format!("requires a two-qubit machine, got n = {}", spec.n()),
        ));
    }
    let g = spec.gaps();
    Ok(g[1] <= spec.scaled_omega() + g[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::MachineSpec;
    use crate::matching::{build_graph, cost_matrix, hungarian, HammingCost};

    fn b(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn tlp(a: &str, c: &str) -> TwoLevelPermutation {
        TwoLevelPermutation::new(b(a), b(c)).unwrap()
    }

    fn assert_is_transposition(circuit: &Circuit, t: &TwoLevelPermutation) {
        let perm = permutation(circuit).unwrap();
        assert_eq!(perm, tlp_permutation(t.width(), &[*t]));
    }

    #[test]
    fn explicit_path() {
        let t = tlp("011", "100");
        let path: Vec<_> = ["011", "111", "110", "100"].iter().map(|s| b(s)).collect();
        let c = decompose_tlp_with_path(&t, &path).unwrap();
        assert_eq!(c.len(), 5);
        assert_is_transposition(&c, &t);
        assert!(decompose_tlp_with_path(&t, &[b("011"), b("100")]).is_err());
    }

    #[test]
    fn left_to_right_path() {
        let t = tlp("011", "100");
        let names: Vec<_> = gray_path(&t).iter().map(|s| s.to_string()).collect();
        assert_eq!(names, ["011", "111", "101", "100"]);
        let c = decompose_tlp(&t);
        assert_eq!(c.len(), 5);
        assert_is_transposition(&c, &t);
        assert_eq!(apply_circuit(&c, &b("011")).unwrap(), b("100"));
        assert_eq!(apply_circuit(&c, &b("010")).unwrap(), b("010"));
        assert!(apply_circuit(&c, &b("01")).is_err());

        let t = tlp("0110", "0111");
        assert_eq!(decompose_tlp(&t).len(), 1);
        let t = tlp("001", "100");
        let c = decompose_tlp(&t);
        assert_eq!(c.len(), 3);
        assert_is_transposition(&c, &t);
    }

    #[test]
    fn lowering() {
        let c = Circuit::new(2, vec![Gate::new(1, vec![(0, false)]).unwrap()]).unwrap();
        let (low, n) = lower_circuit(&c);
        assert_eq!(n, 3);
        assert_eq!(permutation(&low).unwrap(), permutation(&c).unwrap());
        let pos = Circuit::new(3, vec![Gate::new(2, vec![(0, true), (1, true)]).unwrap()]).unwrap();
        assert_eq!(lower_circuit(&pos).0, pos);

        let t = tlp("011", "100");
        let native = decompose_tlp(&t);
        let (low, n) = lower_circuit(&native);
        assert!(n >= 3);
        assert_eq!(permutation(&low).unwrap(), permutation(&native).unwrap());
    }

    #[test]
    fn x_flips_one_bit() {
        let c = Circuit::new(4, vec![Gate::x(2)]).unwrap();
        for s in BitString::all(4) {
            assert_eq!(apply_circuit(&c, &s).unwrap(), s.flip(2));
        }
    }

    #[test]
    fn swap_of_system_and_coldest() {
        let spec = MachineSpec::new(2f64.ln(), &[3f64.ln(), 8f64.ln()]).unwrap();
        let g = build_graph(&spec);
        let m = hungarian(&cost_matrix(&g, &HammingCost, &spec).unwrap()).unwrap();
        assert_eq!(m.total, 4.0);
        let mut tlps = cooling_unitary(&m).unwrap();
        tlps.sort();
        assert_eq!(tlps, vec![tlp("001", "100"), tlp("011", "110")]);
        let c = synthesize_circuit(3, &tlps).unwrap();
        assert!(!is_odd(&permutation(&c).unwrap()));
    }

    #[test]
    fn toffoli_condition() {
        let l = f64::ln;
        let spec = MachineSpec::new(l(2.0), &[l(5.0), l(8.0)]).unwrap();
        assert!(requires_toffoli(&spec).unwrap());
        let spec = MachineSpec::new(l(2.0), &[l(3.0), l(8.0)]).unwrap();
        assert!(!requires_toffoli(&spec).unwrap());
        let spec = MachineSpec::new(0.01, &[1.0, 1.0]).unwrap();
        assert!(requires_toffoli(&spec).unwrap());
        let spec = MachineSpec::new(0.01, &[1.0]).unwrap();
        assert!(requires_toffoli(&spec).is_err());
    }

    #[test]
    fn text_round_trip() {
        let c = decompose_tlp(&tlp("0011", "1100"));
        let (low, _) = lower_circuit(&c);
        for circuit in [c, low] {
            let text = circuit.to_text();
            assert_eq!(parse_circuit(&text, 4).unwrap(), circuit);
        }
        assert_eq!(Gate::x(1).to_string(), "X target=1");
        assert_eq!(
            Gate::new(2, vec![(0, true), (1, false)])
                .unwrap()
                .to_string(),
            "MCX target=2 controls=0:1,1:0"
        );
        assert!(parse_circuit("CX target=1", 2).is_err());
        assert!(parse_circuit("X target=5", 2).is_err());
        assert!(Gate::new(1, vec![(1, true)]).is_err());
    }

    #[test]
    fn parity() {
        assert!(is_odd(&[1, 0, 2]));
        assert!(!is_odd(&[1, 2, 0]));
        assert!(!is_odd(&[0, 1, 2, 3]));
    }
}
