//! Bound comparison over machine families and sizes, written as CSV.

use serde::Serialize;

use crate::cooling::delta_p0;
use crate::error::Result;
use crate::format::float;
use crate::machine::{Family, MachineSpec};
use crate::reducibility::reducibility_order;

pub const CSV_HEADER: &str = "n,family,gamma,omega,delta_p0,bound_virtual,bound_fixed,fixed_applicable,bound_adaptive,swappable_count,reducibility_order";

/// System gap for a sweep point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OmegaChoice {
    Fixed(f64),
    /// `ω = ratio·γ₁` of each machine.
    Ratio(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub family: Family,
    pub gamma: f64,
    pub omega: f64,
    pub delta_p0: f64,
    pub bound_virtual: f64,
    pub bound_fixed: Option<f64>,
    pub bound_adaptive: f64,
    pub swappable_count: usize,
    pub reducibility_order: usize,
}

impl SweepRow {
    pub fn fixed_applicable(&self) -> bool {
        self.bound_fixed.is_some()
    }

    /// Every bound that is defined, with its column name.
    pub fn bounds(&self) -> Vec<(&'static str, f64)> {
        let mut out = vec![
            ("bound_virtual", self.bound_virtual),
            ("bound_adaptive", self.bound_adaptive),
        ];
        if let Some(f) = self.bound_fixed {
            out.push(("bound_fixed", f));
        }
        out
    }

    pub fn to_csv(&self) -> String {
        [
            self.n.to_string(),
            self.family.to_string(),
            float(self.gamma),
            float(self.omega),
            float(self.delta_p0),
            float(self.bound_virtual),
            float(self.bound_fixed.unwrap_or(0.0)),
            self.fixed_applicable().to_string(),
            float(self.bound_adaptive),
            self.swappable_count.to_string(),
            self.reducibility_order.to_string(),
        ]
        .join(",")
    }
}

pub fn sweep_row(family: Family, gamma: f64, n: usize, omega: OmegaChoice) -> Result<SweepRow> {
    let gaps = family.gaps(gamma, n);
    let omega = match omega {
        OmegaChoice::Fixed(w) => w,
        OmegaChoice::Ratio(r) => r * gaps.iter().copied().fold(f64::INFINITY, f64::min),
    };
    let spec = MachineSpec::family(family, gamma, n, omega)?;
    let report = delta_p0(&spec);
    Ok(SweepRow {
        n,
        family,
        gamma,
        omega,
        delta_p0: report.delta_p0,
        bound_virtual: report.bound_virtual,
        bound_fixed: report.bound_fixed,
        bound_adaptive: report.bound_adaptive,
        swappable_count: report.swappable_count,
        reducibility_order: reducibility_order(&spec),
    })
}

/// Rows ordered by family (as given), then by `n`.
pub fn sweep(
    families: &[(Family, f64)],
    ns: std::ops::RangeInclusive<usize>,
    omega: OmegaChoice,
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for &(family, gamma) in families {
        for n in ns.clone() {
            rows.push(sweep_row(family, gamma, n, omega)?);
        }
    }
    Ok(rows)
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.to_csv());
        out.push('\n');
    }
    out
}
