//! Levels that are swappable for every gap vector, or for none.

use serde::Serialize;

use crate::bitstring::{lex_ge, upset, BitString};
use crate::cooling::anchor;
use crate::error::{Error, Result};

/// Largest `n` for which the sets are enumerated.
pub const MAX_ORDERS_WIDTH: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelSets {
    pub n: usize,
    pub ell: i64,
    pub anchor: BitString,
    pub minimal_set: Vec<BitString>,
    pub never_set: Vec<BitString>,
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::validation("n", "must be at least 1"));
    }
    if n > MAX_ORDERS_WIDTH {
        return Err(Error::TooLarge {
            what: "n",
            value: n,
            max: MAX_ORDERS_WIDTH,
        });
    }
    Ok(())
}

/// Strings `j` with `j ⊕ 1 ⪰ j`: never in the swappable set, whatever `Γ`.
pub fn never_swappable_set(n: usize) -> Result<Vec<BitString>> {
    check_n(n)?;
    Ok(BitString::all(n)
        .filter(|j| lex_ge(&j.conjugate(), j))
        .collect())
}

/// Valid range of `ell` for width `n`.
pub fn ell_range(n: usize) -> (i64, i64) {
    let lo = if n.is_multiple_of(2) { -1 } else { 0 };
    (lo, ((n as i64) - 1) / 2)
}

/// Anchor `a^k` with `k = ⌊n/2⌋ + ℓ + 1` and the up-set above it, which lies
/// inside the swappable set whenever `τω` is below the matching window.
pub fn minimal_swappable_set(n: usize, ell: i64) -> Result<LevelSets> {
    check_n(n)?;
    let (lo, hi) = ell_range(n);
    if ell < lo || ell > hi {
        return Err(Error::validation(
            "ell",
            format!("must lie in {lo}..={hi} for n = {n}, got {ell}"),
        ));
    }
    let k = (n / 2) as i64 + ell + 1;
    let a = anchor(n, k as usize);
    Ok(LevelSets {
        n,
        ell,
        anchor: a,
        minimal_set: upset(&a),
        never_set: never_swappable_set(n)?,
    })
}

/// Window sum length `L` for `ell`: the minimal set is swappable whenever
/// `τω < γ₁ + … + γ_L`.
pub fn window_length(n: usize, ell: i64) -> usize {
    let k = (n / 2) as i64 + ell + 1;
    (2 * k - n as i64) as usize
}

/// Whether the window condition for `ell` holds for sorted `gaps` at
/// `tau_omega`. For `ell = −1` this is `τω <` [`alternating_margin`].
pub fn window_holds(gaps: &[f64], tau_omega: f64, ell: i64) -> bool {
    let n = gaps.len();
    if ell == -1 {
        return n >= 2 && n.is_multiple_of(2) && tau_omega < alternating_margin(gaps);
    }
    tau_omega < gaps[..window_length(n, ell)].iter().sum::<f64>()
}

/// `E((01)^{n/2}) − E((10)^{n/2})` for even `n`: the amount by which the
/// anchor of the `ℓ = −1` set outweighs its conjugate.
///
/// `(01)^{n/2}` is swappable exactly when `τω` lies below this margin, so it
/// replaces the weaker `min(γ₁+γ₂, γ_n−γ₁)` window, which admits machines
/// such as `Γ = (1, 1, 2, 2)` where the margin is zero.
pub fn alternating_margin(gaps: &[f64]) -> f64 {
    gaps.chunks_exact(2).map(|p| p[1] - p[0]).sum()
}

/// The window `τω < min(γ₁+γ₂, γ_n−γ₁)` in its original form. It does not
/// guarantee `(01)^{n/2} ∈ 𝕊`; see [`alternating_margin`].
pub fn stated_even_window(gaps: &[f64], tau_omega: f64) -> bool {
    let n = gaps.len();
    n >= 2 && tau_omega < (gaps[0] + gaps[1]).min(gaps[n - 1] - gaps[0])
}
