//! N-atom superpositions.
//!
//! Every atom in `a|0⟩ + b|1⟩` gives the binomial expansion over the
//! occupation states `|N−n, n⟩`; the interacting condensate is taken to end
//! in the two-branch state `a^N|N,0⟩ + b^N|0,N⟩`, renormalized.

use serde::{Deserialize, Serialize};

use crate::distribution::ln_factorials;
use crate::{Error, Result, C64};

fn check_amplitudes(a: C64, b: C64) -> Result<()> {
    let norm_sq = a.norm_sqr() + b.norm_sqr();
    if !((norm_sq - 1.0).abs() <= 1e-12) {
        return Err(Error::NotNormalized { norm_sq });
    }
    Ok(())
}

/// `c^k` computed as magnitude and phase in log space; `0^0 = 1`.
fn power(c: C64, k: usize) -> (f64, f64) {
    if k == 0 {
        return (0.0, 0.0);
    }
    (k as f64 * c.norm().ln(), k as f64 * c.arg())
}

/// Coefficients of `|N−n, n⟩` for `n = 0..=N`:
/// `√(N!/(n!(N−n)!)) · a^{N−n} · b^n`, evaluated with log-factorials.
pub fn cat_expansion(a: C64, b: C64, atoms: usize) -> Result<Vec<C64>> {
    check_amplitudes(a, b)?;
    let lf = ln_factorials(atoms);
    Ok((0..=atoms)
        .map(|n| {
            let (la, pa) = power(a, atoms - n);
            let (lb, pb) = power(b, n);
            let ln_mag = 0.5 * (lf[atoms] - lf[n] - lf[atoms - n]) + la + lb;
            if ln_mag == f64::NEG_INFINITY {
                C64::new(0.0, 0.0)
            } else {
                C64::from_polar(ln_mag.exp(), pa + pb)
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CatState {
    pub atoms: usize,
    pub a: C64,
    pub b: C64,
    /// Renormalized amplitude of `|N, 0⟩`.
    pub branch_0: C64,
    /// Renormalized amplitude of `|0, N⟩`.
    pub branch_1: C64,
    /// `|a|^{2N}` and `|b|^{2N}` before renormalization (may underflow).
    pub raw_weights: (f64, f64),
}

impl CatState {
    pub fn branch_probabilities(&self) -> (f64, f64) {
        (self.branch_0.norm_sqr(), self.branch_1.norm_sqr())
    }
}

/// The two-branch state `a^N|N,0⟩ + b^N|0,N⟩`, renormalized to unit norm.
pub fn cat_state(a: C64, b: C64, atoms: usize) -> Result<CatState> {
    check_amplitudes(a, b)?;
    if atoms == 0 {
        return Err(Error::param("atoms", "must be at least 1"));
    }
    let (la, pa) = power(a, atoms);
    let (lb, pb) = power(b, atoms);
    let top = la.max(lb);
    // Branch magnitudes relative to the larger one keep N large finite.
    let (ra, rb) = ((la - top).exp(), (lb - top).exp());
    let norm = ra.hypot(rb);
    Ok(CatState {
        atoms,
        a,
        b,
        branch_0: C64::from_polar(ra / norm, pa),
        branch_1: C64::from_polar(rb / norm, pb),
        raw_weights: ((2.0 * la).exp(), (2.0 * lb).exp()),
    })
}
