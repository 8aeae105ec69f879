//! Two-dimensional coin operators.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// Entrywise tolerance for the unitarity check done at construction.
pub const UNITARY_TOL: f64 = 1e-12;

/// A unitary 2×2 matrix acting on the coin space, row-major.
///
/// Unitarity is checked once when the coin is built; applying a coin never
/// re-checks it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoinOperator {
    entries: [[C64; 2]; 2],
}

impl CoinOperator {
    pub fn new(entries: [[C64; 2]; 2]) -> Result<Self> {
        let finite = entries.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite());
        let deviation = if finite { unitarity_deviation(&entries) } else { f64::INFINITY };
        if deviation > UNITARY_TOL {
            return Err(Error::NonUnitaryCoin { deviation });
        }
        Ok(Self { entries })
    }

    /// `(1/√2)[[1, 1], [1, −1]]`.
    pub fn hadamard() -> Self {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        Self { entries: [[h, h], [h, -h]] }
    }

    pub fn identity() -> Self {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        Self { entries: [[one, zero], [zero, one]] }
    }

    /// The coin-space exchange `|0⟩ ↔ |1⟩`.
    pub fn bit_flip() -> Self {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        Self { entries: [[zero, one], [one, zero]] }
    }

    /// General element of U(2):
    /// `e^{iα} [[e^{iβ} cos θ, e^{iγ} sin θ], [−e^{−iγ} sin θ, e^{−iβ} cos θ]]`.
    pub fn from_angles(alpha: f64, beta: f64, gamma: f64, theta: f64) -> Self {
        let g = C64::from_polar(1.0, alpha);
        let (s, c) = theta.sin_cos();
        Self {
            entries: [
                [g * C64::from_polar(c, beta), g * C64::from_polar(s, gamma)],
                [-g * C64::from_polar(s, -gamma), g * C64::from_polar(c, -beta)],
            ],
        }
    }

    pub fn entries(&self) -> &[[C64; 2]; 2] {
        &self.entries
    }

    #[inline]
    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        let m = &self.entries;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    pub fn mul(&self, rhs: &CoinOperator) -> CoinOperator {
        CoinOperator { entries: mat_mul(&self.entries, &rhs.entries) }
    }

    pub fn adjoint(&self) -> CoinOperator {
        CoinOperator { entries: adjoint(&self.entries) }
    }

    /// Largest entrywise distance to `other`.
    pub fn distance(&self, other: &CoinOperator) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.entries[i][j] - other.entries[i][j]).norm());
            }
        }
        d
    }

    /// Entrywise distance to `other` after removing the best global phase.
    pub fn distance_up_to_phase(&self, other: &CoinOperator) -> f64 {
        // tr(A†B) = Σ conj(a_ij) b_ij; its phase is the optimal alignment.
        let mut overlap = C64::new(0.0, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                overlap += self.entries[i][j].conj() * other.entries[i][j];
            }
        }
        let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { C64::new(1.0, 0.0) };
        let mut d: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.entries[i][j] * phase - other.entries[i][j]).norm());
            }
        }
        d
    }

    /// Splits the coin as `e^{iφ}·(cos θ·1 − i sin θ·n̂·σ)` with `θ ∈ [0, π/2]`
    /// when possible, returning `(φ, θ, n̂)`.
    ///
    /// `2θ` is the Bloch-sphere rotation angle. When the SU(2) part has zero
    /// trace both sign branches give `θ = π/2`; the branch whose first nonzero
    /// axis component is positive is taken.
    pub fn su2_decomposition(&self) -> (f64, f64, [f64; 3]) {
        let m = &self.entries;
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let mut phase = det.arg() / 2.0;
        let mut v = scale(&self.entries, C64::from_polar(1.0, -phase));
        let mut a0 = ((v[0][0] + v[1][1]) / 2.0).re;
        let axis_of = |v: &[[C64; 2]; 2]| {
            let i = C64::new(0.0, 1.0);
            let ax = (i * (v[0][1] + v[1][0]) / 2.0).re;
            let ay = ((v[1][0] - v[0][1]) / 2.0).re;
            let az = (i * (v[0][0] - v[1][1]) / 2.0).re;
            [ax, ay, az]
        };
        let mut a = axis_of(&v);
        let flip = if a0.abs() < 1e-15 {
            a.iter().find(|c| c.abs() > 1e-15).is_some_and(|&c| c < 0.0)
        } else {
            a0 < 0.0
        };
        if flip {
            v = scale(&v, C64::new(-1.0, 0.0));
            phase += std::f64::consts::PI;
            a0 = -a0;
            a = axis_of(&v);
        }
        let s = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
        let theta = s.atan2(a0);
        let axis = if s > 1e-12 { [a[0] / s, a[1] / s, a[2] / s] } else { [1.0, 0.0, 0.0] };
        (phase, theta, axis)
    }

    /// The same coin with its Bloch rotation angle increased by `angle_error`
    /// radians about its own axis, keeping the global phase.
    ///
    /// A coin proportional to the identity has no axis; it is over-rotated
    /// about x, the rf drive axis.
    pub fn over_rotated(&self, angle_error: f64) -> CoinOperator {
        if angle_error == 0.0 {
            return *self;
        }
        let (phase, theta, n) = self.su2_decomposition();
        CoinOperator { entries: scale(&su2(theta + angle_error / 2.0, n), C64::from_polar(1.0, phase)) }
    }
}

impl Default for CoinOperator {
    fn default() -> Self {
        Self::hadamard()
    }
}

/// `cos θ·1 − i sin θ·n̂·σ`.
pub(crate) fn su2(theta: f64, n: [f64; 3]) -> [[C64; 2]; 2] {
    let (s, c) = theta.sin_cos();
    [
        [C64::new(c, -s * n[2]), C64::new(-s * n[1], -s * n[0])],
        [C64::new(s * n[1], -s * n[0]), C64::new(c, s * n[2])],
    ]
}

fn scale(m: &[[C64; 2]; 2], k: C64) -> [[C64; 2]; 2] {
    [[m[0][0] * k, m[0][1] * k], [m[1][0] * k, m[1][1] * k]]
}

fn mat_mul(a: &[[C64; 2]; 2], b: &[[C64; 2]; 2]) -> [[C64; 2]; 2] {
    let mut out = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn adjoint(a: &[[C64; 2]; 2]) -> [[C64; 2]; 2] {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

fn unitarity_deviation(m: &[[C64; 2]; 2]) -> f64 {
    let p = mat_mul(&adjoint(m), m);
    let mut d: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let target = if i == j { 1.0 } else { 0.0 };
            d = d.max((p[i][j] - C64::new(target, 0.0)).norm());
        }
    }
    d
}
