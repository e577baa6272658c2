//! Linear stability of `u' = -u + η u_τ` at the Hopf point, and the
//! normalization of the adjoint center basis.
//!
//! With `u = e^{λt}` the characteristic function is `λ + 1 - η e^{-λτ}`.
//! On the first branch, `λ = i w` with `w τ ∈ (π/2, π)`, `η cos(wτ) = 1` and
//! `w = -η sin(wτ)`, hence `w = sqrt(η² - 1)`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default quadrature resolution (intervals) for [`bilinear`].
pub const DEFAULT_RESOLUTION: usize = 10_000;
/// Minimum accepted quadrature resolution.
pub const MIN_RESOLUTION: usize = 1_000;

const MAX_ITER: usize = 200;

/// `λ + 1 - η e^{-λτ}`.
pub fn char_residual(lambda: Complex64, eta: f64, tau: f64) -> Complex64 {
    lambda + 1.0 - eta * (-lambda * tau).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HopfPoint {
    pub tau: f64,
    pub eta_c: f64,
    pub w_c: f64,
    /// Normalization constant of the adjoint basis `ψ₁(s) = d e^{-i w_c s}`.
    #[serde(with = "complex_serde")]
    pub d: Complex64,
}

impl HopfPoint {
    pub fn residual(&self) -> f64 {
        char_residual(Complex64::new(0.0, self.w_c), self.eta_c, self.tau).norm()
    }

    /// Center eigenfunction `φ₁(θ) = e^{i w_c θ}`, θ ∈ [-τ, 0].
    pub fn phi1(&self, theta: f64) -> Complex64 {
        Complex64::from_polar(1.0, self.w_c * theta)
    }

    pub fn phi2(&self, theta: f64) -> Complex64 {
        self.phi1(theta).conj()
    }

    /// Adjoint `ψ₁(s) = d e^{-i w_c s}`, s ∈ [0, τ].
    pub fn psi1(&self, s: f64) -> Complex64 {
        self.d * Complex64::from_polar(1.0, -self.w_c * s)
    }

    pub fn psi2(&self, s: f64) -> Complex64 {
        self.psi1(s).conj()
    }
}

/// Locate the first Hopf crossing for delay `tau`.
///
/// Writing `m = -η > 1` and `w = sqrt(m² - 1)`, the branch condition is
/// `w τ = π - asin(w / m)`, which is monotone in `m`.
pub fn solve_hopf(tau: f64) -> Result<HopfPoint> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::invalid(format!("delay must be positive, got {tau}")));
    }
    let g = |m: f64| {
        let w = (m * m - 1.0).sqrt();
        w * tau - (PI - (w / m).asin())
    };
    let dg = |m: f64| {
        let w = (m * m - 1.0).sqrt();
        // d/dm [w τ + asin(w/m)] with dw/dm = m / w
        let dw = m / w;
        let ratio = w / m;
        let dratio = (dw * m - w) / (m * m);
        dw * tau + dratio / (1.0 - ratio * ratio).sqrt()
    };

    // g(1+) = -π; grow the upper end until the sign changes
    let mut lo = 1.0;
    let mut hi = 2.0;
    while g(hi) <= 0.0 {
        hi *= 2.0;
        if hi > 1e8 {
            return Err(Error::NoConvergence {
                what: "Hopf bracket",
                iterations: MAX_ITER,
            });
        }
    }
    let mut m = 0.5 * (lo + hi);
    let mut converged = false;
    for _ in 0..MAX_ITER {
        let gm = g(m);
        if gm < 0.0 {
            lo = m;
        } else {
            hi = m;
        }
        let newton = m - gm / dg(m);
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - m).abs() <= 4.0 * f64::EPSILON * m || hi - lo <= 4.0 * f64::EPSILON * m {
            m = next;
            converged = true;
            break;
        }
        m = next;
    }
    if !converged {
        return Err(Error::NoConvergence {
            what: "Hopf point",
            iterations: MAX_ITER,
        });
    }

    let eta_c = -m;
    let w_c = (m * m - 1.0).sqrt();
    debug_assert!(w_c * tau > FRAC_PI_2 && w_c * tau < PI);
    Ok(HopfPoint {
        tau,
        eta_c,
        w_c,
        d: adjoint_norm(eta_c, w_c, tau),
    })
}

/// Closed form of the adjoint normalization, `d = 1 / (1 + τ (1 + i w_c))`.
///
/// Follows from `(ψ₁, φ₁) = d (1 + τ η_c e^{-i w_c τ}) = 1` and the
/// characteristic identity `η_c e^{-i w_c τ} = 1 + i w_c`.
pub fn adjoint_norm(_eta_c: f64, w_c: f64, tau: f64) -> Complex64 {
    Complex64::new(1.0, 0.0) / (1.0 + tau * Complex64::new(1.0, w_c))
}

/// Bilinear pairing of an adjoint function `ψ` on `[0, τ]` with a state
/// function `φ` on `[-τ, 0]`:
///
/// ```text
/// (ψ, φ) = ψ(0) φ(0) + η_c ∫_{-τ}^{0} ψ(ξ + τ) φ(ξ) dξ
/// ```
///
/// Both slices hold `n + 1` uniform samples, `psi` over `s = 0..τ` and `phi`
/// over `θ = -τ..0`. Composite trapezoid rule.
pub fn bilinear(psi: &[Complex64], phi: &[Complex64], eta_c: f64, tau: f64) -> Result<Complex64> {
    if psi.len() != phi.len() {
        return Err(Error::LengthMismatch {
            expected: psi.len(),
            got: phi.len(),
        });
    }
    let intervals = psi.len().saturating_sub(1);
    if intervals < MIN_RESOLUTION {
        return Err(Error::ResolutionTooCoarse {
            got: intervals,
            min: MIN_RESOLUTION,
        });
    }
    Ok(pairing(psi, phi, eta_c, tau / intervals as f64))
}

/// Same as [`bilinear`], sampling closures at `resolution` intervals.
pub fn bilinear_fn(
    psi: impl Fn(f64) -> Complex64,
    phi: impl Fn(f64) -> Complex64,
    eta_c: f64,
    tau: f64,
    resolution: usize,
) -> Result<Complex64> {
    if resolution < MIN_RESOLUTION {
        return Err(Error::ResolutionTooCoarse {
            got: resolution,
            min: MIN_RESOLUTION,
        });
    }
    let h = tau / resolution as f64;
    let ps: Vec<Complex64> = (0..=resolution).map(|j| psi(j as f64 * h)).collect();
    let ph: Vec<Complex64> = (0..=resolution).map(|j| phi(-tau + j as f64 * h)).collect();
    bilinear(&ps, &ph, eta_c, tau)
}

/// Trapezoid evaluation without a resolution check; `h` is the grid step.
pub(crate) fn pairing<T>(psi: &[Complex64], phi: &[T], eta_c: f64, h: f64) -> Complex64
where
    T: Copy + Into<Complex64>,
{
    let n = psi.len() - 1;
    // psi[j] = ψ(ξ_j + τ) for ξ_j = -τ + j h, matching phi[j] = φ(ξ_j)
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 1..n {
        acc += psi[j] * phi[j].into();
    }
    acc += 0.5 * (psi[0] * phi[0].into() + psi[n] * phi[n].into());
    psi[0] * phi[n].into() + eta_c * h * acc
}

mod complex_serde {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}
