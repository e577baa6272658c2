//! Fixed point and cubic Taylor coefficients of the sigmoidal feedback
//! `x' = -x + γ f(x_τ)`, `f(x) = 1 / (1 + exp(-a x))`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Steepness of the logistic nonlinearity used throughout the experiments.
pub const DEFAULT_SLOPE: f64 = 60.0;
/// Feedback gain used throughout the experiments.
pub const DEFAULT_GAMMA: f64 = -0.05;

const MAX_ITER: usize = 200;

#[inline]
pub fn sigmoid(x: f64, slope: f64) -> f64 {
    1.0 / (1.0 + (-slope * x).exp())
}

/// `f` and its first three derivatives at `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmoidDerivs {
    pub f: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

pub fn sigmoid_derivs(x: f64, slope: f64) -> SigmoidDerivs {
    let f = sigmoid(x, slope);
    let g = f * (1.0 - f);
    SigmoidDerivs {
        f,
        d1: slope * g,
        d2: slope * slope * g * (1.0 - 2.0 * f),
        d3: slope.powi(3) * g * (1.0 - 6.0 * f + 6.0 * f * f),
    }
}

/// Solve `x = γ f(x)`.
///
/// The root lies between 0 and γ; it is bracketed there, bisected, and
/// polished with Newton steps that are only accepted inside the bracket.
pub fn fixed_point(gamma: f64, slope: f64) -> Result<f64> {
    if !gamma.is_finite() {
        return Err(Error::invalid(format!("gain must be finite, got {gamma}")));
    }
    if !(slope.is_finite() && slope > 0.0) {
        return Err(Error::invalid(format!(
            "slope must be positive, got {slope}"
        )));
    }
    if gamma == 0.0 {
        return Ok(0.0);
    }
    let g = |x: f64| x - gamma * sigmoid(x, slope);
    let (mut lo, mut hi) = if gamma < 0.0 {
        (gamma, 0.0)
    } else {
        (0.0, gamma)
    };
    // g(lo) < 0 < g(hi) in both cases
    let mut x = 0.5 * (lo + hi);
    for _ in 0..MAX_ITER {
        let gx = g(x);
        if gx == 0.0 {
            return Ok(x);
        }
        if gx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let slope_g = 1.0 - gamma * sigmoid_derivs(x, slope).d1;
        let newton = x - gx / slope_g;
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if next == x || hi - lo <= f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) {
            return Ok(next);
        }
        x = next;
    }
    if g(x).abs() < 1e-14 {
        Ok(x)
    } else {
        Err(Error::NoConvergence {
            what: "fixed point",
            iterations: MAX_ITER,
        })
    }
}

/// Fixed point and cubic expansion coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionPoint {
    pub gamma: f64,
    pub slope: f64,
    pub x_o: f64,
    pub f_x_o: f64,
    /// γ f'(x_o)
    pub eta: f64,
    /// γ f''(x_o) / 2
    pub kappa: f64,
    /// γ f'''(x_o) / 6
    pub nu: f64,
}

pub fn expand(gamma: f64, slope: f64) -> Result<ExpansionPoint> {
    if gamma == 0.0 {
        return Err(Error::DegenerateGain);
    }
    let x_o = fixed_point(gamma, slope)?;
    let d = sigmoid_derivs(x_o, slope);
    Ok(ExpansionPoint {
        gamma,
        slope,
        x_o,
        f_x_o: d.f,
        eta: gamma * d.d1,
        kappa: gamma * d.d2 / 2.0,
        nu: gamma * d.d3 / 6.0,
    })
}

/// Largest gain magnitude searched by [`gamma_for_eta`]. The map γ ↦ η grows
/// only logarithmically for large |γ|, so targets beyond roughly -30 are
/// reported as unreachable.
pub const GAMMA_SEARCH_LIMIT: f64 = 1e12;

fn eta_of(gamma: f64, slope: f64) -> Result<f64> {
    let x = fixed_point(gamma, slope)?;
    Ok(gamma * sigmoid_derivs(x, slope).d1)
}

/// Find the negative gain γ whose expansion has linear coefficient `eta_target`.
pub fn gamma_for_eta(eta_target: f64, slope: f64) -> Result<f64> {
    if !(eta_target.is_finite() && eta_target < 0.0) {
        return Err(Error::invalid(format!(
            "target linear gain must be negative, got {eta_target}"
        )));
    }
    // η(γ) is increasing in γ on γ < 0, tending to 0 at the origin.
    let mut lo = -1.0;
    while eta_of(lo, slope)? > eta_target {
        lo *= 2.0;
        if lo < -GAMMA_SEARCH_LIMIT {
            return Err(Error::Unreachable { target: eta_target });
        }
    }
    let mut hi = if lo == -1.0 { 0.0 } else { lo / 2.0 };
    for _ in 0..MAX_ITER {
        let mid = 0.5 * (lo + hi);
        let r = eta_of(mid, slope)? - eta_target;
        if r.abs() < 1e-11 {
            return Ok(mid);
        }
        if r > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= f64::EPSILON * mid.abs() {
            break;
        }
    }
    let mid = 0.5 * (lo + hi);
    if (eta_of(mid, slope)? - eta_target).abs() < 1e-9 {
        Ok(mid)
    } else {
        Err(Error::NoConvergence {
            what: "gain inversion",
            iterations: MAX_ITER,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn central(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
        (f(x + h) - f(x - h)) / (2.0 * h)
    }

    // plain bisection, independent of the Newton-polished solver
    fn bisect_fixed_point(gamma: f64, slope: f64) -> f64 {
        let g = |x: f64| x - gamma * sigmoid(x, slope);
        let (mut lo, mut hi) = (gamma, 0.0);
        for _ in 0..300 {
            let mid = 0.5 * (lo + hi);
            if g(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn midpoint_values() {
        let d = sigmoid_derivs(0.0, 60.0);
        assert_eq!(d.f, 0.5);
        assert_eq!(d.d1, 15.0);
        assert_eq!(d.d2, 0.0);
        // a³ · f(1-f) · (1 - 6f + 6f²) = 216000 · 0.25 · (-0.5)
        assert!((d.d3 + 2.7e4).abs() < 1e-9);
    }

    #[test]
    fn saturation() {
        let d = sigmoid_derivs(1e3, 60.0);
        assert_eq!((d.f, d.d1, d.d2, d.d3), (1.0, 0.0, 0.0, 0.0));
        let d = sigmoid_derivs(-1e3, 60.0);
        assert_eq!((d.f, d.d1, d.d2, d.d3), (0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn derivatives_near_operating_point() {
        let d = sigmoid_derivs(-0.014663, 60.0);
        assert!((d.f - 0.29322).abs() < 5e-5, "{}", d.f);
        assert!((d.d1 - central(|x| sigmoid(x, 60.0), -0.014663, 1e-6)).abs() < 1e-6);
        assert!((d.d1 - 12.4345).abs() < 5e-3, "{}", d.d1);
    }

    #[test]
    fn fixed_point_matches_bisection_oracle() {
        assert_eq!(fixed_point(0.0, 60.0).unwrap(), 0.0);
        let x = fixed_point(-0.05, 60.0).unwrap();
        let oracle = bisect_fixed_point(-0.05, 60.0);
        assert!((x - oracle).abs() < 1e-15);
        // frozen from the oracle
        assert!((x - (-0.014_661_870_668_633)).abs() < 1e-14);
        assert!((sigmoid(x, 60.0) - 0.293_237_413_372_661).abs() < 1e-12);
        assert!((x - (-0.014663)).abs() < 2e-6);
    }

    #[test]
    fn expansion_at_default_gain() {
        let e = expand(-0.05, 60.0).unwrap();
        // analytic coefficients against finite differences of γ f at x_o
        let gf = |x: f64| -0.05 * sigmoid(x, 60.0);
        let h = 1e-4;
        let fd1 = central(gf, e.x_o, h);
        let fd2 = (gf(e.x_o + h) - 2.0 * gf(e.x_o) + gf(e.x_o - h)) / (h * h) / 2.0;
        let fd3 = (gf(e.x_o + 2.0 * h) - 2.0 * gf(e.x_o + h) + 2.0 * gf(e.x_o - h)
            - gf(e.x_o - 2.0 * h))
            / (2.0 * h.powi(3))
            / 6.0;
        assert!((e.eta - fd1).abs() / fd1.abs() < 1e-3);
        assert!((e.kappa - fd2).abs() / fd2.abs() < 1e-3);
        assert!((e.nu - fd3).abs() / fd3.abs() < 1e-3);
        assert!((e.eta - (-0.62175)).abs() < 1e-4, "{}", e.eta);
        assert!((e.kappa - (-7.7132)).abs() < 1e-3, "{}", e.kappa);
        assert!((e.nu - 90.836).abs() < 1e-2, "{}", e.nu);
        assert!(e.eta < 0.0 && e.kappa < 0.0 && e.nu > 0.0);
    }

    #[test]
    fn zero_gain_is_degenerate() {
        assert_eq!(expand(0.0, 60.0), Err(Error::DegenerateGain));
    }

    #[test]
    fn gain_inversion_round_trip() {
        let eta = expand(-0.05, 60.0).unwrap().eta;
        let g = gamma_for_eta(eta, 60.0).unwrap();
        assert!((g + 0.05).abs() < 1e-9);
    }

    #[test]
    fn critical_gain_is_reachable_with_larger_feedback() {
        let g = gamma_for_eta(-1.03, 60.0).unwrap();
        assert!(g < -0.1 && g > -0.11, "{g}");
        assert!((expand(g, 60.0).unwrap().eta + 1.03).abs() < 1e-9);
    }

    #[test]
    fn gain_inversion_limits() {
        assert!(matches!(
            gamma_for_eta(0.0, 60.0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            gamma_for_eta(0.5, 60.0),
            Err(Error::InvalidParameter(_))
        ));
        assert_eq!(
            gamma_for_eta(-10_000.0, 60.0),
            Err(Error::Unreachable { target: -10_000.0 })
        );
    }

    #[test]
    fn eta_map_is_monotone_over_gain_scan() {
        let table: Vec<f64> = (1..=1000)
            .map(|i| -100.0 * i as f64 / 1000.0)
            .map(|g| eta_of(g, 60.0).unwrap())
            .collect();
        assert!(table.windows(2).all(|w| w[1] < w[0]));
        // |γ f'| exceeds 1.03 long before γ = -100
        assert!(table.last().unwrap() < &-6.0);
    }

    proptest! {
        #[test]
        fn derivatives_match_finite_differences(x in -0.1f64..0.1) {
            let a = 60.0;
            let h = 1e-6;
            let d = sigmoid_derivs(x, a);
            let fd1 = central(|y| sigmoid(y, a), x, h);
            let fd2 = central(|y| sigmoid_derivs(y, a).d1, x, h);
            let fd3 = central(|y| sigmoid_derivs(y, a).d2, x, h);
            let rel = |a: f64, b: f64, scale: f64| (a - b).abs() / scale;
            // relative to the derivative's magnitude scale a^k/4 so that zero
            // crossings do not blow up the ratio
            prop_assert!(rel(d.d1, fd1, a / 4.0) < 1e-5);
            prop_assert!(rel(d.d2, fd2, a * a / 4.0) < 1e-5);
            prop_assert!(rel(d.d3, fd3, a.powi(3) / 4.0) < 1e-5);
        }

        #[test]
        fn fixed_point_residual(gamma in -1.0f64..-1e-6) {
            let x = fixed_point(gamma, 60.0).unwrap();
            prop_assert!((x - gamma * sigmoid(x, 60.0)).abs() < 1e-12);
            prop_assert!(x > gamma && x < 0.0);
        }

        #[test]
        fn inversion_is_identity_on_eta(gamma in -5.0f64..-0.001) {
            let eta = expand(gamma, 60.0).unwrap().eta;
            let g = gamma_for_eta(eta, 60.0).unwrap();
            prop_assert!((expand(g, 60.0).unwrap().eta - eta).abs() < 1e-9);
        }
    }
}
