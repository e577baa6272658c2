//! Fixed-step Euler–Maruyama integration of scalar delay equations.
//!
//! The integrator advances
//!
//! ```text
//! u[k+1] = u[k] + dt * rhs(u[k], u[k - n_lag]) + sqrt(2 D dt) * N(0, 1)
//! ```
//!
//! with the noise term evaluated at the left end of each step (Itô). The
//! delay must be an integer number of steps; there is no interpolation of the
//! past state.

use std::fmt;
use std::str::FromStr;

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::sigmoid;
use crate::seed::Seed;

/// States beyond this magnitude abort the run with [`Error::Diverged`].
pub const DIVERGENCE_LIMIT: f64 = 1e6;

/// Default constant pre-history.
pub const DEFAULT_U_INIT: f64 = 0.01;

/// Number of whole steps in `tau`, or an error if `tau` is not a multiple of `dt`.
pub fn delay_steps(tau: f64, dt: f64) -> Result<usize> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidStep(dt));
    }
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::invalid(format!("delay must be positive, got {tau}")));
    }
    let ratio = tau / dt;
    let n = ratio.round();
    if n < 1.0 || (ratio - n).abs() > 1e-9 * ratio.max(1.0) {
        return Err(Error::NonCommensurateDelay { tau, dt });
    }
    Ok(n as usize)
}

/// Rolling record of the last `n_lag + 1` states.
#[derive(Debug, Clone)]
pub struct HistoryBuffer {
    dt: f64,
    n_lag: usize,
    ring: Vec<f64>,
    // index of the newest sample
    head: usize,
    t_now: f64,
}

impl HistoryBuffer {
    /// Build from `n_lag + 1` samples covering `[t_now - n_lag*dt, t_now]`,
    /// oldest first.
    pub fn new(dt: f64, n_lag: usize, init: &[f64], t_now: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidStep(dt));
        }
        if n_lag < 1 {
            return Err(Error::invalid("delay must span at least one step"));
        }
        if init.len() != n_lag + 1 {
            return Err(Error::LengthMismatch {
                expected: n_lag + 1,
                got: init.len(),
            });
        }
        Ok(HistoryBuffer {
            dt,
            n_lag,
            ring: init.to_vec(),
            head: n_lag,
            t_now,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn n_lag(&self) -> usize {
        self.n_lag
    }

    pub fn t_now(&self) -> f64 {
        self.t_now
    }

    #[inline]
    pub fn newest(&self) -> f64 {
        self.ring[self.head]
    }

    /// The sample exactly `n_lag` steps behind the newest.
    #[inline]
    pub fn delayed(&self) -> f64 {
        // the ring holds n_lag + 1 entries, so the slot after head is the oldest
        let i = if self.head + 1 == self.ring.len() {
            0
        } else {
            self.head + 1
        };
        self.ring[i]
    }

    #[inline]
    pub fn push(&mut self, value: f64) {
        self.head = if self.head + 1 == self.ring.len() {
            0
        } else {
            self.head + 1
        };
        self.ring[self.head] = value;
        self.t_now += self.dt;
    }

    /// Stored samples, oldest to newest.
    pub fn values(&self) -> Vec<f64> {
        let start = (self.head + 1) % self.ring.len();
        self.ring[start..]
            .iter()
            .chain(self.ring[..start].iter())
            .copied()
            .collect()
    }
}

/// Which delay equation a [`SystemSpec`] integrates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// `x' = -x + γ f(x_τ)` with the logistic nonlinearity.
    Original,
    /// Cubic truncation around the fixed point.
    Polynomial,
    /// Noise-corrected effective equation.
    Corrected,
    /// Linear part at the Hopf point, `H' = -H + η_c H_τ`.
    LinearCritical,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Original => "original",
            Variant::Polynomial => "polynomial",
            Variant::Corrected => "corrected",
            Variant::LinearCritical => "linear_critical",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "original" => Ok(Variant::Original),
            "polynomial" => Ok(Variant::Polynomial),
            "corrected" => Ok(Variant::Corrected),
            "linear_critical" | "linearcritical" | "linear" => Ok(Variant::LinearCritical),
            _ => Err(Error::UnknownVariant(s.to_string())),
        }
    }
}

/// Loose parameter bag, checked against a [`Variant`] by [`make_rhs`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ParamSet {
    pub gamma: Option<f64>,
    pub slope: Option<f64>,
    pub eta: Option<f64>,
    pub kappa: Option<f64>,
    pub nu: Option<f64>,
    pub eta_c: Option<f64>,
    pub eps_eff: Option<f64>,
    pub c_o: Option<f64>,
}

/// Typed coefficients for each variant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum SystemParams {
    Original {
        gamma: f64,
        slope: f64,
    },
    Polynomial {
        eta: f64,
        kappa: f64,
        nu: f64,
    },
    Corrected {
        eta_c: f64,
        eps_eff: f64,
        kappa: f64,
        nu: f64,
        c_o: f64,
    },
    LinearCritical {
        eta_c: f64,
    },
}

impl SystemParams {
    pub fn variant(&self) -> Variant {
        match self {
            SystemParams::Original { .. } => Variant::Original,
            SystemParams::Polynomial { .. } => Variant::Polynomial,
            SystemParams::Corrected { .. } => Variant::Corrected,
            SystemParams::LinearCritical { .. } => Variant::LinearCritical,
        }
    }

    pub fn from_parts(variant: Variant, p: &ParamSet) -> Result<Self> {
        let need = |v: Option<f64>, param: &'static str| {
            v.ok_or(Error::MissingParameter {
                variant: variant.name(),
                param,
            })
        };
        Ok(match variant {
            Variant::Original => SystemParams::Original {
                gamma: need(p.gamma, "gamma")?,
                slope: need(p.slope, "slope")?,
            },
            Variant::Polynomial => SystemParams::Polynomial {
                eta: need(p.eta, "eta")?,
                kappa: need(p.kappa, "kappa")?,
                nu: need(p.nu, "nu")?,
            },
            Variant::Corrected => SystemParams::Corrected {
                eta_c: need(p.eta_c, "eta_c")?,
                eps_eff: need(p.eps_eff, "eps_eff")?,
                kappa: need(p.kappa, "kappa")?,
                nu: need(p.nu, "nu")?,
                c_o: need(p.c_o, "c_o")?,
            },
            Variant::LinearCritical => SystemParams::LinearCritical {
                eta_c: need(p.eta_c, "eta_c")?,
            },
        })
    }

    pub fn rhs(&self) -> Rhs {
        match *self {
            SystemParams::Original { gamma, slope } => Rhs::Sigmoid { gamma, slope },
            SystemParams::Polynomial { eta, kappa, nu } => Rhs::Cubic {
                offset: 0.0,
                linear: eta,
                quadratic: kappa,
                cubic: nu,
            },
            SystemParams::Corrected {
                eta_c,
                eps_eff,
                kappa,
                nu,
                c_o,
            } => Rhs::Cubic {
                offset: c_o,
                linear: eta_c + eps_eff,
                quadratic: kappa,
                cubic: nu,
            },
            SystemParams::LinearCritical { eta_c } => Rhs::Cubic {
                offset: 0.0,
                linear: eta_c,
                quadratic: 0.0,
                cubic: 0.0,
            },
        }
    }
}

/// Compiled right-hand side `rhs(u, u_τ)`.
///
/// The polynomial, corrected and linear variants share one evaluation path,
/// so a corrected system with zero offset and `ε* = ε` reproduces the
/// polynomial system with `η = η_c + ε` bit for bit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rhs {
    Sigmoid {
        gamma: f64,
        slope: f64,
    },
    Cubic {
        offset: f64,
        linear: f64,
        quadratic: f64,
        cubic: f64,
    },
}

impl Rhs {
    #[inline]
    pub fn eval(&self, u: f64, u_tau: f64) -> f64 {
        match *self {
            Rhs::Sigmoid { gamma, slope } => -u + gamma * sigmoid(u_tau, slope),
            Rhs::Cubic {
                offset,
                linear,
                quadratic,
                cubic,
            } => offset + (-u + u_tau * (linear + u_tau * (quadratic + u_tau * cubic))),
        }
    }
}

/// Build the right-hand side for `variant` from a parameter bag.
pub fn make_rhs(variant: Variant, params: &ParamSet) -> Result<Rhs> {
    Ok(SystemParams::from_parts(variant, params)?.rhs())
}

/// A delay equation plus its additive noise intensity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub params: SystemParams,
    /// Noise intensity `D`; the stochastic forcing is `sqrt(2D) ξ(t)`.
    pub noise: f64,
    pub tau: f64,
}

impl SystemSpec {
    pub fn new(params: SystemParams, noise: f64, tau: f64) -> Result<Self> {
        let spec = SystemSpec { params, noise, tau };
        spec.validate()?;
        Ok(spec)
    }

    pub fn variant(&self) -> Variant {
        self.params.variant()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.noise.is_finite() && self.noise >= 0.0) {
            return Err(Error::invalid(format!(
                "noise intensity must be finite and >= 0, got {}",
                self.noise
            )));
        }
        if !(self.tau.is_finite() && self.tau > 0.0) {
            return Err(Error::invalid(format!(
                "delay must be positive, got {}",
                self.tau
            )));
        }
        Ok(())
    }
}

/// Initial history on `[-τ, 0]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum HistoryInit {
    Constant(f64),
    /// `n_lag + 1` samples on the integration grid, oldest first.
    Samples(Vec<f64>),
}

impl Default for HistoryInit {
    fn default() -> Self {
        HistoryInit::Constant(DEFAULT_U_INIT)
    }
}

impl HistoryInit {
    /// Sample `f(θ)` on the grid `θ = -τ, -τ + dt, ..., 0`.
    pub fn from_fn(f: impl Fn(f64) -> f64, tau: f64, dt: f64) -> Result<Self> {
        let n = delay_steps(tau, dt)?;
        Ok(HistoryInit::Samples(
            (0..=n).map(|j| f(-((n - j) as f64) * dt)).collect(),
        ))
    }

    fn materialize(&self, n_lag: usize) -> Result<Vec<f64>> {
        match self {
            HistoryInit::Constant(u) => Ok(vec![*u; n_lag + 1]),
            HistoryInit::Samples(s) if s.len() == n_lag + 1 => Ok(s.clone()),
            HistoryInit::Samples(s) => Err(Error::LengthMismatch {
                expected: n_lag + 1,
                got: s.len(),
            }),
        }
    }
}

/// A sampled solution, starting at `t0` with the initial state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub t0: f64,
    pub dt: f64,
    pub samples: Vec<f64>,
    /// Noise stream that produced the run; `None` when deterministic.
    pub seed: Option<Seed>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    pub fn last(&self) -> Option<f64> {
        self.samples.last().copied()
    }
}

/// Integrate `spec` for `n_steps` Euler–Maruyama steps of size `dt`.
///
/// The noise stream is only consumed when `spec.noise > 0`.
pub fn integrate(
    spec: &SystemSpec,
    history: &HistoryInit,
    n_steps: usize,
    dt: f64,
    seed: Seed,
) -> Result<Trajectory> {
    spec.validate()?;
    if n_steps < 1 {
        return Err(Error::invalid("n_steps must be at least 1"));
    }
    let n_lag = delay_steps(spec.tau, dt)?;
    let mut buf = HistoryBuffer::new(dt, n_lag, &history.materialize(n_lag)?, 0.0)?;
    let rhs = spec.params.rhs();

    let mut samples = Vec::with_capacity(n_steps + 1);
    samples.push(buf.newest());

    let stochastic = spec.noise > 0.0;
    let kick = (2.0 * spec.noise * dt).sqrt();
    let mut rng = seed.rng();

    for step in 1..=n_steps {
        let u = buf.newest();
        let mut next = u + dt * rhs.eval(u, buf.delayed());
        if stochastic {
            let xi: f64 = StandardNormal.sample(&mut rng);
            next += kick * xi;
        }
        // also rejects NaN
        if next.is_nan() || next.abs() > DIVERGENCE_LIMIT {
            return Err(Error::Diverged {
                step,
                value: next,
                trial: None,
            });
        }
        buf.push(next);
        samples.push(next);
    }

    Ok(Trajectory {
        t0: 0.0,
        dt,
        samples,
        seed: stochastic.then_some(seed),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(eta: f64, kappa: f64, nu: f64, noise: f64, tau: f64) -> SystemSpec {
        SystemSpec::new(SystemParams::Polynomial { eta, kappa, nu }, noise, tau).unwrap()
    }

    #[test]
    fn buffer_delayed_read_is_n_lag_behind() {
        let mut b = HistoryBuffer::new(0.5, 3, &[0.0, 1.0, 2.0, 3.0], 0.0).unwrap();
        assert_eq!(b.delayed(), 0.0);
        assert_eq!(b.newest(), 3.0);
        for v in 4..10 {
            b.push(v as f64);
            assert_eq!(b.newest(), v as f64);
            assert_eq!(b.delayed(), (v - 3) as f64);
        }
        assert_eq!(b.values(), vec![6.0, 7.0, 8.0, 9.0]);
        assert_eq!(b.t_now(), 3.0);
    }

    #[test]
    fn buffer_rejects_bad_shapes() {
        assert!(matches!(
            HistoryBuffer::new(0.1, 2, &[0.0; 2], 0.0),
            Err(Error::LengthMismatch {
                expected: 3,
                got: 2
            })
        ));
        assert!(HistoryBuffer::new(0.1, 0, &[0.0], 0.0).is_err());
        assert!(matches!(
            HistoryBuffer::new(0.0, 1, &[0.0; 2], 0.0),
            Err(Error::InvalidStep(_))
        ));
    }

    #[test]
    fn delay_must_be_commensurate() {
        assert_eq!(delay_steps(12.0, 0.1).unwrap(), 120);
        assert_eq!(delay_steps(12.0, 0.025).unwrap(), 480);
        assert!(matches!(
            delay_steps(12.05, 0.1),
            Err(Error::NonCommensurateDelay { .. })
        ));
        assert!(matches!(
            delay_steps(0.05, 0.1),
            Err(Error::NonCommensurateDelay { .. })
        ));
        assert!(matches!(
            delay_steps(12.0, -0.1),
            Err(Error::InvalidStep(_))
        ));
    }

    #[test]
    fn make_rhs_checks_parameters() {
        let p = ParamSet {
            eta: Some(-1.0),
            kappa: Some(0.0),
            ..Default::default()
        };
        assert_eq!(
            make_rhs(Variant::Polynomial, &p),
            Err(Error::MissingParameter {
                variant: "polynomial",
                param: "nu"
            })
        );
        assert!(matches!(
            "sinusoidal".parse::<Variant>(),
            Err(Error::UnknownVariant(_))
        ));
        assert_eq!(
            "linear-critical".parse::<Variant>().unwrap(),
            Variant::LinearCritical
        );
    }

    #[test]
    fn polynomial_origin_is_fixed() {
        let rhs = make_rhs(
            Variant::Polynomial,
            &ParamSet {
                eta: Some(-0.6),
                kappa: Some(-7.7),
                nu: Some(90.8),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(rhs.eval(0.0, 0.0), 0.0);
    }

    #[test]
    fn corrected_without_shift_matches_polynomial() {
        let (eta_c, eps, kappa, nu) = (-1.028_868_255_666_971_5, -0.05, -7.713, 90.83);
        let p = SystemParams::Polynomial {
            eta: eta_c + eps,
            kappa,
            nu,
        }
        .rhs();
        let c = SystemParams::Corrected {
            eta_c,
            eps_eff: eps,
            kappa,
            nu,
            c_o: 0.0,
        }
        .rhs();
        for i in -50..=50 {
            for j in -50..=50 {
                let (u, ut) = (i as f64 * 1e-3, j as f64 * 1.3e-3);
                assert_eq!(p.eval(u, ut).to_bits(), c.eval(u, ut).to_bits());
            }
        }
    }

    #[test]
    fn stable_linear_regime_decays_monotonically() {
        // short delay: the dominant root is real, so there is no overshoot
        let spec = poly(-0.5, 0.0, 0.0, 0.0, 0.1);
        let tr = integrate(
            &spec,
            &HistoryInit::Constant(1.0),
            2000,
            0.01,
            Seed::new(0, 0),
        )
        .unwrap();
        assert_eq!(tr.len(), 2001);
        assert!(tr.seed.is_none());
        let after = &tr.samples[10..];
        assert!(after.windows(2).all(|w| w[1].abs() < w[0].abs()));
        assert!(tr.last().unwrap().abs() < 1e-3);

        // at τ = 12 the same gain decays through damped oscillations
        let spec = poly(-0.5, 0.0, 0.0, 0.0, 12.0);
        let tr = integrate(
            &spec,
            &HistoryInit::Constant(1.0),
            4000,
            0.1,
            Seed::new(0, 0),
        )
        .unwrap();
        assert!(tr.samples.iter().any(|&u| u < 0.0));
        assert!(tr.last().unwrap().abs() < 1e-3);
    }

    #[test]
    fn runaway_is_reported() {
        // |η| > 1 with a positive cubic feedback and a large kick runs away
        let spec = poly(-3.0, 0.0, 5.0, 0.0, 1.0);
        let err = integrate(
            &spec,
            &HistoryInit::Constant(2.0),
            10_000,
            0.1,
            Seed::new(0, 0),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Diverged { trial: None, .. }));
    }

    #[test]
    fn history_samples_are_used_verbatim() {
        let spec = poly(0.0, 0.0, 0.0, 0.0, 0.3);
        let h = HistoryInit::from_fn(|t| t, 0.3, 0.1).unwrap();
        assert_eq!(
            h,
            HistoryInit::Samples(vec![-0.30000000000000004, -0.2, -0.1, 0.0])
        );
        let bad = HistoryInit::Samples(vec![0.0; 3]);
        assert!(matches!(
            integrate(&spec, &bad, 5, 0.1, Seed::new(0, 0)),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn rejects_bad_inputs() {
        let spec = poly(-0.5, 0.0, 0.0, 0.0, 1.0);
        let h = HistoryInit::default();
        assert!(integrate(&spec, &h, 0, 0.1, Seed::new(0, 0)).is_err());
        assert!(matches!(
            integrate(&spec, &h, 10, 0.0, Seed::new(0, 0)),
            Err(Error::InvalidStep(_))
        ));
        assert!(matches!(
            integrate(&spec, &h, 10, 0.3, Seed::new(0, 0)),
            Err(Error::NonCommensurateDelay { .. })
        ));
        assert!(SystemSpec::new(SystemParams::LinearCritical { eta_c: -1.0 }, -1e-3, 1.0).is_err());
    }
}
