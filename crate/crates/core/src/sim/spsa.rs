//! Simultaneous perturbation stochastic approximation, maximizing.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::scalar::{lit, to_f64, Real};

/// Gain schedules `a_k = a/(k+1+A)^α` and `c_k = c/(k+1)^γ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpsaConfig {
    pub iterations: usize,
    pub a: f64,
    pub c: f64,
    pub alpha: f64,
    pub gamma: f64,
    /// `A`; `None` means `0.05·iterations`.
    pub stability: Option<f64>,
    pub seed: u64,
    /// Re-derive `a` from 25 probe gradients before iterating.
    pub calibrate: bool,
}

impl Default for SpsaConfig {
    fn default() -> Self {
        Self {
            iterations: 500,
            a: 0.2,
            c: 0.1,
            alpha: 0.602,
            gamma: 0.101,
            stability: None,
            seed: 0,
            calibrate: false,
        }
    }
}

/// Probe count for `a` calibration.
pub const CALIBRATION_PROBES: usize = 25;
/// Step magnitude calibration aims for on the first iteration.
pub const CALIBRATION_TARGET: f64 = std::f64::consts::TAU / 10.0;

impl SpsaConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_iterations(mut self, iterations: usize) -> Self {
        self.iterations = iterations;
        self
    }

    pub fn stability_constant(&self) -> f64 {
        self.stability.unwrap_or(0.05 * self.iterations as f64)
    }

    pub fn learning_rate(&self, k: usize) -> f64 {
        self.a / (k as f64 + 1.0 + self.stability_constant()).powf(self.alpha)
    }

    pub fn perturbation(&self, k: usize) -> f64 {
        self.c / (k as f64 + 1.0).powf(self.gamma)
    }

    fn validate(&self) -> Result<()> {
        let positive = [self.a, self.c, self.alpha, self.gamma];
        if positive.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            return Err(invalid("SPSA gains and exponents must be positive"));
        }
        if !(self.stability_constant() >= 0.0) {
            return Err(invalid("SPSA stability constant must be non-negative"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TracePoint {
    pub iteration: usize,
    pub objective: f64,
    pub best_so_far: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpsaResult<T> {
    /// Best parameters seen, including the initial point.
    pub params: Vec<T>,
    pub best_value: T,
    /// Objective at the iterate after each update; entry 0 is the initial point.
    pub trace: Vec<TracePoint>,
    /// `a` actually used, after calibration if enabled.
    pub a: f64,
}

/// Maximizes `objective` from `initial`. Each iteration draws a Rademacher direction `Δ`,
/// estimates `ĝ_i = (f(θ+c_kΔ) − f(θ−c_kΔ))/(2c_kΔ_i)` and steps `θ ← θ + a_k·ĝ`.
pub fn spsa_maximize<T, F>(
    mut objective: F,
    config: &SpsaConfig,
    initial: &[T],
) -> Result<SpsaResult<T>>
where
    T: Real,
    F: FnMut(&[T]) -> T,
{
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let dim = initial.len();
    let mut theta = initial.to_vec();
    let mut eval = |x: &[T], iteration: usize| -> Result<f64> {
        let v = to_f64(objective(x));
        if v.is_nan() {
            return Err(Error::Aborted {
                iteration,
                message: "objective returned NaN".into(),
            });
        }
        Ok(v)
    };
    let mut plus = vec![T::zero(); dim];
    let mut minus = vec![T::zero(); dim];
    let mut delta = vec![0.0f64; dim];

    let mut a = config.a;
    if config.calibrate && dim > 0 {
        let c0 = config.perturbation(0);
        let mut total = 0.0;
        for _ in 0..CALIBRATION_PROBES {
            draw_rademacher(&mut rng, &mut delta);
            shift(&theta, &delta, c0, &mut plus, &mut minus);
            total += ((eval(&plus, 0)? - eval(&minus, 0)?) / (2.0 * c0)).abs();
        }
        let mean = total / CALIBRATION_PROBES as f64;
        if mean > 1e-12 {
            a = CALIBRATION_TARGET / mean * (config.stability_constant() + 1.0).powf(config.alpha);
        }
    }
    let schedule = SpsaConfig { a, ..*config };

    let first = eval(&theta, 0)?;
    let mut best = (first, theta.clone());
    let mut trace = Vec::with_capacity(config.iterations + 1);
    trace.push(TracePoint {
        iteration: 0,
        objective: first,
        best_so_far: first,
    });
    for k in 0..config.iterations {
        let ck = schedule.perturbation(k);
        let ak = schedule.learning_rate(k);
        draw_rademacher(&mut rng, &mut delta);
        shift(&theta, &delta, ck, &mut plus, &mut minus);
        let diff = eval(&plus, k + 1)? - eval(&minus, k + 1)?;
        for (t, &di) in theta.iter_mut().zip(&delta) {
            *t += lit::<T>(ak * diff / (2.0 * ck * di));
        }
        let value = eval(&theta, k + 1)?;
        if value > best.0 {
            best = (value, theta.clone());
        }
        trace.push(TracePoint {
            iteration: k + 1,
            objective: value,
            best_so_far: best.0,
        });
    }
    Ok(SpsaResult {
        params: best.1,
        best_value: lit(best.0),
        trace,
        a,
    })
}

fn draw_rademacher(rng: &mut ChaCha8Rng, delta: &mut [f64]) {
    for d in delta.iter_mut() {
        *d = if rng.random::<bool>() { 1.0 } else { -1.0 };
    }
}

fn shift<T: Real>(theta: &[T], delta: &[f64], c: f64, plus: &mut [T], minus: &mut [T]) {
    for i in 0..theta.len() {
        let step = lit::<T>(c * delta[i]);
        plus[i] = theta[i] + step;
        minus[i] = theta[i] - step;
    }
}

/// `iteration,objective,best_so_far` with a header row.
pub fn trace_to_csv(trace: &[TracePoint]) -> String {
    let mut out = String::from("iteration,objective,best_so_far\n");
    for p in trace {
        let _ = writeln!(out, "{},{},{}", p.iteration, p.objective, p.best_so_far);
    }
    out
}
