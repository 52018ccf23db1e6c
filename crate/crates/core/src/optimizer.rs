//! Full-batch Levenberg-Marquardt for sum-of-squares losses.
//!
//! The damped step is computed from a reduced SVD of the Jacobian,
//! `Δp = V·diag(σ/(σ²+μ))·Uᵀ·r`, which equals the normal-equations solve
//! `(JᵀJ + μI)⁻¹Jᵀr` in exact arithmetic. The factorization depends only
//! on the current parameters, so rejected steps retry with a larger μ
//! without refactorizing.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Damping schedule and stopping rules.
///
/// A step is accepted iff it reduces the loss; acceptance shrinks μ by
/// `mu_down`, rejection grows it by `mu_up` and retries at the same point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LmConfig {
    pub mu0: f64,
    pub mu_up: f64,
    pub mu_down: f64,
    pub mu_min: f64,
    pub mu_max: f64,
    pub max_iters: usize,
    /// Stop once the loss (mean squared error) drops to this value.
    pub loss_tol: f64,
}

impl Default for LmConfig {
    fn default() -> Self {
        Self {
            mu0: 1e3,
            mu_up: 3.0,
            mu_down: 1.0 / 3.0,
            mu_min: 1e-12,
            mu_max: 1e12,
            max_iters: 2000,
            loss_tol: 1e-10,
        }
    }
}

impl LmConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.mu_min > 0.0
            && self.mu_min <= self.mu0
            && self.mu0 <= self.mu_max
            && self.mu_up > 1.0
            && self.mu_down > 0.0
            && self.mu_down < 1.0
            && self.loss_tol > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("bad LM config: {self:?}")))
        }
    }
}

/// Residual/Jacobian callbacks defining a least-squares problem.
///
/// Residuals carry their loss weighting internally, so the loss is the
/// plain sum of squared residuals. `jacobian` is the derivative of the
/// residual vector with respect to the parameters.
pub trait ResidualModel {
    fn residuals(&self, p: &DVector<f64>) -> Result<DVector<f64>>;
    fn jacobian(&self, p: &DVector<f64>) -> Result<DMatrix<f64>>;

    fn loss(&self, p: &DVector<f64>) -> Result<f64> {
        Ok(self.residuals(p)?.norm_squared())
    }
}

/// Why training stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Tolerance,
    MaxIters,
    /// μ pinned at `mu_max` with 25 consecutive rejections.
    Stall,
    /// Loss or step became non-finite; report holds the last good state.
    NonFinite,
}

/// Training outcome with per-iteration histories.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrainReport {
    pub final_params: Vec<f64>,
    /// Loss before iteration 0, then after every accepted step.
    pub loss_history: Vec<f64>,
    /// Damping value used for each accepted step (entry 0 is μ₀).
    pub mu_history: Vec<f64>,
    pub iterations: usize,
    pub stop_reason: StopReason,
}

impl TrainReport {
    pub fn final_loss(&self) -> f64 {
        *self.loss_history.last().expect("loss_history is never empty")
    }

    /// Two-column CSV (iteration, loss) for plotting.
    pub fn loss_history_csv(&self) -> String {
        let mut out = String::from("iteration,loss\n");
        for (i, loss) in self.loss_history.iter().enumerate() {
            out.push_str(&format!("{i},{loss:e}\n"));
        }
        out
    }
}

/// Reduced SVD of a Jacobian, reusable across damping retries.
pub struct FactoredJacobian {
    u: DMatrix<f64>,
    v_t: DMatrix<f64>,
    singular_values: DVector<f64>,
}

impl FactoredJacobian {
    pub fn new(jacobian: &DMatrix<f64>) -> Result<Self> {
        if jacobian.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical("non-finite entry in Jacobian".into()));
        }
        let k = jacobian.nrows().min(jacobian.ncols());
        // LAPACK returns the full factors; keep only the reduced blocks.
        if let Some(svd) = nalgebra_lapack::SVD::new(jacobian.clone()) {
            return Ok(Self {
                u: svd.u.columns(0, k).into_owned(),
                v_t: svd.vt.rows(0, k).into_owned(),
                singular_values: svd.singular_values,
            });
        }
        let svd = jacobian.clone().svd(true, true);
        Ok(Self {
            u: svd.u.expect("requested U"),
            v_t: svd.v_t.expect("requested Vᵀ"),
            singular_values: svd.singular_values,
        })
    }

    /// Damped step V·diag(σ/(σ²+μ))·Uᵀ·r.
    pub fn step(&self, residual: &DVector<f64>, mu: f64) -> DVector<f64> {
        let mut coeffs = self.u.tr_mul(residual);
        for (c, &s) in coeffs.iter_mut().zip(self.singular_values.iter()) {
            *c *= s / (s * s + mu);
        }
        self.v_t.tr_mul(&coeffs)
    }
}

/// Single damped least-squares step for Jacobian `J` and residual `r`.
pub fn lm_step(jacobian: &DMatrix<f64>, residual: &DVector<f64>, mu: f64) -> Result<DVector<f64>> {
    if mu <= 0.0 {
        return Err(Error::InvalidArgument(format!("mu must be positive, got {mu}")));
    }
    if residual.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("non-finite entry in residual".into()));
    }
    Ok(FactoredJacobian::new(jacobian)?.step(residual, mu))
}

const STALL_REJECTIONS: usize = 25;

/// Train to tolerance, iteration cap, or stall.
pub fn train(model: &dyn ResidualModel, p0: &DVector<f64>, cfg: &LmConfig) -> Result<TrainReport> {
    train_with_observer(model, p0, cfg, &mut |_, _| {})
}

/// As [`train`], invoking `observer(iteration, params)` after every
/// accepted step.
pub fn train_with_observer(
    model: &dyn ResidualModel,
    p0: &DVector<f64>,
    cfg: &LmConfig,
    observer: &mut dyn FnMut(usize, &DVector<f64>),
) -> Result<TrainReport> {
    cfg.validate()?;
    let mut p = p0.clone();
    let mut loss = model.loss(&p)?;
    let mut mu = cfg.mu0;
    let mut loss_history = vec![loss];
    let mut mu_history = vec![mu];
    let mut iterations = 0;

    let report = |p: &DVector<f64>, lh: Vec<f64>, mh: Vec<f64>, it, reason| TrainReport {
        final_params: p.as_slice().to_vec(),
        loss_history: lh,
        mu_history: mh,
        iterations: it,
        stop_reason: reason,
    };

    if !loss.is_finite() {
        return Ok(report(&p, loss_history, mu_history, 0, StopReason::NonFinite));
    }

    while iterations < cfg.max_iters {
        if loss <= cfg.loss_tol {
            return Ok(report(&p, loss_history, mu_history, iterations, StopReason::Tolerance));
        }

        let residual = model.residuals(&p)?;
        let jacobian = model.jacobian(&p)?;
        let factored = match FactoredJacobian::new(&jacobian) {
            Ok(f) => f,
            Err(_) => {
                return Ok(report(&p, loss_history, mu_history, iterations, StopReason::NonFinite))
            }
        };

        // Retry with growing μ until a step is accepted or we stall.
        let mut rejections_at_max = 0;
        loop {
            // Jacobian is ∂r/∂p, so descent is p − Δ.
            let trial = &p - factored.step(&residual, mu);
            let trial_loss = model.loss(&trial)?;
            if !trial_loss.is_finite() {
                return Ok(report(&p, loss_history, mu_history, iterations, StopReason::NonFinite));
            }
            if trial_loss < loss {
                p = trial;
                loss = trial_loss;
                loss_history.push(loss);
                mu_history.push(mu);
                mu = (mu * cfg.mu_down).max(cfg.mu_min);
                iterations += 1;
                observer(iterations, &p);
                break;
            }
            if mu >= cfg.mu_max {
                rejections_at_max += 1;
                if rejections_at_max >= STALL_REJECTIONS {
                    return Ok(report(&p, loss_history, mu_history, iterations, StopReason::Stall));
                }
            }
            mu = (mu * cfg.mu_up).min(cfg.mu_max);
        }
    }

    let reason = if loss <= cfg.loss_tol {
        StopReason::Tolerance
    } else {
        StopReason::MaxIters
    };
    Ok(report(&p, loss_history, mu_history, cfg.max_iters, reason))
}
