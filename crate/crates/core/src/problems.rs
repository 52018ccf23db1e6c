//! Residual models for function fitting and the augmented elliptic
//! interface problem, manufactured solutions, testing errors, and the
//! shipped experiment presets.
//!
//! The PDE loss has four blocks: interior equation residual, Dirichlet
//! boundary residual (evaluated at z = +1, the boundary lies in Ω⁺),
//! solution jump, and flux jump across the interface. Each residual
//! carries a square-root weight so the optimizer's sum of squares equals
//! the mean-squared collocation loss exactly.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{
    CollocationSet, Domain, Interface, LevelSetGeometry, NodeDistribution, PolarCurve, Region,
};
use crate::network::{
    forward, normal_derivative, param_jacobian, spatial_laplacian, AugmentedPoint, JacobianTarget,
    ShallowNetParams,
};
use crate::optimizer::ResidualModel;

/// Smooth scalar field with closed-form gradient and Laplacian.
///
/// Each variant is defined (and smooth) on the whole bounding box, so it
/// can serve as the global extension of one solution piece.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Field {
    Zero,
    Constant { value: f64 },
    /// ∏ exp(x_i)
    ProdExp,
    /// ∏ sin(x_i)
    ProdSin,
    /// sin(2πx) in one dimension
    SinTwoPi,
    /// cos(2πx) in one dimension
    CosTwoPi,
    /// exp(‖x‖²)
    ExpRadiusSq,
    /// 0.1‖x‖⁴ − 0.01·log(2‖x‖); the log term is harmonic in 2-D
    QuarticLog,
}

impl Field {
    pub fn value(&self, x: &DVector<f64>) -> f64 {
        match self {
            Field::Zero => 0.0,
            Field::Constant { value } => *value,
            Field::ProdExp => x.iter().sum::<f64>().exp(),
            Field::ProdSin => x.iter().map(|&v| v.sin()).product(),
            Field::SinTwoPi => (2.0 * PI * x[0]).sin(),
            Field::CosTwoPi => (2.0 * PI * x[0]).cos(),
            Field::ExpRadiusSq => x.norm_squared().exp(),
            Field::QuarticLog => {
                let r2 = x.norm_squared();
                0.1 * r2 * r2 - 0.01 * (2.0 * r2.sqrt()).ln()
            }
        }
    }

    pub fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        let d = x.len();
        match self {
            Field::Zero | Field::Constant { .. } => DVector::zeros(d),
            Field::ProdExp => {
                let v = self.value(x);
                DVector::from_element(d, v)
            }
            Field::ProdSin => DVector::from_fn(d, |i, _| {
                let mut g = x[i].cos();
                for j in 0..d {
                    if j != i {
                        g *= x[j].sin();
                    }
                }
                g
            }),
            Field::SinTwoPi => DVector::from_vec(vec![2.0 * PI * (2.0 * PI * x[0]).cos()]),
            Field::CosTwoPi => DVector::from_vec(vec![-2.0 * PI * (2.0 * PI * x[0]).sin()]),
            Field::ExpRadiusSq => {
                let v = self.value(x);
                x * (2.0 * v)
            }
            Field::QuarticLog => {
                let r2 = x.norm_squared();
                x * (0.4 * r2 - 0.01 / r2)
            }
        }
    }

    pub fn laplacian(&self, x: &DVector<f64>) -> f64 {
        let d = x.len() as f64;
        match self {
            Field::Zero | Field::Constant { .. } => 0.0,
            Field::ProdExp => d * self.value(x),
            Field::ProdSin => -d * self.value(x),
            Field::SinTwoPi | Field::CosTwoPi => -4.0 * PI * PI * self.value(x),
            Field::ExpRadiusSq => {
                let r2 = x.norm_squared();
                (2.0 * d + 4.0 * r2) * r2.exp()
            }
            Field::QuarticLog => {
                // valid in 2-D, where the log term is harmonic
                (4.0 * d + 8.0) * 0.1 * x.norm_squared()
            }
        }
    }
}

/// Exact solution given piecewise by region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseField {
    pub minus: Field,
    pub plus: Field,
}

impl PiecewiseField {
    pub fn piece(&self, region: Region) -> &Field {
        match region {
            Region::Inside => &self.minus,
            Region::Outside => &self.plus,
        }
    }

    pub fn value(&self, x: &DVector<f64>, region: Region) -> f64 {
        self.piece(region).value(x)
    }
}

/// Variable-coefficient elliptic interface problem with manufactured data.
///
/// The source, jump, and boundary data are derived from the exact field:
/// `f̃ = Δφ±` per region, `v = φ⁺ − φ⁻` and `w = β⁺∂_nφ⁺ − β⁻∂_nφ⁻` on Γ,
/// and `g = φ⁺` on ∂Ω.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterfaceProblem {
    pub geom: LevelSetGeometry,
    pub beta_minus: f64,
    pub beta_plus: f64,
    pub exact: Option<PiecewiseField>,
    pub alpha_b: f64,
    pub alpha_gamma: f64,
}

impl InterfaceProblem {
    /// Build a problem whose data comes from a chosen exact solution.
    pub fn manufactured(
        geom: LevelSetGeometry,
        beta_minus: f64,
        beta_plus: f64,
        exact: PiecewiseField,
    ) -> Result<Self> {
        if beta_minus <= 0.0 || beta_plus <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "diffusion coefficients must be positive, got β⁻={beta_minus}, β⁺={beta_plus}"
            )));
        }
        Ok(Self {
            geom,
            beta_minus,
            beta_plus,
            exact: Some(exact),
            alpha_b: 1.0,
            alpha_gamma: 1.0,
        })
    }

    fn exact_field(&self) -> Result<&PiecewiseField> {
        self.exact
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("problem has no exact solution".into()))
    }

    pub fn beta(&self, region: Region) -> f64 {
        match region {
            Region::Inside => self.beta_minus,
            Region::Outside => self.beta_plus,
        }
    }

    /// Poisson right-hand side f̃ = f±/β± = Δφ± of the exact piece.
    pub fn rhs(&self, x: &DVector<f64>, region: Region) -> Result<f64> {
        Ok(self.exact_field()?.piece(region).laplacian(x))
    }

    /// Solution jump v = φ⁺ − φ⁻ on Γ.
    pub fn jump_value(&self, x: &DVector<f64>) -> Result<f64> {
        let exact = self.exact_field()?;
        Ok(exact.plus.value(x) - exact.minus.value(x))
    }

    /// Flux jump w = β⁺∂_nφ⁺ − β⁻∂_nφ⁻ on Γ.
    pub fn jump_flux(&self, x: &DVector<f64>, normal: &DVector<f64>) -> Result<f64> {
        let exact = self.exact_field()?;
        Ok(self.beta_plus * exact.plus.gradient(x).dot(normal)
            - self.beta_minus * exact.minus.gradient(x).dot(normal))
    }

    /// Dirichlet data g = φ⁺ on ∂Ω (the boundary lies in Ω⁺).
    pub fn boundary_value(&self, x: &DVector<f64>) -> Result<f64> {
        Ok(self.exact_field()?.plus.value(x))
    }
}

/// Anything that can stand in for the augmented solution when assembling
/// PDE residuals: the network, or the exact field in consistency checks.
trait AugmentedEval {
    fn value(&self, x: &DVector<f64>, region: Region) -> Result<f64>;
    fn laplacian(&self, x: &DVector<f64>, region: Region) -> Result<f64>;
    fn normal_deriv(&self, x: &DVector<f64>, region: Region, n: &DVector<f64>) -> Result<f64>;
}

impl AugmentedEval for ShallowNetParams {
    fn value(&self, x: &DVector<f64>, region: Region) -> Result<f64> {
        forward(self, &AugmentedPoint::new(x.clone(), region.z()))
    }
    fn laplacian(&self, x: &DVector<f64>, region: Region) -> Result<f64> {
        spatial_laplacian(self, &AugmentedPoint::new(x.clone(), region.z()))
    }
    fn normal_deriv(&self, x: &DVector<f64>, region: Region, n: &DVector<f64>) -> Result<f64> {
        normal_derivative(self, &AugmentedPoint::new(x.clone(), region.z()), n)
    }
}

impl AugmentedEval for PiecewiseField {
    fn value(&self, x: &DVector<f64>, region: Region) -> Result<f64> {
        Ok(self.piece(region).value(x))
    }
    fn laplacian(&self, x: &DVector<f64>, region: Region) -> Result<f64> {
        Ok(self.piece(region).laplacian(x))
    }
    fn normal_deriv(&self, x: &DVector<f64>, region: Region, n: &DVector<f64>) -> Result<f64> {
        Ok(self.piece(region).gradient(x).dot(n))
    }
}

fn region_of_z(z: f64) -> Region {
    if z < 0.0 {
        Region::Inside
    } else {
        Region::Outside
    }
}

fn assemble_pde_residuals(
    eval: &dyn AugmentedEval,
    problem: &InterfaceProblem,
    colloc: &CollocationSet,
) -> Result<DVector<f64>> {
    let (m, m_b, m_gamma) = colloc.counts();
    if m == 0 || m_b == 0 || m_gamma == 0 {
        return Err(Error::InvalidArgument(
            "collocation set must have interior, boundary, and interface points".into(),
        ));
    }
    let w_int = 1.0 / (m as f64).sqrt();
    let w_b = (problem.alpha_b / m_b as f64).sqrt();
    let w_g = (problem.alpha_gamma / m_gamma as f64).sqrt();

    let mut r = Vec::with_capacity(m + m_b + 2 * m_gamma);
    for pt in &colloc.interior {
        let region = region_of_z(pt.z);
        r.push(w_int * (eval.laplacian(&pt.x, region)? - problem.rhs(&pt.x, region)?));
    }
    for x in &colloc.boundary {
        r.push(w_b * (eval.value(x, Region::Outside)? - problem.boundary_value(x)?));
    }
    for p in &colloc.interface {
        let jump = eval.value(&p.x, Region::Outside)? - eval.value(&p.x, Region::Inside)?;
        r.push(w_g * (jump - problem.jump_value(&p.x)?));
    }
    for p in &colloc.interface {
        let flux = problem.beta_plus * eval.normal_deriv(&p.x, Region::Outside, &p.normal)?
            - problem.beta_minus * eval.normal_deriv(&p.x, Region::Inside, &p.normal)?;
        r.push(w_g * (flux - problem.jump_flux(&p.x, &p.normal)?));
    }
    Ok(DVector::from_vec(r))
}

/// Stacked, weighted PDE residual vector for a network parameter set.
///
/// The sum of squares of the result equals the four-term mean-squared
/// collocation loss.
pub fn pde_residuals(
    params: &ShallowNetParams,
    problem: &InterfaceProblem,
    colloc: &CollocationSet,
) -> Result<DVector<f64>> {
    assemble_pde_residuals(params, problem, colloc)
}

/// PDE residuals with the exact field substituted for the network;
/// zero (to roundoff) when the manufactured data is consistent.
pub fn pde_residuals_of_exact(
    problem: &InterfaceProblem,
    colloc: &CollocationSet,
) -> Result<DVector<f64>> {
    assemble_pde_residuals(problem.exact_field()?, problem, colloc)
}

/// The four loss terms of the collocation loss, computed independently
/// of the stacked residual path (plain per-block mean-square sums).
pub fn pde_loss_terms(
    params: &ShallowNetParams,
    problem: &InterfaceProblem,
    colloc: &CollocationSet,
) -> Result<[f64; 4]> {
    let (m, m_b, m_gamma) = colloc.counts();
    let mut interior = 0.0;
    for pt in &colloc.interior {
        let region = region_of_z(pt.z);
        let lap = spatial_laplacian(params, pt)?;
        interior += (lap - problem.rhs(&pt.x, region)?).powi(2);
    }
    interior /= m as f64;

    let mut boundary = 0.0;
    for x in &colloc.boundary {
        let val = forward(params, &AugmentedPoint::new(x.clone(), 1.0))?;
        boundary += (val - problem.boundary_value(x)?).powi(2);
    }
    boundary *= problem.alpha_b / m_b as f64;

    let mut jump = 0.0;
    let mut flux = 0.0;
    for p in &colloc.interface {
        let hi = forward(params, &AugmentedPoint::new(p.x.clone(), 1.0))?;
        let lo = forward(params, &AugmentedPoint::new(p.x.clone(), -1.0))?;
        jump += (hi - lo - problem.jump_value(&p.x)?).powi(2);
        let dn_hi = normal_derivative(params, &AugmentedPoint::new(p.x.clone(), 1.0), &p.normal)?;
        let dn_lo = normal_derivative(params, &AugmentedPoint::new(p.x.clone(), -1.0), &p.normal)?;
        flux += (problem.beta_plus * dn_hi - problem.beta_minus * dn_lo
            - problem.jump_flux(&p.x, &p.normal)?)
        .powi(2);
    }
    jump *= problem.alpha_gamma / m_gamma as f64;
    flux *= problem.alpha_gamma / m_gamma as f64;

    Ok([interior, boundary, jump, flux])
}

/// Parameter Jacobian of [`pde_residuals`], assembled from the network's
/// closed-form Jacobian blocks with the same weights.
pub fn pde_jacobian(
    params: &ShallowNetParams,
    problem: &InterfaceProblem,
    colloc: &CollocationSet,
) -> Result<DMatrix<f64>> {
    let (m, m_b, m_gamma) = colloc.counts();
    let np = params.param_count();
    let w_int = 1.0 / (m as f64).sqrt();
    let w_b = (problem.alpha_b / m_b as f64).sqrt();
    let w_g = (problem.alpha_gamma / m_gamma as f64).sqrt();

    let interior_pts: Vec<AugmentedPoint> = colloc.interior.clone();
    let boundary_pts: Vec<AugmentedPoint> = colloc
        .boundary
        .iter()
        .map(|x| AugmentedPoint::new(x.clone(), 1.0))
        .collect();
    let iface_hi: Vec<AugmentedPoint> = colloc
        .interface
        .iter()
        .map(|p| AugmentedPoint::new(p.x.clone(), 1.0))
        .collect();
    let iface_lo: Vec<AugmentedPoint> = colloc
        .interface
        .iter()
        .map(|p| AugmentedPoint::new(p.x.clone(), -1.0))
        .collect();
    let normals: Vec<DVector<f64>> = colloc.interface.iter().map(|p| p.normal.clone()).collect();

    let j_int = param_jacobian(params, &interior_pts, &JacobianTarget::Laplacian)?;
    let j_b = param_jacobian(params, &boundary_pts, &JacobianTarget::Value)?;
    let j_jump_hi = param_jacobian(params, &iface_hi, &JacobianTarget::Value)?;
    let j_jump_lo = param_jacobian(params, &iface_lo, &JacobianTarget::Value)?;
    let j_flux_hi = param_jacobian(params, &iface_hi, &JacobianTarget::NormalDerivative(&normals))?;
    let j_flux_lo = param_jacobian(params, &iface_lo, &JacobianTarget::NormalDerivative(&normals))?;

    let mut jac = DMatrix::zeros(m + m_b + 2 * m_gamma, np);
    jac.rows_mut(0, m).copy_from(&(j_int * w_int));
    jac.rows_mut(m, m_b).copy_from(&(j_b * w_b));
    jac.rows_mut(m + m_b, m_gamma)
        .copy_from(&((j_jump_hi - j_jump_lo) * w_g));
    jac.rows_mut(m + m_b + m_gamma, m_gamma).copy_from(
        &((j_flux_hi * problem.beta_plus - j_flux_lo * problem.beta_minus) * w_g),
    );
    Ok(jac)
}

/// [`ResidualModel`] for the interface problem. Residuals follow the
/// data-minus-model sign convention of [`FitModel`], so the Jacobian is
/// the negated network Jacobian.
pub struct PdeModel<'a> {
    pub problem: &'a InterfaceProblem,
    pub colloc: &'a CollocationSet,
    pub d: usize,
    pub neurons: usize,
}

impl<'a> PdeModel<'a> {
    pub fn new(problem: &'a InterfaceProblem, colloc: &'a CollocationSet, neurons: usize) -> Self {
        Self {
            problem,
            colloc,
            d: problem.geom.dim(),
            neurons,
        }
    }
}

impl ResidualModel for PdeModel<'_> {
    fn residuals(&self, p: &DVector<f64>) -> Result<DVector<f64>> {
        let params = ShallowNetParams::unflatten(self.d, self.neurons, p)?;
        pde_residuals(&params, self.problem, self.colloc)
    }

    fn jacobian(&self, p: &DVector<f64>) -> Result<DMatrix<f64>> {
        let params = ShallowNetParams::unflatten(self.d, self.neurons, p)?;
        pde_jacobian(&params, self.problem, self.colloc)
    }
}

/// Weighted fit residuals: (target − φ_aug)/√M per sample.
pub fn fit_residuals(
    params: &ShallowNetParams,
    dataset: &[(AugmentedPoint, f64)],
) -> Result<DVector<f64>> {
    if dataset.is_empty() {
        return Err(Error::InvalidArgument("empty fit dataset".into()));
    }
    let w = 1.0 / (dataset.len() as f64).sqrt();
    let mut r = DVector::zeros(dataset.len());
    for (i, (pt, target)) in dataset.iter().enumerate() {
        r[i] = w * (target - forward(params, pt)?);
    }
    Ok(r)
}

/// [`ResidualModel`] for piecewise function fitting.
pub struct FitModel<'a> {
    pub dataset: &'a [(AugmentedPoint, f64)],
    pub d: usize,
    pub neurons: usize,
}

impl<'a> FitModel<'a> {
    pub fn new(dataset: &'a [(AugmentedPoint, f64)], d: usize, neurons: usize) -> Self {
        Self { dataset, d, neurons }
    }
}

impl ResidualModel for FitModel<'_> {
    fn residuals(&self, p: &DVector<f64>) -> Result<DVector<f64>> {
        let params = ShallowNetParams::unflatten(self.d, self.neurons, p)?;
        fit_residuals(&params, self.dataset)
    }

    fn jacobian(&self, p: &DVector<f64>) -> Result<DMatrix<f64>> {
        let params = ShallowNetParams::unflatten(self.d, self.neurons, p)?;
        let pts: Vec<AugmentedPoint> = self.dataset.iter().map(|(pt, _)| pt.clone()).collect();
        let w = -1.0 / (self.dataset.len() as f64).sqrt();
        Ok(param_jacobian(&params, &pts, &JacobianTarget::Value)? * w)
    }
}

/// Testing-error summary over fresh random points.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ErrorReport {
    pub l_inf: f64,
    pub l2: f64,
    pub rel_l2: f64,
    pub n_test: usize,
    pub seed: u64,
}

/// Max-abs and root-mean-square testing errors at uniform random points
/// of Ω, with z chosen by classification.
pub fn evaluate_errors(
    params: &ShallowNetParams,
    problem: &InterfaceProblem,
    n_test: usize,
    seed: u64,
) -> Result<ErrorReport> {
    let exact = *problem.exact_field()?;
    if n_test == 0 {
        return Err(Error::InvalidArgument("need at least one test point".into()));
    }
    let geom = &problem.geom;
    let (lo, hi) = geom.domain.bounding_box();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut l_inf: f64 = 0.0;
    let mut sum_sq = 0.0;
    let mut exact_sq = 0.0;
    let mut drawn = 0;
    while drawn < n_test {
        let x = DVector::from_fn(geom.dim(), |i, _| rng.gen_range(lo[i]..=hi[i]));
        if !geom.domain.contains(&x) {
            continue;
        }
        drawn += 1;
        let region = geom.classify(&x)?;
        let predicted = forward(params, &AugmentedPoint::new(x.clone(), region.z()))?;
        let truth = exact.value(&x, region);
        let err = (predicted - truth).abs();
        l_inf = l_inf.max(err);
        sum_sq += err * err;
        exact_sq += truth * truth;
    }
    let l2 = (sum_sq / n_test as f64).sqrt();
    let exact_l2 = (exact_sq / n_test as f64).sqrt();
    Ok(ErrorReport {
        l_inf,
        l2,
        rel_l2: l2 / exact_l2,
        n_test,
        seed,
    })
}

/// Testing errors for a 1-D fit task at fresh uniform random points.
pub fn evaluate_fit_errors(
    params: &ShallowNetParams,
    task: &PresetTask,
    n_test: usize,
    seed: u64,
) -> Result<ErrorReport> {
    let PresetTask::Fit { minus, plus, lo, hi, split } = task else {
        return Err(Error::InvalidArgument("not a fit task".into()));
    };
    if n_test == 0 {
        return Err(Error::InvalidArgument("need at least one test point".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut l_inf: f64 = 0.0;
    let mut sum_sq = 0.0;
    let mut exact_sq = 0.0;
    for _ in 0..n_test {
        let x = rng.gen_range(*lo..=*hi);
        let xv = DVector::from_vec(vec![x]);
        let (z, truth) = if x <= *split {
            (-1.0, minus.value(&xv))
        } else {
            (1.0, plus.value(&xv))
        };
        let predicted = forward(params, &AugmentedPoint::new(xv, z))?;
        let err = (predicted - truth).abs();
        l_inf = l_inf.max(err);
        sum_sq += err * err;
        exact_sq += truth * truth;
    }
    let l2 = (sum_sq / n_test as f64).sqrt();
    Ok(ErrorReport {
        l_inf,
        l2,
        rel_l2: l2 / (exact_sq / n_test as f64).sqrt(),
        n_test,
        seed,
    })
}

/// Names of the shipped experiment presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PresetName {
    Fit1d,
    Ex1,
    Ex2,
    Ex3,
    Ex4,
    Ex5,
}

impl PresetName {
    pub const ALL: [PresetName; 6] = [
        PresetName::Fit1d,
        PresetName::Ex1,
        PresetName::Ex2,
        PresetName::Ex3,
        PresetName::Ex4,
        PresetName::Ex5,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            PresetName::Fit1d => "fit1d",
            PresetName::Ex1 => "ex1",
            PresetName::Ex2 => "ex2",
            PresetName::Ex3 => "ex3",
            PresetName::Ex4 => "ex4",
            PresetName::Ex5 => "ex5",
        }
    }
}

impl std::str::FromStr for PresetName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fit1d" => Ok(PresetName::Fit1d),
            "ex1" => Ok(PresetName::Ex1),
            "ex2" => Ok(PresetName::Ex2),
            "ex3" => Ok(PresetName::Ex3),
            "ex4" => Ok(PresetName::Ex4),
            "ex5" => Ok(PresetName::Ex5),
            other => Err(Error::UnknownPreset(other.into())),
        }
    }
}

/// What a preset trains: a 1-D fit dataset or an interface problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "task", rename_all = "snake_case")]
pub enum PresetTask {
    Fit {
        minus: Field,
        plus: Field,
        lo: f64,
        hi: f64,
        /// Points with x ≤ split belong to the minus piece.
        split: f64,
    },
    Pde { problem: InterfaceProblem },
}

/// A fully specified experiment configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Preset {
    pub name: PresetName,
    pub dim: usize,
    /// (M, M_b, M_Γ); boundary/interface counts are zero for fit tasks.
    pub counts: (usize, usize, usize),
    pub default_dist: NodeDistribution,
    pub neuron_options: Vec<usize>,
    pub default_neurons: usize,
    pub loss_tol: f64,
    pub default_max_iters: usize,
    pub task: PresetTask,
}

impl Preset {
    pub fn problem(&self) -> Option<&InterfaceProblem> {
        match &self.task {
            PresetTask::Pde { problem } => Some(problem),
            PresetTask::Fit { .. } => None,
        }
    }

    /// Random fit dataset: `m` points including both interval endpoints,
    /// labeled by the split and targeted with the exact piece values.
    pub fn fit_dataset(&self, m: usize, seed: u64) -> Result<Vec<(AugmentedPoint, f64)>> {
        let PresetTask::Fit { minus, plus, lo, hi, split } = &self.task else {
            return Err(Error::InvalidArgument(format!(
                "{} is not a fit preset",
                self.name.as_str()
            )));
        };
        if m < 2 {
            return Err(Error::InvalidArgument("fit dataset needs at least 2 points".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut xs = vec![*lo, *hi];
        xs.extend((0..m - 2).map(|_| rng.gen_range(*lo..=*hi)));
        Ok(xs
            .into_iter()
            .map(|x| {
                let xv = DVector::from_vec(vec![x]);
                let (z, target) = if x <= *split {
                    (-1.0, minus.value(&xv))
                } else {
                    (1.0, plus.value(&xv))
                };
                (AugmentedPoint::new(xv, z), target)
            })
            .collect())
    }
}

fn unit_square() -> Domain {
    Domain::Hypercube { lo: vec![-1.0, -1.0], hi: vec![1.0, 1.0] }
}

/// Look up a shipped preset by name.
pub fn preset(name: PresetName) -> Preset {
    match name {
        PresetName::Fit1d => Preset {
            name,
            dim: 1,
            counts: (100, 0, 0),
            default_dist: NodeDistribution::Random,
            neuron_options: vec![5],
            default_neurons: 5,
            loss_tol: 1e-12,
            // the fit tail converges slowly; the cap is sized for it
            default_max_iters: 30_000,
            task: PresetTask::Fit {
                minus: Field::SinTwoPi,
                plus: Field::CosTwoPi,
                lo: 0.0,
                hi: 1.0,
                split: 0.5,
            },
        },
        PresetName::Ex1 => Preset {
            name,
            dim: 2,
            counts: (64, 32, 32),
            default_dist: NodeDistribution::Chebyshev,
            neuron_options: vec![10, 20],
            default_neurons: 20,
            loss_tol: 1e-10,
            default_max_iters: 2000,
            task: PresetTask::Pde {
                problem: InterfaceProblem::manufactured(
                    LevelSetGeometry::new(unit_square(), Interface::Ellipse { a: 0.2, b: 0.5 })
                        .expect("ex1 geometry"),
                    1.0,
                    1e-3,
                    PiecewiseField { minus: Field::ProdExp, plus: Field::ProdSin },
                )
                .expect("ex1 problem"),
            },
        },
        PresetName::Ex2 => Preset {
            name,
            dim: 2,
            counts: (400, 80, 80),
            default_dist: NodeDistribution::Random,
            neuron_options: vec![50, 100],
            default_neurons: 100,
            loss_tol: 1e-10,
            default_max_iters: 2000,
            task: PresetTask::Pde {
                problem: InterfaceProblem::manufactured(
                    LevelSetGeometry::new(
                        unit_square(),
                        Interface::PolarStar {
                            rho: PolarCurve::new(0.5, 0.0, 1.0 / 7.0, 5),
                        },
                    )
                    .expect("ex2 geometry"),
                    10.0,
                    1.0,
                    PiecewiseField { minus: Field::ExpRadiusSq, plus: Field::QuarticLog },
                )
                .expect("ex2 problem"),
            },
        },
        PresetName::Ex3 => Preset {
            name,
            dim: 2,
            counts: (64, 32, 32),
            default_dist: NodeDistribution::Random,
            neuron_options: vec![20],
            default_neurons: 20,
            loss_tol: 1e-10,
            default_max_iters: 2000,
            task: PresetTask::Pde {
                problem: InterfaceProblem::manufactured(
                    LevelSetGeometry::new(
                        Domain::PolarStar { rho: PolarCurve::new(1.0, -0.3, 0.0, 5) },
                        Interface::PolarStar { rho: PolarCurve::new(0.4, -0.2, 0.0, 5) },
                    )
                    .expect("ex3 geometry"),
                    1.0,
                    1e-3,
                    PiecewiseField { minus: Field::ProdExp, plus: Field::ProdSin },
                )
                .expect("ex3 problem"),
            },
        },
        PresetName::Ex4 => Preset {
            name,
            dim: 3,
            counts: (216, 216, 108),
            default_dist: NodeDistribution::Chebyshev,
            neuron_options: vec![20, 30],
            default_neurons: 30,
            loss_tol: 1e-10,
            default_max_iters: 2000,
            task: PresetTask::Pde {
                problem: InterfaceProblem::manufactured(
                    LevelSetGeometry::new(
                        Domain::Hypercube { lo: vec![-1.0; 3], hi: vec![1.0; 3] },
                        Interface::Ellipsoid { a: 0.7, b: 0.5, c: 0.3 },
                    )
                    .expect("ex4 geometry"),
                    1.0,
                    1e-3,
                    PiecewiseField { minus: Field::ProdExp, plus: Field::ProdSin },
                )
                .expect("ex4 problem"),
            },
        },
        PresetName::Ex5 => Preset {
            name,
            dim: 6,
            counts: (100, 141, 141),
            default_dist: NodeDistribution::Random,
            neuron_options: vec![10, 30, 50],
            default_neurons: 10,
            loss_tol: 1e-10,
            default_max_iters: 2000,
            task: PresetTask::Pde {
                problem: InterfaceProblem::manufactured(
                    LevelSetGeometry::new(
                        Domain::Ball { center: vec![0.0; 6], radius: 0.6 },
                        Interface::Hypersphere { radius: 0.5, dim: 6 },
                    )
                    .expect("ex5 geometry"),
                    1.0,
                    1e-3,
                    PiecewiseField { minus: Field::ProdExp, plus: Field::ProdSin },
                )
                .expect("ex5 problem"),
            },
        },
    }
}
