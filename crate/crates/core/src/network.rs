//! Shallow augmented network: one hidden layer over the input `(x, z)`.
//!
//! The network output is `W2 · σ(W1·(x,z)ᵀ + b1) + b2` with sigmoid
//! activation. Because there is a single hidden layer, the value, spatial
//! derivatives, and all parameter Jacobians have short closed forms; no
//! autodiff engine is used. A finite-difference oracle in the tests guards
//! every analytic derivative here.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Activation function of the hidden layer. Only sigmoid is shipped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Activation {
    #[default]
    Sigmoid,
}

impl Activation {
    #[inline]
    pub fn eval(self, t: f64) -> f64 {
        1.0 / (1.0 + (-t).exp())
    }

    /// σ′(t) = σ(t)(1 − σ(t))
    #[inline]
    pub fn d1(self, t: f64) -> f64 {
        let s = self.eval(t);
        s * (1.0 - s)
    }

    /// σ″(t) = σ′(t)(1 − 2σ(t)); computed from σ′ to avoid cancellation
    /// at large |t|.
    #[inline]
    pub fn d2(self, t: f64) -> f64 {
        let s = self.eval(t);
        s * (1.0 - s) * (1.0 - 2.0 * s)
    }

    /// σ‴(t) = σ″(t)(1 − 2σ(t)) − 2σ′(t)²
    #[inline]
    pub fn d3(self, t: f64) -> f64 {
        let s = self.eval(t);
        let d1 = s * (1.0 - s);
        let d2 = d1 * (1.0 - 2.0 * s);
        d2 * (1.0 - 2.0 * s) - 2.0 * d1 * d1
    }
}

/// A spatial point together with its piece label `z`.
///
/// Training points carry `z = ±1`; arbitrary real `z` is accepted for
/// diagnostic evaluation of the augmented function.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedPoint {
    pub x: DVector<f64>,
    pub z: f64,
}

impl AugmentedPoint {
    pub fn new(x: DVector<f64>, z: f64) -> Self {
        Self { x, z }
    }

    pub fn from_slice(x: &[f64], z: f64) -> Self {
        Self {
            x: DVector::from_column_slice(x),
            z,
        }
    }
}

/// Parameter initialization scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum InitScheme {
    /// All entries i.i.d. uniform on [-1, 1].
    #[default]
    Uniform,
}

/// Weights and biases of the one-hidden-layer augmented network.
///
/// The hidden weight matrix has shape `N × (d+1)`; its last column acts on
/// the label coordinate `z`. The flattened parameter vector has length
/// `N_p = (d+3)·N + 1` in the fixed order: row-major `W1`, then `b1`,
/// then `W2`, then `b2`. The optimizer and Jacobian columns index into
/// this order, so it is part of the public contract.
#[derive(Debug, Clone, PartialEq)]
pub struct ShallowNetParams {
    d: usize,
    n: usize,
    pub w1: DMatrix<f64>,
    pub b1: DVector<f64>,
    pub w2: DVector<f64>,
    pub b2: f64,
    pub activation: Activation,
}

/// JSON checkpoint record for a parameter vector.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParamsRecord {
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub scheme: InitScheme,
    pub flat: Vec<f64>,
}

/// Number of trainable parameters for spatial dimension `d` and `n` neurons.
pub fn param_count(d: usize, n: usize) -> usize {
    (d + 3) * n + 1
}

impl ShallowNetParams {
    pub fn zeros(d: usize, n: usize) -> Result<Self> {
        if d < 1 || n < 1 {
            return Err(Error::InvalidArgument(format!(
                "need d >= 1 and N >= 1, got d={d}, N={n}"
            )));
        }
        Ok(Self {
            d,
            n,
            w1: DMatrix::zeros(n, d + 1),
            b1: DVector::zeros(n),
            w2: DVector::zeros(n),
            b2: 0.0,
            activation: Activation::Sigmoid,
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn neurons(&self) -> usize {
        self.n
    }

    pub fn param_count(&self) -> usize {
        param_count(self.d, self.n)
    }

    /// Flatten into the documented order: row-major W1, b1, W2, b2.
    pub fn flatten(&self) -> DVector<f64> {
        let mut flat = Vec::with_capacity(self.param_count());
        for j in 0..self.n {
            for i in 0..=self.d {
                flat.push(self.w1[(j, i)]);
            }
        }
        flat.extend(self.b1.iter());
        flat.extend(self.w2.iter());
        flat.push(self.b2);
        DVector::from_vec(flat)
    }

    /// Rebuild parameters from a flat vector produced by [`flatten`].
    ///
    /// [`flatten`]: ShallowNetParams::flatten
    pub fn unflatten(d: usize, n: usize, flat: &DVector<f64>) -> Result<Self> {
        let expected = param_count(d, n);
        if flat.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "flat parameter vector has length {}, expected (d+3)N+1 = {expected}",
                flat.len()
            )));
        }
        let mut p = Self::zeros(d, n)?;
        let mut k = 0;
        for j in 0..n {
            for i in 0..=d {
                p.w1[(j, i)] = flat[k];
                k += 1;
            }
        }
        for j in 0..n {
            p.b1[j] = flat[k];
            k += 1;
        }
        for j in 0..n {
            p.w2[j] = flat[k];
            k += 1;
        }
        p.b2 = flat[k];
        Ok(p)
    }

    pub fn to_record(&self, scheme: InitScheme) -> ParamsRecord {
        ParamsRecord {
            d: self.d,
            n: self.n,
            scheme,
            flat: self.flatten().as_slice().to_vec(),
        }
    }

    pub fn from_record(rec: &ParamsRecord) -> Result<Self> {
        Self::unflatten(rec.d, rec.n, &DVector::from_column_slice(&rec.flat))
    }

    fn check_point(&self, pt: &AugmentedPoint) -> Result<()> {
        if pt.x.len() != self.d {
            return Err(Error::DimensionMismatch(format!(
                "point has dimension {}, network expects {}",
                pt.x.len(),
                self.d
            )));
        }
        Ok(())
    }

    /// Hidden-layer preactivations h = W1·(x,z)ᵀ + b1.
    fn preactivation(&self, pt: &AugmentedPoint) -> DVector<f64> {
        let mut h = self.b1.clone();
        for j in 0..self.n {
            let mut acc = 0.0;
            for i in 0..self.d {
                acc += self.w1[(j, i)] * pt.x[i];
            }
            acc += self.w1[(j, self.d)] * pt.z;
            h[j] += acc;
        }
        h
    }
}

/// Which quantity a parameter Jacobian differentiates.
#[derive(Debug, Clone)]
pub enum JacobianTarget<'a> {
    /// The network value φ_aug(x, z).
    Value,
    /// The spatial Laplacian Δ_x φ_aug (z excluded).
    Laplacian,
    /// The spatial normal derivative ∇_x φ_aug · n, one unit normal per point.
    NormalDerivative(&'a [DVector<f64>]),
}

/// Evaluate the network at an augmented point.
pub fn forward(params: &ShallowNetParams, pt: &AugmentedPoint) -> Result<f64> {
    params.check_point(pt)?;
    let h = params.preactivation(pt);
    let act = params.activation;
    let mut out = params.b2;
    for j in 0..params.n {
        out += params.w2[j] * act.eval(h[j]);
    }
    Ok(out)
}

/// Gradient of the network with respect to its d+1 inputs.
///
/// The first `d` entries form ∇_x; the last entry is ∂/∂z, kept for
/// diagnostics.
pub fn spatial_gradient(params: &ShallowNetParams, pt: &AugmentedPoint) -> Result<DVector<f64>> {
    params.check_point(pt)?;
    let h = params.preactivation(pt);
    let act = params.activation;
    let mut grad = DVector::zeros(params.d + 1);
    for j in 0..params.n {
        let c = params.w2[j] * act.d1(h[j]);
        for i in 0..=params.d {
            grad[i] += c * params.w1[(j, i)];
        }
    }
    Ok(grad)
}

/// Laplacian over the `d` spatial coordinates only; the z column of W1
/// contributes nothing.
pub fn spatial_laplacian(params: &ShallowNetParams, pt: &AugmentedPoint) -> Result<f64> {
    params.check_point(pt)?;
    let h = params.preactivation(pt);
    let act = params.activation;
    let mut lap = 0.0;
    for j in 0..params.n {
        let s2: f64 = (0..params.d).map(|i| params.w1[(j, i)].powi(2)).sum();
        lap += params.w2[j] * act.d2(h[j]) * s2;
    }
    Ok(lap)
}

/// Spatial normal derivative ∇_x φ_aug · n.
pub fn normal_derivative(
    params: &ShallowNetParams,
    pt: &AugmentedPoint,
    normal: &DVector<f64>,
) -> Result<f64> {
    params.check_point(pt)?;
    if normal.len() != params.d {
        return Err(Error::DimensionMismatch(format!(
            "normal has dimension {}, expected {}",
            normal.len(),
            params.d
        )));
    }
    let grad = spatial_gradient(params, pt)?;
    Ok((0..params.d).map(|i| grad[i] * normal[i]).sum())
}

/// Closed-form parameter Jacobian of the selected quantity at each point.
///
/// Row `i`, column `k` is the partial derivative of the quantity at
/// `pts[i]` with respect to flattened parameter `k`. Rows are independent
/// and computed in parallel; the result does not depend on the schedule.
pub fn param_jacobian(
    params: &ShallowNetParams,
    pts: &[AugmentedPoint],
    target: &JacobianTarget,
) -> Result<DMatrix<f64>> {
    for pt in pts {
        params.check_point(pt)?;
    }
    if let JacobianTarget::NormalDerivative(normals) = target {
        if normals.len() != pts.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} normals for {} points",
                normals.len(),
                pts.len()
            )));
        }
        for n in normals.iter() {
            if n.len() != params.d {
                return Err(Error::DimensionMismatch(format!(
                    "normal has dimension {}, expected {}",
                    n.len(),
                    params.d
                )));
            }
        }
    }

    let np = params.param_count();
    let rows: Vec<Vec<f64>> = pts
        .par_iter()
        .enumerate()
        .map(|(i, pt)| match target {
            JacobianTarget::Value => value_row(params, pt),
            JacobianTarget::Laplacian => laplacian_row(params, pt),
            JacobianTarget::NormalDerivative(normals) => normal_row(params, pt, &normals[i]),
        })
        .collect();

    let mut jac = DMatrix::zeros(pts.len(), np);
    for (i, row) in rows.iter().enumerate() {
        for (k, v) in row.iter().enumerate() {
            jac[(i, k)] = *v;
        }
    }
    Ok(jac)
}

// Column layout mirrors the flattening order. For neuron j:
//   W1 row j occupies columns j(d+1) .. j(d+1)+d,
//   b1_j is at N(d+1)+j, W2_j at N(d+2)+j, b2 at N(d+3).
fn value_row(p: &ShallowNetParams, pt: &AugmentedPoint) -> Vec<f64> {
    let (d, n, act) = (p.d, p.n, p.activation);
    let h = p.preactivation(pt);
    let mut row = vec![0.0; p.param_count()];
    for j in 0..n {
        let s = act.eval(h[j]);
        let ds = act.d1(h[j]);
        let c = p.w2[j] * ds;
        let base = j * (d + 1);
        for i in 0..d {
            row[base + i] = c * pt.x[i];
        }
        row[base + d] = c * pt.z;
        row[n * (d + 1) + j] = c;
        row[n * (d + 2) + j] = s;
    }
    row[n * (d + 3)] = 1.0;
    row
}

fn laplacian_row(p: &ShallowNetParams, pt: &AugmentedPoint) -> Vec<f64> {
    let (d, n, act) = (p.d, p.n, p.activation);
    let h = p.preactivation(pt);
    let mut row = vec![0.0; p.param_count()];
    for j in 0..n {
        let d2 = act.d2(h[j]);
        let d3 = act.d3(h[j]);
        // sum of squared spatial weights of neuron j
        let s2: f64 = (0..d).map(|i| p.w1[(j, i)].powi(2)).sum();
        let base = j * (d + 1);
        for i in 0..d {
            row[base + i] = p.w2[j] * (d3 * pt.x[i] * s2 + 2.0 * d2 * p.w1[(j, i)]);
        }
        row[base + d] = p.w2[j] * d3 * pt.z * s2;
        row[n * (d + 1) + j] = p.w2[j] * d3 * s2;
        row[n * (d + 2) + j] = d2 * s2;
    }
    row
}

fn normal_row(p: &ShallowNetParams, pt: &AugmentedPoint, normal: &DVector<f64>) -> Vec<f64> {
    let (d, n, act) = (p.d, p.n, p.activation);
    let h = p.preactivation(pt);
    let mut row = vec![0.0; p.param_count()];
    for j in 0..n {
        let d1 = act.d1(h[j]);
        let d2 = act.d2(h[j]);
        // spatial weight row of neuron j projected on the normal
        let a: f64 = (0..d).map(|i| p.w1[(j, i)] * normal[i]).sum();
        let base = j * (d + 1);
        for i in 0..d {
            row[base + i] = p.w2[j] * (d2 * pt.x[i] * a + d1 * normal[i]);
        }
        row[base + d] = p.w2[j] * d2 * pt.z * a;
        row[n * (d + 1) + j] = p.w2[j] * d2 * a;
        row[n * (d + 2) + j] = d1 * a;
    }
    row
}

/// Reproducible random initialization.
pub fn init_params(d: usize, n: usize, seed: u64, scheme: InitScheme) -> Result<ShallowNetParams> {
    if d < 1 || n < 1 {
        return Err(Error::InvalidArgument(format!(
            "need d >= 1 and N >= 1, got d={d}, N={n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let np = param_count(d, n);
    let flat: Vec<f64> = match scheme {
        InitScheme::Uniform => (0..np).map(|_| rng.gen_range(-1.0..=1.0)).collect(),
    };
    ShallowNetParams::unflatten(d, n, &DVector::from_vec(flat))
}
