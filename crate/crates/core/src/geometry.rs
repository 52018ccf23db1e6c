//! Domains, interfaces, point classification, and collocation sampling.
//!
//! Geometry is described by a signed level-set value ψ: negative inside
//! the interface (Ω⁻), positive outside (Ω⁺), zero on Γ. All shipped
//! presets keep the origin in Ω⁻. Interface normals are the normalized
//! level-set gradient, which points from Ω⁻ to Ω⁺.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::network::AugmentedPoint;

/// Truncated Fourier polar radius ρ(θ) = base + cos_amp·cos(kθ) + sin_amp·sin(kθ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarCurve {
    pub base: f64,
    pub cos_amp: f64,
    pub sin_amp: f64,
    pub freq: u32,
}

impl PolarCurve {
    pub fn new(base: f64, cos_amp: f64, sin_amp: f64, freq: u32) -> Self {
        Self { base, cos_amp, sin_amp, freq }
    }

    pub fn rho(&self, theta: f64) -> f64 {
        let k = self.freq as f64;
        self.base + self.cos_amp * (k * theta).cos() + self.sin_amp * (k * theta).sin()
    }

    pub fn drho(&self, theta: f64) -> f64 {
        let k = self.freq as f64;
        -self.cos_amp * k * (k * theta).sin() + self.sin_amp * k * (k * theta).cos()
    }

    pub fn max_radius(&self) -> f64 {
        self.base + self.cos_amp.abs() + self.sin_amp.abs()
    }
}

/// The computational domain Ω.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain {
    Hypercube { lo: Vec<f64>, hi: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
    /// Star-shaped planar domain r ≤ ρ(θ), centered at the origin.
    PolarStar { rho: PolarCurve },
}

impl Domain {
    pub fn dim(&self) -> usize {
        match self {
            Domain::Hypercube { lo, .. } => lo.len(),
            Domain::Ball { center, .. } => center.len(),
            Domain::PolarStar { .. } => 2,
        }
    }

    pub fn contains(&self, x: &DVector<f64>) -> bool {
        match self {
            Domain::Hypercube { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi.iter()))
                .all(|(&xi, (&l, &h))| xi >= l && xi <= h),
            Domain::Ball { center, radius } => {
                let c = DVector::from_column_slice(center);
                (x - c).norm() <= *radius
            }
            Domain::PolarStar { rho } => {
                let r = x.norm();
                r <= rho.rho(x[1].atan2(x[0]))
            }
        }
    }

    /// Axis-aligned box enclosing the domain, used by rejection samplers.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        match self {
            Domain::Hypercube { lo, hi } => (lo.clone(), hi.clone()),
            Domain::Ball { center, radius } => (
                center.iter().map(|c| c - radius).collect(),
                center.iter().map(|c| c + radius).collect(),
            ),
            Domain::PolarStar { rho } => {
                let r = rho.max_radius();
                (vec![-r, -r], vec![r, r])
            }
        }
    }

    /// Distance-like residual that vanishes exactly on ∂Ω.
    pub fn boundary_residual(&self, x: &DVector<f64>) -> f64 {
        match self {
            Domain::Hypercube { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi.iter()))
                .map(|(&xi, (&l, &h))| (xi - l).abs().min((xi - h).abs()))
                .fold(f64::INFINITY, f64::min),
            Domain::Ball { center, radius } => {
                let c = DVector::from_column_slice(center);
                ((x - c).norm() - radius).abs()
            }
            Domain::PolarStar { rho } => {
                let r = x.norm();
                (r - rho.rho(x[1].atan2(x[0]))).abs()
            }
        }
    }
}

/// The embedded interface Γ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Interface {
    Ellipse { a: f64, b: f64 },
    Ellipsoid { a: f64, b: f64, c: f64 },
    PolarStar { rho: PolarCurve },
    Hypersphere { radius: f64, dim: usize },
}

impl Interface {
    pub fn dim(&self) -> usize {
        match self {
            Interface::Ellipse { .. } | Interface::PolarStar { .. } => 2,
            Interface::Ellipsoid { .. } => 3,
            Interface::Hypersphere { dim, .. } => *dim,
        }
    }
}

/// Which side of the interface a point lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    Inside,
    Outside,
}

impl Region {
    /// Label coordinate fed to the network: −1 in Ω⁻, +1 in Ω⁺.
    pub fn z(self) -> f64 {
        match self {
            Region::Inside => -1.0,
            Region::Outside => 1.0,
        }
    }
}

/// Domain plus interface with level-set queries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSetGeometry {
    pub domain: Domain,
    pub interface: Interface,
}

impl LevelSetGeometry {
    pub fn new(domain: Domain, interface: Interface) -> Result<Self> {
        if domain.dim() != interface.dim() {
            return Err(Error::DimensionMismatch(format!(
                "domain dimension {} != interface dimension {}",
                domain.dim(),
                interface.dim()
            )));
        }
        Ok(Self { domain, interface })
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    /// Signed level-set value: negative in Ω⁻, positive in Ω⁺, zero on Γ.
    pub fn psi(&self, x: &DVector<f64>) -> f64 {
        match &self.interface {
            Interface::Ellipse { a, b } => (x[0] / a).powi(2) + (x[1] / b).powi(2) - 1.0,
            Interface::Ellipsoid { a, b, c } => {
                (x[0] / a).powi(2) + (x[1] / b).powi(2) + (x[2] / c).powi(2) - 1.0
            }
            Interface::PolarStar { rho } => x.norm() - rho.rho(x[1].atan2(x[0])),
            Interface::Hypersphere { radius, .. } => x.norm() - radius,
        }
    }

    /// Analytic gradient of ψ; points from Ω⁻ toward Ω⁺.
    pub fn psi_gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        match &self.interface {
            Interface::Ellipse { a, b } => {
                DVector::from_vec(vec![2.0 * x[0] / (a * a), 2.0 * x[1] / (b * b)])
            }
            Interface::Ellipsoid { a, b, c } => DVector::from_vec(vec![
                2.0 * x[0] / (a * a),
                2.0 * x[1] / (b * b),
                2.0 * x[2] / (c * c),
            ]),
            Interface::PolarStar { rho } => {
                let r = x.norm();
                let theta = x[1].atan2(x[0]);
                let dr = rho.drho(theta);
                // ∇θ = (−x₂, x₁)/r²
                DVector::from_vec(vec![
                    x[0] / r + dr * x[1] / (r * r),
                    x[1] / r - dr * x[0] / (r * r),
                ])
            }
            Interface::Hypersphere { .. } => {
                let r = x.norm();
                x / r
            }
        }
    }

    /// Unit outward normal (Ω⁻ → Ω⁺) at a point on or near Γ.
    pub fn interface_normal(&self, x: &DVector<f64>) -> DVector<f64> {
        let g = self.psi_gradient(x);
        let n = g.norm();
        g / n
    }

    /// Classify a point of the closed domain. ψ = 0 counts as inside,
    /// matching the convention that values on Γ are taken from Ω⁻.
    pub fn classify(&self, x: &DVector<f64>) -> Result<Region> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "point has dimension {}, geometry expects {}",
                x.len(),
                self.dim()
            )));
        }
        if !self.domain.contains(x) {
            return Err(Error::InvalidArgument(format!(
                "point {:?} lies outside the domain",
                x.as_slice()
            )));
        }
        Ok(if self.psi(x) <= 0.0 {
            Region::Inside
        } else {
            Region::Outside
        })
    }

    /// Check (by parametric sampling) that Γ lies strictly inside Ω.
    pub fn interface_strictly_inside(&self, samples: usize, seed: u64) -> bool {
        match sample_interface(self, samples, seed) {
            Ok(pts) => pts.iter().all(|p| {
                self.domain.contains(&p.x) && self.domain.boundary_residual(&p.x) > 1e-9
            }),
            Err(_) => false,
        }
    }
}

/// Interface collocation point with its unit outward normal.
#[derive(Debug, Clone, PartialEq)]
pub struct InterfacePoint {
    pub x: DVector<f64>,
    pub normal: DVector<f64>,
}

/// Labeled training points: interior (with z), boundary, interface (with
/// normals).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CollocationSet {
    pub interior: Vec<AugmentedPoint>,
    pub boundary: Vec<DVector<f64>>,
    pub interface: Vec<InterfacePoint>,
}

impl CollocationSet {
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.interior.len(), self.boundary.len(), self.interface.len())
    }

    /// Verify the set's invariants against its geometry: label
    /// consistency, boundary residual ≤ 1e−12, interface residual ≤ 1e−10,
    /// unit outward normals.
    pub fn validate(&self, geom: &LevelSetGeometry) -> Result<()> {
        for pt in &self.interior {
            let region = geom.classify(&pt.x)?;
            if region.z() != pt.z {
                return Err(Error::InvalidArgument(format!(
                    "interior point {:?} labeled z={} but classifies as {:?}",
                    pt.x.as_slice(),
                    pt.z,
                    region
                )));
            }
        }
        for x in &self.boundary {
            let res = geom.domain.boundary_residual(x);
            if res > 1e-12 {
                return Err(Error::InvalidArgument(format!(
                    "boundary point {:?} has residual {res:e}",
                    x.as_slice()
                )));
            }
        }
        for p in &self.interface {
            let psi = geom.psi(&p.x);
            if psi.abs() > 1e-10 {
                return Err(Error::InvalidArgument(format!(
                    "interface point {:?} has ψ = {psi:e}",
                    p.x.as_slice()
                )));
            }
            if (p.normal.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidArgument("interface normal is not unit".into()));
            }
            let eps = 1e-6;
            let shifted = &p.x + &p.normal * eps;
            if geom.psi(&shifted) <= 0.0 {
                return Err(Error::InvalidArgument(
                    "interface normal does not point toward Ω⁺".into(),
                ));
            }
        }
        Ok(())
    }

    /// One row per point: role, coordinates, then z (interior) or normal
    /// components (interface).
    pub fn to_csv(&self) -> String {
        let d = self
            .interior
            .first()
            .map(|p| p.x.len())
            .or_else(|| self.boundary.first().map(|x| x.len()))
            .or_else(|| self.interface.first().map(|p| p.x.len()))
            .unwrap_or(0);
        let mut out = String::from("role");
        for i in 1..=d {
            out.push_str(&format!(",x{i}"));
        }
        out.push_str(",z");
        for i in 1..=d {
            out.push_str(&format!(",n{i}"));
        }
        out.push('\n');
        let coords = |x: &DVector<f64>| {
            x.iter().map(|v| format!(",{v}")).collect::<String>()
        };
        let blanks = |k: usize| ",".repeat(k);
        for p in &self.interior {
            out.push_str(&format!("interior{},{}{}\n", coords(&p.x), p.z, blanks(d)));
        }
        for x in &self.boundary {
            out.push_str(&format!("boundary{},{}\n", coords(x), blanks(d)));
        }
        for p in &self.interface {
            out.push_str(&format!("interface{},{}\n", coords(&p.x), coords(&p.normal)));
        }
        out
    }
}

/// How collocation nodes are laid out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum NodeDistribution {
    Chebyshev,
    Uniform,
    #[default]
    Random,
}

/// Chebyshev points of the first kind mapped to [lo, hi], increasing.
pub fn chebyshev_nodes(m: usize, lo: f64, hi: f64) -> Vec<f64> {
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    // k = m..1 gives increasing order since cos decreases on [0, π].
    (1..=m)
        .rev()
        .map(|k| mid + half * ((2 * k - 1) as f64 * PI / (2 * m) as f64).cos())
        .collect()
}

/// Midpoint-shifted equispaced interior nodes on [lo, hi].
pub fn uniform_interior_nodes(m: usize, lo: f64, hi: f64) -> Vec<f64> {
    let h = (hi - lo) / m as f64;
    (1..=m).map(|k| lo + (k as f64 - 0.5) * h).collect()
}

fn dth_root(m: usize, d: usize) -> Option<usize> {
    let q = (m as f64).powf(1.0 / d as f64).round() as usize;
    for cand in q.saturating_sub(1)..=q + 1 {
        if cand >= 1 && cand.pow(d as u32) == m {
            return Some(cand);
        }
    }
    None
}

fn axis_nodes(dist: NodeDistribution, m: usize, lo: f64, hi: f64) -> Vec<f64> {
    match dist {
        NodeDistribution::Chebyshev => chebyshev_nodes(m, lo, hi),
        NodeDistribution::Uniform => uniform_interior_nodes(m, lo, hi),
        NodeDistribution::Random => unreachable!("random has no axis grid"),
    }
}

/// Tensor product of per-axis node lists, first axis slowest.
fn tensor_grid(axes: &[Vec<f64>]) -> Vec<DVector<f64>> {
    let total: usize = axes.iter().map(|a| a.len()).product();
    let mut out = Vec::with_capacity(total);
    for mut idx in 0..total {
        let mut coords = vec![0.0; axes.len()];
        for (i, axis) in axes.iter().enumerate().rev() {
            coords[i] = axis[idx % axis.len()];
            idx /= axis.len();
        }
        out.push(DVector::from_vec(coords));
    }
    out
}

fn uniform_in_box(lo: &[f64], hi: &[f64], rng: &mut ChaCha8Rng) -> DVector<f64> {
    DVector::from_fn(lo.len(), |i, _| rng.gen_range(lo[i]..=hi[i]))
}

fn unit_sphere_point(d: usize, rng: &mut ChaCha8Rng) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal));
        let n = v.norm();
        if n > 1e-8 {
            return v / n;
        }
    }
}

/// Interior collocation points labeled by region.
///
/// Grid distributions build a tensor-product grid on a hypercube (m must
/// be a d-th power); random draws are uniform over the domain via
/// rejection from the bounding box.
pub fn sample_interior(
    geom: &LevelSetGeometry,
    m: usize,
    dist: NodeDistribution,
    seed: u64,
) -> Result<Vec<AugmentedPoint>> {
    if m < 1 {
        return Err(Error::InvalidArgument("need at least one interior point".into()));
    }
    let d = geom.dim();
    let points: Vec<DVector<f64>> = match dist {
        NodeDistribution::Random => {
            let (lo, hi) = geom.domain.bounding_box();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut pts = Vec::with_capacity(m);
            while pts.len() < m {
                let x = uniform_in_box(&lo, &hi, &mut rng);
                if geom.domain.contains(&x) {
                    pts.push(x);
                }
            }
            pts
        }
        NodeDistribution::Chebyshev | NodeDistribution::Uniform => {
            let Domain::Hypercube { lo, hi } = &geom.domain else {
                return Err(Error::InvalidArgument(
                    "grid distributions require a hypercube domain".into(),
                ));
            };
            let q = dth_root(m, d).ok_or_else(|| {
                Error::InvalidArgument(format!("M = {m} is not a {d}-th power for a tensor grid"))
            })?;
            let axes: Vec<Vec<f64>> = (0..d)
                .map(|i| axis_nodes(dist, q, lo[i], hi[i]))
                .collect();
            tensor_grid(&axes)
        }
    };
    points
        .into_iter()
        .map(|x| {
            let z = geom.classify(&x)?.z();
            Ok(AugmentedPoint::new(x, z))
        })
        .collect()
}

/// Boundary collocation points on ∂Ω.
pub fn sample_boundary(
    geom: &LevelSetGeometry,
    m_b: usize,
    dist: NodeDistribution,
    seed: u64,
) -> Result<Vec<DVector<f64>>> {
    if m_b < 1 {
        return Err(Error::InvalidArgument("need at least one boundary point".into()));
    }
    let d = geom.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match &geom.domain {
        Domain::Hypercube { lo, hi } => {
            let faces = 2 * d;
            match dist {
                NodeDistribution::Random => {
                    let mut pts = Vec::with_capacity(m_b);
                    for _ in 0..m_b {
                        let face = rng.gen_range(0..faces);
                        let axis = face / 2;
                        let mut x = uniform_in_box(lo, hi, &mut rng);
                        x[axis] = if face % 2 == 0 { lo[axis] } else { hi[axis] };
                        pts.push(x);
                    }
                    Ok(pts)
                }
                NodeDistribution::Chebyshev | NodeDistribution::Uniform => {
                    if m_b % faces != 0 {
                        return Err(Error::InvalidArgument(format!(
                            "M_b = {m_b} is not divisible by the {faces} faces"
                        )));
                    }
                    let per_face = m_b / faces;
                    let q = if d == 1 {
                        if per_face != 1 {
                            return Err(Error::InvalidArgument(
                                "1-D domains have a single point per face".into(),
                            ));
                        }
                        1
                    } else {
                        dth_root(per_face, d - 1).ok_or_else(|| {
                            Error::InvalidArgument(format!(
                                "{per_face} points per face is not a ({})-th power",
                                d - 1
                            ))
                        })?
                    };
                    let mut pts = Vec::with_capacity(m_b);
                    for axis in 0..d {
                        let free: Vec<usize> = (0..d).filter(|&i| i != axis).collect();
                        let axes: Vec<Vec<f64>> = free
                            .iter()
                            .map(|&i| axis_nodes(dist, q, lo[i], hi[i]))
                            .collect();
                        let face_grid = if free.is_empty() {
                            vec![DVector::zeros(0)]
                        } else {
                            tensor_grid(&axes)
                        };
                        for &val in &[lo[axis], hi[axis]] {
                            for g in &face_grid {
                                let mut x = DVector::zeros(d);
                                x[axis] = val;
                                for (slot, &i) in free.iter().enumerate() {
                                    x[i] = g[slot];
                                }
                                pts.push(x);
                            }
                        }
                    }
                    Ok(pts)
                }
            }
        }
        Domain::Ball { center, radius } => {
            let c = DVector::from_column_slice(center);
            match dist {
                NodeDistribution::Random => Ok((0..m_b)
                    .map(|_| &c + unit_sphere_point(d, &mut rng) * *radius)
                    .collect()),
                NodeDistribution::Uniform | NodeDistribution::Chebyshev if d == 2 => {
                    // Equispaced angles starting at θ = 0.
                    Ok((0..m_b)
                        .map(|k| {
                            let theta = 2.0 * PI * k as f64 / m_b as f64;
                            &c + DVector::from_vec(vec![
                                radius * theta.cos(),
                                radius * theta.sin(),
                            ])
                        })
                        .collect())
                }
                _ => Err(Error::InvalidArgument(
                    "grid boundary nodes on a ball are only defined in 2-D".into(),
                )),
            }
        }
        Domain::PolarStar { rho } => {
            let thetas: Vec<f64> = match dist {
                NodeDistribution::Random => {
                    (0..m_b).map(|_| rng.gen_range(0.0..2.0 * PI)).collect()
                }
                NodeDistribution::Uniform | NodeDistribution::Chebyshev => {
                    (0..m_b).map(|k| 2.0 * PI * k as f64 / m_b as f64).collect()
                }
            };
            Ok(thetas
                .into_iter()
                .map(|t| {
                    let r = rho.rho(t);
                    DVector::from_vec(vec![r * t.cos(), r * t.sin()])
                })
                .collect())
        }
    }
}

/// Random interface points with unit outward normals.
///
/// Curves sample θ uniformly in parameter (not arclength); hyperspheres
/// sample uniformly on the sphere; the ellipsoid maps uniform spherical
/// pre-images through its semi-axes. Normals are ∇ψ/‖∇ψ‖.
pub fn sample_interface(
    geom: &LevelSetGeometry,
    m_gamma: usize,
    seed: u64,
) -> Result<Vec<InterfacePoint>> {
    if m_gamma < 1 {
        return Err(Error::InvalidArgument("need at least one interface point".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<DVector<f64>> = match &geom.interface {
        Interface::Ellipse { a, b } => (0..m_gamma)
            .map(|_| {
                let t = rng.gen_range(0.0..2.0 * PI);
                DVector::from_vec(vec![a * t.cos(), b * t.sin()])
            })
            .collect(),
        Interface::Ellipsoid { a, b, c } => (0..m_gamma)
            .map(|_| {
                let u = unit_sphere_point(3, &mut rng);
                DVector::from_vec(vec![a * u[0], b * u[1], c * u[2]])
            })
            .collect(),
        Interface::PolarStar { rho } => (0..m_gamma)
            .map(|_| {
                let t = rng.gen_range(0.0..2.0 * PI);
                let r = rho.rho(t);
                DVector::from_vec(vec![r * t.cos(), r * t.sin()])
            })
            .collect(),
        Interface::Hypersphere { radius, dim } => (0..m_gamma)
            .map(|_| unit_sphere_point(*dim, &mut rng) * *radius)
            .collect(),
    };
    Ok(pts
        .into_iter()
        .map(|x| {
            let normal = geom.interface_normal(&x);
            InterfacePoint { x, normal }
        })
        .collect())
}

/// Sample a full collocation set in one call.
pub fn sample_collocation(
    geom: &LevelSetGeometry,
    m: usize,
    m_b: usize,
    m_gamma: usize,
    dist: NodeDistribution,
    seed: u64,
) -> Result<CollocationSet> {
    // Distinct streams per role so counts in one role do not shift another.
    Ok(CollocationSet {
        interior: sample_interior(geom, m, dist, seed)?,
        boundary: sample_boundary(geom, m_b, dist, seed.wrapping_add(1))?,
        interface: sample_interface(geom, m_gamma, seed.wrapping_add(2))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn ellipse_geom() -> LevelSetGeometry {
        LevelSetGeometry::new(
            Domain::Hypercube { lo: vec![-1.0, -1.0], hi: vec![1.0, 1.0] },
            Interface::Ellipse { a: 0.2, b: 0.5 },
        )
        .unwrap()
    }

    #[test]
    fn classify_ellipse_cases() {
        let g = ellipse_geom();
        let center = DVector::from_vec(vec![0.0, 0.0]);
        assert_eq!(g.classify(&center).unwrap(), Region::Inside);
        let corner = DVector::from_vec(vec![0.9, 0.9]);
        assert_eq!(g.classify(&corner).unwrap(), Region::Outside);
        // On Γ: the value belongs to Ω⁻.
        let on_gamma = DVector::from_vec(vec![0.2, 0.0]);
        assert_eq!(g.classify(&on_gamma).unwrap(), Region::Inside);
        // Outside the domain is an error.
        let far = DVector::from_vec(vec![2.0, 0.0]);
        assert!(g.classify(&far).is_err());
    }

    #[test]
    fn chebyshev_small_cases() {
        let one = chebyshev_nodes(1, -1.0, 1.0);
        assert_relative_eq!(one[0], 0.0, epsilon = 1e-15);
        let two = chebyshev_nodes(2, -1.0, 1.0);
        assert_relative_eq!(two[0], -std::f64::consts::FRAC_1_SQRT_2, max_relative = 1e-15);
        assert_relative_eq!(two[1], std::f64::consts::FRAC_1_SQRT_2, max_relative = 1e-15);
    }

    #[test]
    fn chebyshev_matches_cosine_formula() {
        let nodes = chebyshev_nodes(8, -1.0, 1.0);
        let mut expect: Vec<f64> = (1..=8)
            .map(|k| ((2 * k - 1) as f64 * PI / 16.0).cos())
            .collect();
        expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (n, e) in nodes.iter().zip(expect.iter()) {
            assert_relative_eq!(n, e, epsilon = 1e-15);
        }
        assert!(nodes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn chebyshev_nodes_are_symmetric() {
        for m in [3, 5, 8, 13] {
            let nodes = chebyshev_nodes(m, -1.0, 1.0);
            for k in 0..m {
                assert_relative_eq!(nodes[k], -nodes[m - 1 - k], epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn interior_chebyshev_grid_on_square() {
        let g = ellipse_geom();
        let pts = sample_interior(&g, 64, NodeDistribution::Chebyshev, 0).unwrap();
        assert_eq!(pts.len(), 64);
        let axis = chebyshev_nodes(8, -1.0, 1.0);
        // Every coordinate must be one of the 8 per-axis nodes.
        for p in &pts {
            for &c in p.x.iter() {
                assert!(axis.iter().any(|&a| (a - c).abs() < 1e-14));
            }
        }
        // Labels agree with classification.
        for p in &pts {
            assert_eq!(g.classify(&p.x).unwrap().z(), p.z);
        }
    }

    #[test]
    fn interior_grid_requires_dth_power() {
        let g = ellipse_geom();
        assert!(sample_interior(&g, 63, NodeDistribution::Chebyshev, 0).is_err());
        assert!(sample_interior(&g, 63, NodeDistribution::Random, 0).is_ok());
    }

    #[test]
    fn random_interior_stays_in_ball() {
        let g = LevelSetGeometry::new(
            Domain::Ball { center: vec![0.0; 3], radius: 0.8 },
            Interface::Hypersphere { radius: 0.4, dim: 3 },
        )
        .unwrap();
        let pts = sample_interior(&g, 100, NodeDistribution::Random, 5).unwrap();
        assert_eq!(pts.len(), 100);
        for p in &pts {
            assert!(p.x.norm() < 0.8);
        }
    }

    #[test]
    fn rejection_acceptance_matches_area_ratio() {
        // Monte-Carlo oracle: area(Ω)/area(box) for ρ(θ) = 1 − 0.3cos(5θ)
        // equals (base² + amp²/2)·π / (2·max)² by the polar area formula.
        let rho = PolarCurve::new(1.0, -0.3, 0.0, 5);
        let g = LevelSetGeometry::new(
            Domain::PolarStar { rho },
            Interface::PolarStar { rho: PolarCurve::new(0.4, -0.2, 0.0, 5) },
        )
        .unwrap();
        let area = PI * (1.0f64.powi(2) + 0.3f64.powi(2) / 2.0) / 2.0 * 2.0;
        let box_area = (2.0 * rho.max_radius()).powi(2);
        let p_accept = area / box_area;

        let trials = 100_000usize;
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let (lo, hi) = g.domain.bounding_box();
        let mut accepted = 0usize;
        for _ in 0..trials {
            let x = uniform_in_box(&lo, &hi, &mut rng);
            if g.domain.contains(&x) {
                accepted += 1;
            }
        }
        let p_hat = accepted as f64 / trials as f64;
        let sigma = (p_accept * (1.0 - p_accept) / trials as f64).sqrt();
        assert!(
            (p_hat - p_accept).abs() < 3.0 * sigma,
            "acceptance {p_hat} vs expected {p_accept} (3σ = {:e})",
            3.0 * sigma
        );
        // Acceptance stays comfortably above the termination floor.
        assert!(p_accept > 0.2);
    }

    #[test]
    fn square_boundary_grid_counts() {
        let g = ellipse_geom();
        let pts = sample_boundary(&g, 32, NodeDistribution::Uniform, 0).unwrap();
        assert_eq!(pts.len(), 32);
        for x in &pts {
            let max_norm = x.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
            assert_eq!(max_norm, 1.0);
        }
        // 8 per edge.
        let left = pts.iter().filter(|x| x[0] == -1.0).count();
        assert_eq!(left, 8);
    }

    #[test]
    fn six_ball_boundary_norms() {
        let g = LevelSetGeometry::new(
            Domain::Ball { center: vec![0.0; 6], radius: 0.6 },
            Interface::Hypersphere { radius: 0.5, dim: 6 },
        )
        .unwrap();
        let pts = sample_boundary(&g, 141, NodeDistribution::Random, 3).unwrap();
        assert_eq!(pts.len(), 141);
        for x in &pts {
            assert_relative_eq!(x.norm(), 0.6, epsilon = 1e-12);
        }
    }

    #[test]
    fn circle_boundary_equispaced_angles() {
        let g = LevelSetGeometry::new(
            Domain::Ball { center: vec![0.0, 0.0], radius: 1.0 },
            Interface::Ellipse { a: 0.2, b: 0.5 },
        )
        .unwrap();
        let pts = sample_boundary(&g, 4, NodeDistribution::Uniform, 0).unwrap();
        let expect = [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]];
        for (p, e) in pts.iter().zip(expect.iter()) {
            assert_relative_eq!(p[0], e[0], epsilon = 1e-15);
            assert_relative_eq!(p[1], e[1], epsilon = 1e-15);
        }
    }

    #[test]
    fn hypersphere_interface_normals_are_radial() {
        let g = LevelSetGeometry::new(
            Domain::Ball { center: vec![0.0; 6], radius: 0.6 },
            Interface::Hypersphere { radius: 0.5, dim: 6 },
        )
        .unwrap();
        let pts = sample_interface(&g, 30, 7).unwrap();
        for p in &pts {
            let radial = &p.x / p.x.norm();
            assert_relative_eq!(p.normal, radial, epsilon = 1e-12);
        }
    }

    #[test]
    fn ellipse_axis_point_normal() {
        let g = ellipse_geom();
        let x = DVector::from_vec(vec![0.2, 0.0]);
        let n = g.interface_normal(&x);
        assert_relative_eq!(n[0], 1.0, epsilon = 1e-15);
        assert_relative_eq!(n[1], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn polar_star_normals_match_finite_differences() {
        let g = LevelSetGeometry::new(
            Domain::Hypercube { lo: vec![-1.0, -1.0], hi: vec![1.0, 1.0] },
            Interface::PolarStar { rho: PolarCurve::new(0.4, -0.2, 0.0, 5) },
        )
        .unwrap();
        let pts = sample_interface(&g, 50, 11).unwrap();
        let h = 1e-6;
        for p in &pts {
            let mut fd = DVector::zeros(2);
            for i in 0..2 {
                let mut plus = p.x.clone();
                plus[i] += h;
                let mut minus = p.x.clone();
                minus[i] -= h;
                fd[i] = (g.psi(&plus) - g.psi(&minus)) / (2.0 * h);
            }
            let fd_normal = &fd / fd.norm();
            for i in 0..2 {
                assert!((p.normal[i] - fd_normal[i]).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn collocation_set_validates_and_serializes() {
        let g = ellipse_geom();
        let set = sample_collocation(&g, 64, 32, 32, NodeDistribution::Chebyshev, 7).unwrap();
        set.validate(&g).unwrap();
        let csv = set.to_csv();
        assert!(csv.starts_with("role,x1,x2,z,n1,n2\n"));
        assert_eq!(csv.lines().count(), 1 + 64 + 32 + 32);
    }

    #[test]
    fn interface_inside_domain_check() {
        let g = ellipse_geom();
        assert!(g.interface_strictly_inside(200, 13));
        let bad = LevelSetGeometry::new(
            Domain::Hypercube { lo: vec![-0.1, -0.1], hi: vec![0.1, 0.1] },
            Interface::Ellipse { a: 0.2, b: 0.5 },
        )
        .unwrap();
        assert!(!bad.interface_strictly_inside(200, 13));
    }

    proptest! {
        #[test]
        fn sampling_is_reproducible(seed in 0u64..500) {
            let g = ellipse_geom();
            let a = sample_collocation(&g, 16, 8, 8, NodeDistribution::Random, seed).unwrap();
            let b = sample_collocation(&g, 16, 8, 8, NodeDistribution::Random, seed).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn uniform_nodes_stay_interior(m in 1usize..40, lo in -5.0f64..0.0, span in 0.1f64..5.0) {
            let hi = lo + span;
            for dist in [NodeDistribution::Chebyshev, NodeDistribution::Uniform] {
                let nodes = axis_nodes(dist, m, lo, hi);
                prop_assert!(nodes.iter().all(|&x| x > lo && x < hi));
            }
        }
    }
}
