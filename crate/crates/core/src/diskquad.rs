//! Quadrature on the unit disk for Euclidean, spherical and hyperbolic
//! measures.
//!
//! Grids are tensor products of Gauss–Legendre nodes in the radius
//! (optionally refined geometrically toward the boundary) and uniform nodes
//! in the angle, with the Jacobian `r` folded into the weights. All node
//! reductions run through a deterministic pairwise summation tree, so
//! results are independent of thread count.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::series::TruncatedSeries;
use crate::{Error, Result};

use std::f64::consts::PI;

/// Pairwise (tree) summation. Deterministic for a fixed input length;
/// error grows like O(log n) ulps.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Pairwise summation of complex values.
pub fn pairwise_sum_complex(xs: &[Complex64]) -> Complex64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum_complex(&xs[..mid]) + pairwise_sum_complex(&xs[mid..])
}

/// Gauss–Legendre nodes and weights on `[a, b]`, by Newton iteration on the
/// Legendre recurrence from the Tricomi initial guesses.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    assert!(n >= 1);
    let mut rule = Vec::with_capacity(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * d * d);
        rule.push((mid + half * x, half * w));
    }
    rule.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
    rule
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// One quadrature node of a disk grid: polar coordinates, the Cartesian
/// point, and the Euclidean weight (Jacobian `r` and angular step included).
#[derive(Debug, Clone, Copy)]
pub struct Node {
    pub r: f64,
    pub theta: f64,
    pub z: Complex64,
    pub weight: f64,
}

/// Tensor-product quadrature grid on the disk of radius `r_max`.
#[derive(Debug, Clone)]
pub struct DiskGrid {
    n_radial: usize,
    n_angular: usize,
    r_max: f64,
    boundary_panels: usize,
    panels: Vec<(f64, f64)>,
    nodes: Vec<Node>,
}

impl DiskGrid {
    /// Builds a grid with `n_radial` Gauss–Legendre nodes per radial panel
    /// and `n_angular` uniform angular nodes. With `boundary_panels = k > 0`
    /// the radial interval is split geometrically at
    /// `r_max (1 - 2^-j), j = 1..k`, refining toward the boundary where
    /// hyperbolic-weighted integrands peak.
    pub fn new(
        n_radial: usize,
        n_angular: usize,
        r_max: f64,
        boundary_panels: usize,
    ) -> Result<Self> {
        if n_radial < 2 || n_angular < 4 || !(r_max > 0.0 && r_max <= 1.0) {
            return Err(Error::InvalidGridShape);
        }
        let mut cuts = vec![0.0];
        for j in 1..=boundary_panels {
            cuts.push(r_max * (1.0 - 0.5f64.powi(j as i32)));
        }
        cuts.push(r_max);
        let panels: Vec<(f64, f64)> = cuts.windows(2).map(|w| (w[0], w[1])).collect();

        let dtheta = 2.0 * PI / n_angular as f64;
        let mut nodes = Vec::with_capacity((boundary_panels + 1) * n_radial * n_angular);
        for &(lo, hi) in &panels {
            for (r, wr) in gauss_legendre(n_radial, lo, hi) {
                for j in 0..n_angular {
                    let theta = dtheta * j as f64;
                    nodes.push(Node {
                        r,
                        theta,
                        z: Complex64::from_polar(r, theta),
                        weight: wr * r * dtheta,
                    });
                }
            }
        }
        Ok(Self {
            n_radial,
            n_angular,
            r_max,
            boundary_panels,
            panels,
            nodes,
        })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn n_radial(&self) -> usize {
        self.n_radial
    }

    pub fn n_angular(&self) -> usize {
        self.n_angular
    }

    pub fn boundary_panels(&self) -> usize {
        self.boundary_panels
    }

    pub fn panels(&self) -> &[(f64, f64)] {
        &self.panels
    }

    /// Euclidean integral of a sampled function: parallel map over the
    /// nodes, deterministic pairwise reduction.
    pub fn integrate<F>(&self, f: F) -> f64
    where
        F: Fn(Complex64) -> f64 + Sync,
    {
        let vals: Vec<f64> = self
            .nodes
            .par_iter()
            .map(|node| f(node.z) * node.weight)
            .collect();
        pairwise_sum(&vals)
    }

    /// Euclidean integral of a complex-valued sampled function.
    pub fn integrate_complex<F>(&self, f: F) -> Complex64
    where
        F: Fn(Complex64) -> Complex64 + Sync,
    {
        let vals: Vec<Complex64> = self
            .nodes
            .par_iter()
            .map(|node| f(node.z) * node.weight)
            .collect();
        pairwise_sum_complex(&vals)
    }
}

/// Spherical area of the image domain: `4 ∬ |f'|^2 / (1 + |f|^2)^2 dxdy`.
/// The caller guarantees injectivity of `f` on the grid support.
pub fn spherical_area(f: &TruncatedSeries, grid: &DiskGrid) -> f64 {
    let fp = f.derivative();
    grid.integrate(|z| {
        let val = f.eval(z);
        let der = fp.eval(z);
        let denom = 1.0 + val.norm_sqr();
        4.0 * der.norm_sqr() / (denom * denom)
    })
}

/// Closed-form sides of the radial-integral identities
///
/// ```text
/// ∬ phi(|z|) Re f dxdy   = 2 pi Re(a_0) m_1,
/// ∬ phi(|z|) |f|^2 dxdy  = 2 pi sum_n |a_n|^2 m_{2n+1},
/// ```
///
/// where `m_k = ∫_0^1 phi(r) r^k dr` is supplied by the caller. The `m_1`
/// in the first identity carries the area Jacobian; the convention was
/// fixed by brute-force quadrature on `phi = 1, f = 1` (see the unit
/// tests).
pub fn radial_pair_integrals(
    f: &TruncatedSeries,
    phi_moments: &[f64],
) -> Result<(f64, f64)> {
    let n = f.order();
    let needed = 2 * n + 2;
    if phi_moments.len() < needed {
        return Err(Error::MomentListTooShort {
            needed,
            got: phi_moments.len(),
        });
    }
    let two_pi = 2.0 * PI;
    let re_side = two_pi * f.coeff(0).re * phi_moments[1];
    let terms: Vec<f64> = (0..=n)
        .map(|k| f.coeff(k).norm_sqr() * phi_moments[2 * k + 1])
        .collect();
    let abs_side = two_pi * pairwise_sum(&terms);
    Ok((re_side, abs_side))
}

/// Radial integral appearing in the second variation of spherical area:
///
/// ```text
/// c_n = ∫_0^1 ( 6 r^{2n+4}/(1+r^2)^4 - (4n+6) r^{2n+2}/(1+r^2)^3
///               + (n+1)^2 r^{2n}/(1+r^2)^2 ) r dr,
/// ```
///
/// evaluated on the supplied 1-D rule for `[0, 1]`. Equals `n / 8`.
pub fn c_frak(n: u32, grid_1d: &[(f64, f64)]) -> f64 {
    assert!(n >= 1);
    let vals: Vec<f64> = grid_1d
        .iter()
        .map(|&(r, w)| {
            let r2 = r * r;
            let p = 1.0 + r2;
            let t1 = 6.0 * r2.powi(n as i32 + 2) / p.powi(4);
            let t2 = (4.0 * n as f64 + 6.0) * r2.powi(n as i32 + 1) / p.powi(3);
            let t3 = (n as f64 + 1.0).powi(2) * r2.powi(n as i32) / p.powi(2);
            (t1 - t2 + t3) * r * w
        })
        .collect();
    pairwise_sum(&vals)
}

/// Integral against the hyperbolic area form `4 dxdy / (1 - |z|^2)^2`.
/// The grid must stay strictly inside the disk.
pub fn hyperbolic_integral<F>(h: F, grid: &DiskGrid) -> Result<f64>
where
    F: Fn(Complex64) -> f64 + Sync,
{
    if grid.r_max() >= 1.0 {
        return Err(Error::BoundaryRadiusNotStrictlyInside);
    }
    Ok(grid.integrate(|z| {
        let s = 1.0 - z.norm_sqr();
        h(z) * 4.0 / (s * s)
    }))
}

/// Shape parameters reused when a family of grids with varying `r_max` is
/// needed.
#[derive(Debug, Clone, Copy)]
pub struct GridShape {
    pub n_radial: usize,
    pub n_angular: usize,
    pub boundary_panels: usize,
}

impl GridShape {
    pub fn build(&self, r_max: f64) -> Result<DiskGrid> {
        DiskGrid::new(self.n_radial, self.n_angular, r_max, self.boundary_panels)
    }
}

/// Result of a regularized boundary limit: the extrapolated value and the
/// last two ratio values for convergence diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct RegularizedLimit {
    pub value: f64,
    pub last_ratios: (f64, f64),
}

/// Regularized average toward the boundary:
///
/// ```text
/// lim_{r' -> 1}  normalizer * ∬_{Δ_{r'}} h dA_H / ∬_{Δ_{r'}} dA_H,
/// ```
///
/// extrapolated from the supplied ascending radii with the ansatz
/// `ratio(r') = L + C (1 - r')` (two-point elimination on the last pair).
/// Errors if the step between successive ratios exceeds `tolerance`.
pub fn regularized_limit<F>(
    h: F,
    radii: &[f64],
    normalizer: f64,
    shape: GridShape,
    tolerance: f64,
) -> Result<RegularizedLimit>
where
    F: Fn(Complex64) -> f64 + Sync,
{
    assert!(radii.len() >= 2, "need at least two radii to extrapolate");
    assert!(
        radii.windows(2).all(|w| w[0] < w[1]) && radii.iter().all(|r| *r < 1.0),
        "radii must ascend strictly toward 1"
    );
    let mut ratios = Vec::with_capacity(radii.len());
    for &r in radii {
        let grid = shape.build(r)?;
        let numerator = hyperbolic_integral(&h, &grid)?;
        let denominator = hyperbolic_integral(|_| 1.0, &grid)?;
        ratios.push(normalizer * numerator / denominator);
    }
    for pair in ratios.windows(2) {
        let step = (pair[1] - pair[0]).abs();
        if step > tolerance {
            return Err(Error::NonConvergentSequence { step, tolerance });
        }
    }
    let k = ratios.len();
    let (r1, r2) = (radii[k - 2], radii[k - 1]);
    let (v1, v2) = (ratios[k - 2], ratios[k - 1]);
    let (e1, e2) = (1.0 - r1, 1.0 - r2);
    let value = v2 + (v2 - v1) * e2 / (e1 - e2);
    Ok(RegularizedLimit {
        value,
        last_ratios: (v1, v2),
    })
}

/// Two-point boundary extrapolation with the ansatz `v(r) = L + C (1 - r)`,
/// used when averaging on grids of increasing radius.
pub fn extrapolate_to_boundary(r1: f64, v1: f64, r2: f64, v2: f64) -> f64 {
    let (e1, e2) = (1.0 - r1, 1.0 - r2);
    v2 + (v2 - v1) * e2 / (e1 - e2)
}

// Lanczos approximation (g = 7, 9 terms); relative error below 1e-12 on
// the positive half-line arguments needed here.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function via the Lanczos approximation.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection formula.
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
}
