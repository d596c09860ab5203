//! Norms and tangent-space dictionaries: the Velling Hermitian form, the
//! Velling–Kirillov and Weil–Petersson norms, the coefficient
//! correspondences between circle vector fields and holomorphic data, the
//! almost complex structure, and the numeric second-variation oracle.

use num_complex::Complex64;

use crate::diskquad::{pairwise_sum, spherical_area, DiskGrid};
use crate::schwarzian::QuadDifferential;
use crate::series::TruncatedSeries;
use crate::{Error, Result};

use std::f64::consts::PI;

/// A real vector field `sum_n c_n e^{i n theta} d/dtheta` on the circle,
/// stored through the coefficients `c_1..c_max`; reality (`c_{-n} =
/// conj(c_n)`) is enforced structurally and `c_0 = 0` normalizes away the
/// rotation subgroup.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierVector {
    coeffs: Vec<Complex64>,
}

impl FourierVector {
    /// Builds from `c_1..c_max` (index 0 holds `c_1`).
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn max_index(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient `c_n` for `n >= 1`; zero outside the stored range.
    pub fn coeff(&self, n: usize) -> Complex64 {
        assert!(n >= 1, "only n >= 1 is stored; the rest follows by reality");
        self.coeffs.get(n - 1).copied().unwrap_or(Complex64::ZERO)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Value of the represented real field at angle `theta`:
    /// `sum_{n != 0} c_n e^{i n theta} = 2 Re sum_{n >= 1} c_n e^{i n theta}`.
    pub fn eval_real(&self, theta: f64) -> f64 {
        let mut acc = 0.0;
        for (idx, &c) in self.coeffs.iter().enumerate() {
            let n = (idx + 1) as f64;
            acc += 2.0 * (c * Complex64::from_polar(1.0, n * theta)).re;
        }
        acc
    }
}

/// Velling's Hermitian form `sum_n n |a_n|^2` over the stored coefficients
/// (including the `a_1` entry when the differential carries one).
pub fn velling_norm_sq(q: &QuadDifferential) -> f64 {
    let mut terms: Vec<f64> = q
        .bers_coeffs()
        .iter()
        .enumerate()
        .map(|(idx, &a)| (idx + 2) as f64 * a.norm_sqr())
        .collect();
    if let Some(a1) = q.a1() {
        terms.push(a1.norm_sqr());
    }
    pairwise_sum(&terms)
}

/// The Velling–Kirillov (Kirillov) norm `sum_{n > 0} n |c_n|^2`.
pub fn vk_norm_sq(v: &FourierVector) -> f64 {
    let terms: Vec<f64> = v
        .coeffs()
        .iter()
        .enumerate()
        .map(|(idx, &c)| (idx + 1) as f64 * c.norm_sqr())
        .collect();
    pairwise_sum(&terms)
}

/// The two-parameter family `sum_{n > 0} (a n^3 + b n) |c_n|^2` of
/// homogeneous Kähler metrics.
pub fn metric_family_norm_sq(a: f64, b: f64, v: &FourierVector) -> f64 {
    let terms: Vec<f64> = v
        .coeffs()
        .iter()
        .enumerate()
        .map(|(idx, &c)| {
            let n = (idx + 1) as f64;
            (a * n * n * n + b * n) * c.norm_sqr()
        })
        .collect();
    pairwise_sum(&terms)
}

/// Weil–Petersson norm in coefficient form:
/// `(pi/2) sum_n (n^3 - n) |a_n|^2`.
pub fn wp_norm_sq_series(q: &QuadDifferential) -> f64 {
    let terms: Vec<f64> = q
        .bers_coeffs()
        .iter()
        .enumerate()
        .map(|(idx, &a)| {
            let n = (idx + 2) as f64;
            (n * n * n - n) * a.norm_sqr()
        })
        .collect();
    0.5 * PI * pairwise_sum(&terms)
}

/// Weil–Petersson norm in integral form:
/// `(1/4) ∬ |Q|^2 (1 - |z|^2)^2 dxdy`.
pub fn wp_norm_sq_integral(q: &TruncatedSeries, grid: &DiskGrid) -> f64 {
    0.25 * grid.integrate(|z| {
        let s = 1.0 - z.norm_sqr();
        q.eval(z).norm_sqr() * s * s
    })
}

/// Derivative at the origin of the correspondence between circle fields
/// and normalized univalent germs: `sum c_n e^{i n theta} -> i sum_{n >= 1}
/// c_n z^{n+1}`.
pub fn holomorphic_tangent(v: &FourierVector) -> TruncatedSeries {
    let order = v.max_index() + 1;
    let mut coeffs = vec![Complex64::ZERO; order.max(2) + 1];
    for (idx, &c) in v.coeffs().iter().enumerate() {
        coeffs[idx + 2] = Complex64::I * c;
    }
    TruncatedSeries::new(coeffs)
}

/// Result of the quadratic-differential tangent map; `c1_ignored`
/// signals that the input carried a nonzero `c_1` entry, which the
/// Möbius-quotient map discards without altering the stored vector.
#[derive(Debug, Clone, PartialEq)]
pub struct BersTangent {
    pub series: TruncatedSeries,
    pub c1_ignored: bool,
}

/// Derivative at the origin of the composed embedding into quadratic
/// differentials: `sum c_n e^{i n theta} -> i sum_{n >= 2} (n^3 - n) c_n
/// z^{n-2}`.
pub fn bers_tangent(v: &FourierVector) -> BersTangent {
    let order = v.max_index().saturating_sub(2);
    let mut coeffs = vec![Complex64::ZERO; order + 1];
    for (idx, &c) in v.coeffs().iter().enumerate() {
        let n = idx + 1;
        if n >= 2 {
            let nf = n as f64;
            coeffs[n - 2] = Complex64::I * c * (nf * nf * nf - nf);
        }
    }
    BersTangent {
        series: TruncatedSeries::new(coeffs),
        c1_ignored: v.coeff(1) != Complex64::ZERO,
    }
}

/// The almost complex structure: `c_n -> i c_n` on the stored
/// representative (the `n < 0` side follows by reality).
pub fn almost_complex(v: &FourierVector) -> FourierVector {
    FourierVector::new(v.coeffs().iter().map(|&c| Complex64::I * c).collect())
}

/// Sobolev norm `sum_{n != 0} |n|^{2s} |c_n|^2 = 2 sum_{n >= 1} n^{2s}
/// |c_n|^2`.
pub fn sobolev_norm_sq(v: &FourierVector, s: f64) -> f64 {
    let terms: Vec<f64> = v
        .coeffs()
        .iter()
        .enumerate()
        .map(|(idx, &c)| ((idx + 1) as f64).powf(2.0 * s) * c.norm_sqr())
        .collect();
    2.0 * pairwise_sum(&terms)
}

/// Finite-difference second variation of spherical area along the family
/// `f^t = z + t u`.
#[derive(Debug, Clone, Copy)]
pub struct SecondVariation {
    /// Richardson-extrapolated central second difference of the area.
    pub second_derivative: f64,
    /// Companion first difference `(A(h) - A(-h)) / 2h`; vanishes at a
    /// critical point of the area.
    pub first_derivative: f64,
}

/// Central-difference second variation `(A(h) - 2A(0) + A(-h)) / h^2` of
/// the spherical area along `f^t = z + t u`, with one Richardson level
/// over `h, h/2`.
///
/// Requires `u(0) = u'(0) = 0` (no constant or linear term). Errors when
/// the perturbed germ violates the coefficient univalence bound
/// `sum_n n |c_n| <= 1` relative to the leading coefficient.
pub fn second_variation(
    u: &TruncatedSeries,
    grid: &DiskGrid,
    h: f64,
) -> Result<SecondVariation> {
    assert!(
        u.coeff(0) == Complex64::ZERO && u.coeff(1) == Complex64::ZERO,
        "perturbation must have vanishing constant and linear terms"
    );
    let family = |t: f64| {
        let mut coeffs = u.coeffs().iter().map(|&c| c * t).collect::<Vec<_>>();
        coeffs[1] += Complex64::ONE;
        TruncatedSeries::new(coeffs)
    };
    let bound: f64 = family(h)
        .coeffs()
        .iter()
        .enumerate()
        .skip(2)
        .map(|(k, c)| k as f64 * c.norm())
        .sum();
    if bound > 1.0 {
        return Err(Error::PerturbationTooLarge { bound });
    }

    let area = |t: f64| spherical_area(&family(t), grid);
    let a0 = area(0.0);
    let (ap, am) = (area(h), area(-h));
    let (ap2, am2) = (area(h / 2.0), area(-h / 2.0));
    let coarse = (ap - 2.0 * a0 + am) / (h * h);
    let fine = (ap2 - 2.0 * a0 + am2) / (h * h / 4.0);
    Ok(SecondVariation {
        second_derivative: (4.0 * fine - coarse) / 3.0,
        first_derivative: (ap - am) / (2.0 * h),
    })
}
