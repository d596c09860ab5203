//! Power-series solver for `S(f) = Q` and the tangent dictionary between
//! quadratic differentials and vector fields.
//!
//! The normalized solution is built as `f = y1/y2` from the linear ODE
//! `y'' + Q y / 2 = 0` with `y1(0) = 0, y1'(0) = 1` and `y2(0) = 1,
//! y2'(0) = 0`, which hard-wires `f(0) = 0`, `f'(0) = 1`, `f''(0) = 0`.

use num_complex::Complex64;

use crate::series::TruncatedSeries;
use crate::{Error, Result};

/// Threshold below which the denominator solution counts as vanishing on
/// the sample grid, signalling a pole of the truncated quotient.
const POLE_EPS: f64 = 1e-8;

/// Sample grid for pole detection: radii `0.99 (i+1)/64` and angles
/// `2 pi j / 128`.
const POLE_RADII: usize = 64;
const POLE_ANGLES: usize = 128;
const POLE_RMAX: f64 = 0.99;

/// A holomorphic quadratic differential stored through its normalized
/// coefficients: `Q(z) = sum_{n >= 2} (n^3 - n) a_n z^{n - 2}`.
///
/// For tangent vectors to the extended family an optional `a_1` entry is
/// carried alongside; it does not contribute to `Q` (the factor `n^3 - n`
/// vanishes at `n = 1`) but does contribute `a_1 z^2` to the vector field.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadDifferential {
    a1: Option<Complex64>,
    coeffs: Vec<Complex64>,
}

impl QuadDifferential {
    /// Builds from the coefficients `a_2..a_max` (index 0 holds `a_2`).
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { a1: None, coeffs }
    }

    /// Attaches the `a_1` entry used by tangent vectors of the extended
    /// family.
    pub fn with_a1(mut self, a1: Complex64) -> Self {
        self.a1 = Some(a1);
        self
    }

    pub fn a1(&self) -> Option<Complex64> {
        self.a1
    }

    /// Largest stored index `n`, or 1 when only `a_1` is present.
    pub fn max_index(&self) -> usize {
        if self.coeffs.is_empty() {
            1
        } else {
            self.coeffs.len() + 1
        }
    }

    /// Coefficient `a_n`; zero outside the stored range.
    pub fn a(&self, n: usize) -> Complex64 {
        match n {
            0 => Complex64::ZERO,
            1 => self.a1.unwrap_or(Complex64::ZERO),
            _ => self
                .coeffs
                .get(n - 2)
                .copied()
                .unwrap_or(Complex64::ZERO),
        }
    }

    /// Stored coefficients `a_2..`, ascending.
    pub fn bers_coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// The differential as a Taylor series, `(n^3 - n) a_n` at `z^{n-2}`.
    pub fn to_series(&self, order: usize) -> TruncatedSeries {
        let mut s = TruncatedSeries::zero(order);
        let mut coeffs = s.coeffs().to_vec();
        for (idx, &a) in self.coeffs.iter().enumerate() {
            if idx > order {
                break;
            }
            let n = (idx + 2) as f64;
            coeffs[idx] = a * (n * n * n - n);
        }
        s = TruncatedSeries::new(coeffs);
        s
    }

    /// Reads the normalized coefficients back off a Taylor series,
    /// `a_n = q_{n-2} / (n^3 - n)`.
    pub fn from_series(q: &TruncatedSeries) -> Self {
        let coeffs = q
            .coeffs()
            .iter()
            .enumerate()
            .map(|(idx, &c)| {
                let n = (idx + 2) as f64;
                c / (n * n * n - n)
            })
            .collect();
        Self { a1: None, coeffs }
    }

    /// The tangent vector field `u = sum a_n z^{n+1}` with `u''' = Q`.
    pub fn tangent(&self, order: usize) -> TruncatedSeries {
        let mut coeffs = vec![Complex64::ZERO; order + 1];
        if let Some(a1) = self.a1 {
            if order >= 2 {
                coeffs[2] = a1;
            }
        }
        for (idx, &a) in self.coeffs.iter().enumerate() {
            let deg = idx + 3;
            if deg <= order {
                coeffs[deg] = a;
            }
        }
        TruncatedSeries::new(coeffs)
    }
}

/// Solves `S(f) = Q` for the normalized germ `f(0) = 0`, `f'(0) = 1`,
/// `f''(0) = 0`, to the given truncation order.
///
/// Errors with [`Error::DenominatorVanishesOnGrid`] when the denominator
/// solution of the associated linear ODE drops below `1e-8` at a sample
/// point of `|z| <= 0.99`, which signals that `f` develops a pole inside
/// the disk and the truncated quotient cannot be trusted.
pub fn solve_schwarzian(q: &TruncatedSeries, order: usize) -> Result<TruncatedSeries> {
    let y1 = ode_solution(q, order, Complex64::ZERO, Complex64::ONE);
    let y2 = ode_solution(q, order, Complex64::ONE, Complex64::ZERO);
    check_denominator(&y2)?;
    y1.divide(&y2)
}

/// Power-series solution of `y'' + Q y / 2 = 0` with prescribed `y(0)`,
/// `y'(0)`, via the coefficient recursion
/// `b_{k+2} = -(sum_j Q_j b_{k-j}) / (2 (k+2)(k+1))`.
fn ode_solution(
    q: &TruncatedSeries,
    order: usize,
    y0: Complex64,
    y0p: Complex64,
) -> TruncatedSeries {
    let mut b = vec![Complex64::ZERO; order + 1];
    b[0] = y0;
    if order >= 1 {
        b[1] = y0p;
    }
    for k in 0..order.saturating_sub(1) {
        let mut acc = Complex64::ZERO;
        for j in 0..=k.min(q.order()) {
            acc += q.coeff(j) * b[k - j];
        }
        b[k + 2] = -acc / (2.0 * ((k + 2) * (k + 1)) as f64);
    }
    TruncatedSeries::new(b)
}

fn check_denominator(y2: &TruncatedSeries) -> Result<()> {
    for i in 0..POLE_RADII {
        let r = POLE_RMAX * (i + 1) as f64 / POLE_RADII as f64;
        for j in 0..POLE_ANGLES {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / POLE_ANGLES as f64;
            let z = Complex64::from_polar(r, theta);
            if y2.eval(z).norm() < POLE_EPS {
                return Err(Error::DenominatorVanishesOnGrid {
                    radius: r,
                    angle: theta,
                    threshold: POLE_EPS,
                });
            }
        }
    }
    Ok(())
}

/// The first-order response of the solution map: `u` with `u''' = Q` and
/// `u(0) = u'(0) = u''(0) = 0`; the coefficient of `z^{n+1}` is `a_n`.
pub fn tangent_u(q: &QuadDifferential) -> TruncatedSeries {
    let order = q.max_index() + 1;
    q.tangent(order)
}

/// Triple antiderivative of a raw series: `u''' = q` with vanishing 2-jet.
pub fn tangent_u_from_series(q: &TruncatedSeries) -> TruncatedSeries {
    q.antiderivative().antiderivative().antiderivative()
}

/// Solves `d/dz log f_z = psi` for the normalized germ `f(0) = 0`,
/// `f'(0) = 1`: `f = int exp(int psi)`.
pub fn solve_pretheta(psi: &TruncatedSeries) -> TruncatedSeries {
    psi.antiderivative().exp().antiderivative()
}
