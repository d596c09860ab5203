//! Möbius transport of quadratic differentials across the fiber and the
//! averaging identities.
//!
//! Moving the base point to `w` recomposes a differential as
//! `Q_w = Q ∘ γ_w (γ_w')^2` with `γ_w(z) = (z + w)/(1 + conj(w) z)`; its
//! normalized coefficients `a_j^w` are averaged over the disk against the
//! hyperbolic area form.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::diskquad::{pairwise_sum, DiskGrid};
use crate::series::{MobiusMap, TruncatedSeries};
use crate::{Error, Result};

/// A point of the fiber over the origin: the disk parameter `w` of the
/// translation `γ_w`, together with the parameter `c` of the normalizing
/// lower-triangular map when it is known.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberPoint {
    w: Complex64,
    lambda_c: Option<Complex64>,
}

impl FiberPoint {
    pub fn new(w: Complex64) -> Result<Self> {
        if w.norm() >= 1.0 {
            return Err(Error::BasePointOutsideDisk { modulus: w.norm() });
        }
        Ok(Self { w, lambda_c: None })
    }

    pub fn with_lambda_c(mut self, c: Complex64) -> Self {
        self.lambda_c = Some(c);
        self
    }

    pub fn w(&self) -> Complex64 {
        self.w
    }

    pub fn lambda_c(&self) -> Option<Complex64> {
        self.lambda_c
    }
}

/// The transported differential `Q_w = Q ∘ γ_w (γ_w')^2` as a truncated
/// series about the origin. `Q` is read as the exact polynomial given by
/// its stored coefficients.
pub fn pushforward(q: &TruncatedSeries, w: Complex64, order: usize) -> Result<TruncatedSeries> {
    let map = MobiusMap::disk_translation(w)?;
    let (inner, inner_prime_sq) = map.inner_expansion(order)?;
    Ok(&q.horner_compose(&inner, order) * &inner_prime_sq)
}

/// The `j`-th normalized coefficient of the transported differential:
/// `a_j^w = (Q_w)_{j-2} / (j^3 - j)`.
pub fn fiber_coeff(q: &TruncatedSeries, w: Complex64, j: usize) -> Result<Complex64> {
    if j < 2 {
        return Err(Error::IndexOutOfRange { index: j });
    }
    let jf = j as f64;
    let q_w = pushforward(q, w, j - 2)?;
    Ok(q_w.coeff(j - 2) / (jf * jf * jf - jf))
}

/// Hyperbolic average of `|a_j^w|^2` over the grid:
/// `∬ |a_j^w|^2 · 4 dxdy / (1 - |w|^2)^2`.
///
/// The closed form of the same quantity is
/// `(4 pi / (3 (j^3 - j))) sum_n (n^3 - n) |a_n|^2`; see
/// [`average_coeff_sq_reference`].
pub fn average_coeff_sq(q: &TruncatedSeries, j: usize, grid: &DiskGrid) -> Result<f64> {
    if j < 2 {
        return Err(Error::IndexOutOfRange { index: j });
    }
    if grid.r_max() >= 1.0 {
        return Err(Error::BoundaryRadiusNotStrictlyInside);
    }
    let jf = j as f64;
    let scale = jf * jf * jf - jf;
    let vals: Vec<f64> = grid
        .nodes()
        .par_iter()
        .map(|node| {
            let q_w = pushforward(q, node.z, j - 2).expect("node lies inside the disk");
            let a = q_w.coeff(j - 2) / scale;
            let s = 1.0 - node.r * node.r;
            a.norm_sqr() * 4.0 / (s * s) * node.weight
        })
        .collect();
    Ok(pairwise_sum(&vals))
}

/// Closed-form right-hand side of the coefficient-averaging identity,
/// evaluated from the raw series of `Q`:
/// `(4 pi / (3 (j^3 - j))) sum_n (n^3 - n) |a_n|^2`.
pub fn average_coeff_sq_reference(q: &TruncatedSeries, j: usize) -> f64 {
    let jf = j as f64;
    let terms: Vec<f64> = q
        .coeffs()
        .iter()
        .enumerate()
        .map(|(idx, &c)| {
            let n = (idx + 2) as f64;
            // |a_n|^2 (n^3 - n) = |q_{n-2}|^2 / (n^3 - n)
            c.norm_sqr() / (n * n * n - n)
        })
        .collect();
    4.0 * std::f64::consts::PI / (3.0 * (jf * jf * jf - jf)) * pairwise_sum(&terms)
}

/// Truncated fiber norm `sum_{j=2}^{j_max} j |a_j^w|^2` at a single point,
/// computed by one series recomposition to order `j_max - 2`.
pub fn fiber_velling_norm_sq(q: &TruncatedSeries, w: Complex64, j_max: usize) -> Result<f64> {
    assert!(j_max >= 2);
    let q_w = pushforward(q, w, j_max - 2)?;
    let terms: Vec<f64> = (2..=j_max)
        .map(|j| {
            let jf = j as f64;
            let scale = jf * jf * jf - jf;
            jf * (q_w.coeff(j - 2) / scale).norm_sqr()
        })
        .collect();
    Ok(pairwise_sum(&terms))
}

/// Fiber-averaged Velling norm with truncation diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct AveragedNorm {
    /// `(1/2) ∬ sum_{j=2}^{j_max} j |a_j^w|^2 dA_H` over the grid.
    pub value: f64,
    /// Contribution of the last retained index `j_max`, for truncation
    /// diagnostics.
    pub last_term: f64,
}

/// Averages the fiber norm against the hyperbolic area form:
/// `(1/2) ∬ ||Q_w||^2 dA_H`, with the fiber sum truncated at `j_max`.
/// The telescoping identity makes this equal to the Weil–Petersson norm
/// in the double limit `j_max -> inf`, `r_max -> 1`.
pub fn averaged_velling_norm_sq(
    q: &TruncatedSeries,
    grid: &DiskGrid,
    j_max: usize,
) -> Result<AveragedNorm> {
    assert!(j_max >= 2);
    if grid.r_max() >= 1.0 {
        return Err(Error::BoundaryRadiusNotStrictlyInside);
    }
    let pairs: Vec<(f64, f64)> = grid
        .nodes()
        .par_iter()
        .map(|node| {
            let q_w = pushforward(q, node.z, j_max - 2).expect("node lies inside the disk");
            let mut terms = Vec::with_capacity(j_max - 1);
            for j in 2..=j_max {
                let jf = j as f64;
                let scale = jf * jf * jf - jf;
                terms.push(jf * (q_w.coeff(j - 2) / scale).norm_sqr());
            }
            let s = 1.0 - node.r * node.r;
            let hyp = 4.0 / (s * s) * node.weight;
            (pairwise_sum(&terms) * hyp, terms[j_max - 2] * hyp)
        })
        .collect();
    let totals: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let lasts: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    Ok(AveragedNorm {
        value: 0.5 * pairwise_sum(&totals),
        last_term: 0.5 * pairwise_sum(&lasts),
    })
}

/// Supremum of the truncated fiber norm over a list of sample points;
/// finite for bounded differentials, probing the boundedness of the
/// transported norm as `|w| -> 1`.
pub fn sup_fiber_velling_norm_sq(
    q: &TruncatedSeries,
    w_samples: &[Complex64],
    j_max: usize,
) -> Result<f64> {
    let mut sup = 0.0f64;
    for &w in w_samples {
        sup = sup.max(fiber_velling_norm_sq(q, w, j_max)?);
    }
    Ok(sup)
}

/// Post-composition with the lower-triangular map `z -> z/(cz + 1)`.
/// Preserves `f(0) = 0`, `f'(0) = 1` and shifts the second Taylor
/// coefficient by `-c`, hence the pre-Schwarzian at the origin by `-2c`;
/// the Schwarzian is untouched.
pub fn lambda_post_compose(f: &TruncatedSeries, c: Complex64) -> TruncatedSeries {
    MobiusMap::lower_triangular(c)
        .post_compose(f)
        .expect("lower-triangular maps are finite at a normalized origin")
}

/// Partial sums of the scalar telescoping series
/// `sum_{j=2}^J 1/(3 (j-1)(j+1)) = 1/4 - (2J + 1)/(6 J (J + 1))`.
pub fn telescoping_partial_sum(j_max: usize) -> f64 {
    let terms: Vec<f64> = (2..=j_max)
        .map(|j| {
            let jf = j as f64;
            1.0 / (3.0 * (jf - 1.0) * (jf + 1.0))
        })
        .collect();
    pairwise_sum(&terms)
}
