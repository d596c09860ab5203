//! The pre-Schwarzian embedding and the Riccati map between the two
//! weighted Banach spaces of holomorphic functions on the disk.
//!
//! `Psi(psi) = psi' - psi^2 / 2` carries pre-Schwarzians to Schwarzians;
//! its augmentation `(Psi(psi), psi(0)/2)` is injective and is inverted
//! here constructively through the normalized Schwarzian solve and an
//! explicit lower-triangular post-composition.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::diskquad::DiskGrid;
use crate::schwarzian::solve_schwarzian;
use crate::series::TruncatedSeries;
use crate::transport::lambda_post_compose;
use crate::Result;

use std::sync::OnceLock;

/// The Riccati map `Psi(psi) = psi' - psi^2 / 2`.
pub fn riccati(psi: &TruncatedSeries) -> TruncatedSeries {
    let sq = psi * psi;
    &psi.derivative() - &(&sq * Complex64::new(0.5, 0.0))
}

/// The augmented Riccati map `psi -> (Psi(psi), psi(0)/2)`.
pub fn augmented_riccati(psi: &TruncatedSeries) -> (TruncatedSeries, Complex64) {
    (riccati(psi), 0.5 * psi.coeff(0))
}

/// Constructive inverse of the augmented Riccati map: solve the normalized
/// Schwarzian equation for `phi`, post-compose with `z -> z/(-cz + 1)` to
/// set the pre-Schwarzian value `2c` at the origin, and return the
/// pre-Schwarzian. The branch is fixed by construction, never by
/// root-finding.
pub fn invert_augmented_riccati(
    phi: &TruncatedSeries,
    c: Complex64,
    order: usize,
) -> Result<TruncatedSeries> {
    let g = solve_schwarzian(phi, order)?;
    let f = lambda_post_compose(&g, -c);
    f.pre_schwarzian()
}

/// Derivative of the augmented Riccati map at `psi` in the direction
/// `phi`: `(phi' - psi phi, phi(0)/2)`.
pub fn augmented_riccati_derivative(
    psi: &TruncatedSeries,
    phi: &TruncatedSeries,
) -> (TruncatedSeries, Complex64) {
    let series = &phi.derivative() - &(psi * phi);
    (series, 0.5 * phi.coeff(0))
}

/// Inverse of the derivative: the unique `phi` with
/// `phi' - psi phi = target` and `phi(0)/2 = target_c`, given by
/// `phi = f' (∫ target / f' + 2 c)` where `f' = exp(∫ psi)`.
pub fn invert_augmented_riccati_derivative(
    psi: &TruncatedSeries,
    target: &TruncatedSeries,
    target_c: Complex64,
) -> Result<TruncatedSeries> {
    let fp = psi.antiderivative().exp();
    let integrand = target.divide(&fp)?;
    let inner = &integrand.antiderivative()
        + &TruncatedSeries::constant(2.0 * target_c, target.order() + 1);
    Ok(&fp * &inner)
}

/// Which boundary weight a sampled sup-norm carries: `(1 - |z|^2)^p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupWeight {
    /// `p = 1`, the norm of pre-Schwarzian data.
    One,
    /// `p = 2`, the norm of Schwarzian data.
    Two,
}

impl SupWeight {
    fn power(self) -> i32 {
        match self {
            SupWeight::One => 1,
            SupWeight::Two => 2,
        }
    }
}

/// A sampled weighted sup-norm `sup |f(z) (1 - |z|^2)^p|` over a grid.
/// The reported value is a lower bound of the true sup; the grid (and its
/// guard radius) is recorded with the norm so the resolution travels with
/// every value derived from it.
#[derive(Debug, Clone)]
pub struct WeightedSupNorm {
    weight: SupWeight,
    grid: DiskGrid,
}

impl WeightedSupNorm {
    pub fn new(weight: SupWeight, grid: DiskGrid) -> Self {
        Self { weight, grid }
    }

    /// Default sampling grid: 128 x 256 on `|z| <= 0.9`. Truncated series
    /// are untrustworthy near the boundary, so the guard radius is part of
    /// the reported value.
    pub fn guarded(weight: SupWeight) -> Self {
        let grid = DiskGrid::new(128, 256, 0.9, 0).expect("static shape is valid");
        Self { weight, grid }
    }

    pub fn weight(&self) -> SupWeight {
        self.weight
    }

    pub fn grid(&self) -> &DiskGrid {
        &self.grid
    }

    /// Sampled sup of `|f(z) (1 - |z|^2)^p|`; includes the origin, where
    /// the weight equals one. Node-parallel; the max-reduction is
    /// order-independent.
    pub fn sample(&self, f: &TruncatedSeries) -> f64 {
        let p = self.weight.power();
        let at_origin = f.eval(Complex64::ZERO).norm();
        self.grid
            .nodes()
            .par_iter()
            .map(|node| {
                let s = 1.0 - node.r * node.r;
                f.eval(node.z).norm() * s.powi(p)
            })
            .reduce(|| at_origin, f64::max)
    }
}

/// Convenience wrapper for `sup |f(z)(1-|z|^2)^p|` on a supplied norm.
pub fn weighted_sup_norm(f: &TruncatedSeries, norm: &WeightedSupNorm) -> f64 {
    norm.sample(f)
}

/// Outcome of the continuity bound for the Riccati map.
#[derive(Debug, Clone, Copy)]
pub struct ContinuityBound {
    /// `delta = sup |psi (1 - |z|^2)|`.
    pub delta: f64,
    /// `sup |Psi(psi) (1 - |z|^2)^2|`.
    pub image_norm: f64,
    /// Whether `image_norm <= 64 delta / 3 + delta^2 / 2`.
    pub satisfied: bool,
}

/// Checks the continuity estimate `||Psi(psi)|| <= 64 delta / 3 +
/// delta^2 / 2` on sampled sup-norms over the given grid.
pub fn continuity_bound(psi: &TruncatedSeries, grid: &DiskGrid) -> ContinuityBound {
    let n1 = WeightedSupNorm::new(SupWeight::One, grid.clone());
    let n2 = WeightedSupNorm::new(SupWeight::Two, grid.clone());
    let delta = n1.sample(psi);
    let image_norm = n2.sample(&riccati(psi));
    ContinuityBound {
        delta,
        image_norm,
        satisfied: image_norm <= 64.0 * delta / 3.0 + delta * delta / 2.0,
    }
}

/// Classical distortion test for germs with quasiconformal extension:
/// `|f''/f' - 2 conj(z)/(1 - |z|^2)| <= 4/(1 - |z|^2)` at every sampled
/// node. A violation falsifies the caller's univalence claim. Extremal
/// germs attain equality along a radius, so the comparison carries a
/// one-part-in-10^12 rounding allowance.
pub fn distortion_check(f: &TruncatedSeries, grid: &DiskGrid) -> Result<bool> {
    let theta = f.pre_schwarzian()?;
    Ok(grid.nodes().iter().all(|node| {
        let s = 1.0 - node.r * node.r;
        let lhs = (theta.eval(node.z) - 2.0 * node.z.conj() / s).norm();
        lhs <= 4.0 / s * (1.0 + 1e-12)
    }))
}

static DELTA_STAR: OnceLock<f64> = OnceLock::new();

/// Radius of the open ball on which the constructive inverse is certified:
/// the solution `delta*` of `64 delta / 3 + delta^2 / 2 = 2`, the
/// threshold at which the image norm reaches the quasiconformal-extension
/// bound. Computed by bisection.
pub fn open_ball_radius() -> f64 {
    *DELTA_STAR.get_or_init(|| {
        let f = |d: f64| 64.0 * d / 3.0 + d * d / 2.0 - 2.0;
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::{coeff_close, rel_err};
    use crate::schwarzian::solve_pretheta;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn koebe(order: usize) -> TruncatedSeries {
        TruncatedSeries::new((0..=order).map(|n| re(n as f64)).collect())
    }

    #[test]
    fn riccati_examples() {
        let zero = riccati(&TruncatedSeries::zero(8));
        assert!(zero.coeffs().iter().all(|c| *c == Complex64::ZERO));

        // A Mobius pre-Schwarzian maps to zero: psi = 2/(1-z).
        let psi = TruncatedSeries::new(vec![re(2.0); 17]);
        let s = riccati(&psi);
        for k in 0..=s.order() {
            assert!(coeff_close(s.coeff(k), Complex64::ZERO), "k = {k}");
        }

        // Two-path identity on the Koebe function.
        let f = koebe(32);
        let via_riccati = riccati(&f.pre_schwarzian().unwrap());
        let direct = f.schwarzian().unwrap();
        for k in 0..=direct.order().min(via_riccati.order()) {
            assert!(
                (via_riccati.coeff(k) - direct.coeff(k)).norm()
                    <= 1e-12 * (1.0 + direct.coeff(k).norm()),
                "k = {k}"
            );
        }
    }

    #[test]
    fn augmented_riccati_examples() {
        let (s, c0) = augmented_riccati(&TruncatedSeries::zero(4));
        assert!(s.coeffs().iter().all(|c| *c == Complex64::ZERO));
        assert_eq!(c0, Complex64::ZERO);

        // psi = 2c constant: (-2c^2, c).
        let cc = c(0.3, -0.2);
        let (s, c0) = augmented_riccati(&TruncatedSeries::constant(2.0 * cc, 4));
        assert!(coeff_close(s.coeff(0), -2.0 * cc * cc));
        assert!(coeff_close(c0, cc));

        // psi = 2/(1-z): (0, 1).
        let psi = TruncatedSeries::new(vec![re(2.0); 9]);
        let (s, c0) = augmented_riccati(&psi);
        assert!(s.coeffs().iter().all(|v| v.norm() < 1e-12));
        assert!(coeff_close(c0, Complex64::ONE));
    }

    #[test]
    fn augmented_riccati_inverse_examples() {
        // (0, 0) -> 0.
        let psi = invert_augmented_riccati(&TruncatedSeries::zero(8), Complex64::ZERO, 16).unwrap();
        for k in 0..=psi.order() {
            assert!(coeff_close(psi.coeff(k), Complex64::ZERO));
        }

        // (0, c): psi = 2c/(1 - cz) expanded, with psi(0) = 2c and
        // Psi(psi) = 0.
        let cc = c(0.2, 0.1);
        let psi = invert_augmented_riccati(&TruncatedSeries::zero(8), cc, 24).unwrap();
        for k in 0..=psi.order() {
            let want = 2.0 * cc * cc.powu(k as u32);
            assert!(coeff_close(psi.coeff(k), want), "k = {k}");
        }
        let (s, c0) = augmented_riccati(&psi);
        assert!(s.coeffs().iter().all(|v| v.norm() < 1e-10));
        assert!(coeff_close(c0, cc));

        // (S(koebe), 0): theta of the f''(0) = 0 renormalization.
        let q = koebe(40).schwarzian().unwrap();
        let psi = invert_augmented_riccati(&q, Complex64::ZERO, 36).unwrap();
        let (s, c0) = augmented_riccati(&psi);
        assert!(coeff_close(c0, Complex64::ZERO));
        for k in 0..=s.order().min(q.order()) {
            assert!(
                (s.coeff(k) - q.coeff(k)).norm() <= 1e-10 * (1.0 + q.coeff(k).norm()),
                "k = {k}"
            );
        }
    }

    #[test]
    fn derivative_map_examples() {
        let (s, c0) =
            augmented_riccati_derivative(&TruncatedSeries::zero(8), &TruncatedSeries::identity(8));
        assert!(coeff_close(s.coeff(0), Complex64::ONE));
        assert_eq!(c0, Complex64::ZERO);

        let one = TruncatedSeries::constant(Complex64::ONE, 8);
        let (s, c0) = augmented_riccati_derivative(&one, &one);
        assert!(coeff_close(s.coeff(0), re(-1.0)));
        assert!(coeff_close(c0, re(0.5)));

        let (s, c0) = augmented_riccati_derivative(&one, &TruncatedSeries::zero(8));
        assert!(s.coeffs().iter().all(|v| *v == Complex64::ZERO));
        assert_eq!(c0, Complex64::ZERO);
    }

    #[test]
    fn derivative_inverse_examples() {
        // psi = 0, target (1, 0): phi = z.
        let phi = invert_augmented_riccati_derivative(
            &TruncatedSeries::zero(8),
            &TruncatedSeries::constant(Complex64::ONE, 8),
            Complex64::ZERO,
        )
        .unwrap();
        for k in 0..=8 {
            let want = if k == 1 { Complex64::ONE } else { Complex64::ZERO };
            assert!(coeff_close(phi.coeff(k), want), "k = {k}");
        }

        // psi = 0, target (0, 1): phi = 2.
        let phi = invert_augmented_riccati_derivative(
            &TruncatedSeries::zero(8),
            &TruncatedSeries::zero(8),
            Complex64::ONE,
        )
        .unwrap();
        assert!(coeff_close(phi.coeff(0), re(2.0)));
        for k in 1..=8 {
            assert!(coeff_close(phi.coeff(k), Complex64::ZERO));
        }

        // Random data: forward map recovers the targets.
        let psi = TruncatedSeries::new(
            (0..=20)
                .map(|k| c(0.3, -0.2) * re(0.5f64.powi(k)))
                .collect(),
        );
        let target = TruncatedSeries::new(
            (0..=20)
                .map(|k| c(-0.1, 0.4) * re(0.6f64.powi(k)))
                .collect(),
        );
        let target_c = c(0.7, -0.3);
        let phi = invert_augmented_riccati_derivative(&psi, &target, target_c).unwrap();
        let (s, c0) = augmented_riccati_derivative(&psi, &phi);
        assert!(coeff_close(c0, target_c));
        for k in 0..=s.order().min(target.order()) {
            assert!(
                (s.coeff(k) - target.coeff(k)).norm() <= 1e-11 * (1.0 + target.coeff(k).norm()),
                "k = {k}"
            );
        }
    }

    #[test]
    fn weighted_sup_examples() {
        let n1 = WeightedSupNorm::guarded(SupWeight::One);
        let f = TruncatedSeries::constant(Complex64::ONE, 4);
        // Attained at the origin where the weight is 1.
        assert!(rel_err(n1.sample(&f), 1.0) < 1e-12);

        let n2 = WeightedSupNorm::guarded(SupWeight::Two);
        let f = TruncatedSeries::constant(re(6.0), 4);
        assert!(rel_err(n2.sample(&f), 6.0) < 1e-12);

        // |S(koebe)| (1-|z|^2)^2 = 6 (1-r^2)^2 / |1-z^2|^2 = 6 on the real
        // axis; the sampled sup sits just under 6 because of the guard
        // radius and series truncation.
        let s = koebe(64).schwarzian().unwrap();
        let got = n2.sample(&s);
        assert!(got <= 6.0 + 1e-9);
        assert!((got - 6.0).abs() < 1e-6, "got {got}");
    }

    #[test]
    fn continuity_bound_examples() {
        let grid = DiskGrid::new(64, 128, 0.9, 0).unwrap();
        let out = continuity_bound(&TruncatedSeries::zero(8), &grid);
        assert_eq!(out.delta, 0.0);
        assert_eq!(out.image_norm, 0.0);
        assert!(out.satisfied);

        // Constant kappa: Psi = -kappa^2/2, attained where the weight
        // peaks; comfortably inside the bound.
        let kappa = 0.05;
        let out = continuity_bound(&TruncatedSeries::constant(re(kappa), 8), &grid);
        assert!(rel_err(out.delta, kappa) < 1e-12);
        assert!(rel_err(out.image_norm, kappa * kappa / 2.0) < 1e-12);
        assert!(out.satisfied);
    }

    #[test]
    fn distortion_examples() {
        let grid = DiskGrid::new(64, 128, 0.9, 0).unwrap();
        assert!(distortion_check(&TruncatedSeries::identity(8), &grid).unwrap());
        // The extremal family saturates the bound without violating it.
        assert!(distortion_check(&koebe(64), &grid).unwrap());
        // A wildly non-univalent perturbation violates it.
        let f = TruncatedSeries::new(vec![re(0.0), re(1.0), re(5.0)]);
        assert!(!distortion_check(&f, &grid).unwrap());
    }

    #[test]
    fn injectivity_witness() {
        // Distinct normalized germs have distinct pre-Schwarzians.
        let f = TruncatedSeries::new(vec![re(0.0), re(1.0), re(0.3), re(0.1), re(0.0)]);
        let g = TruncatedSeries::new(vec![re(0.0), re(1.0), re(0.3), re(0.2), re(0.0)]);
        let tf = f.pre_schwarzian().unwrap();
        let tg = g.pre_schwarzian().unwrap();
        let max_gap = (0..=tf.order().min(tg.order()))
            .map(|k| (tf.coeff(k) - tg.coeff(k)).norm())
            .fold(0.0, f64::max);
        assert!(max_gap > 1e-3);
    }

    #[test]
    fn lambda_shift_law() {
        // Post-composing with the lower-triangular map shifts the second
        // slot of the augmented Riccati image by -c and fixes the first.
        let f = solve_pretheta(&TruncatedSeries::new(
            (0..=24).map(|k| c(0.2, 0.1) * re(0.4f64.powi(k))).collect(),
        ));
        let cc = c(0.15, -0.25);
        let theta0 = f.pre_schwarzian().unwrap();
        let theta1 = lambda_post_compose(&f, cc).pre_schwarzian().unwrap();
        let (s0, slot0) = augmented_riccati(&theta0);
        let (s1, slot1) = augmented_riccati(&theta1);
        assert!(coeff_close(slot1 - slot0, -cc));
        for k in 0..=s0.order().min(s1.order()) {
            assert!(
                (s1.coeff(k) - s0.coeff(k)).norm() <= 1e-11 * (1.0 + s0.coeff(k).norm()),
                "k = {k}"
            );
        }
    }

    #[test]
    fn open_ball_radius_solves_its_equation() {
        let d = open_ball_radius();
        assert!((64.0 * d / 3.0 + d * d / 2.0 - 2.0).abs() < 1e-12);
        assert!(d > 0.09 && d < 0.1);
    }
}
