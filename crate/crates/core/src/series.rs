//! Exact-arithmetic-on-truncations engine.
//!
//! A [`TruncatedSeries`] stores the Taylor coefficients `c_0..c_N` of a
//! holomorphic germ truncated at a fixed order `N`. Arithmetic never reads
//! beyond the stored order and every result carries the order to which its
//! coefficients are exact: binary operations return the minimum of the
//! operand orders, `derivative` drops the order by one, `antiderivative`
//! raises it by one.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::check::DENOMINATOR_EPS;
use crate::{Error, Result};

/// Default truncation order used by callers that do not have a reason to
/// choose otherwise.
pub const DEFAULT_ORDER: usize = 64;

/// Taylor coefficients `c_0..c_N` of a holomorphic germ, coefficient of
/// `z^k` at index `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
}

impl TruncatedSeries {
    /// Builds a series from its coefficients; the order is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a series carries at least c_0");
        Self { coeffs }
    }

    /// The zero series of the given order.
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Complex64::ZERO; order + 1],
        }
    }

    /// The constant series `c` of the given order.
    pub fn constant(c: Complex64, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The identity germ `z`.
    pub fn identity(order: usize) -> Self {
        Self::monomial(Complex64::ONE, 1, order)
    }

    /// The monomial `c * z^k`; requires `k <= order`.
    pub fn monomial(c: Complex64, k: usize, order: usize) -> Self {
        assert!(k <= order, "monomial degree exceeds truncation order");
        let mut s = Self::zero(order);
        s.coeffs[k] = c;
        s
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `z^k`; panics beyond the stored order, by design: the
    /// truncation bookkeeping never invents zeros past `N`.
    pub fn coeff(&self, k: usize) -> Complex64 {
        assert!(k <= self.order(), "coefficient index beyond truncation order");
        self.coeffs[k]
    }

    /// All stored coefficients, ascending degree.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Copy truncated to a (weakly) smaller order.
    pub fn truncated(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot extend a truncation");
        Self {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    /// Degree of the highest coefficient that is exactly nonzero.
    pub fn trimmed_degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| *c != Complex64::ZERO)
            .unwrap_or(0)
    }

    fn min_order(&self, other: &Self) -> usize {
        self.order().min(other.order())
    }

    /// Product truncated at the minimum operand order.
    fn mul_truncated(&self, other: &Self, order: usize) -> Self {
        let mut coeffs = vec![Complex64::ZERO; order + 1];
        let amax = self.order().min(order);
        for (j, &a) in self.coeffs[..=amax].iter().enumerate() {
            if a == Complex64::ZERO {
                continue;
            }
            let bmax = (order - j).min(other.order());
            for (k, &b) in other.coeffs[..=bmax].iter().enumerate() {
                coeffs[j + k] += a * b;
            }
        }
        Self { coeffs }
    }

    /// Quotient `self / g` by the standard recursive convolution solve.
    pub fn divide(&self, g: &Self) -> Result<Self> {
        let g0 = g.coeffs[0];
        if g0.norm() < DENOMINATOR_EPS {
            return Err(Error::DivisionByZeroConstantTerm);
        }
        let order = self.min_order(g);
        let mut h = vec![Complex64::ZERO; order + 1];
        for k in 0..=order {
            let mut acc = self.coeffs[k];
            for j in 1..=k.min(g.order()) {
                acc -= g.coeffs[j] * h[k - j];
            }
            h[k] = acc / g0;
        }
        Ok(Self { coeffs: h })
    }

    /// Composition `self ∘ inner` for an inner germ fixing the origin.
    ///
    /// The inner constant term must be exactly zero; Möbius recentrings go
    /// through [`MobiusMap`] instead of being silently absorbed here.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if inner.coeffs[0] != Complex64::ZERO {
            return Err(Error::InnerConstantTermNonzero);
        }
        let order = self.min_order(inner);
        Ok(self.horner_compose(inner, order))
    }

    /// Horner-style nested truncated composition, treating `self` as the
    /// exact polynomial given by its stored coefficients. Unlike
    /// [`TruncatedSeries::compose`] this is well defined for inner series
    /// with nonzero constant term, which is how quadratic differentials are
    /// recomposed around a moved base point.
    pub fn horner_compose(&self, inner: &Self, order: usize) -> Self {
        let deg = self.trimmed_degree();
        let mut acc = TruncatedSeries::constant(self.coeffs[deg], order);
        for k in (0..deg).rev() {
            acc = acc.mul_truncated(inner, order);
            acc.coeffs[0] += self.coeffs[k];
        }
        acc
    }

    /// Term-by-term derivative; drops the order by one.
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(k, &c)| c * (k + 1) as f64)
            .collect();
        Self { coeffs }
    }

    /// Term-by-term antiderivative with constant term zero; raises the
    /// order by one (all coefficients of the result are exact).
    pub fn antiderivative(&self) -> Self {
        let mut coeffs = vec![Complex64::ZERO; self.order() + 2];
        for (k, &c) in self.coeffs.iter().enumerate() {
            coeffs[k + 1] = c / (k + 1) as f64;
        }
        Self { coeffs }
    }

    /// Formal exponential, solving `g' = f' g` with `g(0) = exp(f(0))`.
    pub fn exp(&self) -> Self {
        let order = self.order();
        let mut g = vec![Complex64::ZERO; order + 1];
        g[0] = self.coeffs[0].exp();
        for k in 0..order {
            // (k+1) g_{k+1} = sum_{j=0..k} (j+1) f_{j+1} g_{k-j}
            let mut acc = Complex64::ZERO;
            for j in 0..=k {
                acc += (j + 1) as f64 * self.coeffs[j + 1] * g[k - j];
            }
            g[k + 1] = acc / (k + 1) as f64;
        }
        Self { coeffs: g }
    }

    /// Formal logarithm of a series with constant term 1.
    pub fn log(&self) -> Result<Self> {
        if (self.coeffs[0] - Complex64::ONE).norm() > 1e-9 {
            return Err(Error::LogOfNonUnitConstantTerm);
        }
        // g' = f'/f, g(0) = ln f(0); f(0) = 1 up to rounding from upstream ops.
        let order = self.order();
        let quot = self.derivative().divide(&self.truncated(order.max(1) - 1))?;
        let mut g = quot.antiderivative();
        g.coeffs[0] = self.coeffs[0].ln();
        Ok(g.truncated(order))
    }

    /// Schwarzian derivative `S(f) = (f''/f')' - (f''/f')^2 / 2`, exact to
    /// order `N - 3`.
    pub fn schwarzian(&self) -> Result<Self> {
        assert!(self.order() >= 3, "schwarzian needs order >= 3");
        let theta = self.pre_schwarzian()?;
        let theta_sq = &theta * &theta;
        let result = &theta.derivative() - &(&theta_sq * Complex64::new(0.5, 0.0));
        Ok(result)
    }

    /// Pre-Schwarzian derivative `f''/f'`, exact to order `N - 2`.
    pub fn pre_schwarzian(&self) -> Result<Self> {
        assert!(self.order() >= 2, "pre-schwarzian needs order >= 2");
        if self.coeffs[1].norm() < DENOMINATOR_EPS {
            return Err(Error::VanishingFirstDerivative);
        }
        let fp = self.derivative();
        let fpp = fp.derivative();
        fpp.divide(&fp)
    }

    /// Horner evaluation of the truncated polynomial. Deterministic
    /// summation order.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Compositional inverse of a germ with `f(0) = 0`, `f'(0) != 0`, by
    /// Newton iteration on `f ∘ g - z`.
    pub fn reverted(&self) -> Result<Self> {
        if self.coeffs[0] != Complex64::ZERO {
            return Err(Error::InnerConstantTermNonzero);
        }
        if self.coeffs[1].norm() < DENOMINATOR_EPS {
            return Err(Error::VanishingFirstDerivative);
        }
        let order = self.order();
        let fp = self.derivative();
        let mut g = Self::monomial(Complex64::ONE / self.coeffs[1], 1, order);
        // Newton doubles the number of correct coefficients per step.
        let mut correct = 1usize;
        while correct < order {
            let residual = &self.horner_compose(&g, order) - &Self::identity(order);
            let slope = fp.horner_compose(&g, order);
            g = &g - &residual.divide(&slope)?;
            correct *= 2;
        }
        Ok(g)
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: Self) -> TruncatedSeries {
        let order = self.min_order(rhs);
        let coeffs = (0..=order).map(|k| self.coeffs[k] + rhs.coeffs[k]).collect();
        TruncatedSeries { coeffs }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: Self) -> TruncatedSeries {
        let order = self.min_order(rhs);
        let coeffs = (0..=order).map(|k| self.coeffs[k] - rhs.coeffs[k]).collect();
        TruncatedSeries { coeffs }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: Self) -> TruncatedSeries {
        self.mul_truncated(rhs, self.min_order(rhs))
    }
}

impl Mul<Complex64> for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: Complex64) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|&c| c * rhs).collect(),
        }
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|&c| -c).collect(),
        }
    }
}

/// Fractional linear map `z -> (az + b)/(cz + d)`, normalized on
/// construction so that `ad - bc = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl MobiusMap {
    /// Normalizes the entries to unit determinant.
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let det = a * d - b * c;
        if det.norm() < DENOMINATOR_EPS {
            return Err(Error::DegenerateMobiusMap);
        }
        let s = det.sqrt();
        Ok(Self {
            a: a / s,
            b: b / s,
            c: c / s,
            d: d / s,
        })
    }

    pub fn identity() -> Self {
        Self {
            a: Complex64::ONE,
            b: Complex64::ZERO,
            c: Complex64::ZERO,
            d: Complex64::ONE,
        }
    }

    /// Disk automorphism `z -> (z + w)/(1 + conj(w) z)` carrying the origin
    /// to `w`; requires `|w| < 1`.
    pub fn disk_translation(w: Complex64) -> Result<Self> {
        if w.norm() >= 1.0 {
            return Err(Error::BasePointOutsideDisk { modulus: w.norm() });
        }
        Self::new(Complex64::ONE, w, w.conj(), Complex64::ONE)
    }

    /// Lower-triangular unipotent map `z -> z/(cz + 1)`. Fixes the origin
    /// with derivative one and shifts the second Taylor coefficient of a
    /// normalized germ by `-c` under post-composition.
    pub fn lower_triangular(c: Complex64) -> Self {
        Self {
            a: Complex64::ONE,
            b: Complex64::ZERO,
            c,
            d: Complex64::ONE,
        }
    }

    /// Pointwise application.
    pub fn apply(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    /// Post-composition `(a f + b)/(c f + d)` as a truncated series.
    pub fn post_compose(&self, f: &TruncatedSeries) -> Result<TruncatedSeries> {
        let order = f.order();
        let num = &(f * self.a) + &TruncatedSeries::constant(self.b, order);
        let den = &(f * self.c) + &TruncatedSeries::constant(self.d, order);
        if den.coeff(0).norm() < DENOMINATOR_EPS {
            return Err(Error::PoleAtOrigin);
        }
        num.divide(&den)
    }

    /// Series expansions of `M(z)` and `M'(z)^2` about the origin, the
    /// inner data needed to recompose a quadratic differential. Requires the
    /// map to be finite at the origin.
    pub fn inner_expansion(&self, order: usize) -> Result<(TruncatedSeries, TruncatedSeries)> {
        if self.d.norm() < DENOMINATOR_EPS {
            return Err(Error::PoleAtOrigin);
        }
        let linear = |c0: Complex64, c1: Complex64| {
            let mut coeffs = vec![Complex64::ZERO; order + 1];
            coeffs[0] = c0;
            if order >= 1 {
                coeffs[1] = c1;
            }
            TruncatedSeries::new(coeffs)
        };
        let num = linear(self.b, self.a);
        let den = linear(self.d, self.c);
        let m = num.divide(&den)?;
        // ad - bc = 1, so M'(z) = 1/(cz + d)^2.
        let recip = TruncatedSeries::constant(Complex64::ONE, order).divide(&den)?;
        let sq = &recip * &recip;
        let mprime_sq = &sq * &sq;
        Ok((m, mprime_sq))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::coeff_close;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn assert_series_close(got: &TruncatedSeries, want: &TruncatedSeries) {
        let order = got.order().min(want.order());
        for k in 0..=order {
            assert!(
                coeff_close(got.coeff(k), want.coeff(k)),
                "coefficient {k}: got {}, want {}",
                got.coeff(k),
                want.coeff(k)
            );
        }
    }

    /// 1/(1-z) as a truncated geometric series.
    fn geometric(order: usize) -> TruncatedSeries {
        TruncatedSeries::new(vec![Complex64::ONE; order + 1])
    }

    #[test]
    fn polynomial_product() {
        // (1+z)(1-z) = 1 - z^2
        let f = TruncatedSeries::new(vec![re(1.0), re(1.0), re(0.0)]);
        let g = TruncatedSeries::new(vec![re(1.0), re(-1.0), re(0.0)]);
        let want = TruncatedSeries::new(vec![re(1.0), re(0.0), re(-1.0)]);
        assert_series_close(&(&f * &g), &want);
    }

    #[test]
    fn geometric_series_by_division() {
        let one = TruncatedSeries::constant(Complex64::ONE, 16);
        let denom = TruncatedSeries::new(
            (0..=16)
                .map(|k| if k == 0 { re(1.0) } else if k == 1 { re(-1.0) } else { re(0.0) })
                .collect(),
        );
        assert_series_close(&one.divide(&denom).unwrap(), &geometric(16));
    }

    #[test]
    fn subtraction_cancels() {
        let f = TruncatedSeries::new(vec![re(0.0), re(1.0), re(1.0)]);
        let g = TruncatedSeries::new(vec![re(0.0), re(1.0), re(0.0)]);
        let want = TruncatedSeries::monomial(re(1.0), 2, 2);
        assert_series_close(&(&f - &g), &want);
    }

    #[test]
    fn division_by_zero_constant_term_is_rejected() {
        let f = TruncatedSeries::identity(4);
        assert_eq!(
            f.divide(&TruncatedSeries::identity(4)),
            Err(Error::DivisionByZeroConstantTerm)
        );
    }

    #[test]
    fn compose_square_with_scaling() {
        // f = z^2, g = 2z  ->  4z^2
        let f = TruncatedSeries::monomial(re(1.0), 2, 8);
        let g = TruncatedSeries::monomial(re(2.0), 1, 8);
        let want = TruncatedSeries::monomial(re(4.0), 2, 8);
        assert_series_close(&f.compose(&g).unwrap(), &want);
    }

    #[test]
    fn compose_geometric_with_square() {
        // 1/(1-z) ∘ z^2 = sum z^{2k}
        let f = geometric(16);
        let g = TruncatedSeries::monomial(re(1.0), 2, 16);
        let got = f.compose(&g).unwrap();
        for k in 0..=16 {
            let want = if k % 2 == 0 { re(1.0) } else { re(0.0) };
            assert!(coeff_close(got.coeff(k), want), "k = {k}");
        }
    }

    #[test]
    fn compose_requires_origin_fixing_inner() {
        let f = geometric(8);
        let g = TruncatedSeries::constant(re(0.5), 8);
        assert_eq!(f.compose(&g), Err(Error::InnerConstantTermNonzero));
    }

    #[test]
    fn exp_compose_log_recovers_identity_plus_one() {
        let order = DEFAULT_ORDER;
        let one_plus_z = &TruncatedSeries::identity(order)
            + &TruncatedSeries::constant(Complex64::ONE, order);
        let log = one_plus_z.log().unwrap();
        // exp-series composed with log(1+z)-series, coefficientwise roundtrip
        let exp_series = TruncatedSeries::identity(order).exp();
        let roundtrip = exp_series.compose(&log).unwrap();
        assert_series_close(&roundtrip, &one_plus_z);
        // and the direct functional roundtrip
        assert_series_close(&log.exp(), &one_plus_z);
    }

    #[test]
    fn log_requires_unit_constant_term() {
        let f = TruncatedSeries::constant(re(2.0), 4);
        assert_eq!(f.log(), Err(Error::LogOfNonUnitConstantTerm));
    }

    #[test]
    fn derivative_and_antiderivative() {
        let f = TruncatedSeries::monomial(re(1.0), 3, 6);
        assert_series_close(&f.derivative(), &TruncatedSeries::monomial(re(3.0), 2, 5));
        let one = TruncatedSeries::constant(Complex64::ONE, 4);
        assert_series_close(&one.antiderivative(), &TruncatedSeries::identity(5));
    }

    #[test]
    fn schwarzian_of_identity_vanishes() {
        let s = TruncatedSeries::identity(DEFAULT_ORDER).schwarzian().unwrap();
        for k in 0..=s.order() {
            assert!(coeff_close(s.coeff(k), Complex64::ZERO));
        }
    }

    #[test]
    fn schwarzian_annihilates_mobius() {
        // z/(1-z) expanded: coefficients 0,1,1,1,...
        let mut coeffs = vec![Complex64::ONE; DEFAULT_ORDER + 1];
        coeffs[0] = Complex64::ZERO;
        let f = TruncatedSeries::new(coeffs);
        let s = f.schwarzian().unwrap();
        for k in 0..=s.order() {
            assert!(coeff_close(s.coeff(k), Complex64::ZERO), "k = {k}");
        }
    }

    /// Koebe function z/(1-z)^2 = sum n z^n.
    fn koebe(order: usize) -> TruncatedSeries {
        TruncatedSeries::new((0..=order).map(|n| re(n as f64)).collect())
    }

    /// Expansion of -6/(1-z^2)^2: coefficient -6(m+1) at z^{2m}.
    /// Independent closed form for the Schwarzian of the Koebe function,
    /// obtained by differentiating the geometric series.
    fn koebe_schwarzian_oracle(order: usize) -> TruncatedSeries {
        TruncatedSeries::new(
            (0..=order)
                .map(|k| {
                    if k % 2 == 0 {
                        re(-6.0 * (k as f64 / 2.0 + 1.0))
                    } else {
                        Complex64::ZERO
                    }
                })
                .collect(),
        )
    }

    #[test]
    fn schwarzian_of_koebe_matches_closed_form() {
        let s = koebe(DEFAULT_ORDER).schwarzian().unwrap();
        assert_series_close(&s, &koebe_schwarzian_oracle(s.order()));
    }

    #[test]
    fn pre_schwarzian_examples() {
        let theta = TruncatedSeries::identity(8).pre_schwarzian().unwrap();
        for k in 0..=theta.order() {
            assert!(coeff_close(theta.coeff(k), Complex64::ZERO));
        }

        // f = z/(1-z): theta = 2/(1-z) = 2 sum z^k
        let mut coeffs = vec![Complex64::ONE; 17];
        coeffs[0] = Complex64::ZERO;
        let f = TruncatedSeries::new(coeffs);
        let theta = f.pre_schwarzian().unwrap();
        for k in 0..=theta.order() {
            assert!(coeff_close(theta.coeff(k), re(2.0)), "k = {k}");
        }

        // f = z + z^2/2: theta = f''/f' = 1/(1+z) = sum (-1)^k z^k
        let f = TruncatedSeries::new(vec![re(0.0), re(1.0), re(0.5), re(0.0), re(0.0)]);
        let theta = f.pre_schwarzian().unwrap();
        for k in 0..=theta.order() {
            let want = re(if k % 2 == 0 { 1.0 } else { -1.0 });
            assert!(coeff_close(theta.coeff(k), want), "k = {k}");
        }
    }

    #[test]
    fn vanishing_first_derivative_is_rejected() {
        let f = TruncatedSeries::monomial(re(1.0), 2, 6);
        assert_eq!(f.pre_schwarzian(), Err(Error::VanishingFirstDerivative));
        assert_eq!(f.schwarzian(), Err(Error::VanishingFirstDerivative));
    }

    #[test]
    fn mobius_normalization_and_identity() {
        let m = MobiusMap::new(re(3.0), re(0.0), re(0.0), re(3.0)).unwrap();
        assert!((m.a * m.d - m.b * m.c - Complex64::ONE).norm() < 1e-15);

        let f = koebe(12);
        let back = MobiusMap::identity().post_compose(&f).unwrap();
        assert_series_close(&back, &f);
    }

    #[test]
    fn lower_triangular_post_compose_is_geometric() {
        // z/(z+1) = z - z^2 + z^3 - ...
        let f = TruncatedSeries::identity(12);
        let got = MobiusMap::lower_triangular(Complex64::ONE)
            .post_compose(&f)
            .unwrap();
        for k in 1..=12 {
            let want = re(if k % 2 == 1 { 1.0 } else { -1.0 });
            assert!(coeff_close(got.coeff(k), want), "k = {k}");
        }
        assert!(coeff_close(got.coeff(0), Complex64::ZERO));
    }

    #[test]
    fn disk_translation_at_origin_is_identity() {
        let (m, mp2) = MobiusMap::disk_translation(Complex64::ZERO)
            .unwrap()
            .inner_expansion(8)
            .unwrap();
        assert_series_close(&m, &TruncatedSeries::identity(8));
        assert_series_close(&mp2, &TruncatedSeries::constant(Complex64::ONE, 8));
    }

    #[test]
    fn disk_translation_inner_expansion_closed_form() {
        // gamma_w(z) = w + (1-|w|^2) sum_{k>=1} (-conj(w))^{k-1} z^k
        let w = c(0.3, -0.4);
        let (m, mp2) = MobiusMap::disk_translation(w)
            .unwrap()
            .inner_expansion(10)
            .unwrap();
        let s = 1.0 - w.norm_sqr();
        assert!(coeff_close(m.coeff(0), w));
        for k in 1..=10 {
            let want = (-w.conj()).powu(k as u32 - 1) * s;
            assert!(coeff_close(m.coeff(k), want), "k = {k}");
        }
        // M'(z)^2 = (1-|w|^2)^2 sum_k C(k+3,3) (-conj(w))^k z^k
        for k in 0..=10u32 {
            let binom = ((k + 1) * (k + 2) * (k + 3)) as f64 / 6.0;
            let want = (-w.conj()).powu(k) * (s * s * binom);
            assert!(coeff_close(mp2.coeff(k as usize), want), "k = {k}");
        }
    }

    #[test]
    fn base_point_outside_disk_is_rejected() {
        assert!(matches!(
            MobiusMap::disk_translation(c(1.2, 0.0)),
            Err(Error::BasePointOutsideDisk { .. })
        ));
    }

    #[test]
    fn pole_at_origin_is_rejected() {
        // (1*f + 0)/(1*f + 0) with f(0) = 0 has a 0/0 denominator at z = 0.
        let f = TruncatedSeries::identity(4);
        let m = MobiusMap::new(re(1.0), re(0.0), re(1.0), re(0.0));
        assert_eq!(m, Err(Error::DegenerateMobiusMap));
        let m = MobiusMap::new(re(1.0), re(1.0), re(1.0), re(0.0)).unwrap();
        assert_eq!(m.post_compose(&f), Err(Error::PoleAtOrigin));
    }

    #[test]
    fn eval_examples() {
        let f = TruncatedSeries::new(vec![re(1.0), re(1.0)]);
        assert!((f.eval(c(0.0, 1.0)) - c(1.0, 1.0)).norm() < 1e-15);

        let f = geometric(DEFAULT_ORDER);
        let z = re(0.5);
        let want = (1.0 - 0.5f64.powi(DEFAULT_ORDER as i32 + 1)) / 0.5;
        assert!((f.eval(z) - re(want)).norm() < 1e-15);
        assert!((f.eval(z) - re(2.0)).norm() < 1e-15);

        assert_eq!(TruncatedSeries::identity(4).eval(Complex64::ZERO), Complex64::ZERO);
    }

    #[test]
    fn reversion_inverts_composition() {
        let f = TruncatedSeries::new(
            (0..=24)
                .map(|k| match k {
                    0 => Complex64::ZERO,
                    1 => re(1.0),
                    _ => c(0.3, 0.1) * re(0.5f64.powi(k)),
                })
                .collect(),
        );
        let g = f.reverted().unwrap();
        let round = f.compose(&g).unwrap();
        assert_series_close(&round, &TruncatedSeries::identity(24));
    }

    #[test]
    fn orders_follow_the_bookkeeping() {
        let f = TruncatedSeries::zero(10);
        let g = TruncatedSeries::zero(7);
        assert_eq!((&f + &g).order(), 7);
        assert_eq!((&f * &g).order(), 7);
        assert_eq!(f.derivative().order(), 9);
        assert_eq!(f.antiderivative().order(), 11);
        let k = koebe(10);
        assert_eq!(k.schwarzian().unwrap().order(), 7);
        assert_eq!(k.pre_schwarzian().unwrap().order(), 8);
    }
}
