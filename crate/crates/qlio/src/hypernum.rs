//! Quaternion algebra and the bounded hyper-to-real projection.
//!
//! Each decision variable is stored as a quaternion: four real coefficients,
//! one for the real part and one per fundamental unit (i, j, k). The
//! optimizers only ever add, subtract and scale quaternions, clip their
//! coefficients to `[0, 1]` and project them onto a real interval with a
//! Minkowski p-norm, so no Hamilton product is provided.
//!
//! The projection of a clipped quaternion `q` onto `[l, u]` is
//!
//! ```text
//! M(q, p) = l + (u - l) * ||q||_p / 4^(1/p)
//! ```
//!
//! which is guaranteed to land inside `[l, u]` because every clipped
//! coefficient satisfies `|z| <= 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of real coefficients in a quaternion.
pub const SPACE_DIM: usize = 4;

/// A hypercomplex number `a + bi + cj + dk` stored as its four real
/// coefficients. Coefficients are always finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    coeffs: [f64; SPACE_DIM],
}

impl Quaternion {
    /// Builds a quaternion from the real part `a` and the i, j, k parts.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Self::from_coefficients([a, b, c, d])
    }

    pub fn from_coefficients(coeffs: [f64; SPACE_DIM]) -> Result<Self> {
        for &z in &coeffs {
            if !z.is_finite() {
                return Err(Error::NonFinite(z));
            }
        }
        Ok(Self { coeffs })
    }

    pub const fn zero() -> Self {
        Self {
            coeffs: [0.0; SPACE_DIM],
        }
    }

    pub fn coefficients(&self) -> [f64; SPACE_DIM] {
        self.coeffs
    }

    /// Coefficient-wise sum. Errors if any resulting coefficient overflows.
    pub fn add(&self, other: &Quaternion) -> Result<Quaternion> {
        let mut coeffs = [0.0; SPACE_DIM];
        for (out, (a, b)) in coeffs
            .iter_mut()
            .zip(self.coeffs.iter().zip(other.coeffs.iter()))
        {
            *out = a + b;
        }
        Self::from_coefficients(coeffs)
    }

    /// Coefficient-wise difference.
    pub fn sub(&self, other: &Quaternion) -> Result<Quaternion> {
        let mut coeffs = [0.0; SPACE_DIM];
        for (out, (a, b)) in coeffs
            .iter_mut()
            .zip(self.coeffs.iter().zip(other.coeffs.iter()))
        {
            *out = a - b;
        }
        Self::from_coefficients(coeffs)
    }

    /// Multiplies every coefficient by the scalar `k`.
    pub fn scale(&self, k: f64) -> Result<Quaternion> {
        if !k.is_finite() {
            return Err(Error::NonFinite(k));
        }
        let mut coeffs = self.coeffs;
        for z in &mut coeffs {
            *z *= k;
        }
        Self::from_coefficients(coeffs)
    }

    /// Clamps every coefficient to `[0, 1]`. Idempotent.
    pub fn clipped(&self) -> Quaternion {
        let mut coeffs = self.coeffs;
        for z in &mut coeffs {
            *z = z.clamp(0.0, 1.0);
        }
        Quaternion { coeffs }
    }

    /// Minkowski p-norm `(sum |z_d|^p)^(1/p)`.
    ///
    /// Equals the Taxicab norm at `p = 1` and the Euclidean norm at `p = 2`.
    pub fn pnorm(&self, p: PExponent) -> f64 {
        let p = p.value();
        let sum: f64 = self.coeffs.iter().map(|&z| abs_pow(z, p)).sum();
        root(sum, p)
    }
}

impl TryFrom<[f64; SPACE_DIM]> for Quaternion {
    type Error = Error;

    fn try_from(coeffs: [f64; SPACE_DIM]) -> Result<Self> {
        Self::from_coefficients(coeffs)
    }
}

impl From<Quaternion> for [f64; SPACE_DIM] {
    fn from(q: Quaternion) -> Self {
        q.coeffs
    }
}

/// `|z|^p`, with repeated multiplication for integer exponents.
fn abs_pow(z: f64, p: f64) -> f64 {
    let a = z.abs();
    if p.fract() == 0.0 && p <= i32::MAX as f64 {
        a.powi(p as i32)
    } else {
        a.powf(p)
    }
}

/// `x^(1/p)`, sharing the integer fast paths with [`abs_pow`].
fn root(x: f64, p: f64) -> f64 {
    if p == 1.0 {
        x
    } else if p == 2.0 {
        x.sqrt()
    } else {
        x.powf(p.recip())
    }
}

/// Feasible interval `[lower, upper]` of one decision variable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "(f64, f64)", into = "(f64, f64)")]
pub struct Bounds {
    lower: f64,
    upper: f64,
}

impl Bounds {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !lower.is_finite() || !upper.is_finite() || lower >= upper {
            return Err(Error::InvalidBounds { lower, upper });
        }
        Ok(Self { lower, upper })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lower && x <= self.upper
    }
}

impl TryFrom<(f64, f64)> for Bounds {
    type Error = Error;

    fn try_from((lower, upper): (f64, f64)) -> Result<Self> {
        Self::new(lower, upper)
    }
}

impl From<Bounds> for (f64, f64) {
    fn from(b: Bounds) -> Self {
        (b.lower, b.upper)
    }
}

/// Minkowski norm exponent, `p >= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PExponent {
    value: f64,
}

impl PExponent {
    /// Taxicab norm exponent (`p = 1`).
    pub const TAXICAB: PExponent = PExponent { value: 1.0 };
    /// Euclidean norm exponent (`p = 2`), the projection used during the
    /// global phase.
    pub const EUCLIDEAN: PExponent = PExponent { value: 2.0 };

    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || value < 1.0 {
            return Err(Error::InvalidExponent(value));
        }
        Ok(Self { value })
    }

    pub fn value(&self) -> f64 {
        self.value
    }
}

/// Projects a quaternion onto the real interval `bounds`.
///
/// Coefficients are clipped to `[0, 1]` first, so the result is always
/// inside the interval; a final clamp absorbs floating-point overshoot.
pub fn map_to_real(q: &Quaternion, bounds: Bounds, p: PExponent) -> f64 {
    let clipped = q.clipped();
    let norm = clipped.pnorm(p);
    let scale = root(SPACE_DIM as f64, p.value());
    let x = bounds.lower + bounds.width() * (norm / scale);
    x.clamp(bounds.lower, bounds.upper)
}

/// Element-wise [`map_to_real`] over a candidate solution.
pub fn map_vector(qs: &[Quaternion], bounds: &[Bounds], p: PExponent) -> Result<Vec<f64>> {
    if qs.len() != bounds.len() {
        return Err(Error::ShapeMismatch {
            expected: bounds.len(),
            actual: qs.len(),
        });
    }
    if qs.is_empty() {
        return Err(Error::ShapeMismatch {
            expected: 1,
            actual: 0,
        });
    }
    Ok(qs
        .iter()
        .zip(bounds.iter())
        .map(|(q, &b)| map_to_real(q, b, p))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn q(a: f64, b: f64, c: f64, d: f64) -> Quaternion {
        Quaternion::new(a, b, c, d).unwrap()
    }

    #[test]
    fn add_identity_and_inverse() {
        let x = q(1.0, 2.0, 3.0, 4.0);
        assert_eq!(x.add(&Quaternion::zero()).unwrap(), x);
        assert_eq!(
            q(1.0, 1.0, 1.0, 1.0).add(&x).unwrap(),
            q(2.0, 3.0, 4.0, 5.0)
        );
        assert_eq!(
            q(0.5, -0.5, 0.25, 0.0)
                .add(&q(-0.5, 0.5, -0.25, 0.0))
                .unwrap(),
            Quaternion::zero()
        );
    }

    #[test]
    fn sub_identities() {
        let x = q(1.0, 2.0, 3.0, 4.0);
        assert_eq!(x.sub(&x).unwrap(), Quaternion::zero());
        assert_eq!(x.sub(&Quaternion::zero()).unwrap(), x);
        assert_eq!(
            q(2.0, 3.0, 4.0, 5.0).sub(&q(1.0, 1.0, 1.0, 1.0)).unwrap(),
            q(1.0, 2.0, 3.0, 4.0)
        );
    }

    #[test]
    fn scale_identities() {
        let x = q(1.0, 2.0, 3.0, 4.0);
        assert_eq!(x.scale(1.0).unwrap(), x);
        assert_eq!(
            q(9.0, 9.0, 9.0, 9.0).scale(0.0).unwrap(),
            Quaternion::zero()
        );
        assert_eq!(x.scale(2.0).unwrap(), q(2.0, 4.0, 6.0, 8.0));
    }

    #[test]
    fn non_finite_inputs_are_rejected() {
        assert!(Quaternion::new(f64::NAN, 0.0, 0.0, 0.0).is_err());
        assert!(Quaternion::new(f64::INFINITY, 0.0, 0.0, 0.0).is_err());
        let big = q(f64::MAX, 0.0, 0.0, 0.0);
        assert!(matches!(big.scale(2.0), Err(Error::NonFinite(_))));
        assert!(matches!(big.add(&big), Err(Error::NonFinite(_))));
        let small = q(-f64::MAX, 0.0, 0.0, 0.0);
        assert!(matches!(big.sub(&small), Err(Error::NonFinite(_))));
    }

    #[test]
    fn pnorm_reference_points() {
        let ones = q(1.0, 1.0, 1.0, 1.0);
        assert_eq!(ones.pnorm(PExponent::EUCLIDEAN), 2.0);
        assert_eq!(ones.pnorm(PExponent::TAXICAB), 4.0);
        assert_eq!(Quaternion::zero().pnorm(PExponent::new(3.7).unwrap()), 0.0);
        assert_eq!(q(3.0, 4.0, 0.0, 0.0).pnorm(PExponent::EUCLIDEAN), 5.0);
    }

    #[test]
    fn exponent_below_one_is_rejected() {
        assert!(matches!(
            PExponent::new(0.99),
            Err(Error::InvalidExponent(_))
        ));
        assert!(PExponent::new(f64::NAN).is_err());
        assert!(PExponent::new(1.0).is_ok());
    }

    #[test]
    fn clip_both_sides() {
        assert_eq!(
            q(-1.0, 2.0, 0.5, 1.5).clipped(),
            q(0.0, 1.0, 0.5, 1.0)
        );
        let inside = q(0.5, 0.2, 0.9, 0.1);
        assert_eq!(inside.clipped(), inside);
    }

    #[test]
    fn map_reference_points() {
        let wide = Bounds::new(-10.0, 10.0).unwrap();
        let unit = Bounds::new(0.0, 1.0).unwrap();
        let saturated = q(1.0, 1.0, 1.0, 1.0);
        assert_eq!(map_to_real(&saturated, wide, PExponent::EUCLIDEAN), 10.0);
        assert_eq!(
            map_to_real(&Quaternion::zero(), wide, PExponent::new(3.3).unwrap()),
            -10.0
        );
        let single = q(1.0, 0.0, 0.0, 0.0);
        assert_eq!(map_to_real(&single, unit, PExponent::EUCLIDEAN), 0.5);
        assert_eq!(map_to_real(&single, unit, PExponent::TAXICAB), 0.25);
    }

    #[test]
    fn map_vector_matches_elementwise_and_checks_shape() {
        let b = Bounds::new(-10.0, 10.0).unwrap();
        let qs = vec![q(1.0, 1.0, 1.0, 1.0), Quaternion::zero()];
        let mapped = map_vector(&qs, &[b, b], PExponent::EUCLIDEAN).unwrap();
        assert_eq!(mapped, vec![10.0, -10.0]);
        assert!(matches!(
            map_vector(&qs, &[b], PExponent::EUCLIDEAN),
            Err(Error::ShapeMismatch { .. })
        ));
        assert!(map_vector(&[], &[], PExponent::EUCLIDEAN).is_err());
    }

    #[test]
    fn invalid_bounds_are_rejected() {
        assert!(Bounds::new(1.0, 1.0).is_err());
        assert!(Bounds::new(2.0, 1.0).is_err());
        assert!(Bounds::new(f64::NEG_INFINITY, 1.0).is_err());
    }

    #[test]
    fn map_is_continuous_in_p() {
        // Dense sweep over p: adjacent samples at dp = 1e-3 must move the
        // projection by less than 1% of the interval width.
        let mut rng_state = 0x9e3779b97f4a7c15_u64;
        let mut next = move || {
            // splitmix64, enough for test fuzz
            rng_state = rng_state.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = rng_state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            (z ^ (z >> 31)) as f64 / u64::MAX as f64
        };
        for _ in 0..20 {
            let qq = q(next(), next(), next(), next()).clipped();
            let b = Bounds::new(-10.0, 10.0).unwrap();
            let dp = 1e-3;
            let mut prev = map_to_real(&qq, b, PExponent::new(1.0).unwrap());
            let mut p = 1.0 + dp;
            while p <= 5.0 {
                let cur = map_to_real(&qq, b, PExponent::new(p).unwrap());
                assert!(
                    (cur - prev).abs() < b.width() * 1e-2,
                    "jump at p={p}: {prev} -> {cur}"
                );
                prev = cur;
                p += dp;
            }
        }
    }

    prop_compose! {
        fn finite_quaternion()(coeffs in prop::array::uniform4(-1.0e6..1.0e6f64)) -> Quaternion {
            Quaternion::from_coefficients(coeffs).unwrap()
        }
    }

    prop_compose! {
        fn unit_quaternion()(coeffs in prop::array::uniform4(0.0..=1.0f64)) -> Quaternion {
            Quaternion::from_coefficients(coeffs).unwrap()
        }
    }

    /// `|x - y|` bounded relative to the magnitude of the terms that were
    /// combined, so cancellation-heavy cases get a fair tolerance.
    fn assert_close(x: f64, y: f64, magnitude: f64) {
        let tol = 1e-12 * magnitude.max(1.0);
        assert!((x - y).abs() <= tol, "{x} vs {y} (magnitude {magnitude})");
    }

    proptest! {
        #[test]
        fn vector_space_axioms(a in finite_quaternion(), b in finite_quaternion(),
                               c in finite_quaternion(), k in -100.0..100.0f64,
                               m in -100.0..100.0f64) {
            let mag = |q: &Quaternion| {
                q.coefficients().iter().fold(0.0f64, |acc, z| acc.max(z.abs()))
            };
            // commutativity
            let ab = a.add(&b).unwrap();
            let ba = b.add(&a).unwrap();
            for (x, y) in ab.coefficients().iter().zip(ba.coefficients()) {
                assert_close(*x, y, mag(&a) + mag(&b));
            }
            // associativity
            let left = a.add(&b).unwrap().add(&c).unwrap();
            let right = a.add(&b.add(&c).unwrap()).unwrap();
            for (x, y) in left.coefficients().iter().zip(right.coefficients()) {
                assert_close(*x, y, mag(&a) + mag(&b) + mag(&c));
            }
            // scalar distributivity over quaternion addition
            let lhs = a.add(&b).unwrap().scale(k).unwrap();
            let rhs = a.scale(k).unwrap().add(&b.scale(k).unwrap()).unwrap();
            for (x, y) in lhs.coefficients().iter().zip(rhs.coefficients()) {
                assert_close(*x, y, k.abs() * (mag(&a) + mag(&b)));
            }
            // scalar distributivity over scalar addition
            let lhs = a.scale(k + m).unwrap();
            let rhs = a.scale(k).unwrap().add(&a.scale(m).unwrap()).unwrap();
            for (x, y) in lhs.coefficients().iter().zip(rhs.coefficients()) {
                assert_close(*x, y, (k.abs() + m.abs()) * mag(&a));
            }
            // subtraction is addition of the negation
            let lhs = a.sub(&b).unwrap();
            let rhs = a.add(&b.scale(-1.0).unwrap()).unwrap();
            for (x, y) in lhs.coefficients().iter().zip(rhs.coefficients()) {
                assert_close(*x, y, mag(&a) + mag(&b));
            }
        }

        #[test]
        fn euclidean_pnorm_matches_naive(a in finite_quaternion()) {
            let naive = a
                .coefficients()
                .iter()
                .map(|z| z * z)
                .sum::<f64>()
                .sqrt();
            let norm = a.pnorm(PExponent::EUCLIDEAN);
            prop_assert!((norm - naive).abs() <= 1e-12 * naive.max(1e-300));
        }

        #[test]
        fn pnorm_is_monotone_in_coefficients(a in unit_quaternion(),
                                             idx in 0usize..4,
                                             bump in 0.0..10.0f64,
                                             p in 1.0..=5.0f64) {
            let p = PExponent::new(p).unwrap();
            let base = a.pnorm(p);
            let mut coeffs = a.coefficients();
            coeffs[idx] = coeffs[idx].abs() + bump;
            let bigger = Quaternion::from_coefficients(coeffs).unwrap().pnorm(p);
            prop_assert!(bigger >= base - 1e-12 * base.max(1.0));
        }

        #[test]
        fn clip_is_idempotent(a in finite_quaternion()) {
            let once = a.clipped();
            prop_assert_eq!(once.clipped(), once);
            for z in once.coefficients() {
                prop_assert!((0.0..=1.0).contains(&z));
            }
        }

        #[test]
        fn mapping_stays_in_bounds(a in unit_quaternion(),
                                   lower in -1.0e3..1.0e3f64,
                                   width in 1.0e-6..1.0e3f64,
                                   p in 1.0..=5.0f64) {
            let b = Bounds::new(lower, lower + width).unwrap();
            let x = map_to_real(&a, b, PExponent::new(p).unwrap());
            prop_assert!(b.contains(x), "{x} outside [{}, {}]", b.lower(), b.upper());
        }
    }

    #[test]
    fn csendes_style_relative_check() {
        // High-accuracy spot check of the non-integer power path.
        let a = q(0.3, 0.4, 0.5, 0.6);
        let p = PExponent::new(2.5).unwrap();
        let expected = (0.3f64.powf(2.5) + 0.4f64.powf(2.5) + 0.5f64.powf(2.5)
            + 0.6f64.powf(2.5))
        .powf(1.0 / 2.5);
        assert_relative_eq!(a.pnorm(p), expected, max_relative = 1e-14);
    }
}
