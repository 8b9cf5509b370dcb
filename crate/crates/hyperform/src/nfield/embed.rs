//! Certified real embeddings.
//!
//! phi_1 sends a to the larger root (-eps + sqrt(d))/2, phi_2 to the smaller.
//! Approximations carry explicit rational error bounds; the bounds come from
//! an integer-square-root enclosure of sqrt(d), so they are rigorous.

use num_bigint::BigInt;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::element::FieldElement;

/// A real approximation with a proven error bound: the true value lies in
/// [approx - error, approx + error].
#[derive(Debug, Clone)]
pub struct Embedding {
    pub approx: BigRational,
    pub error: BigRational,
}

impl Embedding {
    fn exact(v: BigRational) -> Self {
        Embedding { approx: v, error: BigRational::zero() }
    }

    pub fn to_f64(&self) -> f64 {
        self.approx.to_f64().unwrap_or(f64::NAN)
    }
}

/// Enclosure of sqrt(d) as [s, s+1] / 2^k.
fn sqrt_enclosure(d: i64, k: u32) -> (BigInt, BigInt) {
    let scaled = BigInt::from(d) << (2 * k);
    let s = scaled.sqrt();
    let denom = BigInt::one() << k;
    (s, denom)
}

/// Both real embeddings of `e`, each within 2^-prec of the true value.
pub fn embed(e: &FieldElement, prec: u32) -> (Embedding, Embedding) {
    let field = e.field();
    if field.is_rational() || e.coeff_a().is_zero() {
        let v = BigRational::new(e.coeff_1().clone(), e.denom().clone());
        return (Embedding::exact(v.clone()), Embedding::exact(v));
    }
    let d = field.disc().unwrap();
    let eps = BigInt::from(field.eps());
    let y = e.coeff_a();
    // |phi(e) - approx| <= |y| * w / (2 den) where w = 2^-k is the sqrt width;
    // pick k so that this is below 2^-prec, with two guard bits.
    let ybits = y.abs().bits() as u32;
    let k = prec + ybits + 2;
    let (s, denom) = sqrt_enclosure(d, k);
    // midpoint of [s, s+1]/2^k as the sqrt approximation
    let sqrt_mid = BigRational::new(BigInt::from(2) * &s + 1, BigInt::from(2) * &denom);
    let half_width = BigRational::new(BigInt::one(), BigInt::from(2) * &denom);
    let den = BigRational::from(e.denom().clone());
    let x = BigRational::from(e.coeff_1().clone());
    let yq = BigRational::from(y.clone());
    let err = yq.abs() * &half_width / &den;
    let two = BigRational::from(BigInt::from(2));
    let a1 = (-BigRational::from(eps.clone()) + &sqrt_mid) / &two;
    let a2 = (-BigRational::from(eps) - &sqrt_mid) / &two;
    let v1 = (&x + &yq * a1) / &den;
    let v2 = (&x + &yq * a2) / &den;
    let err = err / two;
    (
        Embedding { approx: v1, error: err.clone() },
        Embedding { approx: v2, error: err },
    )
}

impl FieldElement {
    /// (phi_1(e), phi_2(e)) as f64, using the field's default precision.
    pub fn embed_f64(&self) -> (f64, f64) {
        let (e1, e2) = embed(self, self.field().prec().min(200));
        (e1.to_f64(), e2.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nfield::QuadField;

    /// Bisection oracle for the larger/smaller real roots of x^2 + eps*x - q.
    fn roots_by_bisection(eps: f64, q: f64) -> (f64, f64) {
        let f = |x: f64| x * x + eps * x - q;
        let mut find = |mut lo: f64, mut hi: f64| {
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if f(lo) * f(mid) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        };
        let vertex = -eps / 2.0;
        (find(vertex, vertex + q.abs() + eps.abs() + 2.0), find(vertex - q.abs() - eps.abs() - 2.0, vertex))
    }

    #[test]
    fn embed_rational_constant() {
        let k = QuadField::real_quadratic(5).unwrap();
        let one = k.one();
        let (e1, e2) = embed(&one, 60);
        assert_eq!(e1.approx, BigRational::from(BigInt::from(1)));
        assert_eq!(e2.approx, BigRational::from(BigInt::from(1)));
        assert!(e1.error.is_zero());
    }

    #[test]
    fn embed_generator_d5() {
        // a has minimal polynomial x^2 + x - 1; roots (-1 +- sqrt 5)/2
        let k = QuadField::real_quadratic(5).unwrap();
        let a = k.gen().unwrap();
        let (e1, e2) = embed(&a, 80);
        let (r1, r2) = roots_by_bisection(1.0, 1.0);
        assert!((e1.to_f64() - r1).abs() < 1e-12);
        assert!((e2.to_f64() - r2).abs() < 1e-12);
        assert!((e1.to_f64() - 0.6180339887498949).abs() < 1e-13);
        assert!((e2.to_f64() + 1.618033988749895).abs() < 1e-13);
        let bound = BigRational::new(BigInt::one(), BigInt::one() << 80);
        assert!(e1.error <= bound);
    }

    #[test]
    fn embed_linear() {
        // (1+2a)/3 maps to (1 + 2 phi(a))/3
        let k = QuadField::real_quadratic(5).unwrap();
        let e = FieldElement::from_parts(k, 1.into(), 2.into(), 3.into()).unwrap();
        let (e1, e2) = embed(&e, 70);
        let (a1, a2) = embed(&k.gen().unwrap(), 70);
        let expect1 = (BigRational::from(BigInt::one()) + BigRational::from(BigInt::from(2)) * a1.approx)
            / BigRational::from(BigInt::from(3));
        assert!((e1.approx - expect1).abs() < BigRational::new(BigInt::one(), BigInt::one() << 60));
        let expect2 = (BigRational::from(BigInt::one()) + BigRational::from(BigInt::from(2)) * a2.approx)
            / BigRational::from(BigInt::from(3));
        assert!((e2.approx - expect2).abs() < BigRational::new(BigInt::one(), BigInt::one() << 60));
    }

    #[test]
    fn embed_respects_arithmetic() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let k = QuadField::real_quadratic(13).unwrap();
        for _ in 0..1000 {
            let e = FieldElement::from_parts(
                k,
                rng.gen_range(-50i64..50).into(),
                rng.gen_range(-50i64..50).into(),
                rng.gen_range(1i64..9).into(),
            )
            .unwrap();
            let f = FieldElement::from_parts(
                k,
                rng.gen_range(-50i64..50).into(),
                rng.gen_range(-50i64..50).into(),
                rng.gen_range(1i64..9).into(),
            )
            .unwrap();
            let prod = &e * &f;
            let (p1, _) = embed(&prod, 64);
            let (a1, _) = embed(&e, 64);
            let (b1, _) = embed(&f, 64);
            // composed bound: |p - ab| <= err_p + |a| err_b + |b| err_a + err_a err_b
            let diff = (&p1.approx - &a1.approx * &b1.approx).abs();
            let bound = &p1.error
                + a1.approx.abs() * &b1.error
                + b1.approx.abs() * &a1.error
                + &a1.error * &b1.error;
            assert!(diff <= bound, "embedding not multiplicative within bounds");
        }
    }
}
