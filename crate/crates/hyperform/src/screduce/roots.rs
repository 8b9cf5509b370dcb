//! Certified complex roots of a binary form under one real embedding.
//!
//! Float Durand-Kerner locates the roots; exact Newton polishing on dyadic
//! rationals then drives them below the requested error, certified by the
//! classical bound min_i |z - alpha_i| <= n |f(z)/f'(z)| together with an
//! explicit perturbation term for the (irrational) embedded coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::binform::BinaryForm;
use crate::nfield::embed;

use super::ScreduceError;

/// A complex number with dyadic-rational coordinates.
#[derive(Debug, Clone)]
pub struct DyadicComplex {
    pub re: BigRational,
    pub im: BigRational,
}

impl DyadicComplex {
    pub fn to_f64(&self) -> (f64, f64) {
        (rat_f64(&self.re), rat_f64(&self.im))
    }

    fn sub(&self, rhs: &Self) -> Self {
        DyadicComplex { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }

    fn mul(&self, rhs: &Self) -> Self {
        DyadicComplex {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }

    fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    fn div(&self, rhs: &Self) -> Self {
        let n = rhs.norm_sq();
        let conj = DyadicComplex { re: rhs.re.clone(), im: -rhs.im.clone() };
        let p = self.mul(&conj);
        DyadicComplex { re: p.re / &n, im: p.im / &n }
    }

    /// Round coordinates to `bits` fractional bits.
    fn round_to(&self, bits: u32) -> Self {
        let scale = BigInt::one() << bits;
        let r = |x: &BigRational| -> BigRational {
            let scaled = x * BigRational::from(scale.clone());
            let rounded = scaled.round().to_integer();
            BigRational::new(rounded, scale.clone())
        };
        DyadicComplex { re: r(&self.re), im: r(&self.im) }
    }
}

/// All projective roots of a form under one embedding: the finite roots plus
/// the multiplicity of the root at infinity (at most 1 for separable forms).
#[derive(Debug, Clone)]
pub struct RootSet {
    pub finite: Vec<DyadicComplex>,
    pub inf_count: usize,
    /// Certified common error bound on each finite root.
    pub err: BigRational,
}

impl RootSet {
    pub fn finite_f64(&self) -> Vec<(f64, f64)> {
        self.finite.iter().map(|r| r.to_f64()).collect()
    }
}

pub fn rat_f64(x: &BigRational) -> f64 {
    let nb = x.numer().bits();
    let db = x.denom().bits();
    let m = nb.max(db);
    if m > 900 {
        let shift = (m - 500) as u32;
        let n = x.numer() >> shift;
        let d = x.denom() >> shift;
        if d.is_zero() {
            return if x.numer().is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
        }
        n.to_f64().unwrap_or(f64::NAN) / d.to_f64().unwrap_or(f64::NAN)
    } else {
        x.to_f64().unwrap_or(f64::NAN)
    }
}

/// Rational upper bound on sqrt(x) for x >= 0, via sqrt(n/d) = sqrt(n d)/d.
fn sqrt_upper(x: &BigRational) -> BigRational {
    debug_assert!(!x.is_negative());
    let (n, d) = (x.numer(), x.denom());
    BigRational::new((n * d).sqrt() + BigInt::one(), d.clone())
}

/// Rational lower bound on sqrt(x) for x >= 0.
fn sqrt_lower(x: &BigRational) -> BigRational {
    debug_assert!(!x.is_negative());
    let (n, d) = (x.numer(), x.denom());
    BigRational::new((n * d).sqrt(), d.clone())
}

#[derive(Clone, Copy, Debug)]
struct Cf64 {
    re: f64,
    im: f64,
}

impl Cf64 {
    fn new(re: f64, im: f64) -> Self {
        Cf64 { re, im }
    }
    fn add(self, o: Self) -> Self {
        Cf64::new(self.re + o.re, self.im + o.im)
    }
    fn sub(self, o: Self) -> Self {
        Cf64::new(self.re - o.re, self.im - o.im)
    }
    fn mul(self, o: Self) -> Self {
        Cf64::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
    fn div(self, o: Self) -> Self {
        let n = o.re * o.re + o.im * o.im;
        Cf64::new((self.re * o.re + self.im * o.im) / n, (self.im * o.re - self.re * o.im) / n)
    }
    fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }
}

fn horner_f64(cs: &[f64], z: Cf64) -> Cf64 {
    let mut acc = Cf64::new(0.0, 0.0);
    for &c in cs.iter().rev() {
        acc = acc.mul(z).add(Cf64::new(c, 0.0));
    }
    acc
}

/// Durand-Kerner on a monic-normalized polynomial; coefficients ascending.
fn durand_kerner(cs: &[f64], seed: u64) -> Option<Vec<Cf64>> {
    let n = cs.len() - 1;
    if n == 0 {
        return Some(Vec::new());
    }
    let lc = cs[n];
    let monic: Vec<f64> = cs.iter().map(|c| c / lc).collect();
    // Cauchy-style radius
    let radius = 1.0
        + monic[..n]
            .iter()
            .map(|c| c.abs())
            .fold(0.0f64, f64::max);
    let mut z: Vec<Cf64> = (0..n)
        .map(|i| {
            let ang = 2.0 * std::f64::consts::PI * (i as f64 + 0.25 + (seed % 97) as f64 / 97.0)
                / n as f64;
            Cf64::new(radius * 0.7 * ang.cos(), radius * 0.7 * ang.sin() + 0.1)
        })
        .collect();
    for _ in 0..800 {
        let mut maxstep = 0.0f64;
        for i in 0..n {
            let fz = horner_f64(&monic, z[i]);
            let mut denom = Cf64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom = denom.mul(z[i].sub(z[j]));
                }
            }
            if denom.abs() == 0.0 {
                return None;
            }
            let step = fz.div(denom);
            z[i] = z[i].sub(step);
            maxstep = maxstep.max(step.abs() / (1.0 + z[i].abs()));
        }
        if maxstep < 1e-14 {
            return Some(z);
        }
    }
    None
}

fn horner_exact(cs: &[DyadicComplex], z: &DyadicComplex) -> DyadicComplex {
    let mut acc = DyadicComplex { re: BigRational::zero(), im: BigRational::zero() };
    for c in cs.iter().rev() {
        acc = acc.mul(z);
        acc = DyadicComplex { re: acc.re + &c.re, im: acc.im + &c.im };
    }
    acc
}

/// Roots of `form` under the given real embedding (0 or 1), certified to
/// absolute error 2^-prec.
pub fn complex_roots(
    form: &BinaryForm,
    embedding: usize,
    prec: u32,
) -> Result<RootSet, ScreduceError> {
    let n = form.degree();
    let deg_f = form.poly_degree();
    let inf_count = n - deg_f;
    let target_sq = BigRational::new(BigInt::one(), BigInt::one() << (2 * prec));

    let mut coeff_bits = prec + 96;
    'retry: for _attempt in 0..6 {
        // embedded coefficients as dyadic rationals with error <= 2^-coeff_bits
        let mut cs_exact: Vec<DyadicComplex> = Vec::with_capacity(deg_f + 1);
        let mut cs_f64: Vec<f64> = Vec::with_capacity(deg_f + 1);
        for i in 0..=deg_f {
            let (e1, e2) = embed(form.coeff(i), coeff_bits);
            let e = if embedding == 0 { e1 } else { e2 };
            cs_f64.push(rat_f64(&e.approx));
            cs_exact.push(DyadicComplex { re: e.approx, im: BigRational::zero() });
        }
        let coeff_err = BigRational::new(BigInt::one(), BigInt::one() << coeff_bits);

        let mut approx = None;
        for seed in 0..8u64 {
            if let Some(z) = durand_kerner(&cs_f64, seed) {
                approx = Some(z);
                break;
            }
        }
        let Some(approx) = approx else {
            return Err(ScreduceError::RootsDiverged);
        };

        // derivative coefficients
        let dcs: Vec<DyadicComplex> = (1..=deg_f)
            .map(|i| DyadicComplex {
                re: &cs_exact[i].re * BigRational::from(BigInt::from(i)),
                im: BigRational::zero(),
            })
            .collect();

        let mut roots: Vec<DyadicComplex> = approx
            .iter()
            .map(|z| DyadicComplex {
                re: BigRational::from_float(z.re).unwrap_or_else(BigRational::zero),
                im: BigRational::from_float(z.im).unwrap_or_else(BigRational::zero),
            })
            .collect();

        // exact Newton polishing; error roughly squares per step
        let steps = 3 + (prec as f64 / 40.0).log2().max(0.0).ceil() as usize + 3;
        for _ in 0..steps {
            for z in roots.iter_mut() {
                let fz = horner_exact(&cs_exact, z);
                let fpz = horner_exact(&dcs, z);
                if fpz.norm_sq().is_zero() {
                    continue 'retry;
                }
                let step = fz.div(&fpz);
                *z = z.sub(&step).round_to(coeff_bits + 32);
            }
        }

        // certify: eps_i = n (|f(z)| + P) / (|f'(z)| - P') with the
        // coefficient perturbation P = sum coeff_err |z|^i
        let mut worst = BigRational::zero();
        let mut ok = true;
        let nq = BigRational::from(BigInt::from(deg_f as i64));
        let mut epss: Vec<BigRational> = Vec::with_capacity(roots.len());
        for z in &roots {
            let mz = sqrt_upper(&z.norm_sq()) + BigRational::new(BigInt::one(), BigInt::from(1000));
            let mut pow = BigRational::one();
            let mut pert_f = BigRational::zero();
            let mut pert_fp = BigRational::zero();
            for i in 0..=deg_f {
                pert_f += &coeff_err * &pow;
                if i >= 1 {
                    pert_fp += &coeff_err * BigRational::from(BigInt::from(i as i64))
                        * (&pow / &mz).max(BigRational::zero());
                }
                pow *= &mz;
            }
            let fz_up = sqrt_upper(&horner_exact(&cs_exact, z).norm_sq()) + pert_f;
            let fpz_low = sqrt_lower(&horner_exact(&dcs, z).norm_sq()) - pert_fp;
            if !fpz_low.is_positive() {
                ok = false;
                break;
            }
            let eps = &nq * fz_up / fpz_low;
            if &eps * &eps > target_sq {
                ok = false;
                break;
            }
            if eps > worst {
                worst = eps.clone();
            }
            epss.push(eps);
        }
        // pigeonhole: disks must be pairwise disjoint so each holds one root
        if ok {
            'pairs: for i in 0..roots.len() {
                for j in i + 1..roots.len() {
                    let d2 = roots[i].sub(&roots[j]).norm_sq();
                    let m = epss[i].clone().max(epss[j].clone());
                    if d2 <= BigRational::from(BigInt::from(4)) * &m * &m {
                        ok = false;
                        break 'pairs;
                    }
                }
            }
        }
        if ok {
            return Ok(RootSet { finite: roots, inf_count, err: worst });
        }
        coeff_bits *= 2;
    }
    Err(ScreduceError::RootsDiverged)
}

/// Numeric discriminant oracle: Delta(F) = c^{2(n-1)} prod (r_i - r_j)^2
/// from certified roots, with a first-order error bound. Independent of the
/// resultant-based exact path.
pub fn disc_oracle(form: &BinaryForm, prec: u32) -> (f64, f64) {
    let rs = complex_roots(form, 0, prec).expect("separable form");
    let n = form.degree();
    let deg_f = form.poly_degree();
    let c = embed(form.coeff(deg_f), prec).0.approx;
    let mut prod = DyadicComplex { re: BigRational::one(), im: BigRational::zero() };
    for i in 0..rs.finite.len() {
        for j in i + 1..rs.finite.len() {
            let d = rs.finite[i].sub(&rs.finite[j]);
            prod = prod.mul(&d.mul(&d));
        }
    }
    let mut cpow = BigRational::one();
    for _ in 0..2 * (n - 1) {
        cpow *= &c;
    }
    let value = rat_f64(&(&prod.re * &cpow));
    // sensitivity: |dD/dr_i| <= |D| sum_j 2/|r_i - r_j|
    let roots = rs.finite_f64();
    let errf = rat_f64(&rs.err);
    let mut sens = 0.0f64;
    for i in 0..roots.len() {
        let mut s = 0.0;
        for j in 0..roots.len() {
            if i != j {
                let d = ((roots[i].0 - roots[j].0).powi(2)
                    + (roots[i].1 - roots[j].1).powi(2))
                .sqrt();
                s += 2.0 / d;
            }
        }
        sens += s;
    }
    let err = value.abs() * sens * errf * 4.0 + 1e-290;
    (value, err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nfield::{FieldElement, QuadField};

    fn form(cs: &[i64], n: usize) -> BinaryForm {
        let q = QuadField::rational();
        BinaryForm::new(
            q,
            n,
            cs.iter().map(|&c| FieldElement::from_integer(q, c)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn sixth_roots_of_minus_one() {
        let f = form(&[1, 0, 0, 0, 0, 0, 1], 6);
        let rs = complex_roots(&f, 0, 100).unwrap();
        assert_eq!(rs.finite.len(), 6);
        assert_eq!(rs.inf_count, 0);
        for (re, im) in rs.finite_f64() {
            let r = (re * re + im * im).sqrt();
            assert!((r - 1.0).abs() < 1e-12);
            // each is a root of x^6 = -1
            let ang = im.atan2(re) * 6.0;
            assert!((ang.sin()).abs() < 1e-10 && (ang.cos() + 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn fifth_roots_of_unity_with_infinity() {
        let f = form(&[-1, 0, 0, 0, 0, 1, 0], 6);
        let rs = complex_roots(&f, 0, 80).unwrap();
        assert_eq!(rs.finite.len(), 5);
        assert_eq!(rs.inf_count, 1);
        for (re, im) in rs.finite_f64() {
            assert!(((re * re + im * im).sqrt() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn residual_check_random_sextics() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let q = QuadField::rational();
        for _ in 0..30 {
            let cs: Vec<FieldElement> =
                (0..=6).map(|_| FieldElement::from_integer(q, rng.gen_range(-30i64..30))).collect();
            let Ok(f) = BinaryForm::new(q, 6, cs) else { continue };
            let rs = complex_roots(&f, 0, 120).unwrap();
            let cf: Vec<f64> = (0..=f.poly_degree())
                .map(|i| rat_f64(&f.coeff(i).as_rational().unwrap()))
                .collect();
            for (re, im) in rs.finite_f64() {
                let v = horner_f64(&cf, Cf64::new(re, im));
                let scale: f64 = cf.iter().map(|c| c.abs()).sum();
                assert!(v.abs() < scale * 1e-9, "residual {} too large", v.abs());
            }
        }
    }

    #[test]
    fn quadratic_field_embeddings_differ() {
        let k = QuadField::real_quadratic(5).unwrap();
        let a = k.gen().unwrap();
        // x^2 - a: roots +-sqrt(phi(a)); embedding 0 gives real roots,
        // embedding 1 imaginary ones
        let f = BinaryForm::new(
            k,
            3,
            vec![-a, k.zero(), k.one(), k.zero()],
        )
        .unwrap();
        let r0 = complex_roots(&f, 0, 60).unwrap();
        let r1 = complex_roots(&f, 1, 60).unwrap();
        assert!(r0.finite_f64().iter().all(|(_, im)| im.abs() < 1e-10));
        assert!(r1.finite_f64().iter().all(|(re, _)| re.abs() < 1e-10));
    }
}
