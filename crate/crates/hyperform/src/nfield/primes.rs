//! Splitting of rational primes and residue-field arithmetic.
//!
//! p O_k factors according to the minimal polynomial of a modulo p: two
//! degree-1 primes (split), one degree-1 prime squared (ramified), or the
//! inert prime (p) with residue field F_{p^2}.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::element::{FieldElement, QuadField};
use super::ideal::OkIdeal;
use super::NfieldError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitKind {
    Split,
    Ramified,
    Inert,
    /// Degree-one place of the rational field itself.
    Rational,
}

/// A prime ideal together with its local data.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimeIdeal {
    pub ideal: OkIdeal,
    pub p: BigInt,
    pub kind: SplitKind,
    /// Image of a in O/P for residue degree 1 (None for inert / rational).
    pub a_image: Option<BigInt>,
}

impl PrimeIdeal {
    pub fn field(&self) -> QuadField {
        self.ideal.field()
    }

    pub fn residue_degree(&self) -> u32 {
        match self.kind {
            SplitKind::Inert => 2,
            _ => 1,
        }
    }

    pub fn ramification_index(&self) -> u32 {
        match self.kind {
            SplitKind::Ramified => 2,
            _ => 1,
        }
    }

    pub fn norm(&self) -> BigInt {
        self.ideal.norm()
    }

    /// The conjugate prime above p for the split case.
    fn other_root(&self) -> Option<BigInt> {
        if self.kind != SplitKind::Split {
            return None;
        }
        let r = self.a_image.as_ref()?;
        let eps = BigInt::from(self.field().eps());
        Some((-&eps - r).mod_floor(&self.p))
    }

    /// Exact valuation v_P(e) of a nonzero element.
    pub fn val_element(&self, e: &FieldElement) -> i64 {
        assert!(!e.is_zero());
        let num = FieldElement::from_parts(
            e.field(),
            e.coeff_1().clone(),
            e.coeff_a().clone(),
            BigInt::one(),
        )
        .unwrap();
        let vp_den = e.denom().abs();
        let mut den_val = 0i64;
        let mut d = vp_den;
        while (&d % &self.p).is_zero() {
            den_val += 1;
            d /= &self.p;
        }
        self.val_integral(&num) - den_val * self.ramification_index() as i64
    }

    fn val_integral(&self, e: &FieldElement) -> i64 {
        debug_assert!(e.is_integral() && !e.is_zero());
        match self.kind {
            SplitKind::Rational => {
                let mut v = 0;
                let mut x = e.coeff_1().clone();
                while (&x % &self.p).is_zero() {
                    v += 1;
                    x /= &self.p;
                }
                v
            }
            _ => {
                let mut v = 0i64;
                let mut pw = self.ideal.clone();
                loop {
                    if !pw.contains(e) {
                        return v;
                    }
                    v += 1;
                    pw = pw.mul(&self.ideal);
                }
            }
        }
    }

    pub fn is_integral(&self, e: &FieldElement) -> bool {
        e.is_zero() || self.val_element(e) >= 0
    }

    /// Residue field attached to this prime.
    pub fn residue_field(&self) -> ResidueField {
        match self.kind {
            SplitKind::Rational => ResidueField { p: self.p.clone(), rep: ResRep::Prime },
            SplitKind::Inert => ResidueField {
                p: self.p.clone(),
                rep: ResRep::Quadratic {
                    eps: BigInt::from(self.field().eps()).mod_floor(&self.p),
                    q: self.field().gen_sq_const().mod_floor(&self.p),
                },
            },
            _ => ResidueField {
                p: self.p.clone(),
                rep: ResRep::Linear { a_image: self.a_image.clone().unwrap() },
            },
        }
    }

    /// Image of a P-integral element in the residue field.
    pub fn reduce(&self, e: &FieldElement) -> Result<ResElt, NfieldError> {
        if e.is_zero() {
            return Ok(self.residue_field().zero());
        }
        if self.val_element(e) < 0 {
            return Err(NfieldError::NotIntegral);
        }
        let rf = self.residue_field();
        let mut num = FieldElement::from_parts(
            e.field(),
            e.coeff_1().clone(),
            e.coeff_a().clone(),
            BigInt::one(),
        )
        .unwrap();
        let mut den = e.denom().clone();
        let mut k = 0u32;
        while (&den % &self.p).is_zero() {
            k += 1;
            den /= &self.p;
        }
        let mut correction = rf.one();
        if k > 0 {
            match self.kind {
                SplitKind::Split => {
                    // multiply by (a - r')^k, divide by p^k, correct at the end
                    let rp = self.other_root().unwrap();
                    let field = e.field();
                    let shift = FieldElement::from_parts(
                        field,
                        -rp.clone(),
                        BigInt::one(),
                        BigInt::one(),
                    )
                    .unwrap();
                    // bring the conjugate-prime valuation of num up so p^k divides
                    let mut extra = 0u32;
                    let conj_prime = PrimeIdeal {
                        ideal: OkIdeal::from_generators(
                            field,
                            &[FieldElement::from_integer(field, self.p.clone()), shift.clone()],
                        )
                        .unwrap(),
                        p: self.p.clone(),
                        kind: SplitKind::Split,
                        a_image: Some(rp.clone()),
                    };
                    let vbar = conj_prime.val_integral(&num);
                    if vbar < k as i64 {
                        extra = (k as i64 - vbar) as u32;
                    }
                    for _ in 0..extra {
                        num = &num * &shift;
                    }
                    for _ in 0..k {
                        let x = num.coeff_1() / &self.p;
                        let y = num.coeff_a() / &self.p;
                        debug_assert!((num.coeff_1() % &self.p).is_zero());
                        debug_assert!((num.coeff_a() % &self.p).is_zero());
                        num = FieldElement::from_parts(field, x, y, BigInt::one()).unwrap();
                    }
                    // correction = (image of shift)^{-extra} * (nothing for the p^k: cancelled)
                    if extra > 0 {
                        let im = rf.from_parts(
                            (shift.coeff_1()).mod_floor(&self.p),
                            shift.coeff_a().mod_floor(&self.p),
                        );
                        correction = rf.inv(&im)?;
                        correction = rf.pow(&correction, extra as u64);
                    }
                }
                _ => {
                    // inert: P^k = p^k O; ramified: v >= 2k implies p^k | num
                    let field = e.field();
                    for _ in 0..k {
                        debug_assert!((num.coeff_1() % &self.p).is_zero());
                        debug_assert!((num.coeff_a() % &self.p).is_zero());
                        let x = num.coeff_1() / &self.p;
                        let y = num.coeff_a() / &self.p;
                        num = FieldElement::from_parts(field, x, y, BigInt::one()).unwrap();
                    }
                }
            }
        }
        let base = rf.from_parts(
            num.coeff_1().mod_floor(&self.p),
            num.coeff_a().mod_floor(&self.p),
        );
        let den_red = den.mod_floor(&self.p);
        let dinv = rf.inv(&rf.from_parts(den_red, BigInt::zero()))?;
        Ok(rf.mul(&rf.mul(&base, &dinv), &correction))
    }
}

/// Deterministic Miller-Rabin for the sizes we care about.
pub fn is_prime(n: &BigInt) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    for small in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let sp = BigInt::from(small);
        if n == &sp {
            return true;
        }
        if (n % &sp).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x.is_one() || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Square root of `a` modulo an odd prime p (Tonelli-Shanks), if one exists.
fn sqrt_mod(a: &BigInt, p: &BigInt) -> Option<BigInt> {
    let a = a.mod_floor(p);
    if a.is_zero() {
        return Some(BigInt::zero());
    }
    let pm1: BigInt = p - 1;
    let ls = a.modpow(&(&pm1 / 2), p);
    if ls != BigInt::one() {
        return None;
    }
    if (p % 4u8) == BigInt::from(3) {
        return Some(a.modpow(&((p + 1) / 4), p));
    }
    // Tonelli-Shanks
    let s = pm1.trailing_zeros().unwrap();
    let q = &pm1 >> s;
    let mut z = BigInt::from(2);
    while z.modpow(&(&pm1 / 2), p) == BigInt::one() {
        z += 1;
    }
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = a.modpow(&q, p);
    let mut r = a.modpow(&((&q + 1) / 2), p);
    while !t.is_one() {
        let mut i = 0u64;
        let mut tt = t.clone();
        while !tt.is_one() {
            tt = (&tt * &tt) % p;
            i += 1;
            if i == m {
                return None;
            }
        }
        let b = c.modpow(&(BigInt::one() << (m - i - 1)), p);
        m = i;
        c = (&b * &b) % p;
        t = (&t * &c) % p;
        r = (&r * &b) % p;
    }
    Some(r)
}

/// Roots of x^2 + eps x - q modulo p.
fn minpoly_roots_mod_p(field: &QuadField, p: &BigInt) -> Vec<BigInt> {
    let eps = BigInt::from(field.eps());
    let q = field.gen_sq_const();
    if *p == BigInt::from(2) {
        let mut out = Vec::new();
        for r in 0..2 {
            let r = BigInt::from(r);
            if ((&r * &r + &eps * &r - &q) % 2u8).is_zero() {
                out.push(r);
            }
        }
        return out;
    }
    // (2x + eps)^2 = d mod p
    let d = BigInt::from(field.disc().unwrap());
    match sqrt_mod(&d, p) {
        None => Vec::new(),
        Some(s) => {
            let inv2 = BigInt::from(2).modpow(&(p - 2), p);
            let r1 = ((&s - &eps) * &inv2).mod_floor(p);
            let r2 = ((-&s - &eps) * &inv2).mod_floor(p);
            if r1 == r2 {
                vec![r1]
            } else {
                vec![r1, r2]
            }
        }
    }
}

/// Factor (p) into prime ideals with exponents.
pub fn split_rational_prime(
    field: QuadField,
    p: &BigInt,
) -> Result<Vec<(PrimeIdeal, u32)>, NfieldError> {
    if !is_prime(p) {
        return Err(NfieldError::NotPrime(p.clone()));
    }
    if field.is_rational() {
        let ideal = OkIdeal::principal(&FieldElement::from_integer(field, p.clone()))?;
        return Ok(vec![(
            PrimeIdeal { ideal, p: p.clone(), kind: SplitKind::Rational, a_image: None },
            1,
        )]);
    }
    let d = BigInt::from(field.disc().unwrap());
    let roots = minpoly_roots_mod_p(&field, p);
    let ramified = (&d % p).is_zero();
    if roots.is_empty() {
        let ideal = OkIdeal::principal(&FieldElement::from_integer(field, p.clone()))?;
        return Ok(vec![(
            PrimeIdeal { ideal, p: p.clone(), kind: SplitKind::Inert, a_image: None },
            1,
        )]);
    }
    let mk = |r: &BigInt, kind: SplitKind| -> Result<PrimeIdeal, NfieldError> {
        // P = (p, a - r)
        let shift =
            FieldElement::from_parts(field, -r.clone(), BigInt::one(), BigInt::one())?;
        let ideal = OkIdeal::from_generators(
            field,
            &[FieldElement::from_integer(field, p.clone()), shift],
        )?;
        Ok(PrimeIdeal { ideal, p: p.clone(), kind, a_image: Some(r.clone()) })
    };
    if ramified || roots.len() == 1 {
        Ok(vec![(mk(&roots[0], SplitKind::Ramified)?, 2)])
    } else {
        Ok(vec![(mk(&roots[0], SplitKind::Split)?, 1), (mk(&roots[1], SplitKind::Split)?, 1)])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum ResRep {
    /// F_p for the rational field.
    Prime,
    /// Degree-1 quotient: a maps to a_image in F_p.
    Linear { a_image: BigInt },
    /// F_{p^2} = F_p[alpha], alpha^2 = q - eps*alpha.
    Quadratic { eps: BigInt, q: BigInt },
}

/// The residue field O/P. Elements are pairs (u, v) representing u + v*alpha
/// (v = 0 identically unless the prime is inert).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueField {
    pub p: BigInt,
    rep: ResRep,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResElt {
    pub u: BigInt,
    pub v: BigInt,
}

impl ResidueField {
    pub fn zero(&self) -> ResElt {
        ResElt { u: BigInt::zero(), v: BigInt::zero() }
    }

    pub fn one(&self) -> ResElt {
        ResElt { u: BigInt::one(), v: BigInt::zero() }
    }

    pub fn size(&self) -> BigInt {
        match self.rep {
            ResRep::Quadratic { .. } => (&self.p * &self.p).clone(),
            _ => self.p.clone(),
        }
    }

    pub fn from_parts(&self, u: BigInt, v: BigInt) -> ResElt {
        match &self.rep {
            ResRep::Prime => {
                debug_assert!(v.is_zero());
                ResElt { u: u.mod_floor(&self.p), v: BigInt::zero() }
            }
            ResRep::Linear { a_image } => {
                ResElt { u: (u + v * a_image).mod_floor(&self.p), v: BigInt::zero() }
            }
            ResRep::Quadratic { .. } => {
                ResElt { u: u.mod_floor(&self.p), v: v.mod_floor(&self.p) }
            }
        }
    }

    pub fn from_int(&self, u: i64) -> ResElt {
        self.from_parts(BigInt::from(u), BigInt::zero())
    }

    pub fn is_zero(&self, e: &ResElt) -> bool {
        e.u.is_zero() && e.v.is_zero()
    }

    pub fn add(&self, x: &ResElt, y: &ResElt) -> ResElt {
        ResElt { u: (&x.u + &y.u).mod_floor(&self.p), v: (&x.v + &y.v).mod_floor(&self.p) }
    }

    pub fn sub(&self, x: &ResElt, y: &ResElt) -> ResElt {
        ResElt { u: (&x.u - &y.u).mod_floor(&self.p), v: (&x.v - &y.v).mod_floor(&self.p) }
    }

    pub fn neg(&self, x: &ResElt) -> ResElt {
        ResElt { u: (-&x.u).mod_floor(&self.p), v: (-&x.v).mod_floor(&self.p) }
    }

    pub fn mul(&self, x: &ResElt, y: &ResElt) -> ResElt {
        match &self.rep {
            ResRep::Quadratic { eps, q } => {
                let vv = &x.v * &y.v;
                let u = (&x.u * &y.u + q * &vv).mod_floor(&self.p);
                let v = (&x.u * &y.v + &x.v * &y.u - eps * &vv).mod_floor(&self.p);
                ResElt { u, v }
            }
            _ => ResElt { u: (&x.u * &y.u).mod_floor(&self.p), v: BigInt::zero() },
        }
    }

    pub fn inv(&self, x: &ResElt) -> Result<ResElt, NfieldError> {
        if self.is_zero(x) {
            return Err(NfieldError::DivisionByZero);
        }
        match &self.rep {
            ResRep::Quadratic { eps, q } => {
                // (u + v alpha)^{-1} = conj / norm with conj = (u - eps v) - v alpha
                let conj = ResElt {
                    u: (&x.u - eps * &x.v).mod_floor(&self.p),
                    v: (-&x.v).mod_floor(&self.p),
                };
                let nrm = (&x.u * &x.u - eps * &x.u * &x.v - q * &x.v * &x.v).mod_floor(&self.p);
                let ninv = nrm.modpow(&(&self.p - 2), &self.p);
                Ok(self.mul(&conj, &ResElt { u: ninv, v: BigInt::zero() }))
            }
            _ => {
                let ninv = x.u.modpow(&(&self.p - 2), &self.p);
                Ok(ResElt { u: ninv, v: BigInt::zero() })
            }
        }
    }

    pub fn pow(&self, x: &ResElt, mut e: u64) -> ResElt {
        let mut acc = self.one();
        let mut b = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    /// All field elements; only sensible for small residue fields.
    pub fn enumerate(&self) -> Vec<ResElt> {
        let p = self.p.to_i64().expect("residue field too large to enumerate");
        let mut out = Vec::new();
        match self.rep {
            ResRep::Quadratic { .. } => {
                for u in 0..p {
                    for v in 0..p {
                        out.push(ResElt { u: u.into(), v: v.into() });
                    }
                }
            }
            _ => {
                for u in 0..p {
                    out.push(ResElt { u: u.into(), v: BigInt::zero() });
                }
            }
        }
        out
    }

    /// A lift of e to the ring of integers, with small coordinates.
    pub fn lift(&self, e: &ResElt, field: QuadField) -> FieldElement {
        // centered lift keeps heights small
        let center = |z: &BigInt| -> BigInt {
            let m = z.mod_floor(&self.p);
            if &m * 2 > self.p {
                m - &self.p
            } else {
                m
            }
        };
        match &self.rep {
            ResRep::Quadratic { .. } => FieldElement::from_parts(
                field,
                center(&e.u),
                center(&e.v),
                BigInt::one(),
            )
            .unwrap(),
            _ => FieldElement::from_integer(field, center(&e.u)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_examples_d5() {
        let k = QuadField::real_quadratic(5).unwrap();
        // p = 5 ramified
        let f = split_rational_prime(k, &BigInt::from(5)).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].0.kind, SplitKind::Ramified);
        assert_eq!(f[0].1, 2);
        assert_eq!(f[0].0.ideal.norm(), BigInt::from(5));
        // p = 2 inert
        let f = split_rational_prime(k, &BigInt::from(2)).unwrap();
        assert_eq!(f[0].0.kind, SplitKind::Inert);
        assert_eq!(f[0].0.ideal.norm(), BigInt::from(4));
        // p = 11 split: the primes of the tables, generated by 3a+2 and 3a+1
        let f = split_rational_prime(k, &BigInt::from(11)).unwrap();
        assert_eq!(f.len(), 2);
        for (pi, e) in &f {
            assert_eq!(*e, 1);
            assert_eq!(pi.ideal.norm(), BigInt::from(11));
        }
        let g1 = FieldElement::from_parts(k, 2.into(), 3.into(), 1.into()).unwrap();
        let g2 = FieldElement::from_parts(k, 1.into(), 3.into(), 1.into()).unwrap();
        let i1 = OkIdeal::principal(&g1).unwrap();
        let i2 = OkIdeal::principal(&g2).unwrap();
        assert!(
            (f[0].0.ideal == i1 && f[1].0.ideal == i2)
                || (f[0].0.ideal == i2 && f[1].0.ideal == i1)
        );
    }

    #[test]
    fn split_products_recover_p() {
        for d in [5i64, 8, 12, 13, 17] {
            let k = QuadField::real_quadratic(d).unwrap();
            let mut p = BigInt::from(2);
            while p <= BigInt::from(100) {
                if is_prime(&p) {
                    let f = split_rational_prime(k, &p).unwrap();
                    let mut prod = OkIdeal::unit_ideal(k);
                    for (pi, e) in &f {
                        prod = prod.mul(&pi.ideal.pow(*e));
                    }
                    let expect =
                        OkIdeal::principal(&FieldElement::from_integer(k, p.clone())).unwrap();
                    assert_eq!(prod, expect, "product of factors of {p} over d={d}");
                }
                p += 1;
            }
        }
    }

    #[test]
    fn not_prime_rejected() {
        let k = QuadField::real_quadratic(5).unwrap();
        assert!(split_rational_prime(k, &BigInt::from(6)).is_err());
    }

    #[test]
    fn valuations_and_reduction() {
        let k = QuadField::real_quadratic(5).unwrap();
        let f = split_rational_prime(k, &BigInt::from(11)).unwrap();
        let pi = &f[0].0;
        let pj = &f[1].0;
        let g = pi.ideal.principal_generator(8).unwrap();
        assert_eq!(pi.val_element(&g), 1);
        assert_eq!(pj.val_element(&g), 0);
        // 1/conj-generator is pi-integral though its denominator is divisible by 11
        let h = pj.ideal.principal_generator(8).unwrap();
        let inv = h.inverse().unwrap();
        assert_eq!(pi.val_element(&inv), 0);
        assert!(pi.is_integral(&inv));
        let r = pi.reduce(&inv).unwrap();
        // check: reduce(h) * r = reduce(h * inv) = 1
        let rf = pi.residue_field();
        let hr = pi.reduce(&h).unwrap();
        assert!(rf.mul(&hr, &r) == rf.one());
    }

    #[test]
    fn inert_residue_field() {
        let k = QuadField::real_quadratic(5).unwrap();
        let f = split_rational_prime(k, &BigInt::from(3)).unwrap();
        assert_eq!(f[0].0.kind, SplitKind::Inert);
        let rf = f[0].0.residue_field();
        assert_eq!(rf.size(), BigInt::from(9));
        // every nonzero element invertible
        for e in rf.enumerate() {
            if !rf.is_zero(&e) {
                let i = rf.inv(&e).unwrap();
                assert!(rf.mul(&e, &i) == rf.one());
            }
        }
    }
}
