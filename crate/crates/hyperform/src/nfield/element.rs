use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::NfieldError;

/// Field descriptor: the rational field, or the real quadratic ring Z[a]
/// of discriminant `d` with a a root of x^2 + eps*x + (eps - d)/4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rational,
    Quad { d: i64, eps: i64 },
}

/// A base field, carrying a default embedding precision in bits.
///
/// Equality ignores the precision: two handles to Q(sqrt(5)) are the same
/// field regardless of how precisely we choose to embed it.
#[derive(Debug, Clone, Copy)]
pub struct QuadField {
    kind: FieldKind,
    prec: u32,
}

impl PartialEq for QuadField {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}
impl Eq for QuadField {}

impl std::hash::Hash for QuadField {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.kind.hash(state);
    }
}

pub(crate) const DEFAULT_PREC: u32 = 96;

impl QuadField {
    pub fn rational() -> Self {
        QuadField { kind: FieldKind::Rational, prec: DEFAULT_PREC }
    }

    /// The real quadratic field of discriminant `d` (d > 0 nonsquare, d = 0,1 mod 4).
    pub fn real_quadratic(d: i64) -> Result<Self, NfieldError> {
        if d <= 0 {
            return Err(NfieldError::InvalidDiscriminant(d));
        }
        let eps = d.rem_euclid(4);
        if eps > 1 {
            return Err(NfieldError::InvalidDiscriminant(d));
        }
        let s = (d as f64).sqrt() as i64;
        for r in s.saturating_sub(2)..=s + 2 {
            if r >= 0 && r * r == d {
                return Err(NfieldError::InvalidDiscriminant(d));
            }
        }
        Ok(QuadField { kind: FieldKind::Quad { d, eps }, prec: DEFAULT_PREC })
    }

    pub fn with_prec(mut self, prec: u32) -> Self {
        self.prec = prec.max(8);
        self
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn is_rational(&self) -> bool {
        matches!(self.kind, FieldKind::Rational)
    }

    pub fn disc(&self) -> Option<i64> {
        match self.kind {
            FieldKind::Rational => None,
            FieldKind::Quad { d, .. } => Some(d),
        }
    }

    pub fn eps(&self) -> i64 {
        match self.kind {
            FieldKind::Rational => 0,
            FieldKind::Quad { eps, .. } => eps,
        }
    }

    /// The rational number q with a^2 = q - eps*a, i.e. q = (d - eps)/4.
    pub fn gen_sq_const(&self) -> BigInt {
        match self.kind {
            FieldKind::Rational => BigInt::zero(),
            FieldKind::Quad { d, eps } => BigInt::from((d - eps) / 4),
        }
    }

    pub fn degree(&self) -> usize {
        if self.is_rational() {
            1
        } else {
            2
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::from_integer(*self, 0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::from_integer(*self, 1)
    }

    /// The generator a. Errors for the rational field.
    pub fn gen(&self) -> Result<FieldElement, NfieldError> {
        if self.is_rational() {
            return Err(NfieldError::InvalidDiscriminant(1));
        }
        FieldElement::from_parts(*self, BigInt::zero(), BigInt::one(), BigInt::one())
    }
}

/// An exact element (x + y*a)/den of the field, with gcd(x, y, den) = 1 and den >= 1.
/// Over the rational field y = 0 always.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: QuadField,
    x: BigInt,
    y: BigInt,
    den: BigInt,
}

impl FieldElement {
    pub fn from_integer<T: Into<BigInt>>(field: QuadField, v: T) -> Self {
        FieldElement { field, x: v.into(), y: BigInt::zero(), den: BigInt::one() }
    }

    pub fn from_parts(
        field: QuadField,
        x: BigInt,
        y: BigInt,
        den: BigInt,
    ) -> Result<Self, NfieldError> {
        if den.is_zero() {
            return Err(NfieldError::DivisionByZero);
        }
        if field.is_rational() && !y.is_zero() {
            return Err(NfieldError::FieldMismatch);
        }
        let mut e = FieldElement { field, x, y, den };
        e.normalize();
        Ok(e)
    }

    pub fn from_rational(field: QuadField, r: &BigRational) -> Self {
        let mut e = FieldElement {
            field,
            x: r.numer().clone(),
            y: BigInt::zero(),
            den: r.denom().clone(),
        };
        e.normalize();
        e
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.x = -std::mem::take(&mut self.x);
            self.y = -std::mem::take(&mut self.y);
            self.den = -std::mem::take(&mut self.den);
        }
        let g = self.x.gcd(&self.y).gcd(&self.den);
        if !g.is_one() && !g.is_zero() {
            self.x = &self.x / &g;
            self.y = &self.y / &g;
            self.den = &self.den / &g;
        }
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn coeff_1(&self) -> &BigInt {
        &self.x
    }

    pub fn coeff_a(&self) -> &BigInt {
        &self.y
    }

    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.x.is_one() && self.y.is_zero() && self.den.is_one()
    }

    /// Integral means lying in Z[a]; on the reduced representation that is den = 1.
    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_rational_value(&self) -> bool {
        self.y.is_zero()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.y.is_zero() {
            Some(BigRational::new(self.x.clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// Galois conjugate: a maps to -eps - a.
    pub fn conj(&self) -> Self {
        let eps = BigInt::from(self.field.eps());
        FieldElement {
            field: self.field,
            x: &self.x - &eps * &self.y,
            y: -self.y.clone(),
            den: self.den.clone(),
        }
    }

    /// Exact field norm N(e) = e * conj(e) as a rational number.
    pub fn norm(&self) -> BigRational {
        let eps = BigInt::from(self.field.eps());
        let q = self.field.gen_sq_const();
        // N((x+ya)/den) = (x^2 - eps*x*y - q*y^2) / den^2
        let num = &self.x * &self.x - &eps * &self.x * &self.y - &q * &self.y * &self.y;
        BigRational::new(num, &self.den * &self.den)
    }

    /// Exact trace tr(e) = e + conj(e).
    pub fn trace(&self) -> BigRational {
        let eps = BigInt::from(self.field.eps());
        BigRational::new(BigInt::from(2) * &self.x - eps * &self.y, self.den.clone())
    }

    pub fn inverse(&self) -> Result<Self, NfieldError> {
        if self.is_zero() {
            return Err(NfieldError::DivisionByZero);
        }
        // 1/e = conj(e)/N(e)
        let c = self.conj();
        let n = self.norm();
        let num_x = &c.x * n.denom();
        let num_y = &c.y * n.denom();
        let den = &c.den * n.numer();
        FieldElement::from_parts(self.field, num_x, num_y, den)
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, NfieldError> {
        Ok(self * &rhs.inverse()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self, NfieldError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = self.field.one();
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            k >>= 1;
        }
        Ok(acc)
    }

    /// Is e a unit of Z[a] (integral with norm +-1)?
    pub fn is_unit(&self) -> bool {
        self.is_integral() && self.norm().abs().is_one()
    }

    fn assert_field(&self, other: &Self) {
        assert!(
            self.field == other.field,
            "field mismatch: {:?} vs {:?}",
            self.field.kind,
            other.field.kind
        );
    }

    /// Parse an element in the serialization used throughout the CLI:
    /// a bare integer, or `(x+y*a)` optionally followed by `/den`, with terms
    /// ordered freely, e.g. `(3+2*a)/1`, `-5`, `(1-a)/2`, `(2*a-11)`.
    pub fn parse(field: QuadField, s: &str) -> Result<Self, NfieldError> {
        let s = s.trim();
        let err = |m: &str| NfieldError::Parse(format!("{m}: `{s}`"));
        let (body, den) = if let Some(idx) = s.rfind('/') {
            // A '/' outside parens separates the denominator.
            let (head, tail) = s.split_at(idx);
            if head.matches('(').count() == head.matches(')').count() {
                let den: BigInt =
                    tail[1..].trim().parse().map_err(|_| err("bad denominator"))?;
                (head.trim(), den)
            } else {
                (s, BigInt::one())
            }
        } else {
            (s, BigInt::one())
        };
        let body = body.trim();
        let inner = if body.starts_with('(') && body.ends_with(')') {
            &body[1..body.len() - 1]
        } else {
            body
        };
        let mut x = BigInt::zero();
        let mut y = BigInt::zero();
        // split into signed terms
        let mut terms: Vec<String> = Vec::new();
        let mut cur = String::new();
        for (i, ch) in inner.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 && !cur.trim().is_empty() {
                terms.push(cur.clone());
                cur.clear();
            }
            cur.push(ch);
        }
        if !cur.trim().is_empty() {
            terms.push(cur);
        }
        if terms.is_empty() {
            return Err(err("empty element"));
        }
        for t in terms {
            let t = t.replace(' ', "");
            if let Some(coef) = t.strip_suffix('a') {
                let coef = coef.strip_suffix('*').unwrap_or(coef);
                let c: BigInt = match coef {
                    "" | "+" => BigInt::one(),
                    "-" => -BigInt::one(),
                    _ => coef.parse().map_err(|_| err("bad a-coefficient"))?,
                };
                y += c;
            } else {
                let c: BigInt = t.parse().map_err(|_| err("bad integer term"))?;
                x += c;
            }
        }
        FieldElement::from_parts(field, x, y, den)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y.is_zero() && self.den.is_one() {
            return write!(f, "{}", self.x);
        }
        let body = if self.y.is_zero() {
            format!("({}", self.x) + ")"
        } else if self.y.is_negative() {
            format!("({}-{}*a)", self.x, -&self.y)
        } else {
            format!("({}+{}*a)", self.x, self.y)
        };
        if self.den.is_one() {
            write!(f, "{body}")
        } else {
            write!(f, "{body}/{}", self.den)
        }
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.assert_field(rhs);
        let mut e = FieldElement {
            field: self.field,
            x: &self.x * &rhs.den + &rhs.x * &self.den,
            y: &self.y * &rhs.den + &rhs.y * &self.den,
            den: &self.den * &rhs.den,
        };
        e.normalize();
        e
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self + &(-rhs)
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            field: self.field,
            x: -self.x.clone(),
            y: -self.y.clone(),
            den: self.den.clone(),
        }
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.assert_field(rhs);
        let eps = BigInt::from(self.field.eps());
        let q = self.field.gen_sq_const();
        // (x1 + y1 a)(x2 + y2 a) with a^2 = q - eps a
        let yy = &self.y * &rhs.y;
        let x = &self.x * &rhs.x + &q * &yy;
        let y = &self.x * &rhs.y + &self.y * &rhs.x - &eps * &yy;
        let mut e = FieldElement { field: self.field, x, y, den: &self.den * &rhs.den };
        e.normalize();
        e
    }
}

impl Div for &FieldElement {
    type Output = FieldElement;
    fn div(self, rhs: &FieldElement) -> FieldElement {
        self.checked_div(rhs).expect("division by zero")
    }
}

macro_rules! forward_owned {
    ($($t:ident :: $m:ident),*) => {$(
        impl $t for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement { (&self).$m(&rhs) }
        }
        impl $t<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &FieldElement) -> FieldElement { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul, Div::div);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> QuadField {
        QuadField::real_quadratic(5).unwrap()
    }

    #[test]
    fn field_construction() {
        assert!(QuadField::real_quadratic(5).is_ok());
        assert!(QuadField::real_quadratic(8).is_ok());
        assert!(QuadField::real_quadratic(257).is_ok());
        assert!(QuadField::real_quadratic(7).is_err()); // 3 mod 4
        assert!(QuadField::real_quadratic(9).is_err()); // square
        assert!(QuadField::real_quadratic(-4).is_err());
    }

    #[test]
    fn norm_trace_mul() {
        let k = f5();
        let a = k.gen().unwrap();
        // a^2 + a - 1 = 0 for d=5
        let asq = &a * &a;
        let expect = &k.one() - &a;
        assert_eq!(asq, expect);
        assert_eq!(a.norm(), BigRational::from(BigInt::from(-1)));
        assert_eq!(a.trace(), BigRational::from(BigInt::from(-1)));
        // N(2a+1) = -5
        let e = &(&a + &a) + &k.one();
        assert_eq!(e.norm(), BigRational::from(BigInt::from(-5)));
    }

    #[test]
    fn norm_multiplicative_trace_additive() {
        let k = QuadField::real_quadratic(17).unwrap();
        let e1 = FieldElement::from_parts(k, 3.into(), 2.into(), 5.into()).unwrap();
        let e2 = FieldElement::from_parts(k, (-1).into(), 7.into(), 2.into()).unwrap();
        assert_eq!((&e1 * &e2).norm(), e1.norm() * e2.norm());
        assert_eq!((&e1 + &e2).trace(), e1.trace() + e2.trace());
    }

    #[test]
    fn inverse_roundtrip() {
        let k = f5();
        let e = FieldElement::from_parts(k, 3.into(), (-2).into(), 7.into()).unwrap();
        assert!((&e * &e.inverse().unwrap()).is_one());
    }

    #[test]
    fn parse_display_roundtrip() {
        let k = f5();
        for s in ["(3+2*a)/1", "-5", "(1-a)/2", "(2*a-11)", "a", "(-4+a)/3"] {
            let e = FieldElement::parse(k, s).unwrap();
            let e2 = FieldElement::parse(k, &e.to_string()).unwrap();
            assert_eq!(e, e2, "roundtrip of {s}");
        }
        assert_eq!(
            FieldElement::parse(k, "(3+2*a)/1").unwrap(),
            FieldElement::from_parts(k, 3.into(), 2.into(), 1.into()).unwrap()
        );
        let q = QuadField::rational();
        assert!(FieldElement::parse(q, "(1+a)").is_err());
        assert_eq!(FieldElement::parse(q, "-17").unwrap(), FieldElement::from_integer(q, -17));
    }

    #[test]
    fn unit_detection() {
        let k = f5();
        let a = k.gen().unwrap();
        assert!(a.is_unit());
        let half = FieldElement::from_parts(k, 1.into(), 0.into(), 2.into()).unwrap();
        assert!(!half.is_unit());
    }
}
