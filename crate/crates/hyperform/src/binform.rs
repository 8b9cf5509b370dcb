//! Binary forms of degree n >= 3, the right action of GL_2(k) x k*, and
//! exact discriminants.
//!
//! F = sum_i f_i X^i Z^(n-i) is also read as the polynomial f(x) = F(x, 1)
//! of degree n or n-1; the degree n is part of the form's identity. For
//! even n >= 6 the form is a hyperelliptic model y^2 = f(x) of genus
//! g = (n-2)/2 with Delta(C) = 2^(4g) Delta(F).

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::nfield::{FieldElement, NfieldError, QuadField};

#[derive(Debug, Error)]
pub enum BinformError {
    #[error("degree must be at least 3 (got {0})")]
    DegreeTooSmall(usize),
    #[error("coefficient count {got} does not match degree {degree}")]
    CoefficientCount { degree: usize, got: usize },
    #[error("form is not separable (vanishing discriminant)")]
    NotSeparable,
    #[error("zero form")]
    ZeroForm,
    #[error("transform is not invertible (det = 0 or u = 0)")]
    InvalidTransform,
    #[error("odd degree has no hyperelliptic interpretation")]
    OddDegree,
    #[error("scaling is a twist, not an isomorphism: u is not v^2")]
    TwistNotIsomorphism,
    #[error(transparent)]
    Field(#[from] NfieldError),
    #[error("parse error: {0}")]
    Parse(String),
}

/// A separable binary form of degree n with coefficients f_0..f_n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryForm {
    field: QuadField,
    degree: usize,
    coeffs: Vec<FieldElement>,
}

impl BinaryForm {
    /// Build a form from coefficients [f_0, ..., f_n]; checks separability.
    pub fn new(
        field: QuadField,
        degree: usize,
        coeffs: Vec<FieldElement>,
    ) -> Result<Self, BinformError> {
        if degree < 3 {
            return Err(BinformError::DegreeTooSmall(degree));
        }
        if coeffs.len() != degree + 1 {
            return Err(BinformError::CoefficientCount { degree, got: coeffs.len() });
        }
        if coeffs.iter().all(|c| c.is_zero()) {
            return Err(BinformError::ZeroForm);
        }
        let form = BinaryForm { field, degree, coeffs };
        if form.discriminant_unchecked().is_zero() {
            return Err(BinformError::NotSeparable);
        }
        Ok(form)
    }

    /// Interpret a univariate polynomial (coefficients ascending) as a form
    /// of the given degree.
    pub fn from_poly(
        field: QuadField,
        degree: usize,
        poly: &[FieldElement],
    ) -> Result<Self, BinformError> {
        if poly.len() > degree + 1 {
            return Err(BinformError::CoefficientCount { degree, got: poly.len() });
        }
        let mut coeffs = poly.to_vec();
        coeffs.resize(degree + 1, field.zero());
        Self::new(field, degree, coeffs)
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &FieldElement {
        &self.coeffs[i]
    }

    /// g with n in {2g+2, 2g+3}.
    pub fn genus_param(&self) -> usize {
        self.degree / 2 - 1
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integral())
    }

    /// Degree of f(x) = F(x, 1), i.e. the top index with nonzero coefficient.
    pub fn poly_degree(&self) -> usize {
        (0..=self.degree).rev().find(|&i| !self.coeffs[i].is_zero()).unwrap()
    }

    /// Content gcd over Q is not meaningful; over Z[a] we expose the ideal
    /// generated by the coefficients instead (primitivity is a query).
    pub fn coefficient_ideal(&self) -> Result<crate::nfield::OkIdeal, NfieldError> {
        crate::nfield::OkIdeal::from_generators(self.field, &self.coeffs)
    }

    /// u * F(aX + bZ, cX + dZ), the right action of (A, u).
    pub fn act(&self, t: &Transform) -> Result<Self, BinformError> {
        if t.det().is_zero() || t.u.is_zero() {
            return Err(BinformError::InvalidTransform);
        }
        let n = self.degree;
        let field = self.field;
        // powers of (aX + bZ) and (cX + dZ)
        let one = vec![field.one()];
        let mut pow_ab: Vec<Vec<FieldElement>> = vec![one.clone()];
        let mut pow_cd: Vec<Vec<FieldElement>> = vec![one];
        for i in 1..=n {
            pow_ab.push(poly_mul_linear(&pow_ab[i - 1], &t.b, &t.a));
            pow_cd.push(poly_mul_linear(&pow_cd[i - 1], &t.d, &t.c));
        }
        let mut out = vec![field.zero(); n + 1];
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            // f_i (aX+bZ)^i (cX+dZ)^{n-i}: collect X-degree coefficients
            let prod = poly_mul(&pow_ab[i], &pow_cd[n - i]);
            for (k, c) in prod.iter().enumerate() {
                out[k] = &out[k] + &(&self.coeffs[i] * c);
            }
        }
        for c in &mut out {
            *c = &*c * &t.u;
        }
        BinaryForm::new(field, n, out)
    }

    fn discriminant_unchecked(&self) -> FieldElement {
        let n = self.degree;
        let field = self.field;
        let deg_f = match (0..=n).rev().find(|&i| !self.coeffs[i].is_zero()) {
            Some(d) => d,
            None => return field.zero(),
        };
        if deg_f + 2 <= n {
            // a multiple projective root at (0 : 1)
            return field.zero();
        }
        let f: Vec<FieldElement> = self.coeffs[..=deg_f].to_vec();
        let fp: Vec<FieldElement> = (1..=deg_f)
            .map(|i| &f[i] * &FieldElement::from_integer(field, i as i64))
            .collect();
        let res = resultant(field, &f, &fp);
        let lc = &f[deg_f];
        let disc = match res {
            Some(r) => {
                let sign = if (deg_f * (deg_f - 1) / 2) % 2 == 1 { -field.one() } else { field.one() };
                &(&sign * &r) / lc
            }
            None => field.zero(),
        };
        if deg_f == n {
            disc
        } else {
            // deg f = n - 1: Delta(F) = c^2 Delta(f)
            &(lc * lc) * &disc
        }
    }

    /// Exact discriminant; errors on non-separable input.
    pub fn discriminant(&self) -> Result<FieldElement, BinformError> {
        let d = self.discriminant_unchecked();
        if d.is_zero() {
            return Err(BinformError::NotSeparable);
        }
        Ok(d)
    }

    /// Delta(C_F) = 2^(4g) Delta(F) for even degree >= 6.
    pub fn curve_discriminant(&self) -> Result<FieldElement, BinformError> {
        let n = self.degree;
        if n % 2 != 0 {
            return Err(BinformError::OddDegree);
        }
        if n < 6 {
            return Err(BinformError::DegreeTooSmall(n));
        }
        let g = self.genus_param() as u32;
        let two_4g = FieldElement::from_integer(self.field, BigInt::one() << (4 * g));
        Ok(&two_4g * &self.discriminant()?)
    }

    /// Serialize as `deg=<n>; f=[c0, ..., cn]`.
    pub fn serialize(&self) -> String {
        let cs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        format!("deg={}; f=[{}]", self.degree, cs.join(", "))
    }

    /// Parse `deg=<n>; f=[c0,...,cn]` or `deg=<n>; poly=<expression in x>`.
    pub fn parse(field: QuadField, s: &str) -> Result<Self, BinformError> {
        let mut degree: Option<usize> = None;
        let mut coeffs: Option<Vec<FieldElement>> = None;
        let mut poly_src: Option<String> = None;
        for part in s.split(';') {
            let part = part.trim();
            if let Some(rest) = part.strip_prefix("deg=") {
                degree = Some(
                    rest.trim()
                        .parse()
                        .map_err(|_| BinformError::Parse(format!("bad degree `{rest}`")))?,
                );
            } else if let Some(rest) = part.strip_prefix("f=") {
                let rest = rest.trim();
                let inner = rest
                    .strip_prefix('[')
                    .and_then(|r| r.strip_suffix(']'))
                    .ok_or_else(|| BinformError::Parse("f= expects [c0, ..., cn]".into()))?;
                let mut cs = Vec::new();
                for tok in split_top_level(inner, ',') {
                    let tok = tok.trim();
                    if tok.is_empty() {
                        continue;
                    }
                    cs.push(FieldElement::parse(field, tok)?);
                }
                coeffs = Some(cs);
            } else if let Some(rest) = part.strip_prefix("poly=") {
                poly_src = Some(rest.trim().to_string());
            } else if !part.is_empty() {
                return Err(BinformError::Parse(format!("unknown key in `{part}`")));
            }
        }
        let degree =
            degree.ok_or_else(|| BinformError::Parse("missing deg=<n>".into()))?;
        if let Some(cs) = coeffs {
            return Self::new(field, degree, cs);
        }
        if let Some(src) = poly_src {
            let cs = parse_univariate(field, &src)?;
            return Self::from_poly(field, degree, &cs);
        }
        Err(BinformError::Parse("missing f=[...] or poly=<expr>".into()))
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.serialize())
    }
}

fn poly_mul(a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let field = a[0].field();
    let mut out = vec![field.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

/// Multiply a polynomial (in X) by (c0 + c1 X).
fn poly_mul_linear(a: &[FieldElement], c0: &FieldElement, c1: &FieldElement) -> Vec<FieldElement> {
    poly_mul(a, &[c0.clone(), c1.clone()])
}

/// Resultant via Bareiss fraction-free elimination of the Sylvester matrix.
/// Returns None if either polynomial is empty.
fn resultant(field: QuadField, f: &[FieldElement], g: &[FieldElement]) -> Option<FieldElement> {
    let m = f.len().checked_sub(1)?;
    let n = g.len().checked_sub(1)?;
    if m == 0 {
        return Some(f[0].pow(n as i64).ok()?);
    }
    if n == 0 {
        return Some(g[0].pow(m as i64).ok()?);
    }
    let size = m + n;
    let mut mat = vec![vec![field.zero(); size]; size];
    for i in 0..n {
        for (j, c) in f.iter().rev().enumerate() {
            mat[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in g.iter().rev().enumerate() {
            mat[n + i][i + j] = c.clone();
        }
    }
    // Bareiss: division-exact in any integral domain, valid over the field
    let mut prev = field.one();
    let mut sign = field.one();
    let mut mat = mat;
    for k in 0..size - 1 {
        if mat[k][k].is_zero() {
            let swap = (k + 1..size).find(|&r| !mat[r][k].is_zero());
            match swap {
                Some(r) => {
                    mat.swap(k, r);
                    sign = -sign;
                }
                None => return Some(field.zero()),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let num = &(&mat[k][k] * &mat[i][j]) - &(&mat[i][k] * &mat[k][j]);
                mat[i][j] = &num / &prev;
            }
            mat[i][k] = field.zero();
        }
        prev = mat[k][k].clone();
    }
    Some(&sign * &mat[size - 1][size - 1])
}

/// Split on `sep` outside parentheses/brackets.
pub(crate) fn split_top_level(s: &str, sep: char) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// Parse a univariate expression like `x^5 - 1` or `(2-a)*x^6 + 3*x - (1+a)/2`
/// into ascending coefficients.
fn parse_univariate(field: QuadField, s: &str) -> Result<Vec<FieldElement>, BinformError> {
    let mut terms: Vec<(FieldElement, usize)> = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut chunks: Vec<String> = Vec::new();
    for (i, ch) in s.chars().enumerate() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' | '-' if depth == 0 && i > 0 && !cur.trim().is_empty() => {
                chunks.push(std::mem::take(&mut cur));
            }
            _ => {}
        }
        cur.push(ch);
    }
    if !cur.trim().is_empty() {
        chunks.push(cur);
    }
    for chunk in chunks {
        let t = chunk.replace(' ', "");
        let (coef_src, power) = if let Some(idx) = t.find('x') {
            let coef = &t[..idx];
            let rest = &t[idx + 1..];
            let power: usize = if let Some(p) = rest.strip_prefix('^') {
                p.parse().map_err(|_| BinformError::Parse(format!("bad power in `{t}`")))?
            } else if rest.is_empty() {
                1
            } else {
                return Err(BinformError::Parse(format!("bad term `{t}`")));
            };
            let coef = coef.strip_suffix('*').unwrap_or(coef);
            let coef = match coef {
                "" | "+" => "1".to_string(),
                "-" => "-1".to_string(),
                c => c.to_string(),
            };
            (coef, power)
        } else {
            (t.clone(), 0)
        };
        let coef = if coef_src.starts_with("+(") || coef_src.starts_with("-(") {
            let sign = if coef_src.starts_with('-') { -field.one() } else { field.one() };
            &sign * &FieldElement::parse(field, &coef_src[1..])?
        } else {
            FieldElement::parse(field, &coef_src)?
        };
        terms.push((coef, power));
    }
    let maxp = terms.iter().map(|(_, p)| *p).max().unwrap_or(0);
    let mut out = vec![field.zero(); maxp + 1];
    for (c, p) in terms {
        out[p] = &out[p] + &c;
    }
    Ok(out)
}

/// A pair (A, u) in GL_2(k) x k* acting on forms by
/// F |-> u F(aX + bZ, cX + dZ).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transform {
    pub a: FieldElement,
    pub b: FieldElement,
    pub c: FieldElement,
    pub d: FieldElement,
    pub u: FieldElement,
}

impl Transform {
    pub fn new(
        a: FieldElement,
        b: FieldElement,
        c: FieldElement,
        d: FieldElement,
        u: FieldElement,
    ) -> Result<Self, BinformError> {
        let t = Transform { a, b, c, d, u };
        if t.det().is_zero() || t.u.is_zero() {
            return Err(BinformError::InvalidTransform);
        }
        Ok(t)
    }

    pub fn identity(field: QuadField) -> Self {
        Transform {
            a: field.one(),
            b: field.zero(),
            c: field.zero(),
            d: field.one(),
            u: field.one(),
        }
    }

    pub fn scaling(field: QuadField, u: FieldElement) -> Result<Self, BinformError> {
        Transform::new(field.one(), field.zero(), field.zero(), field.one(), u)
    }

    /// x |-> x + m (the shear F(X + mZ, Z)).
    pub fn shift(field: QuadField, m: FieldElement) -> Self {
        Transform { a: field.one(), b: m, c: field.zero(), d: field.one(), u: field.one() }
    }

    pub fn det(&self) -> FieldElement {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    /// Composition in action order: F.act(compose(T1, T2)) = F.act(T1).act(T2).
    pub fn compose(&self, rhs: &Transform) -> Transform {
        Transform {
            a: &(&self.a * &rhs.a) + &(&self.b * &rhs.c),
            b: &(&self.a * &rhs.b) + &(&self.b * &rhs.d),
            c: &(&self.c * &rhs.a) + &(&self.d * &rhs.c),
            d: &(&self.c * &rhs.b) + &(&self.d * &rhs.d),
            u: &self.u * &rhs.u,
        }
    }

    pub fn inverse(&self) -> Result<Transform, BinformError> {
        let det = self.det();
        if det.is_zero() || self.u.is_zero() {
            return Err(BinformError::InvalidTransform);
        }
        let dinv = det.inverse()?;
        Ok(Transform {
            a: &self.d * &dinv,
            b: &(-&self.b) * &dinv,
            c: &(-&self.c) * &dinv,
            d: &self.a * &dinv,
            u: self.u.inverse()?,
        })
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A=[[{}, {}], [{}, {}]]; u={}", self.a, self.b, self.c, self.d, self.u)
    }
}

/// The rational map (x, y) -> ((ax+b)/(cx+d), v^{-1} (cx+d)^{-g-1} y)
/// witnessing C_{F.T} -> C_F when T = (A, v^2).
#[derive(Debug, Clone)]
pub struct IsomorphismWitness {
    pub a: FieldElement,
    pub b: FieldElement,
    pub c: FieldElement,
    pub d: FieldElement,
    pub v: FieldElement,
    pub genus: usize,
}

impl fmt::Display for IsomorphismWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(x, y) -> (({}*x + {})/({}*x + {}), ({}*x + {})^-{} / {} * y)",
            self.a, self.b, self.c, self.d, self.c, self.d, self.genus + 1, self.v
        )
    }
}

/// Check T = (A, v^2) and produce the explicit curve isomorphism.
pub fn isomorphism_witness(
    t: &Transform,
    v: &FieldElement,
    genus: usize,
) -> Result<IsomorphismWitness, BinformError> {
    if t.u != v * v {
        return Err(BinformError::TwistNotIsomorphism);
    }
    Ok(IsomorphismWitness {
        a: t.a.clone(),
        b: t.b.clone(),
        c: t.c.clone(),
        d: t.d.clone(),
        v: v.clone(),
        genus,
    })
}
