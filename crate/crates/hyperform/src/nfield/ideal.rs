//! Ideals of Z[a] in 2x2 Hermite normal form.
//!
//! A nonzero ideal is the Z-span of {n, t + s*a} with 0 <= t < n, s | n,
//! s | t, and n/s dividing N(t/s + a); over the rational field it is a
//! single positive integer.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::element::{FieldElement, QuadField};
use super::unit::fundamental_unit;
use super::zlinalg::solve_2xm;
use super::NfieldError;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Rep {
    Int(BigInt),
    Hnf { n: BigInt, t: BigInt, s: BigInt },
}

/// A nonzero integral ideal of the ring of integers.
#[derive(Debug, Clone)]
pub struct OkIdeal {
    field: QuadField,
    rep: Rep,
}

impl PartialEq for OkIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.rep == other.rep
    }
}
impl Eq for OkIdeal {}

impl std::hash::Hash for OkIdeal {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.rep.hash(state);
    }
}

impl OkIdeal {
    pub fn field(&self) -> QuadField {
        self.field
    }

    /// The unit ideal (1) = O_k.
    pub fn unit_ideal(field: QuadField) -> Self {
        if field.is_rational() {
            OkIdeal { field, rep: Rep::Int(BigInt::one()) }
        } else {
            OkIdeal { field, rep: Rep::Hnf { n: BigInt::one(), t: BigInt::zero(), s: BigInt::one() } }
        }
    }

    pub fn is_unit_ideal(&self) -> bool {
        match &self.rep {
            Rep::Int(n) => n.is_one(),
            Rep::Hnf { n, s, .. } => n.is_one() && s.is_one(),
        }
    }

    /// HNF basis (n, t, s) over a quadratic field, None over Q.
    pub fn hnf(&self) -> Option<(&BigInt, &BigInt, &BigInt)> {
        match &self.rep {
            Rep::Int(_) => None,
            Rep::Hnf { n, t, s } => Some((n, t, s)),
        }
    }

    pub fn rational_gen(&self) -> Option<&BigInt> {
        match &self.rep {
            Rep::Int(n) => Some(n),
            Rep::Hnf { .. } => None,
        }
    }

    fn from_vectors(field: QuadField, vecs: &[(BigInt, BigInt)]) -> Result<Self, NfieldError> {
        if field.is_rational() {
            let mut g = BigInt::zero();
            for (x, y) in vecs {
                debug_assert!(y.is_zero());
                g = g.gcd(x);
            }
            if g.is_zero() {
                return Err(NfieldError::ZeroIdeal);
            }
            return Ok(OkIdeal { field, rep: Rep::Int(g) });
        }
        // combine to a single vector carrying the y-gcd
        let mut pivot: Option<(BigInt, BigInt)> = None;
        let mut xs: Vec<BigInt> = Vec::new();
        for (x, y) in vecs {
            if y.is_zero() {
                xs.push(x.clone());
                continue;
            }
            match &mut pivot {
                None => pivot = Some((x.clone(), y.clone())),
                Some((px, py)) => {
                    let eg = py.extended_gcd(y);
                    let (g, u, v) = (eg.gcd, eg.x, eg.y);
                    let nx = &u * &*px + &v * x;
                    let fx = &*py / &g;
                    let fy = y / &g;
                    // the eliminated combination keeps only an x-part
                    xs.push(&fy * &*px - &fx * x);
                    *px = nx;
                    *py = g;
                }
            }
        }
        let (t0, s) = pivot.ok_or(NfieldError::ZeroIdeal)?;
        let (t0, s) = if s.is_negative() { (-t0, -s) } else { (t0, s) };
        let mut n = BigInt::zero();
        for x in xs {
            n = n.gcd(&x);
        }
        if n.is_zero() {
            return Err(NfieldError::ZeroIdeal);
        }
        let t = t0.mod_floor(&n);
        let ideal = OkIdeal { field, rep: Rep::Hnf { n, t, s } };
        debug_assert!(ideal.check_closure(), "module is not an ideal: {ideal}");
        Ok(ideal)
    }

    /// Closure of the HNF lattice under multiplication by a.
    pub fn check_closure(&self) -> bool {
        match &self.rep {
            Rep::Int(_) => true,
            Rep::Hnf { n, t, s } => {
                if !(n % s).is_zero() || !(t % s).is_zero() {
                    return false;
                }
                let field = self.field;
                let a = field.gen().expect("quad field");
                let b1 = FieldElement::from_integer(field, n.clone());
                let b2 = FieldElement::from_parts(field, t.clone(), s.clone(), BigInt::one())
                    .expect("basis");
                self.contains(&(&a * &b1)) && self.contains(&(&a * &b2))
            }
        }
    }

    /// The ideal generated by the given integral elements (with their a-multiples).
    pub fn from_generators(
        field: QuadField,
        gens: &[FieldElement],
    ) -> Result<Self, NfieldError> {
        let mut vecs = Vec::new();
        for g in gens {
            if !g.is_integral() {
                return Err(NfieldError::NonIntegralGenerator);
            }
            if g.is_zero() {
                continue;
            }
            vecs.push((g.coeff_1().clone(), g.coeff_a().clone()));
            if !field.is_rational() {
                let ag = &field.gen()? * g;
                vecs.push((ag.coeff_1().clone(), ag.coeff_a().clone()));
            }
        }
        if vecs.is_empty() {
            return Err(NfieldError::ZeroIdeal);
        }
        Self::from_vectors(field, &vecs)
    }

    pub fn principal(e: &FieldElement) -> Result<Self, NfieldError> {
        Self::from_generators(e.field(), std::slice::from_ref(e))
    }

    pub fn norm(&self) -> BigInt {
        match &self.rep {
            Rep::Int(n) => n.abs(),
            Rep::Hnf { n, s, .. } => (n * s).abs(),
        }
    }

    fn basis(&self) -> Vec<FieldElement> {
        match &self.rep {
            Rep::Int(n) => vec![FieldElement::from_integer(self.field, n.clone())],
            Rep::Hnf { n, t, s } => vec![
                FieldElement::from_integer(self.field, n.clone()),
                FieldElement::from_parts(self.field, t.clone(), s.clone(), BigInt::one())
                    .expect("basis element"),
            ],
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert!(self.field == rhs.field);
        if let (Rep::Int(a), Rep::Int(b)) = (&self.rep, &rhs.rep) {
            return OkIdeal { field: self.field, rep: Rep::Int((a * b).abs()) };
        }
        let mut vecs = Vec::new();
        for x in self.basis() {
            for y in rhs.basis() {
                let p = &x * &y;
                vecs.push((p.coeff_1().clone(), p.coeff_a().clone()));
                if !self.field.is_rational() {
                    let ap = &self.field.gen().unwrap() * &p;
                    vecs.push((ap.coeff_1().clone(), ap.coeff_a().clone()));
                }
            }
        }
        Self::from_vectors(self.field, &vecs).expect("product of nonzero ideals")
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::unit_ideal(self.field);
        let mut b = self.clone();
        let mut k = e;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            k >>= 1;
        }
        acc
    }

    /// gcd(A, B) = A + B.
    pub fn gcd(&self, rhs: &Self) -> Self {
        assert!(self.field == rhs.field);
        if let (Rep::Int(a), Rep::Int(b)) = (&self.rep, &rhs.rep) {
            return OkIdeal { field: self.field, rep: Rep::Int(a.gcd(b)) };
        }
        let mut vecs = Vec::new();
        for b in self.basis().into_iter().chain(rhs.basis()) {
            vecs.push((b.coeff_1().clone(), b.coeff_a().clone()));
        }
        Self::from_vectors(self.field, &vecs).expect("sum of nonzero ideals")
    }

    /// Membership of an integral element.
    pub fn contains(&self, e: &FieldElement) -> bool {
        if !e.is_integral() {
            return false;
        }
        match &self.rep {
            Rep::Int(n) => (e.coeff_1() % n).is_zero(),
            Rep::Hnf { n, t, s } => {
                let (x, y) = (e.coeff_1(), e.coeff_a());
                if !(y % s).is_zero() {
                    return false;
                }
                let k = y / s;
                ((x - k * t) % n).is_zero()
            }
        }
    }

    /// Does self divide rhs (equivalently rhs is contained in self)?
    pub fn divides(&self, rhs: &Self) -> bool {
        rhs.basis().iter().all(|b| self.contains(b))
    }

    /// Galois conjugate ideal.
    pub fn conj(&self) -> Self {
        match &self.rep {
            Rep::Int(_) => self.clone(),
            Rep::Hnf { .. } => {
                let mut vecs = Vec::new();
                for b in self.basis() {
                    let c = b.conj();
                    vecs.push((c.coeff_1().clone(), c.coeff_a().clone()));
                }
                Self::from_vectors(self.field, &vecs).expect("conjugate")
            }
        }
    }

    /// Exact quotient A/B for B | A; None if B does not divide A.
    pub fn div_exact(&self, rhs: &Self) -> Option<Self> {
        if !rhs.divides(self) {
            return None;
        }
        match (&self.rep, &rhs.rep) {
            (Rep::Int(a), Rep::Int(b)) => {
                Some(OkIdeal { field: self.field, rep: Rep::Int(a / b) })
            }
            _ => {
                // A/B = A * conj(B) / N(B), and N(B) divides every HNF entry
                let m = self.mul(&rhs.conj());
                let nb = rhs.norm();
                let Rep::Hnf { n, t, s } = &m.rep else { unreachable!() };
                debug_assert!((n % &nb).is_zero() && (t % &nb).is_zero() && (s % &nb).is_zero());
                Some(OkIdeal {
                    field: self.field,
                    rep: Rep::Hnf { n: n / &nb, t: t / &nb, s: s / &nb },
                })
            }
        }
    }

    /// Largest j with rhs^j | self (rhs a proper nonzero ideal).
    pub fn val(&self, rhs: &Self) -> u32 {
        assert!(!rhs.is_unit_ideal());
        let mut v = 0;
        let mut cur = self.clone();
        while let Some(q) = cur.div_exact(rhs) {
            v += 1;
            cur = q;
        }
        v
    }

    /// Canonical representative of an integral element modulo this ideal.
    pub fn reduce_element(&self, e: &FieldElement) -> FieldElement {
        assert!(e.is_integral());
        match &self.rep {
            Rep::Int(n) => {
                FieldElement::from_integer(self.field, e.coeff_1().mod_floor(n))
            }
            Rep::Hnf { n, t, s } => {
                let (x, y) = (e.coeff_1(), e.coeff_a());
                let k = y.div_floor(s);
                let y2 = y - &k * s;
                let x2 = (x - &k * t).mod_floor(n);
                FieldElement::from_parts(self.field, x2, y2, BigInt::one()).unwrap()
            }
        }
    }

    /// Inverse of e modulo this ideal, when e is invertible in O/self.
    pub fn inverse_mod(&self, e: &FieldElement) -> Option<FieldElement> {
        assert!(e.is_integral());
        let field = self.field;
        if field.is_rational() {
            let n = self.rational_gen().unwrap();
            let eg = e.coeff_1().extended_gcd(n);
            if !eg.gcd.abs().is_one() {
                return None;
            }
            let sign = if eg.gcd.is_negative() { -BigInt::one() } else { BigInt::one() };
            return Some(FieldElement::from_integer(field, (eg.x * sign).mod_floor(n)));
        }
        let a = field.gen().unwrap();
        let ea = e * &a;
        let Rep::Hnf { n, t, s } = &self.rep else { unreachable!() };
        let cols = vec![
            [e.coeff_1().clone(), e.coeff_a().clone()],
            [ea.coeff_1().clone(), ea.coeff_a().clone()],
            [n.clone(), BigInt::zero()],
            [t.clone(), s.clone()],
        ];
        let sol = solve_2xm(&cols, &[BigInt::one(), BigInt::zero()])?;
        let w = FieldElement::from_parts(field, sol[0].clone(), sol[1].clone(), BigInt::one())
            .unwrap();
        Some(self.reduce_element(&w))
    }

    /// All integral ideals of a given (small) norm.
    pub fn ideals_of_norm(field: QuadField, m: &BigInt) -> Vec<OkIdeal> {
        if m.is_zero() || m.is_negative() {
            return Vec::new();
        }
        if field.is_rational() {
            return vec![OkIdeal { field, rep: Rep::Int(m.clone()) }];
        }
        let mut out = Vec::new();
        let mut s = BigInt::one();
        while &s * &s <= *m {
            if (m % (&s * &s)).is_zero() {
                let nprime = m / (&s * &s);
                // primitive part [[n', 0], [t', 1]] with N(t' + a) = 0 mod n'
                let np = nprime.to_i64();
                if let Some(np) = np {
                    for tp in 0..np {
                        let cand = FieldElement::from_parts(
                            field,
                            BigInt::from(tp),
                            BigInt::one(),
                            BigInt::one(),
                        )
                        .unwrap();
                        let nm = cand.norm();
                        debug_assert!(nm.denom().is_one());
                        if (nm.numer() % &nprime).is_zero() {
                            let ideal = OkIdeal {
                                field,
                                rep: Rep::Hnf {
                                    n: &s * &nprime,
                                    t: &s * BigInt::from(tp),
                                    s: s.clone(),
                                },
                            };
                            if ideal.check_closure() {
                                out.push(ideal);
                            }
                        }
                    }
                }
            }
            s += 1;
        }
        out
    }

    /// Certified perfect-power decomposition (B, e) with B^e = A, e maximal
    /// among exponents this procedure can certify; (A, 1) if none found.
    ///
    /// Candidates are the norm-root gcd B = A + mO with N(A) = m^e, plus an
    /// enumeration of all ideals of norm m when m is small (the gcd candidate
    /// misses roots involving ramified primes).
    pub fn perfect_power_root(&self) -> (Self, u32) {
        let nm = self.norm();
        if nm.is_one() {
            return (self.clone(), 1);
        }
        let max_e = nm.bits() as u32;
        for e in (2..=max_e).rev() {
            let m = nm.nth_root(e);
            if num_traits::pow::Pow::pow(&m, e) != nm {
                continue;
            }
            let m_ideal = match Self::from_generators(
                self.field,
                &[FieldElement::from_integer(self.field, m.clone())],
            ) {
                Ok(i) => i,
                Err(_) => continue,
            };
            let cand = self.gcd(&m_ideal);
            if cand.pow(e) == *self {
                return (cand, e);
            }
            if m <= BigInt::from(1_000_000) {
                for cand in Self::ideals_of_norm(self.field, &m) {
                    if cand.pow(e) == *self {
                        return (cand, e);
                    }
                }
            }
        }
        (self.clone(), 1)
    }

    /// Search for a generator: an element mu in the ideal with |N(mu)| = N(ideal).
    /// `effort` doubles the search box; None when the budget is exhausted
    /// (or the ideal is not principal).
    pub fn principal_generator(&self, effort: u32) -> Option<FieldElement> {
        match &self.rep {
            Rep::Int(n) => Some(FieldElement::from_integer(self.field, n.clone())),
            Rep::Hnf { n, t, s } => {
                let nm = self.norm();
                let eps1 = match fundamental_unit(&self.field) {
                    Ok(u) => u.embed_f64().0,
                    Err(_) => return None,
                };
                let field = self.field;
                let (a1, a2) = field.gen().unwrap().embed_f64();
                let nf = nm.to_f64()?;
                let b1 = (n.to_f64()?, n.to_f64()?);
                let t_f = t.to_f64()?;
                let s_f = s.to_f64()?;
                let b2 = (t_f + s_f * a1, t_f + s_f * a2);
                for stage in 0..=effort {
                    let r = (nf * eps1).sqrt() * (1.02_f64) * (1 << stage) as f64;
                    // j*b1 + k*b2 within [-r, r] in both embeddings
                    let denom = b2.0 - b2.1;
                    if denom.abs() < 1e-12 {
                        return None;
                    }
                    let kmax = (2.0 * r / denom.abs()).ceil() as i64;
                    for k in -kmax..=kmax {
                        let base = k as f64 * b2.0;
                        let jlo = ((-r - base) / b1.0).floor() as i64;
                        let jhi = ((r - base) / b1.0).ceil() as i64;
                        for j in jlo..=jhi {
                            if j == 0 && k == 0 {
                                continue;
                            }
                            let x = j * n + k * t;
                            let y = BigInt::from(k) * s;
                            let mu =
                                FieldElement::from_parts(field, x, y, BigInt::one()).unwrap();
                            if mu.norm().abs() == num_rational::BigRational::from(nm.clone()) {
                                debug_assert!(self.contains(&mu));
                                return Some(mu);
                            }
                        }
                    }
                }
                None
            }
        }
    }
}

impl fmt::Display for OkIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.rep {
            Rep::Int(n) => write!(f, "({n})"),
            Rep::Hnf { n, t, s } => write!(f, "[[{n},0],[{t},{s}]]"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn f5() -> QuadField {
        QuadField::real_quadratic(5).unwrap()
    }

    fn elt(k: QuadField, x: i64, y: i64) -> FieldElement {
        FieldElement::from_parts(k, x.into(), y.into(), 1.into()).unwrap()
    }

    #[test]
    fn principal_ideals_d5() {
        let k = f5();
        let two = OkIdeal::principal(&elt(k, 2, 0)).unwrap();
        assert_eq!(two.hnf().map(|(n, t, s)| (n.clone(), t.clone(), s.clone())),
                   Some((2.into(), 0.into(), 2.into())));
        assert_eq!(two.norm(), BigInt::from(4));
        let p = OkIdeal::principal(&elt(k, 1, 2)).unwrap(); // (2a+1), norm 5
        assert_eq!(p.norm(), BigInt::from(5));
    }

    #[test]
    fn hnf_reduction_d17() {
        // gens [2, 1+a] over d=17 give an ideal of norm 2
        let k = QuadField::real_quadratic(17).unwrap();
        let i = OkIdeal::from_generators(k, &[elt(k, 2, 0), elt(k, 1, 1)]).unwrap();
        assert_eq!(i.norm(), BigInt::from(2));
        // by-hand HNF: N(1+a) = 1 - 1 - 4 = -4, so 2 | N; span {2, 1+a}
        assert!(i.contains(&elt(k, 2, 0)));
        assert!(i.contains(&elt(k, 1, 1)));
        assert!(!i.contains(&k.one()));
    }

    #[test]
    fn zero_ideal_rejected() {
        let k = f5();
        assert!(matches!(
            OkIdeal::from_generators(k, &[k.zero()]),
            Err(NfieldError::ZeroIdeal)
        ));
    }

    #[test]
    fn gcd_over_q() {
        let q = QuadField::rational();
        let six = OkIdeal::principal(&FieldElement::from_integer(q, 6)).unwrap();
        let four = OkIdeal::principal(&FieldElement::from_integer(q, 4)).unwrap();
        assert_eq!(six.gcd(&four).rational_gen(), Some(&BigInt::from(2)));
    }

    #[test]
    fn norm_multiplicative() {
        let k = f5();
        let p = OkIdeal::principal(&elt(k, 1, 2)).unwrap();
        assert_eq!(p.mul(&p).norm(), BigInt::from(25));
    }

    #[test]
    fn gcd_of_square_with_rational_prime() {
        let k = f5();
        // 5 ramifies: (2a+1)^2 = (5) exactly, so the gcd is all of (5)
        let p = OkIdeal::principal(&elt(k, 1, 2)).unwrap();
        let p2 = p.mul(&p);
        let five = OkIdeal::principal(&elt(k, 5, 0)).unwrap();
        assert_eq!(p2, five);
        assert_eq!(p2.gcd(&five).norm(), BigInt::from(25));
        // 11 splits: gcd((3a+2)^2, (11)) = (3a+2), norm 11
        let q = OkIdeal::principal(&elt(k, 2, 3)).unwrap();
        let eleven = OkIdeal::principal(&elt(k, 11, 0)).unwrap();
        let g = q.mul(&q).gcd(&eleven);
        assert_eq!(g, q);
        assert_eq!(g.norm(), BigInt::from(11));
    }

    #[test]
    fn gcd_divides_and_is_divided() {
        // gcd(A,B) divides A and B, and any common divisor divides it,
        // checked by exhaustive small-norm enumeration.
        let k = f5();
        let pool: Vec<OkIdeal> = (2..=50)
            .flat_map(|m| OkIdeal::ideals_of_norm(k, &BigInt::from(m)))
            .collect();
        for a in pool.iter().step_by(7) {
            for b in pool.iter().step_by(11) {
                let g = a.gcd(b);
                assert!(g.divides(a) && g.divides(b));
                for c in pool.iter().step_by(5) {
                    if c.divides(a) && c.divides(b) {
                        assert!(c.divides(&g));
                    }
                }
            }
        }
    }

    #[test]
    fn div_exact_and_val() {
        let k = f5();
        let p = OkIdeal::principal(&elt(k, 1, 2)).unwrap();
        let p3 = p.pow(3);
        assert_eq!(p3.val(&p), 3);
        assert_eq!(p3.div_exact(&p).unwrap(), p.pow(2));
        let two = OkIdeal::principal(&elt(k, 2, 0)).unwrap();
        assert!(p3.div_exact(&two).is_none());
    }

    #[test]
    fn perfect_power_roots() {
        let q = QuadField::rational();
        let eight = OkIdeal::principal(&FieldElement::from_integer(q, 8)).unwrap();
        let (b, e) = eight.perfect_power_root();
        assert_eq!(e, 3);
        assert_eq!(b.rational_gen(), Some(&BigInt::from(2)));
        let six = OkIdeal::principal(&FieldElement::from_integer(q, 6)).unwrap();
        assert_eq!(six.perfect_power_root().1, 1);
        // ramified square: (5) = P^2 over d=5
        let k = f5();
        let five = OkIdeal::principal(&elt(k, 5, 0)).unwrap();
        let (b, e) = five.perfect_power_root();
        assert_eq!(e, 2);
        assert_eq!(b.norm(), BigInt::from(5));
        assert_eq!(b.pow(2), five);
    }

    #[test]
    fn inverse_mod_ideal() {
        let k = f5();
        let i = OkIdeal::principal(&elt(k, 7, 0)).unwrap();
        let e = elt(k, 3, 1);
        let w = i.inverse_mod(&e).unwrap();
        let prod = i.reduce_element(&(&e * &w));
        assert!(prod.is_one());
        // non-invertible: 7 mod (7)
        assert!(i.inverse_mod(&elt(k, 7, 0)).is_none());
    }

    #[test]
    fn principal_generator_search() {
        let k = f5();
        let p = OkIdeal::principal(&elt(k, 1, 2)).unwrap();
        let g = p.principal_generator(8).unwrap();
        assert_eq!(OkIdeal::principal(&g).unwrap(), p);
        assert_eq!(g.norm().abs(), BigRational::from(BigInt::from(5)));
    }
}
