//! Stoll-Cremona reduction over Q and its GL_2(O_k) x O_k^* analogue over
//! real quadratic fields.
//!
//! Over Q: shift Re(z) into [-1/2, 1/2], invert while |z| < 1. Over a real
//! quadratic field, a point z in H^2 is reduced when (R) Re(z) lies in the
//! centered fundamental parallelogram of O_k, (I) log Im(z) lies in the
//! centered fundamental interval of log O_k^*, and (M) N(Im z) is maximal
//! in the GL_2(O_k)-orbit. Step 5 finds norm-increasing matrices via an
//! LLL pass on the lattice {cz + d}, falling back to a provably complete
//! exhaustive search; step 6 walks the unit lattice to minimize coefficient
//! heights.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::binform::{BinaryForm, Transform};
use crate::nfield::zlinalg::solve_2xm;
use crate::nfield::{fundamental_unit, FieldElement, QuadField};

use super::covariant::{covariant, covariant_vector, HPoint};
use super::lll::lll_z;
use super::ScreduceError;

/// Certification flags for the three reduction conditions.
#[derive(Debug, Clone, Copy)]
pub struct ReduceFlags {
    pub r_ok: bool,
    pub i_ok: bool,
    /// True when the exhaustive step-5 search proved N(Im z) maximal.
    pub m_verified: bool,
}

#[derive(Debug, Clone)]
pub struct Reduced {
    pub form: BinaryForm,
    pub transform: Transform,
    pub flags: ReduceFlags,
}

const TOL: f64 = 1e-9;

/// SL_2(Z)-reduction over Q.
pub fn reduce_sl2z(form: &BinaryForm) -> Result<(BinaryForm, Transform), ScreduceError> {
    let field = form.field();
    if !field.is_rational() {
        return Err(ScreduceError::NeedsRationalField);
    }
    let mut f = form.clone();
    let mut t = Transform::identity(field);
    for _ in 0..1000 {
        let ((x, _), _) = covariant(&f, 0, 80)?;
        let m = x.round();
        if m.abs() >= 0.5 {
            let step = Transform::shift(field, FieldElement::from_integer(field, m as i64));
            f = f.act(&step)?;
            t = t.compose(&step);
        }
        let ((x, y), _) = covariant(&f, 0, 80)?;
        if (x * x + y * y).sqrt() < 1.0 - 1e-13 {
            // F(Z, -X): z -> -1/z
            let step = Transform::new(
                field.zero(),
                field.one(),
                -field.one(),
                field.zero(),
                field.one(),
            )?;
            f = f.act(&step)?;
            t = t.compose(&step);
        } else {
            return Ok((f, t));
        }
    }
    Err(ScreduceError::BudgetExhausted)
}

/// epsilon^{-k} F with k chosen to minimize the maximum coefficient height
/// (over Q: sign normalization only). Returns the rescaled form and the
/// scaling transform applied.
pub fn unit_walk(form: &BinaryForm) -> Result<(BinaryForm, Transform), ScreduceError> {
    let field = form.field();
    let mut f = form.clone();
    let mut t = Transform::identity(field);
    if !field.is_rational() {
        let eps = fundamental_unit(&field)?;
        let (e1, e2) = eps.embed_f64();
        let logs: Vec<(f64, f64)> = f
            .coeffs()
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| {
                let (v1, v2) = c.embed_f64();
                (v1.abs().ln(), v2.abs().ln())
            })
            .collect();
        let le = (e1.abs().ln(), e2.abs().ln());
        let obj = |k: i64| -> f64 {
            logs.iter()
                .map(|(c1, c2)| {
                    let a = c1 - k as f64 * le.0;
                    let b = c2 - k as f64 * le.1;
                    a.max(b)
                })
                .fold(f64::NEG_INFINITY, f64::max)
        };
        // convex piecewise-linear in k: walk from 0 to a local = global minimum
        let mut k = 0i64;
        loop {
            let here = obj(k);
            if obj(k + 1) < here {
                k += 1;
            } else if obj(k - 1) < here {
                k -= 1;
            } else {
                break;
            }
        }
        if k != 0 {
            let u = eps.pow(-k)?;
            let step = Transform::scaling(field, u)?;
            f = f.act(&step)?;
            t = t.compose(&step);
        }
    }
    // positive leading coefficient under phi_1
    let lead = f.coeff(f.poly_degree());
    if lead.embed_f64().0 < 0.0 {
        let step = Transform::scaling(field, -field.one())?;
        f = f.act(&step)?;
        t = t.compose(&step);
    }
    Ok((f, t))
}

fn nv_of(z: &HPoint, c: &FieldElement, d: &FieldElement) -> f64 {
    let (x1, y1) = z.coords[0];
    let (x2, y2) = z.coords[1];
    let (c1, c2) = c.embed_f64();
    let (d1, d2) = d.embed_f64();
    let m1 = ((c1 * x1 + d1).powi(2) + (c1 * y1).powi(2)).sqrt();
    let m2 = ((c2 * x2 + d2).powi(2) + (c2 * y2).powi(2)).sqrt();
    m1 * m2
}

/// Fast attempt: LLL on the rank-4 lattice {cz + d} in C^2 = R^4; returns
/// reduced-basis candidates with N(|cz+d|) < 1, best first.
fn step5_lll(
    z: &HPoint,
    field: QuadField,
) -> Result<Vec<(FieldElement, FieldElement)>, ScreduceError> {
    let a = field.gen()?;
    let (a1, a2) = a.embed_f64();
    let (x1, y1) = z.coords[0];
    let (x2, y2) = z.coords[1];
    let scale = (1u64 << 40) as f64;
    let rows_f = [
        [1.0, 0.0, 1.0, 0.0],
        [a1, 0.0, a2, 0.0],
        [x1, y1, x2, y2],
        [a1 * x1, a1 * y1, a2 * x2, a2 * y2],
    ];
    let basis: Vec<Vec<BigInt>> = rows_f
        .iter()
        .map(|r| r.iter().map(|v| BigInt::from((v * scale).round() as i64)).collect())
        .collect();
    let (_, tr) = lll_z(&basis);
    let mut lll_hits: Vec<(f64, FieldElement, FieldElement)> = Vec::new();
    for coords in &tr {
        let d = FieldElement::from_parts(field, coords[0].clone(), coords[1].clone(), 1.into())?;
        let c = FieldElement::from_parts(field, coords[2].clone(), coords[3].clone(), 1.into())?;
        if c.is_zero() {
            continue;
        }
        let nv = nv_of(z, &c, &d);
        if nv < 1.0 - TOL {
            lll_hits.push((nv, c, d));
        }
    }
    lll_hits.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
    Ok(lll_hits.into_iter().map(|(_, c, d)| (c, d)).collect())
}

/// Exhaustive search: |N(c)| < 1/N(Im z) with c up to units, then a bounded
/// box for d from the per-embedding factor bounds. Provably enumerates every
/// (c, d) with N(|cz+d|) < 1 up to unit scaling.
fn step5_exhaustive(
    z: &HPoint,
    field: QuadField,
) -> Result<Vec<(FieldElement, FieldElement)>, ScreduceError> {
    let a = field.gen()?;
    let (a1, a2) = a.embed_f64();
    let (x1, y1) = z.coords[0];
    let (x2, y2) = z.coords[1];
    let eps1 = fundamental_unit(&field)?.embed_f64().0;
    let bc = 1.0 / (y1 * y2) * (1.0 + TOL);
    let r = (bc * eps1).sqrt() * 1.02 + 1e-9;
    let mut cands: Vec<(f64, BigInt, BigInt, BigInt, BigInt, BigInt)> = Vec::new();
    let ycmax = (2.0 * r / (a1 - a2).abs()).ceil() as i64 + 1;
    for yc in -ycmax..=ycmax {
        let lo = (-r - yc as f64 * a1).max(-r - yc as f64 * a2);
        let hi = (r - yc as f64 * a1).min(r - yc as f64 * a2);
        // allow a little slack so boundary candidates are kept
        let lo = (lo - 0.5).floor() as i64;
        let hi = (hi + 0.5).ceil() as i64;
        for xc in lo..=hi {
            if xc == 0 && yc == 0 {
                continue;
            }
            let c = FieldElement::from_parts(field, xc.into(), yc.into(), 1.into())?;
            let nc = c.norm().to_integer();
            let ncf = nc.to_f64().unwrap_or(f64::INFINITY).abs();
            if ncf >= bc {
                continue;
            }
            let (c1, c2) = c.embed_f64();
            if c1 == 0.0 || c2 == 0.0 || ncf == 0.0 {
                continue;
            }
            // factor bounds: (c_i x_i + d_i)^2 < 1/prod_{j!=i}(c_j y_j)^2 - (c_i y_i)^2
            let r1sq = 1.0 / (c2 * y2).powi(2) - (c1 * y1).powi(2);
            let r2sq = 1.0 / (c1 * y1).powi(2) - (c2 * y2).powi(2);
            if r1sq <= 0.0 || r2sq <= 0.0 {
                continue;
            }
            let (r1, r2) = (r1sq.sqrt() * (1.0 + TOL), r2sq.sqrt() * (1.0 + TOL));
            let u1 = c1 * x1;
            let u2 = c2 * x2;
            let i1 = (-u1 - r1, -u1 + r1);
            let i2 = (-u2 - r2, -u2 + r2);
            let ydlo = ((i1.0 - i2.1) / (a1 - a2)).min((i1.1 - i2.0) / (a1 - a2));
            let ydhi = ((i1.0 - i2.1) / (a1 - a2)).max((i1.1 - i2.0) / (a1 - a2));
            for yd in (ydlo.floor() as i64 - 1)..=(ydhi.ceil() as i64 + 1) {
                let xlo = (i1.0 - yd as f64 * a1).max(i2.0 - yd as f64 * a2);
                let xhi = (i1.1 - yd as f64 * a1).min(i2.1 - yd as f64 * a2);
                for xd in (xlo.floor() as i64 - 1)..=(xhi.ceil() as i64 + 1) {
                    let d = FieldElement::from_parts(field, xd.into(), yd.into(), 1.into())?;
                    let nv = nv_of(z, &c, &d);
                    if nv < 1.0 - TOL {
                        cands.push((
                            nv,
                            nc.abs(),
                            xc.into(),
                            yc.into(),
                            xd.into(),
                            yd.into(),
                        ));
                    }
                }
            }
        }
    }
    // deterministic order: N(|cz+d|), then |N(c)|, then coordinates
    cands.sort_by(|p, q| {
        p.0.partial_cmp(&q.0)
            .unwrap()
            .then_with(|| p.1.cmp(&q.1))
            .then_with(|| p.2.cmp(&q.2))
            .then_with(|| p.3.cmp(&q.3))
            .then_with(|| p.4.cmp(&q.4))
            .then_with(|| p.5.cmp(&q.5))
    });
    let mut out = Vec::new();
    for (_, _, xc, yc, xd, yd) in cands {
        let c = FieldElement::from_parts(field, xc, yc, 1.into())?;
        let d = FieldElement::from_parts(field, xd, yd, 1.into())?;
        out.push((c, d));
    }
    Ok(out)
}

/// The minimizing (c, d) with N(|cz+d|) < 1, if one exists: the LLL pass is
/// tried first, then the exhaustive search settles the question.
pub fn step5_search(
    z: &HPoint,
    field: QuadField,
) -> Result<Option<(FieldElement, FieldElement)>, ScreduceError> {
    if let Some(hit) = step5_lll(z, field)?.into_iter().next() {
        return Ok(Some(hit));
    }
    Ok(step5_exhaustive(z, field)?.into_iter().next())
}

/// Complete (c, d) to a matrix (a b; c d) in GL_2(O_k), det a unit.
fn complete_matrix(
    field: QuadField,
    c: &FieldElement,
    d: &FieldElement,
) -> Option<(FieldElement, FieldElement)> {
    let gen = field.gen().ok()?;
    let da = d * &gen;
    let ca = c * &gen;
    let cols = vec![
        [d.coeff_1().clone(), d.coeff_a().clone()],
        [da.coeff_1().clone(), da.coeff_a().clone()],
        [-c.coeff_1().clone(), -c.coeff_a().clone()],
        [-ca.coeff_1().clone(), -ca.coeff_a().clone()],
    ];
    let sol = solve_2xm(&cols, &[BigInt::from(1), BigInt::from(0)])?;
    let a = FieldElement::from_parts(field, sol[0].clone(), sol[1].clone(), 1.into()).ok()?;
    let b = FieldElement::from_parts(field, sol[2].clone(), sol[3].clone(), 1.into()).ok()?;
    Some((a, b))
}

/// GL_2(O_k) x O_k^* reduction. Over Q this is SL_2(Z)-reduction followed by
/// sign normalization.
pub fn reduce_gl2ok(form: &BinaryForm) -> Result<Reduced, ScreduceError> {
    reduce_gl2ok_budget(form, 64)
}

pub fn reduce_gl2ok_budget(form: &BinaryForm, max_rounds: u32) -> Result<Reduced, ScreduceError> {
    let field = form.field();
    if field.is_rational() {
        let (f, t) = reduce_sl2z(form)?;
        let (f, tw) = unit_walk(&f)?;
        let t = t.compose(&tw);
        let ((x, y), _) = covariant(&f, 0, 80)?;
        let flags = ReduceFlags {
            r_ok: x.abs() <= 0.5 + 1e-12,
            i_ok: true,
            m_verified: (x * x + y * y).sqrt() >= 1.0 - 1e-12,
        };
        return Ok(Reduced { form: f, transform: t, flags });
    }

    let eps = fundamental_unit(&field)?;
    let (e1, e2) = eps.embed_f64();
    let le = (e1.abs().ln(), e2.abs().ln());
    let a = field.gen()?;
    let (a1, a2) = a.embed_f64();
    let mut f = form.clone();
    let mut t = Transform::identity(field);
    let mut m_verified = false;
    let mut rounds = 0;
    loop {
        rounds += 1;
        if rounds > max_rounds {
            break; // best found; (M) unverified
        }
        // step 3: unit rescale so log Im(z) lies in the centered interval
        let z = covariant_vector(&f)?;
        let w = (z.coords[0].1.ln(), z.coords[1].1.ln());
        let proj = (w.0 * le.0 + w.1 * le.1) / (le.0 * le.0 + le.1 * le.1);
        let k = proj.round() as i64;
        if k != 0 {
            let u = eps.pow(k)?;
            let step = Transform::new(u, field.zero(), field.zero(), field.one(), field.one())?;
            f = f.act(&step)?;
            t = t.compose(&step);
        }
        // step 4: translate Re(z) into the centered parallelogram on {1, a}
        let z = covariant_vector(&f)?;
        let (rx1, rx2) = (z.coords[0].0, z.coords[1].0);
        let s = (rx1 - rx2) / (a1 - a2);
        let r = rx1 - s * a1;
        let (br, bs) = (r.round() as i64, s.round() as i64);
        if br != 0 || bs != 0 {
            let b = FieldElement::from_parts(field, br.into(), bs.into(), 1.into())?;
            let step = Transform::shift(field, b);
            f = f.act(&step)?;
            t = t.compose(&step);
        }
        // step 5: look for a norm-increasing matrix; only completable (c, d)
        // correspond to orbit elements, so non-unimodular pairs are skipped
        let z = covariant_vector(&f)?;
        let mut applied = false;
        for phase in 0..2 {
            let cands = if phase == 0 {
                step5_lll(&z, field)?
            } else {
                step5_exhaustive(&z, field)?
            };
            for (c, d) in &cands {
                if let Some((ma, mb)) = complete_matrix(field, c, d) {
                    // act by adj(M) = (d -b; -c a): z -> M z, N(Im) increases
                    let step = Transform::new(d.clone(), -mb, -c.clone(), ma, field.one())?;
                    f = f.act(&step)?;
                    t = t.compose(&step);
                    applied = true;
                    break;
                }
            }
            if applied {
                break;
            }
        }
        if !applied {
            m_verified = true;
            break;
        }
    }
    // step 6: unit walk on coefficient heights
    let (f, tw) = unit_walk(&f)?;
    let t = t.compose(&tw);
    let z = covariant_vector(&f)?;
    let (rx1, rx2) = (z.coords[0].0, z.coords[1].0);
    let s = (rx1 - rx2) / (a1 - a2);
    let r = rx1 - s * a1;
    let w = (z.coords[0].1.ln(), z.coords[1].1.ln());
    let proj = (w.0 * le.0 + w.1 * le.1) / (le.0 * le.0 + le.1 * le.1);
    let flags = ReduceFlags {
        r_ok: r.abs() <= 0.5 + 1e-6 && s.abs() <= 0.5 + 1e-6,
        i_ok: proj.abs() <= 0.5 + 1e-6,
        m_verified,
    };
    Ok(Reduced { form: f, transform: t, flags })
}
