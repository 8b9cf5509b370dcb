//! The upper-half-plane covariant z(F).
//!
//! z(F) is the unique minimizer over H of
//!     Phi(z) = sum_{finite roots b} log(|z - b|^2 / Im z) - m log(Im z),
//! where m counts roots at infinity. Moebius substitutions shift Phi by a
//! z-independent constant, so the minimizer transforms covariantly under
//! GL_2(R) (with H identified with (C \ R)/conjugation). Phi is strictly
//! convex in the hyperbolic metric for separable forms, so damped Newton
//! from the root barycenter converges to the global minimum.

use crate::binform::BinaryForm;

use super::roots::complex_roots;
use super::ScreduceError;

/// A point of H^d (one coordinate per real embedding) with error radii.
#[derive(Debug, Clone)]
pub struct HPoint {
    pub coords: Vec<(f64, f64)>,
    pub err: Vec<f64>,
}

impl HPoint {
    /// Certified membership: Im z_m exceeds the error radius everywhere.
    pub fn certified_upper_half(&self) -> bool {
        self.coords.iter().zip(&self.err).all(|((_, y), e)| *y > *e)
    }

    pub fn norm_im(&self) -> f64 {
        self.coords.iter().map(|(_, y)| y).product()
    }
}

fn phi(roots: &[(f64, f64)], n: usize, x: f64, y: f64) -> f64 {
    let mut s = -(n as f64) * y.ln();
    for (u, v) in roots {
        let d2 = (x - u) * (x - u) + (y - v) * (y - v);
        s += d2.ln();
    }
    s
}

fn grad_hess(
    roots: &[(f64, f64)],
    n: usize,
    x: f64,
    y: f64,
) -> ((f64, f64), (f64, f64, f64), f64) {
    let mut gx = 0.0;
    let mut gy = -(n as f64) / y;
    let mut hxx = 0.0;
    let mut hxy = 0.0;
    let mut hyy = (n as f64) / (y * y);
    let mut scale = (n as f64) / y;
    for (u, v) in roots {
        let dx = x - u;
        let dy = y - v;
        let d2 = dx * dx + dy * dy;
        gx += 2.0 * dx / d2;
        gy += 2.0 * dy / d2;
        hxx += 2.0 * (d2 - 2.0 * dx * dx) / (d2 * d2);
        hxy += -4.0 * dx * dy / (d2 * d2);
        hyy += 2.0 * (d2 - 2.0 * dy * dy) / (d2 * d2);
        scale += 2.0 / d2.sqrt();
    }
    ((gx, gy), (hxx, hxy, hyy), scale)
}

/// The covariant point for one real embedding, with an error estimate.
pub fn covariant(
    form: &BinaryForm,
    embedding: usize,
    prec: u32,
) -> Result<((f64, f64), f64), ScreduceError> {
    let rs = complex_roots(form, embedding, prec.clamp(60, 200))?;
    let roots = rs.finite_f64();
    let n = form.degree();
    covariant_from_roots(&roots, n, super::roots::rat_f64(&rs.err))
}

pub(crate) fn covariant_from_roots(
    roots: &[(f64, f64)],
    n: usize,
    root_err: f64,
) -> Result<((f64, f64), f64), ScreduceError> {
    let k = roots.len();
    assert!(k >= 1);
    // barycenter start, lifted to the root spread
    let mut x: f64 = roots.iter().map(|(u, _)| u).sum::<f64>() / k as f64;
    let spread = roots
        .iter()
        .map(|(u, v)| ((u - x) * (u - x) + v * v).sqrt())
        .fold(0.0f64, f64::max);
    let mut y = spread.max(1e-6);
    let mut last_step = f64::INFINITY;
    for iter in 0..500 {
        let ((gx, gy), (hxx, hxy, hyy), scale) = grad_hess(roots, n, x, y);
        let gnorm = gx.hypot(gy);
        if gnorm <= 1e-15 * scale && iter > 0 {
            let err = (last_step + gnorm / scale.max(1e-300) + root_err * 4.0).max(1e-16 * (1.0 + y));
            return Ok(((x, y), err));
        }
        let det = hxx * hyy - hxy * hxy;
        let (mut sx, mut sy) = if det > 0.0 && hxx > 0.0 {
            ((-gx * hyy + gy * hxy) / det, (-gy * hxx + gx * hxy) / det)
        } else {
            (-gx / scale, -gy / scale)
        };
        // keep the step inside H
        let mut t = 1.0;
        while y + t * sy <= 0.0 {
            t *= 0.5;
        }
        let p0 = phi(roots, n, x, y);
        let mut halved = 0;
        while halved < 60 {
            let p1 = phi(roots, n, x + t * sx, y + t * sy);
            if p1 <= p0 + 1e-18 * p0.abs() + 1e-300 || p1 <= p0 {
                break;
            }
            t *= 0.5;
            halved += 1;
        }
        if halved == 60 {
            sx = -gx / scale;
            sy = -gy / scale;
            t = 1e-3;
            while y + t * sy <= 0.0 {
                t *= 0.5;
            }
        }
        x += t * sx;
        y += t * sy;
        last_step = (t * sx).hypot(t * sy);
    }
    // accept near-converged iterates rather than failing outright
    let ((gx, gy), _, scale) = grad_hess(roots, n, x, y);
    let gnorm = gx.hypot(gy);
    if gnorm <= 1e-9 * scale {
        return Ok(((x, y), (gnorm / scale + root_err * 4.0).max(1e-12)));
    }
    Err(ScreduceError::CovariantDiverged(format!(
        "gradient {gnorm:.3e} at ({x:.6}, {y:.6})"
    )))
}

/// z(F) in H^d: one covariant coordinate per real embedding.
pub fn covariant_vector(form: &BinaryForm) -> Result<HPoint, ScreduceError> {
    let d = form.field().degree();
    let mut coords = Vec::with_capacity(d);
    let mut err = Vec::with_capacity(d);
    for m in 0..d {
        let ((x, y), e) = covariant(form, m, 80)?;
        coords.push((x, y));
        err.push(e);
    }
    Ok(HPoint { coords, err })
}
