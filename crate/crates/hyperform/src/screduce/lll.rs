//! LLL over Z for tiny ranks, with exact rational Gram-Schmidt.
//! delta = 99/100; the transformation matrix is returned alongside the
//! reduced basis so lattice vectors can be traced back to (c, d) pairs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

#[cfg(test)]
fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// LLL-reduce the rows of `basis`; returns (reduced, transform) with
/// reduced = transform * basis over Z.
pub fn lll_z(basis: &[Vec<BigInt>]) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let k = basis.len();
    let mut b: Vec<Vec<BigInt>> = basis.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..k)
        .map(|i| (0..k).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect();
    let delta = BigRational::new(BigInt::from(99), BigInt::from(100));

    // exact Gram-Schmidt data recomputed from scratch (rank <= 4)
    let gso = |b: &[Vec<BigInt>]| -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
        let mut mu = vec![vec![BigRational::zero(); k]; k];
        let mut norms = vec![BigRational::zero(); k];
        let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(k);
        for i in 0..k {
            let mut v: Vec<BigRational> =
                b[i].iter().map(|x| BigRational::from(x.clone())).collect();
            for j in 0..i {
                if norms[j].is_zero() {
                    continue;
                }
                let num: BigRational = b[i]
                    .iter()
                    .zip(&star[j])
                    .map(|(x, y)| BigRational::from(x.clone()) * y)
                    .sum();
                let m = num / &norms[j];
                for (vi, sj) in v.iter_mut().zip(&star[j]) {
                    *vi -= &m * sj;
                }
                mu[i][j] = m;
            }
            norms[i] = v.iter().map(|x| x * x).sum();
            star.push(v);
        }
        (mu, norms)
    };

    let mut i = 1;
    let mut guard = 0;
    while i < k {
        guard += 1;
        if guard > 10_000 {
            break;
        }
        let (mu, norms) = gso(&b);
        // size-reduce b_i against b_j, j < i
        let mut changed = false;
        for j in (0..i).rev() {
            let r = mu[i][j].round().to_integer();
            if !r.is_zero() {
                for t in 0..b[i].len() {
                    let s = &b[j][t] * &r;
                    b[i][t] = &b[i][t] - s;
                }
                for t in 0..k {
                    let s = &u[j][t] * &r;
                    u[i][t] = &u[i][t] - s;
                }
                changed = true;
            }
        }
        let (mu, norms) = if changed { gso(&b) } else { (mu, norms) };
        // Lovasz condition
        let lhs = &norms[i] + &mu[i][i - 1] * &mu[i][i - 1] * &norms[i - 1];
        if lhs < &delta * &norms[i - 1] {
            b.swap(i, i - 1);
            u.swap(i, i - 1);
            i = i.max(2) - 1;
        } else {
            i += 1;
        }
    }
    (b, u)
}
