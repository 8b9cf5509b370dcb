//! Small integer linear algebra: solving A x = b over Z for a 2-row matrix.
//! Used for inverses modulo an ideal and for completing unimodular matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

/// One integral solution x of sum_j cols[j] * x[j] = b, if any.
pub fn solve_2xm(cols: &[[BigInt; 2]], b: &[BigInt; 2]) -> Option<Vec<BigInt>> {
    let m = cols.len();
    let mut work: Vec<[BigInt; 2]> = cols.to_vec();
    // track[j] = expression of work column j in the original columns
    let mut track: Vec<Vec<BigInt>> = (0..m)
        .map(|j| (0..m).map(|i| BigInt::from((i == j) as i64)).collect())
        .collect();

    let clear_row = |work: &mut Vec<[BigInt; 2]>,
                         track: &mut Vec<Vec<BigInt>>,
                         row: usize,
                         skip: Option<usize>|
     -> Option<usize> {
        let mut pivot: Option<usize> = None;
        for j in 0..m {
            if Some(j) == skip || work[j][row].is_zero() {
                continue;
            }
            match pivot {
                None => pivot = Some(j),
                Some(p) => {
                    let eg = work[p][row].extended_gcd(&work[j][row]);
                    let (g, s, t) = (eg.gcd, eg.x, eg.y);
                    let cp = work[p].clone();
                    let cj = work[j].clone();
                    let fp = &cp[row] / &g;
                    let fj = &cj[row] / &g;
                    for r in 0..2 {
                        work[p][r] = &s * &cp[r] + &t * &cj[r];
                        work[j][r] = &fp * &cj[r] - &fj * &cp[r];
                    }
                    let tp = track[p].clone();
                    let tj = track[j].clone();
                    for i in 0..m {
                        track[p][i] = &s * &tp[i] + &t * &tj[i];
                        track[j][i] = &fp * &tj[i] - &fj * &tp[i];
                    }
                }
            }
        }
        pivot
    };

    let p0 = clear_row(&mut work, &mut track, 0, None);
    let p1 = clear_row(&mut work, &mut track, 1, p0);

    let mut x = vec![BigInt::zero(); m];
    let mut rem = b.clone();
    if let Some(p) = p0 {
        let g = &work[p][0];
        if !(&rem[0] % g).is_zero() {
            return None;
        }
        let y = &rem[0] / g;
        rem[0] = &rem[0] - &y * &work[p][0];
        rem[1] = &rem[1] - &y * &work[p][1];
        for i in 0..m {
            x[i] = &x[i] + &y * &track[p][i];
        }
    }
    if !rem[0].is_zero() {
        return None;
    }
    if let Some(p) = p1 {
        let g = &work[p][1];
        if !(&rem[1] % g).is_zero() {
            return None;
        }
        let y = &rem[1] / g;
        rem[1] = &rem[1] - &y * &work[p][1];
        for i in 0..m {
            x[i] = &x[i] + &y * &track[p][i];
        }
    }
    if !rem[1].is_zero() {
        return None;
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn solves_simple_systems() {
        // 2x + 3y = 1
        let cols = vec![[bi(2), bi(0)], [bi(3), bi(0)]];
        let x = solve_2xm(&cols, &[bi(1), bi(0)]).unwrap();
        assert_eq!(&x[0] * 2 + &x[1] * 3, bi(1));
        // no solution: 2x + 4y = 1
        let cols = vec![[bi(2), bi(0)], [bi(4), bi(0)]];
        assert!(solve_2xm(&cols, &[bi(1), bi(0)]).is_none());
    }

    #[test]
    fn solves_two_rows() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let cols: Vec<[BigInt; 2]> = (0..4)
                .map(|_| [bi(rng.gen_range(-9..9)), bi(rng.gen_range(-9..9))])
                .collect();
            let coeffs: Vec<i64> = (0..4).map(|_| rng.gen_range(-5..5)).collect();
            let b = [
                cols.iter().zip(&coeffs).map(|(c, k)| &c[0] * *k).sum::<BigInt>(),
                cols.iter().zip(&coeffs).map(|(c, k)| &c[1] * *k).sum::<BigInt>(),
            ];
            let x = solve_2xm(&cols, &b).expect("constructed system must be solvable");
            let check0: BigInt = cols.iter().zip(&x).map(|(c, k)| &c[0] * k).sum();
            let check1: BigInt = cols.iter().zip(&x).map(|(c, k)| &c[1] * k).sum();
            assert_eq!(check0, b[0]);
            assert_eq!(check1, b[1]);
        }
    }
}
