//! Exact linear algebra over the integers: fraction-free (Bareiss)
//! elimination for definiteness tests and rational system solving. No
//! floating point anywhere; definiteness and integrality are yes/no answers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Sylvester test: `m` is negative definite iff the leading principal minors
/// alternate in sign starting negative, i.e. (-1)^k det(M_k) > 0 for all k.
///
/// Bareiss elimination keeps every intermediate entry an integer; after
/// eliminating column k the pivot a[k][k] equals det(M_{k+1}). A zero or
/// wrong-signed pivot settles the answer immediately.
pub(crate) fn negative_definite(m: &[Vec<i64>]) -> bool {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut prev = BigInt::one();
    for k in 0..n {
        let det = a[k][k].clone();
        let want_negative = k % 2 == 0;
        if det.is_zero() || det.is_negative() != want_negative {
            return false;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[k][k] * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = det;
    }
    true
}

/// Solves `m x = b` exactly over the rationals. Returns `None` when `m` is
/// singular. Forward elimination is fraction-free with row pivoting (row
/// swaps keep the exact-division property); back substitution is rational.
pub(crate) fn solve_exact(m: &[Vec<i64>], b: &[BigInt]) -> Option<Vec<BigRational>> {
    let n = m.len();
    assert_eq!(b.len(), n);
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r: Vec<BigInt> = row.iter().map(|&x| BigInt::from(x)).collect();
            r.push(rhs.clone());
            r
        })
        .collect();

    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let pivot_row = (k + 1..n).find(|&r| !a[r][k].is_zero())?;
            a.swap(k, pivot_row);
        }
        for i in k + 1..n {
            for j in k + 1..=n {
                a[i][j] = (&a[k][k] * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }

    let mut x = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = BigRational::from(a[i][n].clone());
        for j in i + 1..n {
            acc -= BigRational::from(a[i][j].clone()) * &x[j];
        }
        x[i] = acc / BigRational::from(a[i][i].clone());
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn chain_with_genus_one_tail_is_negative_definite() {
        // Leading minors -1, 1, -1.
        let m = vec![vec![-1, 1, 0], vec![1, -2, 1], vec![0, 1, -2]];
        assert!(negative_definite(&m));
    }

    #[test]
    fn zero_and_degenerate_matrices_are_rejected() {
        assert!(!negative_definite(&[vec![0]]));
        assert!(!negative_definite(&[vec![1]]));
        // det = 0: negative semidefinite only.
        assert!(!negative_definite(&[vec![-2, 2], vec![2, -2]]));
        assert!(!negative_definite(&[vec![0, 1], vec![1, 0]]));
    }

    #[test]
    fn empty_matrix_is_vacuously_definite() {
        assert!(negative_definite(&[]));
    }

    #[test]
    fn solves_an_integral_system() {
        let m = vec![vec![-1, 1, 0], vec![1, -2, 1], vec![0, 1, -2]];
        let x = solve_exact(&m, &big(&[-1, 0, 0])).unwrap();
        let expect = big(&[3, 2, 1]);
        for (xi, ei) in x.iter().zip(&expect) {
            assert!(xi.is_integer());
            assert_eq!(xi.to_integer(), *ei);
        }
    }

    #[test]
    fn solves_a_non_integral_system() {
        // Star: center -3, three -2 leaves. Solution (2/3, 1/3, 1/3, 1/3).
        let m = vec![
            vec![-3, 1, 1, 1],
            vec![1, -2, 0, 0],
            vec![1, 0, -2, 0],
            vec![1, 0, 0, -2],
        ];
        let x = solve_exact(&m, &big(&[-1, 0, 0, 0])).unwrap();
        assert_eq!(x[0], BigRational::new(BigInt::from(2), BigInt::from(3)));
        assert_eq!(x[1], BigRational::new(BigInt::from(1), BigInt::from(3)));
    }

    #[test]
    fn pivoting_handles_zero_diagonal() {
        let m = vec![vec![0, 1], vec![1, 0]];
        let x = solve_exact(&m, &big(&[5, 7])).unwrap();
        assert_eq!(x[0], BigRational::from(BigInt::from(7)));
        assert_eq!(x[1], BigRational::from(BigInt::from(5)));
    }

    #[test]
    fn singular_system_returns_none() {
        let m = vec![vec![1, 1], vec![1, 1]];
        assert!(solve_exact(&m, &big(&[1, 2])).is_none());
    }
}
