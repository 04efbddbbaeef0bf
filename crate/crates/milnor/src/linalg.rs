//! Exact linear algebra over the rationals: row reduction, rank, kernels,
//! and fraction-free integer determinants. Everything uses arbitrary
//! precision; there is no epsilon anywhere.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense matrix of exact rationals, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMat {
    rows: Vec<Vec<BigRational>>,
    cols: usize,
}

impl QMat {
    pub fn new(rows: Vec<Vec<BigRational>>, cols: usize) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == cols));
        QMat { rows, cols }
    }

    pub fn from_int_rows<I: Clone + Into<BigInt>>(rows: &[Vec<I>], cols: usize) -> Self {
        let rows = rows
            .iter()
            .map(|r| {
                debug_assert_eq!(r.len(), cols);
                r.iter()
                    .map(|v| BigRational::from_integer(v.clone().into()))
                    .collect()
            })
            .collect();
        QMat { rows, cols }
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.rows[i]
    }

    /// Reduced row echelon form; returns the reduced matrix (zero rows
    /// dropped) together with the pivot column of each remaining row.
    pub fn rref(&self) -> (QMat, Vec<usize>) {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut next_row = 0usize;
        for col in 0..self.cols {
            let Some(pivot_row) = (next_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(next_row, pivot_row);
            let inv = rows[next_row][col].recip();
            for v in rows[next_row].iter_mut() {
                *v *= &inv;
            }
            for r in 0..rows.len() {
                if r != next_row && !rows[r][col].is_zero() {
                    let factor = rows[r][col].clone();
                    for c in 0..self.cols {
                        let sub = &rows[next_row][c] * &factor;
                        rows[r][c] -= sub;
                    }
                }
            }
            pivots.push(col);
            next_row += 1;
            if next_row == rows.len() {
                break;
            }
        }
        rows.truncate(next_row);
        (QMat::new(rows, self.cols), pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel {x : A·x = 0}, one vector per free column,
    /// in the standard form read off from the reduced row echelon form.
    pub fn kernel_basis(&self) -> Vec<Vec<BigRational>> {
        let (r, pivots) = self.rref();
        let pivot_of_col: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (row, &col) in pivots.iter().enumerate() {
                v[col] = Some(row);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut vec = vec![BigRational::zero(); self.cols];
            vec[free] = BigRational::one();
            for (row, &col) in pivots.iter().enumerate() {
                vec[col] = -r.rows[row][free].clone();
            }
            basis.push(vec);
        }
        basis
    }

    /// Solve A·x = rhs for square invertible A; None when A is singular.
    pub fn solve(&self, rhs: &[BigRational]) -> Option<Vec<BigRational>> {
        let n = self.cols;
        if self.rows.len() != n || rhs.len() != n {
            return None;
        }
        let augmented: Vec<Vec<BigRational>> = self
            .rows
            .iter()
            .zip(rhs)
            .map(|(row, b)| {
                let mut r = row.clone();
                r.push(b.clone());
                r
            })
            .collect();
        let (reduced, pivots) = QMat::new(augmented, n + 1).rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return None;
        }
        Some((0..n).map(|i| reduced.rows[i][n].clone()).collect())
    }
}

/// Rank of a set of integer row vectors.
pub fn int_rank(rows: &[Vec<BigInt>], cols: usize) -> usize {
    QMat::from_int_rows(rows, cols).rank()
}

/// Scale a nonzero rational vector to a primitive integer vector (gcd of
/// entries 1). Keeps the direction; sign is preserved as given.
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let mut denom_lcm = BigInt::one();
    for x in v {
        denom_lcm = denom_lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&denom_lcm / x.denom())).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return ints;
    }
    ints.iter().map(|x| x / &g).collect()
}

/// Determinant of a square integer matrix by fraction-free (Bareiss)
/// elimination.
pub fn int_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    debug_assert!(m.iter().all(|r| r.len() == n));
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = 1i64;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Determinant of a square i128 matrix by Bareiss elimination, or None if
/// an intermediate value overflows (callers then retry with big integers).
pub fn int_det_i128(m: &[Vec<i128>]) -> Option<i128> {
    let n = m.len();
    if n == 0 {
        return Some(1);
    }
    let mut a: Vec<Vec<i128>> = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(swap) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                return Some(0);
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j]
                    .checked_mul(a[k][k])?
                    .checked_sub(a[i][k].checked_mul(a[k][j])?)?;
                a[i][j] = num / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    Some(sign * a[n - 1][n - 1])
}

/// Distinct prime factors of |n| by trial division (n = 0 and ±1 give none).
pub fn prime_factors(n: &BigInt) -> Vec<u64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() || n.is_one() {
        return out;
    }
    let mut p = BigInt::from(2u64);
    while &p * &p <= n {
        if (&n % &p).is_zero() {
            out.push(u64::try_from(&p).expect("trial divisor fits u64"));
            while (&n % &p).is_zero() {
                n /= &p;
            }
        }
        p += 1;
    }
    if !n.is_one() {
        // Remaining cofactor is prime; it may exceed u64 only for inputs far
        // beyond anything this crate constructs.
        out.push(u64::try_from(&n).expect("prime cofactor fits u64"));
    }
    out.sort_unstable();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn rref_identifies_pivots_and_rank() {
        let m = QMat::from_int_rows(
            &[vec![1i64, 2, 3], vec![2, 4, 6], vec![0, 1, 1]],
            3,
        );
        let (r, pivots) = m.rref();
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(m.rank(), 2);
        // Row space basis in reduced form: (1,0,1), (0,1,1).
        assert_eq!(r.row(0), &[q(1), q(0), q(1)]);
        assert_eq!(r.row(1), &[q(0), q(1), q(1)]);
    }

    #[test]
    fn kernel_vectors_annihilate_the_rows() {
        let m = QMat::from_int_rows(&[vec![1i64, 2, 3, 0], vec![0, 1, 1, 2]], 4);
        let kernel = m.kernel_basis();
        assert_eq!(kernel.len(), 2);
        for v in &kernel {
            for i in 0..m.row_count() {
                let dot: BigRational = m
                    .row(i)
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum();
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn full_rank_matrix_has_trivial_kernel() {
        let m = QMat::from_int_rows(&[vec![1i64, 0], vec![0, 1]], 2);
        assert!(m.kernel_basis().is_empty());
    }

    #[test]
    fn primitive_vector_clears_denominators_and_gcd() {
        let v = vec![
            BigRational::new(BigInt::from(1), BigInt::from(2)),
            BigRational::new(BigInt::from(1), BigInt::from(3)),
        ];
        assert_eq!(
            primitive_integer_vector(&v),
            vec![BigInt::from(3), BigInt::from(2)]
        );
        let w = vec![q(2), q(-4), q(6)];
        assert_eq!(
            primitive_integer_vector(&w),
            vec![BigInt::from(1), BigInt::from(-2), BigInt::from(3)]
        );
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let m: Vec<Vec<BigInt>> = vec![
            vec![2.into(), 0.into(), 1.into()],
            vec![1.into(), 3.into(), (-1).into()],
            vec![0.into(), 5.into(), 4.into()],
        ];
        // 2*(12+5) - 0 + 1*(5-0) = 39
        assert_eq!(int_det(&m), BigInt::from(39));
        let singular: Vec<Vec<BigInt>> = vec![
            vec![1.into(), 2.into()],
            vec![2.into(), 4.into()],
        ];
        assert_eq!(int_det(&singular), BigInt::zero());
    }

    #[test]
    fn determinant_handles_zero_leading_pivot() {
        let m: Vec<Vec<BigInt>> = vec![
            vec![0.into(), 1.into()],
            vec![1.into(), 0.into()],
        ];
        assert_eq!(int_det(&m), BigInt::from(-1));
    }

    #[test]
    fn prime_factor_extraction() {
        assert_eq!(prime_factors(&BigInt::from(-360)), vec![2, 3, 5]);
        assert!(prime_factors(&BigInt::from(1)).is_empty());
        assert!(prime_factors(&BigInt::from(0)).is_empty());
        assert_eq!(prime_factors(&BigInt::from(97)), vec![97]);
    }

    #[test]
    fn solve_returns_exact_solution_or_none() {
        // 2x + y = 5, x - y = 1  =>  x = 2, y = 1.
        let m = QMat::from_int_rows(&[vec![2i64, 1], vec![1, -1]], 2);
        let sol = m.solve(&[q(5), q(1)]).expect("unique solution");
        assert_eq!(sol, vec![q(2), q(1)]);
        // Singular system: no unique solution.
        let s = QMat::from_int_rows(&[vec![1i64, 2], vec![2, 4]], 2);
        assert!(s.solve(&[q(1), q(2)]).is_none());
    }

    #[test]
    fn i128_determinant_matches_bigint_and_signals_overflow() {
        let small = vec![vec![2i128, 0, 1], vec![1, 3, -1], vec![0, 5, 4]];
        assert_eq!(int_det_i128(&small), Some(39));
        let swap = vec![vec![0i128, 1], vec![1, 0]];
        assert_eq!(int_det_i128(&swap), Some(-1));
        // Entries near the i128 boundary force the checked arithmetic to bail.
        let huge = i128::MAX / 2;
        let big = vec![vec![huge, 1], vec![1, huge]];
        assert_eq!(int_det_i128(&big), None);
    }
}
