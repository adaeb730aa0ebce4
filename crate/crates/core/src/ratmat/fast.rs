//! Machine-integer fast paths. Each returns `None` as soon as a value
//! leaves `i128`, and the caller falls back to arbitrary precision.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::matrix::{Echelon, Matrix};
use super::Scalar;

fn to_i128(x: &Scalar) -> Option<(i128, i128)> {
    Some((x.numer().to_i128()?, x.denom().to_i128()?))
}

fn lcm(a: i128, b: i128) -> Option<i128> {
    (a / a.gcd(&b)).checked_mul(b)
}

fn to_scalar(num: i128, den: i128) -> Scalar {
    if den == 1 {
        Scalar::from_integer(BigInt::from(num))
    } else {
        Scalar::new(BigInt::from(num), BigInt::from(den))
    }
}

/// `m = ints / den` with `ints` integral, or `None` on overflow.
fn integral(m: &Matrix) -> Option<(Vec<i128>, i128)> {
    let mut den = 1i128;
    let mut pairs = Vec::with_capacity(m.data.len());
    for x in &m.data {
        let (n, d) = to_i128(x)?;
        den = lcm(den, d)?;
        pairs.push((n, d));
    }
    let ints = pairs
        .into_iter()
        .map(|(n, d)| n.checked_mul(den / d))
        .collect::<Option<Vec<_>>>()?;
    Some((ints, den))
}

pub(super) fn mul_small(a: &Matrix, b: &Matrix) -> Option<Matrix> {
    let (x, dx) = integral(a)?;
    let (y, dy) = integral(b)?;
    let den = dx.checked_mul(dy)?;
    let (n, k, m) = (a.rows, a.cols, b.cols);
    let mut data = Vec::with_capacity(n * m);
    for i in 0..n {
        for j in 0..m {
            let mut acc = 0i128;
            for t in 0..k {
                let (u, v) = (x[i * k + t], y[t * m + j]);
                if u != 0 && v != 0 {
                    acc = acc.checked_add(u.checked_mul(v)?)?;
                }
            }
            data.push(to_scalar(acc, den));
        }
    }
    Some(Matrix { rows: n, cols: m, data })
}

/// Fraction-free Gauss-Jordan elimination. After the pivot in column
/// `col` is processed every row is replaced by
/// `(pivot·row − row[col]·pivot_row) / previous_pivot`, which is exact, and
/// every pivot entry ends up equal to the last pivot.
pub(super) fn echelon_fraction_free(m: &Matrix) -> Option<Echelon> {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        let row = &m.data[i * cols..(i + 1) * cols];
        let (ints, _) = integral(&Matrix { rows: 1, cols, data: row.to_vec() })?;
        a.extend(ints);
    }
    let mut prev = 1i128;
    let mut pivots = Vec::new();
    let mut prow = 0;
    for col in 0..cols {
        if prow == rows {
            break;
        }
        let best = (prow..rows)
            .filter(|&i| a[i * cols + col] != 0)
            .min_by_key(|&i| a[i * cols + col].unsigned_abs());
        let Some(best) = best else { continue };
        if best != prow {
            for j in 0..cols {
                a.swap(best * cols + j, prow * cols + j);
            }
        }
        let pivot = a[prow * cols + col];
        for i in 0..rows {
            if i == prow {
                continue;
            }
            let factor = a[i * cols + col];
            for j in 0..cols {
                let lhs = pivot.checked_mul(a[i * cols + j])?;
                let rhs = factor.checked_mul(a[prow * cols + j])?;
                let num = lhs.checked_sub(rhs)?;
                if num % prev != 0 {
                    return None;
                }
                a[i * cols + j] = num / prev;
            }
        }
        prev = pivot;
        pivots.push(col);
        prow += 1;
    }
    let mut data = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        for j in 0..cols {
            let v = a[i * cols + j];
            data.push(if v == 0 { Scalar::zero() } else { to_scalar(v, prev) });
        }
    }
    Some(Echelon {
        reduced: Matrix { rows, cols, data },
        pivots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratmat::{int, random_matrix, ratio};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn low_rank(seed: u64, rows: usize, cols: usize, rank: usize, den: i64) -> Matrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let left = random_matrix(rows, rank, 4, &mut rng).scale(&ratio(1, den));
        let right = random_matrix(rank, cols, 4, &mut rng);
        let mut out = Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                for t in 0..rank {
                    out[(i, j)] += &left[(i, t)] * &right[(t, j)];
                }
            }
        }
        out
    }

    #[test]
    fn overflow_falls_back() {
        let big = int(i64::MAX);
        let m = Matrix::from_fn(3, 3, |i, j| if i == j { &big * &big } else { big.clone() });
        assert!(echelon_fraction_free(&m).is_none());
        assert_eq!(m.echelon().pivots.len(), 3);
        assert!(mul_small(&m, &m).is_none());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn agrees_with_rational_elimination(seed in any::<u64>(), rows in 0usize..7, cols in 0usize..8, rank in 0usize..6, den in 1i64..6) {
            let m = low_rank(seed, rows, cols, rank, den);
            let fast = echelon_fraction_free(&m).expect("small entries");
            let slow = m.echelon_rational();
            prop_assert_eq!(fast.pivots, slow.pivots);
            prop_assert_eq!(fast.reduced, slow.reduced);
        }

        #[test]
        fn product_agrees(seed in any::<u64>(), n in 0usize..5, k in 0usize..5, m in 0usize..5, den in 1i64..6) {
            let a = low_rank(seed, n, k, 3, den);
            let b = low_rank(seed ^ 1, k, m, 3, 1).scale(&ratio(1, den + 1));
            let fast = mul_small(&a, &b).expect("small entries");
            let mut slow = Matrix::zeros(n, m);
            for i in 0..n {
                for j in 0..m {
                    for t in 0..k {
                        slow[(i, j)] += &a[(i, t)] * &b[(t, j)];
                    }
                }
            }
            prop_assert_eq!(fast, slow);
        }
    }
}
