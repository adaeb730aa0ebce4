use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_traits::{One, Zero};
use rand::Rng;

use super::{abs_cmp, fast, format_scalar, int, Scalar, Subspace};
use crate::error::{Error, Result};

/// Dense row-major matrix over the rationals. Either dimension may be zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    pub(super) rows: usize,
    pub(super) cols: usize,
    pub(super) data: Vec<Scalar>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Scalar::one() } else { Scalar::zero() })
    }

    pub fn scalar_multiple_of_identity(n: usize, x: &Scalar) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { x.clone() } else { Scalar::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from integer rows. Panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |i, j| int(rows[i][j]))
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>, cols: usize) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Self { rows: n, cols, data })
    }

    /// Column vector from entries.
    pub fn column_vector(entries: Vec<Scalar>) -> Self {
        Self {
            rows: entries.len(),
            cols: 1,
            data: entries,
        }
    }

    pub fn diagonal(entries: &[Scalar]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { Scalar::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Matrix {
        Matrix::from_fn(self.rows, 1, |i, _| self[(i, j)].clone())
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, k: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Matrix) -> Matrix {
        &(self * other) - &(other * self)
    }

    pub fn pow(&self, k: usize) -> Matrix {
        assert!(self.is_square(), "pow of a non-square matrix");
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Copy of the `nrows x ncols` block starting at `(row, col)`.
    pub fn block(&self, row: usize, col: usize, nrows: usize, ncols: usize) -> Matrix {
        assert!(row + nrows <= self.rows && col + ncols <= self.cols, "block out of range");
        Matrix::from_fn(nrows, ncols, |i, j| self[(row + i, col + j)].clone())
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.rows, cols.len(), |i, j| self[(i, cols[j])].clone())
    }

    /// Horizontal concatenation. All parts must have `rows` rows.
    pub fn hstack(rows: usize, parts: &[&Matrix]) -> Matrix {
        assert!(parts.iter().all(|p| p.rows == rows), "hstack row mismatch");
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let mut offset = 0;
        for p in parts {
            for i in 0..rows {
                for j in 0..p.cols {
                    out[(i, offset + j)] = p[(i, j)].clone();
                }
            }
            offset += p.cols;
        }
        out
    }

    /// Vertical concatenation. All parts must have `cols` columns.
    pub fn vstack(cols: usize, parts: &[&Matrix]) -> Matrix {
        assert!(parts.iter().all(|p| p.cols == cols), "vstack column mismatch");
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for p in parts {
            data.extend(p.data.iter().cloned());
        }
        Matrix { rows, cols, data }
    }

    /// `[[tl, tr], [bl, br]]`, blocks sized consistently.
    pub fn from_blocks(tl: &Matrix, tr: &Matrix, bl: &Matrix, br: &Matrix) -> Matrix {
        let top = Matrix::hstack(tl.rows, &[tl, tr]);
        let bottom = Matrix::hstack(bl.rows, &[bl, br]);
        Matrix::vstack(top.cols, &[&top, &bottom])
    }

    /// Reduced row echelon form.
    pub fn echelon(&self) -> Echelon {
        fast::echelon_fraction_free(self).unwrap_or_else(|| self.echelon_rational())
    }

    /// Gauss-Jordan over the rationals, pivoting on the largest absolute
    /// value in the current column.
    pub(super) fn echelon_rational(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut prow = 0;
        for col in 0..m.cols {
            if prow == m.rows {
                break;
            }
            let best = (prow..m.rows)
                .filter(|&i| !m[(i, col)].is_zero())
                .max_by(|&a, &b| abs_cmp(&m[(a, col)], &m[(b, col)]));
            let Some(best) = best else { continue };
            m.swap_rows(prow, best);
            let inv = m[(prow, col)].recip();
            for j in col..m.cols {
                let v = &m[(prow, j)] * &inv;
                m[(prow, j)] = v;
            }
            for i in 0..m.rows {
                if i == prow || m[(i, col)].is_zero() {
                    continue;
                }
                let factor = m[(i, col)].clone();
                for j in col..m.cols {
                    if m[(prow, j)].is_zero() {
                        continue;
                    }
                    let delta = &factor * &m[(prow, j)];
                    m[(i, j)] -= delta;
                }
            }
            pivots.push(col);
            prow += 1;
        }
        Echelon { reduced: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of `{v : self·v = 0}`, one column per free variable.
    pub fn kernel_basis(&self) -> Subspace {
        let Echelon { reduced, pivots } = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|j| !pivots.contains(j)).collect();
        let mut basis = Matrix::zeros(self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            basis[(f, k)] = Scalar::one();
            for (row, &p) in pivots.iter().enumerate() {
                basis[(p, k)] = -reduced[(row, f)].clone();
            }
        }
        Subspace::from_independent_columns(basis)
    }

    /// Some `x` with `self·x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &Matrix) -> Result<Option<Matrix>> {
        if b.cols != 1 || b.rows != self.rows {
            return Err(Error::Dimension(format!(
                "right-hand side is {}x{}, expected {}x1",
                b.rows, b.cols, self.rows
            )));
        }
        let augmented = Matrix::hstack(self.rows, &[self, b]);
        let Echelon { reduced, pivots } = augmented.echelon();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = Matrix::zeros(self.cols, 1);
        for (row, &p) in pivots.iter().enumerate() {
            x[(p, 0)] = reduced[(row, self.cols)].clone();
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "cannot invert a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let augmented = Matrix::hstack(n, &[self, &Matrix::identity(n)]);
        let Echelon { reduced, pivots } = augmented.echelon();
        if pivots.iter().filter(|&&p| p < n).count() != n {
            return Err(Error::Singular);
        }
        Ok(reduced.block(0, n, n, n))
    }

    pub fn determinant(&self) -> Scalar {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Scalar::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&i| !m[(i, col)].is_zero()) else {
                return Scalar::zero();
            };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let pivot = m[(col, col)].clone();
            det *= &pivot;
            for i in col + 1..n {
                if m[(i, col)].is_zero() {
                    continue;
                }
                let factor = &m[(i, col)] / &pivot;
                for j in col..n {
                    let delta = &factor * &m[(col, j)];
                    m[(i, j)] -= delta;
                }
            }
        }
        det
    }

    /// Reinterprets a column vector of length `rows·cols` as a row-major matrix.
    pub fn unflatten(v: &[Scalar], rows: usize, cols: usize) -> Matrix {
        assert_eq!(v.len(), rows * cols, "unflatten length mismatch");
        Matrix {
            rows,
            cols,
            data: v.to_vec(),
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;

    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(
            self.cols, rhs.rows,
            "cannot multiply {}x{} by {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        if let Some(out) = fast::mul_small(self, rhs) {
            return out;
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl Add for &Matrix {
    type Output = Matrix;

    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in addition");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in subtraction");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;

    fn neg(self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{}x{}", self.rows, self.cols)?;
        f.debug_list()
            .entries((0..self.rows).map(|i| {
                self.row(i).iter().map(format_scalar).collect::<Vec<_>>()
            }))
            .finish()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", format_scalar(x))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Matrix with integer entries drawn uniformly from `[-bound, bound]`.
pub fn random_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, bound: i64, rng: &mut R) -> Matrix {
    assert!(bound >= 1, "bound must be at least 1");
    Matrix::from_fn(rows, cols, |_, _| int(rng.gen_range(-bound..=bound)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratmat::ratio;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::identity(3).rank(), 3);
        assert_eq!(Matrix::from_i64(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(Matrix::zeros(0, 3).rank(), 0);
        assert_eq!(Matrix::zeros(3, 0).rank(), 0);
    }

    #[test]
    fn kernel_examples() {
        let m = Matrix::from_i64(&[&[1, 2], &[2, 4]]);
        let k = m.kernel_basis();
        assert_eq!(k.dim(), 1);
        let v = k.basis().column(0);
        assert!((&m * &v).is_zero());
        assert!(k.contains(&Matrix::from_i64(&[&[-2], &[1]])));

        assert_eq!(Matrix::identity(3).kernel_basis().dim(), 0);
        assert_eq!(Matrix::zeros(2, 3).kernel_basis().dim(), 3);
        assert_eq!(Matrix::zeros(0, 4).kernel_basis().dim(), 4);
    }

    #[test]
    fn solve_examples() {
        let b = Matrix::from_i64(&[&[3], &[-1], &[7]]);
        assert_eq!(Matrix::identity(3).solve(&b).unwrap(), Some(b.clone()));

        let m = Matrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(m.solve(&Matrix::from_i64(&[&[1], &[3]])).unwrap(), None);
        let rhs = Matrix::from_i64(&[&[1], &[2]]);
        let x = m.solve(&rhs).unwrap().expect("consistent");
        assert_eq!(&m * &x, rhs);

        assert!(matches!(m.solve(&b), Err(Error::Dimension(_))));
    }

    #[test]
    fn inverse_and_determinant() {
        let m = Matrix::from_i64(&[&[2, 1], &[7, 4]]);
        assert_eq!(m.determinant(), int(1));
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Matrix::identity(2));
        assert_eq!(Matrix::from_i64(&[&[1, 2], &[2, 4]]).inverse(), Err(Error::Singular));
        let h = Matrix::from_fn(3, 3, |i, j| ratio(1, (i + j + 1) as i64));
        assert_eq!(h.determinant(), ratio(1, 2160));
        assert_eq!(&h * &h.inverse().unwrap(), Matrix::identity(3));
        assert_eq!(Matrix::identity(0).inverse().unwrap(), Matrix::identity(0));
    }

    #[test]
    fn random_matrix_contract() {
        let a = random_matrix(2, 2, 5, &mut ChaCha8Rng::seed_from_u64(42));
        let b = random_matrix(2, 2, 5, &mut ChaCha8Rng::seed_from_u64(42));
        assert_eq!(a, b);
        let m = random_matrix(3, 3, 1, &mut ChaCha8Rng::seed_from_u64(7));
        assert!(m.entries().iter().all(|x| *x >= int(-1) && *x <= int(1)));
        let e = random_matrix(0, 3, 5, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(e.shape(), (0, 3));
    }

    #[test]
    fn random_4x6_rank_matches_transpose() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let m = random_matrix(4, 6, 2, &mut rng);
            assert_eq!(m.rank(), m.transpose().rank());
        }
    }

    fn small_matrix(max: usize) -> impl Strategy<Value = Matrix> {
        (0..=max, 0..=max).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-3i64..=3, r * c)
                .prop_map(move |v| Matrix::new(r, c, v.into_iter().map(int).collect()).unwrap())
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in small_matrix(5)) {
            let k = m.kernel_basis();
            prop_assert_eq!(m.rank() + k.dim(), m.cols());
            prop_assert!((&m * k.basis()).is_zero());
            prop_assert_eq!(m.rank(), m.transpose().rank());
            prop_assert_eq!(m.transpose().transpose(), m);
        }

        #[test]
        fn solve_is_exact(m in small_matrix(4), seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            // consistent right-hand side by construction
            let x0 = random_matrix(m.cols(), 1, 4, &mut rng);
            let b = &m * &x0;
            let x = m.solve(&b).unwrap().expect("consistent system");
            prop_assert_eq!(&m * &x, b);
        }
    }
}
