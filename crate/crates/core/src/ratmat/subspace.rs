use num_traits::One;

use super::{Matrix, Scalar};
use crate::error::{Error, Result};

/// Subspace of `Q^ambient`, stored as a matrix whose columns are an
/// independent basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    basis: Matrix,
}

impl Subspace {
    /// Caller guarantees the columns are independent.
    pub(crate) fn from_independent_columns(basis: Matrix) -> Self {
        Self { basis }
    }

    /// Column space of `generators`.
    pub fn span(generators: &Matrix) -> Self {
        let pivots = generators.echelon().pivots;
        Self {
            basis: generators.select_columns(&pivots),
        }
    }

    pub fn zero(ambient: usize) -> Self {
        Self {
            basis: Matrix::zeros(ambient, 0),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self {
            basis: Matrix::identity(ambient),
        }
    }

    /// Span of the first `k` standard basis vectors.
    pub fn coordinate(ambient: usize, k: usize) -> Self {
        Self {
            basis: Matrix::identity(ambient).block(0, 0, ambient, k),
        }
    }

    pub fn ambient(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn contains(&self, v: &Matrix) -> bool {
        assert_eq!(v.rows(), self.ambient(), "vector lives in a different space");
        Matrix::hstack(self.ambient(), &[&self.basis, v]).rank() == self.dim()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        self.contains(&other.basis)
    }

    /// Equality of subspaces by mutual containment.
    pub fn same_as(&self, other: &Subspace) -> bool {
        self.ambient() == other.ambient()
            && self.dim() == other.dim()
            && self.contains_subspace(other)
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::span(&Matrix::hstack(self.ambient(), &[&self.basis, &other.basis]))
    }

    /// Rows span the linear forms vanishing on the subspace.
    pub fn annihilator(&self) -> Matrix {
        self.basis.transpose().kernel_basis().basis().transpose()
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        let n = self.ambient();
        let (a, b) = (self.annihilator(), other.annihilator());
        Matrix::vstack(n, &[&a, &b]).kernel_basis()
    }

    /// Image under `m`.
    pub fn image(&self, m: &Matrix) -> Subspace {
        Subspace::span(&(m * &self.basis))
    }

    /// `{v : m·v ∈ self}`.
    pub fn preimage(&self, m: &Matrix) -> Subspace {
        (&self.annihilator() * m).kernel_basis()
    }

    pub fn is_invariant_under(&self, m: &Matrix) -> bool {
        self.contains(&(m * &self.basis))
    }

    /// Invertible `n x n` matrix whose first `dim` columns are this basis,
    /// completed greedily by the standard vectors `e_1, e_2, …` that
    /// increase the rank.
    pub fn adapted_basis(&self) -> Matrix {
        let n = self.ambient();
        let mut cols = self.basis.clone();
        let mut rank = self.dim();
        for k in 0..n {
            if rank == n {
                break;
            }
            let mut e = Matrix::zeros(n, 1);
            e[(k, 0)] = Scalar::one();
            let candidate = Matrix::hstack(n, &[&cols, &e]);
            if candidate.rank() > rank {
                cols = candidate;
                rank += 1;
            }
        }
        cols
    }

    /// The matrix of `m` restricted to this subspace in its basis, i.e. the
    /// unique `R` with `m·basis = basis·R`.
    pub fn restrict(&self, m: &Matrix) -> Result<Matrix> {
        let image = m * &self.basis;
        let gram = &self.basis.transpose() * &self.basis;
        let coords = &gram.inverse()? * &(&self.basis.transpose() * &image);
        if &self.basis * &coords != image {
            return Err(Error::Dimension("subspace is not invariant".into()));
        }
        Ok(coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn span_drops_dependent_columns() {
        let g = Matrix::from_i64(&[&[1, 2, 0], &[0, 0, 1], &[1, 2, 0]]);
        let s = Subspace::span(&g);
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&Matrix::from_i64(&[&[3], &[5], &[3]])));
        assert!(!s.contains(&Matrix::from_i64(&[&[1], &[0], &[0]])));
    }

    #[test]
    fn intersection_and_preimage() {
        let xy = Subspace::coordinate(3, 2);
        let yz = Subspace::span(&Matrix::from_i64(&[&[0, 0], &[1, 0], &[0, 1]]));
        let y = xy.intersection(&yz);
        assert_eq!(y.dim(), 1);
        assert!(y.contains(&Matrix::from_i64(&[&[0], &[1], &[0]])));
        assert_eq!(xy.sum(&yz).dim(), 3);

        // shift e1 -> e2 -> e3 -> 0
        let shift = Matrix::from_i64(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]);
        let pre = xy.preimage(&shift);
        assert!(pre.same_as(&Subspace::span(&Matrix::from_i64(&[&[1, 0], &[0, 0], &[0, 1]]))));
    }

    #[test]
    fn adapted_basis_and_restriction() {
        let s = Subspace::span(&Matrix::from_i64(&[&[1], &[1], &[0]]));
        let g = s.adapted_basis();
        assert_eq!(g.rank(), 3);
        assert_eq!(g.column(0), s.basis().column(0));

        let m = Matrix::from_i64(&[&[2, 0, 5], &[0, 2, 1], &[0, 0, 3]]);
        assert!(s.is_invariant_under(&m));
        assert_eq!(s.restrict(&m).unwrap(), Matrix::from_i64(&[&[2]]));
        let t = Subspace::coordinate(3, 1);
        assert!(t.restrict(&Matrix::from_i64(&[&[0, 0, 0], &[1, 0, 0], &[0, 0, 0]])).is_err());
    }

    #[test]
    fn empty_ambient() {
        let z = Subspace::zero(0);
        assert_eq!(z.dim(), 0);
        assert!(z.same_as(&Subspace::full(0)));
        assert_eq!(z.adapted_basis().shape(), (0, 0));
    }
}
