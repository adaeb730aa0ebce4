//! ADHM data `X = (A, B, I, J)` with `A, B ∈ End(V)`, `I: W → V`,
//! `J: V → W`, `dim V = c`, `dim W = r`, and the linear-algebra
//! constructions attached to them: the moment map `[A,B] + IJ`, the
//! `GL(V)` action, the duality `X ↦ X⋆`, the stabilizing and costabilizing
//! subspaces, the adapted block form and the representation-level pieces
//! (stable restriction, quotient pair, type vector, morphisms).

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratmat::{random_matrix, Matrix, Subspace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdhmDatum {
    c: usize,
    r: usize,
    a: Matrix,
    b: Matrix,
    i: Matrix,
    j: Matrix,
}

fn check_shape(field: &str, m: &Matrix, rows: usize, cols: usize) -> Result<()> {
    if m.shape() != (rows, cols) {
        return Err(Error::Shape {
            field: field.to_string(),
            expected_rows: rows,
            expected_cols: cols,
            found: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    Ok(())
}

impl AdhmDatum {
    /// Validates `A, B: c×c`, `I: c×r`, `J: r×c`.
    pub fn new(c: usize, r: usize, a: Matrix, b: Matrix, i: Matrix, j: Matrix) -> Result<Self> {
        check_shape("A", &a, c, c)?;
        check_shape("B", &b, c, c)?;
        check_shape("I", &i, c, r)?;
        check_shape("J", &j, r, c)?;
        Ok(Self { c, r, a, b, i, j })
    }

    pub fn zero(c: usize, r: usize) -> Self {
        Self {
            c,
            r,
            a: Matrix::zeros(c, c),
            b: Matrix::zeros(c, c),
            i: Matrix::zeros(c, r),
            j: Matrix::zeros(r, c),
        }
    }

    /// Integer entries uniform in `[-bound, bound]`; not a solution in general.
    pub fn random<R: Rng + ?Sized>(c: usize, r: usize, bound: i64, rng: &mut R) -> Self {
        Self {
            c,
            r,
            a: random_matrix(c, c, bound, rng),
            b: random_matrix(c, c, bound, rng),
            i: random_matrix(c, r, bound, rng),
            j: random_matrix(r, c, bound, rng),
        }
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &Matrix {
        &self.b
    }

    pub fn i(&self) -> &Matrix {
        &self.i
    }

    pub fn j(&self) -> &Matrix {
        &self.j
    }

    /// `[A,B] + IJ`.
    pub fn mu(&self) -> Matrix {
        &self.a.commutator(&self.b) + &(&self.i * &self.j)
    }

    pub fn is_solution(&self) -> bool {
        self.mu().is_zero()
    }

    pub(crate) fn require_solution(&self) -> Result<()> {
        if self.is_solution() {
            Ok(())
        } else {
            Err(Error::NotSolution)
        }
    }

    /// `g·X = (gAg⁻¹, gBg⁻¹, gI, Jg⁻¹)`.
    pub fn act(&self, g: &Matrix) -> Result<AdhmDatum> {
        check_shape("g", g, self.c, self.c)?;
        let g_inv = g.inverse()?;
        Ok(self.conjugate_with(g, &g_inv))
    }

    pub(crate) fn conjugate_with(&self, g: &Matrix, g_inv: &Matrix) -> AdhmDatum {
        AdhmDatum {
            c: self.c,
            r: self.r,
            a: &(g * &self.a) * g_inv,
            b: &(g * &self.b) * g_inv,
            i: g * &self.i,
            j: &self.j * g_inv,
        }
    }

    /// `X⋆ = (Bᵀ, −Aᵀ, Jᵀ, −Iᵀ)`; the adjoint is the transpose over the rationals.
    pub fn star(&self) -> AdhmDatum {
        AdhmDatum {
            c: self.c,
            r: self.r,
            a: self.b.transpose(),
            b: -&self.a.transpose(),
            i: self.j.transpose(),
            j: -&self.i.transpose(),
        }
    }

    pub fn negated(&self) -> AdhmDatum {
        AdhmDatum {
            c: self.c,
            r: self.r,
            a: -&self.a,
            b: -&self.b,
            i: -&self.i,
            j: -&self.j,
        }
    }

    /// `R(X)`: the `c × r·c²` matrix with block columns `AᵏBˡI`,
    /// `0 ≤ k, l < c`, ordered k-major.
    pub fn r_map(&self) -> Matrix {
        let c = self.c;
        let mut blocks = Vec::with_capacity(c * c);
        let mut a_pow = Matrix::identity(c);
        for _ in 0..c {
            let mut b_pow_i = self.i.clone();
            for _ in 0..c {
                blocks.push(&a_pow * &b_pow_i);
                b_pow_i = &self.b * &b_pow_i;
            }
            a_pow = &a_pow * &self.a;
        }
        let refs: Vec<&Matrix> = blocks.iter().collect();
        Matrix::hstack(c, &refs)
    }

    /// Dimensions of the closure chain `S₀ = im I`, `S_{k+1} = S_k + A·S_k + B·S_k`,
    /// ending at the first repeated dimension.
    pub fn stabilizing_chain(&self) -> Vec<usize> {
        self.stabilizing_closure().1
    }

    fn stabilizing_closure(&self) -> (Subspace, Vec<usize>) {
        let mut s = Subspace::span(&self.i);
        let mut dims = vec![s.dim()];
        loop {
            let next = s.sum(&s.image(&self.a)).sum(&s.image(&self.b));
            if next.dim() == s.dim() {
                return (s, dims);
            }
            dims.push(next.dim());
            s = next;
        }
    }

    /// `Σ_X`: the smallest A- and B-invariant subspace containing `im I`.
    pub fn stabilizing_subspace(&self) -> Subspace {
        self.stabilizing_closure().0
    }

    /// Dimensions of the chain `T₀ = ker J`, `T_{k+1} = T_k ∩ A⁻¹T_k ∩ B⁻¹T_k`.
    pub fn costabilizing_chain(&self) -> Vec<usize> {
        self.costabilizing_closure().1
    }

    fn costabilizing_closure(&self) -> (Subspace, Vec<usize>) {
        let mut t = self.j.kernel_basis();
        let mut dims = vec![t.dim()];
        loop {
            let ann = t.annihilator();
            let next = Matrix::vstack(self.c, &[&ann, &(&ann * &self.a), &(&ann * &self.b)])
                .kernel_basis();
            if next.dim() == t.dim() {
                return (t, dims);
            }
            dims.push(next.dim());
            t = next;
        }
    }

    /// `Υ_X`: the largest A- and B-invariant subspace contained in `ker J`.
    pub fn costabilizing_subspace(&self) -> Subspace {
        self.costabilizing_closure().0
    }

    pub fn is_stable(&self) -> bool {
        self.stabilizing_subspace().dim() == self.c
    }

    pub fn is_costable(&self) -> bool {
        self.costabilizing_subspace().dim() == 0
    }

    pub fn is_regular(&self) -> bool {
        self.is_stable() && self.is_costable()
    }

    /// Moves `Σ_X` onto the first `s` coordinates.
    pub fn block_form(&self) -> BlockForm {
        let sigma = self.stabilizing_subspace();
        let s = sigma.dim();
        let basis = sigma.adapted_basis();
        let basis_inv = basis.inverse().expect("adapted basis is invertible");
        let adapted = self.conjugate_with(&basis_inv, &basis);
        let (c, r, l) = (self.c, self.r, self.c - s);
        debug_assert!(adapted.a.block(s, 0, l, s).is_zero());
        debug_assert!(adapted.b.block(s, 0, l, s).is_zero());
        debug_assert!(adapted.i.block(s, 0, l, r).is_zero());
        BlockForm {
            s,
            a1: adapted.a.block(0, 0, s, s),
            a2: adapted.a.block(0, s, s, l),
            a3: adapted.a.block(s, s, l, l),
            b1: adapted.b.block(0, 0, s, s),
            b2: adapted.b.block(0, s, s, l),
            b3: adapted.b.block(s, s, l, l),
            i1: adapted.i.block(0, 0, s, r),
            j1: adapted.j.block(0, 0, r, s),
            j2: adapted.j.block(0, s, r, c - s),
            r,
            basis,
            basis_inv,
            adapted,
        }
    }

    /// `X|_{Σ_X}` in the adapted basis.
    pub fn stable_restriction(&self) -> AdhmDatum {
        self.block_form().stable_restriction()
    }

    /// The commuting pair `(A₃, B₃)` induced on `V/Σ_X`.
    pub fn quotient_representation(&self) -> Result<CommutingPair> {
        self.require_solution()?;
        let bf = self.block_form();
        CommutingPair::new(bf.a3, bf.b3)
    }

    pub fn type_vector(&self) -> TypeVector {
        let s = self.stabilizing_subspace().dim();
        TypeVector {
            r: self.r,
            s,
            l: self.c - s,
        }
    }
}

/// A pair of commuting square matrices of the same size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutingPair {
    p: Matrix,
    q: Matrix,
}

impl CommutingPair {
    pub fn new(p: Matrix, q: Matrix) -> Result<Self> {
        let n = p.rows();
        check_shape("P", &p, n, n)?;
        check_shape("Q", &q, n, n)?;
        if !p.commutator(&q).is_zero() {
            return Err(Error::NotSolution);
        }
        Ok(Self { p, q })
    }

    pub fn empty() -> Self {
        Self {
            p: Matrix::zeros(0, 0),
            q: Matrix::zeros(0, 0),
        }
    }

    pub fn n(&self) -> usize {
        self.p.rows()
    }

    pub fn p(&self) -> &Matrix {
        &self.p
    }

    pub fn q(&self) -> &Matrix {
        &self.q
    }

    /// The representation `(N, 0, (P, Q, 0, 0))` with trivial framing space.
    pub fn to_datum(&self) -> AdhmDatum {
        let n = self.n();
        AdhmDatum {
            c: n,
            r: 0,
            a: self.p.clone(),
            b: self.q.clone(),
            i: Matrix::zeros(n, 0),
            j: Matrix::zeros(0, n),
        }
    }

    pub fn conjugate(&self, g: &Matrix) -> Result<CommutingPair> {
        let g_inv = g.inverse()?;
        Ok(Self {
            p: &(g * &self.p) * &g_inv,
            q: &(g * &self.q) * &g_inv,
        })
    }
}

/// `X` rewritten in a basis whose first `s` vectors span `Σ_X`:
///
/// ```text
/// A = [A1 A2]   B = [B1 B2]   I = [I1]   J = [J1 J2]
///     [0  A3]       [0  B3]       [0 ]
/// ```
#[derive(Clone, Debug)]
pub struct BlockForm {
    pub s: usize,
    pub r: usize,
    /// Columns are the adapted basis; the block datum is `basis⁻¹ · X`.
    pub basis: Matrix,
    pub basis_inv: Matrix,
    pub adapted: AdhmDatum,
    pub a1: Matrix,
    pub a2: Matrix,
    pub a3: Matrix,
    pub b1: Matrix,
    pub b2: Matrix,
    pub b3: Matrix,
    pub i1: Matrix,
    pub j1: Matrix,
    pub j2: Matrix,
}

impl BlockForm {
    pub fn l(&self) -> usize {
        self.a3.rows()
    }

    pub fn stable_restriction(&self) -> AdhmDatum {
        AdhmDatum {
            c: self.s,
            r: self.r,
            a: self.a1.clone(),
            b: self.b1.clone(),
            i: self.i1.clone(),
            j: self.j1.clone(),
        }
    }

    /// Left-hand sides of the three block equations; all vanish exactly
    /// when the datum is a solution.
    pub fn block_equations(&self) -> [Matrix; 3] {
        let top_left = &self.a1.commutator(&self.b1) + &(&self.i1 * &self.j1);
        let top_right = &(&(&(&self.a1 * &self.b2) - &(&self.b1 * &self.a2))
            + &(&(&self.a2 * &self.b3) - &(&self.b2 * &self.a3)))
            + &(&self.i1 * &self.j2);
        let bottom_right = self.a3.commutator(&self.b3);
        [top_left, top_right, bottom_right]
    }

    /// `Z_R = (N_X, 0, (A3, B3, 0, 0))`.
    pub fn quotient_datum(&self) -> AdhmDatum {
        let l = self.l();
        AdhmDatum {
            c: l,
            r: 0,
            a: self.a3.clone(),
            b: self.b3.clone(),
            i: Matrix::zeros(l, 0),
            j: Matrix::zeros(0, l),
        }
    }

    /// `f: Σ_X ↪ V`, the first `s` adapted basis vectors.
    pub fn inclusion(&self) -> Matrix {
        self.basis.block(0, 0, self.basis.rows(), self.s)
    }

    /// `f: V ↠ N_X`, the last `l` coordinates in the adapted basis.
    pub fn projection(&self) -> Matrix {
        let c = self.basis.rows();
        self.basis_inv.block(self.s, 0, c - self.s, c)
    }
}

/// `(dim W, dim Σ_X, dim V/Σ_X)`; equivalently rank, charge and length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeVector {
    pub r: usize,
    pub s: usize,
    pub l: usize,
}

/// Whether `(f, g)` with `f: V → V'`, `g: W → W'` is a morphism of
/// representations `X → X'`: `fA = A'f`, `fB = B'f`, `fI = I'g`, `gJ = J'f`.
pub fn is_morphism(f: &Matrix, g: &Matrix, x: &AdhmDatum, y: &AdhmDatum) -> Result<bool> {
    check_shape("f", f, y.c, x.c)?;
    check_shape("g", g, y.r, x.r)?;
    Ok(f * &x.a == &y.a * f
        && f * &x.b == &y.b * f
        && f * &x.i == &y.i * g
        && g * &x.j == &y.j * f)
}
