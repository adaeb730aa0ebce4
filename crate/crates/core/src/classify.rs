//! The derivative of `μ`, the surjectivity class, the infinitesimal and
//! global stabilizers, and a consolidated report.
//!
//! Orderings are fixed so that reports are reproducible:
//! tangent vectors `(a, b, i, j)` are flattened block by block, each block
//! row-major; endomorphisms of `V` are flattened row-major.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::datum::AdhmDatum;
use crate::ratmat::{int, Matrix, Scalar, Subspace};

/// Matrix whose `k`-th column is `image(k)`.
fn matrix_from_columns(rows: usize, cols: usize, image: impl Fn(usize) -> Vec<Scalar>) -> Matrix {
    let mut m = Matrix::zeros(rows, cols);
    for k in 0..cols {
        let col = image(k);
        debug_assert_eq!(col.len(), rows);
        for (i, x) in col.into_iter().enumerate() {
            m[(i, k)] = x;
        }
    }
    m
}

fn unit(rows: usize, cols: usize, index: usize) -> Matrix {
    let mut m = Matrix::zeros(rows, cols);
    m[(index / cols, index % cols)] = Scalar::one();
    m
}

/// A tangent vector `(a, b, i, j)` at a datum of size `(c, r)`.
pub fn tangent_from_flat(c: usize, r: usize, v: &[Scalar]) -> (Matrix, Matrix, Matrix, Matrix) {
    assert_eq!(v.len(), 2 * c * c + 2 * r * c, "tangent vector has wrong length");
    let (a, rest) = v.split_at(c * c);
    let (b, rest) = rest.split_at(c * c);
    let (i, j) = rest.split_at(c * r);
    (
        Matrix::unflatten(a, c, c),
        Matrix::unflatten(b, c, c),
        Matrix::unflatten(i, c, r),
        Matrix::unflatten(j, r, c),
    )
}

/// `D_Xμ(a,b,i,j) = [A,b] + [a,B] + Ij + iJ` as a `c² × (2c² + 2rc)` matrix.
pub fn jacobian(x: &AdhmDatum) -> Matrix {
    let (c, r) = (x.c(), x.r());
    let cc = c * c;
    let cols = 2 * cc + 2 * r * c;
    matrix_from_columns(cc, cols, |k| {
        let out = if k < cc {
            let a = unit(c, c, k);
            a.commutator(x.b())
        } else if k < 2 * cc {
            let b = unit(c, c, k - cc);
            x.a().commutator(&b)
        } else if k < 2 * cc + c * r {
            let i = unit(c, r, k - 2 * cc);
            &i * x.j()
        } else {
            let j = unit(r, c, k - 2 * cc - c * r);
            x.i() * &j
        };
        out.entries().to_vec()
    })
}

pub fn jacobian_rank(x: &AdhmDatum) -> usize {
    jacobian(x).rank()
}

/// `D_Xμ` is surjective.
pub fn is_sj(x: &AdhmDatum) -> bool {
    jacobian_rank(x) == x.c() * x.c()
}

/// Matrix of `y ↦ ([A,y], [B,y], yI, Jy)` on `End(V)`.
pub fn stabilizer_map(x: &AdhmDatum) -> Matrix {
    let (c, r) = (x.c(), x.r());
    let rows = 2 * c * c + 2 * r * c;
    matrix_from_columns(rows, c * c, |k| {
        let y = unit(c, c, k);
        let mut col = Vec::with_capacity(rows);
        col.extend_from_slice(x.a().commutator(&y).entries());
        col.extend_from_slice(x.b().commutator(&y).entries());
        col.extend_from_slice((&y * x.i()).entries());
        col.extend_from_slice((x.j() * &y).entries());
        col
    })
}

/// Lie algebra of the stabilizer: `{y : [A,y] = [B,y] = 0, yI = 0, Jy = 0}`,
/// as a subspace of row-major flattened endomorphisms.
pub fn stabilizer_lie(x: &AdhmDatum) -> Subspace {
    stabilizer_map(x).kernel_basis()
}

/// An invertible `g ≠ id` with `g·X = X`, when one exists.
///
/// Any nonzero `y` in [`stabilizer_lie`] gives `g = id + t·y` for all but
/// finitely many `t`; the first `t ∈ {1, 2, …}` with `det g ≠ 0` is used.
pub fn stabilizer_nontrivial_witness(x: &AdhmDatum) -> Option<Matrix> {
    let lie = stabilizer_lie(x);
    if lie.dim() == 0 {
        return None;
    }
    let c = x.c();
    let y = Matrix::unflatten(lie.basis().column(0).entries(), c, c);
    let id = Matrix::identity(c);
    // det(id + t·y) is a nonzero polynomial of degree ≤ c in t
    for t in 1..=(c as i64 + 1) {
        let g = &id + &y.scale(&int(t));
        if g.determinant().is_zero() {
            continue;
        }
        let fixed = x.act(&g).expect("g is invertible");
        if fixed == *x {
            return Some(g);
        }
    }
    unreachable!("no invertible id + t·y among c + 1 candidates")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub is_solution: bool,
    pub stable: bool,
    pub costable: bool,
    pub regular: bool,
    pub sj: bool,
    pub stabilizer_dim: usize,
    pub ts: bool,
    pub sigma_dim: usize,
    pub upsilon_dim: usize,
    pub jacobian_rank: usize,
    pub tangent_dim: usize,
}

pub fn classify(x: &AdhmDatum) -> ClassificationReport {
    let (c, r) = (x.c(), x.r());
    let sigma_dim = x.stabilizing_subspace().dim();
    let upsilon_dim = x.costabilizing_subspace().dim();
    let stable = sigma_dim == c;
    let costable = upsilon_dim == 0;
    let jacobian_rank = jacobian_rank(x);
    ClassificationReport {
        is_solution: x.is_solution(),
        stable,
        costable,
        regular: stable && costable,
        sj: jacobian_rank == c * c,
        stabilizer_dim: stabilizer_lie(x).dim(),
        ts: stabilizer_nontrivial_witness(x).is_none(),
        sigma_dim,
        upsilon_dim,
        jacobian_rank,
        tangent_dim: 2 * c * c + 2 * r * c - jacobian_rank,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratmat::random_matrix;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_i64(rows)
    }

    fn stable_only() -> AdhmDatum {
        AdhmDatum::new(1, 1, m(&[&[0]]), m(&[&[0]]), m(&[&[1]]), m(&[&[0]])).unwrap()
    }

    fn regular_c1() -> AdhmDatum {
        AdhmDatum::new(1, 2, m(&[&[0]]), m(&[&[0]]), m(&[&[1, 0]]), m(&[&[0], &[1]])).unwrap()
    }

    #[test]
    fn jacobian_small_cases() {
        // D(a, b, i, j) = j when c = r = 1 and X = (0, 0, 1, 0)
        assert_eq!(jacobian(&stable_only()), m(&[&[0, 0, 0, 1]]));
        assert_eq!(jacobian_rank(&AdhmDatum::zero(1, 1)), 0);
        assert_eq!(jacobian(&AdhmDatum::zero(0, 3)).shape(), (0, 0));
    }

    #[test]
    fn sj_examples() {
        assert!(is_sj(&regular_c1()));
        assert!(!is_sj(&AdhmDatum::zero(1, 1)));
    }

    #[test]
    fn stabilizer_examples() {
        assert_eq!(stabilizer_lie(&stable_only()).dim(), 0);
        assert_eq!(stabilizer_lie(&AdhmDatum::zero(3, 2)).dim(), 9);

        let g = stabilizer_nontrivial_witness(&AdhmDatum::zero(2, 1)).expect("zero datum has symmetries");
        assert_ne!(g, Matrix::identity(2));
        assert_eq!(AdhmDatum::zero(2, 1).act(&g).unwrap(), AdhmDatum::zero(2, 1));
        assert!(stabilizer_nontrivial_witness(&regular_c1()).is_none());
    }

    #[test]
    fn classify_examples() {
        let rep = classify(&regular_c1());
        assert!(rep.is_solution && rep.stable && rep.costable && rep.regular && rep.sj && rep.ts);
        assert_eq!((rep.sigma_dim, rep.upsilon_dim), (1, 0));
        assert_eq!(rep.tangent_dim, 2 + 4 - 1);

        let rep = classify(&AdhmDatum::zero(2, 1));
        assert!(rep.is_solution);
        assert!(!rep.stable && !rep.costable && !rep.regular && !rep.sj && !rep.ts);
        assert_eq!(rep.sigma_dim, 0);
        assert_eq!(rep.stabilizer_dim, 4);

        let rep = classify(&stable_only());
        assert!(rep.is_solution && rep.stable && !rep.costable && rep.sj && rep.ts);
    }

    fn random_datum(seed: u64, c: usize, r: usize) -> AdhmDatum {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // sparse entries so that degenerate data show up regularly
        let mut pick = |rows, cols| {
            let dense = random_matrix(rows, cols, 2, &mut rng);
            let mask = random_matrix(rows, cols, 1, &mut rng);
            Matrix::from_fn(rows, cols, |i, j| {
                if mask[(i, j)].is_zero() { dense[(i, j)].clone() } else { Scalar::zero() }
            })
        };
        let (a, b, i, j) = (pick(c, c), pick(c, c), pick(c, r), pick(r, c));
        AdhmDatum::new(c, r, a, b, i, j).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// μ is quadratic, so μ(X + h) − μ(X) − μ(h) is exactly D_Xμ(h).
        #[test]
        fn jacobian_matches_polarization(seed in any::<u64>(), c in 0usize..4, r in 0usize..3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = AdhmDatum::random(c, r, 3, &mut rng);
            let h = random_matrix(2 * c * c + 2 * r * c, 1, 3, &mut rng);
            let (a, b, i, j) = tangent_from_flat(c, r, h.entries());
            let hx = AdhmDatum::new(c, r, a, b, i, j).unwrap();
            let sum = AdhmDatum::new(
                c, r,
                x.a() + hx.a(), x.b() + hx.b(), x.i() + hx.i(), x.j() + hx.j(),
            ).unwrap();
            let expected = &(&sum.mu() - &x.mu()) - &hx.mu();
            let got = &jacobian(&x) * &h;
            prop_assert_eq!(got.entries(), expected.entries());
        }

        #[test]
        fn inclusion_chain_and_lie_criterion(seed in any::<u64>(), c in 0usize..4, r in 0usize..3) {
            let x = random_datum(seed, c, r);
            let rep = classify(&x);
            prop_assert_eq!(rep.regular, rep.stable && rep.costable);
            if rep.stable || rep.costable {
                prop_assert!(rep.sj);
            }
            if rep.sj {
                prop_assert!(rep.ts);
            }
            // surjectivity of D_Xμ iff injectivity of the stabilizer map
            prop_assert_eq!(rep.sj, rep.stabilizer_dim == 0);
            prop_assert_eq!(rep.tangent_dim + rep.jacobian_rank, 2 * c * c + 2 * r * c);
            if let Some(g) = stabilizer_nontrivial_witness(&x) {
                prop_assert!(g != Matrix::identity(c));
                prop_assert!(!g.determinant().is_zero());
                prop_assert_eq!(x.act(&g).unwrap(), x);
            }
        }
    }
}
