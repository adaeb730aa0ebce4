//! Constructive samplers for commuting pairs, stable solutions and each
//! stratum `{X : μ(X) = 0, dim Σ_X = s}`, plus the dimension audit.
//!
//! Stratum samples are assembled in the adapted basis (`Σ_X` spanned by the
//! first `s` coordinates) from a stable solution of size `s`, a commuting
//! pair of size `c − s` and a point of the linear fiber cut out by the
//! off-diagonal block equation.

use num_traits::Zero;
use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::datum::{AdhmDatum, CommutingPair};
use crate::error::{Error, Result};
use crate::ratmat::{int, random_matrix, Matrix, Scalar};

const MAX_DRAWS: usize = 100;
const KERNEL_COEFF_BOUND: i64 = 5;

/// `n` distinct integers from `[-bound, bound]`, in random order.
fn distinct_integers<R: Rng + ?Sized>(n: usize, bound: i64, rng: &mut R) -> Vec<Scalar> {
    let width = (2 * bound + 1) as usize;
    assert!(n <= width, "not enough distinct values");
    sample(rng, width, n)
        .into_iter()
        .map(|k| int(k as i64 - bound))
        .collect()
}

fn eigen_bound(n: usize) -> i64 {
    (n as i64 + 4).max(6)
}

/// `q(P)` for a random polynomial `q` of degree `< n` with small integer
/// coefficients.
fn random_polynomial_in<R: Rng + ?Sized>(p: &Matrix, rng: &mut R) -> Matrix {
    let n = p.rows();
    let mut acc = Matrix::zeros(n, n);
    let mut power = Matrix::identity(n);
    for _ in 0..n {
        let coeff = int(rng.gen_range(-3..=3));
        acc = &acc + &power.scale(&coeff);
        power = &power * p;
    }
    acc
}

/// `P` diagonal with distinct integer entries and `Q = q(P)`; both have
/// rational spectra.
pub fn sample_commuting<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CommutingPair {
    let p = Matrix::diagonal(&distinct_integers(n, eigen_bound(n), rng));
    let q = random_polynomial_in(&p, rng);
    CommutingPair::new(p, q).expect("polynomials in P commute with P")
}

/// A stable solution with `J = 0`, `A` diagonal with distinct entries,
/// `B` a polynomial in `A` and `I` random.
pub fn sample_stable<R: Rng + ?Sized>(r: usize, c: usize, rng: &mut R) -> Result<AdhmDatum> {
    if r == 0 && c > 0 {
        return Err(Error::Dimension("stable data need r >= 1 when c > 0".into()));
    }
    for _ in 0..MAX_DRAWS {
        let pair = sample_commuting(c, rng);
        let i = random_matrix(c, r, 3, rng);
        let x = AdhmDatum::new(c, r, pair.p().clone(), pair.q().clone(), i, Matrix::zeros(r, c))?;
        if x.r_map().rank() == c {
            debug_assert!(x.is_solution() && x.is_stable());
            return Ok(x);
        }
    }
    Err(Error::SamplerExhausted(MAX_DRAWS))
}

/// A stable solution whose costabilizing subspace contains the first
/// `cloud` coordinates, with `J ≠ 0` on the remaining ones when `r ≥ 2`.
///
/// `A` is diagonal with distinct entries; each row `I_k` is orthogonal to
/// the column `J e_k` so that `(IJ)_kk = 0`, and the off-diagonal part of
/// `B` is then forced by `(a_k − a_m) B_km = −(IJ)_km`.
pub fn sample_stable_with_cloud<R: Rng + ?Sized>(
    r: usize,
    c: usize,
    cloud: usize,
    rng: &mut R,
) -> Result<AdhmDatum> {
    if cloud > c {
        return Err(Error::Dimension(format!("cloud size {cloud} exceeds c = {c}")));
    }
    if r == 0 && c > 0 {
        return Err(Error::Dimension("stable data need r >= 1 when c > 0".into()));
    }
    for _ in 0..MAX_DRAWS {
        let diag = distinct_integers(c, eigen_bound(c), rng);
        let i = random_matrix(c, r, 3, rng);
        let mut j = Matrix::zeros(r, c);
        for k in cloud..c {
            let row: Vec<Scalar> = i.row(k).to_vec();
            let z = random_matrix(r, 1, 3, rng);
            let norm: Scalar = row.iter().map(|x| x * x).sum();
            let dot: Scalar = row.iter().zip(z.entries()).map(|(x, y)| x * y).sum();
            for w in 0..r {
                j[(w, k)] = &norm * &z[(w, 0)] - &dot * &row[w];
            }
        }
        let ij = &i * &j;
        let b = Matrix::from_fn(c, c, |k, m| {
            if k == m {
                int(rng.gen_range(-4..=4))
            } else {
                -(&ij[(k, m)] / (&diag[k] - &diag[m]))
            }
        });
        let x = AdhmDatum::new(c, r, Matrix::diagonal(&diag), b, i, j)?;
        debug_assert!(x.is_solution());
        if x.r_map().rank() == c {
            return Ok(x);
        }
    }
    Err(Error::SamplerExhausted(MAX_DRAWS))
}

/// `L·U` with `L` unit lower and `U` unit upper triangular: determinant one
/// and an integer inverse.
pub fn random_unimodular<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix {
    let l = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => int(1),
        std::cmp::Ordering::Greater => int(rng.gen_range(-2..=2)),
        std::cmp::Ordering::Less => Scalar::zero(),
    });
    let u = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => int(1),
        std::cmp::Ordering::Less => int(rng.gen_range(-2..=2)),
        std::cmp::Ordering::Greater => Scalar::zero(),
    });
    &l * &u
}

/// `g·X` for a random unimodular `g`.
pub fn conjugate_randomly<R: Rng + ?Sized>(x: &AdhmDatum, rng: &mut R) -> AdhmDatum {
    let g = random_unimodular(x.c(), rng);
    x.act(&g).expect("unimodular matrices are invertible")
}

/// Matrix of `(A2, B2, J2) ↦ A1·B2 − B1·A2 + A2·B3 − B2·A3 + I1·J2`,
/// the off-diagonal block equation, with unknowns flattened row-major in
/// the order `A2, B2, J2`.
pub fn fiber_map(x1: &AdhmDatum, pair: &CommutingPair) -> Result<Matrix> {
    if !x1.is_stable() {
        return Err(Error::NotStable);
    }
    let (s, r, m) = (x1.c(), x1.r(), pair.n());
    let rows = s * m;
    let cols = 2 * s * m + r * m;
    let mut out = Matrix::zeros(rows, cols);
    for k in 0..cols {
        let mut a2 = Matrix::zeros(s, m);
        let mut b2 = Matrix::zeros(s, m);
        let mut j2 = Matrix::zeros(r, m);
        if k < s * m {
            a2[(k / m, k % m)] = int(1);
        } else if k < 2 * s * m {
            let k = k - s * m;
            b2[(k / m, k % m)] = int(1);
        } else {
            let k = k - 2 * s * m;
            j2[(k / m, k % m)] = int(1);
        }
        let image = fiber_equation(x1, pair, &a2, &b2, &j2);
        for (row, v) in image.entries().iter().enumerate() {
            out[(row, k)] = v.clone();
        }
    }
    Ok(out)
}

fn fiber_equation(x1: &AdhmDatum, pair: &CommutingPair, a2: &Matrix, b2: &Matrix, j2: &Matrix) -> Matrix {
    let lhs = &(x1.a() * b2) - &(x1.b() * a2);
    let rhs = &(a2 * pair.q()) - &(b2 * pair.p());
    &(&lhs + &rhs) + &(x1.i() * j2)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumSample {
    pub datum: AdhmDatum,
    pub target_s: usize,
}

/// A solution with `dim Σ_X = s` exactly, in the adapted basis.
pub fn sample_stratum<R: Rng + ?Sized>(r: usize, c: usize, s: usize, rng: &mut R) -> Result<StratumSample> {
    if s > c {
        return Err(Error::Dimension(format!("s = {s} exceeds c = {c}")));
    }
    if r == 0 && s > 0 {
        return Err(Error::Dimension("positive charge needs r >= 1".into()));
    }
    let x1 = sample_stable(r, s, rng)?;
    let pair = sample_commuting(c - s, rng);
    let l = c - s;
    let phi = fiber_map(&x1, &pair)?;
    let kernel = phi.kernel_basis();
    let coeffs = random_matrix(kernel.dim(), 1, KERNEL_COEFF_BOUND, rng);
    let point = kernel.basis() * &coeffs;
    let v = point.entries();
    let a2 = Matrix::unflatten(&v[..s * l], s, l);
    let b2 = Matrix::unflatten(&v[s * l..2 * s * l], s, l);
    let j2 = Matrix::unflatten(&v[2 * s * l..], r, l);

    let zero_bl = Matrix::zeros(l, s);
    let a = Matrix::from_blocks(x1.a(), &a2, &zero_bl, pair.p());
    let b = Matrix::from_blocks(x1.b(), &b2, &zero_bl, pair.q());
    let i = Matrix::vstack(r, &[x1.i(), &Matrix::zeros(l, r)]);
    let j = Matrix::hstack(r, &[x1.j(), &j2]);
    let datum = AdhmDatum::new(c, r, a, b, i, j)?;
    debug_assert!(datum.is_solution());
    debug_assert_eq!(datum.stabilizing_subspace().dim(), s);
    Ok(StratumSample { datum, target_s: s })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumDimension {
    pub r: usize,
    pub c: usize,
    pub s: usize,
    /// `2rc + c² − (r−1)(c−s)`.
    pub formula: i64,
    /// Grassmannian + stable base + commuting pairs + fiber rank.
    pub parametrization_sum: i64,
}

impl StratumDimension {
    pub fn agrees(&self) -> bool {
        self.formula == self.parametrization_sum
    }
}

pub fn stratum_dimension(r: usize, c: usize, s: usize) -> Result<StratumDimension> {
    if s > c {
        return Err(Error::Dimension(format!("s = {s} exceeds c = {c}")));
    }
    let (ri, ci, si) = (r as i64, c as i64, s as i64);
    let l = ci - si;
    let formula = 2 * ri * ci + ci * ci - (ri - 1) * l;
    let grassmannian = si * l;
    let stable_base = 2 * ri * si + si * si;
    let commuting = l + l * l;
    let fiber = (ri + si) * l;
    Ok(StratumDimension {
        r,
        c,
        s,
        formula,
        parametrization_sum: grassmannian + stable_base + commuting + fiber,
    })
}

/// Every `(r, c, s)` with `1 ≤ r ≤ rmax`, `0 ≤ s ≤ c ≤ cmax`, sorted.
pub fn dimension_audit(rmax: usize, cmax: usize) -> Vec<StratumDimension> {
    let mut rows = Vec::new();
    for r in 1..=rmax {
        for c in 0..=cmax {
            for s in 0..=c {
                rows.push(stratum_dimension(r, c, s).expect("s <= c"));
            }
        }
    }
    rows
}
