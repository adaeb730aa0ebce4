//! Exact spectra over the rationals: characteristic polynomials, rational
//! roots by the rational-root theorem, squarefree factorization of what
//! is left, and joint generalized eigenspaces of commuting pairs.
//!
//! Polynomials are coefficient vectors, lowest degree first, with no
//! trailing zeros (the zero polynomial is the empty vector).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::datum::CommutingPair;
use crate::ratmat::{Matrix, Scalar};

pub type Poly = Vec<Scalar>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn degree(p: &Poly) -> usize {
    p.len().saturating_sub(1)
}

pub fn evaluate(p: &Poly, t: &Scalar) -> Scalar {
    p.iter().rev().fold(Scalar::zero(), |acc, a| acc * t + a)
}

fn derivative(p: &Poly) -> Poly {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(k, a)| a * Scalar::from_integer(BigInt::from(k)))
            .collect(),
    )
}

fn sub(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let zero = Scalar::zero();
    trim((0..n).map(|k| a.get(k).unwrap_or(&zero) - b.get(k).unwrap_or(&zero)).collect())
}

fn monic(p: Poly) -> Poly {
    match p.last().cloned() {
        Some(lead) => p.into_iter().map(|a| a / &lead).collect(),
        None => p,
    }
}

/// Quotient and remainder; `b` must be nonzero.
fn div_rem(a: &Poly, b: &Poly) -> (Poly, Poly) {
    assert!(!b.is_empty(), "division by the zero polynomial");
    let mut rem = a.clone();
    if a.len() < b.len() {
        return (Vec::new(), rem);
    }
    let lead = b.last().unwrap();
    let mut quot = vec![Scalar::zero(); a.len() - b.len() + 1];
    for k in (0..quot.len()).rev() {
        let coeff = &rem[k + b.len() - 1] / lead;
        for (m, bm) in b.iter().enumerate() {
            rem[k + m] -= &coeff * bm;
        }
        quot[k] = coeff;
    }
    (trim(quot), trim(rem))
}

fn gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let (_, r) = div_rem(&a, &b);
        a = b;
        b = r;
    }
    monic(a)
}

/// `det(t·id − M)` by the Faddeev–LeVerrier recursion.
pub fn characteristic_polynomial(m: &Matrix) -> Poly {
    assert!(m.is_square(), "characteristic polynomial of a non-square matrix");
    let n = m.rows();
    let mut coeffs = vec![Scalar::zero(); n + 1];
    coeffs[n] = Scalar::one();
    let mut acc = Matrix::zeros(n, n);
    for k in 1..=n {
        acc = &(m * &acc) + &Matrix::scalar_multiple_of_identity(n, &coeffs[n - k + 1]);
        let trace = (m * &acc).trace();
        coeffs[n - k] = -trace / Scalar::from_integer(BigInt::from(k));
    }
    coeffs
}

/// Positive divisors of `n > 0` by trial division.
fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Integer polynomial with the same roots.
fn clear_denominators(p: &Poly) -> Vec<BigInt> {
    let lcm = p.iter().fold(BigInt::one(), |acc, a| acc.lcm(a.denom()));
    let ints: Vec<BigInt> = p.iter().map(|a| (a * Scalar::from_integer(lcm.clone())).to_integer()).collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, a| acc.gcd(a));
    ints.into_iter().map(|a| a / &content).collect()
}

/// Rational roots with multiplicities (sorted by root) and the cofactor
/// carrying every other root.
///
/// Candidate roots are `±u/v` with `u` dividing the trailing and `v` the
/// leading coefficient. Coefficients too large for trial division leave
/// their part of the polynomial in the cofactor instead of being dropped.
pub fn rational_roots(p: &Poly) -> (Vec<(Scalar, usize)>, Poly) {
    let mut rest = trim(p.clone());
    assert!(!rest.is_empty(), "roots of the zero polynomial");
    let mut roots = Vec::new();

    let zeros = rest.iter().take_while(|a| a.is_zero()).count();
    if zeros > 0 {
        roots.push((Scalar::zero(), zeros));
        rest.drain(..zeros);
    }
    if rest.len() > 1 {
        let ints = clear_denominators(&rest);
        let (trailing, leading) = (ints[0].abs().to_u64(), ints.last().unwrap().abs().to_u64());
        if let (Some(trailing), Some(leading)) = (trailing, leading) {
            let numerators = divisors(trailing);
            let denominators = divisors(leading);
            let mut candidates = Vec::new();
            for u in &numerators {
                for v in &denominators {
                    if u.gcd(v) == 1 {
                        let x = Scalar::new(BigInt::from(*u), BigInt::from(*v));
                        candidates.push(-x.clone());
                        candidates.push(x);
                    }
                }
            }
            for x in candidates {
                let linear = vec![-x.clone(), Scalar::one()];
                let mut mult = 0;
                while rest.len() > 1 && evaluate(&rest, &x).is_zero() {
                    rest = div_rem(&rest, &linear).0;
                    mult += 1;
                }
                if mult > 0 {
                    roots.push((x, mult));
                }
            }
        }
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    (roots, monic(rest))
}

/// Yun's squarefree decomposition as `(factor degree, multiplicity)`
/// pairs. A squarefree factor need not be irreducible.
pub fn squarefree_degrees(p: &Poly) -> Vec<(usize, usize)> {
    let a = monic(trim(p.clone()));
    if degree(&a) == 0 {
        return Vec::new();
    }
    let b = derivative(&a);
    let c = gcd(&a, &b);
    let mut w = div_rem(&a, &c).0;
    let mut y = div_rem(&b, &c).0;
    let mut z = sub(&y, &derivative(&w));
    let mut out = Vec::new();
    let mut i = 1;
    while degree(&w) > 0 {
        let g = gcd(&w, &z);
        if degree(&g) > 0 {
            out.push((degree(&g), i));
        }
        w = div_rem(&w, &g).0;
        y = div_rem(&z, &g).0;
        z = sub(&y, &derivative(&w));
        i += 1;
    }
    out
}

/// The part of a spectrum that has no rational description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Residue {
    /// Dimension not accounted for by rational joint eigenvalues.
    pub dimension: usize,
    /// `(degree, multiplicity)` of the squarefree factors of the
    /// unresolved characteristic-polynomial parts of `P` and then `Q`.
    pub factors: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointEigenvalue {
    pub p: Scalar,
    pub q: Scalar,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointSpectrum {
    /// Sorted by `(p, q)`.
    pub eigenvalues: Vec<JointEigenvalue>,
    pub residue: Option<Residue>,
}

/// `(M − λ)^n` with `n` the size of `M`; its kernel is the generalized eigenspace.
fn shifted_power(m: &Matrix, lambda: &Scalar) -> Matrix {
    let n = m.rows();
    let shifted = m - &Matrix::scalar_multiple_of_identity(n, lambda);
    shifted.pow(n)
}

/// Joint eigenvalues `(p, q)` of a commuting pair with multiplicity
/// `dim ker (P − p)^n ∩ ker (Q − q)^n`.
pub fn joint_spectrum(pair: &CommutingPair) -> JointSpectrum {
    let n = pair.n();
    let (p_roots, p_rest) = rational_roots(&characteristic_polynomial(pair.p()));
    let (q_roots, q_rest) = rational_roots(&characteristic_polynomial(pair.q()));
    let mut eigenvalues = Vec::new();
    for (p, _) in &p_roots {
        let kp = shifted_power(pair.p(), p);
        for (q, _) in &q_roots {
            let kq = shifted_power(pair.q(), q);
            let dim = Matrix::vstack(n, &[&kp, &kq]).kernel_basis().dim();
            if dim > 0 {
                eigenvalues.push(JointEigenvalue {
                    p: p.clone(),
                    q: q.clone(),
                    multiplicity: dim,
                });
            }
        }
    }
    let found: usize = eigenvalues.iter().map(|e| e.multiplicity).sum();
    let residue = (found < n).then(|| {
        let mut factors = squarefree_degrees(&p_rest);
        factors.extend(squarefree_degrees(&q_rest));
        Residue {
            dimension: n - found,
            factors,
        }
    });
    JointSpectrum { eigenvalues, residue }
}
