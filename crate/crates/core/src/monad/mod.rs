//! The monad on the projective plane attached to an ADHM datum
//!
//! ```text
//! V ⊗ O(−1) --α--> (V ⊕ V ⊕ W) ⊗ O --β--> V ⊗ O(1)
//! α = (zA + x; zB + y; zJ)      β = (−zB − y | zA + x | zI)
//! ```
//!
//! with fiber evaluation, the loci where it fails to be a bundle, twisted
//! section counts and the invariants (rank, charge, length).

pub mod spectrum;

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::datum::{AdhmDatum, CommutingPair};
use crate::error::{Error, Result};
use crate::ratmat::{format_scalar, parse_scalar, Matrix, Scalar};
use spectrum::{joint_spectrum, rational_roots, characteristic_polynomial, Residue};

/// Largest twist accepted by [`h0_twisted`].
pub const DEFAULT_TWIST_CAP: i64 = 8;

/// A point `(x:y:z)` of the projective plane. Equality is projective.
#[derive(Clone, Debug)]
pub struct PointP2 {
    x: Scalar,
    y: Scalar,
    z: Scalar,
}

impl PointP2 {
    pub fn new(x: Scalar, y: Scalar, z: Scalar) -> Result<Self> {
        if x.is_zero() && y.is_zero() && z.is_zero() {
            return Err(Error::InvalidPoint("all coordinates are zero".into()));
        }
        Ok(Self { x, y, z })
    }

    /// The affine point `(p, q)` as `(p:q:1)`.
    pub fn affine(p: Scalar, q: Scalar) -> Self {
        Self { x: p, y: q, z: Scalar::one() }
    }

    pub fn x(&self) -> &Scalar {
        &self.x
    }

    pub fn y(&self) -> &Scalar {
        &self.y
    }

    pub fn z(&self) -> &Scalar {
        &self.z
    }

    /// On the line `z = 0`.
    pub fn on_infinity(&self) -> bool {
        self.z.is_zero()
    }
}

impl PartialEq for PointP2 {
    fn eq(&self, other: &Self) -> bool {
        // proportional iff all 2x2 minors vanish
        &self.x * &other.y == &self.y * &other.x
            && &self.x * &other.z == &self.z * &other.x
            && &self.y * &other.z == &self.z * &other.y
    }
}

impl Eq for PointP2 {}

impl std::str::FromStr for PointP2 {
    type Err = Error;

    /// Parses `"x,y,z"` with rational coordinates.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidPoint(format!("expected three coordinates in {s:?}")));
        }
        let mut coords = Vec::with_capacity(3);
        for part in parts {
            coords.push(parse_scalar(part).ok_or_else(|| Error::InvalidPoint(format!("malformed coordinate {part:?}")))?);
        }
        let z = coords.pop().unwrap();
        let y = coords.pop().unwrap();
        let x = coords.pop().unwrap();
        PointP2::new(x, y, z)
    }
}

impl fmt::Display for PointP2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{}:{})", format_scalar(&self.x), format_scalar(&self.y), format_scalar(&self.z))
    }
}

/// Coefficient matrices of the linear forms in `α` and `β`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonadMatrices {
    pub c: usize,
    pub r: usize,
    pub alpha_x: Matrix,
    pub alpha_y: Matrix,
    pub alpha_z: Matrix,
    pub beta_x: Matrix,
    pub beta_y: Matrix,
    pub beta_z: Matrix,
}

/// Quadratic monomials in the fixed order used by [`MonadMatrices::product_coefficients`].
pub const QUADRATIC_MONOMIALS: [&str; 6] = ["x^2", "xy", "xz", "y^2", "yz", "z^2"];

impl MonadMatrices {
    fn alpha_forms(&self) -> [&Matrix; 3] {
        [&self.alpha_x, &self.alpha_y, &self.alpha_z]
    }

    fn beta_forms(&self) -> [&Matrix; 3] {
        [&self.beta_x, &self.beta_y, &self.beta_z]
    }

    /// Coefficients of `β∘α` on `x², xy, xz, y², yz, z²`.
    pub fn product_coefficients(&self) -> [Matrix; 6] {
        let (a, b) = (self.alpha_forms(), self.beta_forms());
        let term = |u: usize, v: usize| b[u] * a[v];
        let mixed = |u: usize, v: usize| &term(u, v) + &term(v, u);
        [term(0, 0), mixed(0, 1), mixed(0, 2), term(1, 1), mixed(1, 2), term(2, 2)]
    }

    pub fn alpha_at(&self, p: &PointP2) -> Matrix {
        combine(self.alpha_forms(), p)
    }

    pub fn beta_at(&self, p: &PointP2) -> Matrix {
        combine(self.beta_forms(), p)
    }
}

fn combine(forms: [&Matrix; 3], p: &PointP2) -> Matrix {
    let scaled = [forms[0].scale(&p.x), forms[1].scale(&p.y), forms[2].scale(&p.z)];
    &(&scaled[0] + &scaled[1]) + &scaled[2]
}

pub fn monad_matrices(x: &AdhmDatum) -> MonadMatrices {
    let (c, r) = (x.c(), x.r());
    let id = Matrix::identity(c);
    let zero_cc = Matrix::zeros(c, c);
    let zero_rc = Matrix::zeros(r, c);
    let zero_cr = Matrix::zeros(c, r);
    MonadMatrices {
        c,
        r,
        alpha_x: Matrix::vstack(c, &[&id, &zero_cc, &zero_rc]),
        alpha_y: Matrix::vstack(c, &[&zero_cc, &id, &zero_rc]),
        alpha_z: Matrix::vstack(c, &[x.a(), x.b(), x.j()]),
        beta_x: Matrix::hstack(c, &[&zero_cc, &id, &zero_cr]),
        beta_y: Matrix::hstack(c, &[&(-&id), &zero_cc, &zero_cr]),
        beta_z: Matrix::hstack(c, &[&(-x.b()), x.a(), x.i()]),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberReport {
    pub point: PointP2,
    pub alpha: Matrix,
    pub beta: Matrix,
    pub rank_alpha: usize,
    pub rank_beta: usize,
    /// `dim ker β_P − rank α_P`.
    pub h0_fiber: usize,
    /// `dim coker β_P`.
    pub h1_fiber: usize,
    pub alpha_injective: bool,
}

pub fn evaluate_fiber(x: &AdhmDatum, point: &PointP2) -> Result<FiberReport> {
    x.require_solution()?;
    Ok(monad_matrices(x).fiber(point))
}

impl MonadMatrices {
    /// Fiber data at `point`; meaningful when `βα = 0`, which the caller
    /// is responsible for.
    pub fn fiber(&self, point: &PointP2) -> FiberReport {
        let alpha = self.alpha_at(point);
        let beta = self.beta_at(point);
        let (rank_alpha, rank_beta) = (alpha.rank(), beta.rank());
        let (c, r) = (self.c, self.r);
        FiberReport {
            point: point.clone(),
            rank_alpha,
            rank_beta,
            h0_fiber: (2 * c + r - rank_beta).saturating_sub(rank_alpha),
            h1_fiber: c - rank_beta,
            alpha_injective: rank_alpha == c,
            alpha,
            beta,
        }
    }
}

/// An affine point `(p, q)`, i.e. `(p:q:1)`, with a multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SupportPoint {
    pub p: Scalar,
    pub q: Scalar,
    pub multiplicity: usize,
}

impl SupportPoint {
    pub fn point(&self) -> PointP2 {
        PointP2::affine(self.p.clone(), self.q.clone())
    }
}

impl fmt::Display for SupportPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{}) x {}", format_scalar(&self.p), format_scalar(&self.q), self.multiplicity)
    }
}

/// Points with multiplicities, plus whatever could not be resolved over
/// the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Support {
    /// Sorted by `(p, q)`.
    pub points: Vec<SupportPoint>,
    pub residue: Option<Residue>,
}

impl Support {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.residue.is_none()
    }

    /// Sum of the multiplicities of the rational points.
    pub fn total_multiplicity(&self) -> usize {
        self.points.iter().map(|p| p.multiplicity).sum()
    }

    pub fn is_complete(&self) -> bool {
        self.residue.is_none()
    }
}

/// The joint spectrum of a commuting pair with signs flipped: the
/// eigenvalue pair `(p, q)` becomes the point `(−p:−q:1)`.
pub fn support_of_pair(pair: &CommutingPair) -> Support {
    let spec = joint_spectrum(pair);
    let mut points: Vec<SupportPoint> = spec
        .eigenvalues
        .into_iter()
        .map(|e| SupportPoint {
            p: -e.p,
            q: -e.q,
            multiplicity: e.multiplicity,
        })
        .collect();
    points.sort();
    Support {
        points,
        residue: spec.residue,
    }
}

/// `(A, B)` restricted to `Υ_X`, where they commute because `J` vanishes there.
pub fn costabilizing_pair(x: &AdhmDatum) -> Result<CommutingPair> {
    x.require_solution()?;
    let upsilon = x.costabilizing_subspace();
    CommutingPair::new(upsilon.restrict(x.a())?, upsilon.restrict(x.b())?)
}

/// Points where `α_P` fails to be injective; empty iff `X` is costable.
pub fn non_costable_locus(x: &AdhmDatum) -> Result<Support> {
    Ok(support_of_pair(&costabilizing_pair(x)?))
}

/// Support of `H¹` of the monad, from the quotient pair `(A3, B3)`.
pub fn singular_support(x: &AdhmDatum) -> Result<Support> {
    Ok(support_of_pair(&x.quotient_representation()?))
}

/// Affine points `(x, y)` where `β_P = (−B − y | A + x)` for the datum
/// `(P, Q, 0, 0)` built from a commuting pair drops rank.
///
/// A rank drop at `(x, y)` needs a covector `w` with `wP = −x·w` and
/// `wQ = −y·w`, so only negated rational eigenvalues are candidates.
/// Returns `None` when either spectrum is not fully rational.
pub fn rank_drop_points(pair: &CommutingPair) -> Option<Vec<(Scalar, Scalar)>> {
    let n = pair.n();
    let (p_roots, p_rest) = rational_roots(&characteristic_polynomial(pair.p()));
    let (q_roots, q_rest) = rational_roots(&characteristic_polynomial(pair.q()));
    if p_rest.len() > 1 || q_rest.len() > 1 {
        return None;
    }
    let m = monad_matrices(&pair.to_datum());
    let mut out = Vec::new();
    for (p, _) in &p_roots {
        for (q, _) in &q_roots {
            let point = PointP2::affine(-p.clone(), -q.clone());
            if m.beta_at(&point).rank() < n {
                out.push((-p.clone(), -q.clone()));
            }
        }
    }
    out.sort();
    Some(out)
}

/// `dim S^d = (d+1)(d+2)/2`, the number of degree-`d` monomials in three
/// variables; zero for `d < 0`.
pub fn forms_dimension(d: i64) -> usize {
    if d < 0 {
        0
    } else {
        let d = d as usize;
        (d + 1) * (d + 2) / 2
    }
}

/// Exponents `(a, b, c)` of `x^a y^b z^c` with `a + b + c = d`, degree-lex
/// with `x > y > z`.
pub fn monomials(d: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::with_capacity(forms_dimension(d as i64));
    for a in (0..=d).rev() {
        for b in (0..=d - a).rev() {
            out.push([a, b, d - a - b]);
        }
    }
    out
}

/// Multiplication by `β` on sections:
/// `(V ⊕ V ⊕ W) ⊗ S^n → V ⊗ S^{n+1}`.
///
/// Column `k·dim S^n + m` is component `k` times monomial `m`; row
/// `i·dim S^{n+1} + m'` is component `i` of monomial `m'`.
pub fn beta_sections(m: &MonadMatrices, n: usize) -> Matrix {
    let source = monomials(n);
    let target = monomials(n + 1);
    let index: HashMap<[usize; 3], usize> = target.iter().enumerate().map(|(k, e)| (*e, k)).collect();
    let width = 2 * m.c + m.r;
    let (ns, nt) = (source.len(), target.len());
    let mut out = Matrix::zeros(m.c * nt, width * ns);
    for (var, form) in [&m.beta_x, &m.beta_y, &m.beta_z].into_iter().enumerate() {
        for (ms, e) in source.iter().enumerate() {
            let mut shifted = *e;
            shifted[var] += 1;
            let mt = index[&shifted];
            for i in 0..m.c {
                for k in 0..width {
                    let coeff = &form[(i, k)];
                    if !coeff.is_zero() {
                        out[(i * nt + mt, k * ns + ms)] += coeff;
                    }
                }
            }
        }
    }
    out
}

fn check_twist(n: i64, cap: i64) -> Result<()> {
    if n > cap {
        return Err(Error::TwistTooLarge { n, cap });
    }
    Ok(())
}

/// `h⁰` of the middle cohomology twisted by `O(n)`, capped at
/// [`DEFAULT_TWIST_CAP`].
pub fn h0_twisted(x: &AdhmDatum, n: i64) -> Result<usize> {
    h0_twisted_with_cap(x, n, DEFAULT_TWIST_CAP)
}

/// `dim ker β_n − c·dim S^{n−1}`.
pub fn h0_twisted_with_cap(x: &AdhmDatum, n: i64, cap: i64) -> Result<usize> {
    Ok(twisted_sections(x, n, cap)?.0)
}

/// `dim coker β_n = c·dim S^{n+1} − rank β_n`.
pub fn h1_twisted(x: &AdhmDatum, n: i64) -> Result<usize> {
    Ok(twisted_sections(x, n, DEFAULT_TWIST_CAP)?.1)
}

/// `(h0_twisted, h1_twisted)` from a single rank computation.
pub fn twisted_sections(x: &AdhmDatum, n: i64, cap: i64) -> Result<(usize, usize)> {
    x.require_solution()?;
    check_twist(n, cap)?;
    if n < 0 {
        let h1 = if n == -1 { x.c() } else { 0 };
        return Ok((0, h1));
    }
    let beta = beta_sections(&monad_matrices(x), n as usize);
    let rank = beta.rank();
    let h0 = beta.cols() - rank - x.c() * forms_dimension(n - 1);
    Ok((h0, beta.rows() - rank))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerverseInvariants {
    pub rank: usize,
    pub charge: usize,
    pub length: usize,
}

impl PerverseInvariants {
    /// `(rank, charge + length)`, the two nonzero parts of the Chern
    /// character `rank − (charge + length)·h²`.
    pub fn chern_character(&self) -> (usize, usize) {
        (self.rank, self.charge + self.length)
    }
}

/// `(r, s, l)`, with the length checked against the support when the
/// quotient spectrum is rational.
pub fn perverse_invariants(x: &AdhmDatum) -> Result<PerverseInvariants> {
    x.require_solution()?;
    let t = x.type_vector();
    let support = singular_support(x)?;
    if support.is_complete() && support.total_multiplicity() != t.l {
        return Err(Error::Inconsistent(format!(
            "support multiplicities sum to {} but the length is {}",
            support.total_multiplicity(),
            t.l
        )));
    }
    Ok(PerverseInvariants {
        rank: t.r,
        charge: t.s,
        length: t.l,
    })
}

/// `χ(O(d)) = (d+1)(d+2)/2` as a polynomial in `d`, valid for every `d`.
fn chi_line(d: i64) -> i64 {
    (d + 1) * (d + 2) / 2
}

/// `r·(n+1)(n+2)/2 − c`.
pub fn euler_characteristic(x: &AdhmDatum, n: i64) -> i64 {
    x.r() as i64 * chi_line(n) - x.c() as i64
}

/// The alternating sum over the three terms of the twisted complex.
pub fn euler_characteristic_termwise(c: usize, r: usize, n: i64) -> i64 {
    let (c, r) = (c as i64, r as i64);
    -c * chi_line(n - 1) + (2 * c + r) * chi_line(n) - c * chi_line(n + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratmat::{int, random_matrix};
    use crate::strata;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_i64(rows)
    }

    fn point(x: i64, y: i64, z: i64) -> PointP2 {
        PointP2::new(int(x), int(y), int(z)).unwrap()
    }

    fn one_point() -> AdhmDatum {
        AdhmDatum::new(1, 1, m(&[&[0]]), m(&[&[0]]), m(&[&[1]]), m(&[&[0]])).unwrap()
    }

    fn regular_c1() -> AdhmDatum {
        AdhmDatum::new(1, 2, m(&[&[0]]), m(&[&[0]]), m(&[&[1, 0]]), m(&[&[0], &[1]])).unwrap()
    }

    fn diagonal_pair_datum() -> AdhmDatum {
        AdhmDatum::new(2, 1, m(&[&[1, 0], &[0, 2]]), m(&[&[3, 0], &[0, 4]]), Matrix::zeros(2, 1), Matrix::zeros(1, 2)).unwrap()
    }

    #[test]
    fn points() {
        assert!(PointP2::new(int(0), int(0), int(0)).is_err());
        assert_eq!(point(1, 2, 3), point(-2, -4, -6));
        assert_ne!(point(1, 2, 3), point(1, 2, 4));
        assert!(point(1, 1, 0).on_infinity());
        assert_eq!("1/2, -1, 0".parse::<PointP2>().unwrap(), point(1, -2, 0));
        assert!("1,2".parse::<PointP2>().is_err());
        assert!("a,b,c".parse::<PointP2>().is_err());
        assert!("0,0,0".parse::<PointP2>().is_err());
    }

    #[test]
    fn matrices_examples() {
        let mm = monad_matrices(&AdhmDatum::zero(1, 1));
        assert_eq!(mm.alpha_x, m(&[&[1], &[0], &[0]]));
        assert_eq!(mm.alpha_y, m(&[&[0], &[1], &[0]]));
        assert!(mm.alpha_z.is_zero());
        assert_eq!(mm.beta_x, m(&[&[0, 1, 0]]));
        assert_eq!(mm.beta_y, m(&[&[-1, 0, 0]]));
        assert!(mm.beta_z.is_zero());

        assert_eq!(monad_matrices(&regular_c1()).beta_z, m(&[&[0, 0, 1, 0]]));
    }

    #[test]
    fn fiber_examples() {
        let x = one_point();
        let f = evaluate_fiber(&x, &point(1, 0, 0)).unwrap();
        assert!(f.alpha_injective);

        let f = evaluate_fiber(&x, &point(1, 1, 1)).unwrap();
        assert_eq!((f.rank_alpha, f.rank_beta, f.h0_fiber, f.h1_fiber), (1, 1, 1, 0));

        let f = evaluate_fiber(&AdhmDatum::zero(1, 1), &point(0, 0, 1)).unwrap();
        assert!(f.alpha.is_zero() && !f.alpha_injective);

        let bad = AdhmDatum::new(1, 1, m(&[&[0]]), m(&[&[0]]), m(&[&[1]]), m(&[&[1]])).unwrap();
        assert_eq!(evaluate_fiber(&bad, &point(1, 0, 0)), Err(Error::NotSolution));
    }

    #[test]
    fn locus_examples() {
        assert!(non_costable_locus(&regular_c1()).unwrap().is_empty());

        let locus = non_costable_locus(&one_point()).unwrap();
        assert_eq!(locus.points, vec![SupportPoint { p: int(0), q: int(0), multiplicity: 1 }]);

        let locus = non_costable_locus(&diagonal_pair_datum()).unwrap();
        assert_eq!(
            locus.points,
            vec![
                SupportPoint { p: int(-2), q: int(-4), multiplicity: 1 },
                SupportPoint { p: int(-1), q: int(-3), multiplicity: 1 },
            ]
        );
        for sp in &locus.points {
            assert!(!evaluate_fiber(&diagonal_pair_datum(), &sp.point()).unwrap().alpha_injective);
        }
        assert_eq!(locus.points[0].to_string(), "(-2,-4) x 1");
    }

    #[test]
    fn support_examples() {
        assert!(singular_support(&one_point()).unwrap().is_empty());
        let s = singular_support(&AdhmDatum::zero(1, 1)).unwrap();
        assert_eq!(s.points, vec![SupportPoint { p: int(0), q: int(0), multiplicity: 1 }]);
        let s = singular_support(&AdhmDatum::zero(2, 1)).unwrap();
        assert_eq!(s.points, vec![SupportPoint { p: int(0), q: int(0), multiplicity: 2 }]);
    }

    #[test]
    fn rank_drop_examples() {
        let pair = CommutingPair::new(m(&[&[1, 0], &[0, 2]]), m(&[&[3, 0], &[0, 4]])).unwrap();
        assert_eq!(rank_drop_points(&pair), Some(vec![(int(-2), int(-4)), (int(-1), int(-3))]));
        let rot = CommutingPair::new(m(&[&[0, -1], &[1, 0]]), Matrix::zeros(2, 2)).unwrap();
        assert_eq!(rank_drop_points(&rot), None);
    }

    #[test]
    fn monomial_order() {
        assert_eq!(monomials(0), vec![[0, 0, 0]]);
        assert_eq!(monomials(1), vec![[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        assert_eq!(monomials(2)[..4], [[2, 0, 0], [1, 1, 0], [1, 0, 1], [0, 2, 0]]);
        for d in 0..6 {
            assert_eq!(monomials(d).len(), forms_dimension(d as i64));
        }
        assert_eq!(forms_dimension(-1), 0);
    }

    #[test]
    fn h0_examples() {
        let x = one_point();
        assert_eq!(h0_twisted(&x, 0).unwrap(), 0);
        assert_eq!(h0_twisted(&x, 1).unwrap(), 2);
        assert_eq!(h0_twisted(&x, 2).unwrap(), 5);
        assert_eq!(h0_twisted(&x, -1).unwrap(), 0);
        assert_eq!(h0_twisted(&x, 9), Err(Error::TwistTooLarge { n: 9, cap: 8 }));
        assert_eq!(h0_twisted_with_cap(&x, 9, 9).unwrap(), forms_dimension(9) - 1);

        // trivial bundle of rank r: h0 = r·dim S^n
        assert_eq!(h0_twisted(&AdhmDatum::zero(0, 3), 2).unwrap(), 18);

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..3 {
            let pair = strata::sample_commuting(2, &mut rng).to_datum();
            for n in 0..=3 {
                assert_eq!(h0_twisted(&pair, n).unwrap(), 0);
                assert_eq!(h1_twisted(&pair, n).unwrap(), 2);
            }
        }
    }

    #[test]
    fn invariants_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let x = strata::sample_stable(2, 3, &mut rng).unwrap();
        assert_eq!(perverse_invariants(&x).unwrap(), PerverseInvariants { rank: 2, charge: 3, length: 0 });
        assert_eq!(perverse_invariants(&AdhmDatum::zero(1, 1)).unwrap(), PerverseInvariants { rank: 1, charge: 0, length: 1 });
        assert_eq!(perverse_invariants(&diagonal_pair_datum()).unwrap(), PerverseInvariants { rank: 1, charge: 0, length: 2 });
        assert_eq!(perverse_invariants(&x).unwrap().chern_character(), (2, 3));
    }

    #[test]
    fn euler_examples() {
        assert_eq!(euler_characteristic(&one_point(), 0), 0);
        assert_eq!(euler_characteristic(&regular_c1(), 1), 5);
        assert_eq!(euler_characteristic(&AdhmDatum::zero(0, 2), 3), 20);
        for n in -4..8 {
            for (c, r) in [(0, 1), (1, 1), (3, 2), (5, 4)] {
                assert_eq!(euler_characteristic(&AdhmDatum::zero(c, r), n), euler_characteristic_termwise(c, r, n));
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn product_is_mu_times_z_squared(seed in any::<u64>(), c in 0usize..4, r in 0usize..3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = AdhmDatum::random(c, r, 3, &mut rng);
            let coeffs = monad_matrices(&x).product_coefficients();
            for k in 0..5 {
                prop_assert!(coeffs[k].is_zero());
            }
            prop_assert_eq!(&coeffs[5], &x.mu());
        }

        #[test]
        fn fiber_evaluation_is_linear_in_forms(seed in any::<u64>(), c in 1usize..4, r in 1usize..3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = AdhmDatum::random(c, r, 3, &mut rng);
            let v = random_matrix(3, 1, 5, &mut rng);
            prop_assume!(!v.is_zero());
            let p = PointP2::new(v[(0, 0)].clone(), v[(1, 0)].clone(), v[(2, 0)].clone()).unwrap();
            let mm = monad_matrices(&x);
            let alpha = mm.alpha_at(&p);
            let expected = Matrix::vstack(c, &[
                &(&x.a().scale(p.z()) + &Matrix::scalar_multiple_of_identity(c, p.x())),
                &(&x.b().scale(p.z()) + &Matrix::scalar_multiple_of_identity(c, p.y())),
                &x.j().scale(p.z()),
            ]);
            prop_assert_eq!(alpha, expected);
            // β_P α_P = z²·μ pointwise
            let prod = &mm.beta_at(&p) * &mm.alpha_at(&p);
            prop_assert_eq!(prod, x.mu().scale(&(p.z() * p.z())));
        }

        #[test]
        fn generic_fibers_of_solutions(seed in any::<u64>(), r in 1usize..3, c in 0usize..4, s_frac in 0usize..=4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = s_frac.min(c);
            let x = strata::sample_stratum(r, c, s, &mut rng).unwrap().datum;
            let support = singular_support(&x).unwrap();
            let locus = non_costable_locus(&x).unwrap();
            prop_assert_eq!(locus.is_empty(), x.is_costable());
            prop_assert_eq!(support.total_multiplicity(), c - s);
            for _ in 0..4 {
                let v = random_matrix(2, 1, 50, &mut rng);
                let p = PointP2::affine(v[(0, 0)].clone(), v[(1, 0)].clone());
                prop_assume!(!support.points.iter().any(|sp| sp.point() == p));
                prop_assume!(!locus.points.iter().any(|sp| sp.point() == p));
                let f = evaluate_fiber(&x, &p).unwrap();
                prop_assert_eq!((f.h0_fiber, f.h1_fiber), (r, 0));
                prop_assert!(f.alpha_injective);
            }
        }
    }
}
