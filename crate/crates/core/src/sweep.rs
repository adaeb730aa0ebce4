//! The acceptance sweep: fourteen seeded, exact checks over sampled data.
//!
//! Every criterion draws from its own generator, seeded from the sweep
//! seed and the criterion number, so criteria can run in any order or in
//! parallel and still see the same data.

use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::{classify, jacobian_rank};
use crate::datum::{AdhmDatum, CommutingPair};
use crate::experiments::{remark_experiment, RemarkReport};
use crate::monad::spectrum::{characteristic_polynomial, rational_roots};
use crate::monad::{
    forms_dimension, h0_twisted, monad_matrices, non_costable_locus, rank_drop_points, singular_support,
    twisted_sections, PointP2, DEFAULT_TWIST_CAP,
};
use crate::ratmat::{int, random_matrix, Matrix, Scalar, Subspace};
use crate::strata::{
    conjugate_randomly, dimension_audit, fiber_map, random_unimodular, sample_commuting, sample_stable,
    sample_stable_with_cloud, sample_stratum,
};
use crate::uhlenbeck::{uhlenbeck_image, uhlenbeck_invariants};

pub const CRITERIA: usize = 14;

const MAX_REPORTED_FAILURES: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub seed: u64,
    /// Samples per configuration for the stratum-wide criteria.
    pub samples: usize,
    /// Bounds on `(r, c)` for the stratum-wide criteria.
    pub rmax: usize,
    pub cmax: usize,
    /// Unstructured random data for the identity and duality checks.
    pub random_data: usize,
    /// Samples per stratum for the twisted-section comparisons.
    pub section_samples: usize,
    /// Samples per stratum for the support checks.
    pub support_samples: usize,
    /// Stable samples per `(r, c)` for the decomposition checks.
    pub uhlenbeck_samples: usize,
    pub conjugations: usize,
    /// Random points per solution for fiber injectivity.
    pub fiber_points: usize,
}

impl SweepConfig {
    /// The full scale: `c ≤ 5`, `r ≤ 4`, 50 samples per configuration.
    pub fn full(seed: u64) -> Self {
        Self {
            seed,
            samples: 50,
            rmax: 4,
            cmax: 5,
            random_data: 100,
            section_samples: 20,
            support_samples: 20,
            uhlenbeck_samples: 10,
            conjugations: 10,
            fiber_points: 20,
        }
    }

    /// A small configuration for smoke tests.
    pub fn quick(seed: u64) -> Self {
        Self {
            seed,
            samples: 4,
            rmax: 2,
            cmax: 3,
            random_data: 20,
            section_samples: 2,
            support_samples: 3,
            uhlenbeck_samples: 2,
            conjugations: 2,
            fiber_points: 5,
        }
    }

    fn rng(&self, criterion: usize) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ (criterion as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionOutcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub checks: usize,
    pub failures: Vec<String>,
    /// Free-form findings that are reported but not asserted.
    pub notes: Vec<String>,
    pub elapsed: Duration,
}

#[derive(Default)]
struct Tally {
    checks: usize,
    failed: usize,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_REPORTED_FAILURES {
                self.failures.push(what());
            }
        }
    }

    fn error(&mut self, err: impl std::fmt::Display) {
        self.check(false, || err.to_string());
    }
}

pub fn criterion_name(id: usize) -> &'static str {
    match id {
        1 => "dimension formula audit",
        2 => "smoothness at stable points",
        3 => "stabilizing subspace is the image of R",
        4 => "fiber map surjectivity",
        5 => "stratum sampler correctness",
        6 => "monad identity",
        7 => "sections agree with the stable restriction",
        8 => "singular support and length",
        9 => "costability and injectivity of alpha",
        10 => "star duality",
        11 => "Uhlenbeck decomposition",
        12 => "two-parameter family experiment",
        13 => "Hilbert function of one point",
        14 => "c = 1 quadric reduction",
        _ => panic!("no criterion {id}"),
    }
}

pub fn run_criterion(id: usize, config: &SweepConfig) -> CriterionOutcome {
    let start = Instant::now();
    let mut rng = config.rng(id);
    let mut t = Tally::default();
    match id {
        1 => dimension_formula(&mut t),
        2 => smoothness(config, &mut rng, &mut t),
        3 => stabilizing_image(config, &mut rng, &mut t),
        4 => fiber_surjectivity(config, &mut rng, &mut t),
        5 => sampler_correctness(config, &mut rng, &mut t),
        6 => monad_identity(config, &mut rng, &mut t),
        7 => sections_restriction(config, &mut rng, &mut t),
        8 => support_and_length(config, &mut rng, &mut t),
        9 => costability(config, &mut rng, &mut t),
        10 => duality(config, &mut rng, &mut t),
        11 => uhlenbeck(config, &mut rng, &mut t),
        12 => remark_family(&mut t),
        13 => hilbert_function(&mut t),
        14 => quadric(config, &mut rng, &mut t),
        _ => panic!("no criterion {id}"),
    }
    CriterionOutcome {
        id,
        name: criterion_name(id),
        passed: t.failed == 0 && t.checks > 0,
        checks: t.checks,
        failures: t.failures,
        notes: t.notes,
        elapsed: start.elapsed(),
    }
}

/// All criteria, in order, each on its own thread.
pub fn run_all(config: &SweepConfig) -> Vec<CriterionOutcome> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = (1..=CRITERIA)
            .map(|id| scope.spawn(move || run_criterion(id, config)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("criterion panicked")).collect()
    })
}

fn strata_configs(rmax: usize, cmax: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (1..=rmax).flat_map(move |r| (0..=cmax).flat_map(move |c| (0..=c).map(move |s| (r, c, s))))
}

/// `per` conjugated samples of every stratum with `r ≤ rmax`, `c ≤ cmax`.
fn stratum_pool(
    rmax: usize,
    cmax: usize,
    per: usize,
    rng: &mut ChaCha8Rng,
    t: &mut Tally,
) -> Vec<((usize, usize, usize), AdhmDatum)> {
    let mut out = Vec::new();
    for (r, c, s) in strata_configs(rmax, cmax) {
        for _ in 0..per {
            match sample_stratum(r, c, s, rng) {
                Ok(sample) => out.push(((r, c, s), conjugate_randomly(&sample.datum, rng))),
                Err(e) => t.error(format!("sample_stratum({r},{c},{s}): {e}")),
            }
        }
    }
    out
}

fn dimension_formula(t: &mut Tally) {
    for row in dimension_audit(5, 6) {
        t.check(row.agrees(), || format!("{row:?}"));
    }
}

fn smoothness(config: &SweepConfig, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for r in 1..=3 {
        for c in 0..=4 {
            for k in 0..config.samples {
                let x = if k % 2 == 0 {
                    sample_stable(r, c, rng)
                } else {
                    let cloud = rng.gen_range(0..=c);
                    sample_stable_with_cloud(r, c, cloud, rng)
                };
                let x = match x {
                    Ok(x) => conjugate_randomly(&x, rng),
                    Err(e) => {
                        t.error(e);
                        continue;
                    }
                };
                let rank = jacobian_rank(&x);
                t.check(x.is_stable() && x.is_solution(), || format!("({r},{c}) sample not a stable solution"));
                t.check(rank == c * c, || format!("({r},{c}) rank {rank}"));
                let tangent = 2 * c * c + 2 * r * c - rank;
                t.check(tangent == 2 * r * c + c * c, || format!("({r},{c}) tangent {tangent}"));
            }
        }
    }
}

fn stabilizing_image(config: &SweepConfig, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for ((r, c, s), x) in stratum_pool(config.rmax, config.cmax, config.samples, rng, t) {
        let sigma = x.stabilizing_subspace();
        let image = Subspace::span(&x.r_map());
        t.check(sigma.same_as(&image), || format!("({r},{c},{s}) closure differs from im R"));
        t.check(x.is_stable() == (x.r_map().rank() == c), || format!("({r},{c},{s}) stability vs rank R"));
    }
}

fn fiber_surjectivity(config: &SweepConfig, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for (r, c, s) in strata_configs(config.rmax, config.cmax) {
        for _ in 0..config.samples {
            let x1 = match sample_stable(r, s, rng) {
                Ok(x1) => conjugate_randomly(&x1, rng),
                Err(e) => {
                    t.error(e);
                    continue;
                }
            };
            let g = random_unimodular(c - s, rng);
            let pair = sample_commuting(c - s, rng).conjugate(&g).expect("unimodular");
            match fiber_map(&x1, &pair) {
                Ok(phi) => {
                    let rank = phi.rank();
                    t.check(rank == s * (c - s), || format!("({r},{c},{s}) fiber rank {rank}"));
                }
                Err(e) => t.error(e),
            }
        }
    }
}

fn sampler_correctness(config: &SweepConfig, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for (r, c, s) in strata_configs(config.rmax, config.cmax) {
        for _ in 0..config.samples {
            match sample_stratum(r, c, s, rng) {
                Ok(sample) => {
                    let x = sample.datum;
                    t.check(x.is_solution(), || format!("({r},{c},{s}) mu != 0"));
                    let dim = x.stabilizing_subspace().dim();
                    t.check(dim == s, || format!("({r},{c},{s}) dim Sigma = {dim}"));
                }
                Err(e) => t.error(e),
            }
        }
    }
}

fn sparse_random(c: usize, r: usize, rng: &mut ChaCha8Rng) -> AdhmDatum {
    let mut pick = |rows: usize, cols: usize| {
        let dense = random_matrix(rows, cols, 3, rng);
        let mask = random_matrix(rows, cols, 1, rng);
        Matrix::from_fn(rows, cols, |i, j| {
            if mask[(i, j)].is_zero() {
                dense[(i, j)].clone()
            } else {
                Scalar::zero()
            }
        })
    };
    let (a, b, i, j) = (pick(c, c), pick(c, c), pick(c, r), pick(r, c));
    AdhmDatum::new(c, r, a, b, i, j).expect("shapes match")
}

fn monad_identity(config: &SweepConfig, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for k in 0..config.random_data {
        let c = rng.gen_range(0..=config.cmax);
        let r = rng.gen_range(0..=config.rmax);
        let x = if k % 2 == 0 { AdhmDatum::random(c, r, 4, rng) } else { sparse_random(c, r, rng) };
        let coeffs = monad_matrices(&x).product_coefficients();
        t.check(coeffs[..5].iter().all(Matrix::is_zero), || format!("({r},{c}) cross terms do not cancel"));
        t.check(coeffs[5] == x.mu(), || format!("({r},{c}) z^2 coefficient is not mu"));
    }
    for ((r, c, s), x) in stratum_pool(config.rmax, config.cmax, config.samples, rng, t) {
        let coeffs = monad_matrices(&x).product_coefficients();
        t.check(coeffs.iter().all(Matrix::is_zero), || format!("({r},{c},{s}) beta alpha != 0"));
    }
}

fn sections_restriction(config: &SweepConfig, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for ((r, c, s), x) in stratum_pool(2, 3, config.section_samples, rng, t) {
        let restriction = x.stable_restriction();
        for n in 0..=3 {
            match (h0_twisted(&x, n), h0_twisted(&restriction, n)) {
                (Ok(a), Ok(b)) => t.check(a == b, || format!("({r},{c},{s}) n={n}: {a} vs {b}")),
                (Err(e), _) | (_, Err(e)) => t.error(e),
            }
        }
    }
}

/// Local lengths of a commuting pair from one linear form that separates
/// the given joint eigenvalues: the multiplicity of `p + t·q` as a root of
/// the characteristic polynomial of `P + t·Q`.
fn lengths_by_separation(pair: &CommutingPair, eigenvalues: &[(Scalar, Scalar)]) -> Option<Vec<usize>> {
    let n = pair.n();
    for t in 0..=(n * n + 1) as i64 {
        let t = int(t);
        let values: Vec<Scalar> = eigenvalues.iter().map(|(p, q)| p + &t * q).collect();
        let mut sorted = values.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != values.len() {
            continue;
        }
        let h = pair.p() + &pair.q().scale(&t);
        let (roots, _) = rational_roots(&characteristic_polynomial(&h));
        return Some(
            values
                .iter()
                .map(|v| roots.iter().find(|(root, _)| root == v).map_or(0, |(_, m)| *m))
                .collect(),
        );
    }
    None
}

fn support_and_length(config: &SweepConfig, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for ((r, c, s), x) in stratum_pool(config.rmax, config.cmax, config.support_samples, rng, t) {
        let l = c - s;
        let (support, quotient) = match (singular_support(&x), x.quotient_representation()) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                t.error(e);
                continue;
            }
        };
        let tag = format!("({r},{c},{s})");
        t.check(support.is_complete(), || format!("{tag} irrational quotient spectrum"));
        t.check(support.total_multiplicity() == l, || format!("{tag} multiplicities sum to {}", support.total_multiplicity()));

        let points: Vec<(Scalar, Scalar)> = support.points.iter().map(|p| (p.p.clone(), p.q.clone())).collect();
        let drops = rank_drop_points(&quotient);
        t.check(drops.as_ref() == Some(&points), || format!("{tag} support {points:?} vs rank drops {drops:?}"));

        let eigen: Vec<(Scalar, Scalar)> = points.iter().map(|(p, q)| (-p, -q)).collect();
        let lengths = lengths_by_separation(&quotient, &eigen);
        let expected: Vec<usize> = support.points.iter().map(|p| p.multiplicity).collect();
        t.check(lengths.as_ref() == Some(&expected), || format!("{tag} local lengths {lengths:?} vs {expected:?}"));

        let zq = quotient.to_datum();
        for n in 0..=3 {
            match twisted_sections(&zq, n, DEFAULT_TWIST_CAP) {
                Ok((h0, h1)) => {
                    t.check(h0 == 0, || format!("{tag} quotient h0({n}) = {h0}"));
                    t.check(h1 == l, || format!("{tag} quotient h1({n}) = {h1}"));
                }
                Err(e) => t.error(e),
            }
        }
    }
}

fn costability(config: &SweepConfig, rng: &mut ChaCha8Rng, t: &mut Tally) {
    let infinity = [
        PointP2::new(int(1), int(0), int(0)).unwrap(),
        PointP2::new(int(0), int(1), int(0)).unwrap(),
        PointP2::new(int(1), int(1), int(0)).unwrap(),
    ];
    for ((r, c, s), x) in stratum_pool(config.rmax, config.cmax, config.samples, rng, t) {
        let tag = format!("({r},{c},{s})");
        let locus = match non_costable_locus(&x) {
            Ok(locus) => locus,
            Err(e) => {
                t.error(e);
                continue;
            }
        };
        t.check(locus.is_empty() == x.is_costable(), || format!("{tag} locus vs costability"));
        t.check(locus.is_complete(), || format!("{tag} irrational spectrum on the costabilizing subspace"));
        let mm = monad_matrices(&x);
        for sp in &locus.points {
            let rank = mm.alpha_at(&sp.point()).rank();
            t.check(rank < c, || format!("{tag} alpha injective at reported {sp}"));
        }
        let mut generic = Vec::new();
        while generic.len() < config.fiber_points {
            let v = random_matrix(3, 1, 1000, rng);
            if v[(2, 0)].is_zero() {
                continue;
            }
            let p = PointP2::new(v[(0, 0)].clone(), v[(1, 0)].clone(), v[(2, 0)].clone()).unwrap();
            if locus.points.iter().any(|sp| sp.point() == p) {
                continue;
            }
            generic.push(p);
        }
        for p in infinity.iter().chain(&generic) {
            let rank = mm.alpha_at(p).rank();
            t.check(rank == c, || format!("{tag} alpha not injective at {p}"));
        }
    }
}

fn duality(config: &SweepConfig, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for k in 0..config.random_data {
        let c = rng.gen_range(0..=config.cmax);
        let r = rng.gen_range(0..=config.rmax);
        let x = match k % 4 {
            0 => AdhmDatum::random(c, r, 3, rng),
            1 => sparse_random(c, r, rng),
            2 if r > 0 => {
                let s = rng.gen_range(0..=c);
                conjugate_randomly(&sample_stratum(r, c, s, rng).expect("r > 0").datum, rng)
            }
            3 if r > 0 => {
                let cloud = rng.gen_range(0..=c);
                sample_stable_with_cloud(r, c, cloud, rng).expect("r > 0")
            }
            _ => AdhmDatum::zero(c, r),
        };
        let star = x.star();
        t.check(star.star() == x.negated(), || format!("({r},{c}) star twice is not negation"));
        t.check(x.is_stable() == star.is_costable(), || format!("({r},{c}) stable vs star costable"));
        let (up, sig) = (x.costabilizing_subspace().dim(), star.stabilizing_subspace().dim());
        t.check(up == c - sig, || format!("({r},{c}) dim Upsilon {up} vs c - dim Sigma(star) {}", c - sig));
    }
}

fn uhlenbeck(config: &SweepConfig, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for r in 1..=config.rmax {
        for c in 0..=config.cmax {
            for _ in 0..config.uhlenbeck_samples {
                let cloud = rng.gen_range(0..=c);
                let x = match sample_stable_with_cloud(r, c, cloud, rng) {
                    Ok(x) => conjugate_randomly(&x, rng),
                    Err(e) => {
                        t.error(e);
                        continue;
                    }
                };
                let tag = format!("({r},{c},cloud {cloud})");
                let img = match uhlenbeck_image(&x) {
                    Ok(img) => img,
                    Err(e) => {
                        t.error(format!("{tag}: {e}"));
                        continue;
                    }
                };
                let size = img.regular_part.c() + img.cloud.n();
                t.check(size == c, || format!("{tag} charge {size}"));
                t.check(classify(&img.regular_part).regular, || format!("{tag} regular part not regular"));
                t.check(
                    img.points.is_complete() && img.points.total_multiplicity() == img.cloud.n(),
                    || format!("{tag} cloud spectrum"),
                );
                t.check(img.points.points.iter().all(|p| !p.point().on_infinity()), || format!("{tag} point at infinity"));
                match uhlenbeck_image(&img.regular_part) {
                    Ok(again) => t.check(
                        again.regular_part == img.regular_part && again.cloud.n() == 0,
                        || format!("{tag} not idempotent"),
                    ),
                    Err(e) => t.error(e),
                }
                let fp = uhlenbeck_invariants(&img);
                for _ in 0..config.conjugations {
                    let y = conjugate_randomly(&x, rng);
                    let same = uhlenbeck_image(&y).map(|img| uhlenbeck_invariants(&img) == fp);
                    t.check(same == Ok(true), || format!("{tag} fingerprint changed under conjugation"));
                }
            }
        }
    }
}

fn describe(rep: &RemarkReport) -> String {
    let c = &rep.classification;
    format!(
        "{}: mu=0 {}, stable {}, costable {}, sj {}, jacobian rank {}, stabilizer dim {}, witness {}, ts {}",
        rep.label,
        rep.mu_vanishes,
        c.stable,
        c.costable,
        c.sj,
        rep.jacobian_rank,
        rep.stabilizer_basis.len(),
        rep.witness.as_ref().map_or("none".to_string(), |g| g.to_string()),
        c.ts
    )
}

fn remark_family(t: &mut Tally) {
    let reports = remark_experiment();
    let first = &reports[0];
    let c = &first.classification;
    t.check(first.mu_vanishes, || "first family is not a solution".into());
    t.check(!c.stable && !c.costable && c.sj, || describe(first));
    let second = &reports[1];
    t.check(second.mu_vanishes, || "second family is not a solution".into());
    t.check(second.stabilizer_basis.len() == second.classification.stabilizer_dim, || describe(second));
    t.notes.extend(reports.iter().map(describe));
}

/// Degree-`n` forms vanishing at a point: `dim S^n − rank` of the
/// evaluation row, computed directly from the monomials.
fn forms_vanishing_at(point: [i64; 3], n: usize) -> usize {
    let mut values = Vec::new();
    for a in 0..=n {
        for b in 0..=n - a {
            let e = [a, b, n - a - b];
            let v: i64 = (0..3).map(|k| point[k].pow(e[k] as u32)).product();
            values.push(int(v));
        }
    }
    let total = values.len();
    total - Matrix::new(1, total, values).expect("row").rank()
}

fn hilbert_function(t: &mut Tally) {
    let x = AdhmDatum::new(
        1,
        1,
        Matrix::zeros(1, 1),
        Matrix::zeros(1, 1),
        Matrix::identity(1),
        Matrix::zeros(1, 1),
    )
    .expect("1x1");
    t.check(x.is_stable() && !x.is_costable(), || "datum is not stable and non-costable".into());
    let expected = [0usize, 2, 5];
    for (n, want) in expected.iter().enumerate() {
        let got = h0_twisted(&x, n as i64);
        let oracle = forms_vanishing_at([0, 0, 1], n);
        t.check(got == Ok(*want), || format!("n={n}: h0 {got:?}, expected {want}"));
        t.check(oracle == *want, || format!("n={n}: interpolation oracle {oracle}"));
        t.check(forms_dimension(n as i64) - 1 == *want, || format!("n={n}: dim S^n - 1"));
    }
}

fn quadric(config: &SweepConfig, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for _ in 0..config.random_data {
        let r = rng.gen_range(0..=config.rmax);
        let x = AdhmDatum::random(1, r, 9, rng);
        let sum: Scalar = (0..r).map(|k| &x.i()[(0, k)] * &x.j()[(k, 0)]).sum();
        let mu = x.mu();
        t.check(mu.shape() == (1, 1) && mu[(0, 0)] == sum, || format!("r={r}: mu {mu} vs {sum}"));
    }
}
