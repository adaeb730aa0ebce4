//! The two-parameter family of `c = r = 2` data with
//!
//! ```text
//! A = [a1 a2]   B = [b1 b2]   I = [i1 i2]   J = [0 j2]
//!     [0  a3]       [0  b3]       [0  0 ]       [0 j4]
//! ```
//!
//! used to separate the classes stable/costable, sj and ts.

use crate::classify::{classify, jacobian_rank, stabilizer_lie, stabilizer_nontrivial_witness, ClassificationReport};
use crate::datum::AdhmDatum;
use crate::ratmat::{int, Matrix, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RemarkParameters {
    pub a1: Scalar,
    pub a2: Scalar,
    pub a3: Scalar,
    pub b1: Scalar,
    pub b2: Scalar,
    pub b3: Scalar,
    pub i1: Scalar,
    pub i2: Scalar,
    pub j2: Scalar,
    pub j4: Scalar,
}

impl RemarkParameters {
    #[allow(clippy::too_many_arguments)]
    pub fn from_i64(a1: i64, a2: i64, a3: i64, b1: i64, b2: i64, b3: i64, i1: i64, i2: i64, j2: i64, j4: i64) -> Self {
        Self {
            a1: int(a1),
            a2: int(a2),
            a3: int(a3),
            b1: int(b1),
            b2: int(b2),
            b3: int(b3),
            i1: int(i1),
            i2: int(i2),
            j2: int(j2),
            j4: int(j4),
        }
    }

    /// `a1 ≠ a3`, `b1 ≠ b3`, `i1 ≠ 0`, `j4 ≠ 0`; `a2 = 0` and `b2` solves
    /// the relation.
    pub fn first_family() -> Self {
        Self::from_i64(1, 0, 0, 1, -2, 0, 1, 1, 1, 1)
    }

    /// `a1 = a3`, `b1 = b3`, all of `i1, i2, j2, j4, a1, b1` nonzero.
    pub fn second_family() -> Self {
        Self::from_i64(1, 1, 1, 1, 1, 1, 1, 1, 1, -1)
    }

    /// The only entry of `μ` that is not identically zero:
    /// `(a1 − a3)·b2 − (b1 − b3)·a2 + i1·j2 + i2·j4`.
    pub fn relation(&self) -> Scalar {
        (&self.a1 - &self.a3) * &self.b2 - (&self.b1 - &self.b3) * &self.a2 + &self.i1 * &self.j2 + &self.i2 * &self.j4
    }

    pub fn datum(&self) -> AdhmDatum {
        let z = Scalar::from_integer(0.into());
        let m = |rows: [[&Scalar; 2]; 2]| {
            Matrix::from_rows(rows.iter().map(|r| r.iter().map(|x| (*x).clone()).collect()).collect(), 2).expect("2x2")
        };
        AdhmDatum::new(
            2,
            2,
            m([[&self.a1, &self.a2], [&z, &self.a3]]),
            m([[&self.b1, &self.b2], [&z, &self.b3]]),
            m([[&self.i1, &self.i2], [&z, &z]]),
            m([[&z, &self.j2], [&z, &self.j4]]),
        )
        .expect("shapes are fixed")
    }
}

#[derive(Clone, Debug)]
pub struct RemarkReport {
    pub label: String,
    pub datum: AdhmDatum,
    pub relation_value: Scalar,
    pub mu_vanishes: bool,
    pub jacobian_rank: usize,
    pub stabilizer_basis: Vec<Matrix>,
    pub witness: Option<Matrix>,
    pub classification: ClassificationReport,
}

pub fn remark_report(label: &str, params: &RemarkParameters) -> RemarkReport {
    let x = params.datum();
    let lie = stabilizer_lie(&x);
    let stabilizer_basis = (0..lie.dim())
        .map(|k| Matrix::unflatten(lie.basis().column(k).entries(), 2, 2))
        .collect();
    RemarkReport {
        label: label.into(),
        relation_value: params.relation(),
        mu_vanishes: x.is_solution(),
        jacobian_rank: jacobian_rank(&x),
        stabilizer_basis,
        witness: stabilizer_nontrivial_witness(&x),
        classification: classify(&x),
        datum: x,
    }
}

/// Reports for both families, first family first.
pub fn remark_experiment() -> Vec<RemarkReport> {
    vec![
        remark_report("first-family", &RemarkParameters::first_family()),
        remark_report("second-family", &RemarkParameters::second_family()),
    ]
}
