//! Splitting a stable solution into a regular datum and a cloud of points.
//!
//! In a basis whose first `k` vectors span `Υ_X`:
//!
//! ```text
//! A = [A1 A2]   B = [B1 B2]   I = [I1]   J = [0 J2]
//!     [0  A3]       [0  B3]       [I2]
//! ```
//!
//! `(A1, B1)` commute and give the cloud; `(A3, B3, I2, J2)` is regular.

use crate::datum::{AdhmDatum, CommutingPair};
use crate::error::{Error, Result};
use crate::monad::spectrum::{characteristic_polynomial, Poly};
use crate::monad::{support_of_pair, Support, SupportPoint};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UhlenbeckImage {
    pub regular_part: AdhmDatum,
    pub cloud: CommutingPair,
    /// Joint spectrum of the cloud with signs flipped.
    pub points: Support,
}

/// Conjugation-invariant summary of an image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fingerprint {
    pub r: usize,
    pub s_prime: usize,
    /// Characteristic polynomials of the two cloud matrices.
    pub cloud_polynomials: (Poly, Poly),
    pub points: Vec<SupportPoint>,
}

pub fn uhlenbeck_image(x: &AdhmDatum) -> Result<UhlenbeckImage> {
    x.require_solution()?;
    if !x.is_stable() {
        return Err(Error::NotStable);
    }
    let upsilon = x.costabilizing_subspace();
    let k = upsilon.dim();
    let (c, r) = (x.c(), x.r());
    let s_prime = c - k;
    let basis = upsilon.adapted_basis();
    let inv = basis.inverse().expect("adapted basis is invertible");
    let adapted = x.act(&inv).expect("inverse of an invertible matrix");
    debug_assert!(adapted.j().block(0, 0, r, k).is_zero());

    let cloud = CommutingPair::new(adapted.a().block(0, 0, k, k), adapted.b().block(0, 0, k, k))?;
    let regular_part = AdhmDatum::new(
        s_prime,
        r,
        adapted.a().block(k, k, s_prime, s_prime),
        adapted.b().block(k, k, s_prime, s_prime),
        adapted.i().block(k, 0, s_prime, r),
        adapted.j().block(0, k, r, s_prime),
    )?;
    let points = support_of_pair(&cloud);
    Ok(UhlenbeckImage {
        regular_part,
        cloud,
        points,
    })
}

pub fn uhlenbeck_invariants(img: &UhlenbeckImage) -> Fingerprint {
    Fingerprint {
        r: img.regular_part.r(),
        s_prime: img.regular_part.c(),
        cloud_polynomials: (
            characteristic_polynomial(img.cloud.p()),
            characteristic_polynomial(img.cloud.q()),
        ),
        points: img.points.points.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::classify;
    use crate::ratmat::{int, Matrix, Scalar};
    use crate::strata;
    use num_traits::{One, Zero};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_i64(rows)
    }

    #[test]
    fn regular_input_is_fixed() {
        let x = AdhmDatum::new(1, 2, m(&[&[0]]), m(&[&[0]]), m(&[&[1, 0]]), m(&[&[0], &[1]])).unwrap();
        let img = uhlenbeck_image(&x).unwrap();
        assert_eq!(img.regular_part, x);
        assert_eq!(img.cloud.n(), 0);
        assert!(img.points.is_empty());
        let fp = uhlenbeck_invariants(&img);
        assert_eq!((fp.r, fp.s_prime), (2, 1));
        assert!(fp.points.is_empty());
    }

    #[test]
    fn one_point_example() {
        let x = AdhmDatum::new(1, 1, m(&[&[0]]), m(&[&[0]]), m(&[&[1]]), m(&[&[0]])).unwrap();
        let img = uhlenbeck_image(&x).unwrap();
        assert_eq!(img.regular_part.c(), 0);
        assert_eq!(img.cloud.p(), &m(&[&[0]]));
        assert_eq!(img.points.points, vec![SupportPoint { p: int(0), q: int(0), multiplicity: 1 }]);
        let fp = uhlenbeck_invariants(&img);
        let t: Poly = vec![Scalar::zero(), Scalar::one()];
        assert_eq!(fp.cloud_polynomials, (t.clone(), t));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(uhlenbeck_image(&AdhmDatum::zero(1, 1)), Err(Error::NotStable));
        let bad = AdhmDatum::new(1, 1, m(&[&[0]]), m(&[&[0]]), m(&[&[1]]), m(&[&[1]])).unwrap();
        assert_eq!(uhlenbeck_image(&bad), Err(Error::NotSolution));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn image_properties(seed in any::<u64>(), r in 1usize..4, c in 0usize..4, cloud in 0usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let cloud = cloud.min(c);
            let x = strata::sample_stable_with_cloud(r, c, cloud, &mut rng).unwrap();
            let x = strata::conjugate_randomly(&x, &mut rng);
            let img = uhlenbeck_image(&x).unwrap();
            prop_assert_eq!(img.regular_part.c() + img.cloud.n(), c);
            prop_assert!(classify(&img.regular_part).regular);
            prop_assert_eq!(img.points.total_multiplicity(), img.cloud.n());
            prop_assert!(img.points.points.iter().all(|p| !p.point().on_infinity()));

            let again = uhlenbeck_image(&img.regular_part).unwrap();
            prop_assert_eq!(&again.regular_part, &img.regular_part);
            prop_assert_eq!(again.cloud.n(), 0);

            let fp = uhlenbeck_invariants(&img);
            for _ in 0..3 {
                let y = strata::conjugate_randomly(&x, &mut rng);
                prop_assert_eq!(&uhlenbeck_invariants(&uhlenbeck_image(&y).unwrap()), &fp);
            }
        }
    }
}
