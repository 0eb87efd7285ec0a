//! Brute-force solver for the fixed points of `ν ∗ μ_Y = ν`.
//!
//! Writes the random-walk kernel `P(x, z) = μ_Y(z − x)` as an explicit matrix
//! and solves `ν (P − I) = 0`, `Σ ν = 1` by exact Gaussian elimination. Nothing
//! here uses characters, kernels or subgroups, so it can falsify the analytic
//! route in [`crate::analysis`].

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::measure::Distribution;
use crate::Rational;

/// Largest group order the oracle accepts.
pub const ORACLE_MAX_ORDER: u64 = 64;

/// An affine subspace `{p + Σ t_i d_i}` of rational vectors in canonical form.
///
/// The directions are the reduced row echelon basis of the direction space and
/// the base point has zeros in every pivot column, so two affine sets are equal
/// exactly when their canonical forms are equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSet {
    particular: Vec<Rational>,
    directions: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl AffineSet {
    pub fn new(particular: Vec<Rational>, mut directions: Vec<Vec<Rational>>) -> Self {
        let n = particular.len();
        let pivots = linalg::rref(&mut directions, n);
        let mut particular = particular;
        for (row, &p) in directions.iter().zip(&pivots) {
            let f = particular[p].clone();
            if !f.is_zero() {
                for (v, d) in particular.iter_mut().zip(row) {
                    *v -= &f * d;
                }
            }
        }
        AffineSet { particular, directions, pivots }
    }

    pub fn particular(&self) -> &[Rational] {
        &self.particular
    }

    pub fn directions(&self) -> &[Vec<Rational>] {
        &self.directions
    }

    pub fn affine_dimension(&self) -> usize {
        self.directions.len()
    }

    pub fn contains(&self, point: &[Rational]) -> bool {
        if point.len() != self.particular.len() {
            return false;
        }
        let mut diff: Vec<Rational> = point.iter().zip(&self.particular).map(|(a, b)| a - b).collect();
        for (row, &p) in self.directions.iter().zip(&self.pivots) {
            let f = diff[p].clone();
            if !f.is_zero() {
                for (v, d) in diff.iter_mut().zip(row) {
                    *v -= &f * d;
                }
            }
        }
        diff.iter().all(Zero::is_zero)
    }
}

/// The exact affine set of solutions of `ν (P − I) = 0`, `Σ ν = 1`.
///
/// Its affine dimension is the number of linearly independent fixed laws minus
/// one. Intersecting with the simplex does not change the affine hull because
/// the uniform law is a strictly positive solution.
pub fn oracle_fixed_points(mu_y: &Distribution) -> Result<AffineSet> {
    let spec = mu_y.spec();
    if spec.order() > ORACLE_MAX_ORDER {
        return Err(Error::ScaleExceeded { order: spec.order(), limit: ORACLE_MAX_ORDER });
    }
    let n = spec.len();
    let elements: Vec<_> = spec.elements().collect();
    // Row z of the system: Σ_x ν(x) (P(x, z) − [x = z]) = 0.
    let mut a = Vec::with_capacity(n + 1);
    for z in &elements {
        let row = elements
            .iter()
            .map(|x| {
                let step = spec.sub(z, x).expect("member");
                let mut v = mu_y.prob(&step).expect("member").clone();
                if x == z {
                    v -= Rational::one();
                }
                v
            })
            .collect::<Vec<_>>();
        a.push(row);
    }
    a.push(vec![Rational::one(); n]);
    let mut b = vec![Rational::zero(); n];
    b.push(Rational::one());
    let (particular, directions) = linalg::affine_solutions(&a, &b, n)
        .ok_or_else(|| Error::TheoremViolation("no probability vector solves ν(P − I) = 0".into()))?;
    Ok(AffineSet::new(particular, directions))
}
