//! Solution structure of `X + Y ~ X` for independent `X`, `Y`.
//!
//! With `Λ = {γ : μ̂_Y(γ) = 1}` and `A = ⋂_{γ∈Λ} ker γ`, the law `μ_X` solves
//! `μ_X ∗ μ_Y = μ_X` exactly when `μ_X` is invariant under every shift in `A`.
//! Equivalently, `μ_X` is constant on the cosets of `A`, and `A` is the
//! subgroup generated by the support of `μ_Y`.
//!
//! `Λ` is computed by exact kernel inclusion: `μ̂_Y(γ) = 1` holds iff `Y` lies in
//! `ker γ` almost surely. The numeric characteristic table is never consulted.
//!
//! The `verify_*`, [`independence_check`] and [`power_invariance`] functions
//! re-check consequences that must hold for every fixed point. They return
//! [`Error::PreconditionFailed`] when the input does not satisfy the hypothesis
//! and [`Error::TheoremViolation`] only if this crate computed something wrong.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::circle::CircleRational;
use crate::error::{Error, Result};
use crate::group::{Character, GroupElement, GroupSpec, Subgroup};
use crate::measure::Distribution;
use crate::oracle::AffineSet;
use crate::Rational;

/// The characters with `μ̂_Y(γ) = 1`, in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaSet {
    spec: GroupSpec,
    members: Vec<usize>,
}

impl LambdaSet {
    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn characters(&self) -> impl Iterator<Item = Character> + '_ {
        self.members.iter().map(|&c| self.spec.character_at(c))
    }

    pub fn contains(&self, c: &Character) -> bool {
        self.spec.character_index(c).is_ok_and(|i| self.members.binary_search(&i).is_ok())
    }

    /// Contains the trivial character and is closed under products and inverses.
    pub fn is_closed(&self) -> bool {
        let chars: Vec<_> = self.characters().collect();
        self.contains(&self.spec.trivial_character())
            && chars.iter().all(|a| {
                self.contains(&self.spec.dual_neg(a).expect("member"))
                    && chars.iter().all(|b| self.contains(&self.spec.dual_add(a, b).expect("member")))
            })
    }
}

/// Result of [`verify_forward`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceAnalysis {
    pub lambda: LambdaSet,
    /// `A = ⋂_{γ∈Λ} ker γ`; `Y ∈ A` almost surely.
    pub a_subgroup: Subgroup,
    /// All shifts `a` with `X + a ~ X`.
    pub stabilizer: Subgroup,
    pub is_fixed_point: bool,
    /// `A` is the whole group, so the only fixed point is uniform.
    pub haar_forced: bool,
    /// Number of cosets of `A`, which is the number of free weights of a fixed point.
    pub fixed_point_dimension: usize,
}

/// `Λ = {γ : supp μ_Y ⊆ ker γ}`, by exact phase tests over all characters.
pub fn lambda_set(mu_y: &Distribution) -> LambdaSet {
    let spec = mu_y.spec().clone();
    let support: Vec<Vec<u64>> = mu_y.support_indices().into_iter().map(|x| spec.decode(x)).collect();
    let members = (0..spec.len())
        .filter(|&c| {
            let m = spec.decode(c);
            support.iter().all(|x| spec.phase_units(x, &m) == 0)
        })
        .collect();
    LambdaSet { spec, members }
}

/// `A = ⋂_{γ∈Λ} ker γ`.
pub fn invariance_subgroup(mu_y: &Distribution) -> Subgroup {
    invariance_subgroup_of(&lambda_set(mu_y))
}

fn invariance_subgroup_of(lambda: &LambdaSet) -> Subgroup {
    let spec = &lambda.spec;
    let chars: Vec<Vec<u64>> = lambda.members.iter().map(|&c| spec.decode(c)).collect();
    let members = (0..spec.len())
        .filter(|&x| {
            let xs = spec.decode(x);
            chars.iter().all(|m| spec.phase_units(&xs, m) == 0)
        })
        .collect();
    Subgroup::from_sorted(spec.clone(), members, None)
}

/// `{a : X + a ~ X}`, by testing every shift exactly.
pub fn stabilizer(mu_x: &Distribution) -> Subgroup {
    let members = (0..mu_x.spec().len()).filter(|&a| mu_x.invariant_under_idx(a)).collect();
    Subgroup::from_sorted(mu_x.spec().clone(), members, None)
}

/// `μ_X ∗ μ_Y == μ_X`, compared exactly.
pub fn is_fixed_point(mu_x: &Distribution, mu_y: &Distribution) -> Result<bool> {
    Ok(mu_x.convolve(mu_y)? == *mu_x)
}

/// Whether every support point of `μ_Y` leaves `μ_X` invariant.
pub fn support_in_stabilizer(mu_x: &Distribution, mu_y: &Distribution) -> Result<bool> {
    if mu_x.spec() != mu_y.spec() {
        return Err(Error::SpecMismatch);
    }
    Ok(mu_y.support_indices().into_iter().all(|a| mu_x.invariant_under_idx(a)))
}

fn require_fixed_point(mu_x: &Distribution, mu_y: &Distribution) -> Result<()> {
    if is_fixed_point(mu_x, mu_y)? {
        Ok(())
    } else {
        Err(Error::PreconditionFailed("μ_X ∗ μ_Y ≠ μ_X".into()))
    }
}

/// Computes `Λ`, `A` and the stabilizer of a fixed-point pair and checks
/// `supp μ_Y ⊆ A ⊆ stab(μ_X)`.
pub fn verify_forward(mu_x: &Distribution, mu_y: &Distribution) -> Result<InvarianceAnalysis> {
    require_fixed_point(mu_x, mu_y)?;
    let lambda = lambda_set(mu_y);
    let a_subgroup = invariance_subgroup_of(&lambda);
    let stab = stabilizer(mu_x);
    if let Some(y) = mu_y.support_indices().into_iter().find(|&y| !a_subgroup.contains_index(y)) {
        return Err(Error::TheoremViolation(format!("support point {} lies outside A", mu_y.spec().element_at(y))));
    }
    if !a_subgroup.is_subset_of(&stab)? {
        return Err(Error::TheoremViolation("A is not contained in the stabilizer of μ_X".into()));
    }
    let haar_forced = a_subgroup.is_whole();
    let fixed_point_dimension = a_subgroup.index();
    Ok(InvarianceAnalysis {
        lambda,
        a_subgroup,
        stabilizer: stab,
        is_fixed_point: true,
        haar_forced,
        fixed_point_dimension,
    })
}

/// If every support point of `μ_Y` stabilizes `μ_X`, then `μ_X ∗ μ_Y = μ_X`.
pub fn verify_converse(mu_x: &Distribution, mu_y: &Distribution) -> Result<bool> {
    if !support_in_stabilizer(mu_x, mu_y)? {
        return Err(Error::PreconditionFailed("supp μ_Y is not contained in the stabilizer of μ_X".into()));
    }
    if is_fixed_point(mu_x, mu_y)? {
        Ok(true)
    } else {
        Err(Error::TheoremViolation("support stabilizes μ_X but μ_X ∗ μ_Y ≠ μ_X".into()))
    }
}

/// All solutions `ν` of `ν ∗ μ_Y = ν`: the laws constant on each coset of `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPointSpace {
    subgroup: Subgroup,
    cosets: Vec<Vec<usize>>,
}

impl FixedPointSpace {
    pub fn spec(&self) -> &GroupSpec {
        self.subgroup.spec()
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    /// Cosets of `A` in canonical order.
    pub fn cosets(&self) -> Vec<Vec<GroupElement>> {
        self.subgroup.coset_partition()
    }

    pub fn coset_indices(&self) -> &[Vec<usize>] {
        &self.cosets
    }

    /// Number of cosets.
    pub fn dimension(&self) -> usize {
        self.cosets.len()
    }

    /// Spreads a law on the cosets uniformly inside each coset.
    pub fn lift(&self, weights: &[Rational]) -> Result<Distribution> {
        if weights.len() != self.cosets.len() {
            return Err(Error::OutOfRange(format!(
                "{} coset weights given, expected {}",
                weights.len(),
                self.cosets.len()
            )));
        }
        let size = Rational::from_integer(BigInt::from(self.subgroup.len()));
        let mut probs = alloc::vec![Rational::zero(); self.spec().len()];
        for (coset, w) in self.cosets.iter().zip(weights) {
            if w.is_negative() {
                return Err(Error::NegativeProbability(format!("coset {}", self.spec().element_at(coset[0]))));
            }
            let p = w / &size;
            for &x in coset {
                probs[x] = p.clone();
            }
        }
        Distribution::from_dense(self.spec().clone(), probs)
    }

    /// Whether `ν` is constant on every coset.
    pub fn contains(&self, nu: &Distribution) -> Result<bool> {
        if nu.spec() != self.spec() {
            return Err(Error::SpecMismatch);
        }
        Ok(self.cosets.iter().all(|c| c.iter().all(|&x| nu.prob_at(x) == nu.prob_at(c[0]))))
    }

    /// The solution set as an exact affine subspace: the uniform law plus the
    /// span of differences between normalized coset indicators.
    pub fn affine_set(&self) -> AffineSet {
        let n = self.spec().len();
        let indicator = |c: &Vec<usize>| {
            let p = Rational::new(BigInt::from(1), BigInt::from(c.len()));
            let mut v = alloc::vec![Rational::zero(); n];
            for &x in c {
                v[x] = p.clone();
            }
            v
        };
        let first = indicator(&self.cosets[0]);
        let directions =
            self.cosets[1..].iter().map(|c| indicator(c).iter().zip(&first).map(|(a, b)| a - b).collect()).collect();
        AffineSet::new(Distribution::uniform(self.spec()).probs().to_vec(), directions)
    }
}

pub fn fixed_point_space(mu_y: &Distribution) -> FixedPointSpace {
    let subgroup = invariance_subgroup(mu_y);
    let cosets = subgroup.coset_indices();
    FixedPointSpace { subgroup, cosets }
}

/// Whether `A` is the whole group, so that the uniform law is the only fixed point.
pub fn haar_forced(mu_y: &Distribution) -> bool {
    invariance_subgroup(mu_y).is_whole()
}

/// Exact test that `J(b, e) = μ_X(b − e) μ_Y(e)` equals `μ_{X+Y}(b) μ_Y(e)` for all `b, e`.
pub fn joint_factorizes(mu_x: &Distribution, mu_y: &Distribution) -> Result<bool> {
    let sum = mu_x.convolve(mu_y)?;
    let spec = mu_x.spec();
    let ys = mu_y.support_indices();
    Ok((0..spec.len()).all(|b| {
        ys.iter().all(|&e| {
            let py = mu_y.prob_at(e);
            mu_x.prob_at(spec.sub_idx(b, e)) * py == sum.prob_at(b) * py
        })
    }))
}

/// For a fixed-point pair, `X + Y` and `Y` are independent.
pub fn independence_check(mu_x: &Distribution, mu_y: &Distribution) -> Result<bool> {
    require_fixed_point(mu_x, mu_y)?;
    if joint_factorizes(mu_x, mu_y)? {
        Ok(true)
    } else {
        Err(Error::TheoremViolation("joint law of (X + Y, Y) does not factorize".into()))
    }
}

/// For a fixed-point pair, `μ_X ∗ μ_Y^{∗n} = μ_X`.
pub fn power_invariance(mu_x: &Distribution, mu_y: &Distribution, n: u32) -> Result<bool> {
    require_fixed_point(mu_x, mu_y)?;
    if mu_x.convolve(&mu_y.convolution_power(n))? == *mu_x {
        Ok(true)
    } else {
        Err(Error::TheoremViolation(format!("X + {n}Y does not have the law of X")))
    }
}

/// Outcome of [`circle_classify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CircleKind {
    /// `Y` lives on `{k/N}` and `X ~ X + k/N` for every `k`.
    FiniteCyclic(u64),
    /// `X` must be uniform on `[0, 1)`.
    HaarForced,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleClassification {
    pub kind: CircleKind,
}

impl CircleClassification {
    /// `{k/N : 0 ≤ k < N}` for the finite case, empty otherwise.
    pub fn subgroup_points(&self) -> Vec<CircleRational> {
        match self.kind {
            CircleKind::FiniteCyclic(n) => (0..n).map(|k| CircleRational::reduced(k, n)).collect(),
            CircleKind::HaarForced => Vec::new(),
        }
    }
}

/// Classifies the shifts of a circle-valued `X` forced by `X + Y ~ X`.
///
/// `has_nonrational_mass` declares that `Y` charges irrationals or infinitely
/// many rationals; that cannot be read off a finite list. Otherwise `N` is the
/// lcm of the reduced denominators, and minimality is re-checked by scanning
/// `n = 1..N`.
pub fn circle_classify(support: &[CircleRational], has_nonrational_mass: bool) -> Result<CircleClassification> {
    if has_nonrational_mass {
        return Ok(CircleClassification { kind: CircleKind::HaarForced });
    }
    if support.is_empty() {
        return Err(Error::EmptyCircleSupport);
    }
    let mut n: u64 = 1;
    for p in support {
        let l = (n as u128).lcm(&(p.denominator() as u128));
        n = u64::try_from(l).map_err(|_| Error::OutOfRange(format!("lcm of denominators exceeds {}", u64::MAX)))?;
    }
    if let Some(m) = (1..n).find(|&m| support.iter().all(|p| p.lies_in_cyclic(m))) {
        return Err(Error::TheoremViolation(format!("support fits in Z_{m}, below the lcm {n}")));
    }
    Ok(CircleClassification { kind: CircleKind::FiniteCyclic(n) })
}

/// Uniform law on the support points viewed inside `Z_n`.
pub fn embed_in_cyclic(support: &[CircleRational], n: u64) -> Result<Distribution> {
    embed_in_cyclic_with_cap(support, n, crate::group::DEFAULT_ORDER_CAP)
}

/// [`embed_in_cyclic`] with an explicit group order cap.
pub fn embed_in_cyclic_with_cap(support: &[CircleRational], n: u64, cap: u64) -> Result<Distribution> {
    let spec = GroupSpec::with_cap(alloc::vec![n], cap)?;
    let mut points = Vec::with_capacity(support.len());
    for p in support {
        let k = p.residue_mod(n).ok_or_else(|| Error::OutOfRange(format!("{p} is not of the form k/{n}")))?;
        points.push(spec.element(alloc::vec![k])?);
    }
    points.sort();
    points.dedup();
    Distribution::uniform_on(&spec, &points)
}
