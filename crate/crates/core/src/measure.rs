//! Exact probability laws on a finite abelian group.
//!
//! A [`Distribution`] is a dense table of exact rationals in canonical element
//! order. Convolution, shifts and equality are exact. Characteristic tables
//! are double-precision complex because character values are roots of unity;
//! they exist for cross-validation and Fourier inversion only.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::group::{Character, GroupElement, GroupSpec};
use crate::Rational;

/// An exact probability distribution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distribution {
    spec: GroupSpec,
    probs: Vec<Rational>,
}

impl Distribution {
    /// Validates a dense table in canonical order: right length, no negative
    /// entries, total mass exactly one.
    pub fn from_dense(spec: GroupSpec, probs: Vec<Rational>) -> Result<Self> {
        if probs.len() != spec.len() {
            return Err(Error::OutOfRange(format!("table has {} entries, group has {}", probs.len(), spec.len())));
        }
        if let Some(i) = probs.iter().position(|p| p.is_negative()) {
            return Err(Error::NegativeProbability(spec.element_at(i).to_string()));
        }
        let mass: Rational = probs.iter().sum();
        if !mass.is_one() {
            return Err(Error::MassNotOne(mass.to_string()));
        }
        Ok(Distribution { spec, probs })
    }

    /// Builds a law from `(element, probability)` pairs; unlisted elements get zero.
    pub fn from_pairs(spec: GroupSpec, pairs: impl IntoIterator<Item = (GroupElement, Rational)>) -> Result<Self> {
        let mut probs = vec![None; spec.len()];
        for (x, p) in pairs {
            let i = spec.index_of(&x).map_err(|_| Error::OutOfRange(format!("element {x} is not in {spec}")))?;
            if probs[i].replace(p).is_some() {
                return Err(Error::DuplicateElement(x.to_string()));
            }
        }
        let probs = probs.into_iter().map(|p| p.unwrap_or_else(Rational::zero)).collect();
        Self::from_dense(spec, probs)
    }

    /// Point mass at `a`.
    pub fn dirac(spec: &GroupSpec, a: &GroupElement) -> Result<Self> {
        let i = spec.index_of(a)?;
        let mut probs = vec![Rational::zero(); spec.len()];
        probs[i] = Rational::one();
        Ok(Distribution { spec: spec.clone(), probs })
    }

    /// The Haar measure: `1/|G|` everywhere.
    pub fn uniform(spec: &GroupSpec) -> Self {
        let p = Rational::new(BigInt::one(), BigInt::from(spec.order()));
        Distribution { spec: spec.clone(), probs: vec![p; spec.len()] }
    }

    /// Uniform on a set of distinct elements.
    pub fn uniform_on(spec: &GroupSpec, support: &[GroupElement]) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::MassNotOne("0".into()));
        }
        let p = Rational::new(BigInt::one(), BigInt::from(support.len()));
        Self::from_pairs(spec.clone(), support.iter().map(|x| (x.clone(), p.clone())))
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    /// Probabilities in canonical element order.
    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn prob(&self, x: &GroupElement) -> Result<&Rational> {
        Ok(&self.probs[self.spec.index_of(x)?])
    }

    pub fn prob_at(&self, i: usize) -> &Rational {
        &self.probs[i]
    }

    /// Positions with positive mass, ascending.
    pub fn support_indices(&self) -> Vec<usize> {
        (0..self.probs.len()).filter(|&i| !self.probs[i].is_zero()).collect()
    }

    /// Elements with positive mass, in canonical order.
    pub fn support(&self) -> Vec<GroupElement> {
        self.support_indices().into_iter().map(|i| self.spec.element_at(i)).collect()
    }

    fn same_spec(&self, other: &Distribution) -> Result<()> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }

    /// `(μ ∗ ν)(z) = Σ_x μ(x) ν(z − x)`: the law of `X + Y` for independent `X ~ μ`, `Y ~ ν`.
    pub fn convolve(&self, other: &Distribution) -> Result<Distribution> {
        self.same_spec(other)?;
        // Integer numerators over a common denominator keep the inner loop free
        // of gcd normalization.
        let (lhs, d1) = self.scaled_support();
        let (rhs, d2) = other.scaled_support();
        let mut acc = vec![BigInt::zero(); self.spec.len()];
        for (x, a) in &lhs {
            for (y, b) in &rhs {
                acc[self.spec.add_idx(*x, *y)] += a * b;
            }
        }
        let den = d1 * d2;
        let probs = acc.into_iter().map(|n| Rational::new(n, den.clone())).collect();
        Ok(Distribution { spec: self.spec.clone(), probs })
    }

    /// Support indices with numerators over the lcm of the denominators.
    fn scaled_support(&self) -> (Vec<(usize, BigInt)>, BigInt) {
        let support = self.support_indices();
        let den = support.iter().fold(BigInt::one(), |l, &i| l.lcm(self.probs[i].denom()));
        let scaled = support.into_iter().map(|i| (i, self.probs[i].numer() * (&den / self.probs[i].denom()))).collect();
        (scaled, den)
    }

    /// The law of `X + a`.
    pub fn shift(&self, a: &GroupElement) -> Result<Distribution> {
        let a = self.spec.index_of(a)?;
        Ok(self.shift_idx(a))
    }

    pub(crate) fn shift_idx(&self, a: usize) -> Distribution {
        let mut out = vec![Rational::zero(); self.spec.len()];
        for (x, p) in self.probs.iter().enumerate() {
            if !p.is_zero() {
                out[self.spec.add_idx(x, a)] = p.clone();
            }
        }
        Distribution { spec: self.spec.clone(), probs: out }
    }

    /// Whether `shift(self, a) == self`, without building the shifted table.
    pub(crate) fn invariant_under_idx(&self, a: usize) -> bool {
        (0..self.probs.len()).all(|x| self.probs[self.spec.add_idx(x, a)] == self.probs[x])
    }

    /// `n`-fold convolution power; `n = 0` gives `δ_0`.
    pub fn convolution_power(&self, n: u32) -> Distribution {
        let mut acc = Distribution::dirac(&self.spec, &self.spec.zero()).expect("zero is a member");
        for _ in 0..n {
            acc = acc.convolve(self).expect("same group");
        }
        acc
    }

    /// `μ̂(γ) = Σ_x μ(x) · exp(2πi·phase(x, γ))` for every character, in canonical
    /// character order.
    pub fn char_table(&self) -> CharTable {
        let roots = unit_roots(self.spec.exponent());
        let support: Vec<(Vec<u64>, f64)> = self
            .support_indices()
            .into_iter()
            .map(|i| (self.spec.decode(i), self.probs[i].to_f64().unwrap_or(f64::NAN)))
            .collect();
        let values = (0..self.spec.len())
            .map(|c| {
                let m = self.spec.decode(c);
                support.iter().map(|(x, p)| roots[self.spec.phase_units(x, &m) as usize] * p).sum()
            })
            .collect();
        CharTable { spec: self.spec.clone(), values }
    }

    /// Exact test of `μ̂(γ) = 1`: true iff every support point pairs to phase zero
    /// with `γ`, i.e. `supp μ ⊆ ker γ`.
    pub fn char_hat_one_exact(&self, c: &Character) -> Result<bool> {
        let c = self.spec.character_index(c)?;
        Ok(self.char_hat_one_idx(c))
    }

    pub(crate) fn char_hat_one_idx(&self, c: usize) -> bool {
        let m = self.spec.decode(c);
        self.support_indices().into_iter().all(|x| self.spec.phase_units(&self.spec.decode(x), &m) == 0)
    }

    /// Exact total variation distance `½ Σ |μ(x) − ν(x)|`.
    pub fn tv_distance_exact(&self, other: &Distribution) -> Result<Rational> {
        self.same_spec(other)?;
        let sum: Rational = self.probs.iter().zip(&other.probs).map(|(a, b)| (a - b).abs()).sum();
        Ok(sum / Rational::from_integer(BigInt::from(2)))
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        self.probs.iter().map(|p| p.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

/// `exp(2πi k / l)` for `k = 0..l`.
fn unit_roots(l: u64) -> Vec<Complex64> {
    (0..l)
        .map(|k| {
            let (s, c) = libm::sincos(TAU * k as f64 / l as f64);
            Complex64::new(c, s)
        })
        .collect()
}

/// Numeric characteristic function, indexed by characters in canonical order.
#[derive(Clone, Debug, PartialEq)]
pub struct CharTable {
    spec: GroupSpec,
    values: Vec<Complex64>,
}

impl CharTable {
    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, c: &Character) -> Result<Complex64> {
        Ok(self.values[self.spec.character_index(c)?])
    }

    /// Pointwise product, the table of the convolution.
    pub fn mul(&self, other: &CharTable) -> Result<CharTable> {
        if self.spec != other.spec {
            return Err(Error::SpecMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Ok(CharTable { spec: self.spec.clone(), values })
    }

    /// `max_γ |self(γ) − other(γ)|`.
    pub fn max_abs_diff(&self, other: &CharTable) -> Result<f64> {
        if self.spec != other.spec {
            return Err(Error::SpecMismatch);
        }
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    /// `μ(x) = (1/|G|) Σ_γ t(γ) · conj((x, γ))`.
    pub fn inverse_fourier(&self) -> FloatTable {
        let roots = unit_roots(self.spec.exponent());
        let n = self.spec.len() as f64;
        let mut max_imag = 0.0f64;
        let probs = (0..self.spec.len())
            .map(|x| {
                let xs = self.spec.decode(x);
                let s: Complex64 = self
                    .values
                    .iter()
                    .enumerate()
                    .map(|(c, t)| t * roots[self.spec.phase_units(&xs, &self.spec.decode(c)) as usize].conj())
                    .sum::<Complex64>()
                    / n;
                max_imag = max_imag.max(s.im.abs());
                s.re
            })
            .collect();
        FloatTable { spec: self.spec.clone(), probs, max_imag }
    }
}

/// A real-valued table over the group, as produced by Fourier inversion.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatTable {
    spec: GroupSpec,
    probs: Vec<f64>,
    max_imag: f64,
}

impl FloatTable {
    pub fn new(spec: GroupSpec, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != spec.len() {
            return Err(Error::SpecMismatch);
        }
        Ok(FloatTable { spec, probs, max_imag: 0.0 })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Largest imaginary part discarded during inversion.
    pub fn max_imag(&self) -> f64 {
        self.max_imag
    }

    /// `max_x |self(x) − μ(x)|`.
    pub fn max_abs_error(&self, mu: &Distribution) -> Result<f64> {
        if self.spec != mu.spec {
            return Err(Error::SpecMismatch);
        }
        Ok(self.probs.iter().zip(mu.to_f64_vec()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }
}

/// Anything that assigns a (possibly approximate) probability to each element.
pub trait ProbTable {
    fn spec(&self) -> &GroupSpec;
    /// Probability at canonical position `i`.
    fn prob_f64(&self, i: usize) -> f64;
}

impl ProbTable for Distribution {
    fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    fn prob_f64(&self, i: usize) -> f64 {
        self.probs[i].to_f64().unwrap_or(f64::NAN)
    }
}

impl ProbTable for FloatTable {
    fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    fn prob_f64(&self, i: usize) -> f64 {
        self.probs[i]
    }
}

/// Total variation distance `½ Σ_x |a(x) − b(x)|` in floating point.
pub fn tv_distance<A: ProbTable + ?Sized, B: ProbTable + ?Sized>(a: &A, b: &B) -> Result<f64> {
    if a.spec() != b.spec() {
        return Err(Error::SpecMismatch);
    }
    let sum: f64 = (0..a.spec().len()).map(|i| (a.prob_f64(i) - b.prob_f64(i)).abs()).sum();
    Ok(sum / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(orders: &[u64]) -> GroupSpec {
        GroupSpec::new(orders.to_vec()).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn dense(g: &GroupSpec, ps: &[(i64, i64)]) -> Distribution {
        Distribution::from_dense(g.clone(), ps.iter().map(|&(n, d)| q(n, d)).collect()).unwrap()
    }

    fn d(g: &GroupSpec, x: &[u64]) -> Distribution {
        Distribution::dirac(g, &g.element(x.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn construction_rejects_bad_tables() {
        let g = z(&[2]);
        let e = Distribution::from_dense(g.clone(), vec![q(1, 3), q(1, 3)]).unwrap_err();
        assert_eq!(e, Error::MassNotOne("2/3".into()));
        assert!(e.to_string().contains("mass ≠ 1"));
        assert!(matches!(
            Distribution::from_dense(g.clone(), vec![q(3, 2), q(-1, 2)]),
            Err(Error::NegativeProbability(_))
        ));
        assert!(matches!(Distribution::from_dense(g.clone(), vec![q(0, 1), q(0, 1)]), Err(Error::MassNotOne(_))));
        let x = g.element(vec![1]).unwrap();
        assert!(matches!(
            Distribution::from_pairs(g.clone(), [(x.clone(), q(1, 2)), (x, q(1, 2))]),
            Err(Error::DuplicateElement(_))
        ));
        let far = z(&[4]).element(vec![3]).unwrap();
        assert!(matches!(Distribution::from_pairs(g, [(far, q(1, 1))]), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn dirac_and_uniform() {
        let z3 = z(&[3]);
        assert_eq!(d(&z3, &[0]).probs(), &[q(1, 1), q(0, 1), q(0, 1)]);
        let z4 = z(&[4]);
        assert_eq!(d(&z4, &[2]).support(), vec![z4.element(vec![2]).unwrap()]);
        assert!(Distribution::uniform(&z4).probs().iter().all(|p| *p == q(1, 4)));
        assert_eq!(Distribution::uniform(&z(&[1])).probs(), &[q(1, 1)]);
        let total: Rational = Distribution::uniform(&z(&[3, 5])).probs().iter().sum();
        assert!(total.is_one());
    }

    #[test]
    fn convolve_examples() {
        let z2 = z(&[2]);
        assert_eq!(d(&z2, &[1]).convolve(&d(&z2, &[1])).unwrap(), d(&z2, &[0]));
        let z3 = z(&[3]);
        let nu = dense(&z3, &[(1, 2), (1, 3), (1, 6)]);
        assert_eq!(Distribution::uniform(&z3).convolve(&nu).unwrap(), Distribution::uniform(&z3));
        let z4 = z(&[4]);
        let a = dense(&z4, &[(1, 2), (1, 2), (0, 1), (0, 1)]);
        let b = dense(&z4, &[(1, 2), (0, 1), (1, 2), (0, 1)]);
        assert_eq!(a.convolve(&b).unwrap(), Distribution::uniform(&z4));
        assert_eq!(a.convolve(&Distribution::uniform(&z3)), Err(Error::SpecMismatch));
    }

    #[test]
    fn shift_examples() {
        let z4 = z(&[4]);
        let mu = dense(&z4, &[(1, 2), (1, 4), (1, 8), (1, 8)]);
        assert_eq!(mu.shift(&z4.zero()).unwrap(), mu);
        assert_eq!(d(&z4, &[0]).shift(&z4.element(vec![2]).unwrap()).unwrap(), d(&z4, &[2]));
        let a = z4.element(vec![3]).unwrap();
        let back = mu.shift(&a).unwrap().shift(&z4.neg(&a).unwrap()).unwrap();
        assert_eq!(back, mu);
        assert_eq!(mu.shift(&a).unwrap(), mu.convolve(&Distribution::dirac(&z4, &a).unwrap()).unwrap());
    }

    #[test]
    fn char_table_examples() {
        let z5 = z(&[5]);
        let t = Distribution::uniform(&z5).char_table();
        assert!((t.values()[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(t.values()[1..].iter().all(|v| v.norm() < 1e-12));

        let z6 = z(&[6]);
        let a = z6.element(vec![5]).unwrap();
        let t = Distribution::dirac(&z6, &a).unwrap().char_table();
        for c in z6.characters() {
            let phase = z6.pairing_phase(&a, &c).unwrap().to_f64();
            let (s, co) = libm::sincos(TAU * phase);
            assert!((t.value(&c).unwrap() - Complex64::new(co, s)).norm() < 1e-12);
        }

        let z2 = z(&[2]);
        let t = dense(&z2, &[(3, 4), (1, 4)]).char_table();
        assert!((t.values()[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((t.values()[1] - Complex64::new(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn char_hat_one_examples() {
        let z4 = z(&[4]);
        let mu = dense(&z4, &[(1, 2), (0, 1), (1, 2), (0, 1)]);
        assert!(mu.char_hat_one_exact(&z4.trivial_character()).unwrap());
        assert!(mu.char_hat_one_exact(&z4.character(vec![2]).unwrap()).unwrap());
        assert!(!mu.char_hat_one_exact(&z4.character(vec![1]).unwrap()).unwrap());
    }

    #[test]
    fn inverse_fourier_examples() {
        let z7 = z(&[7]);
        let u = Distribution::uniform(&z7);
        assert!(u.char_table().inverse_fourier().max_abs_error(&u).unwrap() <= 1e-12);
        let g = z(&[2, 6]);
        let a = d(&g, &[1, 4]);
        let inv = a.char_table().inverse_fourier();
        assert!(inv.max_abs_error(&a).unwrap() <= 1e-12);
        assert!(inv.max_imag() <= 1e-10);
    }

    #[test]
    fn tv_examples() {
        let z2 = z(&[2]);
        let a = dense(&z2, &[(3, 4), (1, 4)]);
        let b = dense(&z2, &[(1, 4), (3, 4)]);
        assert!(a.tv_distance_exact(&a).unwrap().is_zero());
        assert!(d(&z2, &[0]).tv_distance_exact(&d(&z2, &[1])).unwrap().is_one());
        assert_eq!(a.tv_distance_exact(&b).unwrap(), q(1, 2));
        assert_eq!(tv_distance(&a, &b).unwrap(), 0.5);
        assert!(tv_distance(&a, &a.char_table().inverse_fourier()).unwrap() < 1e-12);
    }

    fn law() -> impl Strategy<Value = (GroupSpec, Vec<u32>, Vec<u32>)> {
        prop::collection::vec(1u64..6, 1..3).prop_flat_map(|orders| {
            let g = GroupSpec::new(orders).unwrap();
            let n = g.len();
            let w = prop::collection::vec(0u32..4, n);
            (Just(g), w.clone(), w)
        })
    }

    fn from_weights(g: &GroupSpec, w: &[u32]) -> Distribution {
        let mut w = w.to_vec();
        if w.iter().all(|&x| x == 0) {
            w[0] = 1;
        }
        let total: u32 = w.iter().sum();
        Distribution::from_dense(g.clone(), w.iter().map(|&x| q(x as i64, total as i64)).collect()).unwrap()
    }

    proptest! {
        #[test]
        fn convolution_laws((g, a, b) in law()) {
            let mu = from_weights(&g, &a);
            let nu = from_weights(&g, &b);
            let zero = Distribution::dirac(&g, &g.zero()).unwrap();
            prop_assert_eq!(mu.convolve(&zero).unwrap(), mu.clone());
            prop_assert_eq!(mu.convolve(&nu).unwrap(), nu.convolve(&mu).unwrap());
            let both = mu.convolve(&nu).unwrap();
            let assoc = mu.convolve(&nu.convolve(&both).unwrap()).unwrap();
            prop_assert_eq!(both.convolve(&both).unwrap(), assoc);
            let u = Distribution::uniform(&g);
            prop_assert_eq!(u.convolve(&nu).unwrap(), u);
        }

        #[test]
        fn convolution_theorem_and_shift_rule((g, a, b) in law()) {
            let mu = from_weights(&g, &a);
            let nu = from_weights(&g, &b);
            let lhs = mu.convolve(&nu).unwrap().char_table();
            let rhs = mu.char_table().mul(&nu.char_table()).unwrap();
            prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-12);
            let t = mu.char_table();
            prop_assert!((t.values()[0] - Complex64::new(1.0, 0.0)).norm() <= 1e-12);
            prop_assert!(t.values().iter().all(|v| v.norm() <= 1.0 + 1e-12));
            let shift = g.element_at(g.len() - 1);
            let shifted = mu.shift(&shift).unwrap().char_table();
            for c in g.characters() {
                let (s, co) = libm::sincos(TAU * g.pairing_phase(&shift, &c).unwrap().to_f64());
                let want = Complex64::new(co, s) * t.value(&c).unwrap();
                prop_assert!((shifted.value(&c).unwrap() - want).norm() <= 1e-12);
            }
        }

        #[test]
        fn exact_and_numeric_unit_tests_agree((g, a, _b) in law()) {
            let mu = from_weights(&g, &a);
            let t = mu.char_table();
            for c in g.characters() {
                let dist = (t.value(&c).unwrap() - Complex64::new(1.0, 0.0)).norm();
                if mu.char_hat_one_exact(&c).unwrap() {
                    prop_assert!(dist <= 1e-12);
                } else {
                    prop_assert!(dist > 1e-9);
                }
            }
        }

        #[test]
        fn inversion_round_trip((g, a, _b) in law()) {
            let mu = from_weights(&g, &a);
            let inv = mu.char_table().inverse_fourier();
            prop_assert!(inv.max_abs_error(&mu).unwrap() <= 1e-12);
            prop_assert!(inv.max_imag() <= 1e-10);
        }
    }
}
