//! Finite abelian groups `Z_{n_1} × … × Z_{n_k}`, their characters and subgroups.
//!
//! Elements are residue tuples. Every group of order `N` is enumerated in
//! lexicographic order of residue tuples, which is the mixed-radix order with
//! the first factor most significant; that index is used as the dense storage
//! position everywhere else in the crate, so "sorted by index" and "canonical
//! order" coincide.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;

use crate::circle::RationalPhase;
use crate::error::{Error, Result};

/// Largest group order accepted by [`GroupSpec::new`].
pub const DEFAULT_ORDER_CAP: u64 = 10_000;

/// A finite abelian group given by its cyclic orders.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    orders: Vec<u64>,
    order: u64,
    exponent: u64,
}

/// A residue tuple `(x_1, …, x_k)` with `0 ≤ x_j < n_j`.
///
/// Elements do not carry their group; every operation takes the [`GroupSpec`]
/// and rejects tuples that do not belong to it. The derived ordering is the
/// canonical lexicographic one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(Vec<u64>);

/// A character of the group, indexed by `(m_1, …, m_k)` with `0 ≤ m_j < n_j`.
///
/// Its value at `x` is `exp(2πi · Σ m_j x_j / n_j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character(Vec<u64>);

impl GroupElement {
    pub fn residues(&self) -> &[u64] {
        &self.0
    }
}

impl Character {
    pub fn indices(&self) -> &[u64] {
        &self.0
    }
}

fn write_tuple(f: &mut fmt::Formatter<'_>, xs: &[u64]) -> fmt::Result {
    f.write_str("[")?;
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str("]")
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

impl GroupSpec {
    /// A group with the default order cap.
    pub fn new(orders: impl Into<Vec<u64>>) -> Result<Self> {
        Self::with_cap(orders, DEFAULT_ORDER_CAP)
    }

    pub fn with_cap(orders: impl Into<Vec<u64>>, cap: u64) -> Result<Self> {
        let orders = orders.into();
        if orders.is_empty() {
            return Err(Error::InvalidGroup("at least one cyclic factor is required".into()));
        }
        if let Some(j) = orders.iter().position(|&n| n == 0) {
            return Err(Error::InvalidGroup(format!("cyclic order at position {j} is zero")));
        }
        let order = orders.iter().try_fold(1u128, |acc, &n| acc.checked_mul(n as u128));
        let order = order.unwrap_or(u128::MAX);
        if order > cap as u128 {
            return Err(Error::OrderExceedsCap { order, cap });
        }
        let exponent = orders.iter().fold(1u64, |acc, n| acc.lcm(n));
        Ok(GroupSpec { orders, order: order as u64, exponent })
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn cyclic_orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// `|G|` as a `usize`, for dense tables.
    pub fn len(&self) -> usize {
        self.order as usize
    }

    /// Always false: a group has at least its identity.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// The least common multiple of the cyclic orders. Every pairing phase has a
    /// denominator dividing it.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.rank()])
    }

    /// Builds an element from canonical residues.
    pub fn element(&self, residues: impl Into<Vec<u64>>) -> Result<GroupElement> {
        let residues = residues.into();
        self.check_tuple(&residues, "element")?;
        Ok(GroupElement(residues))
    }

    /// Builds an element from arbitrary integers, reducing each modulo `n_j`.
    pub fn reduce(&self, residues: &[i64]) -> Result<GroupElement> {
        if residues.len() != self.rank() {
            return Err(Error::SpecMismatch);
        }
        Ok(GroupElement(
            residues.iter().zip(&self.orders).map(|(&x, &n)| (x as i128).rem_euclid(n as i128) as u64).collect(),
        ))
    }

    pub fn character(&self, indices: impl Into<Vec<u64>>) -> Result<Character> {
        let indices = indices.into();
        self.check_tuple(&indices, "character")?;
        Ok(Character(indices))
    }

    pub fn trivial_character(&self) -> Character {
        Character(vec![0; self.rank()])
    }

    fn check_tuple(&self, xs: &[u64], what: &str) -> Result<()> {
        if xs.len() != self.rank() {
            return Err(Error::OutOfRange(format!("{what} has {} components, group has {}", xs.len(), self.rank())));
        }
        for (j, (&x, &n)) in xs.iter().zip(&self.orders).enumerate() {
            if x >= n {
                return Err(Error::OutOfRange(format!("{what} component {j} is {x}, must be below {n}")));
            }
        }
        Ok(())
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.check_tuple(&x.0, "element").is_ok()
    }

    fn member(&self, x: &GroupElement) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }

    fn dual_member(&self, c: &Character) -> Result<()> {
        self.check_tuple(&c.0, "character").map_err(|_| Error::SpecMismatch)
    }

    /// Position of `x` in canonical order.
    pub fn index_of(&self, x: &GroupElement) -> Result<usize> {
        self.member(x)?;
        Ok(self.encode(&x.0))
    }

    /// The element at position `i` in canonical order.
    ///
    /// # Panics
    ///
    /// If `i ≥ |G|`.
    pub fn element_at(&self, i: usize) -> GroupElement {
        GroupElement(self.decode(i))
    }

    pub fn character_at(&self, i: usize) -> Character {
        Character(self.decode(i))
    }

    pub fn character_index(&self, c: &Character) -> Result<usize> {
        self.dual_member(c)?;
        Ok(self.encode(&c.0))
    }

    pub(crate) fn encode(&self, xs: &[u64]) -> usize {
        xs.iter().zip(&self.orders).fold(0usize, |acc, (&x, &n)| acc * n as usize + x as usize)
    }

    pub(crate) fn decode(&self, mut i: usize) -> Vec<u64> {
        assert!(i < self.len(), "index {i} out of range for group of order {}", self.order);
        let mut out = vec![0; self.rank()];
        for (slot, &n) in out.iter_mut().zip(&self.orders).rev() {
            *slot = (i % n as usize) as u64;
            i /= n as usize;
        }
        out
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.len()).map(|i| self.element_at(i))
    }

    /// All characters in canonical order. The dual group has exactly `|G|` of them.
    pub fn characters(&self) -> impl Iterator<Item = Character> + '_ {
        (0..self.len()).map(|i| self.character_at(i))
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.member(a)?;
        self.member(b)?;
        Ok(GroupElement(self.add_tuples(&a.0, &b.0)))
    }

    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement> {
        self.member(a)?;
        Ok(GroupElement(self.neg_tuple(&a.0)))
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.member(a)?;
        self.member(b)?;
        Ok(GroupElement(self.add_tuples(&a.0, &self.neg_tuple(&b.0))))
    }

    /// `k · a` for a nonnegative integer `k`.
    pub fn scale(&self, a: &GroupElement, k: u64) -> Result<GroupElement> {
        self.member(a)?;
        Ok(GroupElement(
            a.0.iter().zip(&self.orders).map(|(&x, &n)| ((x as u128 * k as u128) % n as u128) as u64).collect(),
        ))
    }

    fn add_tuples(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).zip(&self.orders).map(|((&x, &y), &n)| (x + y) % n).collect()
    }

    fn neg_tuple(&self, a: &[u64]) -> Vec<u64> {
        a.iter().zip(&self.orders).map(|(&x, &n)| (n - x) % n).collect()
    }

    /// Index of `a + b` given indices of `a` and `b`.
    pub(crate) fn add_idx(&self, mut a: usize, mut b: usize) -> usize {
        let mut out = 0usize;
        let mut stride = 1usize;
        for &n in self.orders.iter().rev() {
            let n = n as usize;
            let s = (a % n + b % n) % n;
            out += s * stride;
            stride *= n;
            a /= n;
            b /= n;
        }
        out
    }

    pub(crate) fn neg_idx(&self, mut a: usize) -> usize {
        let mut out = 0usize;
        let mut stride = 1usize;
        for &n in self.orders.iter().rev() {
            let n = n as usize;
            out += ((n - a % n) % n) * stride;
            stride *= n;
            a /= n;
        }
        out
    }

    pub(crate) fn sub_idx(&self, a: usize, b: usize) -> usize {
        self.add_idx(a, self.neg_idx(b))
    }

    /// The pairing phase `Σ m_j x_j / n_j` in units of `1/exponent`.
    pub(crate) fn phase_units_idx(&self, x: usize, c: usize) -> u64 {
        self.phase_units(&self.decode(x), &self.decode(c))
    }

    pub(crate) fn phase_units(&self, x: &[u64], m: &[u64]) -> u64 {
        let l = self.exponent as u128;
        let mut acc = 0u128;
        for ((&xj, &mj), &n) in x.iter().zip(m).zip(&self.orders) {
            acc = (acc + (xj as u128 * mj as u128 % n as u128) * (l / n as u128)) % l;
        }
        acc as u64
    }

    /// The exact phase of `(x, γ)`; the character value is `exp(2πi·phase)`.
    pub fn pairing_phase(&self, x: &GroupElement, c: &Character) -> Result<RationalPhase> {
        self.member(x)?;
        self.dual_member(c)?;
        Ok(RationalPhase::reduced(self.phase_units(&x.0, &c.0), self.exponent))
    }

    /// Product of characters in the dual group (indices add componentwise).
    pub fn dual_add(&self, a: &Character, b: &Character) -> Result<Character> {
        self.dual_member(a)?;
        self.dual_member(b)?;
        Ok(Character(self.add_tuples(&a.0, &b.0)))
    }

    /// Inverse (complex conjugate) of a character.
    pub fn dual_neg(&self, a: &Character) -> Result<Character> {
        self.dual_member(a)?;
        Ok(Character(self.neg_tuple(&a.0)))
    }

    /// Order of `c` in the dual group.
    pub fn character_order(&self, c: &Character) -> Result<u64> {
        self.dual_member(c)?;
        Ok(c.0.iter().zip(&self.orders).fold(1u64, |acc, (&m, &n)| acc.lcm(&(n / m.gcd(&n)))))
    }

    /// Order of `x` in the group.
    pub fn element_order(&self, x: &GroupElement) -> Result<u64> {
        self.member(x)?;
        Ok(x.0.iter().zip(&self.orders).fold(1u64, |acc, (&v, &n)| acc.lcm(&(n / v.gcd(&n)))))
    }

    /// `ker γ = {y : (y, γ) = 1}`.
    pub fn character_kernel(&self, c: &Character) -> Result<Subgroup> {
        self.dual_member(c)?;
        let members = (0..self.len()).filter(|&y| self.phase_units(&self.decode(y), &c.0) == 0).collect();
        Ok(Subgroup::from_sorted(self.clone(), members, None))
    }

    /// The smallest subgroup containing `gens`, by breadth-first closure under `+`.
    pub fn generated_subgroup(&self, gens: &[GroupElement]) -> Result<Subgroup> {
        if gens.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        let mut steps = Vec::with_capacity(gens.len());
        for g in gens {
            steps.push(self.index_of(g)?);
        }
        steps.sort_unstable();
        steps.dedup();
        let mut seen = vec![false; self.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(x) = queue.pop_front() {
            for &g in &steps {
                let y = self.add_idx(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        let members = (0..self.len()).filter(|&i| seen[i]).collect();
        Ok(Subgroup::from_sorted(self.clone(), members, Some(gens.to_vec())))
    }

    /// The whole group as a subgroup of itself.
    pub fn whole(&self) -> Subgroup {
        Subgroup::from_sorted(self.clone(), (0..self.len()).collect(), None)
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::from_sorted(self.clone(), vec![0], None)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, n) in self.orders.iter().enumerate() {
            if i > 0 {
                f.write_str("×")?;
            }
            write!(f, "Z_{n}")?;
        }
        Ok(())
    }
}

/// An explicit subgroup: its members in canonical order.
///
/// Equality compares the group and the member set only; recorded generators are
/// informational.
#[derive(Clone, Debug)]
pub struct Subgroup {
    spec: GroupSpec,
    members: Vec<usize>,
    generators: Option<Vec<GroupElement>>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec && self.members == other.members
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    pub(crate) fn from_sorted(spec: GroupSpec, members: Vec<usize>, generators: Option<Vec<GroupElement>>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Subgroup { spec, members, generators }
    }

    /// Validates that `elements` is closed under `+` and contains `0`.
    pub fn from_elements(spec: &GroupSpec, elements: &[GroupElement]) -> Result<Self> {
        let mut members = Vec::with_capacity(elements.len());
        for x in elements {
            members.push(spec.index_of(x)?);
        }
        members.sort_unstable();
        members.dedup();
        let s = Subgroup::from_sorted(spec.clone(), members, None);
        if s.is_closed() {
            Ok(s)
        } else {
            Err(Error::NotASubgroup)
        }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn generators(&self) -> Option<&[GroupElement]> {
        self.generators.as_deref()
    }

    /// Members in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        self.members.iter().map(|&i| self.spec.element_at(i))
    }

    /// Member positions in canonical order.
    pub fn indices(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.spec.index_of(x).is_ok_and(|i| self.contains_index(i))
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn is_whole(&self) -> bool {
        self.members.len() == self.spec.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.members == [0]
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> Result<bool> {
        if self.spec != other.spec {
            return Err(Error::SpecMismatch);
        }
        Ok(self.members.iter().all(|&i| other.contains_index(i)))
    }

    /// Closure check by enumeration: contains `0`, closed under `+` and negation.
    pub fn is_closed(&self) -> bool {
        self.members.first() == Some(&0)
            && self.members.iter().all(|&a| {
                self.contains_index(self.spec.neg_idx(a))
                    && self.members.iter().all(|&b| self.contains_index(self.spec.add_idx(a, b)))
            })
    }

    pub fn intersection(&self, other: &Subgroup) -> Result<Subgroup> {
        if self.spec != other.spec {
            return Err(Error::SpecMismatch);
        }
        let members = self.members.iter().copied().filter(|&i| other.contains_index(i)).collect();
        Ok(Subgroup::from_sorted(self.spec.clone(), members, None))
    }

    /// `[G : A]`.
    pub fn index(&self) -> usize {
        self.spec.len() / self.members.len()
    }

    /// Cosets as member-position lists, ordered by smallest representative.
    pub fn coset_indices(&self) -> Vec<Vec<usize>> {
        let mut assigned = vec![false; self.spec.len()];
        let mut cosets = Vec::with_capacity(self.index());
        for rep in 0..self.spec.len() {
            if assigned[rep] {
                continue;
            }
            let mut coset: Vec<usize> = self.members.iter().map(|&a| self.spec.add_idx(rep, a)).collect();
            coset.sort_unstable();
            for &x in &coset {
                assigned[x] = true;
            }
            cosets.push(coset);
        }
        cosets
    }

    /// Partition of the group into cosets `x + A`, each sorted, ordered by their
    /// smallest element.
    pub fn coset_partition(&self) -> Vec<Vec<GroupElement>> {
        self.coset_indices().into_iter().map(|c| c.into_iter().map(|i| self.spec.element_at(i)).collect()).collect()
    }

    /// The characters trivial on this subgroup.
    pub fn annihilator(&self) -> Vec<Character> {
        (0..self.spec.len())
            .filter(|&c| self.members.iter().all(|&x| self.spec.phase_units_idx(x, c) == 0))
            .map(|c| self.spec.character_at(c))
            .collect()
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, x) in self.elements().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}
