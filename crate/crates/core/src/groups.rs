//! Finite abelian groups `C_{n_1} ⊕ … ⊕ C_{n_r}` in invariant-factor form.
//!
//! Elements are coordinate vectors reduced modulo the invariant factors.
//! Every group in the supported envelope is small enough to enumerate, so
//! elements can also be addressed by a dense index (lexicographic order).

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Largest group order accepted by the constructors.
pub const MAX_ORDER: usize = 1 << 16;

/// A group element as a list of residues, one per invariant factor.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(SmallVec<[u32; 4]>);

impl GroupElement {
    pub fn new(coords: impl IntoIterator<Item = u32>) -> Self {
        Self(coords.into_iter().collect())
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<u32>> for GroupElement {
    fn from(v: Vec<u32>) -> Self {
        Self(v.into())
    }
}

/// `C_{n_1} ⊕ … ⊕ C_{n_r}` with `1 < n_1 | n_2 | … | n_r`; `r = 0` is the trivial group.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct FiniteAbelianGroup {
    factors: Vec<u32>,
    // strides[i] = n_{i+1} * … * n_r, so that index order is lexicographic
    strides: Vec<usize>,
    order: usize,
}

impl fmt::Debug for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "C_1");
        }
        for (i, n) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "C_{n}")?;
        }
        Ok(())
    }
}

impl TryFrom<Vec<u32>> for FiniteAbelianGroup {
    type Error = Error;

    fn try_from(factors: Vec<u32>) -> Result<Self> {
        Self::new(factors)
    }
}

impl From<FiniteAbelianGroup> for Vec<u32> {
    fn from(g: FiniteAbelianGroup) -> Self {
        g.factors
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl FiniteAbelianGroup {
    /// Builds a group from invariant factors that already form a divisor chain.
    pub fn new(factors: Vec<u32>) -> Result<Self> {
        let chain_ok =
            factors.iter().all(|&n| n >= 2) && factors.windows(2).all(|w| w[1] % w[0] == 0);
        if !chain_ok {
            return Err(Error::NotInvariantFactors(factors));
        }
        let mut order: usize = 1;
        for &n in &factors {
            order = order
                .checked_mul(n as usize)
                .filter(|&o| o <= MAX_ORDER)
                .ok_or(Error::GroupTooLarge { limit: MAX_ORDER })?;
        }
        let mut strides = vec![1usize; factors.len()];
        for i in (0..factors.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * factors[i + 1] as usize;
        }
        Ok(Self {
            factors,
            strides,
            order,
        })
    }

    /// Normalizes an arbitrary direct sum `C_{m_1} ⊕ … ⊕ C_{m_k}` to invariant factors
    /// by replacing pairs with their gcd and lcm until every pair divides.
    pub fn canonicalize(moduli: &[u64]) -> Result<Self> {
        if let Some(&bad) = moduli.iter().find(|&&m| m == 0) {
            return Err(Error::InvalidModulus(bad));
        }
        let mut m: Vec<u64> = moduli.iter().copied().filter(|&x| x > 1).collect();
        m.sort_unstable();
        loop {
            let mut changed = false;
            for i in 0..m.len() {
                for j in i + 1..m.len() {
                    if m[j] % m[i] != 0 {
                        let g = gcd(m[i], m[j]);
                        let l = m[i] / g * m[j];
                        m[i] = g;
                        m[j] = l;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let factors = m
            .into_iter()
            .filter(|&x| x > 1)
            .map(|x| u32::try_from(x).map_err(|_| Error::GroupTooLarge { limit: MAX_ORDER }))
            .collect::<Result<Vec<_>>>()?;
        Self::new(factors)
    }

    pub fn trivial() -> Self {
        Self::new(Vec::new()).expect("empty chain is valid")
    }

    pub fn cyclic(n: u32) -> Result<Self> {
        Self::canonicalize(&[n as u64])
    }

    pub fn invariant_factors(&self) -> &[u32] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// `exp(G) = n_r`, or 1 for the trivial group.
    pub fn exponent(&self) -> u32 {
        self.factors.last().copied().unwrap_or(1)
    }

    /// `D*(G) = 1 + Σ (n_i - 1)`.
    pub fn d_star(&self) -> u32 {
        1 + self.factors.iter().map(|n| n - 1).sum::<u32>()
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() <= 1
    }

    pub fn is_elementary_two_group(&self) -> bool {
        !self.factors.is_empty() && self.factors.iter().all(|&n| n == 2)
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(SmallVec::from_elem(0, self.factors.len()))
    }

    pub fn contains(&self, a: &GroupElement) -> bool {
        a.0.len() == self.factors.len() && a.0.iter().zip(&self.factors).all(|(c, n)| c < n)
    }

    pub fn check(&self, a: &GroupElement) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::ForeignElement(a.0.to_vec()))
        }
    }

    /// Reduces arbitrary integer coordinates into the group.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.factors.len() {
            return Err(Error::ForeignElement(
                coords.iter().map(|&c| c as u32).collect(),
            ));
        }
        Ok(GroupElement(
            coords
                .iter()
                .zip(&self.factors)
                .map(|(&c, &n)| c.rem_euclid(n as i64) as u32)
                .collect(),
        ))
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_unchecked(a, b))
    }

    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        Ok(self.neg_unchecked(a))
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_unchecked(a, &self.neg_unchecked(b)))
    }

    pub(crate) fn add_unchecked(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.factors)
                .map(|((x, y), n)| (x + y) % n)
                .collect(),
        )
    }

    pub(crate) fn neg_unchecked(&self, a: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&self.factors)
                .map(|(x, n)| (n - x) % n)
                .collect(),
        )
    }

    /// `k · a`.
    pub fn scale(&self, a: &GroupElement, k: u64) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&self.factors)
                .map(|(&x, &n)| ((x as u64 * (k % n as u64)) % n as u64) as u32)
                .collect(),
        )
    }

    /// Order of `a`: the lcm over coordinates of `n_i / gcd(n_i, a_i)`.
    pub fn order_of(&self, a: &GroupElement) -> u32 {
        a.0.iter().zip(&self.factors).fold(1u64, |acc, (&x, &n)| {
            let o = n as u64 / gcd(n as u64, x as u64);
            acc / gcd(acc, o) * o
        }) as u32
    }

    /// Dense index of an element; index order matches the lexicographic order of elements.
    pub fn index_of(&self, a: &GroupElement) -> usize {
        a.0.iter()
            .zip(&self.strides)
            .map(|(&c, &s)| c as usize * s)
            .sum()
    }

    pub fn element_at(&self, mut index: usize) -> GroupElement {
        GroupElement(
            self.strides
                .iter()
                .map(|&s| {
                    let c = index / s;
                    index %= s;
                    c as u32
                })
                .collect(),
        )
    }

    /// `index_of(a + b)` computed directly on indices.
    pub fn add_index(&self, x: usize, y: usize) -> usize {
        let mut out = 0;
        for (&s, &n) in self.strides.iter().zip(&self.factors) {
            let n = n as usize;
            let (a, b) = ((x / s) % n, (y / s) % n);
            out += ((a + b) % n) * s;
        }
        out
    }

    /// `index_of(-a)` computed directly on the index.
    pub fn neg_index(&self, x: usize) -> usize {
        let mut out = 0;
        for (&s, &n) in self.strides.iter().zip(&self.factors) {
            let n = n as usize;
            out += ((n - (x / s) % n) % n) * s;
        }
        out
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(move |i| self.element_at(i))
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (1..self.order).map(move |i| self.element_at(i))
    }

    /// Subgroup generated by `gens`, computed as a closure under addition.
    pub fn subgroup_generated(&self, gens: &[GroupElement]) -> Result<BTreeSet<GroupElement>> {
        for g in gens {
            self.check(g)?;
        }
        let mut seen = vec![false; self.order];
        let mut queue = vec![self.zero()];
        seen[0] = true;
        while let Some(x) = queue.pop() {
            for g in gens {
                // finite group: closure under + already yields negatives
                let y = self.add_unchecked(&x, g);
                let idx = self.index_of(&y);
                if !seen[idx] {
                    seen[idx] = true;
                    queue.push(y);
                }
            }
        }
        Ok(seen
            .iter()
            .enumerate()
            .filter(|(_, &s)| s)
            .map(|(i, _)| self.element_at(i))
            .collect())
    }
}
