//! Sequences over a ground set `G₀ ⊆ G`, minimal zero-sum sequences, the
//! Davenport constant, and the monoid of zero-sum sequences `B(G₀)`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::factor::{AtomicMonoid, ScanRegion};
use crate::groups::{FiniteAbelianGroup, GroupElement};

/// A finite multiset of group elements, stored sparsely and sorted by element.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(
    try_from = "Vec<(GroupElement, u32)>",
    into = "Vec<(GroupElement, u32)>"
)]
pub struct Sequence {
    items: Vec<(GroupElement, u32)>,
}

impl TryFrom<Vec<(GroupElement, u32)>> for Sequence {
    type Error = String;

    fn try_from(pairs: Vec<(GroupElement, u32)>) -> std::result::Result<Self, String> {
        if let Some((g, _)) = pairs.iter().find(|(_, c)| *c == 0) {
            return Err(format!("zero multiplicity for element {g:?}"));
        }
        Ok(Self::from_pairs(pairs))
    }
}

impl From<Sequence> for Vec<(GroupElement, u32)> {
    fn from(s: Sequence) -> Self {
        s.items
    }
}

impl FromIterator<GroupElement> for Sequence {
    fn from_iter<I: IntoIterator<Item = GroupElement>>(iter: I) -> Self {
        Self::from_pairs(iter.into_iter().map(|g| (g, 1)))
    }
}

impl Sequence {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a sequence from (element, multiplicity) pairs; repeated elements are merged
    /// and zero multiplicities dropped.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (GroupElement, u32)>) -> Self {
        let mut map: BTreeMap<GroupElement, u32> = BTreeMap::new();
        for (g, c) in pairs {
            if c > 0 {
                *map.entry(g).or_default() += c;
            }
        }
        Self {
            items: map.into_iter().collect(),
        }
    }

    pub fn items(&self) -> &[(GroupElement, u32)] {
        &self.items
    }

    /// `|S|`, counted with multiplicity.
    pub fn len(&self) -> usize {
        self.items.iter().map(|(_, c)| *c as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &GroupElement> {
        self.items.iter().map(|(g, _)| g)
    }

    /// `v_g(S)`.
    pub fn count(&self, g: &GroupElement) -> u32 {
        self.items
            .binary_search_by(|(h, _)| h.cmp(g))
            .map_or(0, |i| self.items[i].1)
    }

    pub fn multiply(&self, other: &Sequence) -> Sequence {
        Self::from_pairs(self.items.iter().chain(&other.items).cloned())
    }

    pub fn divides(&self, other: &Sequence) -> bool {
        self.items.iter().all(|(g, c)| other.count(g) >= *c)
    }

    /// `other / self` when `self` divides `other`.
    pub fn divide_into(&self, other: &Sequence) -> Option<Sequence> {
        if !self.divides(other) {
            return None;
        }
        Some(Self {
            items: other
                .items
                .iter()
                .map(|(g, c)| (g.clone(), c - self.count(g)))
                .filter(|(_, c)| *c > 0)
                .collect(),
        })
    }

    /// `σ(S)`, the sum of all terms.
    pub fn sigma(&self, group: &FiniteAbelianGroup) -> GroupElement {
        self.items.iter().fold(group.zero(), |acc, (g, c)| {
            group.add_unchecked(&acc, &group.scale(g, *c as u64))
        })
    }

    /// Checks that every term lies in `group` and, if given, in `ground`.
    pub fn validate(
        &self,
        group: &FiniteAbelianGroup,
        ground: Option<&[GroupElement]>,
    ) -> Result<()> {
        for g in self.support() {
            group.check(g)?;
            if let Some(ground) = ground {
                if ground.binary_search(g).is_err() {
                    return Err(Error::OutsideGroundSet {
                        element: g.coords().to_vec(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// A bitset over the element indices of a group.
#[derive(Clone)]
struct SumSet(Vec<u64>);

impl SumSet {
    fn new(order: usize) -> Self {
        Self(vec![0; order.div_ceil(64)])
    }

    fn has(&self, i: usize) -> bool {
        self.0[i / 64] & (1 << (i % 64)) != 0
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &bits)| {
            let mut bits = bits;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + b)
            })
        })
    }

    /// `self ∪ {g} ∪ (self + g)`.
    fn extend_by(&self, group: &FiniteAbelianGroup, g: usize) -> Self {
        let mut out = self.clone();
        out.set(g);
        for x in self.ones() {
            out.set(group.add_index(x, g));
        }
        out
    }
}

/// Sums of nonempty subsequences of the given terms (indices).
fn subsums(group: &FiniteAbelianGroup, terms: impl IntoIterator<Item = usize>) -> SumSet {
    let mut r = SumSet::new(group.order());
    for g in terms {
        r = r.extend_by(group, g);
    }
    r
}

/// Whether `S` is a minimal zero-sum sequence.
pub fn is_minimal_zero_sum(group: &FiniteAbelianGroup, s: &Sequence) -> Result<bool> {
    if s.is_empty() {
        return Err(Error::EmptySequence);
    }
    s.validate(group, None)?;
    if !s.sigma(group).is_zero() {
        return Ok(false);
    }
    let terms: Vec<usize> = s
        .items
        .iter()
        .flat_map(|(g, c)| std::iter::repeat(group.index_of(g)).take(*c as usize))
        .collect();
    // minimal iff removing one copy of any term leaves a zero-sum free sequence
    for (i, _) in s.items.iter().enumerate() {
        let skip = s.items[..i].iter().map(|(_, c)| *c as usize).sum::<usize>();
        let rest = terms
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != skip)
            .map(|(_, &t)| t);
        if subsums(group, rest).has(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Multiplicity vector over the positions of a fixed ground set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DenseSequence(SmallVec<[u16; 16]>);

impl DenseSequence {
    pub fn zeros(k: usize) -> Self {
        Self(SmallVec::from_elem(0, k))
    }

    pub fn counts(&self) -> &[u16] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|&c| c as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn divides(&self, other: &DenseSequence) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

/// Positions of the ground set, sorted, with their group indices.
struct Ground {
    elements: Vec<GroupElement>,
    index: Vec<usize>,
}

impl Ground {
    fn new(group: &FiniteAbelianGroup, ground: &[GroupElement]) -> Result<Self> {
        let mut elements = ground.to_vec();
        for g in &elements {
            group.check(g)?;
        }
        elements.sort();
        elements.dedup();
        let index = elements.iter().map(|g| group.index_of(g)).collect();
        Ok(Self { elements, index })
    }

    fn position(&self, g: &GroupElement) -> Option<usize> {
        self.elements.binary_search(g).ok()
    }
}

/// All minimal zero-sum sequences over `G₀`, in ascending order as dense vectors over the
/// sorted ground set.
fn atoms_dense(group: &FiniteAbelianGroup, ground: &Ground) -> Vec<DenseSequence> {
    let k = ground.elements.len();
    let mut pos_of = vec![usize::MAX; group.order()];
    for (p, &i) in ground.index.iter().enumerate() {
        pos_of[i] = p;
    }
    let mut out = Vec::new();
    if pos_of[0] != usize::MAX {
        let mut z = DenseSequence::zeros(k);
        z.0[pos_of[0]] = 1;
        out.push(z);
    }
    let nonzero: Vec<usize> = (0..k).filter(|&p| ground.index[p] != 0).collect();
    let branches: Vec<Vec<DenseSequence>> = nonzero
        .par_iter()
        .map(|&p| {
            let mut found = Vec::new();
            let mut counts = DenseSequence::zeros(k);
            counts.0[p] = 1;
            let reach = SumSet::new(group.order()).extend_by(group, ground.index[p]);
            grow(
                group,
                ground,
                &pos_of,
                &nonzero,
                p,
                &mut counts,
                &reach,
                ground.index[p],
                &mut found,
            );
            found
        })
        .collect();
    out.extend(branches.into_iter().flatten());
    out.sort();
    out
}

/// DFS over zero-sum free sequences `U` built in nondecreasing position order; each
/// `U · (−σ(U))` whose closing term sits at or after the last position is an atom, and
/// every atom arises exactly once this way (from its largest term).
#[allow(clippy::too_many_arguments)]
fn grow(
    group: &FiniteAbelianGroup,
    ground: &Ground,
    pos_of: &[usize],
    nonzero: &[usize],
    last: usize,
    counts: &mut DenseSequence,
    reach: &SumSet,
    sum: usize,
    out: &mut Vec<DenseSequence>,
) {
    let close = pos_of[group.neg_index(sum)];
    if close != usize::MAX && close >= last {
        let mut atom = counts.clone();
        atom.0[close] += 1;
        out.push(atom);
    }
    for &p in nonzero.iter().filter(|&&p| p >= last) {
        let g = ground.index[p];
        if reach.has(group.neg_index(g)) {
            continue;
        }
        let next = reach.extend_by(group, g);
        counts.0[p] += 1;
        grow(
            group,
            ground,
            pos_of,
            nonzero,
            p,
            counts,
            &next,
            group.add_index(sum, g),
            out,
        );
        counts.0[p] -= 1;
    }
}

/// All minimal zero-sum sequences over `ground`, sorted.
pub fn enumerate_atoms(
    group: &FiniteAbelianGroup,
    ground: &[GroupElement],
) -> Result<Vec<Sequence>> {
    let g = Ground::new(group, ground)?;
    let mut atoms: Vec<Sequence> = atoms_dense(group, &g)
        .iter()
        .map(|d| to_sequence(&g, d))
        .collect();
    atoms.sort();
    Ok(atoms)
}

/// `D(G₀)`: the maximal length of a minimal zero-sum sequence over `ground`.
pub fn davenport(group: &FiniteAbelianGroup, ground: &[GroupElement]) -> Result<u32> {
    if ground.is_empty() {
        return Err(Error::EmptyGroundSet);
    }
    let g = Ground::new(group, ground)?;
    Ok(atoms_dense(group, &g)
        .iter()
        .map(|a| a.len() as u32)
        .max()
        .unwrap_or(0))
}

/// `D(G)` over the whole group.
pub fn davenport_of_group(group: &FiniteAbelianGroup) -> u32 {
    let all: Vec<GroupElement> = group.elements().collect();
    davenport(group, &all).expect("a group is nonempty")
}

fn to_sequence(ground: &Ground, d: &DenseSequence) -> Sequence {
    Sequence {
        items: d
            .0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(p, &c)| (ground.elements[p].clone(), c as u32))
            .collect(),
    }
}

/// The monoid `B(G₀)` of zero-sum sequences over a ground set.
pub struct ZeroSumMonoid {
    group: FiniteAbelianGroup,
    ground: Ground,
    atoms: Vec<DenseSequence>,
}

impl ZeroSumMonoid {
    pub fn new(group: FiniteAbelianGroup, ground: &[GroupElement]) -> Result<Self> {
        let ground = Ground::new(&group, ground)?;
        let atoms = atoms_dense(&group, &ground);
        Ok(Self {
            group,
            ground,
            atoms,
        })
    }

    /// `B(G)`.
    pub fn full(group: FiniteAbelianGroup) -> Self {
        let all: Vec<GroupElement> = group.elements().collect();
        Self::new(group, &all).expect("elements belong to the group")
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn ground(&self) -> &[GroupElement] {
        &self.ground.elements
    }

    pub fn atoms(&self) -> &[DenseSequence] {
        &self.atoms
    }

    pub fn davenport(&self) -> u32 {
        self.atoms.iter().map(|a| a.len() as u32).max().unwrap_or(0)
    }

    pub fn to_sequence(&self, d: &DenseSequence) -> Sequence {
        to_sequence(&self.ground, d)
    }

    pub fn from_sequence(&self, s: &Sequence) -> Result<DenseSequence> {
        let mut d = DenseSequence::zeros(self.ground.elements.len());
        for (g, c) in s.items() {
            let p = self
                .ground
                .position(g)
                .ok_or_else(|| Error::OutsideGroundSet {
                    element: g.coords().to_vec(),
                })?;
            d.0[p] = u16::try_from(*c)
                .map_err(|_| Error::InvalidComponent(format!("multiplicity {c} too large")))?;
        }
        Ok(d)
    }

    fn sigma_index(&self, d: &DenseSequence) -> usize {
        let mut acc = 0;
        for (p, &c) in d.0.iter().enumerate() {
            for _ in 0..c % self.group.exponent() as u16 {
                acc = self.group.add_index(acc, self.ground.index[p]);
            }
        }
        acc
    }

    /// Every zero-sum sequence of length at most `max_len` whose terms are nonzero, sorted.
    ///
    /// The zero element is a prime of `B(G₀)`: multiplying by it shifts every length by one and
    /// leaves distances and catenary degrees unchanged, so it is left out of scan regions.
    pub fn zero_free_region(&self, max_len: usize) -> ScanRegion<DenseSequence> {
        let k = self.ground.elements.len();
        let nonzero: Vec<usize> = (0..k).filter(|&p| self.ground.index[p] != 0).collect();
        let mut out = Vec::new();
        let mut counts = DenseSequence::zeros(k);
        self.region_dfs(&nonzero, 0, 0, max_len, &mut counts, &mut out);
        out.sort();
        ScanRegion {
            elements: out,
            divisor_closed: true,
        }
    }

    /// Number of elements [`Self::zero_free_region`] would produce, saturating.
    pub fn zero_free_region_size(&self, max_len: usize) -> u128 {
        let n = self.group.order();
        // table[len][sum]
        let mut table = vec![vec![0u128; n]; max_len + 1];
        table[0][0] = 1;
        for &g in self.ground.index.iter().filter(|&&g| g != 0) {
            for len in 1..=max_len {
                for sum in 0..n {
                    let prev = table[len - 1][self.group.add_index(sum, self.group.neg_index(g))];
                    table[len][sum] = table[len][sum].saturating_add(prev);
                }
            }
        }
        table
            .iter()
            .fold(0u128, |acc, row| acc.saturating_add(row[0]))
    }

    fn region_dfs(
        &self,
        nonzero: &[usize],
        from: usize,
        sum: usize,
        room: usize,
        counts: &mut DenseSequence,
        out: &mut Vec<DenseSequence>,
    ) {
        if sum == 0 {
            out.push(counts.clone());
        }
        if room == 0 {
            return;
        }
        for i in from..nonzero.len() {
            let p = nonzero[i];
            counts.0[p] += 1;
            self.region_dfs(
                nonzero,
                i,
                self.group.add_index(sum, self.ground.index[p]),
                room - 1,
                counts,
                out,
            );
            counts.0[p] -= 1;
        }
    }
}

impl AtomicMonoid for ZeroSumMonoid {
    type Element = DenseSequence;

    fn identity(&self) -> DenseSequence {
        DenseSequence::zeros(self.ground.elements.len())
    }

    fn is_identity(&self, a: &DenseSequence) -> bool {
        a.is_empty()
    }

    fn contains(&self, a: &DenseSequence) -> bool {
        a.0.len() == self.ground.elements.len() && self.sigma_index(a) == 0
    }

    fn multiply(&self, a: &DenseSequence, b: &DenseSequence) -> DenseSequence {
        DenseSequence(
            a.0.iter()
                .zip(&b.0)
                .map(|(x, y)| x.checked_add(*y).expect("multiplicity overflow"))
                .collect(),
        )
    }

    fn divide(&self, a: &DenseSequence, u: &DenseSequence) -> Option<DenseSequence> {
        // a zero-sum divisor of a zero-sum sequence leaves a zero-sum quotient
        u.divides(a)
            .then(|| DenseSequence(a.0.iter().zip(&u.0).map(|(x, y)| x - y).collect()))
    }

    fn atoms_dividing(&self, a: &DenseSequence) -> Vec<DenseSequence> {
        self.atoms
            .iter()
            .filter(|u| u.divides(a))
            .cloned()
            .collect()
    }

    fn divides_product(&self, u: &DenseSequence, v: &DenseSequence, a: &DenseSequence) -> bool {
        u.0.iter()
            .zip(&v.0)
            .zip(&a.0)
            .all(|((x, y), z)| x + y <= *z)
    }
}
