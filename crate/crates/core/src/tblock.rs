//! T-block monoids `B(G₀, T, ι) ⊆ F(G₀) × D_1 × ⋯ × D_n`: an element is a
//! sequence over `G₀` together with one element per primary component, and it
//! belongs to `B` when its total class is zero.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::{AtomicMonoid, ScanRegion};
use crate::groups::{FiniteAbelianGroup, GroupElement};
use crate::primary::{PrimaryComponentSpec, PrimaryElement};
use crate::zerosum::{davenport_of_group, Sequence};

/// Default ceiling on the number of elements a scan region may hold.
pub const DEFAULT_REGION_LIMIT: u128 = 10_000_000;

/// Bounds cutting a finite region out of `B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Caps {
    pub seq_len_cap: usize,
    pub exp_cap: u32,
}

impl std::fmt::Display for Caps {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "seq={},exp={}", self.seq_len_cap, self.exp_cap)
    }
}

/// An element of `F = F(G₀) × D_1 × ⋯ × D_n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockElement {
    pub seq: Sequence,
    pub parts: Vec<PrimaryElement>,
}

impl BlockElement {
    pub fn identity(n: usize) -> Self {
        Self {
            seq: Sequence::new(),
            parts: vec![PrimaryElement::Identity; n],
        }
    }

    pub fn is_identity(&self) -> bool {
        self.seq.is_empty() && self.parts.iter().all(PrimaryElement::is_identity)
    }

    /// Total number of prime factors in `F`; proper divisors in `B` have strictly smaller degree.
    pub fn degree(&self) -> u64 {
        self.seq.len() as u64
            + self
                .parts
                .iter()
                .flat_map(|p| p.exponents())
                .map(|&k| k as u64)
                .sum::<u64>()
    }

    fn within(&self, caps: &Caps) -> bool {
        self.seq.len() <= caps.seq_len_cap
            && self
                .parts
                .iter()
                .flat_map(|p| p.exponents())
                .all(|&k| k <= caps.exp_cap)
    }
}

/// Group, ground set and components defining a T-block monoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TBlockSpec {
    group: FiniteAbelianGroup,
    ground: Vec<GroupElement>,
    components: Vec<PrimaryComponentSpec>,
}

impl TBlockSpec {
    /// `ground = None` means all of `G`.
    pub fn new(
        group: FiniteAbelianGroup,
        ground: Option<Vec<GroupElement>>,
        components: Vec<PrimaryComponentSpec>,
    ) -> Result<Self> {
        let mut ground = match ground {
            Some(g) => g,
            None => group.elements().collect(),
        };
        for g in &ground {
            group.check(g)?;
        }
        ground.sort();
        ground.dedup();
        for c in &components {
            for q in c.prime_classes().iter().chain(c.unit_classes()) {
                group.check(q)?;
            }
        }
        Ok(Self {
            group,
            ground,
            components,
        })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn ground(&self) -> &[GroupElement] {
        &self.ground
    }

    pub fn ground_is_full(&self) -> bool {
        self.ground.len() == self.group.order()
    }

    pub fn components(&self) -> &[PrimaryComponentSpec] {
        &self.components
    }

    /// Default region: sequences up to `3·D(G)`, exponents up to `2·exp(G) + 2`.
    pub fn default_caps(&self) -> Caps {
        Caps {
            seq_len_cap: 3 * davenport_of_group(&self.group) as usize,
            exp_cap: 2 * self.group.exponent() + 2,
        }
    }

    /// Checks the shape of an element of `F` (not membership in `B`).
    pub fn check_shape(&self, a: &BlockElement) -> Result<()> {
        a.seq.validate(&self.group, Some(&self.ground))?;
        if a.parts.len() != self.components.len() {
            return Err(Error::InvalidComponent(format!(
                "expected {} parts, got {}",
                self.components.len(),
                a.parts.len()
            )));
        }
        for (c, p) in self.components.iter().zip(&a.parts) {
            c.check(p)?;
        }
        Ok(())
    }

    /// `σ(S) + Σ_ν [a_ν]`.
    pub fn class_of(&self, a: &BlockElement) -> GroupElement {
        self.components
            .iter()
            .zip(&a.parts)
            .fold(a.seq.sigma(&self.group), |acc, (c, p)| {
                self.group.add_unchecked(&acc, &c.class(&self.group, p))
            })
    }

    pub fn is_member(&self, a: &BlockElement) -> bool {
        self.check_shape(a).is_ok() && self.class_of(a).is_zero()
    }

    fn check_member(&self, a: &BlockElement) -> Result<()> {
        self.check_shape(a)?;
        if self.class_of(a).is_zero() {
            Ok(())
        } else {
            Err(Error::NotMember)
        }
    }

    pub fn multiply(&self, a: &BlockElement, b: &BlockElement) -> BlockElement {
        BlockElement {
            seq: a.seq.multiply(&b.seq),
            parts: self
                .components
                .iter()
                .zip(a.parts.iter().zip(&b.parts))
                .map(|(c, (x, y))| c.multiply(&self.group, x, y))
                .collect(),
        }
    }

    pub fn divides_in_f(&self, u: &BlockElement, a: &BlockElement) -> bool {
        u.seq.divides(&a.seq)
            && self
                .components
                .iter()
                .zip(u.parts.iter().zip(&a.parts))
                .all(|(c, (x, y))| c.divides(x, y))
    }

    /// `a / u` in `F`.
    pub fn divide_in_f(&self, a: &BlockElement, u: &BlockElement) -> Option<BlockElement> {
        let seq = u.seq.divide_into(&a.seq)?;
        let parts = self
            .components
            .iter()
            .zip(a.parts.iter().zip(&u.parts))
            .map(|(c, (x, y))| c.divide(&self.group, x, y))
            .collect::<Option<Vec<_>>>()?;
        Some(BlockElement { seq, parts })
    }

    /// Divisibility in `B`; both arguments must be members.
    pub fn divides_in_b(&self, u: &BlockElement, a: &BlockElement) -> Result<bool> {
        self.check_member(u)?;
        self.check_member(a)?;
        Ok(self.divides_in_f(u, a))
    }

    /// `|S| + 2 Σ_ν max L(a_ν)`.
    pub fn norm(&self, a: &BlockElement) -> u64 {
        a.seq.len() as u64
            + 2 * self
                .components
                .iter()
                .zip(&a.parts)
                .map(|(c, p)| c.max_length(p) as u64)
                .sum::<u64>()
    }

    /// Every divisor of `a` in `F`, identity included.
    fn f_divisors(&self, a: &BlockElement) -> Vec<BlockElement> {
        let mut seqs = vec![Sequence::new()];
        for (g, c) in a.seq.items() {
            let mut next = Vec::with_capacity(seqs.len() * (*c as usize + 1));
            for s in &seqs {
                for m in 0..=*c {
                    next.push(s.multiply(&Sequence::from_pairs([(g.clone(), m)])));
                }
            }
            seqs = next;
        }
        let mut partials: Vec<Vec<PrimaryElement>> = vec![Vec::new()];
        for (c, p) in self.components.iter().zip(&a.parts) {
            let mut options = vec![PrimaryElement::Identity];
            options.extend(c.divisors(p));
            let mut next = Vec::with_capacity(partials.len() * options.len());
            for prefix in &partials {
                for o in &options {
                    let mut v = prefix.clone();
                    v.push(o.clone());
                    next.push(v);
                }
            }
            partials = next;
        }
        let mut out = Vec::with_capacity(seqs.len() * partials.len());
        for s in &seqs {
            for parts in &partials {
                out.push(BlockElement {
                    seq: s.clone(),
                    parts: parts.clone(),
                });
            }
        }
        out
    }

    /// Atoms of `B` dividing `a`, found by sieving its class-zero divisors in order of degree.
    pub fn atoms_dividing(&self, a: &BlockElement) -> Result<Vec<BlockElement>> {
        self.check_member(a)?;
        let mut candidates: Vec<BlockElement> = self
            .f_divisors(a)
            .into_iter()
            .filter(|d| !d.is_identity() && self.class_of(d).is_zero())
            .collect();
        candidates.sort_by_key(|d| d.degree());
        Ok(self.sieve(candidates))
    }

    /// Keeps the elements with no earlier kept element dividing them; input sorted by degree.
    fn sieve(&self, by_degree: Vec<BlockElement>) -> Vec<BlockElement> {
        let mut atoms: Vec<BlockElement> = Vec::new();
        for d in by_degree {
            if !atoms.iter().any(|u| self.divides_in_f(u, &d)) {
                atoms.push(d);
            }
        }
        atoms.sort();
        atoms
    }

    pub fn is_atom(&self, a: &BlockElement) -> Result<bool> {
        if a.is_identity() {
            return Err(Error::IdentityNotAtom);
        }
        Ok(self.atoms_dividing(a)?.len() == 1)
    }

    fn seqs_by_class(&self, max_len: usize) -> BTreeMap<usize, Vec<Sequence>> {
        let letters: Vec<&GroupElement> = self.ground.iter().filter(|g| !g.is_zero()).collect();
        let mut out: BTreeMap<usize, Vec<Sequence>> = BTreeMap::new();
        let mut counts = vec![0u32; letters.len()];
        fn rec(
            spec: &TBlockSpec,
            letters: &[&GroupElement],
            from: usize,
            room: usize,
            sum: usize,
            counts: &mut Vec<u32>,
            out: &mut BTreeMap<usize, Vec<Sequence>>,
        ) {
            out.entry(sum).or_default().push(Sequence::from_pairs(
                letters
                    .iter()
                    .zip(counts.iter())
                    .map(|(g, &c)| ((*g).clone(), c)),
            ));
            if room == 0 {
                return;
            }
            for i in from..letters.len() {
                counts[i] += 1;
                let next = spec.group.add_index(sum, spec.group.index_of(letters[i]));
                rec(spec, letters, i, room - 1, next, counts, out);
                counts[i] -= 1;
            }
        }
        rec(self, &letters, 0, max_len, 0, &mut counts, &mut out);
        out
    }

    /// Number of elements `enumerate_region` would return.
    pub fn region_size(&self, caps: &Caps) -> u128 {
        let order = self.group.order();
        let mut dist = vec![0u128; order];
        for (class, seqs) in self.seqs_by_class(caps.seq_len_cap) {
            dist[class] += seqs.len() as u128;
        }
        for c in &self.components {
            let mut part = vec![0u128; order];
            for p in c.elements_up_to(caps.exp_cap) {
                part[self.group.index_of(&c.class(&self.group, &p))] += 1;
            }
            let mut next = vec![0u128; order];
            for (x, &a) in dist.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (y, &b) in part.iter().enumerate() {
                    next[self.group.add_index(x, y)] += a * b;
                }
            }
            dist = next;
        }
        dist[0]
    }

    /// Every element of `B` within the caps whose sequence avoids the zero element, sorted.
    ///
    /// The zero element is a prime of `B`; multiplying by it shifts lengths without changing
    /// distances or catenary degrees, so regions leave it out. The region is divisor-closed.
    pub fn enumerate_region(&self, caps: &Caps, limit: u128) -> Result<Vec<BlockElement>> {
        let count = self.region_size(caps);
        if count > limit {
            return Err(Error::RegionTooLarge { count, limit });
        }
        let seqs = self.seqs_by_class(caps.seq_len_cap);
        let part_options: Vec<Vec<(usize, PrimaryElement)>> = self
            .components
            .iter()
            .map(|c| {
                c.elements_up_to(caps.exp_cap)
                    .into_iter()
                    .map(|p| (self.group.index_of(&c.class(&self.group, &p)), p))
                    .collect()
            })
            .collect();
        let mut out = Vec::with_capacity(count as usize);
        let mut parts = Vec::with_capacity(self.components.len());
        self.region_rec(&part_options, &seqs, 0, &mut parts, &mut out);
        out.sort();
        Ok(out)
    }

    fn region_rec(
        &self,
        options: &[Vec<(usize, PrimaryElement)>],
        seqs: &BTreeMap<usize, Vec<Sequence>>,
        class: usize,
        parts: &mut Vec<PrimaryElement>,
        out: &mut Vec<BlockElement>,
    ) {
        if parts.len() == options.len() {
            if let Some(list) = seqs.get(&self.group.neg_index(class)) {
                for s in list {
                    out.push(BlockElement {
                        seq: s.clone(),
                        parts: parts.clone(),
                    });
                }
            }
            return;
        }
        for (c, p) in &options[parts.len()] {
            parts.push(p.clone());
            self.region_rec(options, seqs, self.group.add_index(class, *c), parts, out);
            parts.pop();
        }
    }
}

/// `B` as an [`AtomicMonoid`], optionally with a precomputed atom catalog for a region.
pub struct BlockMonoid {
    spec: TBlockSpec,
    catalog: Option<(Caps, Vec<BlockElement>)>,
}

impl BlockMonoid {
    pub fn new(spec: TBlockSpec) -> Self {
        Self {
            spec,
            catalog: None,
        }
    }

    /// Enumerates the region for `caps` and records every atom inside it; returns the region.
    pub fn with_region(
        spec: TBlockSpec,
        caps: Caps,
        limit: u128,
    ) -> Result<(Self, ScanRegion<BlockElement>)> {
        let elements = spec.enumerate_region(&caps, limit)?;
        let mut by_degree: Vec<BlockElement> = elements
            .iter()
            .filter(|a| !a.is_identity())
            .cloned()
            .collect();
        by_degree.sort_by_key(|a| a.degree());
        let atoms = spec.sieve(by_degree);
        Ok((
            Self {
                spec,
                catalog: Some((caps, atoms)),
            },
            ScanRegion {
                elements,
                divisor_closed: true,
            },
        ))
    }

    pub fn spec(&self) -> &TBlockSpec {
        &self.spec
    }

    /// Atoms inside the catalogued region, if any.
    pub fn catalog(&self) -> Option<&[BlockElement]> {
        self.catalog.as_ref().map(|(_, a)| a.as_slice())
    }
}

impl AtomicMonoid for BlockMonoid {
    type Element = BlockElement;

    fn identity(&self) -> BlockElement {
        BlockElement::identity(self.spec.components.len())
    }

    fn is_identity(&self, a: &BlockElement) -> bool {
        a.is_identity()
    }

    fn contains(&self, a: &BlockElement) -> bool {
        self.spec.is_member(a)
    }

    fn multiply(&self, a: &BlockElement, b: &BlockElement) -> BlockElement {
        self.spec.multiply(a, b)
    }

    fn divide(&self, a: &BlockElement, u: &BlockElement) -> Option<BlockElement> {
        self.spec.divide_in_f(a, u)
    }

    fn atoms_dividing(&self, a: &BlockElement) -> Vec<BlockElement> {
        // zero letters are primes; the catalog is built without them
        let plain = !a.seq.support().any(GroupElement::is_zero);
        match &self.catalog {
            Some((caps, atoms)) if plain && a.within(caps) => atoms
                .iter()
                .filter(|u| self.spec.divides_in_f(u, a))
                .cloned()
                .collect(),
            _ => self.spec.atoms_dividing(a).unwrap_or_default(),
        }
    }

    fn divides_product(&self, u: &BlockElement, v: &BlockElement, a: &BlockElement) -> bool {
        self.spec.divides_in_f(&self.spec.multiply(u, v), a)
    }
}

/// `d_ν` of a component over a class group of order 2.
pub fn thm33_d(component: &PrimaryComponentSpec, group: &FiniteAbelianGroup) -> Result<i32> {
    if group.order() != 2 {
        return Err(Error::NeedsOrderTwo(group.order()));
    }
    let s = component.rank();
    let t = component
        .prime_classes()
        .iter()
        .filter(|q| !q.is_zero())
        .count();
    Ok(if !component.has_trivial_units() {
        1
    } else if s == 1 {
        0
    } else if s == 2 && t == 2 {
        2
    } else if t == 0 {
        -1
    } else {
        1
    })
}

/// Predicted `max Δ` for a class group of order 2:
/// the largest of `d_ν + d_ν′` (`ν ≠ ν′`) and `|d_ν|`.
pub fn thm33_max_delta(spec: &TBlockSpec) -> Result<u32> {
    if spec.group.order() != 2 {
        return Err(Error::NeedsOrderTwo(spec.group.order()));
    }
    if spec.components.is_empty() {
        return Err(Error::NoComponents);
    }
    let d = component_ds(spec)?;
    let singles = d.iter().map(|x| x.unsigned_abs());
    let pairs = (0..d.len()).flat_map(|i| {
        let d = &d;
        (0..d.len())
            .filter(move |&j| j != i)
            .map(move |j| (d[i] + d[j]).max(0) as u32)
    });
    Ok(singles.chain(pairs).max().unwrap_or(0))
}

fn component_ds(spec: &TBlockSpec) -> Result<Vec<i32>> {
    spec.components
        .iter()
        .map(|c| thm33_d(c, &spec.group))
        .collect()
}

/// An explicit pair of atoms whose product has lengths `{2, 2 + max Δ}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// 1 to 4: which extremal value the pair realizes (`max Δ = 5 − case`).
    pub case: u8,
    pub first: BlockElement,
    pub second: BlockElement,
    pub expected_lengths: Vec<u32>,
}

fn mismatch(case: u8, reason: impl Into<String>) -> Error {
    Error::WitnessMismatch {
        case,
        reason: reason.into(),
    }
}

/// Builds the witness pair for the case determined by the predicted `max Δ`.
pub fn witness(spec: &TBlockSpec) -> Result<Witness> {
    let max = thm33_max_delta(spec)?;
    if max == 0 {
        return Err(mismatch(5, "every d is 0, so the monoid is half-factorial"));
    }
    witness_generator(spec, 5 - max as u8)
}

/// Builds the witness pair for `case` (1 to 4), failing if the spec's d-profile does not match.
pub fn witness_generator(spec: &TBlockSpec, case: u8) -> Result<Witness> {
    let max = thm33_max_delta(spec)?;
    if !(1..=4).contains(&case) {
        return Err(mismatch(case, "cases run from 1 to 4"));
    }
    if max as u8 + case != 5 {
        return Err(mismatch(case, format!("the spec predicts max delta {max}")));
    }
    let d = component_ds(spec)?;
    let find = |v: i32, skip: Option<usize>| (0..d.len()).find(|&i| d[i] == v && Some(i) != skip);
    let w = WitnessBuilder { spec };
    let (first, second) = match case {
        1 => {
            let i = find(2, None).expect("two components with d = 2");
            let j = find(2, Some(i)).expect("two components with d = 2");
            let mut a = w.blank();
            let mut b = w.blank();
            for c in [i, j] {
                a.parts[c] = w.part(c, &[1, 2]);
                b.parts[c] = w.part(c, &[2, 1]);
            }
            (a, b)
        }
        2 => {
            let i = find(2, None).expect("a component with d = 2");
            let j = find(1, None).expect("a component with d = 1");
            let (a1, a2) = w.d1_pair(j)?;
            let mut a = w.blank();
            let mut b = w.blank();
            a.parts[i] = w.part(i, &[1, 2]);
            b.parts[i] = w.part(i, &[2, 1]);
            a.parts[j] = a1;
            b.parts[j] = a2;
            (a, b)
        }
        3 => {
            if let (Some(i), Some(j)) = (find(1, None), find(1, find(1, None))) {
                let (a1, a2) = w.d1_pair(i)?;
                let (b1, b2) = w.d1_pair(j)?;
                let mut a = w.blank();
                let mut b = w.blank();
                a.parts[i] = a1;
                b.parts[i] = a2;
                a.parts[j] = b1;
                b.parts[j] = b2;
                (a, b)
            } else {
                let i = find(2, None).expect("a component with d = 2");
                let e = w.letter_e(case)?;
                let mut a = w.blank();
                let mut b = w.blank();
                a.seq = e.clone();
                b.seq = e;
                a.parts[i] = w.part(i, &[1, 2]);
                b.parts[i] = w.part(i, &[2, 1]);
                (a, b)
            }
        }
        _ => {
            if let Some(i) = find(1, None) {
                let (a1, a2) = w.d1_pair(i)?;
                let e = w.letter_e(case)?;
                let mut a = w.blank();
                let mut b = w.blank();
                a.seq = e.clone();
                b.seq = e;
                a.parts[i] = a1;
                b.parts[i] = a2;
                (a, b)
            } else {
                let i = find(-1, None).expect("a component with d = -1");
                let s = spec.components[i].rank();
                let mut k1 = vec![1; s];
                k1[0] = 2;
                let mut k2 = vec![2; s];
                k2[0] = 1;
                let mut a = w.blank();
                let mut b = w.blank();
                a.parts[i] = w.part(i, &k1);
                b.parts[i] = w.part(i, &k2);
                (a, b)
            }
        }
    };
    for (name, x) in [("first", &first), ("second", &second)] {
        if !spec.is_member(x) || !spec.is_atom(x)? {
            return Err(mismatch(
                case,
                format!("{name} element is not an atom: {x:?}"),
            ));
        }
    }
    Ok(Witness {
        case,
        first,
        second,
        expected_lengths: vec![2, 2 + max],
    })
}

struct WitnessBuilder<'a> {
    spec: &'a TBlockSpec,
}

impl WitnessBuilder<'_> {
    fn blank(&self) -> BlockElement {
        BlockElement::identity(self.spec.components.len())
    }

    fn part(&self, c: usize, k: &[u32]) -> PrimaryElement {
        self.unit_part(c, self.spec.group.zero(), k)
    }

    fn unit_part(&self, _c: usize, unit: GroupElement, k: &[u32]) -> PrimaryElement {
        PrimaryElement::NonUnit {
            unit,
            exponents: k.iter().copied().collect(),
        }
    }

    fn letter_e(&self, case: u8) -> Result<Sequence> {
        let e = self.spec.group.element_at(1);
        if !self.spec.ground.contains(&e) {
            return Err(mismatch(case, "the nonzero class is not in the ground set"));
        }
        Ok(Sequence::from_pairs([(e, 1)]))
    }

    /// The pair `(a_1, a_2)` of atoms of class `e` from a component with `d = 1`.
    fn d1_pair(&self, c: usize) -> Result<(PrimaryElement, PrimaryElement)> {
        let g = &self.spec.group;
        let comp = &self.spec.components[c];
        let s = comp.rank();
        let e = g.element_at(1);
        if !comp.has_trivial_units() {
            let primes = comp
                .prime_classes()
                .iter()
                .fold(g.zero(), |acc, q| g.add_unchecked(&acc, q));
            let unit = g.add_unchecked(&e, &g.neg_unchecked(&primes));
            let a = self.unit_part(c, unit, &vec![1; s]);
            return Ok((a.clone(), a));
        }
        let e_idx: Vec<usize> = (0..s)
            .filter(|&i| !comp.prime_classes()[i].is_zero())
            .collect();
        let mut k1 = vec![1u32; s];
        let mut k2 = vec![1u32; s];
        match e_idx.len() {
            1 => {
                k2[e_idx[0]] = 3;
            }
            t if t >= 2 && s >= 3 => {
                let (i1, i2) = (e_idx[0], e_idx[1]);
                let rest_is_e = (t - 2) % 2 == 1;
                let delta = if rest_is_e { 1 } else { 2 };
                k1[i2] = delta;
                k2[i2] = delta;
                k2[i1] = 3;
            }
            _ => return Err(mismatch(0, "component does not have d = 1")),
        }
        Ok((self.part(c, &k1), self.part(c, &k2)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::Engine;

    fn el(v: &[u32]) -> GroupElement {
        GroupElement::new(v.iter().copied())
    }

    fn comp(g: &FiniteAbelianGroup, gens: &[&[u32]], primes: &[&[u32]]) -> PrimaryComponentSpec {
        PrimaryComponentSpec::new(
            g,
            primes.len(),
            gens.iter().map(|c| el(c)).collect(),
            primes.iter().map(|c| el(c)).collect(),
        )
        .unwrap()
    }

    fn part(k: &[u32]) -> PrimaryElement {
        PrimaryElement::NonUnit {
            unit: el(&[0]),
            exponents: k.iter().copied().collect(),
        }
    }

    /// `F(C_n) × D` with `ι(p_1) = e`, `ι(p_2) = −e`.
    fn rank_two_over_cyclic(n: u32) -> TBlockSpec {
        let g = FiniteAbelianGroup::cyclic(n).unwrap();
        let c = comp(&g, &[], &[&[1], &[n - 1]]);
        TBlockSpec::new(g, None, vec![c]).unwrap()
    }

    fn block(seq: &[(u32, u32)], k: &[u32]) -> BlockElement {
        BlockElement {
            seq: Sequence::from_pairs(seq.iter().map(|&(g, c)| (el(&[g]), c))),
            parts: vec![part(k)],
        }
    }

    #[test]
    fn class_and_membership() {
        let spec = rank_two_over_cyclic(4);
        assert!(spec.class_of(&BlockElement::identity(1)).is_zero());
        assert!(spec.class_of(&block(&[], &[1, 1])).is_zero());
        assert!(!spec.is_member(&block(&[], &[1, 2])));
        let c2 = FiniteAbelianGroup::cyclic(2).unwrap();
        let bare = TBlockSpec::new(c2, None, vec![]).unwrap();
        let ee = BlockElement {
            seq: Sequence::from_pairs([(el(&[1]), 2)]),
            parts: vec![],
        };
        assert!(bare.class_of(&ee).is_zero());
    }

    #[test]
    fn divisibility_in_b() {
        let n = 3;
        let spec = rank_two_over_cyclic(n);
        let b = block(&[(1, 1)], &[n + 1, n + 2]);
        assert!(spec.divides_in_b(&BlockElement::identity(1), &b).unwrap());
        assert!(spec.divides_in_b(&block(&[(1, 1)], &[1, 2]), &b).unwrap());
        let g = FiniteAbelianGroup::cyclic(2).unwrap();
        let spec2 = TBlockSpec::new(g.clone(), None, vec![comp(&g, &[], &[&[0], &[0]])]).unwrap();
        let u = BlockElement {
            seq: Sequence::new(),
            parts: vec![part(&[1, 1])],
        };
        let a = BlockElement {
            seq: Sequence::new(),
            parts: vec![part(&[1, 2])],
        };
        assert!(!spec2.divides_in_b(&u, &a).unwrap());
        assert_eq!(
            spec.divides_in_b(&block(&[], &[1, 2]), &b),
            Err(Error::NotMember)
        );
    }

    #[test]
    fn atoms_dividing_worked_examples() {
        for n in 3..=5 {
            let spec = rank_two_over_cyclic(n);
            let b = block(&[(1, 1)], &[n + 1, n + 2]);
            let mut expected = vec![
                block(&[], &[1, 1]),
                block(&[], &[1, n + 1]),
                block(&[(1, 1)], &[1, 2]),
                block(&[(1, 1)], &[n, 1]),
            ];
            expected.sort();
            assert_eq!(spec.atoms_dividing(&b).unwrap(), expected);

            let only_primes = TBlockSpec::new(
                spec.group().clone(),
                Some(vec![]),
                spec.components().to_vec(),
            )
            .unwrap();
            let a = block(&[], &[n + 2, n + 2]);
            let mut expected = vec![
                block(&[], &[1, 1]),
                block(&[], &[1, n + 1]),
                block(&[], &[n + 1, 1]),
            ];
            expected.sort();
            assert_eq!(only_primes.atoms_dividing(&a).unwrap(), expected);

            let m = BlockMonoid::new(spec.clone());
            let mut e = Engine::new(&m);
            assert_eq!(e.length_set(&b).unwrap().to_vec(), vec![2, n + 1]);
            assert_eq!(e.length_set(&a).unwrap().to_vec(), vec![2, n + 2]);
        }
    }

    #[test]
    fn norm_examples() {
        let g = FiniteAbelianGroup::cyclic(2).unwrap();
        let spec = TBlockSpec::new(g.clone(), None, vec![comp(&g, &[], &[&[0], &[0]])]).unwrap();
        assert_eq!(spec.norm(&BlockElement::identity(1)), 0);
        let a = BlockElement {
            seq: Sequence::from_pairs([(el(&[1]), 1)]),
            parts: vec![part(&[3, 5])],
        };
        assert_eq!(spec.norm(&a), 7);
        let bare = TBlockSpec::new(g, None, vec![]).unwrap();
        let gh = BlockElement {
            seq: Sequence::from_pairs([(el(&[1]), 2)]),
            parts: vec![],
        };
        assert_eq!(bare.norm(&gh), 2);
    }

    #[test]
    fn region_examples() {
        let t = FiniteAbelianGroup::trivial();
        let spec = TBlockSpec::new(t, None, vec![]).unwrap();
        let caps = Caps {
            seq_len_cap: 0,
            exp_cap: 0,
        };
        assert_eq!(
            spec.enumerate_region(&caps, 10).unwrap(),
            vec![BlockElement::identity(0)]
        );

        let c2 = FiniteAbelianGroup::cyclic(2).unwrap();
        let spec = TBlockSpec::new(c2, None, vec![]).unwrap();
        let caps = Caps {
            seq_len_cap: 4,
            exp_cap: 0,
        };
        let r = spec.enumerate_region(&caps, 100).unwrap();
        assert_eq!(
            r.iter().map(|a| a.seq.len()).collect::<Vec<_>>(),
            vec![0, 2, 4]
        );
        assert_eq!(spec.region_size(&caps), 3);

        let n = 3;
        let spec = rank_two_over_cyclic(n);
        let caps = Caps {
            seq_len_cap: 2 * n as usize,
            exp_cap: n + 2,
        };
        let r = spec.enumerate_region(&caps, 1_000_000).unwrap();
        assert_eq!(r.len() as u128, spec.region_size(&caps));
        assert!(r.contains(&block(&[(1, 1)], &[n + 1, n + 2])));
        assert!(r.contains(&block(&[], &[n + 2, n + 2])));
        assert!(r.windows(2).all(|w| w[0] < w[1]));
        assert!(matches!(
            spec.enumerate_region(&caps, 5),
            Err(Error::RegionTooLarge { .. })
        ));
    }

    #[test]
    fn catalog_matches_direct_atoms() {
        let spec = rank_two_over_cyclic(3);
        let caps = Caps {
            seq_len_cap: 4,
            exp_cap: 4,
        };
        let (m, region) = BlockMonoid::with_region(spec.clone(), caps, 1_000_000).unwrap();
        for a in &region.elements {
            assert_eq!(
                m.atoms_dividing(a),
                spec.atoms_dividing(a).unwrap(),
                "{a:?}"
            );
        }
    }

    #[test]
    fn d_table() {
        let g = FiniteAbelianGroup::cyclic(2).unwrap();
        let e: &[u32] = &[1];
        let z: &[u32] = &[0];
        assert_eq!(thm33_d(&comp(&g, &[], &[e, e]), &g).unwrap(), 2);
        assert_eq!(thm33_d(&comp(&g, &[], &[z, z, z]), &g).unwrap(), -1);
        assert_eq!(thm33_d(&comp(&g, &[e], &[z, e]), &g).unwrap(), 1);
        assert_eq!(thm33_d(&comp(&g, &[e], &[z]), &g).unwrap(), 1);
        assert_eq!(thm33_d(&comp(&g, &[], &[e]), &g).unwrap(), 0);
        assert_eq!(thm33_d(&comp(&g, &[], &[z, e]), &g).unwrap(), 1);
        assert_eq!(thm33_d(&comp(&g, &[], &[e, e, e]), &g).unwrap(), 1);
        let c3 = FiniteAbelianGroup::cyclic(3).unwrap();
        assert_eq!(
            thm33_d(&comp(&c3, &[], &[&[1]]), &c3),
            Err(Error::NeedsOrderTwo(3))
        );
    }

    #[test]
    fn max_delta_formula() {
        let g = FiniteAbelianGroup::cyclic(2).unwrap();
        let e: &[u32] = &[1];
        let z: &[u32] = &[0];
        let two = || comp(&g, &[], &[e, e]);
        let minus = || comp(&g, &[], &[z, z]);
        let zero = || comp(&g, &[], &[e]);
        let spec = TBlockSpec::new(g.clone(), None, vec![two(), two()]).unwrap();
        assert_eq!(thm33_max_delta(&spec).unwrap(), 4);
        let spec = TBlockSpec::new(g.clone(), None, vec![minus(), zero(), zero()]).unwrap();
        assert_eq!(thm33_max_delta(&spec).unwrap(), 1);
        let spec = TBlockSpec::new(g.clone(), None, vec![zero(), zero()]).unwrap();
        assert_eq!(thm33_max_delta(&spec).unwrap(), 0);
        let spec = TBlockSpec::new(g.clone(), None, vec![minus()]).unwrap();
        assert_eq!(thm33_max_delta(&spec).unwrap(), 1);
        let spec = TBlockSpec::new(g, None, vec![]).unwrap();
        assert_eq!(thm33_max_delta(&spec), Err(Error::NoComponents));
    }

    #[test]
    fn witnesses_have_the_predicted_lengths() {
        let g = FiniteAbelianGroup::cyclic(2).unwrap();
        let e: &[u32] = &[1];
        let z: &[u32] = &[0];
        let profiles: Vec<Vec<PrimaryComponentSpec>> = vec![
            vec![comp(&g, &[], &[e, e]), comp(&g, &[], &[e, e])],
            vec![comp(&g, &[], &[e, e]), comp(&g, &[e], &[z])],
            vec![comp(&g, &[], &[e, e]), comp(&g, &[], &[e, z])],
            vec![comp(&g, &[], &[e, e]), comp(&g, &[], &[e, e, z])],
            vec![comp(&g, &[], &[e, e]), comp(&g, &[], &[e, e, e])],
            vec![comp(&g, &[], &[e, e]), comp(&g, &[], &[e, e, z, e])],
            vec![comp(&g, &[e], &[e]), comp(&g, &[], &[e, z, z])],
            vec![comp(&g, &[], &[e, e]), comp(&g, &[], &[e])],
            vec![comp(&g, &[], &[e, e, z]), comp(&g, &[], &[z, z])],
            vec![comp(&g, &[], &[z, z, z]), comp(&g, &[], &[e])],
            vec![comp(&g, &[], &[e, e])],
        ];
        for comps in profiles {
            let spec = TBlockSpec::new(g.clone(), None, comps).unwrap();
            let w = witness(&spec).unwrap();
            let m = BlockMonoid::new(spec.clone());
            let mut eng = Engine::new(&m);
            let prod = spec.multiply(&w.first, &w.second);
            assert_eq!(
                eng.length_set(&prod).unwrap().to_vec(),
                w.expected_lengths,
                "{spec:?}"
            );
        }
    }

    #[test]
    fn witness_rejects_wrong_case() {
        let g = FiniteAbelianGroup::cyclic(2).unwrap();
        let spec = TBlockSpec::new(g.clone(), None, vec![comp(&g, &[], &[&[1], &[1]])]).unwrap();
        assert!(matches!(
            witness_generator(&spec, 1),
            Err(Error::WitnessMismatch { .. })
        ));
        assert_eq!(witness_generator(&spec, 3).unwrap().case, 3);
        let half = TBlockSpec::new(g.clone(), None, vec![comp(&g, &[], &[&[1]])]).unwrap();
        assert!(matches!(
            witness(&half),
            Err(Error::WitnessMismatch { case: 5, .. })
        ));
    }
}
