//! Generic factorization engine: sets of factorizations, sets of lengths,
//! distances, catenary degrees, and region scans.
//!
//! Concrete monoids plug in through [`AtomicMonoid`]. The engine only ever
//! peels atoms off an element, so a monoid needs exact division and a list of
//! the atoms dividing a given element.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Debug;
use std::hash::Hash;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// A reduced, cancellative, atomic monoid in which every element has finitely many divisors.
pub trait AtomicMonoid: Sync {
    /// Elements; the `Ord` impl is the canonical key used to deduplicate factorizations.
    type Element: Clone + Eq + Ord + Hash + Debug + Send + Sync;

    fn identity(&self) -> Self::Element;

    fn is_identity(&self, a: &Self::Element) -> bool;

    fn contains(&self, a: &Self::Element) -> bool;

    fn multiply(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;

    /// `a / u` when `u` divides `a` in the monoid.
    fn divide(&self, a: &Self::Element, u: &Self::Element) -> Option<Self::Element>;

    /// Every atom dividing `a`, once each, in ascending order.
    fn atoms_dividing(&self, a: &Self::Element) -> Vec<Self::Element>;

    /// Whether `u * v` divides `a`.
    fn divides_product(&self, u: &Self::Element, v: &Self::Element, a: &Self::Element) -> bool {
        self.divide(a, u)
            .is_some_and(|b| self.divide(&b, v).is_some())
    }
}

/// A finite set of non-negative integers stored as a bitset.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LengthSet {
    words: SmallVec<[u64; 1]>,
}

impl std::fmt::Debug for LengthSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for LengthSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for LengthSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Vec::<u32>::deserialize(d)?.into_iter().collect())
    }
}

impl FromIterator<u32> for LengthSet {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        let mut l = LengthSet::default();
        for k in iter {
            l.insert(k);
        }
        l
    }
}

impl LengthSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn singleton(k: u32) -> Self {
        let mut l = Self::default();
        l.insert(k);
        l
    }

    pub fn insert(&mut self, k: u32) {
        let w = (k / 64) as usize;
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1 << (k % 64);
    }

    pub fn contains(&self, k: u32) -> bool {
        self.words
            .get((k / 64) as usize)
            .is_some_and(|w| w & (1 << (k % 64)) != 0)
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros();
                w &= w - 1;
                Some(i as u32 * 64 + b)
            })
        })
    }

    pub fn min(&self) -> Option<u32> {
        self.iter().next()
    }

    pub fn max(&self) -> Option<u32> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i as u32 * 64 + 63 - w.leading_zeros())
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }

    /// `self ∪ (other + shift)`.
    pub fn union_shifted(&mut self, other: &LengthSet, shift: u32) {
        for k in other.iter() {
            self.insert(k + shift);
        }
    }

    /// Sumset `self + other`.
    pub fn sumset(&self, other: &LengthSet) -> LengthSet {
        let mut out = LengthSet::empty();
        for k in self.iter() {
            out.union_shifted(other, k);
        }
        out
    }

    pub fn is_subset(&self, other: &LengthSet) -> bool {
        self.iter().all(|k| other.contains(k))
    }

    /// The set of distances: successive gaps of the sorted elements.
    pub fn delta(&self) -> BTreeSet<u32> {
        let v = self.to_vec();
        v.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn max_delta(&self) -> Option<u32> {
        let v = self.to_vec();
        v.windows(2).map(|w| w[1] - w[0]).max()
    }
}

/// Successive gaps of an arbitrary set of lengths.
pub fn delta(l: &LengthSet) -> BTreeSet<u32> {
    l.delta()
}

/// A factorization: a multiset of atoms, kept sorted by atom.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factorization<E> {
    atoms: Vec<(E, u32)>,
}

impl<E: Ord + Clone> Factorization<E> {
    pub fn empty() -> Self {
        Self { atoms: Vec::new() }
    }

    pub fn from_atoms(atoms: impl IntoIterator<Item = E>) -> Self {
        let mut v: Vec<E> = atoms.into_iter().collect();
        v.sort();
        let mut out: Vec<(E, u32)> = Vec::new();
        for a in v {
            match out.last_mut() {
                Some((b, c)) if *b == a => *c += 1,
                _ => out.push((a, 1)),
            }
        }
        Self { atoms: out }
    }

    pub fn atoms(&self) -> &[(E, u32)] {
        &self.atoms
    }

    pub fn length(&self) -> u32 {
        self.atoms.iter().map(|(_, c)| c).sum()
    }

    /// Size of the greatest common sub-multiset.
    fn common(&self, other: &Self) -> u32 {
        let (mut i, mut j, mut n) = (0, 0, 0);
        while i < self.atoms.len() && j < other.atoms.len() {
            match self.atoms[i].0.cmp(&other.atoms[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    n += self.atoms[i].1.min(other.atoms[j].1);
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }

    /// Distance after cancelling the common atoms. Does not check that both factor the same element.
    pub fn distance(&self, other: &Self) -> u32 {
        let c = self.common(other);
        (self.length() - c).max(other.length() - c)
    }

    /// Multiplies the atoms back together.
    pub fn product<M: AtomicMonoid<Element = E>>(&self, m: &M) -> E {
        let mut acc = m.identity();
        for (u, c) in &self.atoms {
            for _ in 0..*c {
                acc = m.multiply(&acc, u);
            }
        }
        acc
    }
}

/// Distance between two factorizations, checked to factor the same element.
pub fn distance<M: AtomicMonoid>(
    m: &M,
    z: &Factorization<M::Element>,
    w: &Factorization<M::Element>,
) -> Result<u32> {
    if z.product(m) != w.product(m) {
        return Err(Error::DifferentElements);
    }
    Ok(z.distance(w))
}

/// Bottleneck weight of a minimum spanning tree of the complete distance graph (Prim, dense).
pub fn bottleneck_catenary<E: Ord + Clone>(z: &[Factorization<E>]) -> u32 {
    let n = z.len();
    if n <= 1 {
        return 0;
    }
    let mut in_tree = vec![false; n];
    let mut best = vec![u32::MAX; n];
    best[0] = 0;
    let mut worst = 0;
    for _ in 0..n {
        let (v, w) = (0..n)
            .filter(|&i| !in_tree[i])
            .map(|i| (i, best[i]))
            .min_by_key(|&(_, w)| w)
            .expect("vertex left");
        in_tree[v] = true;
        worst = worst.max(w);
        for i in 0..n {
            if !in_tree[i] {
                best[i] = best[i].min(z[v].distance(&z[i]));
            }
        }
    }
    worst
}

/// Per-worker engine with a memo of sets of lengths.
pub struct Engine<'m, M: AtomicMonoid> {
    monoid: &'m M,
    lengths: HashMap<M::Element, LengthSet>,
}

impl<'m, M: AtomicMonoid> Engine<'m, M> {
    pub fn new(monoid: &'m M) -> Self {
        Self {
            monoid,
            lengths: HashMap::new(),
        }
    }

    pub fn monoid(&self) -> &'m M {
        self.monoid
    }

    fn check(&self, a: &M::Element) -> Result<()> {
        if self.monoid.contains(a) {
            Ok(())
        } else {
            Err(Error::NotMember)
        }
    }

    /// The set of lengths `L(a)`; `{0}` for the identity.
    pub fn length_set(&mut self, a: &M::Element) -> Result<LengthSet> {
        self.check(a)?;
        Ok(self.lengths_of(a).clone())
    }

    fn lengths_of(&mut self, a: &M::Element) -> &LengthSet {
        if !self.lengths.contains_key(a) {
            let l = self.compute_lengths(a);
            self.lengths.insert(a.clone(), l);
        }
        &self.lengths[a]
    }

    fn compute_lengths(&mut self, a: &M::Element) -> LengthSet {
        let m = self.monoid;
        if m.is_identity(a) {
            return LengthSet::singleton(0);
        }
        let mut acc = LengthSet::empty();
        for u in m.atoms_dividing(a) {
            let b = m.divide(a, &u).expect("atom divides");
            let lb = self.lengths_of(&b);
            acc.union_shifted(lb, 1);
        }
        acc
    }

    /// All factorizations of `a`, each multiset exactly once, in lexicographic order of atom choices.
    pub fn factorizations(&mut self, a: &M::Element) -> Result<Vec<Factorization<M::Element>>> {
        self.check(a)?;
        let m = self.monoid;
        if m.is_identity(a) {
            return Ok(vec![Factorization::empty()]);
        }
        let atoms = m.atoms_dividing(a);
        let mut counts = vec![0u32; atoms.len()];
        let mut out = Vec::new();
        let mut dead = HashSet::new();
        peel(m, &atoms, a, 0, &mut counts, &mut dead, &mut out);
        Ok(out)
    }

    /// `c(a)`: the bottleneck of a minimum spanning tree on `Z(a)`.
    pub fn catenary_degree(&mut self, a: &M::Element) -> Result<u32> {
        Ok(bottleneck_catenary(&self.factorizations(a)?))
    }

    /// The largest minimal length over the classes of `Z(a)` under "shares an atom",
    /// or 0 if there is only one class.
    ///
    /// Over a divisor-closed set this has the same maximum as `c(a)`.
    fn class_bound(&mut self, a: &M::Element) -> u32 {
        let m = self.monoid;
        if m.is_identity(a) {
            return 0;
        }
        let atoms = m.atoms_dividing(a);
        let mut comps: Vec<Vec<usize>> = Vec::new();
        for (j, v) in atoms.iter().enumerate() {
            let mut touching = Vec::new();
            for (ci, comp) in comps.iter().enumerate() {
                if comp.iter().any(|&i| m.divides_product(&atoms[i], v, a)) {
                    touching.push(ci);
                }
            }
            let mut merged = vec![j];
            for &ci in touching.iter().rev() {
                merged.extend(comps.swap_remove(ci));
            }
            comps.push(merged);
        }
        if comps.len() < 2 {
            return 0;
        }
        let mut worst = 0;
        for comp in &comps {
            let shortest = comp
                .iter()
                .map(|&i| {
                    let b = m.divide(a, &atoms[i]).expect("atom divides");
                    1 + self.lengths_of(&b).min().expect("nonempty")
                })
                .min()
                .expect("nonempty class");
            worst = worst.max(shortest);
        }
        worst
    }
}

#[allow(clippy::too_many_arguments)]
fn peel<M: AtomicMonoid>(
    m: &M,
    atoms: &[M::Element],
    b: &M::Element,
    start: usize,
    counts: &mut [u32],
    dead: &mut HashSet<(M::Element, usize)>,
    out: &mut Vec<Factorization<M::Element>>,
) -> bool {
    if m.is_identity(b) {
        out.push(Factorization {
            atoms: atoms
                .iter()
                .zip(counts.iter())
                .filter(|(_, &c)| c > 0)
                .map(|(u, &c)| (u.clone(), c))
                .collect(),
        });
        return true;
    }
    let key = (b.clone(), start);
    if dead.contains(&key) {
        return false;
    }
    let mut found = false;
    for j in start..atoms.len() {
        if let Some(c) = m.divide(b, &atoms[j]) {
            counts[j] += 1;
            found |= peel(m, atoms, &c, j, counts, dead, out);
            counts[j] -= 1;
        }
    }
    if !found {
        dead.insert(key);
    }
    found
}

/// A finite set of monoid elements to scan.
#[derive(Clone, Debug)]
pub struct ScanRegion<E> {
    pub elements: Vec<E>,
    /// Every divisor of a member is again a member.
    pub divisor_closed: bool,
}

/// Outcome of a region scan. `lengths[i]` belongs to `region.elements[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanResult {
    pub lengths: Vec<LengthSet>,
    pub delta: BTreeSet<u32>,
    /// Maximum catenary degree over the region, if requested.
    pub catenary: Option<u32>,
    /// Index of an element attaining `catenary`.
    pub catenary_witness: Option<usize>,
    /// Index of an element attaining `max delta`.
    pub delta_witness: Option<usize>,
}

impl ScanResult {
    pub fn max_delta(&self) -> Option<u32> {
        self.delta.iter().next_back().copied()
    }
}

/// Computes `L(a)` for every element of the region, the union of their
/// distance sets and, optionally, the largest catenary degree.
///
/// Work is split into contiguous chunks, one engine per chunk; results do not
/// depend on the number of workers.
pub fn scan_region<M: AtomicMonoid>(
    m: &M,
    region: &ScanRegion<M::Element>,
    with_catenary: bool,
) -> Result<ScanResult> {
    if let Some(bad) = region.elements.iter().find(|a| !m.contains(a)) {
        log::debug!("non-member in scan region: {bad:?}");
        return Err(Error::NotMember);
    }
    let n = region.elements.len();
    let workers = rayon::current_num_threads().max(1);
    let chunk = n.div_ceil(workers).max(1);
    let parts: Vec<(Vec<LengthSet>, Vec<u32>)> = region
        .elements
        .par_chunks(chunk)
        .map(|slice| {
            let mut engine = Engine::new(m);
            let mut ls = Vec::with_capacity(slice.len());
            let mut cs = Vec::new();
            for a in slice {
                ls.push(engine.lengths_of(a).clone());
                if with_catenary {
                    let c = if region.divisor_closed {
                        engine.class_bound(a)
                    } else {
                        bottleneck_catenary(&engine.factorizations(a).expect("member"))
                    };
                    cs.push(c);
                }
            }
            (ls, cs)
        })
        .collect();

    let mut lengths = Vec::with_capacity(n);
    let mut cats = Vec::new();
    for (ls, cs) in parts {
        lengths.extend(ls);
        cats.extend(cs);
    }
    let mut delta = BTreeSet::new();
    let mut delta_witness: Option<(u32, usize)> = None;
    for (i, l) in lengths.iter().enumerate() {
        let d = l.delta();
        if let Some(&top) = d.iter().next_back() {
            if delta_witness.map_or(true, |(t, _)| top > t) {
                delta_witness = Some((top, i));
            }
        }
        delta.extend(d);
    }
    let (catenary, catenary_witness) = if with_catenary {
        let best =
            cats.iter().enumerate().fold(
                (0u32, None),
                |(b, w), (i, &c)| if c > b { (c, Some(i)) } else { (b, w) },
            );
        (Some(best.0), best.1)
    } else {
        (None, None)
    };
    Ok(ScanResult {
        lengths,
        delta,
        catenary,
        catenary_witness,
        delta_witness: delta_witness.map(|(_, i)| i),
    })
}

/// Runs `f` on a dedicated pool with `workers` threads (0 means machine parallelism).
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(f),
        Err(e) => {
            log::warn!("could not build worker pool ({e}); using the global pool");
            f()
        }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Numerical monoid generated by small integers; a convenient non-half-factorial fixture.
    pub(crate) struct Numerical {
        atoms: Vec<u32>,
    }

    impl Numerical {
        pub(crate) fn new(gens: &[u32]) -> Self {
            let mut atoms: Vec<u32> = Vec::new();
            let mut gens = gens.to_vec();
            gens.sort_unstable();
            for &g in &gens {
                if !Self::in_span(&atoms, g) {
                    atoms.push(g);
                }
            }
            Self { atoms }
        }

        fn in_span(gens: &[u32], x: u32) -> bool {
            let mut ok = vec![false; x as usize + 1];
            ok[0] = true;
            for i in 1..=x as usize {
                ok[i] = gens.iter().any(|&g| g as usize <= i && ok[i - g as usize]);
            }
            ok[x as usize]
        }
    }

    impl AtomicMonoid for Numerical {
        type Element = u32;
        fn identity(&self) -> u32 {
            0
        }
        fn is_identity(&self, a: &u32) -> bool {
            *a == 0
        }
        fn contains(&self, a: &u32) -> bool {
            Self::in_span(&self.atoms, *a)
        }
        fn multiply(&self, a: &u32, b: &u32) -> u32 {
            a + b
        }
        fn divide(&self, a: &u32, u: &u32) -> Option<u32> {
            a.checked_sub(*u).filter(|d| self.contains(d))
        }
        fn atoms_dividing(&self, a: &u32) -> Vec<u32> {
            self.atoms
                .iter()
                .copied()
                .filter(|u| self.divide(a, u).is_some())
                .collect()
        }
    }

    #[test]
    fn length_set_basics() {
        let l: LengthSet = [2, 5, 6].into_iter().collect();
        assert_eq!(l.delta(), BTreeSet::from([1, 3]));
        assert_eq!(LengthSet::singleton(7).delta(), BTreeSet::new());
        assert_eq!(l.min(), Some(2));
        assert_eq!(l.max(), Some(6));
        let big: LengthSet = [3, 70, 200].into_iter().collect();
        assert_eq!(big.to_vec(), vec![3, 70, 200]);
        assert_eq!(big.max(), Some(200));
        assert_eq!(serde_json::to_string(&big).unwrap(), "[3,70,200]");
        let n = 4;
        let l: LengthSet = [2, n + 2].into_iter().collect();
        assert_eq!(l.delta(), BTreeSet::from([n]));
    }

    #[test]
    fn distance_examples() {
        let z = Factorization::from_atoms([1u32, 1]);
        let w = Factorization::from_atoms([2u32, 3]);
        assert_eq!(z.distance(&z), 0);
        assert_eq!(z.distance(&w), 2);
        let z = Factorization::from_atoms([0u32, 1, 2, 3]);
        let w = Factorization::from_atoms([0u32, 9]);
        assert_eq!(z.distance(&w), 3);
    }

    #[test]
    fn numerical_fixture() {
        let m = Numerical::new(&[3, 5, 7]);
        let mut e = Engine::new(&m);
        assert_eq!(e.length_set(&15).unwrap().to_vec(), vec![3, 5]);
        assert_eq!(e.factorizations(&15).unwrap().len(), 3);
        assert_eq!(e.length_set(&3).unwrap().to_vec(), vec![1]);
        assert_eq!(e.length_set(&4), Err(Error::NotMember));
        assert_eq!(e.factorizations(&0).unwrap(), vec![Factorization::empty()]);
        assert_eq!(
            distance(
                &m,
                &Factorization::from_atoms([3, 5]),
                &Factorization::from_atoms([3])
            ),
            Err(Error::DifferentElements)
        );
    }

    /// Least N whose threshold graph on Z(a) is connected, by union-find sweep.
    fn threshold_catenary(z: &[Factorization<u32>]) -> u32 {
        let n = z.len();
        let mut edges: Vec<(u32, usize, usize)> = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((z[i].distance(&z[j]), i, j));
            }
        }
        edges.sort_unstable();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        let mut comps = n;
        for (w, i, j) in edges {
            if comps <= 1 {
                break;
            }
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a] = b;
                comps -= 1;
                if comps == 1 {
                    return w;
                }
            }
        }
        0
    }

    proptest! {
        #[test]
        fn prim_matches_threshold_sweep(a in 0u32..60, gens in proptest::sample::subsequence(vec![3u32, 4, 5, 7, 8, 11], 2..5)) {
            let m = Numerical::new(&gens);
            prop_assume!(m.contains(&a));
            let mut e = Engine::new(&m);
            let z = e.factorizations(&a).unwrap();
            prop_assert_eq!(bottleneck_catenary(&z), threshold_catenary(&z));
            let lens: LengthSet = z.iter().map(|f| f.length()).collect();
            prop_assert_eq!(lens, e.length_set(&a).unwrap());
            for f in &z {
                prop_assert_eq!(f.product(&m), a);
            }
            if z.len() >= 2 {
                let c = e.catenary_degree(&a).unwrap();
                prop_assert!(2 + e.length_set(&a).unwrap().max_delta().unwrap_or(0) <= c);
            }
        }

        #[test]
        fn distance_is_a_metric(a in 20u32..50) {
            let m = Numerical::new(&[4, 5, 6, 7]);
            let mut e = Engine::new(&m);
            let z = e.factorizations(&a).unwrap();
            for x in &z {
                prop_assert_eq!(x.distance(x), 0);
                for y in &z {
                    prop_assert_eq!(x.distance(y), y.distance(x));
                    if x != y {
                        prop_assert!(x.distance(y) > 0);
                    }
                    for w in &z {
                        prop_assert!(x.distance(w) <= x.distance(y) + y.distance(w));
                    }
                }
            }
        }
    }

    #[test]
    fn class_bound_scan_matches_elementwise_catenary() {
        let m = Numerical::new(&[5, 6, 9, 13]);
        let elements: Vec<u32> = (0..80).filter(|a| m.contains(a)).collect();
        let region = ScanRegion {
            elements: elements.clone(),
            divisor_closed: true,
        };
        let fast = scan_region(&m, &region, true).unwrap();
        let slow = scan_region(
            &m,
            &ScanRegion {
                elements,
                divisor_closed: false,
            },
            true,
        )
        .unwrap();
        assert_eq!(fast.catenary, slow.catenary);
        assert_eq!(fast.lengths, slow.lengths);
        assert!(fast.catenary.unwrap() >= 2 + fast.max_delta().unwrap());
    }

    #[test]
    fn scan_is_independent_of_workers() {
        let m = Numerical::new(&[4, 7, 9]);
        let region = ScanRegion {
            elements: (0..90).filter(|a| m.contains(a)).collect(),
            divisor_closed: true,
        };
        let one = with_workers(1, || scan_region(&m, &region, true).unwrap());
        let three = with_workers(3, || scan_region(&m, &region, true).unwrap());
        assert_eq!(one, three);
    }
}
