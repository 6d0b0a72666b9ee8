//! Structural properties of T-block monoids, checked over a finite region.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::Result;
use crate::factor::{scan_region, Engine, LengthSet, ScanRegion, ScanResult};
use crate::primary::{PrimaryElement, PrimaryMonoid};
use crate::tblock::{thm33_d, BlockElement, BlockMonoid, Caps, TBlockSpec};
use crate::zerosum::Sequence;

/// Result of one property check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub anchor: &'static str,
    pub passed: bool,
    /// Number of instances examined.
    pub instances: usize,
    pub detail: String,
}

impl CheckOutcome {
    fn new(
        name: &'static str,
        anchor: &'static str,
        instances: usize,
        failure: Option<String>,
    ) -> Self {
        Self {
            name,
            anchor,
            passed: failure.is_none(),
            instances,
            detail: failure.unwrap_or_else(|| format!("{instances} instances hold")),
        }
    }
}

pub const ANCHOR_ATOM_EXCHANGE: &str =
    "replacing a component atom q of an atom A by the letter [q] gives an atom";
pub const ANCHOR_FULL_SUPPORT: &str =
    "replacing a letter g of an atom by a full-support component atom of class g gives at most two atoms";
pub const ANCHOR_DESCENT: &str =
    "large distances descend: some element of smaller norm has max distance at least one less";
pub const ANCHOR_SINGLE_COMPONENT: &str =
    "order-2 class group: elements of one component of rank >= 2 have min length <= 3 (d = 2) or <= 2";
pub const ANCHOR_INTERVAL: &str = "the set of distances is an interval starting at 1";
pub const ANCHOR_TRIVIAL_GROUP: &str = "trivial class group: the set of distances lies in {1}";
pub const ANCHOR_MIN_GCD: &str = "the minimum of the set of distances equals its gcd";
pub const ANCHOR_ORDER_TWO: &str =
    "order-2 class group: max distance = max(d_i + d_j for i != j, |d_i|)";
pub const ANCHOR_CATENARY_IDENTITY: &str =
    "order-2 class group: catenary degree = 2 + max distance";
pub const ANCHOR_RANK_ONE: &str =
    "rank-1 seminormal primary monoids are half-factorial with catenary degree <= 2";
pub const ANCHOR_RANK_TWO: &str =
    "seminormal primary monoids of rank >= 2: min length 2 for non-atoms and catenary degree 3";

/// A region of `B`, its atom catalog, and the scan over it.
pub struct BlockAnalysis {
    pub caps: Caps,
    pub monoid: BlockMonoid,
    pub region: ScanRegion<BlockElement>,
    pub scan: ScanResult,
}

impl BlockAnalysis {
    pub fn run(spec: &TBlockSpec, caps: Caps, limit: u128) -> Result<Self> {
        let (monoid, region) = BlockMonoid::with_region(spec.clone(), caps, limit)?;
        let scan = scan_region(&monoid, &region, true)?;
        Ok(Self {
            caps,
            monoid,
            region,
            scan,
        })
    }

    pub fn spec(&self) -> &TBlockSpec {
        self.monoid.spec()
    }

    pub fn atoms(&self) -> &[BlockElement] {
        self.monoid.catalog().unwrap_or_default()
    }

    fn max_delta_of(l: &LengthSet) -> u32 {
        l.max_delta().unwrap_or(0)
    }

    /// Largest distance among elements without component parts, i.e. inside `B(G₀)`.
    pub fn max_delta_of_sequences(&self) -> u32 {
        self.region
            .elements
            .iter()
            .zip(&self.scan.lengths)
            .filter(|(a, _)| a.parts.iter().all(PrimaryElement::is_identity))
            .map(|(_, l)| Self::max_delta_of(l))
            .max()
            .unwrap_or(0)
    }
}

/// Whether the interval and descent statements apply: full ground set, nontrivial group, and
/// either at most one component of rank above 1 or an elementary 2-group.
pub fn interval_hypotheses(spec: &TBlockSpec) -> bool {
    let wide = spec.components().iter().filter(|c| c.rank() > 1).count();
    spec.ground_is_full()
        && !spec.group().is_trivial()
        && (wide <= 1 || spec.group().is_elementary_two_group())
}

/// For every atom `A` in the region and every component atom `q` dividing it, `[q]·q⁻¹·A` is an atom.
pub fn atom_exchange(an: &BlockAnalysis) -> CheckOutcome {
    let spec = an.spec();
    let g = spec.group();
    let mut n = 0;
    for a in an.atoms() {
        for (i, c) in spec.components().iter().enumerate() {
            for q in c.atoms_dividing(&a.parts[i]) {
                let class = c.class(g, &q);
                let mut b = a.clone();
                b.parts[i] = c.divide(g, &a.parts[i], &q).expect("atom divides");
                b.seq = b.seq.multiply(&Sequence::from_pairs([(class, 1)]));
                if spec.check_shape(&b).is_err() {
                    continue;
                }
                n += 1;
                if !spec.is_atom(&b).unwrap_or(false) {
                    return CheckOutcome::new(
                        "atom_exchange",
                        ANCHOR_ATOM_EXCHANGE,
                        n,
                        Some(format!("{b:?} (from {a:?}) is not an atom")),
                    );
                }
            }
        }
    }
    CheckOutcome::new("atom_exchange", ANCHOR_ATOM_EXCHANGE, n, None)
}

/// For every atom `A` containing a letter `g` and every full-support component atom `q` of
/// class `g`, `q·g⁻¹·A` has minimal length 1 or 2.
pub fn full_support_swap(an: &BlockAnalysis) -> CheckOutcome {
    let spec = an.spec();
    let g = spec.group();
    let mut engine = Engine::new(&an.monoid);
    let mut n = 0;
    for a in an.atoms() {
        for (i, c) in spec.components().iter().enumerate() {
            for unit in c.unit_classes() {
                let q = PrimaryElement::NonUnit {
                    unit: unit.clone(),
                    exponents: std::iter::repeat(1).take(c.rank()).collect(),
                };
                let class = c.class(g, &q);
                let letter = Sequence::from_pairs([(class, 1)]);
                let Some(seq) = letter.divide_into(&a.seq) else {
                    continue;
                };
                let mut b = a.clone();
                b.seq = seq;
                b.parts[i] = c.multiply(g, &a.parts[i], &q);
                n += 1;
                let min = engine.length_set(&b).ok().and_then(|l| l.min());
                if !matches!(min, Some(1 | 2)) {
                    return CheckOutcome::new(
                        "full_support_swap",
                        ANCHOR_FULL_SUPPORT,
                        n,
                        Some(format!("{b:?} (from {a:?}) has min length {min:?}")),
                    );
                }
            }
        }
    }
    CheckOutcome::new("full_support_swap", ANCHOR_FULL_SUPPORT, n, None)
}

/// Every element whose max distance reaches `max Δ(G) + 2` has a smaller-norm element in the
/// region with max distance at least one less. `None` when the hypotheses fail.
pub fn descent(an: &BlockAnalysis) -> Option<CheckOutcome> {
    if !interval_hypotheses(an.spec()) {
        return None;
    }
    let spec = an.spec();
    let threshold = an.max_delta_of_sequences() + 2;
    let mut rows: Vec<(u64, u32, usize)> = an
        .region
        .elements
        .iter()
        .zip(&an.scan.lengths)
        .enumerate()
        .map(|(i, (a, l))| (spec.norm(a), BlockAnalysis::max_delta_of(l), i))
        .collect();
    rows.sort_unstable();
    let mut n = 0;
    let mut best_below = 0;
    let mut best_here = 0;
    let mut current = None;
    for &(norm, md, i) in &rows {
        if current != Some(norm) {
            best_below = best_below.max(best_here);
            best_here = 0;
            current = Some(norm);
        }
        if md >= threshold {
            n += 1;
            if best_below + 1 < md {
                return Some(CheckOutcome::new(
                    "descent",
                    ANCHOR_DESCENT,
                    n,
                    Some(format!(
                        "{:?} (norm {norm}, max distance {md}) has no smaller witness",
                        an.region.elements[i]
                    )),
                ));
            }
        }
        best_here = best_here.max(md);
    }
    Some(CheckOutcome::new("descent", ANCHOR_DESCENT, n, None))
}

/// Order-2 class group: bound on the minimal length of elements living in one component.
pub fn single_component_bound(an: &BlockAnalysis) -> Option<CheckOutcome> {
    let spec = an.spec();
    if spec.group().order() != 2 {
        return None;
    }
    let mut n = 0;
    for (a, l) in an.region.elements.iter().zip(&an.scan.lengths) {
        if !a.seq.is_empty() {
            continue;
        }
        let mut live = a.parts.iter().enumerate().filter(|(_, p)| !p.is_identity());
        let (Some((j, _)), None) = (live.next(), live.next()) else {
            continue;
        };
        let c = &spec.components()[j];
        if c.rank() < 2 {
            continue;
        }
        n += 1;
        let bound = if thm33_d(c, spec.group()).ok() == Some(2) {
            3
        } else {
            2
        };
        let min = l.min().unwrap_or(0);
        if min > bound {
            return Some(CheckOutcome::new(
                "single_component_bound",
                ANCHOR_SINGLE_COMPONENT,
                n,
                Some(format!("{a:?} has min length {min} > {bound}")),
            ));
        }
    }
    Some(CheckOutcome::new(
        "single_component_bound",
        ANCHOR_SINGLE_COMPONENT,
        n,
        None,
    ))
}

/// The scanned set of distances is `[1, max]` (or empty).
pub fn interval(delta: &BTreeSet<u32>) -> CheckOutcome {
    let ok = match delta.iter().next_back() {
        None => true,
        Some(&max) => delta.len() as u32 == max && delta.first() == Some(&1),
    };
    CheckOutcome::new(
        "interval",
        ANCHOR_INTERVAL,
        delta.len(),
        (!ok).then(|| format!("{delta:?} is not an interval starting at 1")),
    )
}

/// `min Δ = gcd Δ` for a nonempty set of distances.
pub fn min_equals_gcd(delta: &BTreeSet<u32>) -> Option<CheckOutcome> {
    let &min = delta.first()?;
    let gcd = delta
        .iter()
        .fold(0u64, |acc, &d| crate::groups::gcd(acc, d as u64)) as u32;
    Some(CheckOutcome::new(
        "min_equals_gcd",
        ANCHOR_MIN_GCD,
        delta.len(),
        (min != gcd).then(|| format!("min {min} differs from gcd {gcd}")),
    ))
}

/// Trivial class group: `Δ ⊆ {1}`.
pub fn trivial_group(spec: &TBlockSpec, delta: &BTreeSet<u32>) -> Option<CheckOutcome> {
    if !spec.group().is_trivial() {
        return None;
    }
    let ok = delta.iter().all(|&d| d == 1);
    Some(CheckOutcome::new(
        "trivial_group",
        ANCHOR_TRIVIAL_GROUP,
        delta.len(),
        (!ok).then(|| format!("{delta:?} is not contained in {{1}}")),
    ))
}

/// Each component on its own: rank 1 is half-factorial with `c ≤ 2`; rank ≥ 2 has min length 2
/// for non-atoms and reaches `c = 3`.
pub fn component_laws(spec: &TBlockSpec, exp_cap: u32) -> Vec<CheckOutcome> {
    spec.components()
        .iter()
        .map(|c| {
            let m = PrimaryMonoid::new(spec.group().clone(), c.clone());
            let region = m.region(exp_cap.max(3));
            let scan = match scan_region(&m, &region, true) {
                Ok(s) => s,
                Err(e) => {
                    return CheckOutcome::new(
                        "component_law",
                        ANCHOR_RANK_ONE,
                        0,
                        Some(e.to_string()),
                    )
                }
            };
            let cat = scan.catenary.unwrap_or(0);
            if c.rank() == 1 {
                let bad = scan.lengths.iter().position(|l| l.len() != 1);
                let failure = match bad {
                    Some(i) => Some(format!(
                        "{:?} has lengths {:?}",
                        region.elements[i], scan.lengths[i]
                    )),
                    None if cat > 2 => Some(format!("catenary degree {cat} > 2")),
                    None => None,
                };
                CheckOutcome::new(
                    "component_law",
                    ANCHOR_RANK_ONE,
                    region.elements.len(),
                    failure,
                )
            } else {
                let bad = region
                    .elements
                    .iter()
                    .zip(&scan.lengths)
                    .position(|(a, l)| {
                        !a.is_identity() && c.max_length(a) > 1 && l.min() != Some(2)
                    });
                let failure = match bad {
                    Some(i) => Some(format!(
                        "{:?} has lengths {:?}",
                        region.elements[i], scan.lengths[i]
                    )),
                    None if cat != 3 => Some(format!("catenary degree {cat} instead of 3")),
                    None => None,
                };
                CheckOutcome::new(
                    "component_law",
                    ANCHOR_RANK_TWO,
                    region.elements.len(),
                    failure,
                )
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{FiniteAbelianGroup, GroupElement};
    use crate::primary::PrimaryComponentSpec;

    fn el(v: &[u32]) -> GroupElement {
        GroupElement::new(v.iter().copied())
    }

    #[test]
    fn interval_and_gcd_helpers() {
        assert!(interval(&BTreeSet::new()).passed);
        assert!(interval(&BTreeSet::from([1, 2, 3])).passed);
        assert!(!interval(&BTreeSet::from([1, 3])).passed);
        assert!(!interval(&BTreeSet::from([2])).passed);
        assert!(min_equals_gcd(&BTreeSet::new()).is_none());
        assert!(min_equals_gcd(&BTreeSet::from([2, 4])).unwrap().passed);
        assert!(!min_equals_gcd(&BTreeSet::from([2, 3])).unwrap().passed);
    }

    #[test]
    fn checks_hold_on_a_small_order_two_monoid() {
        let g = FiniteAbelianGroup::cyclic(2).unwrap();
        let c = PrimaryComponentSpec::new(&g, 2, vec![], vec![el(&[1]), el(&[0])]).unwrap();
        let spec = TBlockSpec::new(g, None, vec![c]).unwrap();
        let an = BlockAnalysis::run(&spec, spec.default_caps(), 1_000_000).unwrap();
        assert_eq!(an.scan.max_delta(), Some(1));
        for check in [
            atom_exchange(&an),
            full_support_swap(&an),
            descent(&an).unwrap(),
            single_component_bound(&an).unwrap(),
            interval(&an.scan.delta),
        ] {
            assert!(check.passed, "{check:?}");
            assert!(check.instances > 0 || check.name == "descent", "{check:?}");
        }
        for check in component_laws(&spec, 6) {
            assert!(check.passed, "{check:?}");
        }
    }
}
