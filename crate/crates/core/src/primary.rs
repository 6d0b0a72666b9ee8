//! Seminormal finitely primary monoids of rank `s`, modelled up to units by
//! the class of the unit part and the exponent vector over `q_1, …, q_s`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::factor::{AtomicMonoid, ScanRegion};
use crate::groups::{FiniteAbelianGroup, GroupElement};

/// Serialized form of a component: `{ "rank", "unit_class_generators", "prime_classes" }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentDescription {
    pub rank: usize,
    #[serde(default)]
    pub unit_class_generators: Vec<GroupElement>,
    pub prime_classes: Vec<GroupElement>,
}

/// A component `D_ν` inside a class group: its rank, prime classes and unit-class subgroup `G_ν`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimaryComponentSpec {
    rank: usize,
    unit_class_generators: Vec<GroupElement>,
    prime_classes: Vec<GroupElement>,
    unit_classes: Vec<GroupElement>,
}

impl PrimaryComponentSpec {
    pub fn new(
        group: &FiniteAbelianGroup,
        rank: usize,
        unit_class_generators: Vec<GroupElement>,
        prime_classes: Vec<GroupElement>,
    ) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidComponent("rank must be at least 1".into()));
        }
        if prime_classes.len() != rank {
            return Err(Error::InvalidComponent(format!(
                "rank {rank} needs {rank} prime classes, got {}",
                prime_classes.len()
            )));
        }
        for g in prime_classes.iter().chain(&unit_class_generators) {
            group.check(g)?;
        }
        let unit_classes: Vec<GroupElement> = group
            .subgroup_generated(&unit_class_generators)?
            .into_iter()
            .collect();
        let spec = Self {
            rank,
            unit_class_generators,
            prime_classes,
            unit_classes,
        };
        if spec.is_factorial_model() {
            log::warn!(
                "component of rank 1 with trivial unit classes is factorial in this model \
                 (prime class {:?})",
                spec.prime_classes[0]
            );
        }
        Ok(spec)
    }

    pub fn from_description(group: &FiniteAbelianGroup, d: &ComponentDescription) -> Result<Self> {
        Self::new(
            group,
            d.rank,
            d.unit_class_generators.clone(),
            d.prime_classes.clone(),
        )
    }

    pub fn description(&self) -> ComponentDescription {
        ComponentDescription {
            rank: self.rank,
            unit_class_generators: self.unit_class_generators.clone(),
            prime_classes: self.prime_classes.clone(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn prime_classes(&self) -> &[GroupElement] {
        &self.prime_classes
    }

    pub fn unit_class_generators(&self) -> &[GroupElement] {
        &self.unit_class_generators
    }

    /// `G_ν`, sorted.
    pub fn unit_classes(&self) -> &[GroupElement] {
        &self.unit_classes
    }

    pub fn has_trivial_units(&self) -> bool {
        self.unit_classes.len() == 1
    }

    /// Rank 1 with `G_ν = {0}`: the model monoid is factorial.
    pub fn is_factorial_model(&self) -> bool {
        self.rank == 1 && self.has_trivial_units()
    }

    pub fn element(&self, unit: GroupElement, exponents: &[u32]) -> Result<PrimaryElement> {
        let e = PrimaryElement::NonUnit {
            unit,
            exponents: exponents.iter().copied().collect(),
        };
        self.check(&e)?;
        Ok(e)
    }

    /// Checks the seminormal shape: every exponent at least 1 and the unit class in `G_ν`.
    pub fn check(&self, a: &PrimaryElement) -> Result<()> {
        match a {
            PrimaryElement::Identity => Ok(()),
            PrimaryElement::NonUnit { unit, exponents } => {
                if exponents.len() != self.rank {
                    return Err(Error::InvalidComponent(format!(
                        "expected {} exponents, got {}",
                        self.rank,
                        exponents.len()
                    )));
                }
                if exponents.contains(&0) {
                    return Err(Error::InvalidComponent(
                        "every exponent of a non-unit must be at least 1".into(),
                    ));
                }
                if self.unit_classes.binary_search(unit).is_err() {
                    return Err(Error::InvalidComponent(format!(
                        "unit class {unit:?} is not in the unit-class subgroup"
                    )));
                }
                Ok(())
            }
        }
    }

    pub fn multiply(
        &self,
        group: &FiniteAbelianGroup,
        a: &PrimaryElement,
        b: &PrimaryElement,
    ) -> PrimaryElement {
        use PrimaryElement::*;
        match (a, b) {
            (Identity, x) | (x, Identity) => x.clone(),
            (
                NonUnit {
                    unit: g,
                    exponents: k,
                },
                NonUnit {
                    unit: h,
                    exponents: l,
                },
            ) => NonUnit {
                unit: group.add_unchecked(g, h),
                exponents: k
                    .iter()
                    .zip(l)
                    .map(|(x, y)| x.checked_add(*y).expect("exponent overflow"))
                    .collect(),
            },
        }
    }

    /// Whether `a` divides `b` inside the component.
    pub fn divides(&self, a: &PrimaryElement, b: &PrimaryElement) -> bool {
        use PrimaryElement::*;
        match (a, b) {
            (Identity, _) => true,
            (NonUnit { .. }, Identity) => false,
            (NonUnit { exponents: k, .. }, NonUnit { exponents: l, .. }) => {
                a == b || k.iter().zip(l).all(|(x, y)| y > x)
            }
        }
    }

    /// `b / a` when `a` divides `b`.
    pub fn divide(
        &self,
        group: &FiniteAbelianGroup,
        b: &PrimaryElement,
        a: &PrimaryElement,
    ) -> Option<PrimaryElement> {
        use PrimaryElement::*;
        if !self.divides(a, b) {
            return None;
        }
        match (a, b) {
            (Identity, x) => Some(x.clone()),
            (NonUnit { .. }, _) if a == b => Some(Identity),
            (
                NonUnit {
                    unit: g,
                    exponents: k,
                },
                NonUnit {
                    unit: h,
                    exponents: l,
                },
            ) => Some(NonUnit {
                unit: group.add_unchecked(h, &group.neg_unchecked(g)),
                exponents: k.iter().zip(l).map(|(x, y)| y - x).collect(),
            }),
            (NonUnit { .. }, Identity) => None,
        }
    }

    /// Atoms are exactly the non-units whose smallest exponent is 1.
    pub fn is_atom(&self, a: &PrimaryElement) -> Result<bool> {
        match a {
            PrimaryElement::Identity => Err(Error::IdentityNotAtom),
            PrimaryElement::NonUnit { exponents, .. } => Ok(exponents.iter().min() == Some(&1)),
        }
    }

    /// `max L(a)`: the smallest exponent, or 0 for the identity.
    pub fn max_length(&self, a: &PrimaryElement) -> u32 {
        match a {
            PrimaryElement::Identity => 0,
            PrimaryElement::NonUnit { exponents, .. } => {
                exponents.iter().copied().min().unwrap_or(0)
            }
        }
    }

    /// Class in `G`: unit class plus `Σ k_i [q_i]`.
    pub fn class(&self, group: &FiniteAbelianGroup, a: &PrimaryElement) -> GroupElement {
        match a {
            PrimaryElement::Identity => group.zero(),
            PrimaryElement::NonUnit { unit, exponents } => self
                .prime_classes
                .iter()
                .zip(exponents)
                .fold(unit.clone(), |acc, (q, &k)| {
                    group.add_unchecked(&acc, &group.scale(q, k as u64))
                }),
        }
    }

    /// Every non-unit divisor of `a` in the component, in ascending order.
    pub fn divisors(&self, a: &PrimaryElement) -> Vec<PrimaryElement> {
        let PrimaryElement::NonUnit { exponents: k, .. } = a else {
            return Vec::new();
        };
        let mut out = vec![a.clone()];
        if k.iter().all(|&x| x >= 2) {
            let mut cur: SmallVec<[u32; 4]> = SmallVec::from_elem(1, k.len());
            loop {
                for g in &self.unit_classes {
                    out.push(PrimaryElement::NonUnit {
                        unit: g.clone(),
                        exponents: cur.clone(),
                    });
                }
                // odometer over 1 ≤ cur_i ≤ k_i − 1
                let mut i = cur.len();
                loop {
                    if i == 0 {
                        out.sort();
                        out.dedup();
                        return out;
                    }
                    i -= 1;
                    if cur[i] + 1 < k[i] {
                        cur[i] += 1;
                        break;
                    }
                    cur[i] = 1;
                }
            }
        }
        out
    }

    /// Atoms of the component dividing `a`, ascending.
    pub fn atoms_dividing(&self, a: &PrimaryElement) -> Vec<PrimaryElement> {
        self.divisors(a)
            .into_iter()
            .filter(|d| self.max_length(d) == 1)
            .collect()
    }

    /// Every element with all exponents at most `cap`, identity first, ascending.
    pub fn elements_up_to(&self, cap: u32) -> Vec<PrimaryElement> {
        let mut out = vec![PrimaryElement::Identity];
        if cap == 0 {
            return out;
        }
        let mut cur: SmallVec<[u32; 4]> = SmallVec::from_elem(1, self.rank);
        'outer: loop {
            for g in &self.unit_classes {
                out.push(PrimaryElement::NonUnit {
                    unit: g.clone(),
                    exponents: cur.clone(),
                });
            }
            let mut i = cur.len();
            loop {
                if i == 0 {
                    break 'outer;
                }
                i -= 1;
                if cur[i] < cap {
                    cur[i] += 1;
                    break;
                }
                cur[i] = 1;
            }
        }
        out.sort();
        out
    }
}

/// An element of a component: the identity, or `ε q_1^{k_1} ⋯ q_s^{k_s}` recorded as `([ε], k)`.
///
/// JSON form: `null` for the identity, otherwise `{ "unit": coords, "exponents": [...] }`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "Option<PartRepr>", into = "Option<PartRepr>")]
pub enum PrimaryElement {
    Identity,
    NonUnit {
        unit: GroupElement,
        exponents: SmallVec<[u32; 4]>,
    },
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartRepr {
    unit: GroupElement,
    exponents: Vec<u32>,
}

impl From<Option<PartRepr>> for PrimaryElement {
    fn from(p: Option<PartRepr>) -> Self {
        match p {
            None => PrimaryElement::Identity,
            Some(p) => PrimaryElement::NonUnit {
                unit: p.unit,
                exponents: p.exponents.into(),
            },
        }
    }
}

impl From<PrimaryElement> for Option<PartRepr> {
    fn from(e: PrimaryElement) -> Self {
        match e {
            PrimaryElement::Identity => None,
            PrimaryElement::NonUnit { unit, exponents } => Some(PartRepr {
                unit,
                exponents: exponents.to_vec(),
            }),
        }
    }
}

impl PrimaryElement {
    pub fn is_identity(&self) -> bool {
        matches!(self, PrimaryElement::Identity)
    }

    pub fn exponents(&self) -> &[u32] {
        match self {
            PrimaryElement::Identity => &[],
            PrimaryElement::NonUnit { exponents, .. } => exponents,
        }
    }
}

/// A single component viewed as a monoid in its own right.
pub struct PrimaryMonoid {
    group: FiniteAbelianGroup,
    spec: PrimaryComponentSpec,
}

impl PrimaryMonoid {
    pub fn new(group: FiniteAbelianGroup, spec: PrimaryComponentSpec) -> Self {
        Self { group, spec }
    }

    pub fn spec(&self) -> &PrimaryComponentSpec {
        &self.spec
    }

    /// All elements with exponents at most `cap`; closed under divisors.
    pub fn region(&self, cap: u32) -> ScanRegion<PrimaryElement> {
        ScanRegion {
            elements: self.spec.elements_up_to(cap),
            divisor_closed: true,
        }
    }

    /// Unit classes that actually occur, as a set.
    pub fn unit_classes(&self) -> BTreeSet<GroupElement> {
        self.spec.unit_classes.iter().cloned().collect()
    }
}

impl AtomicMonoid for PrimaryMonoid {
    type Element = PrimaryElement;

    fn identity(&self) -> PrimaryElement {
        PrimaryElement::Identity
    }

    fn is_identity(&self, a: &PrimaryElement) -> bool {
        a.is_identity()
    }

    fn contains(&self, a: &PrimaryElement) -> bool {
        self.spec.check(a).is_ok()
    }

    fn multiply(&self, a: &PrimaryElement, b: &PrimaryElement) -> PrimaryElement {
        self.spec.multiply(&self.group, a, b)
    }

    fn divide(&self, a: &PrimaryElement, u: &PrimaryElement) -> Option<PrimaryElement> {
        self.spec.divide(&self.group, a, u)
    }

    fn atoms_dividing(&self, a: &PrimaryElement) -> Vec<PrimaryElement> {
        self.spec.atoms_dividing(a)
    }
}
