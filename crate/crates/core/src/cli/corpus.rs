use crate::groups::{FiniteAbelianGroup, GroupElement};
use crate::primary::{ComponentDescription, PrimaryElement};
use crate::tblock::{BlockElement, Caps};
use crate::zerosum::Sequence;

use super::specfile::{Expectations, ExpectedLengths, SpecFile};

fn el(v: &[u32]) -> GroupElement {
    GroupElement::new(v.iter().copied())
}

fn comp(rank: usize, gens: &[&[u32]], primes: &[&[u32]]) -> ComponentDescription {
    ComponentDescription {
        rank,
        unit_class_generators: gens.iter().map(|g| el(g)).collect(),
        prime_classes: primes.iter().map(|g| el(g)).collect(),
    }
}

fn part(unit: &[u32], exponents: &[u32]) -> PrimaryElement {
    PrimaryElement::NonUnit {
        unit: el(unit),
        exponents: exponents.iter().copied().collect(),
    }
}

fn spec(name: &str, group: &[u32], components: Vec<ComponentDescription>) -> SpecFile {
    SpecFile {
        name: Some(name.to_string()),
        group: FiniteAbelianGroup::new(group.to_vec()).expect("valid invariant factors"),
        ground_set: None,
        components,
        scan: None,
        expect: Expectations::default(),
    }
}

/// `C_n` with one rank-2 component whose primes have classes `e` and `-e`.
fn cyclic_pair(n: u32, name: &str) -> SpecFile {
    spec(name, &[n], vec![comp(2, &[], &[&[1], &[n - 1]])])
}

/// Order-2 components realizing each value of `d`.
fn order_two_component(kind: &str) -> ComponentDescription {
    match kind {
        "d2" => comp(2, &[], &[&[1], &[1]]),
        "d0" => comp(1, &[], &[&[1]]),
        "dm1" => comp(2, &[], &[&[0], &[0]]),
        "d1_units" => comp(1, &[&[1]], &[&[0]]),
        "d1_mixed" => comp(2, &[], &[&[1], &[0]]),
        "d1_rank3" => comp(3, &[], &[&[1], &[1], &[0]]),
        _ => unreachable!("unknown component kind {kind}"),
    }
}

/// The specs shipped in the example corpus, keyed by file stem.
pub fn bundled_corpus() -> Vec<SpecFile> {
    let mut out = Vec::new();

    for n in 3..=5u32 {
        let mut s = cyclic_pair(n, &format!("cyclic_pair_primes_only_n{n}"));
        s.ground_set = Some(Vec::new());
        s.scan = Some(Caps {
            seq_len_cap: 0,
            exp_cap: n + 2,
        });
        s.expect = Expectations {
            delta: Some(vec![n]),
            lengths: vec![ExpectedLengths {
                element: BlockElement {
                    seq: Sequence::new(),
                    parts: vec![part(&[0], &[n + 2, n + 2])],
                },
                lengths: vec![2, n + 2],
            }],
            ..Default::default()
        };
        out.push(s);
    }

    for n in 3..=5u32 {
        let mut s = cyclic_pair(n, &format!("cyclic_pair_n{n}"));
        s.scan = Some(Caps {
            seq_len_cap: 2 * n as usize,
            exp_cap: n + 2,
        });
        s.expect = Expectations {
            delta: Some((1..=n).collect()),
            lengths: vec![
                ExpectedLengths {
                    element: BlockElement {
                        seq: Sequence::new(),
                        parts: vec![part(&[0], &[n + 2, n + 2])],
                    },
                    lengths: vec![2, n + 2],
                },
                ExpectedLengths {
                    element: BlockElement {
                        seq: Sequence::from_pairs([(el(&[1]), 1)]),
                        parts: vec![part(&[0], &[n + 1, n + 2])],
                    },
                    lengths: vec![2, n + 1],
                },
            ],
            ..Default::default()
        };
        out.push(s);
    }

    // C_3^2 with classes e_0 = e_1 + e_2, e_1, e_2 and one component per class.
    let basis: [&[u32]; 3] = [&[1, 1], &[1, 0], &[0, 1]];
    let negs: [&[u32]; 3] = [&[2, 2], &[2, 0], &[0, 2]];
    let mut s = spec(
        "three_classes_rank2_c3_squared",
        &[3, 3],
        (0..3).map(|i| comp(2, &[], &[basis[i], negs[i]])).collect(),
    );
    s.scan = Some(Caps {
        seq_len_cap: 0,
        exp_cap: 3,
    });
    s.expect = Expectations {
        delta_contains: vec![7],
        lengths: vec![ExpectedLengths {
            element: BlockElement {
                seq: Sequence::new(),
                parts: vec![part(&[0, 0], &[3, 3]); 3],
            },
            lengths: vec![2, 9],
        }],
        ..Default::default()
    };
    out.push(s);

    let singles = ["d2", "d0", "dm1", "d1_units", "d1_mixed", "d1_rank3"];
    for kind in singles {
        out.push(spec(
            &format!("order2_{kind}"),
            &[2],
            vec![order_two_component(kind)],
        ));
    }
    let pairs = [
        ("d2", "d2"),
        ("d2", "d1_rank3"),
        ("d2", "d0"),
        ("d2", "dm1"),
        ("d1_units", "d1_mixed"),
        ("d1_mixed", "d0"),
        ("d1_units", "dm1"),
        ("d0", "d0"),
        ("d0", "dm1"),
        ("dm1", "dm1"),
    ];
    for (a, b) in pairs {
        out.push(spec(
            &format!("order2_{a}_{b}"),
            &[2],
            vec![order_two_component(a), order_two_component(b)],
        ));
    }

    out.push(spec("trivial_group_rank1", &[], vec![comp(1, &[], &[&[]])]));
    out.push(spec(
        "trivial_group_rank2_rank1",
        &[],
        vec![comp(2, &[], &[&[], &[]]), comp(1, &[], &[&[]])],
    ));
    out.push(spec(
        "c3_rank2_same_class",
        &[3],
        vec![comp(2, &[], &[&[1], &[1]])],
    ));
    out
}
