use bipartitions::codes::{code_of, code_to_bip, compress, is_compatible_with, is_valid_code};
use bipartitions::format::{bipartition_to_text, parse_bipartition, parse_bipartition_any, parse_partition, partition_to_text};
use bipartitions::jt::{is_complete, is_minimal_change, jt_refining};
use bipartitions::lattice::{covers, full_rank, join, leq, leq_by_blocks, meet, rank};
use bipartitions::{
    enumerate_all, is_bipartitional, to_ordered_bipartition, Block, ElemSet, OrderedBipartition, Permutation, Relation,
};
use proptest::prelude::*;

/// A random ordered bipartition together with a permutation compatible with it.
fn bipartition_with_sigma(max_n: usize) -> impl Strategy<Value = (OrderedBipartition, Permutation)> {
    (1..=max_n)
        .prop_flat_map(|n| {
            (
                Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
                any::<u32>(),
                any::<u32>(),
            )
        })
        .prop_map(|(order, cuts, flags)| {
            let n = order.len();
            let mut blocks = Vec::new();
            let mut cur = ElemSet::EMPTY;
            for (p, &x) in order.iter().enumerate() {
                cur = cur.with(x);
                if p + 1 == n || cuts >> p & 1 == 1 {
                    blocks.push(Block::new(cur, flags >> blocks.len() & 1 == 1));
                    cur = ElemSet::EMPTY;
                }
            }
            (OrderedBipartition::new(n, blocks).unwrap(), Permutation::new(order).unwrap())
        })
}

fn pair(max_n: usize) -> impl Strategy<Value = (OrderedBipartition, OrderedBipartition)> {
    (1..=max_n).prop_flat_map(|n| (bipartition_with_sigma(n), bipartition_with_sigma(n)))
        .prop_filter("same size", |((u, _), (v, _))| u.n() == v.n())
        .prop_map(|((u, _), (v, _))| (u, v))
}

proptest! {
    #[test]
    fn text_and_json_round_trip((u, _) in bipartition_with_sigma(8)) {
        let text = bipartition_to_text(&u);
        prop_assert_eq!(&parse_bipartition(&text).unwrap(), &u);
        let json = serde_json::to_string(&u).unwrap();
        prop_assert_eq!(&parse_bipartition_any(&json).unwrap(), &u);
        let p = u.ordered_partition();
        prop_assert_eq!(parse_partition(&partition_to_text(&p)).unwrap(), p);
    }

    #[test]
    fn relation_round_trip((u, _) in bipartition_with_sigma(8)) {
        let r = u.relation();
        prop_assert!(is_bipartitional(&r));
        prop_assert_eq!(to_ordered_bipartition(&r).unwrap(), u.clone());
        prop_assert_eq!(u.complement().relation(), r.complement());
    }

    #[test]
    fn complement_reverses_rank((u, _) in bipartition_with_sigma(8)) {
        prop_assert_eq!(rank(&u) + rank(&u.complement()), full_rank(u.n()));
    }

    #[test]
    fn join_meet_laws((u, v) in pair(6)) {
        let j = join(&u, &v).unwrap();
        let m = meet(&u, &v).unwrap();
        prop_assert!(leq(&u, &j).unwrap() && leq(&v, &j).unwrap());
        prop_assert!(leq(&m, &u).unwrap() && leq(&m, &v).unwrap());
        prop_assert_eq!(&join(&v, &u).unwrap(), &j);
        prop_assert_eq!(&meet(&v, &u).unwrap(), &m);
        prop_assert_eq!(join(&u, &m).unwrap(), u.clone());
        prop_assert_eq!(meet(&u, &j).unwrap(), u.clone());
        // meet is the complement of the join of complements
        prop_assert_eq!(join(&u.complement(), &v.complement()).unwrap().complement(), m);
        prop_assert_eq!(leq(&u, &v).unwrap(), leq_by_blocks(&u, &v).unwrap());
    }

    #[test]
    fn covers_step_rank_by_one((u, _) in bipartition_with_sigma(7)) {
        for (_, v) in covers(&u) {
            prop_assert_eq!(rank(&v), rank(&u) + 1);
            prop_assert!(leq(&u, &v).unwrap());
        }
        prop_assert_eq!(covers(&u).is_empty(), u == OrderedBipartition::top(u.n()).unwrap());
    }

    #[test]
    fn codes_round_trip((u, sigma) in bipartition_with_sigma(10)) {
        prop_assert!(is_compatible_with(&u, &sigma));
        let c = code_of(&u, &sigma).unwrap();
        prop_assert!(is_valid_code(c.entries()));
        prop_assert_eq!(c.rank(), rank(&u));
        prop_assert_eq!(code_to_bip(&c, &sigma).unwrap(), u.clone());
        // complementing negates the code read along the reversed permutation
        let cc = code_of(&u.complement(), &sigma.reversed()).unwrap();
        prop_assert_eq!(cc, c.reversed_negation());
    }

    #[test]
    fn compression_keeps_flags((u, _) in bipartition_with_sigma(8)) {
        let p = u.ordered_partition();
        let small = compress(&u, &p).unwrap();
        prop_assert_eq!(small.n(), u.num_blocks());
        let flags: Vec<bool> = small.blocks().iter().map(|b| b.underlined).collect();
        let expected: Vec<bool> = u.blocks().iter().map(|b| b.underlined).collect();
        prop_assert_eq!(flags, expected);
    }

    #[test]
    fn refining_listings_are_gray_codes((u, _) in bipartition_with_sigma(6)) {
        let l = jt_refining(&u.ordered_partition()).unwrap();
        prop_assert!(is_minimal_change(&l));
        prop_assert!(is_complete(&l));
    }
}

#[test]
fn enumeration_matches_relation_filter() {
    for n in 1..=3 {
        let mut filtered = Vec::new();
        for bits in 0u64..1 << (n * n) {
            let r = Relation::from_bits(n, bits).unwrap();
            if is_bipartitional(&r) {
                filtered.push(to_ordered_bipartition(&r).unwrap());
            }
        }
        filtered.sort();
        let mut all: Vec<_> = enumerate_all(n).unwrap().collect();
        all.sort();
        assert_eq!(all, filtered);
    }
}

#[test]
fn containment_by_blocks_agrees_exhaustively() {
    for n in 1..=3 {
        let all: Vec<_> = enumerate_all(n).unwrap().collect();
        for u in &all {
            for v in &all {
                assert_eq!(leq(u, v).unwrap(), leq_by_blocks(u, v).unwrap(), "{u} vs {v}");
            }
        }
    }
}

#[test]
fn mismatched_sizes_are_rejected() {
    let a = OrderedBipartition::bottom(2).unwrap();
    let b = OrderedBipartition::bottom(3).unwrap();
    assert!(join(&a, &b).is_err());
    assert!(leq(&a, &b).is_err());
}
