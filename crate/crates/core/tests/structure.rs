//! Exhaustive structural checks of the relation encoding, lattice operations,
//! codes and Johnson-Trotter listings at small sizes.

use std::collections::{BTreeSet, HashMap, HashSet};

use bipartitions::bipartition::incomparability_classes;
use bipartitions::codes::{code_of, compress, is_compatible, is_compatible_with, sublattice};
use bipartitions::jt::{jt_decomposition, jt_permutations, jt_refining};
use bipartitions::lattice::{covers, join, leq, meet, rank};
use bipartitions::{
    enumerate_all, from_ordered_bipartition, ordered_partitions, to_ordered_bipartition, ElemSet, OrderedBipartition,
    Permutation,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn permutations(n: usize) -> Vec<Permutation> {
    fn rec(n: usize, cur: &mut Vec<usize>, out: &mut Vec<Permutation>) {
        if cur.len() == n {
            out.push(Permutation::new(cur.clone()).unwrap());
            return;
        }
        for x in 0..n {
            if !cur.contains(&x) {
                cur.push(x);
                rec(n, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), &mut out);
    out
}

#[test]
fn relation_round_trip_up_to_five() {
    for n in 1..=5 {
        for u in enumerate_all(n).unwrap() {
            assert_eq!(to_ordered_bipartition(&from_ordered_bipartition(&u)).unwrap(), u);
        }
    }
}

#[test]
fn complement_is_an_involution_up_to_four() {
    for n in 1..=4 {
        for u in enumerate_all(n).unwrap() {
            let c = from_ordered_bipartition(&u).complement();
            let cu = to_ordered_bipartition(&c).unwrap();
            assert_eq!(cu, u.complement());
            assert_eq!(cu.complement(), u);
        }
    }
}

#[test]
fn incomparability_classes_partition_the_ground_set() {
    for n in 1..=4 {
        for u in enumerate_all(n).unwrap() {
            let classes = incomparability_classes(&u.relation()).unwrap();
            let mut seen = ElemSet::EMPTY;
            for c in &classes {
                assert!(!c.is_empty());
                assert!(c.intersection(seen).is_empty());
                seen = seen.union(*c);
            }
            assert_eq!(seen, ElemSet::full(n));
            // the classes are the blocks
            let blocks: BTreeSet<ElemSet> = u.blocks().iter().map(|b| b.set).collect();
            assert_eq!(classes.into_iter().collect::<BTreeSet<_>>(), blocks);
        }
    }
}

#[test]
fn join_meet_identities_exhaustive_up_to_three() {
    for n in 1..=3 {
        let all: Vec<_> = enumerate_all(n).unwrap().collect();
        for u in &all {
            assert_eq!(&join(u, u).unwrap(), u);
            assert_eq!(&meet(u, u).unwrap(), u);
            for v in &all {
                let (j, m) = (join(u, v).unwrap(), meet(u, v).unwrap());
                assert_eq!(j, join(v, u).unwrap());
                assert_eq!(m, meet(v, u).unwrap());
                assert_eq!(&join(u, &m).unwrap(), u);
                assert_eq!(&meet(u, &j).unwrap(), u);
            }
        }
    }
}

#[test]
fn associativity_on_random_triples() {
    let all: Vec<_> = enumerate_all(4).unwrap().collect();
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..20_000 {
        let u = &all[rng.gen_range(0..all.len())];
        let v = &all[rng.gen_range(0..all.len())];
        let w = &all[rng.gen_range(0..all.len())];
        assert_eq!(
            join(&join(u, v).unwrap(), w).unwrap(),
            join(u, &join(v, w).unwrap()).unwrap()
        );
        assert_eq!(
            meet(&meet(u, v).unwrap(), w).unwrap(),
            meet(u, &meet(v, w).unwrap()).unwrap()
        );
    }
}

/// A pair of the join that is not reversed in it already lies in the union.
#[test]
fn one_way_pairs_of_a_join_come_from_the_union() {
    for n in 1..=4 {
        let all: Vec<_> = enumerate_all(n).unwrap().collect();
        let rels: Vec<_> = all.iter().map(|u| u.relation()).collect();
        for (a, u) in all.iter().enumerate() {
            for (b, v) in all.iter().enumerate().skip(a) {
                let j = join(u, v).unwrap().relation();
                for (x, y) in j.pairs() {
                    if !j.contains(y, x) {
                        assert!(rels[a].contains(x, y) || rels[b].contains(x, y), "{u} {v} ({x},{y})");
                    }
                }
            }
        }
    }
}

#[test]
fn complement_negates_codes_up_to_four() {
    for n in 1..=4 {
        let all: Vec<_> = enumerate_all(n).unwrap().collect();
        for sigma in permutations(n) {
            for u in all.iter().filter(|u| is_compatible_with(u, &sigma)) {
                let c = code_of(u, &sigma).unwrap();
                let d = code_of(&u.complement(), &sigma.reversed()).unwrap();
                assert_eq!(d, c.reversed_negation(), "{u} under {sigma:?}");
            }
        }
    }
}

/// Covers between `σ`-compatible elements are the same in the sublattice and
/// in the whole lattice.
#[test]
fn covers_coincide_with_sublattice_covers() {
    for n in 1..=4 {
        let (bot, top) = (OrderedBipartition::bottom(n).unwrap(), OrderedBipartition::top(n).unwrap());
        for sigma in permutations(n) {
            let s = sublattice(&bot, &top, &sigma).unwrap();
            let sub_covers: HashSet<(usize, usize)> = s.covers.iter().copied().collect();
            let index: HashMap<&OrderedBipartition, usize> =
                s.elements.iter().enumerate().map(|(i, u)| (u, i)).collect();
            for (i, u) in s.elements.iter().enumerate() {
                for (_, v) in covers(u) {
                    if let Some(&j) = index.get(&v) {
                        assert!(sub_covers.contains(&(i, j)), "{u} < {v} under {sigma:?}");
                    }
                }
                for &(a, b) in s.covers.iter().filter(|c| c.0 == i) {
                    assert_eq!(a, i);
                    assert!(covers(u).iter().any(|(_, v)| *v == s.elements[b]));
                }
            }
        }
    }
}

/// Compressing blocks maps the `π`-compatible elements isomorphically onto the
/// identity-compatible elements on one point per block.
#[test]
fn compression_is_an_isomorphism_up_to_four() {
    for n in 1..=4 {
        let all: Vec<_> = enumerate_all(n).unwrap().collect();
        for pi in ordered_partitions(n).unwrap() {
            let k = pi.num_blocks();
            let id = Permutation::identity(k);
            let target: BTreeSet<OrderedBipartition> =
                enumerate_all(k).unwrap().filter(|w| is_compatible_with(w, &id)).collect();
            let compat: Vec<&OrderedBipartition> =
                all.iter().filter(|u| is_compatible(u, &pi).unwrap()).collect();
            let images: Vec<OrderedBipartition> = compat.iter().map(|u| compress(u, &pi).unwrap()).collect();
            let distinct: BTreeSet<_> = images.iter().cloned().collect();
            assert_eq!(distinct.len(), images.len(), "{pi:?}");
            assert_eq!(distinct, target, "{pi:?}");
            for a in 0..compat.len() {
                for b in 0..compat.len() {
                    assert_eq!(leq(compat[a], compat[b]).unwrap(), leq(&images[a], &images[b]).unwrap());
                }
            }
        }
    }
}

#[test]
fn permutation_listings_up_to_seven() {
    for n in 1..=7 {
        let l = jt_permutations(n).unwrap();
        let distinct: HashSet<&Permutation> = l.items.iter().collect();
        assert_eq!(distinct.len(), (1..=n).product::<usize>());
        assert_eq!(l.items.len(), distinct.len());
        for w in l.items.windows(2) {
            let (a, b) = (w[0].as_slice(), w[1].as_slice());
            let diff: Vec<usize> = (0..n).filter(|&i| a[i] != b[i]).collect();
            assert!(diff.len() == 2 && diff[1] == diff[0] + 1);
        }
    }
}

#[test]
fn refining_listings_hold_exactly_the_refinements() {
    for n in 1..=5 {
        let perms = permutations(n);
        for base in ordered_partitions(n).unwrap() {
            let table = base.block_table();
            let expected: BTreeSet<&Permutation> = perms
                .iter()
                .filter(|p| p.as_slice().windows(2).all(|w| table[w[0]] <= table[w[1]]))
                .collect();
            let l = jt_refining(&base).unwrap();
            let got: BTreeSet<&Permutation> = l.items.iter().collect();
            assert_eq!(got, expected, "{base:?}");
        }
    }
}

/// Every piece of the decomposition of the whole lattice is graded of full rank.
#[test]
fn decomposition_pieces_have_full_length_chains() {
    for n in 1..=3 {
        let (bot, top) = (OrderedBipartition::bottom(n).unwrap(), OrderedBipartition::top(n).unwrap());
        let d = jt_decomposition(&bot, &top).unwrap();
        for e in &d.entries {
            let s = sublattice(&bot, &top, &e.sigma).unwrap();
            // every cover raises rank by one and every element but the top has a cover
            for &(a, b) in &s.covers {
                assert_eq!(rank(&s.elements[b]), rank(&s.elements[a]) + 1);
            }
            for (i, u) in s.elements.iter().enumerate() {
                if *u != top {
                    assert!(s.covers.iter().any(|c| c.0 == i));
                }
            }
        }
    }
}

/// All chains of a set of pairwise comparable-or-not elements, by depth-first search.
fn chains_within(elems: &[OrderedBipartition], out: &mut Vec<Vec<usize>>) {
    fn rec(elems: &[OrderedBipartition], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        let start = cur.last().map_or(0, |&l| l + 1);
        for i in start..elems.len() {
            if cur.iter().all(|&c| leq(&elems[c], &elems[i]).unwrap() || leq(&elems[i], &elems[c]).unwrap()) {
                cur.push(i);
                rec(elems, cur, out);
                cur.pop();
            }
        }
    }
    rec(elems, &mut Vec::new(), out);
}

/// A face shared with an earlier piece is already in an earlier piece whose
/// permutation is one adjacent swap away.
#[test]
fn shared_faces_lie_in_an_adjacent_earlier_piece() {
    for n in 2..=3 {
        let (bot, top) = (OrderedBipartition::bottom(n).unwrap(), OrderedBipartition::top(n).unwrap());
        let d = jt_decomposition(&bot, &top).unwrap();
        let sets: Vec<HashSet<&OrderedBipartition>> =
            d.entries.iter().map(|e| e.elements.iter().collect()).collect();
        let adjacent = |a: &Permutation, b: &Permutation| {
            let diff: Vec<usize> = (0..n).filter(|&i| a.as_slice()[i] != b.as_slice()[i]).collect();
            diff.len() == 2 && diff[1] == diff[0] + 1
        };
        for (i, e) in d.entries.iter().enumerate() {
            let mut faces = Vec::new();
            chains_within(&e.elements, &mut faces);
            for f in faces.iter().filter(|f| !f.is_empty()) {
                let members: Vec<&OrderedBipartition> = f.iter().map(|&x| &e.elements[x]).collect();
                let in_piece = |j: usize| members.iter().all(|m| sets[j].contains(m));
                if (0..i).any(in_piece) {
                    assert!(
                        (0..i).any(|k| in_piece(k) && adjacent(&d.entries[k].sigma, &e.sigma)),
                        "n = {n}, piece {i}"
                    );
                }
            }
        }
    }
}
