use std::collections::HashMap;

use bipartitions::format::parse_bipartition;
use bipartitions::intervals::*;
use bipartitions::lattice::{leq, rank};
use bipartitions::morse::{face_count_euler, ChainEnumeration, IntervalFamily};
use bipartitions::{enumerate_all, OrderedBipartition};
use rayon::prelude::*;

fn intervals(n: usize) -> Vec<(OrderedBipartition, OrderedBipartition)> {
    let all: Vec<_> = enumerate_all(n).unwrap().collect();
    let mut out = Vec::new();
    for u in &all {
        for v in &all {
            if leq(u, v).unwrap() {
                out.push((u.clone(), v.clone()));
            }
        }
    }
    out
}

#[test]
fn closed_form_matches_recursion_up_to_four() {
    for n in 1..=4 {
        let all: Vec<_> = enumerate_all(n).unwrap().collect();
        all.par_iter().for_each(|u| {
            for (v, mu) in mobius_from(u).unwrap() {
                assert!((-1..=1).contains(&mu));
                assert_eq!(mobius_closed_form(u, &v).unwrap(), mu, "[{u}, {v}]");
            }
        });
    }
}

#[test]
fn euler_characteristic_matches_mobius_up_to_four() {
    for n in 1..=4 {
        let all: Vec<_> = enumerate_all(n).unwrap().collect();
        all.par_iter().for_each(|u| {
            let mut up: Vec<_> = all.iter().filter(|v| leq(u, v).unwrap()).cloned().collect();
            up.sort_by_key(|v| (rank(v), v.clone()));
            let ranks: Vec<_> = up.iter().map(rank).collect();
            let chi = face_count_euler(&up, &ranks);
            let mu: HashMap<_, _> = mobius_from(u).unwrap().into_iter().collect();
            for (v, c) in up.iter().zip(chi).skip(1) {
                assert_eq!(c, mu[v], "[{u}, {v}]");
            }
        });
    }
}

#[test]
fn regular_intervals_factor_as_products() {
    for n in 1..=3 {
        for (u, v) in intervals(n) {
            if classify(&u, &v).unwrap().tag != IntervalTag::Regular {
                continue;
            }
            let f = factorize_regular(&u, &v).unwrap();
            assert_eq!(f.rank(), rank(&v) - rank(&u));
            let p = interval_ranked_poset(&u, &v).unwrap();
            assert_eq!(f.size(), Some(p.ranks.len() as u128));
            assert!(factorization_matches(&u, &v).unwrap(), "[{u}, {v}] vs {:?}", f.factors);
        }
    }
}

#[test]
fn irregular_intervals_have_no_critical_cells() {
    for n in 2..=3 {
        for (u, v) in intervals(n) {
            if classify(&u, &v).unwrap().tag != IntervalTag::Irregular {
                continue;
            }
            let e = interval_chain_enumeration(&u, &v).unwrap();
            for g in &e.groups {
                assert!(g.linext.extends_containment());
            }
            assert!(e.critical_cells().is_empty(), "[{u}, {v}]");
        }
    }
}

#[test]
fn interval_enumeration_counts_every_chain_once() {
    for n in 2..=3 {
        for (u, v) in intervals(n) {
            if u == v {
                continue;
            }
            let e = interval_chain_enumeration(&u, &v).unwrap();
            let chains = e.chains();
            let mut seen = std::collections::HashSet::new();
            for c in &chains {
                assert_eq!(c.elements[0], u);
                assert_eq!(c.elements.last().unwrap(), &v);
                assert!(seen.insert(c.elements.clone()), "duplicate chain in [{u}, {v}]");
            }
            // every chain of the interval appears: count by walking covers
            let p = interval_ranked_poset(&u, &v).unwrap();
            let mut ways = vec![0usize; p.ranks.len()];
            ways[0] = 1;
            for &(a, b) in &p.covers {
                ways[b] += ways[a];
            }
            assert_eq!(chains.len(), *ways.last().unwrap(), "[{u}, {v}]");
        }
    }
}

fn disjoint_from_some(ranks: u32, fam: &IntervalFamily) -> bool {
    fam.intervals
        .iter()
        .any(|&(a, b)| (a..=b).all(|r| ranks >> r & 1 == 0))
}

#[test]
fn interval_skipped_families_match_literal_intersections() {
    for n in 2..=3 {
        for (u, v) in intervals(n) {
            if u == v || classify(&u, &v).unwrap().tag != IntervalTag::Irregular {
                continue;
            }
            let e = interval_chain_enumeration(&u, &v).unwrap();
            let words = e.words();
            let chains = e.chains();
            let m = e.rank();
            for k in 0..chains.len() {
                let (g, w) = &words[k];
                let fam = e.groups[*g].skipped_intervals(w);
                for ranks in 0u32..(1 << m.saturating_sub(1)) {
                    let ranks = ranks << 1;
                    let literal = (0..k).any(|j| {
                        (1..m)
                            .filter(|r| ranks >> r & 1 == 1)
                            .all(|r| chains[j].elements[r] == chains[k].elements[r])
                    });
                    assert_eq!(literal, disjoint_from_some(ranks, &fam), "[{u}, {v}] chain {k}");
                }
            }
        }
    }
}

#[test]
fn whole_interval_reproduces_full_enumeration() {
    for n in 2..=3 {
        let lo = OrderedBipartition::bottom(n).unwrap();
        let hi = OrderedBipartition::top(n).unwrap();
        let a = interval_chain_enumeration(&lo, &hi).unwrap();
        let b = ChainEnumeration::full(n).unwrap();
        assert_eq!(a.words(), b.words());
        assert_eq!(a.chains(), b.chains());
    }
}

#[test]
fn choose_linext_cases() {
    let id = bipartitions::Permutation::identity(4);
    let ob = |s: &str| parse_bipartition(s).unwrap();
    // B = {1,2,3} at positions 1..3, C = {3,4} at 3..4: i < k, p = k = 3
    let l = choose_linext_strict(&id, &ob("1,2,3|4"), &ob("1|2|3,4!")).unwrap();
    assert_eq!(l.order[0], bipartitions::codes::JoinIrreducible::e(3));
    // B = {2,3} at 2..3, C = {1,2,3} at 1..3: i > k, p = i = 2, G(1) last
    let id3 = bipartitions::Permutation::identity(3);
    let l = choose_linext_strict(&id3, &ob("1!|2,3"), &ob("1,2,3!")).unwrap();
    assert_eq!(l.order.last(), Some(&bipartitions::codes::JoinIrreducible::g(1)));
    // blocks start together and B ends later: p = l + 1
    let l = choose_linext_strict(&id, &ob("1|2,3,4"), &ob("1|2,3!|4")).unwrap();
    assert_eq!(l.order[0], bipartitions::codes::JoinIrreducible::e(4));
}

#[test]
fn closed_form_matches_bruteforce_up_to_four() {
    for n in 1..=4 {
        let all: Vec<_> = enumerate_all(n).unwrap().collect();
        all.par_iter().for_each(|u| {
            for v in all.iter().filter(|v| leq(u, v).unwrap()) {
                let b = mobius_bruteforce(u, v).unwrap();
                assert!((-1..=1).contains(&b));
                assert_eq!(mobius_closed_form(u, v).unwrap(), b, "[{u}, {v}]");
            }
        });
    }
}

#[test]
fn euler_characteristic_of_whole_lattice_matches_bruteforce() {
    for n in 2..=4 {
        let lo = OrderedBipartition::bottom(n).unwrap();
        let hi = OrderedBipartition::top(n).unwrap();
        let chi = bipartitions::morse::reduced_euler_characteristic(&lo, &hi).unwrap();
        assert_eq!(chi, mobius_bruteforce(&lo, &hi).unwrap());
        assert_eq!(chi, if n % 2 == 0 { 1 } else { -1 });
    }
}
