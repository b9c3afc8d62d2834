//! Johnson–Trotter listings of permutations, plain and refining a fixed ordered
//! partition, and the ordered decomposition of an interval's order complex into
//! its `σ`-compatible pieces.
//!
//! Item parity in the recursion is 1-based: the first item of the smaller
//! listing is odd, so the new largest element sweeps right to left through it.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::bipartition::{same_size, Block, OrderedBipartition, OrderedPartition, Permutation};
use crate::codes::{code_of_unchecked, sublattice_from_codes};
use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::lattice::{join_unchecked, leq, leq_unchecked, meet_unchecked, rank};

#[derive(Debug, Clone, Serialize)]
pub struct JTListing {
    pub base: OrderedPartition,
    pub items: Vec<Permutation>,
}

impl JTListing {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Position of every item in the listing.
    pub fn index(&self) -> HashMap<Permutation, usize> {
        self.items.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect()
    }
}

/// The classical minimal-change listing of all permutations of `{1..n}`.
pub fn jt_permutations(n: usize) -> Result<JTListing> {
    jt_refining(&OrderedPartition::one_block(n)?)
}

/// Minimal-change listing of the permutations refining `base`.
pub fn jt_refining(base: &OrderedPartition) -> Result<JTListing> {
    crate::bipartition::check_size(base.n())?;
    let items = refining_items(base.blocks())
        .into_iter()
        .map(Permutation)
        .collect();
    Ok(JTListing { base: base.clone(), items })
}

fn refining_items(blocks: &[ElemSet]) -> Vec<Vec<usize>> {
    let all = blocks.iter().fold(ElemSet::EMPTY, |a, b| a.union(*b));
    let Some(e) = all.last() else {
        return vec![Vec::new()];
    };
    let m = blocks.iter().position(|b| b.contains(e)).unwrap();
    let r: usize = blocks[..m].iter().map(|b| b.len()).sum();
    if blocks[m].len() == 1 {
        let mut rest = blocks.to_vec();
        rest.remove(m);
        return refining_items(&rest)
            .into_iter()
            .map(|mut p| {
                p.insert(r, e);
                p
            })
            .collect();
    }
    let mut rest = blocks.to_vec();
    rest[m] = rest[m].without(e);
    let s = r + rest[m].len() - 1;
    let mut out = Vec::new();
    for (t, p) in refining_items(&rest).into_iter().enumerate() {
        let slots: Vec<usize> = if t % 2 == 0 {
            (r..=s + 1).rev().collect()
        } else {
            (r..=s + 1).collect()
        };
        for slot in slots {
            let mut q = p.clone();
            q.insert(slot, e);
            out.push(q);
        }
    }
    out
}

/// The same blocks, all underlined.
pub fn underlined_rep(pi: &OrderedPartition) -> OrderedBipartition {
    let blocks = pi.blocks().iter().map(|&b| Block::new(b, true)).collect();
    OrderedBipartition::new_unchecked(pi.n(), blocks)
}

fn underlined_rep_of(sigma: &Permutation) -> OrderedBipartition {
    underlined_rep(&sigma.to_ordered_partition())
}

/// Reads back the ordered partition of an all-underlined bipartition.
fn partition_of_underlined(u: &OrderedBipartition) -> Option<OrderedPartition> {
    u.blocks()
        .iter()
        .all(|b| b.underlined)
        .then(|| u.ordered_partition())
}

/// The finest ordered partition refined by both `a` and `b`.
pub fn finest_common_coarsening(a: &OrderedPartition, b: &OrderedPartition) -> Result<OrderedPartition> {
    same_size(a.n(), b.n())?;
    let j = join_unchecked(&underlined_rep(a), &underlined_rep(b));
    Ok(partition_of_underlined(&j).expect("join of underlined representations is underlined"))
}

/// One surviving piece of the decomposition.
#[derive(Debug, Clone, Serialize)]
pub struct DecompositionEntry {
    pub sigma: Permutation,
    /// Elements of `[lower, upper]_σ` other than the ends, sorted.
    pub elements: Vec<OrderedBipartition>,
}

#[derive(Debug, Clone, Serialize)]
pub struct JtDecomposition {
    pub lower: OrderedBipartition,
    pub upper: OrderedBipartition,
    /// The ordered partition whose refinements are the permutations compatible
    /// with both ends.
    pub base: OrderedPartition,
    pub entries: Vec<DecompositionEntry>,
    /// Every compatible permutation, mapped to the entry holding its piece.
    #[serde(skip)]
    pub entry_of: HashMap<Permutation, usize>,
}

/// The ordered partition whose refinements are exactly the permutations
/// compatible with both `lower` and `upper`.
pub fn common_refinement_base(lower: &OrderedBipartition, upper: &OrderedBipartition) -> Result<OrderedPartition> {
    same_size(lower.n(), upper.n())?;
    let m = meet_unchecked(
        &underlined_rep(&lower.ordered_partition()),
        &underlined_rep(&upper.ordered_partition()),
    );
    partition_of_underlined(&m).ok_or(Error::NoCompatiblePermutation)
}

/// Lists the `σ`-compatible pieces of `[lower, upper]` in Johnson–Trotter
/// order, keeping the first copy of each distinct piece.
pub fn jt_decomposition(lower: &OrderedBipartition, upper: &OrderedBipartition) -> Result<JtDecomposition> {
    if !leq(lower, upper)? {
        return Err(Error::NotAnInterval);
    }
    let base = common_refinement_base(lower, upper)?;
    let listing = jt_refining(&base)?;
    let mut entries: Vec<DecompositionEntry> = Vec::new();
    let mut seen: HashMap<Vec<OrderedBipartition>, usize> = HashMap::new();
    let mut entry_of = HashMap::new();
    for sigma in listing.items {
        let lo = code_of_unchecked(lower, &sigma);
        let hi = code_of_unchecked(upper, &sigma);
        let elements = sublattice_from_codes(lower, upper, &sigma, &lo, &hi).open_elements();
        let idx = *seen.entry(elements.clone()).or_insert_with(|| {
            entries.push(DecompositionEntry { sigma: sigma.clone(), elements });
            entries.len() - 1
        });
        entry_of.insert(sigma, idx);
    }
    Ok(JtDecomposition {
        lower: lower.clone(),
        upper: upper.clone(),
        base,
        entries,
        entry_of,
    })
}

/// For `tau` listed before `sigma`, finds a `π` listed before `sigma` that
/// differs from it by one adjacent transposition and satisfies
/// `ur(τ) ∨ ur(σ) ≥ ur(π) ∨ ur(σ) ⋗ ur(σ)`. Returns the index of `π`.
pub fn trotter_witness(
    listing: &JTListing,
    index: &HashMap<Permutation, usize>,
    tau: usize,
    sigma: usize,
) -> Option<usize> {
    let s = &listing.items[sigma];
    let us = underlined_rep_of(s);
    let target = join_unchecked(&underlined_rep_of(&listing.items[tau]), &us);
    (1..s.n()).find_map(|q| {
        let pi = s.swap_adjacent(q + 1);
        let &i = index.get(&pi)?;
        if i >= sigma {
            return None;
        }
        let j = join_unchecked(&underlined_rep_of(&pi), &us);
        (rank(&j) == rank(&us) + 1 && leq_unchecked(&j, &target)).then_some(i)
    })
}

/// Whether every earlier/later pair in `jt_refining(base)` has a witness.
pub fn check_trotter_property(base: &OrderedPartition) -> Result<bool> {
    let listing = jt_refining(base)?;
    let index = listing.index();
    Ok((0..listing.len()).all(|s| (0..s).all(|t| trotter_witness(&listing, &index, t, s).is_some())))
}

/// Whether consecutive items differ by one adjacent transposition.
pub fn is_minimal_change(listing: &JTListing) -> bool {
    listing.items.windows(2).all(|w| {
        let a = w[0].as_slice();
        let b = w[1].as_slice();
        let diff: Vec<usize> = (0..a.len()).filter(|&i| a[i] != b[i]).collect();
        diff.len() == 2 && diff[1] == diff[0] + 1 && a[diff[0]] == b[diff[1]] && a[diff[1]] == b[diff[0]]
    })
}

/// Whether the listing holds every refinement of its base exactly once.
pub fn is_complete(listing: &JTListing) -> bool {
    let distinct: HashSet<&Permutation> = listing.items.iter().collect();
    distinct.len() == listing.items.len()
        && listing
            .items
            .iter()
            .all(|p| p.to_ordered_partition().refines(&listing.base))
        && listing.items.len() == refinement_count(&listing.base)
}

fn refinement_count(base: &OrderedPartition) -> usize {
    base.blocks().iter().map(|b| (1..=b.len()).product::<usize>()).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::{parse_bipartition, parse_partition, parse_permutation};

    fn perms(items: &[&str]) -> Vec<Permutation> {
        items.iter().map(|s| parse_permutation(s).unwrap()).collect()
    }

    #[test]
    fn three_element_listing() {
        let l = jt_permutations(3).unwrap();
        assert_eq!(l.items, perms(&["1,2,3", "1,3,2", "3,1,2", "3,2,1", "2,3,1", "2,1,3"]));
        assert_eq!(jt_permutations(1).unwrap().items, perms(&["1"]));
    }

    #[test]
    fn refining_listing_example() {
        let l = jt_refining(&parse_partition("1,3|2,4").unwrap()).unwrap();
        assert_eq!(l.items, perms(&["1,3,2,4", "1,3,4,2", "3,1,4,2", "3,1,2,4"]));
        let single = parse_partition("2|1|3").unwrap();
        assert_eq!(jt_refining(&single).unwrap().items, perms(&["2,1,3"]));
    }

    #[test]
    fn last_permutation_swaps_first_two() {
        for n in 2..7 {
            let l = jt_permutations(n).unwrap();
            let mut expected: Vec<usize> = (1..=n).collect();
            expected.swap(0, 1);
            assert_eq!(l.items.last().unwrap().one_based(), expected);
            assert!(is_minimal_change(&l));
            assert!(is_complete(&l));
        }
    }

    #[test]
    fn coarsening_examples() {
        let a = parse_partition("4|1|2|3").unwrap();
        let b = parse_partition("4|2|3|1").unwrap();
        assert_eq!(finest_common_coarsening(&a, &b).unwrap(), parse_partition("4|1,2,3").unwrap());
        assert_eq!(finest_common_coarsening(&a, &a).unwrap(), a);
        let c = parse_partition("1|2").unwrap();
        let d = parse_partition("2|1").unwrap();
        assert_eq!(finest_common_coarsening(&c, &d).unwrap(), parse_partition("1,2").unwrap());
    }

    #[test]
    fn trotter_example_witness() {
        let l = jt_permutations(4).unwrap();
        let index = l.index();
        let tau = index[&parse_permutation("4,1,2,3").unwrap()];
        let sigma = index[&parse_permutation("4,2,3,1").unwrap()];
        assert!(tau < sigma);
        let pi = trotter_witness(&l, &index, tau, sigma).unwrap();
        assert_eq!(l.items[pi], parse_permutation("4,3,2,1").unwrap());
    }

    #[test]
    fn decomposition_of_full_lattice() {
        let lo = OrderedBipartition::bottom(3).unwrap();
        let hi = OrderedBipartition::top(3).unwrap();
        let d = jt_decomposition(&lo, &hi).unwrap();
        assert_eq!(d.entries.len(), 6);
        assert_eq!(
            d.entries.iter().map(|e| e.sigma.clone()).collect::<Vec<_>>(),
            jt_permutations(3).unwrap().items
        );
    }

    #[test]
    fn decomposition_dedups_shared_first_block() {
        let lo = parse_bipartition("1,2|3|4").unwrap();
        let hi = parse_bipartition("1,2|3,4!").unwrap();
        let d = jt_decomposition(&lo, &hi).unwrap();
        let a = d.entry_of[&parse_permutation("1,2,3,4").unwrap()];
        let b = d.entry_of[&parse_permutation("2,1,3,4").unwrap()];
        assert_eq!(a, b);
        assert_eq!(d.entries[a].sigma, parse_permutation("1,2,3,4").unwrap());
    }

    #[test]
    fn rank_one_interval_keeps_one_entry() {
        let lo = OrderedBipartition::bottom(3).unwrap();
        let hi = parse_bipartition("1|2,3").unwrap();
        let d = jt_decomposition(&lo, &hi).unwrap();
        assert_eq!(d.entries.len(), 1);
        assert_eq!(d.entry_of.len(), 2);
    }

    #[test]
    fn incompatible_interval_rejected() {
        assert_eq!(
            jt_decomposition(&parse_bipartition("1|2").unwrap(), &parse_bipartition("2|1").unwrap()).unwrap_err(),
            Error::NotAnInterval
        );
    }
}
