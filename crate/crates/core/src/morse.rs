//! Ordered enumeration of maximal chains, skipped-interval systems, and the
//! critical cells they produce.
//!
//! Chains are grouped by their compatible permutation. Inside one group the
//! chains of the distributive sublattice correspond to linear extensions of its
//! join-irreducibles; a chain is stored as its word, the sequence of positions
//! (keys) of the join-irreducibles in the group's fixed linear extension, and
//! chains are listed in lexicographic order of their words.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::bipartition::{OrderedBipartition, Permutation};
use crate::codes::{code_of_unchecked, code_to_bip_unchecked, default_ji_order, CodeVector, JiKind, JoinIrreducible};
use crate::error::{Error, Result};
use crate::jt::jt_permutations;
use crate::lattice::{interval_poset, leq, DEFAULT_EXHAUSTIVE_MAX_N};

/// A total order on (a subset of) the join-irreducibles of a `σ`-sublattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearExtension {
    pub sigma: Permutation,
    pub order: Vec<JoinIrreducible>,
}

impl LinearExtension {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn key_of(&self, h: JoinIrreducible) -> Option<usize> {
        self.order.iter().position(|&x| x == h)
    }

    /// Whether no element is listed after one it lies strictly below.
    pub fn extends_containment(&self) -> bool {
        let n = self.sigma.n();
        let codes: Vec<CodeVector> = self.order.iter().map(|h| h.code(n)).collect();
        (0..codes.len()).all(|i| (i + 1..codes.len()).all(|j| !codes[j].le(&codes[i])))
    }
}

/// `E2, F1`, then `E(k+2), F(k+1), G(k)` for `k = 1..n−2`, then `F(n), G(n−1)`.
pub fn default_linext(sigma: &Permutation) -> LinearExtension {
    LinearExtension {
        sigma: sigma.clone(),
        order: default_ji_order(sigma.n()),
    }
}

/// A maximal chain together with its permutation and label word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaximalChain {
    pub sigma: Permutation,
    pub elements: Vec<OrderedBipartition>,
    pub word: Vec<JoinIrreducible>,
}

/// The chains of one `σ`-sublattice `[lower, upper]_σ`.
#[derive(Debug, Clone, Serialize)]
pub struct ChainGroup {
    pub sigma: Permutation,
    /// Join-irreducibles below `upper` and not below `lower`, in label order.
    pub linext: LinearExtension,
    pub lower_code: CodeVector,
    /// `preds[k]`: bitmask of keys whose join-irreducible lies strictly below key `k`.
    #[serde(skip)]
    preds: Vec<u64>,
    /// `swap_earlier[q]` for `q ∈ 2..=n`: exchanging `σ_{q−1}` and `σ_q` gives an
    /// earlier group.
    pub swap_earlier: Vec<bool>,
}

impl ChainGroup {
    /// `linext` must list exactly the join-irreducibles of `[lower, upper]_σ`.
    pub fn new(lower: &OrderedBipartition, linext: LinearExtension, swap_earlier: Vec<bool>) -> Self {
        let n = linext.sigma.n();
        let codes: Vec<CodeVector> = linext.order.iter().map(|h| h.code(n)).collect();
        let preds = (0..codes.len())
            .map(|k| {
                (0..codes.len())
                    .filter(|&j| j != k && codes[j].le(&codes[k]))
                    .fold(0u64, |m, j| m | 1 << j)
            })
            .collect();
        ChainGroup {
            lower_code: code_of_unchecked(lower, &linext.sigma),
            sigma: linext.sigma.clone(),
            linext,
            preds,
            swap_earlier,
        }
    }

    /// Length of every chain in the group.
    pub fn chain_length(&self) -> usize {
        self.linext.len()
    }

    /// Visits every word in lexicographic order; stops early if `f` returns `false`.
    pub fn for_each_word<F: FnMut(&[u8]) -> bool>(&self, mut f: F) {
        let m = self.linext.len();
        let mut word = Vec::with_capacity(m);
        self.dfs(0, &mut word, &mut f);
    }

    fn dfs<F: FnMut(&[u8]) -> bool>(&self, used: u64, word: &mut Vec<u8>, f: &mut F) -> bool {
        let m = self.linext.len();
        if word.len() == m {
            return f(word);
        }
        for k in 0..m {
            if used >> k & 1 == 0 && self.preds[k] & !used == 0 {
                word.push(k as u8);
                let go_on = self.dfs(used | 1 << k, word, f);
                word.pop();
                if !go_on {
                    return false;
                }
            }
        }
        true
    }

    pub fn words(&self) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        self.for_each_word(|w| {
            out.push(w.to_vec());
            true
        });
        out
    }

    pub fn count(&self) -> usize {
        let mut c = 0;
        self.for_each_word(|_| {
            c += 1;
            true
        });
        c
    }

    /// The bipartitions along a word, from `lower` to `upper`.
    pub fn materialize(&self, word: &[u8]) -> MaximalChain {
        let n = self.sigma.n();
        let mut code = self.lower_code.clone();
        let mut elements = vec![code_to_bip_unchecked(&code, &self.sigma)];
        for &k in word {
            code = code.join(&self.linext.order[k as usize].code(n));
            elements.push(code_to_bip_unchecked(&code, &self.sigma));
        }
        MaximalChain {
            sigma: self.sigma.clone(),
            elements,
            word: word.iter().map(|&k| self.linext.order[k as usize]).collect(),
        }
    }

    /// Descent singletons and the `E(σ,q) … G(σ,q−1)` intervals whose swap
    /// leads to an earlier group, minimalized. Ranks are 1-based.
    pub fn skipped_intervals(&self, word: &[u8]) -> IntervalFamily {
        let mut raw = Vec::new();
        for i in 1..word.len() {
            if word[i - 1] > word[i] {
                raw.push((i, i));
            }
        }
        let mut pos = vec![usize::MAX; self.linext.len()];
        for (p, &k) in word.iter().enumerate() {
            pos[k as usize] = p + 1;
        }
        for q in 2..self.swap_earlier.len() {
            if !self.swap_earlier[q] {
                continue;
            }
            let e = self.linext.key_of(JoinIrreducible::e(q));
            let g = self.linext.key_of(JoinIrreducible::g(q - 1));
            if let (Some(e), Some(g)) = (e, g) {
                let (i, j1) = (pos[e], pos[g]);
                if i < j1 {
                    raw.push((i, j1 - 1));
                }
            }
        }
        IntervalFamily::new(raw)
    }
}

/// Rank intervals `[a, b]`, inclusion-minimal and sorted by left endpoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntervalFamily {
    pub intervals: Vec<(usize, usize)>,
}

impl IntervalFamily {
    /// Drops empty and duplicate intervals and every interval containing another.
    pub fn new(raw: Vec<(usize, usize)>) -> Self {
        let mut v: Vec<(usize, usize)> = raw.into_iter().filter(|&(a, b)| a <= b).collect();
        v.sort_unstable();
        v.dedup();
        let kept = v
            .iter()
            .copied()
            .filter(|&(a, b)| !v.iter().any(|&(c, d)| (c, d) != (a, b) && a <= c && d <= b))
            .collect();
        IntervalFamily { intervals: kept }
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Whether the union is `{1, ..., top − 1}`.
    pub fn covers_ranks(&self, top: usize) -> bool {
        let mut reach = 0;
        for &(a, b) in &self.intervals {
            if a > reach + 1 {
                break;
            }
            reach = reach.max(b);
        }
        reach + 1 >= top
    }
}

/// Greedy reduction: take the interval with least left endpoint, clip the rest
/// to start after it, minimalize, repeat.
pub fn j_intervals(family: &IntervalFamily, top: usize) -> Result<IntervalFamily> {
    if !family.covers_ranks(top) {
        return Err(Error::UnionNotFull);
    }
    let mut rest = family.intervals.clone();
    let mut out = Vec::new();
    while let Some(&(u, v)) = rest.iter().min() {
        out.push((u, v));
        let clipped = rest
            .iter()
            .filter(|&&iv| iv != (u, v))
            .map(|&(x, y)| (x.max(v + 1), y.min(top.saturating_sub(1))))
            .collect();
        rest = IntervalFamily::new(clipped).intervals;
    }
    Ok(IntervalFamily { intervals: out })
}

/// A chain contributing a critical cell.
#[derive(Debug, Clone, Serialize)]
pub struct CriticalCell {
    /// Position of the chain in the whole enumeration.
    pub chain_index: usize,
    pub group: usize,
    pub sigma: Permutation,
    pub word: Vec<JoinIrreducible>,
    pub dimension: isize,
    pub i_intervals: IntervalFamily,
    pub j_intervals: IntervalFamily,
}

/// All chains of an interval, grouped and ordered.
#[derive(Debug, Clone, Serialize)]
pub struct ChainEnumeration {
    pub lower: OrderedBipartition,
    pub upper: OrderedBipartition,
    pub groups: Vec<ChainGroup>,
}

impl ChainEnumeration {
    /// The whole lattice on `n` elements: groups in Johnson–Trotter order, each
    /// labelled by [`default_linext`].
    pub fn full(n: usize) -> Result<Self> {
        Self::full_with_limit(n, DEFAULT_EXHAUSTIVE_MAX_N)
    }

    pub fn full_with_limit(n: usize, max_n: usize) -> Result<Self> {
        if n > max_n {
            return Err(Error::SizeLimitExceeded { n, max: max_n });
        }
        let listing = jt_permutations(n)?;
        let index = listing.index();
        let lower = OrderedBipartition::bottom(n)?;
        let groups = listing
            .items
            .iter()
            .enumerate()
            .map(|(t, sigma)| {
                let swap_earlier = (0..=n)
                    .map(|q| q >= 2 && index[&sigma.swap_adjacent(q)] < t)
                    .collect();
                ChainGroup::new(&lower, default_linext(sigma), swap_earlier)
            })
            .collect();
        Ok(ChainEnumeration {
            upper: OrderedBipartition::top(n)?,
            lower,
            groups,
        })
    }

    /// Rank of the interval, i.e. the length of every chain.
    pub fn rank(&self) -> usize {
        self.groups.first().map_or(0, |g| g.chain_length())
    }

    /// Number of chains per group.
    pub fn group_counts(&self) -> Vec<usize> {
        self.groups.par_iter().map(|g| g.count()).collect()
    }

    pub fn total_chains(&self) -> usize {
        self.group_counts().iter().sum()
    }

    /// Every chain in order. Only for small cases.
    pub fn chains(&self) -> Vec<MaximalChain> {
        self.groups
            .iter()
            .flat_map(|g| g.words().into_iter().map(move |w| g.materialize(&w)))
            .collect()
    }

    /// `(group, word)` for every chain in order.
    pub fn words(&self) -> Vec<(usize, Vec<u8>)> {
        self.groups
            .iter()
            .enumerate()
            .flat_map(|(i, g)| g.words().into_iter().map(move |w| (i, w)))
            .collect()
    }

    /// Scans every chain for the critical-cell criterion. Groups are scanned in
    /// parallel and merged in order.
    pub fn critical_cells(&self) -> Vec<CriticalCell> {
        let top = self.rank();
        let per_group: Vec<(usize, Vec<(usize, CriticalCell)>)> = self
            .groups
            .par_iter()
            .enumerate()
            .map(|(gi, g)| {
                let mut local = 0;
                let mut found = Vec::new();
                g.for_each_word(|w| {
                    let fam = g.skipped_intervals(w);
                    if let Ok(j) = j_intervals(&fam, top) {
                        if j.covers_ranks(top) {
                            let cell = CriticalCell {
                                chain_index: 0,
                                group: gi,
                                sigma: g.sigma.clone(),
                                word: w.iter().map(|&k| g.linext.order[k as usize]).collect(),
                                dimension: j.len() as isize - 1,
                                i_intervals: fam,
                                j_intervals: j,
                            };
                            found.push((local, cell));
                        }
                    }
                    local += 1;
                    true
                });
                (local, found)
            })
            .collect();
        let mut offset = 0;
        let mut out = Vec::new();
        for (count, found) in per_group {
            for (local, mut cell) in found {
                cell.chain_index = offset + local;
                out.push(cell);
            }
            offset += count;
        }
        out
    }

    /// Whether chains through `a` and chains through `b` (both covering `lower`)
    /// interleave, i.e. neither family entirely precedes the other.
    pub fn first_step_interleaves(&self, a: &OrderedBipartition, b: &OrderedBipartition) -> bool {
        let (mut ia, mut ib): (Vec<usize>, Vec<usize>) = (Vec::new(), Vec::new());
        let mut idx = 0;
        for g in &self.groups {
            let n = g.sigma.n();
            g.for_each_word(|w| {
                let first = code_to_bip_unchecked(&g.lower_code.join(&g.linext.order[w[0] as usize].code(n)), &g.sigma);
                if first == *a {
                    ia.push(idx);
                } else if first == *b {
                    ib.push(idx);
                }
                idx += 1;
                true
            });
        }
        let (Some(&a_min), Some(&a_max), Some(&b_min), Some(&b_max)) =
            (ia.first(), ia.last(), ib.first(), ib.last())
        else {
            return false;
        };
        a_max > b_min && b_max > a_min
    }
}

/// [`ChainEnumeration::full`] streamed as materialized chains.
pub fn enumerate_chains_full(n: usize) -> Result<Vec<MaximalChain>> {
    Ok(ChainEnumeration::full(n)?.chains())
}

/// Critical cells of the whole lattice on `n` elements.
pub fn critical_cells_full(n: usize) -> Result<Vec<CriticalCell>> {
    Ok(ChainEnumeration::full(n)?.critical_cells())
}

/// Reduced Euler characteristic of the order complex of the open interval
/// `(lower, upper)`, from explicit face counts: `Σ_j (−1)^j f_j` over faces of
/// dimension `j`, the empty face counting as dimension `−1`.
pub fn reduced_euler_characteristic(lower: &OrderedBipartition, upper: &OrderedBipartition) -> Result<i64> {
    if lower == upper || !leq(lower, upper)? {
        return Err(Error::NotAnInterval);
    }
    let p = interval_poset(lower, upper)?;
    Ok(face_count_euler(&p.elements, &p.ranks)[p.len() - 1])
}

/// For each element `x` of a poset given in rank order with `elements[0]` the
/// minimum, the reduced Euler characteristic of the open interval `(min, x)`
/// (`x ≠ min`). Chains `min = x_0 < x_1 < … < x_s = x` are counted by length
/// `s`; each is a face with `s − 1` vertices.
pub fn face_count_euler(elements: &[OrderedBipartition], ranks: &[usize]) -> Vec<i64> {
    let k = elements.len();
    let rels: Vec<_> = elements.iter().map(|u| u.relation()).collect();
    let max_len = ranks.iter().copied().max().unwrap_or(0) - ranks[0] + 1;
    // chains[x][s]: number of strict chains from min to x with s steps
    let mut chains = vec![vec![0i64; max_len + 1]; k];
    chains[0][0] = 1;
    for x in 1..k {
        for y in 0..x {
            if ranks[y] < ranks[x] && rels[y].is_subset(&rels[x]) {
                for s in 0..max_len {
                    chains[x][s + 1] += chains[y][s];
                }
            }
        }
    }
    chains
        .iter()
        .enumerate()
        .map(|(x, c)| {
            if x == 0 {
                return 0;
            }
            // a chain of s steps has s − 1 interior vertices: dimension s − 2
            c.iter()
                .enumerate()
                .skip(1)
                .map(|(s, &f)| if s % 2 == 0 { f } else { -f })
                .sum()
        })
        .collect()
}

/// Indices of the JT listing for `n`, keyed by permutation.
pub fn jt_index(n: usize) -> Result<HashMap<Permutation, usize>> {
    Ok(jt_permutations(n)?.index())
}

/// `(kind, q)` labels of a word, for display.
pub fn word_labels(word: &[JoinIrreducible]) -> Vec<String> {
    word.iter()
        .map(|h| {
            let k = match h.kind {
                JiKind::E => "E",
                JiKind::F => "F",
                JiKind::G => "G",
            };
            format!("{k}{}", h.index)
        })
        .collect()
}

/// Expected skipped intervals of the first chain of the last group.
pub fn expected_last_group_i(n: usize) -> Vec<(usize, usize)> {
    if n == 2 {
        return vec![(1, 3)];
    }
    let mut v = vec![(1, 4)];
    v.extend((1..=n - 3).map(|k| (3 * k, 3 * k + 4)));
    v.push((3 * n - 6, 3 * n - 3));
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_order_small() {
        let sigma = Permutation::identity(2);
        let l = default_linext(&sigma);
        assert_eq!(
            l.order,
            vec![JoinIrreducible::e(2), JoinIrreducible::f(1), JoinIrreducible::f(2), JoinIrreducible::g(1)]
        );
        let l3 = default_linext(&Permutation::identity(3));
        assert_eq!(word_labels(&l3.order), ["E2", "F1", "E3", "F2", "G1", "F3", "G2"]);
        for n in 2..6 {
            assert!(default_linext(&Permutation::identity(n)).extends_containment());
        }
    }

    #[test]
    fn minimalization() {
        let f = IntervalFamily::new(vec![(1, 4), (2, 3), (2, 3), (5, 5), (4, 6), (3, 2)]);
        assert_eq!(f.intervals, vec![(2, 3), (5, 5)]);
    }

    #[test]
    fn j_reduction_examples() {
        let i = IntervalFamily::new(vec![(1, 3)]);
        assert_eq!(j_intervals(&i, 4).unwrap().intervals, vec![(1, 3)]);
        let disjoint = IntervalFamily::new(vec![(1, 2), (3, 3), (4, 6)]);
        assert_eq!(j_intervals(&disjoint, 7).unwrap(), disjoint);
        assert_eq!(j_intervals(&IntervalFamily::new(vec![(1, 2)]), 5), Err(Error::UnionNotFull));
    }

    #[test]
    fn full_enumeration_counts() {
        let e = ChainEnumeration::full(2).unwrap();
        assert_eq!(e.groups.len(), 2);
        assert_eq!(e.rank(), 4);
        let chains = e.chains();
        for c in &chains {
            assert_eq!(c.elements.len(), 5);
            assert_eq!(c.elements[0], OrderedBipartition::bottom(2).unwrap());
            assert_eq!(*c.elements.last().unwrap(), OrderedBipartition::top(2).unwrap());
        }
    }

    #[test]
    fn euler_small() {
        let lo = OrderedBipartition::bottom(2).unwrap();
        let hi = OrderedBipartition::top(2).unwrap();
        assert_eq!(reduced_euler_characteristic(&lo, &hi).unwrap(), 1);
        let lo3 = OrderedBipartition::bottom(3).unwrap();
        let hi3 = OrderedBipartition::top(3).unwrap();
        assert_eq!(reduced_euler_characteristic(&lo3, &hi3).unwrap(), -1);
        assert_eq!(reduced_euler_characteristic(&hi3, &hi3), Err(Error::NotAnInterval));
    }

    #[test]
    fn critical_cells_small() {
        for n in 2..=3 {
            let cells = critical_cells_full(n).unwrap();
            assert_eq!(cells.len(), 1);
            let c = &cells[0];
            assert_eq!(c.dimension, n as isize - 2);
            assert_eq!(c.i_intervals.intervals, expected_last_group_i(n));
        }
    }
}
