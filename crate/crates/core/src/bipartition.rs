//! Bipartitional relations and their ordered bipartition representation.
//!
//! Elements are 0-based internally. Every user-facing text or JSON form uses
//! 1-based labels; the conversion happens in [`crate::format`].

use std::fmt;

use crate::elemset::{ElemSet, MAX_ELEMENTS};
use crate::error::{Error, Result};

/// Default bound on the ground-set size for single-value operations.
pub const DEFAULT_MAX_N: usize = 16;

pub(crate) fn check_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::MalformedPartition("empty ground set".into()));
    }
    if n > MAX_ELEMENTS {
        return Err(Error::SizeLimitExceeded { n, max: MAX_ELEMENTS });
    }
    Ok(())
}

pub(crate) fn same_size(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::SizeMismatch { left, right })
    }
}

/// A relation `U ⊆ X × X` on `X = {0, ..., n-1}`, stored as one bit row per element.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    n: usize,
    rows: Vec<u32>,
}

impl Relation {
    pub fn empty(n: usize) -> Result<Self> {
        check_size(n)?;
        Ok(Relation { n, rows: vec![0; n] })
    }

    pub fn full(n: usize) -> Result<Self> {
        check_size(n)?;
        Ok(Relation {
            n,
            rows: vec![ElemSet::full(n).0; n],
        })
    }

    /// Builds a relation from 0-based pairs.
    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(n: usize, pairs: I) -> Result<Self> {
        let mut rel = Relation::empty(n)?;
        for (x, y) in pairs {
            if x >= n || y >= n {
                return Err(Error::MalformedPartition(format!(
                    "pair ({}, {}) outside ground set of size {n}",
                    x + 1,
                    y + 1
                )));
            }
            rel.insert(x, y);
        }
        Ok(rel)
    }

    /// Builds a relation from a row-major list of `n * n` bits.
    pub fn from_bits(n: usize, bits: u64) -> Result<Self> {
        check_size(n)?;
        debug_assert!(n * n <= 64);
        let mut rel = Relation::empty(n)?;
        for x in 0..n {
            for y in 0..n {
                if bits >> (x * n + y) & 1 == 1 {
                    rel.insert(x, y);
                }
            }
        }
        Ok(rel)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.rows[x] >> y & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, x: usize, y: usize) {
        self.rows[x] |= 1 << y;
    }

    /// Successor set of `x`.
    pub fn row(&self, x: usize) -> ElemSet {
        ElemSet(self.rows[x])
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    /// 0-based pairs in row-major order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |x| self.row(x).iter().map(move |y| (x, y)))
    }

    /// `(X × X) \ self`.
    pub fn complement(&self) -> Relation {
        let full = ElemSet::full(self.n).0;
        Relation {
            n: self.n,
            rows: self.rows.iter().map(|r| !r & full).collect(),
        }
    }

    pub fn union(&self, other: &Relation) -> Result<Relation> {
        same_size(self.n, other.n)?;
        Ok(Relation {
            n: self.n,
            rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a | b).collect(),
        })
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.n == other.n && self.rows.iter().zip(&other.rows).all(|(a, b)| a & !b == 0)
    }

    pub fn is_transitive(&self) -> bool {
        // (x,y) and (y,z) in U force (x,z): row(y) ⊆ row(x) whenever y ∈ row(x)
        (0..self.n).all(|x| self.row(x).iter().all(|y| self.rows[y] & !self.rows[x] == 0))
    }

    /// Warshall's algorithm on bit rows.
    pub fn transitive_closure(&self) -> Relation {
        let mut rows = self.rows.clone();
        for k in 0..self.n {
            let rk = rows[k];
            for row in rows.iter_mut() {
                if *row >> k & 1 == 1 {
                    *row |= rk;
                }
            }
        }
        Relation { n: self.n, rows }
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs().map(|(x, y)| (x + 1, y + 1))).finish()
    }
}

/// True iff both the relation and its complement in `X × X` are transitive.
pub fn is_bipartitional(rel: &Relation) -> bool {
    rel.is_transitive() && rel.complement().is_transitive()
}

/// Equivalence classes of `x ~ y` iff both or neither of `(x,y)`, `(y,x)` lie in the relation.
///
/// Classes are returned ordered by their least element.
pub fn incomparability_classes(rel: &Relation) -> Result<Vec<ElemSet>> {
    if !is_bipartitional(rel) {
        return Err(Error::NotBipartitional);
    }
    Ok(incomparability_classes_unchecked(rel))
}

fn incomparability_classes_unchecked(rel: &Relation) -> Vec<ElemSet> {
    let n = rel.n();
    let mut seen = ElemSet::EMPTY;
    let mut classes = Vec::new();
    for x in 0..n {
        if seen.contains(x) {
            continue;
        }
        let class: ElemSet = (0..n)
            .filter(|&y| rel.contains(x, y) == rel.contains(y, x))
            .collect();
        seen = seen.union(class);
        classes.push(class);
    }
    classes
}

/// One block of an ordered bipartition.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block {
    pub set: ElemSet,
    pub underlined: bool,
}

impl Block {
    pub fn new(set: ElemSet, underlined: bool) -> Self {
        Block { set, underlined }
    }
}

impl fmt::Debug for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.set, if self.underlined { "!" } else { "" })
    }
}

fn check_partition<'a, I: IntoIterator<Item = &'a ElemSet>>(n: usize, blocks: I) -> Result<()> {
    let mut covered = ElemSet::EMPTY;
    for b in blocks {
        if b.is_empty() {
            return Err(Error::MalformedPartition("empty block".into()));
        }
        if !b.is_subset(ElemSet::full(n)) {
            return Err(Error::MalformedPartition(format!(
                "block {b:?} leaves the ground set {{1..{n}}}"
            )));
        }
        if !b.intersection(covered).is_empty() {
            return Err(Error::MalformedPartition(format!("block {b:?} overlaps an earlier block")));
        }
        covered = covered.union(*b);
    }
    if covered != ElemSet::full(n) {
        return Err(Error::MalformedPartition(format!(
            "blocks miss elements {:?}",
            ElemSet::full(n).difference(covered)
        )));
    }
    Ok(())
}

/// Canonical form `(B_1^{e_1}, ..., B_k^{e_k})` of a bipartitional relation.
///
/// Blocks are bit sets, so elements inside a block are implicitly sorted and two
/// ordered bipartitions are equal exactly when they describe the same relation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderedBipartition {
    n: usize,
    blocks: Vec<Block>,
}

impl OrderedBipartition {
    pub fn new(n: usize, blocks: Vec<Block>) -> Result<Self> {
        check_size(n)?;
        check_partition(n, blocks.iter().map(|b| &b.set))?;
        Ok(OrderedBipartition { n, blocks })
    }

    pub(crate) fn new_unchecked(n: usize, blocks: Vec<Block>) -> Self {
        debug_assert!(check_partition(n, blocks.iter().map(|b| &b.set)).is_ok());
        OrderedBipartition { n, blocks }
    }

    /// Convenience constructor from 1-based element lists.
    pub fn from_lists(n: usize, blocks: &[(&[usize], bool)]) -> Result<Self> {
        let mut out = Vec::with_capacity(blocks.len());
        for (elems, underlined) in blocks {
            let mut set = ElemSet::EMPTY;
            for &x in elems.iter() {
                if x == 0 || x > n {
                    return Err(Error::MalformedPartition(format!("element {x} outside 1..{n}")));
                }
                if set.contains(x - 1) {
                    return Err(Error::MalformedPartition(format!("element {x} repeated")));
                }
                set = set.with(x - 1);
            }
            out.push(Block::new(set, *underlined));
        }
        OrderedBipartition::new(n, out)
    }

    /// The empty relation `(X^0)`.
    pub fn bottom(n: usize) -> Result<Self> {
        check_size(n)?;
        Ok(OrderedBipartition {
            n,
            blocks: vec![Block::new(ElemSet::full(n), false)],
        })
    }

    /// The full relation `(X^1)`.
    pub fn top(n: usize) -> Result<Self> {
        check_size(n)?;
        Ok(OrderedBipartition {
            n,
            blocks: vec![Block::new(ElemSet::full(n), true)],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Index of the block holding `x`.
    pub fn block_index(&self, x: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.set.contains(x))
            .expect("element outside ground set")
    }

    /// Per-element block index table.
    pub fn block_table(&self) -> Vec<usize> {
        let mut table = vec![0; self.n];
        for (i, b) in self.blocks.iter().enumerate() {
            for x in b.set.iter() {
                table[x] = i;
            }
        }
        table
    }

    /// Whether `(x, y)` belongs to the represented relation.
    pub fn contains_pair(&self, x: usize, y: usize) -> bool {
        let (i, j) = (self.block_index(x), self.block_index(y));
        i < j || (i == j && self.blocks[i].underlined)
    }

    /// The represented relation.
    pub fn relation(&self) -> Relation {
        let mut rows = vec![0u32; self.n];
        let mut later = ElemSet::full(self.n);
        for b in &self.blocks {
            later = later.difference(b.set);
            let row = if b.underlined { later.union(b.set) } else { later };
            for x in b.set.iter() {
                rows[x] = row.0;
            }
        }
        Relation { n: self.n, rows }
    }

    /// Blocks reversed and every flag toggled; represents the set complement.
    pub fn complement(&self) -> OrderedBipartition {
        OrderedBipartition {
            n: self.n,
            blocks: self
                .blocks
                .iter()
                .rev()
                .map(|b| Block::new(b.set, !b.underlined))
                .collect(),
        }
    }

    /// The underlying ordered partition (flags dropped).
    pub fn ordered_partition(&self) -> OrderedPartition {
        OrderedPartition {
            n: self.n,
            blocks: self.blocks.iter().map(|b| b.set).collect(),
        }
    }

    /// Restriction to a subset of the ground set, keeping labels.
    ///
    /// The result is a list of blocks (empty intersections dropped); it is not an
    /// `OrderedBipartition` because its ground set is `subset`, not `{0..m-1}`.
    pub fn restrict(&self, subset: ElemSet) -> Vec<Block> {
        self.blocks
            .iter()
            .filter_map(|b| {
                let s = b.set.intersection(subset);
                (!s.is_empty()).then(|| Block::new(s, b.underlined))
            })
            .collect()
    }

    /// Relabels through `map[old] = new`, keeping block order and flags.
    pub fn relabel(&self, map: &[usize]) -> OrderedBipartition {
        OrderedBipartition {
            n: self.n,
            blocks: self
                .blocks
                .iter()
                .map(|b| Block::new(b.set.iter().map(|x| map[x]).collect(), b.underlined))
                .collect(),
        }
    }
}

impl fmt::Debug for OrderedBipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::format::bipartition_to_text(self))
    }
}

impl fmt::Display for OrderedBipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::format::bipartition_to_text(self))
    }
}

/// Canonical ordered bipartition of a bipartitional relation.
pub fn to_ordered_bipartition(rel: &Relation) -> Result<OrderedBipartition> {
    if !is_bipartitional(rel) {
        return Err(Error::NotBipartitional);
    }
    Ok(to_ordered_bipartition_unchecked(rel))
}

/// Same as [`to_ordered_bipartition`] for relations already known to be bipartitional.
pub(crate) fn to_ordered_bipartition_unchecked(rel: &Relation) -> OrderedBipartition {
    let n = rel.n();
    let classes = incomparability_classes_unchecked(rel);
    // a class precedes exactly the classes that follow it under <_U, so the
    // number of strictly-later elements orders them
    let mut keyed: Vec<(usize, Block)> = classes
        .into_iter()
        .map(|c| {
            let x = c.first().unwrap();
            let later = (0..n)
                .filter(|&y| rel.contains(x, y) && !rel.contains(y, x))
                .count();
            (later, Block::new(c, rel.contains(x, x)))
        })
        .collect();
    keyed.sort_by_key(|k| std::cmp::Reverse(k.0));
    OrderedBipartition::new_unchecked(n, keyed.into_iter().map(|(_, b)| b).collect())
}

/// Relation represented by an ordered bipartition.
pub fn from_ordered_bipartition(ob: &OrderedBipartition) -> Relation {
    ob.relation()
}

/// Ordered partition `(C_1, ..., C_k)` of `{0, ..., n-1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderedPartition {
    n: usize,
    blocks: Vec<ElemSet>,
}

impl OrderedPartition {
    pub fn new(n: usize, blocks: Vec<ElemSet>) -> Result<Self> {
        check_size(n)?;
        check_partition(n, &blocks)?;
        Ok(OrderedPartition { n, blocks })
    }

    pub(crate) fn new_unchecked(n: usize, blocks: Vec<ElemSet>) -> Self {
        debug_assert!(check_partition(n, &blocks).is_ok());
        OrderedPartition { n, blocks }
    }

    /// Convenience constructor from 1-based element lists.
    pub fn from_lists(n: usize, blocks: &[&[usize]]) -> Result<Self> {
        let lists: Vec<(&[usize], bool)> = blocks.iter().map(|b| (*b, false)).collect();
        Ok(OrderedBipartition::from_lists(n, &lists)?.ordered_partition())
    }

    /// The single-block partition `({0, ..., n-1})`.
    pub fn one_block(n: usize) -> Result<Self> {
        check_size(n)?;
        Ok(OrderedPartition {
            n,
            blocks: vec![ElemSet::full(n)],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[ElemSet] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_table(&self) -> Vec<usize> {
        let mut table = vec![0; self.n];
        for (i, b) in self.blocks.iter().enumerate() {
            for x in b.iter() {
                table[x] = i;
            }
        }
        table
    }

    pub fn is_permutation(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }

    pub fn to_permutation(&self) -> Option<Permutation> {
        self.is_permutation()
            .then(|| Permutation(self.blocks.iter().map(|b| b.first().unwrap()).collect()))
    }

    /// Whether every block of `coarser` is a union of consecutive blocks of `self`.
    pub fn refines(&self, coarser: &OrderedPartition) -> bool {
        if self.n != coarser.n {
            return false;
        }
        let table = coarser.block_table();
        let mut last = 0;
        for b in &self.blocks {
            let idx = table[b.first().unwrap()];
            if b.iter().any(|x| table[x] != idx) || idx < last {
                return false;
            }
            last = idx;
        }
        true
    }
}

impl fmt::Debug for OrderedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::format::partition_to_text(self))
    }
}

impl fmt::Display for OrderedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::format::partition_to_text(self))
    }
}

/// A permutation `(σ_1, ..., σ_n)`, read as the ordered partition `({σ_1}, ..., {σ_n})`.
///
/// Entries are 0-based elements listed by position.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(pub Vec<usize>);

impl Permutation {
    pub fn new(items: Vec<usize>) -> Result<Self> {
        let n = items.len();
        check_size(n)?;
        let set: ElemSet = items.iter().copied().filter(|&x| x < n).collect();
        if set.len() != n {
            return Err(Error::MalformedPartition(format!(
                "not a permutation of 1..{n}"
            )));
        }
        Ok(Permutation(items))
    }

    /// Convenience constructor from a 1-based list.
    pub fn from_one_based(items: &[usize]) -> Result<Self> {
        if items.contains(&0) {
            return Err(Error::MalformedPartition("element 0 in a 1-based list".into()));
        }
        Permutation::new(items.iter().map(|x| x - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Element at 1-based position `q`.
    pub fn at(&self, q: usize) -> usize {
        self.0[q - 1]
    }

    /// `pos[x]` = 0-based position of element `x`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            pos[x] = i;
        }
        pos
    }

    pub fn reversed(&self) -> Permutation {
        Permutation(self.0.iter().rev().copied().collect())
    }

    /// Exchanges the entries at 1-based positions `q - 1` and `q`.
    pub fn swap_adjacent(&self, q: usize) -> Permutation {
        let mut v = self.0.clone();
        v.swap(q - 2, q - 1);
        Permutation(v)
    }

    pub fn to_ordered_partition(&self) -> OrderedPartition {
        OrderedPartition::new_unchecked(
            self.0.len(),
            self.0.iter().map(|&x| ElemSet::singleton(x)).collect(),
        )
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|x| x + 1).collect()
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::format::permutation_to_text(self))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::format::permutation_to_text(self))
    }
}

/// All ordered set partitions of `{0, ..., n-1}`.
///
/// Built by inserting the largest element into every ordered partition of the
/// smaller set. For each smaller partition with `k` blocks the insertions are
/// tried in the order: into block 0, new singleton before block 0, into
/// block 1, new singleton before block 1, ..., new singleton after block `k-1`.
/// The single-block partition comes first.
pub fn ordered_partitions(n: usize) -> Result<Vec<OrderedPartition>> {
    check_size(n)?;
    let mut parts: Vec<Vec<ElemSet>> = vec![vec![ElemSet::singleton(0)]];
    for x in 1..n {
        let mut next = Vec::with_capacity(parts.len() * (2 * x + 1));
        for p in &parts {
            for slot in 0..=p.len() {
                if slot < p.len() {
                    let mut joined = p.clone();
                    joined[slot] = joined[slot].with(x);
                    next.push(joined);
                }
                let mut fresh = p.clone();
                fresh.insert(slot, ElemSet::singleton(x));
                next.push(fresh);
            }
        }
        parts = next;
    }
    Ok(parts
        .into_iter()
        .map(|b| OrderedPartition::new_unchecked(n, b))
        .collect())
}

/// Streams every bipartitional relation on `{0, ..., n-1}` exactly once.
///
/// Ordered partitions come in [`ordered_partitions`] order; for each one the
/// flag vectors are visited as the binary numbers `0 .. 2^k`, bit `i` marking
/// block `i` underlined. The first item is therefore the bottom element.
pub fn enumerate_all(n: usize) -> Result<BipartitionIter> {
    Ok(BipartitionIter {
        parts: ordered_partitions(n)?,
        part: 0,
        flags: 0,
    })
}

pub struct BipartitionIter {
    parts: Vec<OrderedPartition>,
    part: usize,
    flags: u64,
}

impl Iterator for BipartitionIter {
    type Item = OrderedBipartition;

    fn next(&mut self) -> Option<OrderedBipartition> {
        let p = self.parts.get(self.part)?;
        let k = p.num_blocks();
        let blocks = p
            .blocks()
            .iter()
            .enumerate()
            .map(|(i, &s)| Block::new(s, self.flags >> i & 1 == 1))
            .collect();
        let item = OrderedBipartition::new_unchecked(p.n(), blocks);
        self.flags += 1;
        if self.flags == 1 << k {
            self.flags = 0;
            self.part += 1;
        }
        Some(item)
    }
}

/// `Σ_k S(n,k) k! 2^k`, the number of bipartitional relations on `n` elements.
/// `None` once the count no longer fits in a `u128` (from `n = 27`).
pub fn count_bipartitions(n: usize) -> Option<u128> {
    // S(n,k) by the triangle recurrence
    let mut stirling = vec![vec![0u128; n + 1]; n + 1];
    stirling[0][0] = 1;
    for i in 1..=n {
        for k in 1..=i {
            stirling[i][k] = (k as u128).checked_mul(stirling[i - 1][k])?.checked_add(stirling[i - 1][k - 1])?;
        }
    }
    let mut total = 0u128;
    let mut fact = 1u128;
    for k in 1..=n {
        fact = fact.checked_mul(k as u128)?;
        let term = stirling[n][k].checked_mul(fact)?.checked_mul(1u128.checked_shl(k as u32)?)?;
        total = total.checked_add(term)?;
    }
    Some(total)
}
