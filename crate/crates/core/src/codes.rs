//! Compatibility with ordered partitions and the `{±1, ±3}` code vectors.
//!
//! For a permutation `σ`, the `σ`-compatible bipartitions form a distributive
//! sublattice. Relabelling through `σ` turns `σ` into the identity; the code of
//! a compatible bipartition then lists, position by position, whether the
//! element opens a nonunderlined block (`-1`), continues one (`-3`), closes an
//! underlined block (`1`) or sits inside one before its end (`3`). Containment
//! becomes the componentwise order on codes.
//!
//! The rank of a compatible bipartition is `Σ (u_s + 3) / 2 − 1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bipartition::{same_size, Block, OrderedBipartition, OrderedPartition, Permutation};
use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::lattice::{leq_unchecked, rank};

/// Allowed code entries in increasing order.
pub const CODE_VALUES: [i8; 4] = [-3, -1, 1, 3];

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CodeVector(pub Vec<i8>);

impl CodeVector {
    pub fn entries(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Componentwise `≤`.
    pub fn le(&self, other: &CodeVector) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Componentwise maximum; the join inside a `σ`-sublattice.
    pub fn join(&self, other: &CodeVector) -> CodeVector {
        CodeVector(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    /// Componentwise minimum; the meet inside a `σ`-sublattice.
    pub fn meet(&self, other: &CodeVector) -> CodeVector {
        CodeVector(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    /// `(-u_n, ..., -u_1)`.
    pub fn reversed_negation(&self) -> CodeVector {
        CodeVector(self.0.iter().rev().map(|x| -x).collect())
    }

    /// Rank of the encoded bipartition.
    pub fn rank(&self) -> usize {
        self.0.iter().map(|&x| ((x + 3) / 2) as usize).sum::<usize>() - 1
    }
}

impl fmt::Debug for CodeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.0).finish()
    }
}

/// Whether `pi` refines the block sequence of `u`, i.e. every block of `u` is a
/// union of consecutively indexed blocks of `pi`.
pub fn is_compatible(u: &OrderedBipartition, pi: &OrderedPartition) -> Result<bool> {
    same_size(u.n(), pi.n())?;
    Ok(pi.refines(&u.ordered_partition()))
}

/// [`is_compatible`] against a permutation, without building the partition.
pub fn is_compatible_with(u: &OrderedBipartition, sigma: &Permutation) -> bool {
    if u.n() != sigma.n() {
        return false;
    }
    let table = u.block_table();
    sigma.as_slice().windows(2).all(|w| table[w[0]] <= table[w[1]])
}

/// The unique permutation compatible with every element of a maximal chain
/// from bottom to top.
///
/// `x` precedes `y` when, at the first rank where one of `(x,y)`, `(y,x)`
/// appears, it is `(x,y)`.
pub fn chain_permutation(chain: &[OrderedBipartition]) -> Result<Permutation> {
    let first = chain
        .first()
        .ok_or_else(|| Error::NotMaximalChain("empty chain".into()))?;
    let n = first.n();
    if chain.len() != 3 * n - 1 {
        return Err(Error::NotMaximalChain(format!(
            "{} elements, expected {}",
            chain.len(),
            3 * n - 1
        )));
    }
    if *first != OrderedBipartition::bottom(n)? || *chain.last().unwrap() != OrderedBipartition::top(n)? {
        return Err(Error::NotMaximalChain("chain must run from bottom to top".into()));
    }
    for w in chain.windows(2) {
        if w[1].n() != n || rank(&w[1]) != rank(&w[0]) + 1 || !leq_unchecked(&w[0], &w[1]) {
            return Err(Error::NotMaximalChain(format!("{} is not covered by {}", w[0], w[1])));
        }
    }
    let rels: Vec<_> = chain.iter().map(|u| u.relation()).collect();
    // earlier[x] = set of y with x <_c y
    let mut earlier = vec![ElemSet::EMPTY; n];
    for x in 0..n {
        for y in x + 1..n {
            let r = rels
                .iter()
                .find(|r| r.contains(x, y) || r.contains(y, x))
                .expect("top contains every pair");
            match (r.contains(x, y), r.contains(y, x)) {
                (true, false) => earlier[x] = earlier[x].with(y),
                (false, true) => earlier[y] = earlier[y].with(x),
                _ => {
                    return Err(Error::NotMaximalChain(format!(
                        "pair ({}, {}) enters symmetrically",
                        x + 1,
                        y + 1
                    )))
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| std::cmp::Reverse(earlier[x].len()));
    let counts: Vec<usize> = order.iter().map(|&x| earlier[x].len()).collect();
    if counts.iter().enumerate().any(|(i, &c)| c != n - 1 - i) {
        return Err(Error::NotMaximalChain("chain order is not linear".into()));
    }
    Ok(Permutation(order))
}

/// Code of a `sigma`-compatible bipartition, listed in `sigma`-position order.
pub fn code_of(u: &OrderedBipartition, sigma: &Permutation) -> Result<CodeVector> {
    same_size(u.n(), sigma.n())?;
    if !is_compatible_with(u, sigma) {
        return Err(Error::NotCompatible);
    }
    Ok(code_of_unchecked(u, sigma))
}

pub(crate) fn code_of_unchecked(u: &OrderedBipartition, sigma: &Permutation) -> CodeVector {
    let table = u.block_table();
    let s = sigma.as_slice();
    let n = s.len();
    let code = (0..n)
        .map(|p| {
            let b = table[s[p]];
            if u.blocks()[b].underlined {
                let last = p + 1 == n || table[s[p + 1]] != b;
                if last {
                    1
                } else {
                    3
                }
            } else {
                let first = p == 0 || table[s[p - 1]] != b;
                if first {
                    -1
                } else {
                    -3
                }
            }
        })
        .collect();
    CodeVector(code)
}

/// `u_1 ≥ -1`, `u_n ≤ 1` and `u_i − u_{i+1} ≤ 2`, with entries in `{±1, ±3}`.
pub fn is_valid_code(code: &[i8]) -> bool {
    !code.is_empty()
        && code.iter().all(|x| CODE_VALUES.contains(x))
        && code[0] >= -1
        && *code.last().unwrap() <= 1
        && code.windows(2).all(|w| w[0] - w[1] <= 2)
}

/// Rebuilds the unique `sigma`-compatible bipartition with the given code by
/// reading the entries left to right.
pub fn code_to_bip(code: &CodeVector, sigma: &Permutation) -> Result<OrderedBipartition> {
    same_size(code.len(), sigma.n())?;
    if !is_valid_code(code.entries()) {
        return Err(Error::InvalidCode(format!("{code:?}")));
    }
    Ok(code_to_bip_unchecked(code, sigma))
}

pub(crate) fn code_to_bip_unchecked(code: &CodeVector, sigma: &Permutation) -> OrderedBipartition {
    let u = code.entries();
    let s = sigma.as_slice();
    let mut blocks: Vec<Block> = Vec::new();
    for (p, &val) in u.iter().enumerate() {
        let x = s[p];
        match val {
            // -1 opens a nonunderlined block
            -1 => blocks.push(Block::new(ElemSet::singleton(x), false)),
            // -3 extends the current nonunderlined block
            -3 => {
                let cur = blocks.last_mut().expect("valid code");
                cur.set = cur.set.with(x);
            }
            // 1 and 3 extend an underlined block opened by a preceding 3, or open one
            _ => {
                if p > 0 && u[p - 1] == 3 {
                    let cur = blocks.last_mut().expect("valid code");
                    cur.set = cur.set.with(x);
                } else {
                    blocks.push(Block::new(ElemSet::singleton(x), true));
                }
            }
        }
    }
    OrderedBipartition::new_unchecked(s.len(), blocks)
}

/// The three families of join-irreducible elements of a `σ`-sublattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum JiKind {
    /// `({σ_1..σ_{q-1}}, {σ_q..σ_n})`, `q ∈ 2..=n`.
    E,
    /// `({σ_1..σ_{q-1}}, {σ_q}!, {σ_{q+1}..σ_n})`, `q ∈ 1..=n`.
    F,
    /// `({σ_1..σ_{q-1}}, {σ_q, σ_{q+1}}!, {σ_{q+2}..σ_n})`, `q ∈ 1..n`.
    G,
}

/// A join-irreducible element named relative to an ambient permutation, which
/// is carried by whoever holds the label (a chain, a linear extension).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct JoinIrreducible {
    pub kind: JiKind,
    /// 1-based position index `q`.
    pub index: usize,
}

impl JoinIrreducible {
    pub fn e(q: usize) -> Self {
        JoinIrreducible { kind: JiKind::E, index: q }
    }

    pub fn f(q: usize) -> Self {
        JoinIrreducible { kind: JiKind::F, index: q }
    }

    pub fn g(q: usize) -> Self {
        JoinIrreducible { kind: JiKind::G, index: q }
    }

    pub fn is_valid_for(&self, n: usize) -> bool {
        match self.kind {
            JiKind::E => (2..=n).contains(&self.index),
            JiKind::F => (1..=n).contains(&self.index),
            JiKind::G => (1..n).contains(&self.index),
        }
    }

    /// Code of the element; it does not depend on the ambient permutation.
    pub fn code(&self, n: usize) -> CodeVector {
        let q = self.index;
        // position p (1-based) opens a nonunderlined block at p = 1 or p = q
        // (and after the underlined part), otherwise continues one
        let code = (1..=n)
            .map(|p| match self.kind {
                JiKind::E => {
                    if p == 1 || p == q {
                        -1
                    } else {
                        -3
                    }
                }
                JiKind::F => {
                    if p == q {
                        1
                    } else if p == 1 || p == q + 1 {
                        -1
                    } else {
                        -3
                    }
                }
                JiKind::G => {
                    if p == q {
                        3
                    } else if p == q + 1 {
                        1
                    } else if p == 1 || p == q + 2 {
                        -1
                    } else {
                        -3
                    }
                }
            })
            .collect();
        CodeVector(code)
    }

    pub fn materialize(&self, sigma: &Permutation) -> OrderedBipartition {
        code_to_bip_unchecked(&self.code(sigma.n()), sigma)
    }
}

impl fmt::Debug for JoinIrreducible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.kind, self.index)
    }
}

impl fmt::Display for JoinIrreducible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.kind, self.index)
    }
}

/// The `3n − 2` join-irreducibles in the fixed order
/// `E2, F1, E3, F2, G1, ..., E(k+2), F(k+1), G(k), ..., F(n), G(n−1)`.
pub fn default_ji_order(n: usize) -> Vec<JoinIrreducible> {
    if n == 1 {
        return vec![JoinIrreducible::f(1)];
    }
    let mut out = vec![JoinIrreducible::e(2), JoinIrreducible::f(1)];
    for k in 1..=n - 2 {
        out.push(JoinIrreducible::e(k + 2));
        out.push(JoinIrreducible::f(k + 1));
        out.push(JoinIrreducible::g(k));
    }
    out.push(JoinIrreducible::f(n));
    out.push(JoinIrreducible::g(n - 1));
    out
}

/// Join-irreducible elements of the `sigma`-sublattice, in the default order.
pub fn join_irreducibles(sigma: &Permutation) -> Vec<JoinIrreducible> {
    default_ji_order(sigma.n())
}

/// The `σ`-compatible elements of an interval, with induced covers.
#[derive(Debug, Clone)]
pub struct Sublattice {
    pub sigma: Permutation,
    pub lower: OrderedBipartition,
    pub upper: OrderedBipartition,
    /// Codes in lexicographic order; `elements[i]` has code `codes[i]`.
    pub codes: Vec<CodeVector>,
    pub elements: Vec<OrderedBipartition>,
    /// `(i, j)` with `elements[j]` covering `elements[i]`.
    pub covers: Vec<(usize, usize)>,
}

impl Sublattice {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Elements other than the two ends, sorted.
    pub fn open_elements(&self) -> Vec<OrderedBipartition> {
        let mut out: Vec<_> = self
            .elements
            .iter()
            .filter(|w| **w != self.lower && **w != self.upper)
            .cloned()
            .collect();
        out.sort();
        out
    }
}

/// All valid codes `c` with `lo ≤ c ≤ hi` componentwise, in lexicographic order.
pub fn codes_between(lo: &CodeVector, hi: &CodeVector) -> Vec<CodeVector> {
    let n = lo.len();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(p: usize, lo: &[i8], hi: &[i8], cur: &mut Vec<i8>, out: &mut Vec<CodeVector>) {
        let n = lo.len();
        if p == n {
            out.push(CodeVector(cur.clone()));
            return;
        }
        for &v in CODE_VALUES.iter() {
            if v < lo[p] || v > hi[p] {
                continue;
            }
            if p == 0 && v < -1 {
                continue;
            }
            if p + 1 == n && v > 1 {
                continue;
            }
            if p > 0 && cur[p - 1] - v > 2 {
                continue;
            }
            cur.push(v);
            rec(p + 1, lo, hi, cur, out);
            cur.pop();
        }
    }
    rec(0, lo.entries(), hi.entries(), &mut cur, &mut out);
    out
}

/// All valid codes of length `n`.
pub fn all_valid_codes(n: usize) -> Vec<CodeVector> {
    codes_between(&CodeVector(vec![-3; n]), &CodeVector(vec![3; n]))
}

/// The subposet `[lower, upper]_σ` of `σ`-compatible elements of an interval.
pub fn sublattice(
    lower: &OrderedBipartition,
    upper: &OrderedBipartition,
    sigma: &Permutation,
) -> Result<Sublattice> {
    same_size(lower.n(), upper.n())?;
    same_size(lower.n(), sigma.n())?;
    let lo = code_of(lower, sigma)?;
    let hi = code_of(upper, sigma)?;
    if !lo.le(&hi) {
        return Err(Error::NotAnInterval);
    }
    Ok(sublattice_from_codes(lower, upper, sigma, &lo, &hi))
}

pub(crate) fn sublattice_from_codes(
    lower: &OrderedBipartition,
    upper: &OrderedBipartition,
    sigma: &Permutation,
    lo: &CodeVector,
    hi: &CodeVector,
) -> Sublattice {
    let codes = codes_between(lo, hi);
    let elements = codes.iter().map(|c| code_to_bip_unchecked(c, sigma)).collect();
    let mut covers = Vec::new();
    for (i, c) in codes.iter().enumerate() {
        // a cover raises one entry by one step
        for p in 0..c.len() {
            let step = CODE_VALUES.iter().position(|&v| v == c.0[p]).unwrap();
            if step + 1 == CODE_VALUES.len() {
                continue;
            }
            let mut d = c.clone();
            d.0[p] = CODE_VALUES[step + 1];
            if let Ok(j) = codes.binary_search(&d) {
                covers.push((i, j));
            }
        }
    }
    Sublattice {
        sigma: sigma.clone(),
        lower: lower.clone(),
        upper: upper.clone(),
        codes,
        elements,
        covers,
    }
}

/// Compresses each block of `pi` to a single element, mapping a `pi`-compatible
/// bipartition on `n` elements to an identity-compatible one on `k` elements.
pub fn compress(u: &OrderedBipartition, pi: &OrderedPartition) -> Result<OrderedBipartition> {
    if !is_compatible(u, pi)? {
        return Err(Error::NotCompatible);
    }
    let table = pi.block_table();
    let blocks = u
        .blocks()
        .iter()
        .map(|b| Block::new(b.set.iter().map(|x| table[x]).collect(), b.underlined))
        .collect();
    Ok(OrderedBipartition::new_unchecked(pi.num_blocks(), blocks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::{parse_bipartition, parse_partition};

    fn ob(s: &str) -> OrderedBipartition {
        parse_bipartition(s).unwrap()
    }

    #[test]
    fn compatibility_examples() {
        let one = OrderedPartition::one_block(2).unwrap();
        assert!(is_compatible(&ob("1|2"), &one).is_ok());
        assert!(is_compatible(&ob("1,2"), &parse_partition("1|2").unwrap()).unwrap());
        assert!(!is_compatible(&ob("1|2"), &parse_partition("2|1").unwrap()).unwrap());
        let u = ob("1,2|3,4");
        assert!(is_compatible(&u, &parse_partition("1|2|3|4").unwrap()).unwrap());
        assert!(!is_compatible(&u, &parse_partition("1|4|2|3").unwrap()).unwrap());
    }

    #[test]
    fn paper_code_example() {
        let u = ob("1,2!|3|4,5|6!");
        let id = Permutation::identity(6);
        let code = code_of(&u, &id).unwrap();
        assert_eq!(code.0, vec![3, 1, -1, -1, -3, 1]);
        assert_eq!(code_to_bip(&code, &id).unwrap(), u);
        assert_eq!(code.rank(), crate::lattice::rank(&u));
    }

    #[test]
    fn extreme_codes() {
        let id = Permutation::identity(4);
        assert_eq!(code_of(&OrderedBipartition::bottom(4).unwrap(), &id).unwrap().0, vec![-1, -3, -3, -3]);
        assert_eq!(code_of(&OrderedBipartition::top(4).unwrap(), &id).unwrap().0, vec![3, 3, 3, 1]);
        assert_eq!(
            code_to_bip(&CodeVector(vec![-1, -3, -3, -3]), &id).unwrap(),
            OrderedBipartition::bottom(4).unwrap()
        );
    }

    #[test]
    fn code_errors() {
        let id = Permutation::identity(2);
        assert_eq!(code_of(&ob("2|1"), &id), Err(Error::NotCompatible));
        assert!(matches!(code_to_bip(&CodeVector(vec![-3, 1]), &id), Err(Error::InvalidCode(_))));
    }

    #[test]
    fn validity_examples() {
        assert!(is_valid_code(&[3, 1, -1, -1, -3, 1]));
        assert!(!is_valid_code(&[-3, -1, 1]));
        assert!(!is_valid_code(&[3, -1, 1]));
        assert!(!is_valid_code(&[1, 3]));
        assert!(!is_valid_code(&[1, 0]));
    }

    #[test]
    fn ji_materialization() {
        let id = Permutation::identity(3);
        assert_eq!(JoinIrreducible::e(2).materialize(&id), ob("1|2,3"));
        assert_eq!(JoinIrreducible::f(1).materialize(&id), ob("1!|2,3"));
        assert_eq!(JoinIrreducible::f(3).materialize(&id), ob("1,2|3!"));
        assert_eq!(JoinIrreducible::g(2).materialize(&id), ob("1|2,3!"));
        let sigma = Permutation::from_one_based(&[3, 1, 2]).unwrap();
        assert_eq!(JoinIrreducible::g(1).materialize(&sigma), ob("1,3!|2"));
        for n in 2..6 {
            assert_eq!(join_irreducibles(&Permutation::identity(n)).len(), 3 * n - 2);
        }
    }

    #[test]
    fn sublattice_trivial_and_full() {
        let sigma = Permutation::identity(3);
        let u = ob("1|2,3!");
        let s = sublattice(&u, &u, &sigma).unwrap();
        assert_eq!(s.elements, vec![u.clone()]);
        let full = sublattice(
            &OrderedBipartition::bottom(3).unwrap(),
            &OrderedBipartition::top(3).unwrap(),
            &sigma,
        )
        .unwrap();
        assert_eq!(full.codes, all_valid_codes(3));
        assert_eq!(
            sublattice(&ob("2|1,3"), &OrderedBipartition::top(3).unwrap(), &sigma).unwrap_err(),
            Error::NotCompatible
        );
        assert_eq!(
            sublattice(&OrderedBipartition::top(3).unwrap(), &OrderedBipartition::bottom(3).unwrap(), &sigma)
                .unwrap_err(),
            Error::NotAnInterval
        );
    }

    #[test]
    fn chain_permutation_small() {
        let chain = vec![OrderedBipartition::bottom(1).unwrap(), OrderedBipartition::top(1).unwrap()];
        assert_eq!(chain_permutation(&chain).unwrap(), Permutation::identity(1));
        let chain: Vec<_> = ["1,2", "1|2", "1!|2", "1!|2!", "1,2!"].iter().map(|s| ob(s)).collect();
        assert_eq!(chain_permutation(&chain).unwrap(), Permutation::identity(2));
        let broken: Vec<_> = ["1,2", "1|2", "1,2!"].iter().map(|s| ob(s)).collect();
        assert!(matches!(chain_permutation(&broken), Err(Error::NotMaximalChain(_))));
    }

    #[test]
    fn compression_example() {
        let pi = parse_partition("1,3|2").unwrap();
        let u = ob("1,3!|2");
        assert_eq!(compress(&u, &pi).unwrap(), ob("1!|2"));
        assert_eq!(compress(&ob("1|2,3"), &pi), Err(Error::NotCompatible));
    }
}
