//! Intervals `[U, V]`: regular/irregular classification, product
//! factorization of regular intervals, Möbius values, and the chain enumeration
//! whose labellings leave no critical cell on irregular intervals.

use std::collections::HashMap;

use petgraph::algo::is_isomorphic_matching;
use petgraph::graph::DiGraph;
use serde::{Serialize, Serializer};

use crate::bipartition::{enumerate_all, Block, OrderedBipartition, Permutation};
use crate::codes::{code_of_unchecked, JoinIrreducible};
use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::jt::jt_decomposition;
use crate::lattice::{hasse_diagram_with_limit, interval_poset, leq, leq_unchecked, rank};
use crate::morse::{default_linext, ChainEnumeration, ChainGroup, LinearExtension};

/// Largest ground set for which [`mobius_bruteforce`] enumerates the lattice.
pub const BRUTEFORCE_MAX_N: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IntervalTag {
    Regular,
    Irregular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IntervalClass {
    pub tag: IntervalTag,
    /// Least element that becomes underlined while its block changes.
    #[serde(serialize_with = "one_based_opt")]
    pub witness: Option<usize>,
}

fn one_based_opt<S: Serializer>(x: &Option<usize>, s: S) -> std::result::Result<S::Ok, S::Error> {
    x.map(|v| v + 1).serialize(s)
}

fn ensure_interval(lower: &OrderedBipartition, upper: &OrderedBipartition) -> Result<()> {
    if leq(lower, upper)? {
        Ok(())
    } else {
        Err(Error::NotAnInterval)
    }
}

/// Elements `x` with `(x,x) ∈ upper ∖ lower` whose block differs between the two.
fn irregular_witnesses(lower: &OrderedBipartition, upper: &OrderedBipartition) -> Vec<usize> {
    let (tl, tu) = (lower.block_table(), upper.block_table());
    (0..lower.n())
        .filter(|&x| {
            let (b, c) = (lower.blocks()[tl[x]], upper.blocks()[tu[x]]);
            !b.underlined && c.underlined && b.set != c.set
        })
        .collect()
}

pub fn classify(lower: &OrderedBipartition, upper: &OrderedBipartition) -> Result<IntervalClass> {
    ensure_interval(lower, upper)?;
    let witness = irregular_witnesses(lower, upper).first().copied();
    Ok(IntervalClass {
        tag: if witness.is_some() { IntervalTag::Irregular } else { IntervalTag::Regular },
        witness,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    Boolean { rank: usize },
    /// The whole lattice on the elements of `block`.
    BipBlock { block: ElemSet },
}

impl Factor {
    pub fn rank(&self) -> usize {
        match self {
            Factor::Boolean { rank } => *rank,
            Factor::BipBlock { block } => 3 * block.len() - 2,
        }
    }

    /// Number of elements, `None` on `u128` overflow.
    pub fn size(&self) -> Option<u128> {
        match self {
            Factor::Boolean { rank } => 1u128.checked_shl(*rank as u32),
            Factor::BipBlock { block } => crate::bipartition::count_bipartitions(block.len()),
        }
    }
}

impl Serialize for Factor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        match self {
            Factor::Boolean { rank } => {
                let mut st = s.serialize_struct("Factor", 2)?;
                st.serialize_field("kind", "boolean")?;
                st.serialize_field("rank", rank)?;
                st.end()
            }
            Factor::BipBlock { block } => {
                let mut st = s.serialize_struct("Factor", 3)?;
                st.serialize_field("kind", "bip")?;
                st.serialize_field("block", block)?;
                st.serialize_field("rank", &self.rank())?;
                st.end()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub factors: Vec<Factor>,
}

impl Factorization {
    pub fn rank(&self) -> usize {
        self.factors.iter().map(Factor::rank).sum()
    }

    pub fn size(&self) -> Option<u128> {
        self.factors.iter().try_fold(1u128, |acc, f| acc.checked_mul(f.size()?))
    }
}

/// Splits a regular interval into Boolean lattices and whole-lattice blocks.
/// Factors of rank zero are omitted; a one-element lattice block is reported
/// as `Boolean(1)`.
pub fn factorize_regular(lower: &OrderedBipartition, upper: &OrderedBipartition) -> Result<Factorization> {
    ensure_interval(lower, upper)?;
    if !irregular_witnesses(lower, upper).is_empty() {
        return Err(Error::NotRegular);
    }
    let mut factors = Vec::new();
    split(lower.blocks().to_vec(), upper.blocks().to_vec(), &mut factors);
    debug_assert_eq!(factors.iter().map(Factor::rank).sum::<usize>(), rank(upper) - rank(lower));
    Ok(Factorization { factors })
}

fn restrict(blocks: &[Block], set: ElemSet) -> Vec<Block> {
    blocks
        .iter()
        .filter_map(|b| {
            let s = b.set.intersection(set);
            (!s.is_empty()).then(|| Block::new(s, b.underlined))
        })
        .collect()
}

fn push_boolean(out: &mut Vec<Factor>, rank: usize) {
    if rank > 0 {
        out.push(Factor::Boolean { rank });
    }
}

fn split(ub: Vec<Block>, vb: Vec<Block>, out: &mut Vec<Factor>) {
    if ub.is_empty() {
        return;
    }
    let underlined_in_v = vb
        .iter()
        .filter(|c| c.underlined)
        .fold(ElemSet::EMPTY, |a, c| a.union(c.set));
    if let Some(m) = ub
        .iter()
        .position(|b| !b.underlined && !b.set.intersection(underlined_in_v).is_empty())
    {
        let before = ub[..m].iter().fold(ElemSet::EMPTY, |a, b| a.union(b.set));
        let after = ub[m + 1..].iter().fold(ElemSet::EMPTY, |a, b| a.union(b.set));
        split(restrict(&ub, before), restrict(&vb, before), out);
        let block = ub[m].set;
        if block.len() == 1 {
            out.push(Factor::Boolean { rank: 1 });
        } else {
            out.push(Factor::BipBlock { block });
        }
        split(restrict(&ub, after), restrict(&vb, after), out);
        return;
    }
    let mut i = 0;
    while i < ub.len() {
        let b = ub[i];
        if b.underlined {
            // a run of underlined blocks of U filling one underlined block of V
            let c = vb.iter().find(|c| c.set.contains(b.set.first().unwrap())).unwrap();
            let mut r = 0;
            while i < ub.len() && ub[i].set.is_subset(c.set) {
                r += 1;
                i += 1;
            }
            push_boolean(out, r - 1);
        } else {
            let r = vb.iter().filter(|c| c.set.is_subset(b.set)).count();
            push_boolean(out, r - 1);
            i += 1;
        }
    }
}

/// `1` on equal ends, `0` on irregular intervals, `(−1)^{rk V − rk U}` otherwise.
pub fn mobius_closed_form(lower: &OrderedBipartition, upper: &OrderedBipartition) -> Result<i64> {
    let class = classify(lower, upper)?;
    if lower == upper {
        return Ok(1);
    }
    Ok(match class.tag {
        IntervalTag::Irregular => 0,
        IntervalTag::Regular => {
            if (rank(upper) - rank(lower)) % 2 == 0 {
                1
            } else {
                -1
            }
        }
    })
}

/// Möbius value by the defining recursion over the elements of the interval,
/// found by filtering the whole lattice.
pub fn mobius_bruteforce(lower: &OrderedBipartition, upper: &OrderedBipartition) -> Result<i64> {
    ensure_interval(lower, upper)?;
    let n = lower.n();
    if n > BRUTEFORCE_MAX_N {
        return Err(Error::SizeLimitExceeded { n, max: BRUTEFORCE_MAX_N });
    }
    let mut elems: Vec<OrderedBipartition> = enumerate_all(n)?
        .filter(|z| leq_unchecked(lower, z) && leq_unchecked(z, upper))
        .collect();
    elems.sort_by_key(|z| z.relation().len());
    Ok(*mobius_recursion(&elems).last().unwrap())
}

/// `μ(elems[0], x)` for every `x`, with `elems` sorted so that smaller elements
/// come first and `elems[0]` the minimum.
pub fn mobius_recursion(elems: &[OrderedBipartition]) -> Vec<i64> {
    let rels: Vec<_> = elems.iter().map(|u| u.relation()).collect();
    let mut mu = vec![0i64; elems.len()];
    mu[0] = 1;
    for x in 1..elems.len() {
        mu[x] = -(0..x)
            .filter(|&y| rels[y].is_subset(&rels[x]))
            .map(|y| mu[y])
            .sum::<i64>();
    }
    mu
}

/// `μ(lower, z)` for every `z ≥ lower` of the lattice on `n ≤ 5` elements.
pub fn mobius_from(lower: &OrderedBipartition) -> Result<Vec<(OrderedBipartition, i64)>> {
    let n = lower.n();
    if n > BRUTEFORCE_MAX_N {
        return Err(Error::SizeLimitExceeded { n, max: BRUTEFORCE_MAX_N });
    }
    let mut elems: Vec<OrderedBipartition> = enumerate_all(n)?.filter(|z| leq_unchecked(lower, z)).collect();
    elems.sort_by_key(|z| z.relation().len());
    let mu = mobius_recursion(&elems);
    Ok(elems.into_iter().zip(mu).collect())
}

/// Picks the linear extension of the join-irreducibles of `[lower, upper]_σ`:
/// on irregular intervals it isolates `E(σ,p)` first or `G(σ,p−1)` last, with
/// `p` chosen from the blocks of an irregular element; otherwise it restricts
/// the default order.
pub fn choose_linext(
    sigma: &Permutation,
    lower: &OrderedBipartition,
    upper: &OrderedBipartition,
) -> Result<LinearExtension> {
    choose(sigma, lower, upper, false)
}

/// As [`choose_linext`], but fails with `NotIrregular` on regular intervals.
pub fn choose_linext_strict(
    sigma: &Permutation,
    lower: &OrderedBipartition,
    upper: &OrderedBipartition,
) -> Result<LinearExtension> {
    choose(sigma, lower, upper, true)
}

/// Join-irreducibles of `[lower, upper]_σ` in default order.
pub fn interval_join_irreducibles(
    sigma: &Permutation,
    lower: &OrderedBipartition,
    upper: &OrderedBipartition,
) -> Vec<JoinIrreducible> {
    let n = sigma.n();
    let lo = code_of_unchecked(lower, sigma);
    let hi = code_of_unchecked(upper, sigma);
    default_linext(sigma)
        .order
        .into_iter()
        .filter(|h| {
            let c = h.code(n);
            c.le(&hi) && !c.le(&lo)
        })
        .collect()
}

fn choose(
    sigma: &Permutation,
    lower: &OrderedBipartition,
    upper: &OrderedBipartition,
    strict: bool,
) -> Result<LinearExtension> {
    ensure_interval(lower, upper)?;
    if !crate::codes::is_compatible_with(lower, sigma) || !crate::codes::is_compatible_with(upper, sigma) {
        return Err(Error::NotCompatible);
    }
    let mut order = interval_join_irreducibles(sigma, lower, upper);
    let witnesses = irregular_witnesses(lower, upper);
    let positions = sigma.positions();
    let Some(&x) = witnesses.iter().min_by_key(|&&x| positions[x]) else {
        if strict {
            return Err(Error::NotIrregular);
        }
        return Ok(LinearExtension { sigma: sigma.clone(), order });
    };
    // 1-based σ-positions spanned by the blocks of x
    let span = |set: ElemSet| {
        let ps: Vec<usize> = set.iter().map(|y| positions[y] + 1).collect();
        (*ps.iter().min().unwrap(), *ps.iter().max().unwrap())
    };
    let (i, j) = span(lower.blocks()[lower.block_index(x)].set);
    let (k, l) = span(upper.blocks()[upper.block_index(x)].set);
    let p = if i < k {
        k
    } else if i > k {
        i
    } else if j < l {
        j + 1
    } else {
        l + 1
    };
    let e = JoinIrreducible::e(p);
    let g = JoinIrreducible::g(p - 1);
    match (order.iter().position(|&h| h == e), order.iter().position(|&h| h == g)) {
        (Some(ie), None) => {
            let h = order.remove(ie);
            order.insert(0, h);
        }
        (None, Some(ig)) => {
            let h = order.remove(ig);
            order.push(h);
        }
        _ => {}
    }
    Ok(LinearExtension { sigma: sigma.clone(), order })
}

/// Chains of `[lower, upper]`: one group per piece of the Johnson–Trotter
/// decomposition, each labelled by [`choose_linext`].
pub fn interval_chain_enumeration(lower: &OrderedBipartition, upper: &OrderedBipartition) -> Result<ChainEnumeration> {
    ensure_interval(lower, upper)?;
    if lower == upper {
        return Err(Error::NotAnInterval);
    }
    let dec = jt_decomposition(lower, upper)?;
    let n = lower.n();
    let groups = dec
        .entries
        .iter()
        .enumerate()
        .map(|(t, entry)| {
            let sigma = &entry.sigma;
            let linext = choose_linext(sigma, lower, upper)?;
            let swap_earlier = (0..=n)
                .map(|q| q >= 2 && dec.entry_of.get(&sigma.swap_adjacent(q)).is_some_and(|&i| i < t))
                .collect();
            Ok(ChainGroup::new(lower, linext, swap_earlier))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ChainEnumeration {
        lower: lower.clone(),
        upper: upper.clone(),
        groups,
    })
}

/// Cover graph with rank labels, for isomorphism tests.
#[derive(Debug, Clone)]
pub struct RankedPoset {
    pub ranks: Vec<usize>,
    pub covers: Vec<(usize, usize)>,
}

impl RankedPoset {
    fn graph(&self) -> DiGraph<usize, ()> {
        let mut g = DiGraph::new();
        let nodes: Vec<_> = self.ranks.iter().map(|&r| g.add_node(r)).collect();
        for &(a, b) in &self.covers {
            g.add_edge(nodes[a], nodes[b], ());
        }
        g
    }

    pub fn is_isomorphic(&self, other: &RankedPoset) -> bool {
        self.ranks.len() == other.ranks.len()
            && self.covers.len() == other.covers.len()
            && is_isomorphic_matching(&self.graph(), &other.graph(), |a, b| a == b, |_, _| true)
    }

    /// The product order; covers change exactly one coordinate by a cover.
    pub fn product(&self, other: &RankedPoset) -> RankedPoset {
        let (p, q) = (self.ranks.len(), other.ranks.len());
        let id = |a: usize, b: usize| a * q + b;
        let mut ranks = vec![0; p * q];
        for a in 0..p {
            for b in 0..q {
                ranks[id(a, b)] = self.ranks[a] + other.ranks[b];
            }
        }
        let mut covers = Vec::new();
        for &(a, a2) in &self.covers {
            for b in 0..q {
                covers.push((id(a, b), id(a2, b)));
            }
        }
        for &(b, b2) in &other.covers {
            for a in 0..p {
                covers.push((id(a, b), id(a, b2)));
            }
        }
        RankedPoset { ranks, covers }
    }

    pub fn point() -> RankedPoset {
        RankedPoset { ranks: vec![0], covers: Vec::new() }
    }

    pub fn boolean(r: usize) -> RankedPoset {
        let ranks = (0..1usize << r).map(|s| s.count_ones() as usize).collect();
        let covers = (0..1usize << r)
            .flat_map(|s| (0..r).filter(move |i| s >> i & 1 == 0).map(move |i| (s, s | 1 << i)))
            .collect();
        RankedPoset { ranks, covers }
    }

    pub fn whole_lattice(n: usize) -> Result<RankedPoset> {
        let h = hasse_diagram_with_limit(n, n)?;
        Ok(RankedPoset { ranks: h.ranks, covers: h.edges })
    }
}

/// The cover graph of the product of the factors.
pub fn factorization_poset(f: &Factorization) -> Result<RankedPoset> {
    f.factors.iter().try_fold(RankedPoset::point(), |acc, fac| {
        let p = match fac {
            Factor::Boolean { rank } => RankedPoset::boolean(*rank),
            Factor::BipBlock { block } => RankedPoset::whole_lattice(block.len())?,
        };
        Ok(acc.product(&p))
    })
}

/// The interval's own cover graph, ranks shifted to start at zero.
pub fn interval_ranked_poset(lower: &OrderedBipartition, upper: &OrderedBipartition) -> Result<RankedPoset> {
    let p = interval_poset(lower, upper)?;
    let base = p.ranks[0];
    Ok(RankedPoset {
        ranks: p.ranks.iter().map(|r| r - base).collect(),
        covers: p.covers,
    })
}

/// Whether a regular interval is isomorphic to the product of its factors.
pub fn factorization_matches(lower: &OrderedBipartition, upper: &OrderedBipartition) -> Result<bool> {
    let f = factorize_regular(lower, upper)?;
    Ok(interval_ranked_poset(lower, upper)?.is_isomorphic(&factorization_poset(&f)?))
}

/// Counts of intervals by class over the lattice on `n` elements.
pub fn interval_census(n: usize) -> Result<HashMap<IntervalTag, usize>> {
    let all: Vec<_> = enumerate_all(n)?.collect();
    let mut out = HashMap::new();
    for u in &all {
        for v in all.iter().filter(|v| leq_unchecked(u, v)) {
            *out.entry(classify(u, v)?.tag).or_insert(0) += 1;
        }
    }
    Ok(out)
}
