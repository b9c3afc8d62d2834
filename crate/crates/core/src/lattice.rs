//! Order, join/meet, cover moves and rank in the lattice of bipartitions.

use std::collections::HashMap;

use serde::Serialize;

use crate::bipartition::{
    enumerate_all, same_size, to_ordered_bipartition_unchecked, Block, OrderedBipartition,
};
use crate::error::{Error, Result};
use crate::format::bipartition_to_text;

/// Default exhaustion guard for whole-lattice constructions.
pub const DEFAULT_EXHAUSTIVE_MAX_N: usize = 6;

/// `U ≤ V` iff the relation of `U` is a subset of the relation of `V`.
pub fn leq(u: &OrderedBipartition, v: &OrderedBipartition) -> Result<bool> {
    same_size(u.n(), v.n())?;
    Ok(leq_unchecked(u, v))
}

pub(crate) fn leq_unchecked(u: &OrderedBipartition, v: &OrderedBipartition) -> bool {
    u.relation().is_subset(&v.relation())
}

/// Containment decided from the block structure alone:
/// (i) some permutation is compatible with both, (ii) every underlined block of
/// `u` sits inside an underlined block of `v`, (iii) every nonunderlined block of
/// `v` sits inside a nonunderlined block of `u`.
pub fn leq_by_blocks(u: &OrderedBipartition, v: &OrderedBipartition) -> Result<bool> {
    same_size(u.n(), v.n())?;
    let (tu, tv) = (u.block_table(), v.block_table());
    let n = u.n();
    // a common refining permutation exists iff no pair is ordered oppositely
    let common_perm = (0..n).all(|x| (0..n).all(|y| !(tu[x] < tu[y] && tv[x] > tv[y])));
    let underlined_inside = u.blocks().iter().filter(|b| b.underlined).all(|b| {
        v.blocks()
            .iter()
            .any(|c| c.underlined && b.set.is_subset(c.set))
    });
    let nonunderlined_inside = v.blocks().iter().filter(|c| !c.underlined).all(|c| {
        u.blocks()
            .iter()
            .any(|b| !b.underlined && c.set.is_subset(b.set))
    });
    Ok(common_perm && underlined_inside && nonunderlined_inside)
}

/// Least upper bound: the transitive closure of the union.
pub fn join(u: &OrderedBipartition, v: &OrderedBipartition) -> Result<OrderedBipartition> {
    same_size(u.n(), v.n())?;
    Ok(join_unchecked(u, v))
}

pub(crate) fn join_unchecked(u: &OrderedBipartition, v: &OrderedBipartition) -> OrderedBipartition {
    let closure = u
        .relation()
        .union(&v.relation())
        .expect("sizes checked")
        .transitive_closure();
    to_ordered_bipartition_unchecked(&closure)
}

/// Greatest lower bound, through complement duality.
pub fn meet(u: &OrderedBipartition, v: &OrderedBipartition) -> Result<OrderedBipartition> {
    same_size(u.n(), v.n())?;
    Ok(meet_unchecked(u, v))
}

pub(crate) fn meet_unchecked(u: &OrderedBipartition, v: &OrderedBipartition) -> OrderedBipartition {
    join_unchecked(&u.complement(), &v.complement()).complement()
}

/// The three ways an ordered bipartition can grow by one rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CoverMove {
    /// Blocks `block` and `block + 1`, both underlined, are joined.
    MergeUnderlined { block: usize },
    /// Nonunderlined block `block` is split into `(first, rest)`.
    SplitNonunderlined { block: usize, first: crate::elemset::ElemSet },
    /// Nonunderlined singleton block `block` becomes underlined.
    UnderlineSingleton { block: usize },
}

impl CoverMove {
    /// Applies the move; `None` if it does not fit `u`.
    pub fn apply(&self, u: &OrderedBipartition) -> Option<OrderedBipartition> {
        let blocks = u.blocks();
        let mut out: Vec<Block> = Vec::with_capacity(blocks.len() + 1);
        match *self {
            CoverMove::MergeUnderlined { block } => {
                let (a, b) = (blocks.get(block)?, blocks.get(block + 1)?);
                if !(a.underlined && b.underlined) {
                    return None;
                }
                out.extend_from_slice(&blocks[..block]);
                out.push(Block::new(a.set.union(b.set), true));
                out.extend_from_slice(&blocks[block + 2..]);
            }
            CoverMove::SplitNonunderlined { block, first } => {
                let b = blocks.get(block)?;
                if b.underlined || first.is_empty() || first == b.set || !first.is_subset(b.set) {
                    return None;
                }
                out.extend_from_slice(&blocks[..block]);
                out.push(Block::new(first, false));
                out.push(Block::new(b.set.difference(first), false));
                out.extend_from_slice(&blocks[block + 1..]);
            }
            CoverMove::UnderlineSingleton { block } => {
                let b = blocks.get(block)?;
                if b.underlined || b.set.len() != 1 {
                    return None;
                }
                out.extend_from_slice(blocks);
                out[block].underlined = true;
            }
        }
        Some(OrderedBipartition::new_unchecked(u.n(), out))
    }
}

/// Every element covering `u`, each with the move producing it.
pub fn covers(u: &OrderedBipartition) -> Vec<(CoverMove, OrderedBipartition)> {
    let blocks = u.blocks();
    let mut moves = Vec::new();
    for (i, b) in blocks.iter().enumerate() {
        if b.underlined {
            if blocks.get(i + 1).is_some_and(|c| c.underlined) {
                moves.push(CoverMove::MergeUnderlined { block: i });
            }
        } else if b.set.len() == 1 {
            moves.push(CoverMove::UnderlineSingleton { block: i });
        } else {
            moves.extend(
                b.set
                    .proper_nonempty_subsets()
                    .map(|first| CoverMove::SplitNonunderlined { block: i, first }),
            );
        }
    }
    moves
        .into_iter()
        .map(|m| {
            let v = m.apply(u).expect("move generated for this bipartition");
            (m, v)
        })
        .collect()
}

/// `3 Σ_{underlined} |B_i| + #nonunderlined − #underlined − 1`.
pub fn rank(u: &OrderedBipartition) -> usize {
    let (mut underlined_elems, mut plain, mut marked) = (0, 0, 0);
    for b in u.blocks() {
        if b.underlined {
            underlined_elems += b.set.len();
            marked += 1;
        } else {
            plain += 1;
        }
    }
    3 * underlined_elems + plain - marked - 1
}

/// The elements of `[lower, upper]` with their induced covers.
#[derive(Debug, Clone, Serialize)]
pub struct IntervalPoset {
    pub lower: OrderedBipartition,
    pub upper: OrderedBipartition,
    /// Sorted by rank, then by value; `elements[0]` is `lower`.
    pub elements: Vec<OrderedBipartition>,
    pub ranks: Vec<usize>,
    /// `(i, j)` with `elements[j]` covering `elements[i]`, sorted.
    pub covers: Vec<(usize, usize)>,
}

impl IntervalPoset {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, u: &OrderedBipartition) -> Option<usize> {
        self.elements.iter().position(|w| w == u)
    }
}

/// Walks up the cover moves from `lower`, keeping what stays below `upper`.
pub fn interval_poset(lower: &OrderedBipartition, upper: &OrderedBipartition) -> Result<IntervalPoset> {
    if !leq(lower, upper)? {
        return Err(Error::NotAnInterval);
    }
    let top = upper.relation();
    let mut seen: HashMap<OrderedBipartition, ()> = HashMap::new();
    seen.insert(lower.clone(), ());
    let mut frontier = vec![lower.clone()];
    let mut elements = vec![lower.clone()];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for u in &frontier {
            for (_, v) in covers(u) {
                if v.relation().is_subset(&top) && seen.insert(v.clone(), ()).is_none() {
                    next.push(v.clone());
                    elements.push(v);
                }
            }
        }
        frontier = next;
    }
    elements.sort_by(|a, b| rank(a).cmp(&rank(b)).then_with(|| a.cmp(b)));
    let index: HashMap<&OrderedBipartition, usize> = elements.iter().enumerate().map(|(i, u)| (u, i)).collect();
    let mut cover_pairs = Vec::new();
    for (i, u) in elements.iter().enumerate() {
        for (_, v) in covers(u) {
            if let Some(&j) = index.get(&v) {
                cover_pairs.push((i, j));
            }
        }
    }
    cover_pairs.sort_unstable();
    let ranks = elements.iter().map(rank).collect();
    Ok(IntervalPoset {
        lower: lower.clone(),
        upper: upper.clone(),
        elements,
        ranks,
        covers: cover_pairs,
    })
}

/// Rank of the whole lattice on `n` elements.
pub fn full_rank(n: usize) -> usize {
    3 * n - 2
}

/// Cover graph of the entire lattice, nodes in [`enumerate_all`] order.
#[derive(Debug, Clone, Serialize)]
pub struct HasseDiagram {
    pub n: usize,
    pub nodes: Vec<OrderedBipartition>,
    pub ranks: Vec<usize>,
    /// `(lower, upper)` node indices, sorted.
    pub edges: Vec<(usize, usize)>,
    #[serde(skip)]
    index: HashMap<OrderedBipartition, usize>,
}

impl HasseDiagram {
    pub fn index_of(&self, u: &OrderedBipartition) -> Option<usize> {
        self.index.get(u).copied()
    }

    /// Upper covers of each node, as node indices.
    pub fn up_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
        }
        adj
    }

    /// Graphviz rendering; nodes of equal rank share a row.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("digraph bip{} {{\n", self.n));
        out.push_str("  rankdir=BT;\n  node [shape=box, fontname=\"monospace\"];\n");
        for (i, u) in self.nodes.iter().enumerate() {
            out.push_str(&format!("  n{i} [label=\"{}\"];\n", bipartition_to_text(u)));
        }
        let top = self.ranks.iter().copied().max().unwrap_or(0);
        for r in 0..=top {
            let row: Vec<String> = (0..self.nodes.len())
                .filter(|&i| self.ranks[i] == r)
                .map(|i| format!("n{i}"))
                .collect();
            out.push_str(&format!("  {{ rank=same; {} }}\n", row.join("; ")));
        }
        for &(a, b) in &self.edges {
            out.push_str(&format!("  n{a} -> n{b};\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// Materializes the full cover graph of the lattice on `n` elements.
pub fn hasse_diagram(n: usize) -> Result<HasseDiagram> {
    hasse_diagram_with_limit(n, DEFAULT_EXHAUSTIVE_MAX_N)
}

pub fn hasse_diagram_with_limit(n: usize, max_n: usize) -> Result<HasseDiagram> {
    if n > max_n {
        return Err(Error::SizeLimitExceeded { n, max: max_n });
    }
    let nodes: Vec<OrderedBipartition> = enumerate_all(n)?.collect();
    let index: HashMap<OrderedBipartition, usize> =
        nodes.iter().cloned().enumerate().map(|(i, u)| (u, i)).collect();
    let ranks = nodes.iter().map(rank).collect();
    let mut edges: Vec<(usize, usize)> = nodes
        .iter()
        .enumerate()
        .flat_map(|(i, u)| {
            let index = &index;
            covers(u).into_iter().map(move |(_, v)| (i, index[&v]))
        })
        .collect();
    edges.sort_unstable();
    Ok(HasseDiagram {
        n,
        nodes,
        ranks,
        edges,
        index,
    })
}
