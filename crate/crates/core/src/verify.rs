//! Invariant suites run against the whole lattice for a given ground-set size.
//!
//! Each suite returns a list of named checks. The checks recompute properties
//! from the definitions (containment of relations, cover graphs, code vectors)
//! rather than trusting the structures that produced them.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::bipartition::{enumerate_all, ordered_partitions, Block, OrderedBipartition};
use crate::codes::{all_valid_codes, code_of, code_to_bip, default_ji_order, is_compatible_with, sublattice};
use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::format::bipartition_to_text;
use crate::intervals::{mobius_closed_form, mobius_from};
use crate::jt::{check_trotter_property, jt_permutations, jt_refining, is_complete, is_minimal_change};
use crate::lattice::{covers, full_rank, hasse_diagram_with_limit, join, leq, meet, rank};
use crate::morse::ChainEnumeration;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Lattice,
    Graded,
    Codes,
    Jt,
    Morse,
    Mobius,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Lattice,
        Suite::Graded,
        Suite::Codes,
        Suite::Jt,
        Suite::Morse,
        Suite::Mobius,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lattice => "lattice",
            Suite::Graded => "graded",
            Suite::Codes => "codes",
            Suite::Jt => "jt",
            Suite::Morse => "morse",
            Suite::Mobius => "mobius",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub n: usize,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn run_suite(suite: Suite, n: usize) -> Result<SuiteReport> {
    if n == 0 {
        return Err(Error::MalformedPartition("ground set must be nonempty".into()));
    }
    let checks = match suite {
        Suite::Lattice => lattice_suite(n)?,
        Suite::Graded => graded_suite(n)?,
        Suite::Codes => codes_suite(n)?,
        Suite::Jt => jt_suite(n)?,
        Suite::Morse => morse_suite(n)?,
        Suite::Mobius => mobius_suite(n)?,
    };
    Ok(SuiteReport { suite, n, checks })
}

/// Up-sets of every element as bitsets over the enumeration order.
fn up_sets(all: &[OrderedBipartition]) -> Vec<Vec<u64>> {
    let words = all.len().div_ceil(64);
    let rels: Vec<_> = all.iter().map(|u| u.relation()).collect();
    rels.par_iter()
        .map(|r| {
            let mut bits = vec![0u64; words];
            for (j, s) in rels.iter().enumerate() {
                if r.is_subset(s) {
                    bits[j / 64] |= 1 << (j % 64);
                }
            }
            bits
        })
        .collect()
}

fn and(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

/// `U1 = (1|…|n)`, `U2 = (1̲|…|n̲)`, `V = (n|…|1)`: together with the bounds
/// they form a pentagon.
pub fn pentagon(n: usize) -> Result<[OrderedBipartition; 3]> {
    let singles = |underlined: bool, rev: bool| {
        let mut blocks: Vec<Block> = (0..n).map(|x| Block::new(ElemSet::singleton(x), underlined)).collect();
        if rev {
            blocks.reverse();
        }
        OrderedBipartition::new(n, blocks)
    };
    Ok([singles(false, false)?, singles(true, false)?, singles(false, true)?])
}

/// Whether the three elements of [`pentagon`] generate a pentagon sublattice.
pub fn is_pentagon(n: usize) -> Result<bool> {
    let [u1, u2, v] = pentagon(n)?;
    let (bot, top) = (OrderedBipartition::bottom(n)?, OrderedBipartition::top(n)?);
    Ok(u1 != u2
        && leq(&u1, &u2)?
        && join(&u1, &v)? == top
        && join(&u2, &v)? == top
        && meet(&u1, &v)? == bot
        && meet(&u2, &v)? == bot)
}

fn lattice_suite(n: usize) -> Result<Vec<Check>> {
    let all: Vec<_> = enumerate_all(n)?.collect();
    let index: HashMap<_, _> = all.iter().cloned().enumerate().map(|(i, u)| (u, i)).collect();
    let up = up_sets(&all);
    let down: Vec<Vec<u64>> = {
        let words = all.len().div_ceil(64);
        let mut d = vec![vec![0u64; words]; all.len()];
        for (i, bits) in up.iter().enumerate() {
            for j in 0..all.len() {
                if bits[j / 64] >> (j % 64) & 1 == 1 {
                    d[j][i / 64] |= 1 << (i % 64);
                }
            }
        }
        d
    };
    // the join is the least common upper bound iff its up-set is the intersection
    let bad_join = (0..all.len()).into_par_iter().find_map_first(|i| {
        (i..all.len()).find_map(|j| {
            let w = join(&all[i], &all[j]).ok()?;
            let k = index[&w];
            (up[k] != and(&up[i], &up[j])).then_some((i, j))
        })
    });
    let bad_meet = (0..all.len()).into_par_iter().find_map_first(|i| {
        (i..all.len()).find_map(|j| {
            let w = meet(&all[i], &all[j]).ok()?;
            let k = index[&w];
            (down[k] != and(&down[i], &down[j])).then_some((i, j))
        })
    });
    let pair_detail = |bad: Option<(usize, usize)>| match bad {
        None => format!("{} pairs", all.len() * (all.len() + 1) / 2),
        Some((i, j)) => format!("fails at {} and {}", bipartition_to_text(&all[i]), bipartition_to_text(&all[j])),
    };
    let bad_complement = all.iter().find(|u| {
        let c = u.complement();
        c.relation() != u.relation().complement() || c.complement() != **u
    });
    let mut checks = vec![
        Check::new("enumeration count", crate::count_bipartitions(n) == Some(all.len() as u128), format!("{}", all.len())),
        Check::new("join is least upper bound", bad_join.is_none(), pair_detail(bad_join)),
        Check::new("meet is greatest lower bound", bad_meet.is_none(), pair_detail(bad_meet)),
        Check::new(
            "complement is bipartitional and involutive",
            bad_complement.is_none(),
            bad_complement.map(bipartition_to_text).unwrap_or_default(),
        ),
    ];
    if n >= 2 {
        checks.push(Check::new("pentagon sublattice", is_pentagon(n)?, ""));
    }
    Ok(checks)
}

fn graded_suite(n: usize) -> Result<Vec<Check>> {
    let h = hasse_diagram_with_limit(n, n)?;
    let all = &h.nodes;
    let up = up_sets(all);
    let top = full_rank(n);
    let rank_ok = h.edges.iter().all(|&(a, b)| h.ranks[b] == h.ranks[a] + 1);
    let ranks_span = h.ranks.iter().copied().min() == Some(0) && h.ranks.iter().copied().max() == Some(top);
    // u ⋖ v iff u < v and no w strictly between
    let mut edge_set = vec![Vec::new(); all.len()];
    for &(a, b) in &h.edges {
        edge_set[a].push(b);
    }
    let bad_cover = (0..all.len()).into_par_iter().find_map_first(|i| {
        (0..all.len()).find_map(|j| {
            if i == j || up[i][j / 64] >> (j % 64) & 1 == 0 {
                return None;
            }
            let between = (0..all.len()).any(|k| {
                k != i && k != j && up[i][k / 64] >> (k % 64) & 1 == 1 && up[k][j / 64] >> (j % 64) & 1 == 1
            });
            let is_cover = edge_set[i].contains(&j);
            (is_cover == between).then_some((i, j))
        })
    });
    let bad_rank_cover = (0..all.len()).find_map(|i| {
        (0..all.len()).find_map(|j| {
            let comparable = up[i][j / 64] >> (j % 64) & 1 == 1;
            let by_rank = comparable && h.ranks[j] == h.ranks[i] + 1;
            (by_rank != edge_set[i].contains(&j)).then_some((i, j))
        })
    });
    // every element other than the top has a cover, so maximal chains run bottom to top
    let stuck = (0..all.len()).find(|&i| h.ranks[i] != top && edge_set[i].is_empty());
    let moves_ok = all.iter().all(|u| covers(u).iter().all(|(m, v)| m.apply(u).as_ref() == Some(v)));
    let detail = |bad: Option<(usize, usize)>| match bad {
        None => String::new(),
        Some((i, j)) => format!("{} vs {}", bipartition_to_text(&all[i]), bipartition_to_text(&all[j])),
    };
    Ok(vec![
        Check::new("covers raise rank by one", rank_ok, ""),
        Check::new("rank runs from 0 to 3n-2", ranks_span, format!("top rank {top}")),
        Check::new("covers have nothing strictly between", bad_cover.is_none(), detail(bad_cover)),
        Check::new("covers are rank-one comparabilities", bad_rank_cover.is_none(), detail(bad_rank_cover)),
        Check::new(
            "maximal chains have length 3n-2",
            stuck.is_none(),
            stuck.map(|i| bipartition_to_text(&all[i])).unwrap_or_default(),
        ),
        Check::new("cover moves reproduce covers", moves_ok, ""),
    ])
}

fn codes_suite(n: usize) -> Result<Vec<Check>> {
    let all: Vec<_> = enumerate_all(n)?.collect();
    let valid = all_valid_codes(n);
    let sigmas = jt_permutations(n)?.items;
    let expected_ji: Vec<_> = default_ji_order(n).iter().map(|h| h.code(n)).collect();
    let results: Vec<(bool, bool, bool, bool, bool)> = sigmas
        .par_iter()
        .map(|sigma| {
            let compat: Vec<_> = all.iter().filter(|u| is_compatible_with(u, sigma)).cloned().collect();
            let mut codes: Vec<_> = compat.iter().map(|u| code_of(u, sigma).unwrap()).collect();
            let round_trip = compat
                .iter()
                .zip(&codes)
                .all(|(u, c)| code_to_bip(c, sigma).as_ref() == Ok(u) && c.rank() == rank(u));
            let order_iso = compat.iter().zip(&codes).all(|(u, a)| {
                compat.iter().zip(&codes).all(|(v, b)| leq(u, v).unwrap() == a.le(b))
            });
            // join and meet inside the sublattice agree with the whole lattice
            let ops = compat.iter().zip(&codes).all(|(u, a)| {
                compat.iter().zip(&codes).all(|(v, b)| {
                    code_to_bip(&a.join(b), sigma).ok() == join(u, v).ok()
                        && code_to_bip(&a.meet(b), sigma).ok() == meet(u, v).ok()
                })
            });
            let distributive = n > 4
                || codes.iter().all(|a| {
                    codes.iter().all(|b| {
                        codes.iter().all(|c| {
                            a.meet(&b.join(c)) == a.meet(b).join(&a.meet(c))
                                && a.join(&b.meet(c)) == a.join(b).meet(&a.join(c))
                        })
                    })
                });
            // join-irreducibles: elements covering exactly one element of the sublattice
            let sub = sublattice(&OrderedBipartition::bottom(n).unwrap(), &OrderedBipartition::top(n).unwrap(), sigma)
                .unwrap();
            let mut below = vec![0usize; sub.len()];
            for &(_, j) in &sub.covers {
                below[j] += 1;
            }
            let mut jis: Vec<_> = (0..sub.len()).filter(|&i| below[i] == 1).map(|i| sub.codes[i].clone()).collect();
            jis.sort();
            let mut exp = expected_ji.clone();
            exp.sort();
            codes.sort();
            (codes == valid && round_trip, order_iso, ops, distributive, jis == exp)
        })
        .collect();
    let all_of = |f: fn(&(bool, bool, bool, bool, bool)) -> bool| results.iter().all(f);
    let mut checks = vec![
        Check::new("code map is a bijection onto valid codes", all_of(|r| r.0), format!("{} codes, {} permutations", valid.len(), sigmas.len())),
        Check::new("code order matches containment", all_of(|r| r.1), ""),
        Check::new("join and meet are componentwise max and min", all_of(|r| r.2), ""),
    ];
    if n <= 4 {
        checks.push(Check::new("sublattices are distributive", all_of(|r| r.3), ""));
    }
    checks.push(Check::new(
        "join-irreducibles are the E, F, G elements",
        all_of(|r| r.4) && expected_ji.len() == 3 * n - 2,
        format!("{} per sublattice", expected_ji.len()),
    ));
    Ok(checks)
}

fn jt_suite(n: usize) -> Result<Vec<Check>> {
    let bases = ordered_partitions(n)?;
    let bad_listing = bases.par_iter().find_any(|b| match jt_refining(b) {
        Ok(l) => !is_minimal_change(&l) || !is_complete(&l),
        Err(_) => true,
    });
    let bad_trotter = bases
        .par_iter()
        .find_any(|b| !check_trotter_property(b).unwrap_or(false));
    Ok(vec![
        Check::new(
            "listings are complete and minimal-change",
            bad_listing.is_none(),
            format!("{} bases", bases.len()),
        ),
        Check::new(
            "earlier permutations have a witness",
            bad_trotter.is_none(),
            bad_trotter.map(crate::format::partition_to_text).unwrap_or_default(),
        ),
    ])
}

fn morse_suite(n: usize) -> Result<Vec<Check>> {
    let e = ChainEnumeration::full_with_limit(n, n)?;
    let cells = e.critical_cells();
    let dims: Vec<isize> = cells.iter().map(|c| c.dimension).collect();
    let expected_dim = n as isize - 2;
    let mut checks = vec![
        Check::new(
            "one critical cell of dimension n-2",
            dims == [expected_dim],
            format!("{} critical cell(s), dimensions {:?}", cells.len(), dims),
        ),
        Check::new(
            "critical chain lies in the last group",
            cells.len() == 1 && cells[0].group + 1 == e.groups.len(),
            "",
        ),
    ];
    if let Some(c) = cells.first() {
        checks.push(Check::new(
            "J-intervals number n-1",
            c.j_intervals.len() + 1 == n,
            format!("{:?}", c.j_intervals.intervals),
        ));
    }
    Ok(checks)
}

fn mobius_suite(n: usize) -> Result<Vec<Check>> {
    let all: Vec<_> = enumerate_all(n)?.collect();
    let per_lower: Vec<(usize, bool, bool)> = all
        .par_iter()
        .map(|u| {
            let values = mobius_from(u).unwrap();
            let in_range = values.iter().all(|(_, m)| (-1..=1).contains(m));
            let agrees = values.iter().all(|(v, m)| mobius_closed_form(u, v).ok() == Some(*m));
            (values.len(), in_range, agrees)
        })
        .collect();
    let intervals: usize = per_lower.iter().map(|r| r.0).sum();
    let (bot, top) = (OrderedBipartition::bottom(n)?, OrderedBipartition::top(n)?);
    let whole = mobius_closed_form(&bot, &top)?;
    let sign = if n % 2 == 0 { 1 } else { -1 };
    Ok(vec![
        Check::new("values lie in {-1, 0, 1}", per_lower.iter().all(|r| r.1), format!("{intervals} intervals")),
        Check::new("closed form matches recursion", per_lower.iter().all(|r| r.2), ""),
        Check::new("whole lattice has value (-1)^n", whole == sign, format!("{whole}")),
    ])
}
