//! Text and JSON forms. All external forms use 1-based element labels.
//!
//! Text form of an ordered bipartition: blocks joined by `|`, elements
//! comma-separated, underlined blocks suffixed with `!`, e.g. `1,2!|3|4,5|6!`.
//! Ordered partitions use the same form without `!`. Permutations are written
//! as a comma-separated list, e.g. `2,1,3`.
//!
//! JSON form of an ordered bipartition:
//! `{"blocks": [[1,2],[3]], "underlined": [true,false]}`. Ordered partitions are
//! arrays of blocks, permutations are flat arrays.

use serde::{Deserialize, Serialize};

use crate::bipartition::{Block, OrderedBipartition, OrderedPartition, Permutation};
use crate::elemset::{ElemSet, MAX_ELEMENTS};
use crate::error::{Error, Result};

fn join_set(set: ElemSet) -> String {
    set.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(",")
}

pub fn bipartition_to_text(ob: &OrderedBipartition) -> String {
    ob.blocks()
        .iter()
        .map(|b| format!("{}{}", join_set(b.set), if b.underlined { "!" } else { "" }))
        .collect::<Vec<_>>()
        .join("|")
}

pub fn partition_to_text(p: &OrderedPartition) -> String {
    p.blocks().iter().map(|&b| join_set(b)).collect::<Vec<_>>().join("|")
}

pub fn permutation_to_text(p: &Permutation) -> String {
    p.as_slice().iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(",")
}

fn parse_elements(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            let x: usize = t
                .parse()
                .map_err(|_| Error::Parse(format!("bad element `{t}`")))?;
            if x == 0 || x > MAX_ELEMENTS {
                return Err(Error::Parse(format!("element {x} out of range 1..{MAX_ELEMENTS}")));
            }
            Ok(x)
        })
        .collect()
}

fn blocks_from_lists(lists: &[(Vec<usize>, bool)]) -> Result<OrderedBipartition> {
    let n = lists.iter().map(|(l, _)| l.len()).sum();
    let refs: Vec<(&[usize], bool)> = lists.iter().map(|(l, u)| (l.as_slice(), *u)).collect();
    OrderedBipartition::from_lists(n, &refs)
}

/// Parses `1,2!|3|4,5|6!`. The ground set is `{1..n}` with `n` the element count.
pub fn parse_bipartition(text: &str) -> Result<OrderedBipartition> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::Parse("empty bipartition".into()));
    }
    let lists = text
        .split('|')
        .map(|raw| {
            let raw = raw.trim();
            let (body, underlined) = match raw.strip_suffix('!') {
                Some(b) => (b, true),
                None => (raw, false),
            };
            Ok((parse_elements(body)?, underlined))
        })
        .collect::<Result<Vec<_>>>()?;
    blocks_from_lists(&lists)
}

/// Parses `1,3|2,4`.
pub fn parse_partition(text: &str) -> Result<OrderedPartition> {
    let ob = parse_bipartition(text)?;
    if ob.blocks().iter().any(|b| b.underlined) {
        return Err(Error::Parse("ordered partitions carry no `!` flags".into()));
    }
    Ok(ob.ordered_partition())
}

/// Parses `2,1,3` (or the equivalent ordered-partition form `2|1|3`).
pub fn parse_permutation(text: &str) -> Result<Permutation> {
    let text = text.trim();
    let items = if text.contains('|') {
        parse_partition(text)?
            .to_permutation()
            .ok_or_else(|| Error::Parse("permutation blocks must be singletons".into()))?
            .one_based()
    } else {
        parse_elements(text)?
    };
    Permutation::from_one_based(&items)
}

/// Parses either the JSON or the text form, deciding by the first character.
pub fn parse_bipartition_any(text: &str) -> Result<OrderedBipartition> {
    let t = text.trim();
    if t.starts_with('{') {
        BipartitionJson::from_str(t)
    } else {
        parse_bipartition(t)
    }
}

/// Serde mirror of an ordered bipartition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartitionJson {
    pub blocks: Vec<Vec<usize>>,
    pub underlined: Vec<bool>,
}

impl BipartitionJson {
    fn from_str(t: &str) -> Result<OrderedBipartition> {
        let raw: BipartitionJson =
            serde_json::from_str(t).map_err(|e| Error::Parse(e.to_string()))?;
        OrderedBipartition::try_from(raw)
    }
}

impl From<&OrderedBipartition> for BipartitionJson {
    fn from(ob: &OrderedBipartition) -> Self {
        BipartitionJson {
            blocks: ob
                .blocks()
                .iter()
                .map(|b| b.set.iter().map(|x| x + 1).collect())
                .collect(),
            underlined: ob.blocks().iter().map(|b| b.underlined).collect(),
        }
    }
}

impl TryFrom<BipartitionJson> for OrderedBipartition {
    type Error = Error;

    fn try_from(raw: BipartitionJson) -> Result<Self> {
        if raw.blocks.len() != raw.underlined.len() {
            return Err(Error::Parse(format!(
                "{} blocks but {} flags",
                raw.blocks.len(),
                raw.underlined.len()
            )));
        }
        if raw.blocks.iter().flatten().any(|&x| x == 0 || x > MAX_ELEMENTS) {
            return Err(Error::Parse("element out of range".into()));
        }
        let lists: Vec<(Vec<usize>, bool)> = raw.blocks.into_iter().zip(raw.underlined).collect();
        blocks_from_lists(&lists)
    }
}

impl Serialize for OrderedBipartition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BipartitionJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for OrderedBipartition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = BipartitionJson::deserialize(d)?;
        OrderedBipartition::try_from(raw).map_err(serde::de::Error::custom)
    }
}

impl Serialize for OrderedPartition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let blocks: Vec<Vec<usize>> = self
            .blocks()
            .iter()
            .map(|b| b.iter().map(|x| x + 1).collect())
            .collect();
        blocks.serialize(s)
    }
}

impl<'de> Deserialize<'de> for OrderedPartition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let blocks = Vec::<Vec<usize>>::deserialize(d)?;
        let lists: Vec<(Vec<usize>, bool)> = blocks.into_iter().map(|b| (b, false)).collect();
        if lists.iter().flat_map(|(l, _)| l).any(|&x| x == 0 || x > MAX_ELEMENTS) {
            return Err(serde::de::Error::custom("element out of range"));
        }
        blocks_from_lists(&lists)
            .map(|ob| ob.ordered_partition())
            .map_err(serde::de::Error::custom)
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let items = Vec::<usize>::deserialize(d)?;
        Permutation::from_one_based(&items).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Block {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let elems: Vec<usize> = self.set.iter().map(|x| x + 1).collect();
        (elems, self.underlined).serialize(s)
    }
}
