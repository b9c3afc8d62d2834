use serde::Serialize;
use serde_json::json;

use bipartitions::format::{
    bipartition_to_text, parse_bipartition_any, parse_partition, parse_permutation, partition_to_text,
    permutation_to_text,
};
use bipartitions::intervals::{
    classify, factorize_regular, interval_chain_enumeration, mobius_bruteforce, mobius_closed_form,
};
use bipartitions::jt::{jt_decomposition, jt_permutations, jt_refining};
use bipartitions::lattice::hasse_diagram_with_limit;
use bipartitions::morse::{word_labels, ChainEnumeration, ChainGroup, CriticalCell};
use bipartitions::verify::{run_suite, Suite};
use bipartitions::{count_bipartitions, enumerate_all, OrderedBipartition, Permutation, MAX_ELEMENTS};

use crate::report::{write_line, Failure, Reporter};
use crate::{Command, Common, HasseFormat, IntervalArgs, MobiusMethod, EXHAUSTIVE_MAX_N, SINGLE_VALUE_MAX_N};

type CmdResult = Result<(), Failure>;

fn guard(n: usize, common: &Common, default: usize) -> CmdResult {
    let max = common.max_n.unwrap_or(default).min(MAX_ELEMENTS);
    if n == 0 {
        return Err(Failure::Usage("n must be at least 1".into()));
    }
    if n > max {
        return Err(Failure::SizeGuard(format!("n = {n} exceeds --max-n {max}")));
    }
    Ok(())
}

fn parse_ob(text: &str) -> Result<OrderedBipartition, Failure> {
    Ok(parse_bipartition_any(text)?)
}

fn parse_interval(args: &IntervalArgs) -> Result<(OrderedBipartition, OrderedBipartition), Failure> {
    let (lower, upper) = (parse_ob(&args.lower)?, parse_ob(&args.upper)?);
    if lower.n() != upper.n() {
        return Err(Failure::Usage(format!(
            "bounds live on ground sets of size {} and {}",
            lower.n(),
            upper.n()
        )));
    }
    if let Some(n) = args.n {
        if n != lower.n() {
            return Err(Failure::Usage(format!("--n {n} does not match the bounds (size {})", lower.n())));
        }
    }
    Ok((lower, upper))
}

fn interval_params(args: &IntervalArgs, lower: &OrderedBipartition, upper: &OrderedBipartition) -> serde_json::Value {
    json!({
        "n": lower.n(),
        "lower": bipartition_to_text(lower),
        "upper": bipartition_to_text(upper),
        "lower_input": args.lower,
        "upper_input": args.upper,
    })
}

pub fn run(cmd: Command) -> CmdResult {
    match cmd {
        Command::Enumerate { n, count, json, common } => enumerate(n, count, json, &common),
        Command::Verify { n, suite, json, common } => verify(n, &suite, json, &common),
        Command::Hasse { n, format, common } => hasse(n, format, &common),
        Command::Jt { n, base, json, common } => jt(n, base.as_deref(), json, &common),
        Command::Chains { n, sigma, lower, upper, words, json, common } => {
            chains(n, sigma.as_deref(), lower.as_deref().zip(upper.as_deref()), words, json, &common)
        }
        Command::CriticalCells { n, lower, upper, json, common } => {
            critical_cells(n, lower.as_deref().zip(upper.as_deref()), json, &common)
        }
        Command::Mobius { interval, method, json, common } => mobius(&interval, method, json, &common),
        Command::Classify { interval, common } => {
            let (lower, upper) = parse_interval(&interval)?;
            guard(lower.n(), &common, SINGLE_VALUE_MAX_N)?;
            let c = classify(&lower, &upper)?;
            Reporter::new("classify", interval_params(&interval, &lower, &upper), common.timing).emit(&c)
        }
        Command::Factorize { interval, common } => {
            let (lower, upper) = parse_interval(&interval)?;
            guard(lower.n(), &common, SINGLE_VALUE_MAX_N)?;
            let f = factorize_regular(&lower, &upper)?;
            let results = json!({
                "factors": f.factors,
                "rank": f.rank(),
                "size": f.size().map(|s| s.to_string()),
            });
            Reporter::new("factorize", interval_params(&interval, &lower, &upper), common.timing).emit(&results)
        }
        Command::Decompose { interval, common } => {
            let (lower, upper) = parse_interval(&interval)?;
            guard(lower.n(), &common, EXHAUSTIVE_MAX_N)?;
            let d = jt_decomposition(&lower, &upper)?;
            Reporter::new("decompose", interval_params(&interval, &lower, &upper), common.timing).emit(&d)
        }
    }
}

fn enumerate(n: usize, count: bool, json: bool, common: &Common) -> CmdResult {
    let params = json!({ "n": n, "count": count });
    if count {
        guard(n, common, SINGLE_VALUE_MAX_N)?;
        let c = count_bipartitions(n)
            .ok_or_else(|| Failure::SizeGuard(format!("the count for n = {n} does not fit in 128 bits")))?;
        if json {
            return Reporter::new("enumerate", params, common.timing).emit(&json!({ "count": c.to_string() }));
        }
        return write_line(&c.to_string());
    }
    guard(n, common, EXHAUSTIVE_MAX_N)?;
    if json {
        let all: Vec<_> = enumerate_all(n)?.collect();
        return Reporter::new("enumerate", params, common.timing).emit(&all);
    }
    for u in enumerate_all(n)? {
        write_line(&bipartition_to_text(&u))?;
    }
    Ok(())
}

fn verify(n: usize, suite: &str, json: bool, common: &Common) -> CmdResult {
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![suite.parse::<Suite>()?]
    };
    guard(n, common, EXHAUSTIVE_MAX_N)?;
    let reporter = Reporter::new("verify", json!({ "n": n, "suite": suite }), common.timing);
    let mut reports = Vec::new();
    for s in suites {
        let r = run_suite(s, n)?;
        if !json {
            write_line(&format!("suite {} (n = {n})", r.suite))?;
            for c in &r.checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                if c.detail.is_empty() {
                    write_line(&format!("  {status} {}", c.name))?;
                } else {
                    write_line(&format!("  {status} {} ({})", c.name, c.detail))?;
                }
            }
            write_line(&format!("{}: {}", r.suite, if r.passed() { "pass" } else { "fail" }))?;
        }
        reports.push(r);
    }
    let passed = reports.iter().all(|r| r.passed());
    if json {
        reporter.emit(&json!({ "passed": passed, "suites": reports }))?;
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn hasse(n: usize, format: HasseFormat, common: &Common) -> CmdResult {
    guard(n, common, EXHAUSTIVE_MAX_N)?;
    let h = hasse_diagram_with_limit(n, n)?;
    match format {
        HasseFormat::Dot => {
            let dot = h.to_dot();
            write_line(dot.trim_end())
        }
        HasseFormat::Json => Reporter::new("hasse", json!({ "n": n }), common.timing).emit(&h),
    }
}

fn jt(n: Option<usize>, base: Option<&str>, json: bool, common: &Common) -> CmdResult {
    let listing = match base {
        Some(b) => {
            let p = parse_partition(b)?;
            if let Some(n) = n {
                if n != p.n() {
                    return Err(Failure::Usage(format!("--n {n} does not match the base (size {})", p.n())));
                }
            }
            guard(p.n(), common, EXHAUSTIVE_MAX_N)?;
            jt_refining(&p)?
        }
        None => {
            let n = n.expect("clap requires --n without --base");
            guard(n, common, EXHAUSTIVE_MAX_N)?;
            jt_permutations(n)?
        }
    };
    if json {
        let params = json!({ "n": listing.base.n(), "base": partition_to_text(&listing.base) });
        return Reporter::new("jt", params, common.timing).emit(&listing);
    }
    for p in &listing.items {
        write_line(&permutation_to_text(p))?;
    }
    Ok(())
}

/// The full lattice for `n`, or the interval given by text bounds.
fn enumeration(
    n: Option<usize>,
    bounds: Option<(&str, &str)>,
    common: &Common,
) -> Result<(ChainEnumeration, serde_json::Value), Failure> {
    match bounds {
        Some((lo, hi)) => {
            let args = IntervalArgs {
                lower: lo.to_string(),
                upper: hi.to_string(),
                n,
            };
            let (lower, upper) = parse_interval(&args)?;
            guard(lower.n(), common, EXHAUSTIVE_MAX_N)?;
            let e = interval_chain_enumeration(&lower, &upper)?;
            Ok((e, interval_params(&args, &lower, &upper)))
        }
        None => {
            let n = n.ok_or_else(|| Failure::Usage("give --n or both --lower and --upper".into()))?;
            guard(n, common, EXHAUSTIVE_MAX_N)?;
            Ok((ChainEnumeration::full_with_limit(n, n)?, json!({ "n": n })))
        }
    }
}

#[derive(Serialize)]
struct ChainOut {
    index: usize,
    sigma: Permutation,
    elements: Vec<OrderedBipartition>,
    word: Vec<String>,
}

fn chains(
    n: Option<usize>,
    sigma: Option<&str>,
    bounds: Option<(&str, &str)>,
    words: bool,
    json: bool,
    common: &Common,
) -> CmdResult {
    let (e, mut params) = enumeration(n, bounds, common)?;
    let sigma = sigma.map(parse_permutation).transpose()?;
    if let Some(s) = &sigma {
        if s.n() != e.lower.n() {
            return Err(Failure::Usage(format!("--sigma has {} elements, expected {}", s.n(), e.lower.n())));
        }
        if !e.groups.iter().any(|g| g.sigma == *s) {
            return Err(Failure::Usage(format!(
                "{} does not label a group of this enumeration",
                permutation_to_text(s)
            )));
        }
        params["sigma"] = json!(permutation_to_text(s));
    }
    let mut collected = Vec::new();
    let mut index = 0;
    let mut failure = None;
    for g in &e.groups {
        let selected = sigma.as_ref().is_none_or(|s| *s == g.sigma);
        if !selected {
            index += g.count();
            continue;
        }
        g.for_each_word(|w| {
            let c = g.materialize(w);
            if json {
                collected.push(ChainOut {
                    index,
                    sigma: c.sigma,
                    elements: c.elements,
                    word: word_labels(&c.word),
                });
            } else {
                let mut line = c.elements.iter().map(bipartition_to_text).collect::<Vec<_>>().join(" ");
                if words {
                    line.push('\t');
                    line.push_str(&word_labels(&c.word).join(" "));
                }
                if let Err(f) = write_line(&line) {
                    failure = Some(f);
                    return false;
                }
            }
            index += 1;
            true
        });
        if let Some(f) = failure {
            return Err(f);
        }
    }
    if json {
        return Reporter::new("chains", params, common.timing).emit(&collected);
    }
    Ok(())
}

#[derive(Serialize)]
struct CellOut {
    chain_index: usize,
    sigma: Permutation,
    dimension: isize,
    word: Vec<String>,
    chain: Vec<OrderedBipartition>,
    i_intervals: Vec<(usize, usize)>,
    j_intervals: Vec<(usize, usize)>,
}

fn cell_out(g: &ChainGroup, c: &CriticalCell) -> CellOut {
    let keys: Vec<u8> = c
        .word
        .iter()
        .map(|h| g.linext.key_of(*h).expect("label of the group") as u8)
        .collect();
    CellOut {
        chain_index: c.chain_index,
        sigma: c.sigma.clone(),
        dimension: c.dimension,
        word: word_labels(&c.word),
        chain: g.materialize(&keys).elements,
        i_intervals: c.i_intervals.intervals.clone(),
        j_intervals: c.j_intervals.intervals.clone(),
    }
}

fn critical_cells(n: Option<usize>, bounds: Option<(&str, &str)>, json: bool, common: &Common) -> CmdResult {
    let (e, params) = enumeration(n, bounds, common)?;
    let cells: Vec<CellOut> = e
        .critical_cells()
        .iter()
        .map(|c| cell_out(&e.groups[c.group], c))
        .collect();
    let dims: Vec<isize> = cells.iter().map(|c| c.dimension).collect();
    if json {
        let results = json!({
            "count": cells.len(),
            "dimensions": dims,
            "total_chains": e.total_chains(),
            "cells": cells,
        });
        return Reporter::new("critical-cells", params, common.timing).emit(&results);
    }
    write_line(&format!("critical cells: {}", cells.len()))?;
    let dims: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
    write_line(&format!("dimensions: {}", dims.join(" ")))?;
    let fmt_family = |f: &[(usize, usize)]| f.iter().map(|(a, b)| format!("[{a},{b}]")).collect::<Vec<_>>().join(" ");
    for c in &cells {
        write_line(&format!(
            "chain {} (permutation {}, dimension {})",
            c.chain_index,
            permutation_to_text(&c.sigma),
            c.dimension
        ))?;
        write_line(&format!("  word: {}", c.word.join(" ")))?;
        let chain: Vec<String> = c.chain.iter().map(bipartition_to_text).collect();
        write_line(&format!("  chain: {}", chain.join(" ")))?;
        write_line(&format!("  I: {}", fmt_family(&c.i_intervals)))?;
        write_line(&format!("  J: {}", fmt_family(&c.j_intervals)))?;
    }
    Ok(())
}

fn mobius(args: &IntervalArgs, method: MobiusMethod, json: bool, common: &Common) -> CmdResult {
    let (lower, upper) = parse_interval(args)?;
    guard(lower.n(), common, SINGLE_VALUE_MAX_N)?;
    let closed = matches!(method, MobiusMethod::Closed | MobiusMethod::Both)
        .then(|| mobius_closed_form(&lower, &upper))
        .transpose()?;
    let brute = matches!(method, MobiusMethod::Bruteforce | MobiusMethod::Both)
        .then(|| mobius_bruteforce(&lower, &upper))
        .transpose()?;
    let agree = match (closed, brute) {
        (Some(a), Some(b)) => Some(a == b),
        _ => None,
    };
    if json {
        let mut params = interval_params(args, &lower, &upper);
        params["method"] = json!(format!("{method:?}").to_lowercase());
        Reporter::new("mobius", params, common.timing).emit(&json!({
            "closed": closed,
            "bruteforce": brute,
            "agree": agree,
        }))?;
    } else {
        match (closed, brute) {
            (Some(a), None) => write_line(&a.to_string())?,
            (None, Some(b)) => write_line(&b.to_string())?,
            (Some(a), Some(b)) => {
                write_line(&format!("closed: {a}"))?;
                write_line(&format!("bruteforce: {b}"))?;
                write_line(if a == b { "agree" } else { "disagree" })?;
            }
            (None, None) => unreachable!("a method is always selected"),
        }
    }
    if agree == Some(false) {
        return Err(Failure::Verification);
    }
    Ok(())
}
