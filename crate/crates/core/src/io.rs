//! Text formats: game files, partitions, gadget source files and
//! line-oriented reports.
//!
//! A game file looks like
//!
//! ```text
//! # the three-player fixture
//! hedonic 3
//! label 1 centre
//! 0  3  3
//! 3  0 -7
//! 3 -7  0
//! ```
//!
//! Entries are integers or `p/q` fractions; diagonal entries must be the
//! literal `0`. `#` starts a comment running to the end of the line.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gadgets::{AllocationInstance, E3CInstance, SchedulingInstance, SubsetSumZeroInstance};
use crate::game::{Game, Partition, Rational};

/// Meaningful lines with their 1-based line numbers, comments stripped.
fn content_lines(doc: &str) -> impl Iterator<Item = (usize, &str)> {
    doc.lines().enumerate().filter_map(|(k, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((k + 1, line))
    })
}

fn parse_value(token: &str, line: usize) -> Result<Rational> {
    let bad = || Error::parse(line, format!("malformed value `{}`", token));
    let int = |s: &str| BigInt::from_str(s).map_err(|_| bad());
    match token.split_once('/') {
        None => Ok(Rational::from_integer(int(token)?)),
        Some((p, q)) => {
            let q = int(q)?;
            if q.is_zero() {
                return Err(Error::parse(line, format!("zero denominator in `{}`", token)));
            }
            Ok(Rational::new(int(p)?, q))
        }
    }
}

fn parse_count(token: Option<&str>, what: &str, line: usize) -> Result<usize> {
    token
        .and_then(|t| t.parse::<usize>().ok())
        .ok_or_else(|| Error::parse(line, format!("expected a {} count", what)))
}

/// Parses a game file.
pub fn parse_game(doc: &str) -> Result<Game> {
    let mut lines = content_lines(doc);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing `hedonic <n>` header"))?;
    let mut words = header.split_whitespace();
    if words.next() != Some("hedonic") {
        return Err(Error::parse(hline, "expected `hedonic <n>` header"));
    }
    let n = parse_count(words.next(), "player", hline)?;
    if n == 0 || words.next().is_some() {
        return Err(Error::parse(hline, "header must be `hedonic <n>` with n >= 1"));
    }
    let mut labels: Vec<Option<String>> = vec![None; n];
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(n);
    let mut last = hline;
    for (ln, line) in lines {
        last = ln;
        if let Some(rest) = line.strip_prefix("label").filter(|r| r.starts_with(char::is_whitespace)) {
            let rest = rest.trim_start();
            let (idx, text) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
            let i = idx
                .parse::<usize>()
                .ok()
                .filter(|i| (1..=n).contains(i))
                .ok_or_else(|| Error::parse(ln, format!("bad label index `{}`", idx)))?;
            labels[i - 1] = Some(text.trim().to_string());
            continue;
        }
        if rows.len() == n {
            return Err(Error::parse(ln, format!("more than {} matrix rows", n)));
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != n {
            return Err(Error::parse(
                ln,
                format!("row has {} entries, expected {}", tokens.len(), n),
            ));
        }
        let i = rows.len();
        if tokens[i] != "0" {
            return Err(Error::parse(
                ln,
                format!("diagonal entry of row {} must be 0, found `{}`", i + 1, tokens[i]),
            ));
        }
        rows.push(
            tokens
                .iter()
                .map(|t| parse_value(t, ln))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    if rows.len() != n {
        return Err(Error::parse(
            last,
            format!("expected {} matrix rows, found {}", n, rows.len()),
        ));
    }
    let game = Game::new(rows).map_err(|e| Error::parse(hline, e.to_string()))?;
    if labels.iter().all(Option::is_none) {
        return Ok(game);
    }
    let labels = labels
        .into_iter()
        .enumerate()
        .map(|(i, l)| l.unwrap_or_else(|| (i + 1).to_string()))
        .collect();
    game.with_labels(labels)
}

/// Writes a game in the format [`parse_game`] reads.
pub fn serialize_game(g: &Game) -> String {
    let n = g.n();
    let mut out = format!("hedonic {}\n", n);
    if let Some(labels) = g.labels() {
        for (i, l) in labels.iter().enumerate() {
            let clean: String = l.chars().map(|c| if c == '#' || c == '\n' { '_' } else { c }).collect();
            let _ = writeln!(out, "label {} {}", i + 1, clean);
        }
    }
    for i in 1..=n {
        let row: Vec<String> = g.row(i).iter().map(|v| v.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Canonical `{..}|{..}` form.
pub fn serialize_partition(p: &Partition) -> String {
    p.to_string()
}

/// Parses a partition and checks it covers exactly `n` players.
pub fn parse_partition(text: &str, n: usize) -> Result<Partition> {
    let line = content_lines(text)
        .next()
        .map(|(_, l)| l)
        .ok_or_else(|| Error::parse(1, "empty partition"))?;
    let p: Partition = line.parse()?;
    if p.n() != n {
        return Err(Error::parse(
            1,
            format!("partition covers {} players, the game has {}", p.n(), n),
        ));
    }
    Ok(p)
}

fn numbers<T: FromStr>(words: std::str::SplitWhitespace<'_>, line: usize) -> Result<Vec<T>> {
    words
        .map(|w| {
            w.parse::<T>()
                .map_err(|_| Error::parse(line, format!("bad number `{}`", w)))
        })
        .collect()
}

fn reject_unknown(key: &str, line: usize) -> Error {
    Error::parse(line, format!("unexpected keyword `{}`", key))
}

/// Exact cover source: `r <size>` then `triple a b c` lines.
pub fn parse_e3c(doc: &str) -> Result<E3CInstance> {
    let mut r = None;
    let mut triples = Vec::new();
    let mut last = 1;
    for (ln, line) in content_lines(doc) {
        last = ln;
        let mut words = line.split_whitespace();
        match words.next() {
            Some("r") => r = Some(parse_count(words.next(), "ground set", ln)?),
            Some("triple") => {
                let t: Vec<usize> = numbers(words, ln)?;
                let t: [usize; 3] = t
                    .try_into()
                    .map_err(|_| Error::parse(ln, "a triple has exactly three elements"))?;
                triples.push(t);
            }
            Some(k) => return Err(reject_unknown(k, ln)),
            None => {}
        }
    }
    let r = r.ok_or_else(|| Error::parse(last, "missing `r <size>` line"))?;
    E3CInstance::new(r, triples).map_err(|e| Error::parse(last, e.to_string()))
}

/// Scheduling source: `machines <m>` and `jobs p1 p2 ...`.
pub fn parse_scheduling(doc: &str) -> Result<SchedulingInstance> {
    let mut machines = None;
    let mut jobs = None;
    let mut last = 1;
    for (ln, line) in content_lines(doc) {
        last = ln;
        let mut words = line.split_whitespace();
        match words.next() {
            Some("machines") => machines = Some(parse_count(words.next(), "machine", ln)?),
            Some("jobs") => jobs = Some(numbers::<u64>(words, ln)?),
            Some(k) => return Err(reject_unknown(k, ln)),
            None => {}
        }
    }
    let machines = machines.ok_or_else(|| Error::parse(last, "missing `machines <m>` line"))?;
    SchedulingInstance::new(machines, jobs.unwrap_or_default())
        .map_err(|e| Error::parse(last, e.to_string()))
}

/// Subset-sum source: `weights a1 a2 ...`.
pub fn parse_subset_sum(doc: &str) -> Result<SubsetSumZeroInstance> {
    let mut weights = None;
    let mut last = 1;
    for (ln, line) in content_lines(doc) {
        last = ln;
        let mut words = line.split_whitespace();
        match words.next() {
            Some("weights") => weights = Some(numbers::<i64>(words, ln)?),
            Some(k) => return Err(reject_unknown(k, ln)),
            None => {}
        }
    }
    let weights = weights.ok_or_else(|| Error::parse(last, "missing `weights` line"))?;
    SubsetSumZeroInstance::new(weights).map_err(|e| Error::parse(last, e.to_string()))
}

/// Allocation source: one `agent w1 w2 ...` line per agent, giving its
/// weight for each object.
pub fn parse_allocation(doc: &str) -> Result<AllocationInstance> {
    let mut rows = Vec::new();
    let mut last = 1;
    for (ln, line) in content_lines(doc) {
        last = ln;
        let mut words = line.split_whitespace();
        match words.next() {
            Some("agent") => rows.push(numbers::<i64>(words, ln)?),
            Some(k) => return Err(reject_unknown(k, ln)),
            None => {}
        }
    }
    AllocationInstance::new(rows).map_err(|e| Error::parse(last, e.to_string()))
}

/// Ordered `key: value` lines.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    entries: Vec<(String, String)>,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn push(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.entries.push((key.to_string(), value.to_string()));
        self
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    /// First value recorded under `key`.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(out, "{}: {}", k, v);
        }
        out
    }
}
