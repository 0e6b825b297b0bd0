//! Additively separable hedonic games: value matrices, coalitions, partitions
//! and the welfare functions defined over them.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact arbitrary-precision fraction, always kept in lowest terms.
pub type Rational = num_rational::BigRational;

/// Converts an integer into a [`Rational`].
pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Builds the fraction `num/den`, reduced.
///
/// Panics if `den` is zero.
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// An additively separable hedonic game on players `1..=n`.
///
/// Entry `(i, j)` of the value matrix is `v_i(j)`, the value player `i`
/// assigns to sharing a coalition with `j`. Diagonal entries are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Game {
    n: usize,
    values: Vec<Rational>,
    labels: Option<Vec<String>>,
}

impl Game {
    /// Builds a game from a square matrix of values.
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Game> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::domain("a game needs at least one player"));
        }
        let mut values = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::domain(format!(
                    "row {} has {} entries, expected {}",
                    i + 1,
                    row.len(),
                    n
                )));
            }
            if !row[i].is_zero() {
                return Err(Error::domain(format!(
                    "diagonal entry v_{0}({0}) must be 0, found {1}",
                    i + 1,
                    row[i]
                )));
            }
            values.extend(row);
        }
        Ok(Game {
            n,
            values,
            labels: None,
        })
    }

    /// Convenience constructor for integer-valued games.
    pub fn from_integers<R: AsRef<[i64]>>(rows: &[R]) -> Result<Game> {
        Game::new(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&v| int(v)).collect())
                .collect(),
        )
    }

    /// Builds a game from a closure `v(i, j)` over 1-based players. The
    /// diagonal is never queried.
    pub fn from_fn(n: usize, mut v: impl FnMut(usize, usize) -> Rational) -> Result<Game> {
        let rows = (1..=n)
            .map(|i| {
                (1..=n)
                    .map(|j| if i == j { Rational::zero() } else { v(i, j) })
                    .collect()
            })
            .collect();
        Game::new(rows)
    }

    /// The three-player game in which no partition is both envy-free and
    /// Nash stable: players 2 and 3 both value player 1 at 3 (and vice
    /// versa) but value each other at -7.
    pub fn three_player_fixture() -> Game {
        Game::from_integers(&[[0, 3, 3], [3, 0, -7], [3, -7, 0]]).expect("fixture is well formed")
    }

    /// Attaches presentation labels, one per player.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Game> {
        if labels.len() != self.n {
            return Err(Error::domain(format!(
                "{} labels given for {} players",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, player: usize) -> Option<&str> {
        self.labels
            .as_ref()
            .and_then(|l| l.get(player.wrapping_sub(1)))
            .map(String::as_str)
    }

    /// `v_i(j)` for 1-based players. Panics on out-of-range indices.
    pub fn value(&self, i: usize, j: usize) -> &Rational {
        assert!(
            (1..=self.n).contains(&i) && (1..=self.n).contains(&j),
            "player index out of range"
        );
        &self.values[(i - 1) * self.n + (j - 1)]
    }

    /// Row `i` of the value matrix (1-based), indexed by 0-based column.
    pub fn row(&self, i: usize) -> &[Rational] {
        &self.values[(i - 1) * self.n..i * self.n]
    }

    fn check_player(&self, i: usize) -> Result<()> {
        if (1..=self.n).contains(&i) {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "player {} out of range 1..={}",
                i, self.n
            )))
        }
    }

    /// Utility of player `i` in coalition `s`: the sum of `v_i(j)` over the
    /// other members of `s`.
    pub fn utility(&self, i: usize, s: &Coalition) -> Result<Rational> {
        self.check_player(i)?;
        if let Some(&m) = s.members().last() {
            self.check_player(m)?;
        }
        if !s.contains(i) {
            return Err(Error::domain(format!(
                "player {} is not a member of {}",
                i, s
            )));
        }
        Ok(s
            .members()
            .iter()
            .filter(|&&j| j != i)
            .fold(Rational::zero(), |acc, &j| acc + self.value(i, j)))
    }

    /// Per-player utilities under `p`, indexed by player - 1.
    pub fn partition_utilities(&self, p: &Partition) -> Result<Vec<Rational>> {
        self.check_partition(p)?;
        Ok((1..=self.n)
            .map(|i| {
                p.block_of(i)
                    .members()
                    .iter()
                    .filter(|&&j| j != i)
                    .fold(Rational::zero(), |acc, &j| acc + self.value(i, j))
            })
            .collect())
    }

    pub fn welfare(&self, p: &Partition) -> Result<WelfareSummary> {
        Ok(WelfareSummary::from_utilities(self.partition_utilities(p)?))
    }

    pub fn is_symmetric(&self) -> bool {
        (1..=self.n).all(|i| (i + 1..=self.n).all(|j| self.value(i, j) == self.value(j, i)))
    }

    pub fn is_strict(&self) -> bool {
        self.first_zero_pair().is_none()
    }

    /// The least ordered pair `(i, j)`, `i != j`, with `v_i(j) = 0`.
    pub fn first_zero_pair(&self) -> Option<(usize, usize)> {
        (1..=self.n)
            .flat_map(|i| (1..=self.n).map(move |j| (i, j)))
            .find(|&(i, j)| i != j && self.value(i, j).is_zero())
    }

    /// Returns a copy of the game with player `i`'s outgoing values
    /// multiplied by `factor`.
    pub fn scale_row(&self, i: usize, factor: &Rational) -> Result<Game> {
        self.check_player(i)?;
        let mut g = self.clone();
        for v in &mut g.values[(i - 1) * self.n..i * self.n] {
            *v = &*v * factor;
        }
        Ok(g)
    }

    pub(crate) fn check_partition(&self, p: &Partition) -> Result<()> {
        if p.n() != self.n {
            Err(Error::domain(format!(
                "partition covers {} players but the game has {}",
                p.n(),
                self.n
            )))
        } else {
            Ok(())
        }
    }
}

/// A nonempty set of players, stored sorted and duplicate-free.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coalition(Vec<usize>);

impl Coalition {
    /// Builds a coalition from 1-based player indices in any order.
    pub fn new(mut members: Vec<usize>) -> Result<Coalition> {
        if members.is_empty() {
            return Err(Error::domain("a coalition must be nonempty"));
        }
        if members.contains(&0) {
            return Err(Error::domain("players are numbered from 1"));
        }
        members.sort_unstable();
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::domain("duplicate member in coalition"));
        }
        Ok(Coalition(members))
    }

    pub fn singleton(i: usize) -> Coalition {
        assert!(i >= 1, "players are numbered from 1");
        Coalition(vec![i])
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min(&self) -> usize {
        self.0[0]
    }

    /// This coalition with `i` added.
    pub fn with(&self, i: usize) -> Coalition {
        let mut m = self.0.clone();
        if let Err(pos) = m.binary_search(&i) {
            m.insert(pos, i);
        }
        Coalition(m)
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, m) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", m)?;
        }
        f.write_str("}")
    }
}

/// A partition of players `1..=n` into disjoint coalitions.
///
/// Blocks are kept in canonical order (sorted by smallest member), so block
/// `k` corresponds to label `k` of the partition's restricted growth string.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    blocks: Vec<Coalition>,
    labels: Vec<usize>,
}

impl Partition {
    /// Validates and canonicalizes a set of blocks covering `1..=n`.
    pub fn new(n: usize, blocks: Vec<Coalition>) -> Result<Partition> {
        if n == 0 {
            return Err(Error::domain("a partition needs at least one player"));
        }
        let mut seen = vec![false; n];
        for b in &blocks {
            for &m in b.members() {
                if m > n {
                    return Err(Error::domain(format!(
                        "player {} out of range 1..={}",
                        m, n
                    )));
                }
                if std::mem::replace(&mut seen[m - 1], true) {
                    return Err(Error::domain(format!("player {} appears in two blocks", m)));
                }
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::domain(format!(
                "player {} is not covered by any block",
                missing + 1
            )));
        }
        Ok(Partition::canonical_from(n, blocks))
    }

    fn canonical_from(n: usize, mut blocks: Vec<Coalition>) -> Partition {
        blocks.sort_by_key(Coalition::min);
        let mut labels = vec![0; n];
        for (k, b) in blocks.iter().enumerate() {
            for &m in b.members() {
                labels[m - 1] = k;
            }
        }
        Partition { blocks, labels }
    }

    /// Builds the partition encoded by a restricted growth string
    /// (0-based block labels, first label 0, each label at most one more
    /// than the running maximum).
    pub fn from_rgs(rgs: &[usize]) -> Result<Partition> {
        if rgs.is_empty() {
            return Err(Error::domain("empty restricted growth string"));
        }
        let mut max = None;
        for (k, &a) in rgs.iter().enumerate() {
            let limit = max.map_or(0, |m: usize| m + 1);
            if a > limit {
                return Err(Error::domain(format!(
                    "label {} at position {} breaks restricted growth",
                    a,
                    k + 1
                )));
            }
            max = Some(max.map_or(a, |m: usize| m.max(a)));
        }
        Ok(Partition::from_rgs_unchecked(rgs))
    }

    pub(crate) fn from_rgs_unchecked(rgs: &[usize]) -> Partition {
        let count = rgs.iter().max().map_or(0, |m| m + 1);
        let mut members = vec![Vec::new(); count];
        for (i, &a) in rgs.iter().enumerate() {
            members[a].push(i + 1);
        }
        Partition {
            blocks: members.into_iter().map(Coalition).collect(),
            labels: rgs.to_vec(),
        }
    }

    pub fn singletons(n: usize) -> Partition {
        Partition::from_rgs_unchecked(&(0..n).collect::<Vec<_>>())
    }

    pub fn grand(n: usize) -> Partition {
        Partition::from_rgs_unchecked(&vec![0; n])
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn blocks(&self) -> &[Coalition] {
        &self.blocks
    }

    /// The coalition containing player `i` (1-based).
    pub fn block_of(&self, i: usize) -> &Coalition {
        &self.blocks[self.labels[i - 1]]
    }

    /// Canonical block index of player `i` (1-based).
    pub fn label_of(&self, i: usize) -> usize {
        self.labels[i - 1]
    }

    /// The restricted growth string of this partition.
    pub fn rgs(&self) -> &[usize] {
        &self.labels
    }

    /// Re-sorts the blocks into canonical order.
    pub fn canonicalize(&self) -> Partition {
        Partition::canonical_from(self.n(), self.blocks.clone())
    }

    /// True when some block equals `c` exactly.
    pub fn contains_block(&self, c: &Coalition) -> bool {
        self.blocks.iter().any(|b| b == c)
    }
}

/// Partitions compare in enumeration order: lexicographically by their
/// restricted growth strings.
impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n()
            .cmp(&other.n())
            .then_with(|| self.labels.cmp(&other.labels))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                f.write_str("|")?;
            }
            write!(f, "{}", b)?;
        }
        Ok(())
    }
}

/// Parses the `{1,2}|{3}` form. The player count is the largest index
/// mentioned, so every player must appear.
impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Partition> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::parse(1, "empty partition"));
        }
        let mut blocks = Vec::new();
        for part in s.split('|') {
            let part = part.trim();
            let inner = part
                .strip_prefix('{')
                .and_then(|p| p.strip_suffix('}'))
                .ok_or_else(|| Error::parse(1, format!("block `{}` is not braced", part)))?;
            let members = inner
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::parse(1, format!("bad player index `{}`", t.trim())))
                })
                .collect::<Result<Vec<_>>>()?;
            blocks.push(Coalition::new(members).map_err(|e| Error::parse(1, e.to_string()))?);
        }
        let n = blocks
            .iter()
            .flat_map(|b| b.members().last())
            .copied()
            .max()
            .unwrap_or(0);
        Partition::new(n, blocks).map_err(|e| Error::parse(1, e.to_string()))
    }
}

/// Utilitarian, egalitarian and elitist welfare of one partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WelfareSummary {
    pub utilitarian: Rational,
    pub egalitarian: Rational,
    pub elitist: Rational,
    pub per_player: Vec<Rational>,
}

impl WelfareSummary {
    pub fn from_utilities(per_player: Vec<Rational>) -> WelfareSummary {
        let utilitarian = per_player.iter().fold(Rational::zero(), |a, u| a + u);
        let egalitarian = per_player.iter().min().cloned().unwrap_or_else(Rational::zero);
        let elitist = per_player.iter().max().cloned().unwrap_or_else(Rational::zero);
        WelfareSummary {
            utilitarian,
            egalitarian,
            elitist,
            per_player,
        }
    }
}

/// The value matrix rescaled by the least common denominator into machine
/// integers. Every comparison the searches make is invariant under a common
/// positive scale, so verdicts computed here are exact.
#[derive(Clone, Debug)]
pub(crate) struct Weights {
    n: usize,
    w: Vec<i128>,
    scale: BigInt,
}

impl Weights {
    pub(crate) fn new(g: &Game) -> Result<Weights> {
        let n = g.n();
        let scale = g
            .values
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        // welfare sums touch at most n^2 entries; keep headroom for differences
        let bound = BigInt::from(i128::MAX) / BigInt::from(4 * n * n);
        let mut w = Vec::with_capacity(n * n);
        for v in &g.values {
            let scaled = v.numer() * (&scale / v.denom());
            if scaled.abs() > bound {
                return Err(Error::Resource(
                    "value magnitudes too large for the exact search kernel".into(),
                ));
            }
            w.push(scaled.to_i128().expect("bounded above"));
        }
        Ok(Weights { n, w, scale })
    }

    #[inline]
    pub(crate) fn n(&self) -> usize {
        self.n
    }

    /// Scaled `v_i(j)` for 0-based players.
    #[inline]
    pub(crate) fn get(&self, i: usize, j: usize) -> i128 {
        self.w[i * self.n + j]
    }

    pub(crate) fn to_rational(&self, x: i128) -> Rational {
        Rational::new(BigInt::from(x), self.scale.clone())
    }

    /// Utilities of every player (0-based) under the labelling `rgs`.
    pub(crate) fn utilities(&self, rgs: &[usize]) -> Vec<i128> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .filter(|&j| j != i && rgs[j] == rgs[i])
                    .map(|j| self.get(i, j))
                    .sum()
            })
            .collect()
    }
}
