//! Exhaustive set-partition enumeration and Pareto dominance, the ground
//! truth the solvers and gadget claims are checked against.
//!
//! Partitions are produced in lexicographic order of their restricted growth
//! strings. That order is the tie-breaking order for every "first" or "least"
//! witness reported anywhere in the crate.

use std::ops::ControlFlow;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::game::{Game, Partition, Rational, Weights};

/// Largest player count the exhaustive routines accept by default.
pub const DEFAULT_PLAYER_LIMIT: usize = 13;

/// Size limit for the exhaustive (exponential) routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_players: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_players: DEFAULT_PLAYER_LIMIT,
        }
    }
}

impl Limits {
    pub fn new(max_players: usize) -> Limits {
        Limits { max_players }
    }

    pub fn check(&self, n: usize) -> Result<()> {
        if n > self.max_players {
            Err(Error::Resource(format!(
                "{} players exceeds the enumeration limit of {} (Bell number {}); raise the limit explicitly",
                n,
                self.max_players,
                bell_number(n)
            )))
        } else {
            Ok(())
        }
    }
}

/// The n-th Bell number: the number of partitions of an n-element set.
pub fn bell_number(n: usize) -> BigUint {
    // Bell triangle
    let mut row = vec![BigUint::one()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(row.last().cloned().unwrap_or_else(BigUint::zero));
        for v in &row {
            let s = next.last().unwrap() + v;
            next.push(s);
        }
        row = next;
    }
    row[0].clone()
}

/// Bell number as a machine integer, saturating.
pub(crate) fn bell_u64(n: usize) -> u64 {
    u64::try_from(bell_number(n)).unwrap_or(u64::MAX)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum StreamState {
    Fresh,
    Running,
    Done,
}

/// A resumable stream over the partitions of `{1..n}`.
///
/// The cursor is the current restricted growth string `a_1..a_n` with
/// 0-based labels. A stream may be restricted to the growth strings sharing a
/// fixed prefix, which splits the space into disjoint sub-streams.
#[derive(Clone, Debug)]
pub struct PartitionStream {
    rgs: Vec<usize>,
    maxes: Vec<usize>,
    fixed: usize,
    state: StreamState,
}

impl PartitionStream {
    pub fn new(n: usize, limits: Limits) -> Result<PartitionStream> {
        PartitionStream::with_prefix(n, &[0], limits)
    }

    /// Stream over the growth strings of length `n` starting with `prefix`.
    pub fn with_prefix(n: usize, prefix: &[usize], limits: Limits) -> Result<PartitionStream> {
        if n == 0 {
            return Err(Error::domain("cannot enumerate partitions of an empty set"));
        }
        limits.check(n)?;
        if prefix.is_empty() || prefix.len() > n {
            return Err(Error::domain("prefix length must be within 1..=n"));
        }
        let mut rgs = prefix.to_vec();
        rgs.resize(n, 0);
        let maxes = running_maxes(&rgs)?;
        Ok(PartitionStream {
            rgs,
            maxes,
            fixed: prefix.len(),
            state: StreamState::Fresh,
        })
    }

    /// Continues the unrestricted stream after `cursor`.
    pub fn resume(cursor: &[usize], limits: Limits) -> Result<PartitionStream> {
        let mut s = PartitionStream::with_prefix(cursor.len(), &[0], limits)?;
        s.maxes = running_maxes(cursor)?;
        s.rgs = cursor.to_vec();
        s.state = StreamState::Running;
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.rgs.len()
    }

    pub fn cursor(&self) -> &[usize] {
        &self.rgs
    }

    /// Moves to the next growth string and returns it.
    pub fn advance(&mut self) -> Option<&[usize]> {
        match self.state {
            StreamState::Done => return None,
            StreamState::Fresh => {
                self.state = StreamState::Running;
                return Some(&self.rgs);
            }
            StreamState::Running => {}
        }
        let n = self.rgs.len();
        let lo = self.fixed.max(1);
        for k in (lo..n).rev() {
            if self.rgs[k] <= self.maxes[k - 1] {
                self.rgs[k] += 1;
                self.maxes[k] = self.maxes[k - 1].max(self.rgs[k]);
                for t in k + 1..n {
                    self.rgs[t] = 0;
                    self.maxes[t] = self.maxes[k];
                }
                return Some(&self.rgs);
            }
        }
        self.state = StreamState::Done;
        None
    }
}

impl Iterator for PartitionStream {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        self.advance().map(Partition::from_rgs_unchecked)
    }
}

fn running_maxes(rgs: &[usize]) -> Result<Vec<usize>> {
    let mut maxes = Vec::with_capacity(rgs.len());
    for (k, &a) in rgs.iter().enumerate() {
        let prev = if k == 0 { None } else { Some(maxes[k - 1]) };
        let allowed = prev.map_or(0, |m: usize| m + 1);
        if a > allowed {
            return Err(Error::domain(format!(
                "position {} of the growth string holds {}, at most {} allowed",
                k + 1,
                a,
                allowed
            )));
        }
        maxes.push(prev.map_or(a, |m| m.max(a)));
    }
    Ok(maxes)
}

/// Every partition of `{1..n}` exactly once, in lexicographic
/// restricted-growth order.
pub fn enumerate_partitions(n: usize, limits: Limits) -> Result<PartitionStream> {
    PartitionStream::new(n, limits)
}

/// All valid growth-string prefixes of the given length, in order. Each
/// prefix names a disjoint slice of the partition space.
pub fn growth_prefixes(depth: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![0]];
    for _ in 1..depth {
        out = out
            .into_iter()
            .flat_map(|p| {
                let m = *p.iter().max().unwrap();
                (0..=m + 1).map(move |a| {
                    let mut q = p.clone();
                    q.push(a);
                    q
                })
            })
            .collect();
    }
    out
}

/// Depth-first walk over all partitions extending `prefix`, in enumeration
/// order, maintaining per-player utilities incrementally. The visitor sees
/// the growth string and the scaled utilities of each leaf.
pub(crate) fn scan_partitions<F>(w: &Weights, prefix: &[usize], mut visit: F) -> ControlFlow<()>
where
    F: FnMut(&[usize], &[i128]) -> ControlFlow<()>,
{
    let n = w.n();
    let mut st = ScanState {
        w,
        rgs: vec![0; n],
        utils: vec![0; n],
        members: Vec::with_capacity(n),
    };
    for (k, &b) in prefix.iter().enumerate().take(n) {
        st.place(k, b);
    }
    let start = prefix.len().min(n);
    st.descend(start, &mut visit)
}

struct ScanState<'a> {
    w: &'a Weights,
    rgs: Vec<usize>,
    utils: Vec<i128>,
    members: Vec<Vec<usize>>,
}

impl ScanState<'_> {
    fn place(&mut self, k: usize, b: usize) {
        if b == self.members.len() {
            self.members.push(Vec::new());
        }
        for &m in &self.members[b] {
            self.utils[m] += self.w.get(m, k);
            self.utils[k] += self.w.get(k, m);
        }
        self.members[b].push(k);
        self.rgs[k] = b;
    }

    fn unplace(&mut self, k: usize, b: usize) {
        self.members[b].pop();
        for &m in &self.members[b] {
            self.utils[m] -= self.w.get(m, k);
        }
        self.utils[k] = 0;
        if self.members[b].is_empty() {
            self.members.pop();
        }
    }

    fn descend<F>(&mut self, k: usize, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[usize], &[i128]) -> ControlFlow<()>,
    {
        if k == self.rgs.len() {
            return visit(&self.rgs, &self.utils);
        }
        let open = self.members.len();
        for b in 0..=open {
            self.place(k, b);
            let flow = self.descend(k + 1, visit);
            self.unplace(k, b);
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// `a` Pareto dominates `b`: nobody worse off, somebody strictly better.
/// Returns the least strictly improving index.
pub(crate) fn dominance<T: Ord>(a: &[T], b: &[T]) -> Option<usize> {
    let mut witness = None;
    for (k, (x, y)) in a.iter().zip(b).enumerate() {
        if x < y {
            return None;
        }
        if x > y && witness.is_none() {
            witness = Some(k);
        }
    }
    witness
}

/// Outcome of a pairwise Pareto dominance test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DominanceVerdict {
    pub dominates: bool,
    /// Least player (1-based) strictly better off, present iff `dominates`.
    pub strict_witness: Option<usize>,
}

/// Does `p_new` Pareto dominate `p_old` in `g`?
pub fn pareto_dominates(g: &Game, p_new: &Partition, p_old: &Partition) -> Result<DominanceVerdict> {
    let new = g.partition_utilities(p_new)?;
    let old = g.partition_utilities(p_old)?;
    let witness = dominance(&new, &old).map(|k| k + 1);
    Ok(DominanceVerdict {
        dominates: witness.is_some(),
        strict_witness: witness,
    })
}

/// Social welfare objectives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Objective {
    Utilitarian,
    Egalitarian,
    Elitist,
}

impl Objective {
    pub(crate) fn evaluate(self, utils: &[i128]) -> i128 {
        match self {
            Objective::Utilitarian => utils.iter().sum(),
            Objective::Egalitarian => utils.iter().copied().min().unwrap_or(0),
            Objective::Elitist => utils.iter().copied().max().unwrap_or(0),
        }
    }
}

/// Brute-force optimum of `objective`: the first partition in enumeration
/// order attaining the maximum, with that maximum.
pub fn oracle_optimal(g: &Game, objective: Objective, limits: Limits) -> Result<(Partition, Rational)> {
    limits.check(g.n())?;
    let w = Weights::new(g)?;
    let mut best: Option<(i128, Vec<usize>)> = None;
    let _ = scan_partitions(&w, &[0], |rgs, utils| {
        let v = objective.evaluate(utils);
        if best.as_ref().map_or(true, |(b, _)| v > *b) {
            best = Some((v, rgs.to_vec()));
        }
        ControlFlow::Continue(())
    });
    let (v, rgs) = best.expect("at least one partition");
    Ok((Partition::from_rgs_unchecked(&rgs), w.to_rational(v)))
}

/// Every partition not Pareto dominated by another, in enumeration order.
pub fn oracle_pareto_set(g: &Game, limits: Limits) -> Result<Vec<Partition>> {
    limits.check(g.n())?;
    let w = Weights::new(g)?;
    // nondominated utility vectors, each with the partitions realizing it
    let mut front: Vec<(Vec<i128>, Vec<Vec<usize>>)> = Vec::new();
    let _ = scan_partitions(&w, &[0], |rgs, utils| {
        if front.iter().any(|(f, _)| dominance(f, utils).is_some()) {
            return ControlFlow::Continue(());
        }
        if let Some((_, parts)) = front.iter_mut().find(|(f, _)| f.as_slice() == utils) {
            parts.push(rgs.to_vec());
            return ControlFlow::Continue(());
        }
        front.retain(|(f, _)| dominance(utils, f).is_none());
        front.push((utils.to_vec(), vec![rgs.to_vec()]));
        ControlFlow::Continue(())
    });
    let mut out: Vec<Vec<usize>> = front.into_iter().flat_map(|(_, p)| p).collect();
    out.sort();
    Ok(out.iter().map(|r| Partition::from_rgs_unchecked(r)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::int;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn small_streams() {
        let all: Vec<String> = enumerate_partitions(3, Limits::default())
            .unwrap()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(
            all,
            ["{1,2,3}", "{1,2}|{3}", "{1,3}|{2}", "{1}|{2,3}", "{1}|{2}|{3}"]
        );
        let one: Vec<Partition> = enumerate_partitions(1, Limits::default()).unwrap().collect();
        assert_eq!(one, vec![Partition::grand(1)]);
    }

    #[test]
    fn ten_players_gives_bell_ten() {
        let mut s = enumerate_partitions(10, Limits::default()).unwrap();
        let mut count = 0u64;
        while s.advance().is_some() {
            count += 1;
        }
        assert_eq!(count, 115_975);
    }

    #[test]
    fn bell_numbers() {
        let expect = [1u64, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975];
        for (n, &b) in expect.iter().enumerate() {
            assert_eq!(bell_number(n), BigUint::from(b));
        }
    }

    #[test]
    fn limit_is_enforced() {
        let err = enumerate_partitions(14, Limits::default()).unwrap_err();
        assert!(matches!(err, Error::Resource(ref m) if m.contains("14 players")));
        assert!(enumerate_partitions(14, Limits::new(14)).is_ok());
        assert!(enumerate_partitions(0, Limits::default()).is_err());
    }

    #[test]
    fn prefixes_split_the_space() {
        let limits = Limits::default();
        let whole: Vec<Partition> = enumerate_partitions(6, limits).unwrap().collect();
        let mut pieces = Vec::new();
        for prefix in growth_prefixes(3) {
            pieces.extend(PartitionStream::with_prefix(6, &prefix, limits).unwrap());
        }
        assert_eq!(whole, pieces);
    }

    #[test]
    fn resume_continues_after_cursor() {
        let limits = Limits::default();
        let mut s = enumerate_partitions(5, limits).unwrap();
        for _ in 0..10 {
            s.advance();
        }
        let rest: Vec<Partition> = PartitionStream::resume(s.cursor(), limits).unwrap().collect();
        let direct: Vec<Partition> = s.collect();
        assert_eq!(rest, direct);
        assert_eq!(rest.len(), 52 - 10);
        assert!(PartitionStream::resume(&[0, 2], limits).is_err());
    }

    #[test]
    fn scan_agrees_with_stream() {
        let g = Game::from_integers(&[
            [0, 2, -1, 4],
            [3, 0, 5, -2],
            [-6, 1, 0, 1],
            [2, 2, -3, 0],
        ])
        .unwrap();
        let w = Weights::new(&g).unwrap();
        let mut stream = enumerate_partitions(4, Limits::default()).unwrap();
        let _ = scan_partitions(&w, &[0], |rgs, utils| {
            assert_eq!(stream.advance().unwrap(), rgs);
            assert_eq!(w.utilities(rgs), utils);
            ControlFlow::Continue(())
        });
        assert!(stream.advance().is_none());
    }

    #[test]
    fn dominance_examples() {
        let g = Game::three_player_fixture();
        let v = pareto_dominates(&g, &p("{1,2}|{3}"), &Partition::singletons(3)).unwrap();
        assert_eq!(
            v,
            DominanceVerdict {
                dominates: true,
                strict_witness: Some(1)
            }
        );
        let same = pareto_dominates(&g, &Partition::grand(3), &Partition::grand(3)).unwrap();
        assert!(!same.dominates && same.strict_witness.is_none());
        assert!(!pareto_dominates(&g, &Partition::grand(3), &p("{1,2}|{3}")).unwrap().dominates);
        assert!(pareto_dominates(&g, &Partition::grand(2), &Partition::grand(3)).is_err());
    }

    #[test]
    fn optimal_values_on_three_player_fixture() {
        let g = Game::three_player_fixture();
        let l = Limits::default();
        let (part, v) = oracle_optimal(&g, Objective::Utilitarian, l).unwrap();
        assert_eq!((part.to_string(), v), ("{1,2}|{3}".to_string(), int(6)));
        assert_eq!(oracle_optimal(&g, Objective::Egalitarian, l).unwrap().1, int(0));
        let (part, v) = oracle_optimal(&g, Objective::Elitist, l).unwrap();
        assert_eq!((part, v), (Partition::grand(3), int(6)));
    }

    #[test]
    fn pareto_set_of_three_player_fixture() {
        let set = oracle_pareto_set(&Game::three_player_fixture(), Limits::default()).unwrap();
        assert!(set.contains(&p("{1,2}|{3}")));
        assert!(set.contains(&Partition::grand(3)));
        assert!(!set.contains(&Partition::singletons(3)));
        // brute force pairwise
        let g = Game::three_player_fixture();
        let all: Vec<Partition> = enumerate_partitions(3, Limits::default()).unwrap().collect();
        let brute: Vec<Partition> = all
            .iter()
            .filter(|q| !all.iter().any(|r| pareto_dominates(&g, r, q).unwrap().dominates))
            .cloned()
            .collect();
        assert_eq!(set, brute);
    }
}
