//! Constructive algorithms and exact optimizers.

use std::ops::ControlFlow;

use num_traits::{Signed, Zero};

use crate::enumerate::{bell_u64, scan_partitions, Limits, Objective};
use crate::error::{Error, Result};
use crate::game::{Coalition, Game, Partition, Rational, Weights};
use crate::verify::{deviation, envy, pareto_scan, ParetoScan, Target};

/// How serial dictatorship picks the next dictator among remaining players.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum DictatorPolicy {
    /// Smallest remaining index.
    #[default]
    LowestIndex,
    /// The remaining player whose positive values towards the other
    /// remaining players sum to the least; ties go to the smaller index.
    /// This keeps any one dictator from grabbing an extreme share.
    MinPositiveSum,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes_expanded: u64,
    pub pruned: u64,
    pub best_bound: Rational,
}

/// `f(i)`: the sum of player `i`'s strictly positive values.
pub fn f_positive_sum(g: &Game, i: usize) -> Rational {
    positive_sum_among(g, i, (1..=g.n()).filter(|&j| j != i))
}

fn positive_sum_among(g: &Game, i: usize, others: impl Iterator<Item = usize>) -> Rational {
    others
        .map(|j| g.value(i, j))
        .filter(|v| v.is_positive())
        .fold(Rational::zero(), |acc, v| acc + v)
}

/// Serial dictatorship for strict games: each dictator in turn takes every
/// remaining player it strictly likes. The result is Pareto optimal.
pub fn serial_dictatorship(g: &Game, policy: DictatorPolicy) -> Result<Partition> {
    if let Some((i, j)) = g.first_zero_pair() {
        return Err(Error::Precondition(format!(
            "serial dictatorship needs strict preferences but v_{}({}) = 0",
            i, j
        )));
    }
    let mut remaining: Vec<usize> = (1..=g.n()).collect();
    let mut blocks = Vec::new();
    while !remaining.is_empty() {
        let dictator = match policy {
            DictatorPolicy::LowestIndex => remaining[0],
            DictatorPolicy::MinPositiveSum => {
                let mut best: Option<(Rational, usize)> = None;
                for &d in &remaining {
                    let f = positive_sum_among(g, d, remaining.iter().copied().filter(|&j| j != d));
                    if best.as_ref().map_or(true, |(b, _)| f < *b) {
                        best = Some((f, d));
                    }
                }
                best.expect("nonempty").1
            }
        };
        let block: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&j| j == dictator || g.value(dictator, j).is_positive())
            .collect();
        remaining.retain(|j| !block.contains(j));
        blocks.push(Coalition::new(block)?);
    }
    Partition::new(g.n(), blocks)
}

/// Maximum elitist welfare in linear time: the player `k` with the largest
/// `f(k)` joins everyone it likes, and the rest form one block.
pub fn max_elitist(g: &Game) -> (Partition, Rational) {
    let mut best = (Rational::zero(), 1);
    for i in 1..=g.n() {
        let f = f_positive_sum(g, i);
        if f > best.0 {
            best = (f, i);
        }
    }
    let (value, k) = best;
    let liked: Vec<usize> = (1..=g.n())
        .filter(|&j| j == k || g.value(k, j).is_positive())
        .collect();
    let rest: Vec<usize> = (1..=g.n()).filter(|j| !liked.contains(j)).collect();
    let mut blocks = vec![Coalition::new(liked).expect("contains k")];
    if !rest.is_empty() {
        blocks.push(Coalition::new(rest).expect("nonempty"));
    }
    (
        Partition::new(g.n(), blocks).expect("covers every player"),
        value,
    )
}

/// Improves utilitarian welfare by single-player moves until none helps.
/// Used only to seed the branch-and-bound incumbent.
fn welfare_hill_climb(w: &Weights) -> Vec<usize> {
    let n = w.n();
    let mut label: Vec<usize> = (0..n).collect();
    loop {
        let mut moved = false;
        for i in 0..n {
            let gain_with = |b: usize| -> i128 {
                (0..n)
                    .filter(|&j| j != i && label[j] == b)
                    .map(|j| w.get(i, j) + w.get(j, i))
                    .sum()
            };
            let here = gain_with(label[i]);
            // labels range over 0..n; an unused label is an empty block
            if let Some(b) = (0..n).find(|&b| b != label[i] && gain_with(b) > here) {
                label[i] = b;
                moved = true;
            }
        }
        if !moved {
            return canonical_labels(&label);
        }
    }
}

pub(crate) fn canonical_labels(label: &[usize]) -> Vec<usize> {
    let mut map: Vec<Option<usize>> = vec![None; label.iter().max().map_or(0, |m| m + 1)];
    let mut next = 0;
    label
        .iter()
        .map(|&l| {
            *map[l].get_or_insert_with(|| {
                next += 1;
                next - 1
            })
        })
        .collect()
}

struct Incumbent {
    value: i128,
    rgs: Vec<usize>,
    /// Whether `rgs` was reached by the search itself (then it precedes
    /// everything still unexplored) or only supplied as a seed.
    found: bool,
}

struct BranchAndBound<'a, B> {
    w: &'a Weights,
    objective: Objective,
    bound: B,
    rgs: Vec<usize>,
    utils: Vec<i128>,
    members: Vec<Vec<usize>>,
    best: Incumbent,
    nodes: u64,
    pruned: u64,
}

impl<B> BranchAndBound<'_, B>
where
    B: Fn(&Weights, usize, &[i128], &[Vec<usize>]) -> i128,
{
    fn prunable(&self, k: usize, bound: i128) -> bool {
        bound < self.best.value
            || (bound == self.best.value
                && (self.best.found || self.best.rgs[..k] < self.rgs[..k]))
    }

    fn run(&mut self, k: usize) {
        self.nodes += 1;
        let n = self.w.n();
        if k == n {
            let v = self.objective.evaluate(&self.utils);
            if v > self.best.value || (v == self.best.value && !self.best.found && self.rgs < self.best.rgs) {
                self.best = Incumbent {
                    value: v,
                    rgs: self.rgs.clone(),
                    found: true,
                };
            } else if v == self.best.value && !self.best.found && self.rgs == self.best.rgs {
                self.best.found = true;
            }
            return;
        }
        if k > 0 {
            let bound = (self.bound)(self.w, k, &self.utils, &self.members);
            if self.prunable(k, bound) {
                self.pruned += 1;
                return;
            }
        }
        let open = self.members.len();
        for b in 0..=open {
            if b == open {
                self.members.push(Vec::new());
            }
            for &m in &self.members[b] {
                self.utils[m] += self.w.get(m, k);
                self.utils[k] += self.w.get(k, m);
            }
            self.members[b].push(k);
            self.rgs[k] = b;
            self.run(k + 1);
            self.members[b].pop();
            for &m in &self.members[b] {
                self.utils[m] -= self.w.get(m, k);
            }
            self.utils[k] = 0;
            if b == open {
                self.members.pop();
            }
        }
    }
}

fn branch_and_bound<B>(
    g: &Game,
    objective: Objective,
    limits: Limits,
    bound: B,
) -> Result<(Partition, Rational, SearchStats)>
where
    B: Fn(&Weights, usize, &[i128], &[Vec<usize>]) -> i128,
{
    limits.check(g.n())?;
    let w = Weights::new(g)?;
    let n = w.n();
    let singles: Vec<usize> = (0..n).collect();
    let climbed = welfare_hill_climb(&w);
    let seed = [singles, climbed]
        .into_iter()
        .map(|r| (objective.evaluate(&w.utilities(&r)), r))
        .reduce(|a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a })
        .expect("two candidates");
    let mut search = BranchAndBound {
        w: &w,
        objective,
        bound,
        rgs: vec![0; n],
        utils: vec![0; n],
        members: Vec::with_capacity(n),
        best: Incumbent {
            value: seed.0,
            rgs: seed.1,
            found: false,
        },
        nodes: 0,
        pruned: 0,
    };
    search.run(0);
    let best = search.best;
    let value = w.to_rational(best.value);
    Ok((
        Partition::from_rgs_unchecked(&best.rgs),
        value.clone(),
        SearchStats {
            nodes_expanded: search.nodes,
            pruned: search.pruned,
            best_bound: value,
        },
    ))
}

/// Exact maximum utilitarian partition by branch-and-bound.
///
/// Players are placed in index order into existing blocks (by creation) or a
/// new one. A node's bound adds `max(v_i(j) + v_j(i), 0)` for every pair not
/// yet both placed. The result is the first optimum in enumeration order.
pub fn max_utilitarian(g: &Game, limits: Limits) -> Result<(Partition, Rational, SearchStats)> {
    let n = g.n();
    let w = Weights::new(g)?;
    // potential[k]: positive pair mass over pairs whose later member is >= k
    let mut potential = vec![0i128; n + 1];
    for k in (0..n).rev() {
        let col: i128 = (0..k).map(|i| (w.get(i, k) + w.get(k, i)).max(0)).sum();
        potential[k] = potential[k + 1] + col;
    }
    branch_and_bound(g, Objective::Utilitarian, limits, move |_, k, utils, _| {
        utils.iter().sum::<i128>() + potential[k]
    })
}

/// Exact maximum egalitarian partition by branch-and-bound.
///
/// A node is cut when some player's utility cannot reach the incumbent even
/// if it collected every remaining positive value.
pub fn max_egalitarian(g: &Game, limits: Limits) -> Result<(Partition, Rational, SearchStats)> {
    let n = g.n();
    let w = Weights::new(g)?;
    // reach[i * (n + 1) + k]: positive values of i towards players >= k
    let mut reach = vec![0i128; n * (n + 1)];
    for i in 0..n {
        for k in (0..n).rev() {
            let v = if k == i { 0 } else { w.get(i, k).max(0) };
            reach[i * (n + 1) + k] = reach[i * (n + 1) + k + 1] + v;
        }
    }
    branch_and_bound(g, Objective::Egalitarian, limits, move |w, k, utils, members| {
        let assigned = (0..k).map(|i| utils[i] + reach[i * (n + 1) + k]);
        let unplaced = (k..n).map(|j| {
            let join = members
                .iter()
                .map(|b| b.iter().map(|&m| w.get(j, m)).sum::<i128>())
                .max()
                .unwrap_or(0)
                .max(0);
            join + reach[j * (n + 1) + k]
        });
        assigned.chain(unplaced).min().unwrap_or(0)
    })
}

/// One applied move of the Nash dynamics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NashMove {
    pub player: usize,
    pub target: Target,
    pub partition: Partition,
    pub welfare: Rational,
}

/// Better-response dynamics: repeatedly applies the least profitable
/// `(player, target)` deviation. In symmetric games each move raises
/// utilitarian welfare, so the walk ends at a Nash stable partition.
pub struct NashDynamics {
    w: Weights,
    rgs: Vec<usize>,
    done: bool,
}

impl NashDynamics {
    pub fn new(g: &Game, seed: &Partition) -> Result<NashDynamics> {
        if !g.is_symmetric() {
            return Err(Error::Precondition(
                "Nash local search needs symmetric preferences; termination is not guaranteed otherwise"
                    .into(),
            ));
        }
        g.check_partition(seed)?;
        Ok(NashDynamics {
            w: Weights::new(g)?,
            rgs: seed.rgs().to_vec(),
            done: false,
        })
    }

    pub fn current(&self) -> Partition {
        Partition::from_rgs_unchecked(&self.rgs)
    }
}

impl Iterator for NashDynamics {
    type Item = NashMove;

    fn next(&mut self) -> Option<NashMove> {
        if self.done {
            return None;
        }
        let utils = self.w.utilities(&self.rgs);
        let Some((i, b)) = deviation(&self.w, &self.rgs, &utils, false) else {
            self.done = true;
            return None;
        };
        let before = Partition::from_rgs_unchecked(&self.rgs);
        let target = match b {
            None => Target::Alone,
            Some(b) => Target::Join(before.blocks()[b].clone()),
        };
        let mut label = self.rgs.clone();
        label[i] = b.unwrap_or(self.rgs.len());
        self.rgs = canonical_labels(&label);
        let after = self.w.utilities(&self.rgs);
        Some(NashMove {
            player: i + 1,
            target,
            partition: Partition::from_rgs_unchecked(&self.rgs),
            welfare: self.w.to_rational(after.iter().sum()),
        })
    }
}

/// Runs the Nash dynamics from `seed` to a Nash stable partition.
pub fn nash_local_search(g: &Game, seed: &Partition) -> Result<(Partition, SearchStats)> {
    let mut dynamics = NashDynamics::new(g, seed)?;
    let moves = dynamics.by_ref().count() as u64;
    let end = dynamics.current();
    let welfare = g.welfare(&end)?.utilitarian;
    Ok((
        end,
        SearchStats {
            nodes_expanded: moves + 1,
            pruned: 0,
            best_bound: welfare,
        },
    ))
}

/// The chain of partitions visited by repeated Pareto improvement from the
/// singletons: each step jumps to the first partition in enumeration order
/// dominating the current one. Every element is individually rational and
/// the last is Pareto optimal.
pub fn pareto_ir_chain(g: &Game, limits: Limits) -> Result<(Vec<Partition>, u64)> {
    limits.check(g.n())?;
    let w = Weights::new(g)?;
    let budget = bell_u64(g.n());
    let mut rgs: Vec<usize> = (0..g.n()).collect();
    let mut chain = vec![Partition::from_rgs_unchecked(&rgs)];
    let mut work = 0;
    loop {
        let (outcome, examined) = pareto_scan(&w, &w.utilities(&rgs), budget);
        work += examined;
        match outcome {
            ParetoScan::Dominated(next, _) => {
                rgs = next;
                chain.push(Partition::from_rgs_unchecked(&rgs));
            }
            ParetoScan::Undominated => return Ok((chain, work)),
            ParetoScan::OutOfBudget => unreachable!("budget covers the whole space"),
        }
    }
}

/// A partition that is both Pareto optimal and individually rational.
pub fn pareto_ir_improve(g: &Game, limits: Limits) -> Result<(Partition, SearchStats)> {
    let (mut chain, work) = pareto_ir_chain(g, limits)?;
    let end = chain.pop().expect("chain starts at the singletons");
    let welfare = g.welfare(&end)?.utilitarian;
    Ok((
        end,
        SearchStats {
            nodes_expanded: work,
            pruned: 0,
            best_bound: welfare,
        },
    ))
}

/// First partition in enumeration order that is envy-free and Nash stable.
pub fn exists_ef_ns(g: &Game, limits: Limits) -> Result<Option<Partition>> {
    limits.check(g.n())?;
    let w = Weights::new(g)?;
    let mut found = None;
    let _ = scan_partitions(&w, &[0], |rgs, utils| {
        if deviation(&w, rgs, utils, false).is_none() && envy(&w, rgs, utils).is_none() {
            found = Some(Partition::from_rgs_unchecked(rgs));
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    });
    Ok(found)
}

/// First Pareto optimal partition in enumeration order that is envy-free.
pub fn exists_ef_po(g: &Game, limits: Limits) -> Result<Option<Partition>> {
    let w = Weights::new(g)?;
    Ok(crate::enumerate::oracle_pareto_set(g, limits)?
        .into_iter()
        .find(|p| envy(&w, p.rgs(), &w.utilities(p.rgs())).is_none()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::oracle_optimal;
    use crate::game::int;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn all_negative(n: usize) -> Game {
        Game::from_fn(n, |i, j| int(-((i + j) as i64))).unwrap()
    }

    #[test]
    fn positive_sums() {
        let g = Game::three_player_fixture();
        assert_eq!(f_positive_sum(&g, 1), int(6));
        assert_eq!(f_positive_sum(&g, 2), int(3));
        assert_eq!(f_positive_sum(&all_negative(3), 2), int(0));
    }

    #[test]
    fn serial_dictatorship_examples() {
        let g = Game::three_player_fixture();
        assert_eq!(
            serial_dictatorship(&g, DictatorPolicy::LowestIndex).unwrap(),
            Partition::grand(3)
        );
        assert_eq!(
            serial_dictatorship(&g, DictatorPolicy::MinPositiveSum).unwrap(),
            p("{1,2}|{3}")
        );
        let one = Game::from_integers(&[[0]]).unwrap();
        assert_eq!(
            serial_dictatorship(&one, DictatorPolicy::LowestIndex).unwrap(),
            Partition::grand(1)
        );
    }

    #[test]
    fn serial_dictatorship_rejects_indifference() {
        let g = Game::from_integers(&[[0, 1, 2], [1, 0, 0], [1, 1, 0]]).unwrap();
        let err = serial_dictatorship(&g, DictatorPolicy::LowestIndex).unwrap_err();
        assert!(matches!(err, Error::Precondition(ref m) if m.contains("v_2(3)")));
    }

    #[test]
    fn elitist_examples() {
        let (part, v) = max_elitist(&Game::three_player_fixture());
        assert_eq!((part, v), (Partition::grand(3), int(6)));
        let (part, v) = max_elitist(&all_negative(3));
        assert_eq!((part.to_string(), v), ("{1}|{2,3}".to_string(), int(0)));
        let (part, v) = max_elitist(&Game::from_integers(&[[0]]).unwrap());
        assert_eq!((part, v), (Partition::grand(1), int(0)));
    }

    #[test]
    fn utilitarian_examples() {
        let l = Limits::default();
        let (part, v, stats) = max_utilitarian(&Game::three_player_fixture(), l).unwrap();
        assert_eq!((part.to_string(), v), ("{1,2}|{3}".to_string(), int(6)));
        assert!(stats.nodes_expanded >= 1);
        assert_eq!(stats.best_bound, int(6));
        let neg = Game::from_fn(4, |_, _| int(-2)).unwrap();
        let (part, v, _) = max_utilitarian(&neg, l).unwrap();
        assert_eq!((part, v), (Partition::singletons(4), int(0)));
        let pair = Game::from_integers(&[[0, 1], [1, 0]]).unwrap();
        let (part, v, _) = max_utilitarian(&pair, l).unwrap();
        assert_eq!((part, v), (Partition::grand(2), int(2)));
    }

    #[test]
    fn egalitarian_examples() {
        let l = Limits::default();
        assert_eq!(max_egalitarian(&Game::three_player_fixture(), l).unwrap().1, int(0));
        assert_eq!(max_egalitarian(&Game::from_integers(&[[0]]).unwrap(), l).unwrap().1, int(0));
    }

    #[test]
    fn branch_and_bound_reports_first_optimum() {
        // several optima; the enumeration-order first must win
        let g = Game::from_integers(&[[0, 1, 1, 1], [1, 0, -1, 1], [1, -1, 0, 1], [1, 1, 1, 0]]).unwrap();
        for obj in [Objective::Utilitarian, Objective::Egalitarian] {
            let (oracle_p, oracle_v) = oracle_optimal(&g, obj, Limits::default()).unwrap();
            let (bb_p, bb_v, _) = match obj {
                Objective::Utilitarian => max_utilitarian(&g, Limits::default()).unwrap(),
                _ => max_egalitarian(&g, Limits::default()).unwrap(),
            };
            assert_eq!((bb_p, bb_v), (oracle_p, oracle_v), "{:?}", obj);
        }
    }

    #[test]
    fn search_limit() {
        let g = Game::from_fn(5, |_, _| int(1)).unwrap();
        assert!(matches!(max_utilitarian(&g, Limits::new(4)), Err(Error::Resource(_))));
        assert!(matches!(max_egalitarian(&g, Limits::new(4)), Err(Error::Resource(_))));
    }

    #[test]
    fn nash_local_search_examples() {
        let g = Game::three_player_fixture();
        let (end, stats) = nash_local_search(&g, &Partition::singletons(3)).unwrap();
        assert_eq!(end, p("{1,2}|{3}"));
        assert_eq!(stats.nodes_expanded, 2);
        let moves: Vec<NashMove> = NashDynamics::new(&g, &Partition::singletons(3)).unwrap().collect();
        assert_eq!(moves.len(), 1);
        assert_eq!(moves[0].player, 1);
        assert_eq!(moves[0].target, Target::Join(Coalition::singleton(2)));
        let (end, _) = nash_local_search(&g, &p("{1,2}|{3}")).unwrap();
        assert_eq!(end, p("{1,2}|{3}"));
    }

    #[test]
    fn nash_local_search_needs_symmetry() {
        let g = Game::from_integers(&[[0, 1], [2, 0]]).unwrap();
        assert!(matches!(
            nash_local_search(&g, &Partition::singletons(2)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn pareto_chain_examples() {
        let l = Limits::default();
        let (end, _) = pareto_ir_improve(&Game::three_player_fixture(), l).unwrap();
        assert_eq!(end, p("{1,2}|{3}"));
        let (end, _) = pareto_ir_improve(&all_negative(4), l).unwrap();
        assert_eq!(end, Partition::singletons(4));
    }

    #[test]
    fn existence_examples() {
        let l = Limits::default();
        let g = Game::three_player_fixture();
        assert_eq!(exists_ef_ns(&g, l).unwrap(), None);
        assert_eq!(exists_ef_po(&g, l).unwrap(), Some(Partition::grand(3)));
        let pair = Game::from_integers(&[[0, 1], [1, 0]]).unwrap();
        assert_eq!(exists_ef_ns(&pair, l).unwrap(), Some(Partition::grand(2)));
        let one = Game::from_integers(&[[0]]).unwrap();
        assert_eq!(exists_ef_po(&one, l).unwrap(), Some(Partition::grand(1)));
    }

    #[test]
    fn canonical_relabelling() {
        assert_eq!(canonical_labels(&[2, 0, 2, 5]), vec![0, 1, 0, 2]);
    }
}
