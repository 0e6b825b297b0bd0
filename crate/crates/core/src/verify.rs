//! Checkers for individual rationality, Nash stability, individual
//! stability, envy-freeness and Pareto optimality.
//!
//! The first four run in polynomial time. The Pareto check scans the whole
//! partition space and can be capped by a budget.

use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use crate::enumerate::{bell_u64, dominance, scan_partitions, Limits};
use crate::error::{Error, Result};
use crate::game::{Coalition, Game, Partition, Weights};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    IndividualRationality,
    NashStable,
    IndividuallyStable,
    EnvyFree,
    ParetoOptimal,
}

impl Property {
    pub const ALL: [Property; 5] = [
        Property::IndividualRationality,
        Property::NashStable,
        Property::IndividuallyStable,
        Property::EnvyFree,
        Property::ParetoOptimal,
    ];

    /// Short code used on the command line and in reports.
    pub fn code(self) -> &'static str {
        match self {
            Property::IndividualRationality => "ir",
            Property::NashStable => "ns",
            Property::IndividuallyStable => "is",
            Property::EnvyFree => "ef",
            Property::ParetoOptimal => "po",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Property> {
        Property::ALL
            .into_iter()
            .find(|p| p.code().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::domain(format!("unknown property `{}`", s)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    Fails,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Unknown => "unknown",
        })
    }
}

/// Where a deviating player goes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Target {
    /// Leave and form a new singleton coalition.
    Alone,
    /// Join an existing coalition.
    Join(Coalition),
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Alone => f.write_str("{}"),
            Target::Join(c) => write!(f, "{}", c),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// A player worse off than alone.
    Player(usize),
    /// A profitable unilateral move.
    Deviation { player: usize, target: Target },
    /// `envious` would rather take `envied`'s seat.
    Envy { envious: usize, envied: usize },
    /// A partition Pareto dominating the checked one; `improved` is the least
    /// strictly better off player.
    Dominated { by: Partition, improved: usize },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Player(i) => write!(f, "player {}", i),
            Witness::Deviation { player, target } => write!(f, "player {} -> {}", player, target),
            Witness::Envy { envious, envied } => write!(f, "player {} envies {}", envious, envied),
            Witness::Dominated { by, .. } => write!(f, "{}", by),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyReport {
    pub property: Property,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    /// Partitions examined; set only by the Pareto check.
    pub work: Option<u64>,
}

impl PropertyReport {
    fn from_witness(property: Property, witness: Option<Witness>) -> PropertyReport {
        PropertyReport {
            property,
            verdict: if witness.is_some() {
                Verdict::Fails
            } else {
                Verdict::Holds
            },
            witness,
            work: None,
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

// Kernels over a growth string and its scaled utilities. Labels are the
// canonical block indices, so ascending label order is canonical block order.

/// Per-block sums of `v_i(.)` over members other than `i`.
fn block_sums(w: &Weights, rgs: &[usize], i: usize, sums: &mut Vec<i128>) {
    let blocks = rgs.iter().max().map_or(0, |m| m + 1);
    sums.clear();
    sums.resize(blocks, 0);
    for (j, &b) in rgs.iter().enumerate() {
        if j != i {
            sums[b] += w.get(i, j);
        }
    }
}

pub(crate) fn ir_violation(utils: &[i128]) -> Option<usize> {
    utils.iter().position(|&u| u < 0)
}

/// Least `(player, target)` profitable deviation; target `None` is the empty
/// coalition and orders first. With `welcome`, every member of the target
/// must weakly gain from the newcomer (individual stability).
pub(crate) fn deviation(
    w: &Weights,
    rgs: &[usize],
    utils: &[i128],
    welcome: bool,
) -> Option<(usize, Option<usize>)> {
    let mut sums = Vec::new();
    for i in 0..rgs.len() {
        if utils[i] < 0 {
            return Some((i, None));
        }
        block_sums(w, rgs, i, &mut sums);
        for (b, &gain) in sums.iter().enumerate() {
            if b == rgs[i] || gain <= utils[i] {
                continue;
            }
            if welcome
                && rgs
                    .iter()
                    .enumerate()
                    .any(|(j, &lb)| lb == b && w.get(j, i) < 0)
            {
                continue;
            }
            return Some((i, Some(b)));
        }
    }
    None
}

/// Least ordered pair `(i, j)` where `i` would gain by taking `j`'s seat.
pub(crate) fn envy(w: &Weights, rgs: &[usize], utils: &[i128]) -> Option<(usize, usize)> {
    let mut sums = Vec::new();
    for i in 0..rgs.len() {
        block_sums(w, rgs, i, &mut sums);
        for j in 0..rgs.len() {
            if rgs[j] != rgs[i] && sums[rgs[j]] - w.get(i, j) > utils[i] {
                return Some((i, j));
            }
        }
    }
    None
}

pub(crate) enum ParetoScan {
    Undominated,
    Dominated(Vec<usize>, usize),
    OutOfBudget,
}

/// Scans partitions in enumeration order for one dominating `target`.
/// Returns the outcome and the number of partitions examined.
pub(crate) fn pareto_scan(w: &Weights, target: &[i128], budget: u64) -> (ParetoScan, u64) {
    let mut examined = 0u64;
    let mut outcome = ParetoScan::Undominated;
    let _ = scan_partitions(w, &[0], |rgs, utils| {
        if examined == budget {
            outcome = ParetoScan::OutOfBudget;
            return ControlFlow::Break(());
        }
        examined += 1;
        if let Some(k) = dominance(utils, target) {
            outcome = ParetoScan::Dominated(rgs.to_vec(), k);
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    });
    (outcome, examined)
}

fn prepared(g: &Game, p: &Partition) -> Result<(Weights, Vec<i128>)> {
    g.check_partition(p)?;
    let w = Weights::new(g)?;
    let utils = w.utilities(p.rgs());
    Ok((w, utils))
}

fn target_of(p: &Partition, label: Option<usize>) -> Target {
    match label {
        None => Target::Alone,
        Some(b) => Target::Join(p.blocks()[b].clone()),
    }
}

/// Holds iff nobody is worse off than alone; the witness is the least
/// violating player.
pub fn check_individual_rationality(g: &Game, p: &Partition) -> Result<PropertyReport> {
    let (_, utils) = prepared(g, p)?;
    Ok(PropertyReport::from_witness(
        Property::IndividualRationality,
        ir_violation(&utils).map(|i| Witness::Player(i + 1)),
    ))
}

/// Holds iff no player strictly gains by moving to another coalition of `p`
/// or to a new singleton.
pub fn check_nash_stable(g: &Game, p: &Partition) -> Result<PropertyReport> {
    let (w, utils) = prepared(g, p)?;
    Ok(PropertyReport::from_witness(
        Property::NashStable,
        deviation(&w, p.rgs(), &utils, false).map(|(i, b)| Witness::Deviation {
            player: i + 1,
            target: target_of(p, b),
        }),
    ))
}

/// Nash stability restricted to moves every member of the target coalition
/// weakly welcomes.
pub fn check_individually_stable(g: &Game, p: &Partition) -> Result<PropertyReport> {
    let (w, utils) = prepared(g, p)?;
    Ok(PropertyReport::from_witness(
        Property::IndividuallyStable,
        deviation(&w, p.rgs(), &utils, true).map(|(i, b)| Witness::Deviation {
            player: i + 1,
            target: target_of(p, b),
        }),
    ))
}

/// Holds iff no player strictly prefers taking the seat of a player outside
/// its own coalition.
pub fn check_envy_free(g: &Game, p: &Partition) -> Result<PropertyReport> {
    let (w, utils) = prepared(g, p)?;
    Ok(PropertyReport::from_witness(
        Property::EnvyFree,
        envy(&w, p.rgs(), &utils).map(|(i, j)| Witness::Envy {
            envious: i + 1,
            envied: j + 1,
        }),
    ))
}

/// Exhaustive Pareto check.
///
/// Without a budget the game must be within `limits` and the whole space is
/// scanned. With a budget at most that many partitions are examined and the
/// verdict is `Unknown` if the scan is cut short.
pub fn check_pareto_optimal(
    g: &Game,
    p: &Partition,
    budget: Option<u64>,
    limits: Limits,
) -> Result<PropertyReport> {
    let budget = match budget {
        Some(b) => b,
        None => {
            limits.check(g.n())?;
            bell_u64(g.n())
        }
    };
    let (w, utils) = prepared(g, p)?;
    let (outcome, work) = pareto_scan(&w, &utils, budget);
    let (verdict, witness) = match outcome {
        ParetoScan::Undominated => (Verdict::Holds, None),
        ParetoScan::Dominated(rgs, k) => (
            Verdict::Fails,
            Some(Witness::Dominated {
                by: Partition::from_rgs_unchecked(&rgs),
                improved: k + 1,
            }),
        ),
        ParetoScan::OutOfBudget => (Verdict::Unknown, None),
    };
    Ok(PropertyReport {
        property: Property::ParetoOptimal,
        verdict,
        witness,
        work: Some(work),
    })
}

/// Runs the checker for `property`. `budget` applies to the Pareto check only.
pub fn check(
    g: &Game,
    p: &Partition,
    property: Property,
    budget: Option<u64>,
    limits: Limits,
) -> Result<PropertyReport> {
    match property {
        Property::IndividualRationality => check_individual_rationality(g, p),
        Property::NashStable => check_nash_stable(g, p),
        Property::IndividuallyStable => check_individually_stable(g, p),
        Property::EnvyFree => check_envy_free(g, p),
        Property::ParetoOptimal => check_pareto_optimal(g, p, budget, limits),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::enumerate_partitions;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn join(m: &[usize]) -> Target {
        Target::Join(Coalition::new(m.to_vec()).unwrap())
    }

    #[test]
    fn individual_rationality() {
        let g = Game::three_player_fixture();
        assert!(check_individual_rationality(&g, &p("{1,2}|{3}")).unwrap().holds());
        let r = check_individual_rationality(&g, &p("{1}|{2,3}")).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        assert_eq!(r.witness, Some(Witness::Player(2)));
        let neg = Game::from_integers(&[[0, -1, -2], [-3, 0, -4], [-5, -6, 0]]).unwrap();
        assert!(check_individual_rationality(&neg, &Partition::singletons(3)).unwrap().holds());
    }

    #[test]
    fn nash_stability() {
        let g = Game::three_player_fixture();
        assert!(check_nash_stable(&g, &p("{1,2}|{3}")).unwrap().holds());
        let r = check_nash_stable(&g, &Partition::grand(3)).unwrap();
        assert_eq!(
            r.witness,
            Some(Witness::Deviation {
                player: 2,
                target: Target::Alone
            })
        );
        let r = check_nash_stable(&g, &Partition::singletons(3)).unwrap();
        assert_eq!(
            r.witness,
            Some(Witness::Deviation {
                player: 1,
                target: join(&[2])
            })
        );
    }

    #[test]
    fn individual_stability() {
        let g = Game::three_player_fixture();
        assert!(check_individually_stable(&g, &p("{1,2}|{3}")).unwrap().holds());
        let r = check_individually_stable(&g, &Partition::singletons(3)).unwrap();
        assert_eq!(
            r.witness,
            Some(Witness::Deviation {
                player: 1,
                target: join(&[2])
            })
        );
        let r = check_individually_stable(&g, &Partition::grand(3)).unwrap();
        assert_eq!(
            r.witness,
            Some(Witness::Deviation {
                player: 2,
                target: Target::Alone
            })
        );
    }

    #[test]
    fn individual_stability_respects_objections() {
        // player 1 likes 2, but 2 dislikes 1
        let g = Game::from_integers(&[[0, 5], [-1, 0]]).unwrap();
        let s = Partition::singletons(2);
        assert!(!check_nash_stable(&g, &s).unwrap().holds());
        assert!(check_individually_stable(&g, &s).unwrap().holds());
    }

    #[test]
    fn envy_freeness() {
        let g = Game::three_player_fixture();
        let r = check_envy_free(&g, &p("{1,2}|{3}")).unwrap();
        assert_eq!(
            r.witness,
            Some(Witness::Envy {
                envious: 3,
                envied: 2
            })
        );
        assert!(check_envy_free(&g, &Partition::grand(3)).unwrap().holds());
        assert!(check_envy_free(&g, &Partition::singletons(3)).unwrap().holds());
    }

    #[test]
    fn pareto_optimality() {
        let g = Game::three_player_fixture();
        let l = Limits::default();
        let r = check_pareto_optimal(&g, &p("{1,2}|{3}"), None, l).unwrap();
        assert_eq!((r.verdict, r.work), (Verdict::Holds, Some(5)));
        let r = check_pareto_optimal(&g, &Partition::singletons(3), None, l).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        assert_eq!(
            r.witness,
            Some(Witness::Dominated {
                by: p("{1,2}|{3}"),
                improved: 1
            })
        );
        let r = check_pareto_optimal(&g, &Partition::grand(3), Some(1), l).unwrap();
        assert_eq!((r.verdict, r.work, r.witness), (Verdict::Unknown, Some(1), None));
    }

    #[test]
    fn pareto_needs_budget_beyond_limit() {
        let g = Game::from_fn(5, |_, _| crate::game::int(-1)).unwrap();
        let tight = Limits::new(4);
        assert!(matches!(
            check_pareto_optimal(&g, &Partition::singletons(5), None, tight),
            Err(Error::Resource(_))
        ));
        let r = check_pareto_optimal(&g, &Partition::singletons(5), Some(1000), tight).unwrap();
        assert_eq!((r.verdict, r.work), (Verdict::Holds, Some(52)));
    }

    #[test]
    fn three_player_fixture_has_no_envy_free_nash_stable_partition() {
        let g = Game::three_player_fixture();
        let mut ns = Vec::new();
        let mut ef = Vec::new();
        for q in enumerate_partitions(3, Limits::default()).unwrap() {
            if check_nash_stable(&g, &q).unwrap().holds() {
                ns.push(q.to_string());
            }
            if check_envy_free(&g, &q).unwrap().holds() {
                ef.push(q.to_string());
            }
        }
        assert_eq!(ns, ["{1,2}|{3}", "{1,3}|{2}"]);
        assert_eq!(ef, ["{1,2,3}", "{1}|{2}|{3}"]);
    }

    #[test]
    fn checkers_reject_mismatched_partitions() {
        let g = Game::three_player_fixture();
        let q = Partition::grand(4);
        for prop in Property::ALL {
            assert!(check(&g, &q, prop, None, Limits::default()).is_err());
        }
    }

    #[test]
    fn property_codes_round_trip() {
        for prop in Property::ALL {
            assert_eq!(prop.code().parse::<Property>().unwrap(), prop);
        }
        assert!("xx".parse::<Property>().is_err());
    }
}
