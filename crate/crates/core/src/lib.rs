//! Exact solvers and verifiers for additively separable hedonic games.
//!
//! A game assigns every player `i` a value `v_i(j)` for each other player
//! `j`; a player's utility for a coalition is the sum of its values for the
//! other members. All values are exact rationals.
//!
//! * [`game`]: games, coalitions, partitions and welfare.
//! * [`enumerate`]: partition enumeration and brute-force oracles.
//! * [`verify`]: stability, fairness and Pareto checkers with witnesses.
//! * [`solve`]: constructive algorithms and exact optimizers.
//! * [`gadgets`]: reduction gadgets and solvers for their source problems.
//! * [`io`]: file formats and reports.

pub mod enumerate;
pub mod error;
pub mod gadgets;
pub mod game;
pub mod io;
pub mod solve;
pub mod verify;

pub use enumerate::{
    bell_number, enumerate_partitions, oracle_optimal, oracle_pareto_set, pareto_dominates,
    DominanceVerdict, Limits, Objective, PartitionStream, DEFAULT_PLAYER_LIMIT,
};
pub use error::{Error, Result};
pub use game::{frac, int, Coalition, Game, Partition, Rational, WelfareSummary};
pub use solve::{
    exists_ef_ns, exists_ef_po, f_positive_sum, max_egalitarian, max_elitist, max_utilitarian,
    nash_local_search, pareto_ir_chain, pareto_ir_improve, serial_dictatorship, DictatorPolicy,
    NashDynamics, NashMove, SearchStats,
};
pub use verify::{
    check, check_envy_free, check_individual_rationality, check_individually_stable,
    check_nash_stable, check_pareto_optimal, Property, PropertyReport, Target, Verdict, Witness,
};
