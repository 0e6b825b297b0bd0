//! Reduction gadgets: concrete games built from instances of exact cover,
//! machine scheduling, zero subset sum and indivisible-object allocation,
//! together with brute-force solvers for those source problems.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::game::{frac, int, Coalition, Game, Partition, Rational};

const MAX_SUBSET_ITEMS: usize = 20;
const MAX_ASSIGNMENTS: u64 = 1 << 24;

/// Exact cover by 3-sets: a ground set `{1..r_size}` and a collection of
/// 3-element subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct E3CInstance {
    r_size: usize,
    triples: Vec<[usize; 3]>,
}

impl E3CInstance {
    pub fn new(r_size: usize, triples: Vec<[usize; 3]>) -> Result<E3CInstance> {
        if r_size % 3 != 0 {
            return Err(Error::domain(format!(
                "ground set size {} is not a multiple of 3",
                r_size
            )));
        }
        let mut sorted = Vec::with_capacity(triples.len());
        for t in triples {
            let mut t = t;
            t.sort_unstable();
            if t[0] == 0 || t[2] > r_size {
                return Err(Error::domain(format!(
                    "triple {:?} leaves the ground set 1..={}",
                    t, r_size
                )));
            }
            if t[0] == t[1] || t[1] == t[2] {
                return Err(Error::domain(format!("triple {:?} repeats an element", t)));
            }
            if sorted.contains(&t) {
                return Err(Error::domain(format!("triple {:?} listed twice", t)));
            }
            sorted.push(t);
        }
        Ok(E3CInstance {
            r_size,
            triples: sorted,
        })
    }

    pub fn r_size(&self) -> usize {
        self.r_size
    }

    pub fn triples(&self) -> &[[usize; 3]] {
        &self.triples
    }

    /// Non-fatal remarks: elements in more than three triples and the empty
    /// collection are both outside the usual hardness setting.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.triples.is_empty() {
            out.push("degenerate instance: empty triple collection".to_string());
        }
        for r in 1..=self.r_size {
            let k = self.triples.iter().filter(|t| t.contains(&r)).count();
            if k > 3 {
                out.push(format!("element {} occurs in {} triples (more than three)", r, k));
            }
        }
        out
    }
}

/// Identical machines and job processing times.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchedulingInstance {
    machines: usize,
    processing_times: Vec<u64>,
}

impl SchedulingInstance {
    pub fn new(machines: usize, processing_times: Vec<u64>) -> Result<SchedulingInstance> {
        if machines == 0 {
            return Err(Error::domain("need at least one machine"));
        }
        if processing_times.contains(&0) {
            return Err(Error::domain("processing times must be positive"));
        }
        Ok(SchedulingInstance {
            machines,
            processing_times,
        })
    }

    pub fn machines(&self) -> usize {
        self.machines
    }

    pub fn processing_times(&self) -> &[u64] {
        &self.processing_times
    }

    pub fn total(&self) -> u64 {
        self.processing_times.iter().sum()
    }
}

/// Nonzero integer weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetSumZeroInstance {
    weights: Vec<i64>,
}

impl SubsetSumZeroInstance {
    pub fn new(weights: Vec<i64>) -> Result<SubsetSumZeroInstance> {
        if weights.contains(&0) {
            return Err(Error::domain("weights must be nonzero"));
        }
        Ok(SubsetSumZeroInstance { weights })
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }
}

/// Agents with additive integer weights over indivisible objects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AllocationInstance {
    weights: Vec<Vec<i64>>,
    objects: usize,
}

impl AllocationInstance {
    /// `weights[i][x]` is agent `i + 1`'s weight for object `x + 1`.
    pub fn new(weights: Vec<Vec<i64>>) -> Result<AllocationInstance> {
        if weights.is_empty() {
            return Err(Error::domain("need at least one agent"));
        }
        let objects = weights[0].len();
        if weights.iter().any(|r| r.len() != objects) {
            return Err(Error::domain("every agent needs one weight per object"));
        }
        Ok(AllocationInstance { weights, objects })
    }

    pub fn agents(&self) -> usize {
        self.weights.len()
    }

    pub fn objects(&self) -> usize {
        self.objects
    }

    /// Weight of agent `i` for object `x`, both 1-based.
    pub fn weight(&self, i: usize, x: usize) -> i64 {
        self.weights[i - 1][x - 1]
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    ExactCover(E3CInstance),
    Scheduling(SchedulingInstance),
    SubsetSumZero(SubsetSumZeroInstance),
    Allocation(AllocationInstance),
}

/// A generated game with player roles and, for the Pareto verification
/// gadget, the partition under test.
#[derive(Clone, Debug)]
pub struct GadgetInstance {
    pub game: Game,
    pub distinguished_partition: Option<Partition>,
    pub role_labels: Vec<String>,
    pub source: Source,
    pub notes: Vec<String>,
}

impl GadgetInstance {
    /// 1-based player carrying role `role`.
    pub fn player(&self, role: &str) -> Option<usize> {
        self.role_labels.iter().position(|r| r == role).map(|i| i + 1)
    }

    /// The coalition made of the given roles. Panics on an unknown role.
    pub fn coalition(&self, roles: &[&str]) -> Coalition {
        Coalition::new(
            roles
                .iter()
                .map(|r| self.player(r).unwrap_or_else(|| panic!("unknown role {}", r)))
                .collect(),
        )
        .expect("distinct roles")
    }
}

/// Symmetric value table with a default for unset pairs.
struct SymmetricTable {
    values: BTreeMap<(usize, usize), Rational>,
    default: Rational,
}

impl SymmetricTable {
    fn new(default: Rational) -> Self {
        SymmetricTable {
            values: BTreeMap::new(),
            default,
        }
    }

    fn set(&mut self, a: usize, b: usize, v: Rational) {
        self.values.insert((a.min(b), a.max(b)), v);
    }

    fn game(&self, n: usize) -> Result<Game> {
        Game::from_fn(n, |i, j| {
            self.values
                .get(&(i.min(j), i.max(j)))
                .cloned()
                .unwrap_or_else(|| self.default.clone())
        })
    }
}

fn finish(
    game: Game,
    labels: Vec<String>,
    distinguished: Option<Partition>,
    source: Source,
    notes: Vec<String>,
) -> Result<GadgetInstance> {
    Ok(GadgetInstance {
        game: game.with_labels(labels.clone())?,
        distinguished_partition: distinguished,
        role_labels: labels,
        source,
        notes,
    })
}

/// Pareto verification gadget.
///
/// Players are `w^s, x^s, y^s` for each triple (in order) followed by `z^r`
/// for each ground element. The distinguished partition pairs `x^s` with
/// `y^s`, leaves every `w^s` alone and groups all `z^r`. It is Pareto
/// optimal exactly when no exact cover exists.
pub fn gadget_po_verify(e: &E3CInstance) -> Result<GadgetInstance> {
    let r = e.r_size();
    if r < 2 {
        return Err(Error::domain("the Pareto verification gadget needs |R| >= 2"));
    }
    let s = e.triples().len();
    let w = |t: usize| 3 * t + 1;
    let x = |t: usize| 3 * t + 2;
    let y = |t: usize| 3 * t + 3;
    let z = |el: usize| 3 * s + el;
    let mut table = SymmetricTable::new(int(-7));
    for (t, triple) in e.triples().iter().enumerate() {
        table.set(w(t), x(t), int(3));
        table.set(x(t), y(t), int(3));
        for u in 0..s {
            table.set(y(t), w(u), int(-1));
        }
        for el in 1..=r {
            table.set(y(t), z(el), int(if triple.contains(&el) { 1 } else { -7 }));
        }
    }
    for a in 1..=r {
        for b in a + 1..=r {
            table.set(z(a), z(b), frac(1, r as i64 - 1));
        }
    }
    let n = 3 * s + r;
    let mut labels = Vec::with_capacity(n);
    let mut blocks = Vec::new();
    for t in 1..=s {
        labels.extend([format!("w^{}", t), format!("x^{}", t), format!("y^{}", t)]);
        blocks.push(Coalition::new(vec![x(t - 1), y(t - 1)])?);
        blocks.push(Coalition::singleton(w(t - 1)));
    }
    labels.extend((1..=r).map(|el| format!("z^{}", el)));
    blocks.push(Coalition::new((1..=r).map(z).collect())?);
    let distinguished = Partition::new(n, blocks)?;
    finish(
        table.game(n)?,
        labels,
        Some(distinguished),
        Source::ExactCover(e.clone()),
        e.warnings(),
    )
}

/// Egalitarian welfare gadget: machines `1..m` then one player per job.
/// Machines value job `j` at its processing time, jobs value machines at the
/// total processing time, machines repel each other at `-(P + 1)`.
pub fn gadget_egalitarian(s: &SchedulingInstance) -> Result<GadgetInstance> {
    let m = s.machines();
    let p = s.processing_times();
    let total = s.total() as i64;
    let n = m + p.len();
    let game = Game::from_fn(n, |i, j| match (i <= m, j <= m) {
        (true, true) => int(-(total + 1)),
        (true, false) => int(p[j - m - 1] as i64),
        (false, true) => int(total),
        (false, false) => int(0),
    })?;
    let labels = (1..=m)
        .map(|i| format!("machine {}", i))
        .chain((1..=p.len()).map(|j| format!("job {}", j)))
        .collect();
    finish(game, labels, None, Source::Scheduling(s.clone()), Vec::new())
}

/// Pareto-optimal-and-individually-rational gadget on `x, y_1, y_2, z_1..z_k`.
pub fn gadget_po_ir(a: &SubsetSumZeroInstance) -> Result<GadgetInstance> {
    let k = a.weights().len();
    let n = 3 + k;
    let game = Game::from_fn(n, |i, j| {
        let zi = |p: usize| (p > 3).then(|| a.weights()[p - 4]);
        match (i, j) {
            (1, 2) | (1, 3) => int(k as i64 + 1),
            (1, _) if j > 3 => int(1),
            (2, _) => zi(j).map_or_else(|| int(0), int),
            (3, _) => zi(j).map_or_else(|| int(0), |v| int(-v)),
            (_, 2) => zi(i).map_or_else(|| int(0), |v| int(-v)),
            (_, 3) => zi(i).map_or_else(|| int(0), int),
            _ => int(0),
        }
    })?;
    let labels = ["x", "y_1", "y_2"]
        .iter()
        .map(|s| s.to_string())
        .chain((1..=k).map(|i| format!("z_{}", i)))
        .collect();
    finish(game, labels, None, Source::SubsetSumZero(a.clone()), Vec::new())
}

/// Envy-free and Nash stable gadget.
///
/// Players are `y^s` for each triple followed by `z_1^r, z_2^r, z_3^r` for
/// each ground element; every `(z_1^r, z_2^r, z_3^r)` carries a copy of the
/// three-player game without an envy-free Nash stable partition.
pub fn gadget_ef_ns(e: &E3CInstance) -> Result<GadgetInstance> {
    let s = e.triples().len();
    let r = e.r_size();
    let n = s + 3 * r;
    if n == 0 {
        return Err(Error::domain("the instance yields an empty game"));
    }
    let y = |t: usize| t + 1;
    let z = |copy: usize, el: usize| s + 3 * (el - 1) + copy;
    let mut table = SymmetricTable::new(int(-7));
    for el in 1..=r {
        table.set(z(1, el), z(2, el), int(3));
        table.set(z(1, el), z(3, el), int(3));
        table.set(z(2, el), z(3, el), int(-7));
    }
    for (t, triple) in e.triples().iter().enumerate() {
        for (a, &i) in triple.iter().enumerate() {
            for &j in &triple[a + 1..] {
                table.set(z(1, i), z(1, j), frac(1, 10));
            }
            table.set(y(t), z(1, i), frac(28, 10));
        }
    }
    let labels = (1..=s)
        .map(|t| format!("y^{}", t))
        .chain((1..=r).flat_map(|el| (1..=3).map(move |c| format!("z_{}^{}", c, el))))
        .collect();
    finish(
        table.game(n)?,
        labels,
        None,
        Source::ExactCover(e.clone()),
        e.warnings(),
    )
}

/// Envy-free and Pareto optimal gadget: agents `1..|I|` then objects.
/// Agents value objects by their weight; objects value nobody; agents repel
/// each other at `-W * |I + X|` where `W` is the total absolute weight.
pub fn gadget_ef_po(a: &AllocationInstance) -> Result<GadgetInstance> {
    let agents = a.agents();
    let n = agents + a.objects();
    let big: i64 = a.weights().iter().flatten().map(|w| w.abs()).sum();
    let repel = -big * n as i64;
    let game = Game::from_fn(n, |i, j| match (i <= agents, j <= agents) {
        (true, true) => int(repel),
        (true, false) => int(a.weight(i, j - agents)),
        _ => int(0),
    })?;
    let labels = (1..=agents)
        .map(|i| format!("agent {}", i))
        .chain((1..=a.objects()).map(|x| format!("x_{}", x)))
        .collect();
    finish(game, labels, None, Source::Allocation(a.clone()), Vec::new())
}

/// Reads an allocation off a partition of the envy-free/Pareto gadget:
/// entry `x - 1` is the agent sharing object `x`'s block, if any. Returns
/// `None` when two agents share a block.
pub fn partition_to_allocation(a: &AllocationInstance, p: &Partition) -> Option<Vec<Option<usize>>> {
    let agents = a.agents();
    for b in p.blocks() {
        if b.members().iter().filter(|&&m| m <= agents).count() > 1 {
            return None;
        }
    }
    Some(
        (1..=a.objects())
            .map(|x| {
                p.block_of(agents + x)
                    .members()
                    .iter()
                    .copied()
                    .find(|&m| m <= agents)
            })
            .collect(),
    )
}

/// The gadget partition whose blocks are `{i} + a(i)`, with every
/// unallocated object alone.
pub fn allocation_to_partition(a: &AllocationInstance, alloc: &[Option<usize>]) -> Result<Partition> {
    let agents = a.agents();
    if alloc.len() != a.objects() {
        return Err(Error::domain("allocation length differs from object count"));
    }
    let mut members: Vec<Vec<usize>> = (1..=agents).map(|i| vec![i]).collect();
    let mut blocks = Vec::new();
    for (x, owner) in alloc.iter().enumerate() {
        match owner {
            Some(i) if (1..=agents).contains(i) => members[i - 1].push(agents + x + 1),
            Some(i) => return Err(Error::domain(format!("agent {} out of range", i))),
            None => blocks.push(Coalition::singleton(agents + x + 1)),
        }
    }
    for m in members {
        blocks.push(Coalition::new(m)?);
    }
    Partition::new(agents + a.objects(), blocks)
}

/// Brute-force exact cover: the first sub-collection (in subset order) of
/// pairwise disjoint triples covering the ground set.
pub fn solve_e3c(e: &E3CInstance) -> Result<Option<Vec<[usize; 3]>>> {
    let s = e.triples().len();
    if s > MAX_SUBSET_ITEMS {
        return Err(Error::Resource(format!(
            "{} triples exceeds the brute-force limit of {}",
            s, MAX_SUBSET_ITEMS
        )));
    }
    let need = e.r_size() / 3;
    for mask in 0u32..(1 << s) {
        if mask.count_ones() as usize != need {
            continue;
        }
        let mut covered = vec![false; e.r_size() + 1];
        let mut ok = true;
        for (t, triple) in e.triples().iter().enumerate() {
            if mask & (1 << t) != 0 {
                for &el in triple {
                    ok &= !std::mem::replace(&mut covered[el], true);
                }
            }
        }
        if ok {
            return Ok(Some(
                (0..s)
                    .filter(|t| mask & (1 << t) != 0)
                    .map(|t| e.triples()[t])
                    .collect(),
            ));
        }
    }
    Ok(None)
}

/// Calls `visit` with every assignment of `items` to `bins` (0-based), in
/// lexicographic order with the first item most significant.
fn for_each_assignment(items: usize, bins: usize, mut visit: impl FnMut(&[usize])) -> Result<()> {
    let count = (bins as u64).checked_pow(items as u32).filter(|&c| c <= MAX_ASSIGNMENTS);
    if count.is_none() {
        return Err(Error::Resource(format!(
            "{}^{} assignments exceeds the brute-force limit of {}",
            bins, items, MAX_ASSIGNMENTS
        )));
    }
    let mut assign = vec![0usize; items];
    loop {
        visit(&assign);
        let mut k = items;
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            assign[k] += 1;
            if assign[k] < bins {
                break;
            }
            assign[k] = 0;
        }
    }
}

/// Assignment of jobs to machines maximizing the least machine load.
/// Returns the machine (1-based) of each job and the least load.
pub fn solve_scheduling(s: &SchedulingInstance) -> Result<(Vec<usize>, u64)> {
    let m = s.machines();
    let p = s.processing_times();
    let mut best: Option<(u64, Vec<usize>)> = None;
    for_each_assignment(p.len(), m, |assign| {
        let mut load = vec![0u64; m];
        for (j, &mach) in assign.iter().enumerate() {
            load[mach] += p[j];
        }
        let least = load.into_iter().min().unwrap_or(0);
        if best.as_ref().map_or(true, |(b, _)| least > *b) {
            best = Some((least, assign.to_vec()));
        }
    })?;
    let (least, assign) = best.expect("at least one assignment");
    Ok((assign.into_iter().map(|m| m + 1).collect(), least))
}

/// Every nonempty zero-sum subset of maximum cardinality, as sorted 1-based
/// index sets, in increasing bitmask order.
pub fn max_zero_subsets(a: &SubsetSumZeroInstance) -> Result<Vec<Vec<usize>>> {
    let k = a.weights().len();
    if k > MAX_SUBSET_ITEMS {
        return Err(Error::Resource(format!(
            "{} weights exceeds the brute-force limit of {}",
            k, MAX_SUBSET_ITEMS
        )));
    }
    let mut best = 0;
    let mut found: Vec<u32> = Vec::new();
    for mask in 1u32..(1 << k) {
        let sum: i64 = (0..k).filter(|i| mask & (1 << i) != 0).map(|i| a.weights()[i]).sum();
        if sum != 0 {
            continue;
        }
        let size = mask.count_ones();
        if size > best {
            best = size;
            found.clear();
        }
        if size == best {
            found.push(mask);
        }
    }
    Ok(found
        .into_iter()
        .map(|mask| (0..k).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect())
        .collect())
}

/// A maximum-cardinality nonempty zero-sum subset (1-based indices), if any.
pub fn solve_max_zero_subset(a: &SubsetSumZeroInstance) -> Result<Option<Vec<usize>>> {
    Ok(max_zero_subsets(a)?.into_iter().next())
}

/// First complete allocation (object `x` goes to agent `alloc[x - 1]`) that
/// is envy-free and Pareto optimal among complete allocations.
pub fn solve_eef(a: &AllocationInstance) -> Result<Option<Vec<usize>>> {
    let agents = a.agents();
    let mut all: Vec<(Vec<usize>, Vec<i64>)> = Vec::new();
    for_each_assignment(a.objects(), agents, |assign| {
        let mut utils = vec![0i64; agents];
        for (x, &i) in assign.iter().enumerate() {
            utils[i] += a.weights()[i][x];
        }
        all.push((assign.to_vec(), utils));
    })?;
    let envy_free = |assign: &[usize], utils: &[i64]| {
        (0..agents).all(|i| {
            (0..agents).all(|k| {
                let theirs: i64 = assign
                    .iter()
                    .enumerate()
                    .filter(|&(_, &o)| o == k)
                    .map(|(x, _)| a.weights()[i][x])
                    .sum();
                theirs <= utils[i]
            })
        })
    };
    let dominated = |utils: &[i64]| {
        all.iter().any(|(_, other)| {
            other.iter().zip(utils).all(|(o, u)| o >= u) && other.iter().zip(utils).any(|(o, u)| o > u)
        })
    };
    Ok(all
        .iter()
        .find(|(assign, utils)| envy_free(assign, utils) && !dominated(utils))
        .map(|(assign, _)| assign.iter().map(|i| i + 1).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e3c(r: usize, triples: &[[usize; 3]]) -> E3CInstance {
        E3CInstance::new(r, triples.to_vec()).unwrap()
    }

    #[test]
    fn e3c_validation() {
        assert!(E3CInstance::new(4, vec![]).is_err());
        assert!(E3CInstance::new(3, vec![[1, 1, 2]]).is_err());
        assert!(E3CInstance::new(3, vec![[1, 2, 4]]).is_err());
        assert!(E3CInstance::new(3, vec![[1, 2, 3], [3, 2, 1]]).is_err());
        let e = e3c(3, &[]);
        assert_eq!(e.warnings().len(), 1);
        let crowded = e3c(6, &[[1, 2, 3], [1, 4, 5], [1, 5, 6], [1, 2, 6]]);
        assert!(crowded.warnings()[0].contains("element 1 occurs in 4"));
    }

    #[test]
    fn po_verify_gadget_values() {
        let g = gadget_po_verify(&e3c(3, &[[1, 2, 3]])).unwrap();
        assert_eq!(g.game.n(), 6);
        assert!(g.game.is_symmetric());
        assert!(g.game.is_strict());
        let utils = g.game.partition_utilities(g.distinguished_partition.as_ref().unwrap()).unwrap();
        let role = |r: &str| utils[g.player(r).unwrap() - 1].clone();
        assert_eq!(role("x^1"), int(3));
        assert_eq!(role("y^1"), int(3));
        assert_eq!(role("w^1"), int(0));
        assert_eq!(role("z^2"), int(1));
        assert_eq!(g.game.value(g.player("z^1").unwrap(), g.player("z^3").unwrap()), &frac(1, 2));
        assert!(gadget_po_verify(&e3c(0, &[])).is_err());
    }

    #[test]
    fn po_verify_gadget_without_triples() {
        let g = gadget_po_verify(&e3c(3, &[])).unwrap();
        assert_eq!(g.distinguished_partition.unwrap(), Partition::grand(3));
        assert_eq!(g.notes.len(), 1);
    }

    #[test]
    fn egalitarian_gadget_values() {
        let s = SchedulingInstance::new(2, vec![3, 3, 2]).unwrap();
        let g = gadget_egalitarian(&s).unwrap();
        assert_eq!(g.game.n(), 5);
        assert!(!g.game.is_symmetric());
        assert_eq!(g.game.value(1, 3), &int(3));
        assert_eq!(g.game.value(3, 1), &int(8));
        assert_eq!(g.game.value(1, 2), &int(-9));
        assert_eq!(g.game.value(4, 5), &int(0));
        assert!(SchedulingInstance::new(0, vec![1]).is_err());
        assert!(SchedulingInstance::new(1, vec![0]).is_err());
    }

    #[test]
    fn po_ir_gadget_values() {
        let a = SubsetSumZeroInstance::new(vec![1, -1]).unwrap();
        let g = gadget_po_ir(&a).unwrap();
        let v = |x: &str, y: &str| g.game.value(g.player(x).unwrap(), g.player(y).unwrap()).clone();
        assert_eq!(v("x", "y_1"), int(3));
        assert_eq!(v("x", "z_2"), int(1));
        assert_eq!(v("y_1", "z_2"), int(-1));
        assert_eq!(v("z_2", "y_1"), int(1));
        assert_eq!(v("y_2", "z_2"), int(1));
        assert_eq!(v("z_2", "y_2"), int(-1));
        assert_eq!(v("y_1", "x"), int(0));
        assert!(!g.game.is_strict());
        assert!(!g.game.is_symmetric());
        assert!(SubsetSumZeroInstance::new(vec![1, 0]).is_err());
    }

    #[test]
    fn ef_ns_gadget_values() {
        let g = gadget_ef_ns(&e3c(3, &[[1, 2, 3]])).unwrap();
        assert_eq!(g.game.n(), 10);
        assert!(g.game.is_symmetric());
        let v = |x: &str, y: &str| g.game.value(g.player(x).unwrap(), g.player(y).unwrap()).clone();
        assert_eq!(v("z_1^1", "z_2^1"), int(3));
        assert_eq!(v("z_1^1", "z_3^1"), int(3));
        assert_eq!(v("z_2^1", "z_3^1"), int(-7));
        assert_eq!(v("z_1^1", "z_1^3"), frac(1, 10));
        assert_eq!(v("y^1", "z_1^2"), frac(28, 10));
        assert_eq!(v("y^1", "z_2^2"), int(-7));
        assert_eq!(v("z_2^1", "z_2^2"), int(-7));
        // each element's triple restricts to the three-player fixture
        for el in 1..=3 {
            let ids: Vec<usize> = (1..=3).map(|c| g.player(&format!("z_{}^{}", c, el)).unwrap()).collect();
            let sub = Game::from_fn(3, |i, j| g.game.value(ids[i - 1], ids[j - 1]).clone()).unwrap();
            assert_eq!(sub, Game::three_player_fixture());
        }
    }

    #[test]
    fn ef_po_gadget_values() {
        let a = AllocationInstance::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
        let g = gadget_ef_po(&a).unwrap();
        assert_eq!(g.game.n(), 4);
        assert_eq!(g.game.value(1, 2), &int(-8));
        assert_eq!(g.game.value(1, 3), &int(1));
        assert_eq!(g.game.value(3, 1), &int(0));
        assert_eq!(g.game.value(3, 4), &int(0));
        let p = allocation_to_partition(&a, &[Some(1), Some(2)]).unwrap();
        assert_eq!(p.to_string(), "{1,3}|{2,4}");
        assert_eq!(partition_to_allocation(&a, &p), Some(vec![Some(1), Some(2)]));
        assert_eq!(partition_to_allocation(&a, &Partition::grand(4)), None);
        assert!(AllocationInstance::new(vec![vec![1], vec![1, 2]]).is_err());
    }

    #[test]
    fn exact_cover_solver() {
        assert_eq!(solve_e3c(&e3c(3, &[[1, 2, 3]])).unwrap(), Some(vec![[1, 2, 3]]));
        assert_eq!(solve_e3c(&e3c(3, &[])).unwrap(), None);
        assert_eq!(
            solve_e3c(&e3c(6, &[[1, 2, 3], [1, 4, 5], [4, 5, 6]])).unwrap(),
            Some(vec![[1, 2, 3], [4, 5, 6]])
        );
        assert_eq!(solve_e3c(&e3c(6, &[[1, 2, 3], [3, 4, 5]])).unwrap(), None);
    }

    #[test]
    fn exact_cover_solver_limit() {
        let mut triples = Vec::new();
        'outer: for a in 1..=9 {
            for b in a + 1..=9 {
                for c in b + 1..=9 {
                    triples.push([a, b, c]);
                    if triples.len() == 21 {
                        break 'outer;
                    }
                }
            }
        }
        assert!(matches!(solve_e3c(&e3c(9, &triples)), Err(Error::Resource(_))));
    }

    #[test]
    fn scheduling_solver() {
        let (assign, least) = solve_scheduling(&SchedulingInstance::new(2, vec![3, 3, 2]).unwrap()).unwrap();
        assert_eq!(least, 3);
        assert_eq!(assign.len(), 3);
        assert_eq!(solve_scheduling(&SchedulingInstance::new(1, vec![5]).unwrap()).unwrap().1, 5);
        assert_eq!(solve_scheduling(&SchedulingInstance::new(3, vec![1, 1]).unwrap()).unwrap().1, 0);
        assert!(solve_scheduling(&SchedulingInstance::new(5, vec![1; 12]).unwrap()).is_err());
    }

    #[test]
    fn zero_subset_solver() {
        let s = |w: &[i64]| solve_max_zero_subset(&SubsetSumZeroInstance::new(w.to_vec()).unwrap()).unwrap();
        assert_eq!(s(&[1, -1]), Some(vec![1, 2]));
        assert_eq!(s(&[2, -1, -1]), Some(vec![1, 2, 3]));
        assert_eq!(s(&[1, 1]), None);
        let all = max_zero_subsets(&SubsetSumZeroInstance::new(vec![1, -1, 2, -2]).unwrap()).unwrap();
        assert_eq!(all, vec![vec![1, 2, 3, 4]]);
        let all = max_zero_subsets(&SubsetSumZeroInstance::new(vec![1, -1, 1]).unwrap()).unwrap();
        assert_eq!(all, vec![vec![1, 2], vec![2, 3]]);
    }

    #[test]
    fn eef_solver() {
        let s = |w: Vec<Vec<i64>>| solve_eef(&AllocationInstance::new(w).unwrap()).unwrap();
        assert_eq!(s(vec![vec![1]]), Some(vec![1]));
        assert_eq!(s(vec![vec![1], vec![1]]), None);
        assert_eq!(s(vec![vec![1, 0], vec![0, 1]]), Some(vec![1, 2]));
    }
}
