//! Instances, allocations, payments and the MPB arithmetic shared by every solver.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, Rational};

pub type AgentId = usize;
pub type ChoreId = usize;
pub type ChoreSet = BTreeSet<ChoreId>;

/// A chore allocation problem: agents, chores and a nonnegative cost matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    agent_ids: Vec<String>,
    chore_ids: Vec<String>,
    disutility: Vec<Vec<Rational>>,
}

impl Instance {
    pub fn new(agent_ids: Vec<String>, chore_ids: Vec<String>, disutility: Vec<Vec<Rational>>) -> Result<Self> {
        if agent_ids.is_empty() {
            return Err(Error::input("instance needs at least one agent"));
        }
        if disutility.len() != agent_ids.len() {
            return Err(Error::input(format!(
                "disutility has {} rows but there are {} agents",
                disutility.len(),
                agent_ids.len()
            )));
        }
        for (i, row) in disutility.iter().enumerate() {
            if row.len() != chore_ids.len() {
                return Err(Error::input(format!(
                    "disutility row {i} has {} entries but there are {} chores",
                    row.len(),
                    chore_ids.len()
                )));
            }
            if let Some(j) = row.iter().position(|v| v.is_negative()) {
                return Err(Error::input(format!("negative disutility at agent {i}, chore {j}")));
            }
        }
        check_unique(&agent_ids, "agent")?;
        check_unique(&chore_ids, "chore")?;
        Ok(Self {
            agent_ids,
            chore_ids,
            disutility,
        })
    }

    /// Builds an instance with default ids `a1..an` and `j1..jm`.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        Self::new(default_ids('a', n), default_ids('j', m), rows)
    }

    /// Integer convenience constructor; panics on malformed input.
    pub fn from_integers(rows: &[Vec<i64>]) -> Self {
        let rows = rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect();
        Self::from_rows(rows).expect("valid integer instance")
    }

    pub fn with_ids(self, agent_ids: &[&str], chore_ids: &[&str]) -> Result<Self> {
        Self::new(
            agent_ids.iter().map(|s| s.to_string()).collect(),
            chore_ids.iter().map(|s| s.to_string()).collect(),
            self.disutility,
        )
    }

    pub fn num_agents(&self) -> usize {
        self.agent_ids.len()
    }

    pub fn num_chores(&self) -> usize {
        self.chore_ids.len()
    }

    pub fn agent_ids(&self) -> &[String] {
        &self.agent_ids
    }

    pub fn chore_ids(&self) -> &[String] {
        &self.chore_ids
    }

    pub fn agent_name(&self, i: AgentId) -> &str {
        &self.agent_ids[i]
    }

    pub fn chore_name(&self, j: ChoreId) -> &str {
        &self.chore_ids[j]
    }

    pub fn agent_index(&self, id: &str) -> Option<AgentId> {
        self.agent_ids.iter().position(|a| a == id)
    }

    pub fn chore_index(&self, id: &str) -> Option<ChoreId> {
        self.chore_ids.iter().position(|c| c == id)
    }

    pub fn agents(&self) -> std::ops::Range<AgentId> {
        0..self.num_agents()
    }

    pub fn chores(&self) -> std::ops::Range<ChoreId> {
        0..self.num_chores()
    }

    pub fn cost(&self, i: AgentId, j: ChoreId) -> &Rational {
        &self.disutility[i][j]
    }

    pub fn row(&self, i: AgentId) -> &[Rational] {
        &self.disutility[i]
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.disutility
    }

    pub fn all_positive(&self) -> bool {
        self.disutility.iter().flatten().all(Signed::is_positive)
    }

    pub(crate) fn require_positive(&self) -> Result<()> {
        if self.all_positive() {
            Ok(())
        } else {
            Err(Error::input("instance has zero disutilities; preprocess zero chores first"))
        }
    }

    /// d_i(S).
    pub fn bundle_disutility<'a>(&self, i: AgentId, chores: impl IntoIterator<Item = &'a ChoreId>) -> Rational {
        chores.into_iter().fold(Rational::zero(), |acc, &j| acc + &self.disutility[i][j])
    }

    /// d_i(S) minus the costliest chore of S; zero for the empty set.
    pub fn disutility_less_one<'a>(&self, i: AgentId, chores: impl IntoIterator<Item = &'a ChoreId>) -> Rational {
        less_one(chores.into_iter().map(|&j| &self.disutility[i][j]), true)
    }

    /// d_i(S) minus the cheapest chore of S; zero for the empty set.
    pub fn disutility_less_min<'a>(&self, i: AgentId, chores: impl IntoIterator<Item = &'a ChoreId>) -> Rational {
        less_one(chores.into_iter().map(|&j| &self.disutility[i][j]), false)
    }

    /// Checked version of [`Instance::bundle_disutility`] for external ids.
    pub fn checked_bundle_disutility(&self, i: AgentId, chores: &[ChoreId]) -> Result<Rational> {
        self.check_agent(i)?;
        for &j in chores {
            self.check_chore(j)?;
        }
        Ok(self.bundle_disutility(i, chores))
    }

    pub(crate) fn check_agent(&self, i: AgentId) -> Result<()> {
        if i < self.num_agents() {
            Ok(())
        } else {
            Err(Error::input(format!("unknown agent index {i}")))
        }
    }

    pub(crate) fn check_chore(&self, j: ChoreId) -> Result<()> {
        if j < self.num_chores() {
            Ok(())
        } else {
            Err(Error::input(format!("unknown chore index {j}")))
        }
    }

    /// Returns the instance restricted to the given chores (in the given order).
    pub fn restrict_chores(&self, keep: &[ChoreId]) -> Instance {
        Instance {
            agent_ids: self.agent_ids.clone(),
            chore_ids: keep.iter().map(|&j| self.chore_ids[j].clone()).collect(),
            disutility: self
                .disutility
                .iter()
                .map(|row| keep.iter().map(|&j| row[j].clone()).collect())
                .collect(),
        }
    }

    /// Same agents and chores with a replaced cost matrix.
    pub fn with_matrix(&self, disutility: Vec<Vec<Rational>>) -> Result<Instance> {
        Instance::new(self.agent_ids.clone(), self.chore_ids.clone(), disutility)
    }
}

fn default_ids(prefix: char, count: usize) -> Vec<String> {
    (1..=count).map(|k| format!("{prefix}{k}")).collect()
}

fn check_unique(ids: &[String], what: &str) -> Result<()> {
    let mut seen = BTreeSet::new();
    for id in ids {
        if !seen.insert(id.as_str()) {
            return Err(Error::input(format!("duplicate {what} id {id:?}")));
        }
    }
    Ok(())
}

fn less_one<'a>(values: impl Iterator<Item = &'a Rational>, drop_max: bool) -> Rational {
    let mut total = Rational::zero();
    let mut extreme: Option<&Rational> = None;
    for v in values {
        total += v;
        extreme = match extreme {
            None => Some(v),
            Some(e) if (drop_max && v > e) || (!drop_max && v < e) => Some(v),
            keep => keep,
        };
    }
    match extreme {
        Some(e) => total - e,
        None => total,
    }
}

/// An integral assignment of chores to agents; chores may be unassigned while
/// a solver is still building it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Allocation {
    bundles: Vec<ChoreSet>,
    owner: Vec<Option<AgentId>>,
}

impl Allocation {
    pub fn empty(num_agents: usize, num_chores: usize) -> Self {
        Self {
            bundles: vec![ChoreSet::new(); num_agents],
            owner: vec![None; num_chores],
        }
    }

    /// `owners[j]` is the agent receiving chore `j`.
    pub fn from_owners(num_agents: usize, owners: &[AgentId]) -> Result<Self> {
        let mut alloc = Self::empty(num_agents, owners.len());
        for (j, &i) in owners.iter().enumerate() {
            if i >= num_agents {
                return Err(Error::input(format!("chore {j} assigned to unknown agent {i}")));
            }
            alloc.assign(j, i);
        }
        Ok(alloc)
    }

    pub fn from_bundles(num_chores: usize, bundles: Vec<Vec<ChoreId>>) -> Result<Self> {
        let mut alloc = Self::empty(bundles.len(), num_chores);
        for (i, bundle) in bundles.into_iter().enumerate() {
            for j in bundle {
                if j >= num_chores {
                    return Err(Error::input(format!("unknown chore index {j}")));
                }
                if let Some(other) = alloc.owner[j] {
                    return Err(Error::input(format!("chore {j} given to agents {other} and {i}")));
                }
                alloc.assign(j, i);
            }
        }
        Ok(alloc)
    }

    pub fn num_agents(&self) -> usize {
        self.bundles.len()
    }

    pub fn num_chores(&self) -> usize {
        self.owner.len()
    }

    pub fn bundle(&self, i: AgentId) -> &ChoreSet {
        &self.bundles[i]
    }

    pub fn bundles(&self) -> &[ChoreSet] {
        &self.bundles
    }

    pub fn owner(&self, j: ChoreId) -> Option<AgentId> {
        self.owner[j]
    }

    pub fn owners(&self) -> &[Option<AgentId>] {
        &self.owner
    }

    pub fn size(&self, i: AgentId) -> usize {
        self.bundles[i].len()
    }

    pub fn is_complete(&self) -> bool {
        self.owner.iter().all(Option::is_some)
    }

    pub fn unassigned(&self) -> impl Iterator<Item = ChoreId> + '_ {
        self.owner.iter().enumerate().filter(|(_, o)| o.is_none()).map(|(j, _)| j)
    }

    /// Assigns chore `j` to `i`, taking it from its previous owner if any.
    pub fn assign(&mut self, j: ChoreId, i: AgentId) {
        if let Some(prev) = self.owner[j] {
            self.bundles[prev].remove(&j);
        }
        self.bundles[i].insert(j);
        self.owner[j] = Some(i);
    }

    pub fn unassign(&mut self, j: ChoreId) {
        if let Some(prev) = self.owner[j].take() {
            self.bundles[prev].remove(&j);
        }
    }

    /// Moves an allocated chore to `to`; a no-op if `to` already owns it.
    pub fn transfer(&mut self, j: ChoreId, to: AgentId) -> Result<AgentId> {
        let from = self
            .owner
            .get(j)
            .copied()
            .flatten()
            .ok_or_else(|| Error::input(format!("chore {j} is not allocated")))?;
        if to >= self.num_agents() {
            return Err(Error::input(format!("unknown agent index {to}")));
        }
        self.assign(j, to);
        Ok(from)
    }

    /// Exchanges the owners of two chores held by distinct agents.
    pub fn swap(&mut self, first: ChoreId, second: ChoreId) -> Result<()> {
        let a = self.owner.get(first).copied().flatten();
        let b = self.owner.get(second).copied().flatten();
        match (a, b) {
            (Some(a), Some(b)) if a != b => {
                self.assign(first, b);
                self.assign(second, a);
                Ok(())
            }
            (Some(_), Some(_)) => Err(Error::input(format!("chores {first} and {second} have the same owner"))),
            _ => Err(Error::input(format!("swap of unallocated chore ({first}, {second})"))),
        }
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.bundles.iter().map(ChoreSet::len).collect()
    }

    pub fn owner_vector(&self) -> Option<Vec<AgentId>> {
        self.owner.iter().copied().collect()
    }

    pub(crate) fn require_complete(&self, inst: &Instance) -> Result<()> {
        if self.num_agents() != inst.num_agents() || self.num_chores() != inst.num_chores() {
            return Err(Error::input(format!(
                "allocation is {}x{} but instance is {}x{}",
                self.num_agents(),
                self.num_chores(),
                inst.num_agents(),
                inst.num_chores()
            )));
        }
        match self.unassigned().next() {
            Some(j) => Err(Error::input(format!("chore {} is not allocated", inst.chore_name(j)))),
            None => Ok(()),
        }
    }
}

/// Strictly positive payment per chore.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaymentVector(Vec<Rational>);

impl PaymentVector {
    pub fn new(payments: Vec<Rational>) -> Result<Self> {
        if let Some(j) = payments.iter().position(|p| !p.is_positive()) {
            return Err(Error::input(format!(
                "payment of chore {j} is {}, must be positive",
                format_rational(&payments[j])
            )));
        }
        Ok(Self(payments))
    }

    /// p_j = d_i(j) for every chore.
    pub fn from_row(inst: &Instance, i: AgentId) -> Result<Self> {
        Self::new(inst.row(i).to_vec())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, j: ChoreId) -> &Rational {
        &self.0[j]
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn set(&mut self, j: ChoreId, value: Rational) {
        assert!(value.is_positive(), "payments must stay positive");
        self.0[j] = value;
    }

    /// Multiplies the payment of every listed chore by `factor`.
    pub fn scale<'a>(&mut self, chores: impl IntoIterator<Item = &'a ChoreId>, factor: &Rational) {
        assert!(factor.is_positive(), "scaling factor must be positive");
        for &j in chores {
            self.0[j] = &self.0[j] * factor;
        }
    }

    /// p(S).
    pub fn earning<'a>(&self, chores: impl IntoIterator<Item = &'a ChoreId>) -> Rational {
        chores.into_iter().fold(Rational::zero(), |acc, &j| acc + &self.0[j])
    }

    /// p(S) minus the largest payment in S; zero for the empty set.
    pub fn earning_less_one<'a>(&self, chores: impl IntoIterator<Item = &'a ChoreId>) -> Rational {
        less_one(chores.into_iter().map(|&j| &self.0[j]), true)
    }
}

/// An allocation together with payments; whether it is an equilibrium is
/// checked by [`crate::certify::is_ce`], never assumed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarketState {
    pub allocation: Allocation,
    pub payments: PaymentVector,
}

impl MarketState {
    pub fn new(allocation: Allocation, payments: PaymentVector) -> Self {
        Self { allocation, payments }
    }

    pub fn earning_of(&self, i: AgentId) -> Rational {
        self.payments.earning(self.allocation.bundle(i))
    }

    pub fn earning_less_one_of(&self, i: AgentId) -> Rational {
        self.payments.earning_less_one(self.allocation.bundle(i))
    }
}

/// α_i = min_j d_i(j)/p_j, or `None` when there are no chores.
pub fn mpb_ratio(inst: &Instance, pay: &PaymentVector, i: AgentId) -> Option<Rational> {
    inst.chores().map(|j| inst.cost(i, j) / pay.get(j)).min()
}

/// MPB_i: chores attaining α_i exactly.
pub fn mpb_set(inst: &Instance, pay: &PaymentVector, i: AgentId) -> ChoreSet {
    match mpb_ratio(inst, pay, i) {
        Some(alpha) => inst
            .chores()
            .filter(|&j| inst.cost(i, j) / pay.get(j) == alpha)
            .collect(),
        None => ChoreSet::new(),
    }
}

pub fn is_mpb(inst: &Instance, pay: &PaymentVector, i: AgentId, j: ChoreId) -> bool {
    mpb_ratio(inst, pay, i).is_some_and(|alpha| inst.cost(i, j) / pay.get(j) == alpha)
}

/// Value pair shared by a bivalued instance, or per-agent pairs of a 2-ary one.
/// `low == high` when an agent (or the whole instance) is single-valued.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuePair {
    pub low: Rational,
    pub high: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceClass {
    pub general: bool,
    pub three_agent: bool,
    /// Exactly two distinct disutility rows.
    pub two_type: bool,
    /// Every row identical.
    pub identical: bool,
    pub bivalued: Option<ValuePair>,
    pub two_ary: Option<Vec<ValuePair>>,
    pub has_zero: bool,
}

impl InstanceClass {
    pub fn distinct_rows(inst: &Instance) -> usize {
        let mut rows: Vec<&[Rational]> = inst.agents().map(|i| inst.row(i)).collect();
        rows.sort();
        rows.dedup();
        rows.len()
    }
}

fn value_pair<'a>(values: impl Iterator<Item = &'a Rational>) -> Option<ValuePair> {
    let distinct: BTreeSet<&Rational> = values.collect();
    match distinct.len() {
        0 => None,
        1 | 2 => Some(ValuePair {
            low: (*distinct.first().unwrap()).clone(),
            high: (*distinct.last().unwrap()).clone(),
        }),
        _ => None,
    }
}

pub fn classify(inst: &Instance) -> InstanceClass {
    let distinct = InstanceClass::distinct_rows(inst);
    let has_zero = inst.matrix().iter().flatten().any(Zero::is_zero);
    let bivalued = if inst.num_chores() == 0 {
        None
    } else {
        value_pair(inst.matrix().iter().flatten())
    };
    let two_ary = if inst.num_chores() == 0 {
        None
    } else {
        inst.agents()
            .map(|i| value_pair(inst.row(i).iter()))
            .collect::<Option<Vec<_>>>()
    };
    InstanceClass {
        general: true,
        three_agent: inst.num_agents() == 3,
        two_type: distinct == 2,
        identical: distinct == 1,
        bivalued,
        two_ary,
        has_zero,
    }
}

/// Result of pulling zero-cost chores out of an instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroReduction {
    pub reduced: Instance,
    /// Original index of each chore in `reduced`.
    pub kept: Vec<ChoreId>,
    /// (original chore, agent) pairs fixed up front.
    pub preassigned: Vec<(ChoreId, AgentId)>,
    original_chores: usize,
}

impl ZeroReduction {
    pub fn is_identity(&self) -> bool {
        self.preassigned.is_empty()
    }

    /// Partial allocation over the original instance holding only the fixed chores.
    pub fn partial(&self) -> Allocation {
        let mut alloc = Allocation::empty(self.reduced.num_agents(), self.original_chores);
        for &(j, i) in &self.preassigned {
            alloc.assign(j, i);
        }
        alloc
    }

    /// Maps an allocation of the reduced instance back to the original one.
    pub fn lift(&self, alloc: &Allocation) -> Allocation {
        let mut out = self.partial();
        for (new_j, &old_j) in self.kept.iter().enumerate() {
            if let Some(i) = alloc.owner(new_j) {
                out.assign(old_j, i);
            }
        }
        out
    }

    /// Payments only carry over when nothing was removed; a zero-cost chore
    /// cannot be priced consistently with positive payments.
    pub fn lift_payments(&self, pay: &PaymentVector) -> Option<PaymentVector> {
        self.is_identity().then(|| pay.clone())
    }
}

/// Gives every chore with a zero cost to the lowest-index agent with cost zero.
pub fn preprocess_zero_chores(inst: &Instance) -> ZeroReduction {
    let mut kept = Vec::new();
    let mut preassigned = Vec::new();
    for j in inst.chores() {
        match inst.agents().find(|&i| inst.cost(i, j).is_zero()) {
            Some(i) => preassigned.push((j, i)),
            None => kept.push(j),
        }
    }
    ZeroReduction {
        reduced: inst.restrict_chores(&kept),
        kept,
        preassigned,
        original_chores: inst.num_chores(),
    }
}

/// Ratio `high / low` of a value pair.
pub fn pair_ratio(pair: &ValuePair) -> Rational {
    if pair.low.is_zero() {
        Rational::one()
    } else {
        &pair.high / &pair.low
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn set(items: &[ChoreId]) -> ChoreSet {
        items.iter().copied().collect()
    }

    #[test]
    fn bundle_disutility_examples() {
        let inst = Instance::from_integers(&[vec![1, 1, 3, 3], vec![1, 1, 4, 4]]);
        assert_eq!(inst.bundle_disutility(0, &set(&[0, 2])), int(4));
        assert_eq!(inst.bundle_disutility(0, &set(&[])), int(0));
        let frac = Instance::from_rows(vec![vec![ratio(1, 2), ratio(1, 3)]]).unwrap();
        assert_eq!(frac.bundle_disutility(0, &set(&[0, 1])), ratio(5, 6));
        assert!(inst.checked_bundle_disutility(0, &[7]).is_err());
        assert!(inst.checked_bundle_disutility(5, &[0]).is_err());
    }

    #[test]
    fn disutility_less_one_examples() {
        let inst = Instance::from_integers(&[vec![1, 5], vec![1, 1]]);
        assert_eq!(inst.disutility_less_one(0, &set(&[0, 1])), int(1));
        assert_eq!(inst.disutility_less_one(0, &set(&[1])), int(0));
        assert_eq!(inst.disutility_less_one(0, &set(&[])), int(0));
        let thm = Instance::from_integers(&[vec![1, 1, 3, 3], vec![1, 1, 4, 4]]);
        assert_eq!(thm.disutility_less_one(0, &set(&[0, 2])), int(1));
    }

    #[test]
    fn earning_examples() {
        let pay = PaymentVector::new(vec![int(2), int(3), int(5)]).unwrap();
        assert_eq!(pay.earning(&set(&[0, 1, 2])), int(10));
        assert_eq!(pay.earning(&set(&[2])), int(5));
        assert_eq!(pay.earning_less_one(&set(&[0, 1, 2])), int(5));
        assert_eq!(pay.earning_less_one(&set(&[1])), int(0));
        assert_eq!(pay.earning_less_one(&set(&[])), int(0));
        let unit = PaymentVector::new(vec![int(1); 3]).unwrap();
        assert_eq!(unit.earning(&set(&[0, 1, 2])), int(3));
    }

    #[test]
    fn payments_must_be_positive() {
        assert!(PaymentVector::new(vec![int(1), int(0)]).is_err());
        assert!(PaymentVector::new(vec![int(-1)]).is_err());
    }

    #[test]
    fn mpb_examples() {
        let inst = Instance::from_integers(&[vec![1, 2, 4]]);
        let pay = PaymentVector::new(vec![int(1), int(1), int(2)]).unwrap();
        assert_eq!(mpb_ratio(&inst, &pay, 0), Some(int(1)));
        assert_eq!(mpb_set(&inst, &pay, 0), set(&[0]));
        let prop = PaymentVector::new(vec![int(1), int(2), int(4)]).unwrap();
        assert_eq!(mpb_ratio(&inst, &prop, 0), Some(int(1)));
        assert_eq!(mpb_set(&inst, &prop, 0), set(&[0, 1, 2]));
        let k = int(5);
        let raised = Instance::from_integers(&[vec![1, 5]]);
        let pay = PaymentVector::new(vec![k.clone(), k.clone()]).unwrap();
        assert_eq!(mpb_ratio(&raised, &pay, 0), Some(ratio(1, 5)));
        let uniform = Instance::from_integers(&[vec![3, 3, 3]]);
        let pay = PaymentVector::new(vec![int(7); 3]).unwrap();
        assert_eq!(mpb_set(&uniform, &pay, 0), set(&[0, 1, 2]));
    }

    #[test]
    fn classify_examples() {
        let thm = Instance::from_integers(&[vec![1, 1, 3, 3], vec![1, 1, 4, 4]]);
        let c = classify(&thm);
        assert!(c.two_type && c.two_ary.is_some() && c.bivalued.is_none());
        let same = Instance::from_integers(&[vec![2, 2], vec![2, 2]]);
        let c = classify(&same);
        assert!(c.identical);
        assert_eq!(c.bivalued, Some(ValuePair { low: int(2), high: int(2) }));
        let bi = Instance::from_integers(&[vec![1, 5, 5], vec![5, 1, 1]]);
        let c = classify(&bi);
        assert_eq!(c.bivalued, Some(ValuePair { low: int(1), high: int(5) }));
        assert!(c.two_ary.is_some());
    }

    #[test]
    fn zero_preprocessing() {
        let plain = Instance::from_integers(&[vec![1, 2], vec![3, 4]]);
        let red = preprocess_zero_chores(&plain);
        assert!(red.is_identity());
        assert_eq!(red.reduced, plain);

        let inst = Instance::from_integers(&[vec![0, 2], vec![1, 1]]);
        let red = preprocess_zero_chores(&inst);
        assert_eq!(red.preassigned, vec![(0, 0)]);
        assert_eq!(red.reduced.num_chores(), 1);
        assert!(red.reduced.all_positive());

        let tie = Instance::from_integers(&[vec![3, 0], vec![1, 0]]);
        let red = preprocess_zero_chores(&tie);
        assert_eq!(red.preassigned, vec![(1, 0)]);
        let lifted = red.lift(&Allocation::from_owners(2, &[1]).unwrap());
        assert_eq!(lifted.owner_vector(), Some(vec![1, 0]));
    }

    #[test]
    fn transfer_and_swap() {
        let mut alloc = Allocation::from_owners(2, &[0, 0, 1]).unwrap();
        let before = alloc.clone();
        alloc.transfer(0, 0).unwrap();
        assert_eq!(alloc, before);
        alloc.swap(0, 2).unwrap();
        assert_eq!(alloc.owner_vector(), Some(vec![1, 0, 0]));
        alloc.swap(0, 2).unwrap();
        assert_eq!(alloc, before);
        assert!(alloc.swap(0, 1).is_err());
        let mut partial = Allocation::empty(2, 2);
        assert!(partial.transfer(0, 1).is_err());
    }

    #[test]
    fn rejects_bad_instances() {
        assert!(Instance::from_rows(vec![vec![int(-1)]]).is_err());
        assert!(Instance::new(vec!["a".into()], vec!["x".into()], vec![vec![]]).is_err());
        assert!(Instance::new(vec!["a".into(), "a".into()], vec![], vec![vec![], vec![]]).is_err());
    }
}
