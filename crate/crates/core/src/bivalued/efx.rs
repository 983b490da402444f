//! EFX + fPO for three bivalued agents.
//!
//! The balanced allocation is repaired by a handful of transfers and swaps
//! chosen by the group structure: one group, two groups with a single top
//! agent, or two groups with a top pair. Three groups need no repair.

use std::collections::BTreeSet;

use serde::Serialize;

use super::balanced::{balanced_ef1_fpo, BalancedOutcome};
use super::groups::AgentGroups;
use super::BivaluedNormal;
use crate::certify::{efx_envies, is_balanced, is_ce, is_cost_minimizing, BalanceMode};
use crate::error::{Error, Result};
use crate::model::{is_mpb, AgentId, Allocation, ChoreId, InstanceClass, PaymentVector};
use crate::rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum EfxEvent {
    /// A repair routine started.
    Enter { routine: &'static str },
    Transfer { chore: ChoreId, from: AgentId, to: AgentId },
    Swap { first: ChoreId, second: ChoreId },
    /// Payments of the agent's bundle multiplied by k.
    Raise { agent: AgentId },
}

#[derive(Debug, Clone)]
pub struct EfxOptions {
    /// Check the receiver's MPB condition on every move and the full
    /// equilibrium after every raise.
    pub check_every_step: bool,
}

impl Default for EfxOptions {
    fn default() -> Self {
        Self {
            check_every_step: cfg!(debug_assertions),
        }
    }
}

/// Allocation, payments and groups being repaired.
#[derive(Debug, Clone)]
pub struct RepairState<'a> {
    normal: &'a BivaluedNormal,
    pub allocation: Allocation,
    pub payments: PaymentVector,
    pub groups: AgentGroups,
    pub events: Vec<EfxEvent>,
    check: bool,
}

impl<'a> RepairState<'a> {
    pub fn new(
        normal: &'a BivaluedNormal,
        allocation: Allocation,
        payments: PaymentVector,
        groups: AgentGroups,
        check_every_step: bool,
    ) -> Self {
        Self {
            normal,
            allocation,
            payments,
            groups,
            events: Vec::new(),
            check: check_every_step,
        }
    }

    pub fn normal(&self) -> &BivaluedNormal {
        self.normal
    }

    fn enter(&mut self, routine: &'static str) {
        self.events.push(EfxEvent::Enter { routine });
    }

    fn receiver_check(&self, j: ChoreId, to: AgentId) -> Result<()> {
        if self.check && !is_mpb(self.normal.instance(), &self.payments, to, j) {
            return Err(Error::defect(format!("chore {j} is not MPB for its new owner {to}")));
        }
        Ok(())
    }

    /// Gives `j` to `to`; a no-op when `to` already holds it.
    pub fn transfer(&mut self, j: ChoreId, to: AgentId) -> Result<()> {
        let from = self
            .allocation
            .owner(j)
            .ok_or_else(|| Error::input(format!("chore {j} is not allocated")))?;
        if from == to {
            return Ok(());
        }
        self.allocation.transfer(j, to)?;
        self.events.push(EfxEvent::Transfer { chore: j, from, to });
        self.receiver_check(j, to)
    }

    /// Exchanges two chores held by different agents.
    pub fn swap(&mut self, first: ChoreId, second: ChoreId) -> Result<()> {
        self.allocation.swap(first, second)?;
        self.events.push(EfxEvent::Swap { first, second });
        let owner = |j| self.allocation.owner(j).expect("swapped chores stay allocated");
        self.receiver_check(first, owner(first))?;
        self.receiver_check(second, owner(second))
    }

    fn raise_bundle(&mut self, i: AgentId) -> Result<()> {
        let chores: Vec<ChoreId> = self.allocation.bundle(i).iter().copied().collect();
        self.payments.scale(&chores, self.normal.k());
        let r = self.groups.group_of(i);
        self.groups.mark_raised(r);
        self.events.push(EfxEvent::Raise { agent: i });
        if self.check {
            let report = is_ce(self.normal.instance(), &self.allocation, &self.payments);
            if !report.holds {
                return Err(Error::defect(format!("raise broke the equilibrium: {:?}", report.witness)));
            }
        }
        Ok(())
    }

    pub fn envies(&self, i: AgentId, h: AgentId) -> bool {
        efx_envies(self.normal.instance(), &self.allocation, i, h)
    }

    pub fn is_efx(&self) -> bool {
        (0..3).all(|i| (0..3).all(|h| i == h || !self.envies(i, h)))
    }

    fn envy_pairs(&self) -> Vec<(AgentId, AgentId)> {
        let mut out = Vec::new();
        for i in 0..3 {
            for h in 0..3 {
                if i != h && self.envies(i, h) {
                    out.push((i, h));
                }
            }
        }
        out
    }

    fn mpb(&self, i: AgentId, j: ChoreId) -> bool {
        is_mpb(self.normal.instance(), &self.payments, i, j)
    }

    fn cheap_for(&self, i: AgentId, j: ChoreId) -> bool {
        self.normal.is_one(i, j)
    }

    fn size(&self, i: AgentId) -> usize {
        self.allocation.size(i)
    }

    fn ones(&self, i: AgentId) -> usize {
        self.normal.one_count(&self.allocation, i)
    }

    fn k_count(&self, i: AgentId) -> usize {
        self.normal.k_count(&self.allocation, i)
    }

    /// Lowest chore of `i` satisfying `pred`.
    fn pick(&self, i: AgentId, pred: impl Fn(ChoreId) -> bool) -> Option<ChoreId> {
        self.allocation.bundle(i).iter().copied().find(|&j| pred(j))
    }

    fn need(&self, i: AgentId, what: &str, pred: impl Fn(ChoreId) -> bool) -> Result<ChoreId> {
        self.pick(i, pred)
            .ok_or_else(|| Error::defect(format!("agent {i} has no {what}")))
    }

    fn lowest_k_chore(&self, i: AgentId) -> Result<ChoreId> {
        self.need(i, "expensive chore", |j| self.normal.is_k_chore(j))
    }

    /// Lowest expensive chore of `i`, preferring chores expensive for all.
    fn lowest_expensive(&self, i: AgentId) -> Result<ChoreId> {
        self.lowest_k_chore(i)
            .or_else(|_| self.need(i, "chore it finds expensive", |j| !self.cheap_for(i, j)))
    }

    fn bundle_within_mpb(&self, holder: AgentId, viewers: &[AgentId]) -> bool {
        self.allocation
            .bundle(holder)
            .iter()
            .all(|&j| viewers.iter().all(|&v| self.mpb(v, j)))
    }

    fn require_fully_balanced_cost_min(&self, routine: &str) -> Result<()> {
        let inst = self.normal.instance();
        if !is_cost_minimizing(inst, &self.allocation) {
            return Err(Error::defect(format!("{routine}: input is not cost-minimizing")));
        }
        if !is_balanced(inst, &self.allocation, BalanceMode::Fully)? {
            return Err(Error::defect(format!("{routine}: input is not fully balanced")));
        }
        Ok(())
    }

    fn require_single_envy(&self, routine: &str, residue: usize) -> Result<()> {
        self.require_fully_balanced_cost_min(routine)?;
        let count = self.normal.k_chores().len();
        if count % 3 != residue {
            return Err(Error::defect(format!(
                "{routine}: {count} expensive chores, expected {residue} mod 3"
            )));
        }
        let pairs = self.envy_pairs();
        if pairs.len() != 1 {
            return Err(Error::defect(format!(
                "{routine}: expected exactly one EFX-envy pair, found {pairs:?}"
            )));
        }
        Ok(())
    }

    /// Moves an expensive chore from `donor` to `receiver`, by transfer when
    /// the donor holds more chores, otherwise by swapping with a chore of the
    /// receiver that costs the donor 1.
    fn move_extra(&mut self, donor: AgentId, receiver: AgentId) -> Result<()> {
        let kd = self.lowest_k_chore(donor)?;
        if self.size(donor) > self.size(receiver) {
            self.transfer(kd, receiver)
        } else {
            let j = self.need(receiver, "chore cheap for the donor", |j| self.cheap_for(donor, j))?;
            self.swap(kd, j)
        }
    }

    fn loop_cap(&self) -> usize {
        self.normal.instance().num_chores() + 1
    }
}

fn other(x: AgentId, y: AgentId) -> AgentId {
    3 - x - y
}

fn argmin_by(key: impl Fn(AgentId) -> usize) -> AgentId {
    (0..3).min_by_key(|&i| (key(i), i)).expect("three agents")
}

fn argmax_by(key: impl Fn(AgentId) -> usize) -> AgentId {
    (0..3).max_by_key(|&i| (key(i), std::cmp::Reverse(i))).expect("three agents")
}

/// One group: pass the extra expensive chores along at most twice so that
/// at most one EFX-envy pair remains, then resolve it. The second move only
/// follows a first one.
pub fn reduce_efx_envy(st: &mut RepairState) -> Result<()> {
    st.enter("reduce_efx_envy");
    if st.is_efx() {
        return Ok(());
    }
    st.require_fully_balanced_cost_min("reduce_efx_envy")?;
    match st.normal.k_chores().len() % 3 {
        2 => {
            let first = argmin_by(|i| st.k_count(i));
            let (second, third) = fuller_first(st, first);
            if st.bundle_within_mpb(first, &[second, third]) {
                st.move_extra(second, first)?;
                if st.bundle_within_mpb(second, &[first, third]) {
                    st.move_extra(third, second)?;
                }
            }
            if !st.is_efx() {
                fix_two_extra_k(st)?;
            }
        }
        1 => {
            let first = argmax_by(|i| st.k_count(i));
            let (second, third) = fuller_first(st, first);
            if st.bundle_within_mpb(second, &[first]) && st.bundle_within_mpb(third, &[first]) {
                st.move_extra(first, second)?;
                if st.bundle_within_mpb(first, &[second]) && st.bundle_within_mpb(third, &[second]) {
                    st.move_extra(second, third)?;
                }
            }
            if !st.is_efx() {
                fix_one_extra_k(st)?;
            }
        }
        _ => {
            return Err(Error::defect(
                "balanced expensive chores split evenly yet the allocation is not EFX",
            ))
        }
    }
    Ok(())
}

/// The two agents other than `first`, the one holding more chores first
/// (lower index on ties).
fn fuller_first(st: &RepairState, first: AgentId) -> (AgentId, AgentId) {
    let (u, v) = pair_excluding(first);
    if st.size(v) > st.size(u) {
        (v, u)
    } else {
        (u, v)
    }
}

/// Two agents hold an extra expensive chore and exactly one of them
/// EFX-envies the third.
pub fn fix_two_extra_k(st: &mut RepairState) -> Result<()> {
    st.enter("fix_two_extra_k");
    st.require_single_envy("fix_two_extra_k", 2)?;
    let c = argmin_by(|i| st.k_count(i));
    let b = (0..3)
        .find(|&i| i != c && st.envies(i, c))
        .ok_or_else(|| Error::defect("fix_two_extra_k: nobody EFX-envies the short agent"))?;
    let a = other(b, c);
    let j_c = st.pick(c, |j| !st.mpb(a, j));
    let need_j_c = || j_c.ok_or_else(|| Error::defect("fix_two_extra_k: no chore of c outside MPB of a"));
    let cap = st.loop_cap();

    if st.pick(b, |j| !st.mpb(c, j)).is_some() {
        let k_b = st.lowest_k_chore(b)?;
        st.swap(k_b, need_j_c()?)?;
    } else if *st.normal.k() <= rational::int(2) {
        let j_b = st.need(b, "chore cheap for c", |j| st.cheap_for(c, j))?;
        st.transfer(j_b, c)?;
    } else if st.ones(a) < 2 {
        let mut rounds = 0;
        while st.envies(b, c) {
            rounds += 1;
            if rounds > cap {
                return Err(Error::defect("fix_two_extra_k: transfer loop did not end"));
            }
            let j_b = st.need(b, "chore cheap for c", |j| st.cheap_for(c, j))?;
            st.transfer(j_b, c)?;
        }
    } else if let Some(j_a) = st.pick(a, |j| st.mpb(b, j) && !st.mpb(c, j)) {
        st.transfer(j_a, b)?;
        let k_b = st.lowest_k_chore(b)?;
        st.swap(k_b, need_j_c()?)?;
    } else if let Some(j_a) = st.pick(a, |j| st.mpb(c, j) && !st.mpb(b, j)) {
        st.transfer(j_a, c)?;
        if st.envies(b, a) {
            let j_b = st.need(b, "chore cheap for c", |j| st.cheap_for(c, j))?;
            st.transfer(j_b, c)?;
        }
    } else if st
        .allocation
        .bundle(a)
        .iter()
        .filter(|&&j| !st.mpb(b, j) && !st.mpb(c, j))
        .count()
        >= 2
    {
        if st.size(b) <= st.size(a) {
            let k_a = st.lowest_k_chore(a)?;
            st.transfer(k_a, c)?;
        } else if let Some(j) = st
            .allocation
            .bundle(b)
            .union(st.allocation.bundle(c))
            .copied()
            .find(|&j| st.cheap_for(a, j))
        {
            let k_a = st.lowest_k_chore(a)?;
            st.transfer(j, a)?;
            st.transfer(k_a, c)?;
        } else {
            let k_b = st.lowest_k_chore(b)?;
            st.transfer(k_b, a)?;
        }
    } else {
        let mut rounds = 0;
        while st.envies(b, c) {
            rounds += 1;
            if rounds > cap {
                return Err(Error::defect("fix_two_extra_k: transfer loop did not end"));
            }
            let giver = if st.size(b) >= st.size(a) { b } else { a };
            let j = st.need(giver, "chore cheap for c", |j| st.cheap_for(c, j))?;
            st.transfer(j, c)?;
        }
    }
    Ok(())
}

/// One agent holds the extra expensive chore and EFX-envies exactly one other.
pub fn fix_one_extra_k(st: &mut RepairState) -> Result<()> {
    st.enter("fix_one_extra_k");
    st.require_single_envy("fix_one_extra_k", 1)?;
    let a = argmax_by(|i| st.k_count(i));
    let b = (0..3)
        .find(|&i| i != a && st.envies(a, i))
        .ok_or_else(|| Error::defect("fix_one_extra_k: the extra agent envies nobody"))?;
    let c = other(a, b);
    let j_c = st.pick(c, |j| !st.mpb(a, j));
    let k_a = st.lowest_k_chore(a)?;
    let j_b = st.pick(b, |j| st.cheap_for(a, j));
    let need_j_b = || j_b.ok_or_else(|| Error::defect("fix_one_extra_k: b has no chore cheap for a"));
    let cap = st.loop_cap();

    if st.pick(c, |j| !st.mpb(b, j)).is_some() {
        st.swap(k_a, need_j_b()?)?;
        let mut rounds = 0;
        while st.envies(b, a) {
            rounds += 1;
            if rounds > cap {
                return Err(Error::defect("fix_one_extra_k: transfer loop did not end"));
            }
            let j = st.need(b, "chore cheap for a", |j| st.cheap_for(a, j))?;
            st.transfer(j, a)?;
        }
    } else if let Some(j_b2) = st.pick(b, |j| st.cheap_for(c, j)) {
        let j_c = j_c.ok_or_else(|| Error::defect("fix_one_extra_k: no chore of c outside MPB of a"))?;
        st.swap(j_b2, j_c)?;
        if !st.is_efx() {
            let j = st.need(c, "cheap chore that a also finds cheap", |j| {
                !st.normal.is_k_chore(j) && st.cheap_for(a, j)
            })?;
            st.swap(k_a, j)?;
        }
        let mut rounds = 0;
        while st.envies(c, a) || st.envies(c, b) {
            rounds += 1;
            if rounds > cap {
                return Err(Error::defect("fix_one_extra_k: transfer loop did not end"));
            }
            let to = if st.size(a) < st.size(b) { a } else { b };
            let j = st.need(c, "cheap chore for the receiver", |j| {
                !st.normal.is_k_chore(j) && st.cheap_for(to, j)
            })?;
            st.transfer(j, to)?;
        }
    } else if st.ones(b) == 1 {
        st.swap(k_a, need_j_b()?)?;
    } else {
        let j_c2 = st.need(c, "chore cheap for b", |j| st.cheap_for(b, j))?;
        let j_b = need_j_b()?;
        st.transfer(k_a, c)?;
        st.transfer(j_c2, b)?;
        st.transfer(j_b, a)?;
    }
    Ok(())
}

/// Two groups with a single top agent.
pub fn fix_r2_singleton_top(st: &mut RepairState) -> Result<()> {
    st.enter("fix_r2_singleton_top");
    if st.is_efx() {
        return Ok(());
    }
    let a = single_top(st, 1)?;
    let (u, v) = pair_excluding(a);
    // Ties on 1-chores: b is the one EFX-envied by the other.
    let b = match st.ones(u).cmp(&st.ones(v)) {
        std::cmp::Ordering::Greater => u,
        std::cmp::Ordering::Less => v,
        std::cmp::Ordering::Equal if st.envies(v, u) => u,
        std::cmp::Ordering::Equal if st.envies(u, v) => v,
        std::cmp::Ordering::Equal => u,
    };
    let c = other(a, b);
    if st.ones(a) == st.ones(c) {
        reduce_efx_envy(st)?;
    } else if st.size(a) < st.size(c) {
        let k_c = st.lowest_expensive(c)?;
        st.transfer(k_c, a)?;
    } else if st.size(b) < st.size(a) || st.ones(b) >= 3 {
        let j_a = match st.pick(a, |j| st.mpb(b, j)) {
            Some(j) => j,
            None => {
                st.raise_bundle(a)?;
                st.need(a, "chore", |_| true)?
            }
        };
        st.transfer(j_a, b)?;
    } else if let Some(j_c) = st.pick(c, |j| st.cheap_for(b, j)) {
        st.transfer(j_c, b)?;
    } else {
        let k_c = st.lowest_expensive(c)?;
        let j_b = st.need(b, "chore cheap for c", |j| st.cheap_for(c, j))?;
        st.swap(k_c, j_b)?;
    }
    Ok(())
}

/// Two groups with a top pair.
pub fn fix_r2_pair_top(st: &mut RepairState) -> Result<()> {
    st.enter("fix_r2_pair_top");
    if st.is_efx() {
        return Ok(());
    }
    let c = single_top(st, 2)?;
    let (u, v) = pair_excluding(c);
    // Ties on 1-chores: b is the pair member that EFX-envies someone, then
    // the one with more k-chores.
    let envious = |i: AgentId| (0..3).any(|h| h != i && st.envies(i, h));
    let a = match st.ones(u).cmp(&st.ones(v)) {
        std::cmp::Ordering::Greater => u,
        std::cmp::Ordering::Less => v,
        std::cmp::Ordering::Equal => match (envious(u), envious(v)) {
            (true, false) => v,
            (false, true) => u,
            _ if st.k_count(u) > st.k_count(v) => v,
            _ => u,
        },
    };
    let b = other(a, c);
    if st.size(c) > st.size(a) {
        if st.k_count(c) > st.k_count(b) {
            let k_c = st.lowest_expensive(c)?;
            st.transfer(k_c, a)?;
        } else {
            reduce_efx_envy(st)?;
        }
    } else if st.ones(c) >= st.ones(b) {
        reduce_efx_envy(st)?;
    } else if let Some(j_c) = st.pick(c, |j| st.cheap_for(b, j)) {
        let k_b = st.lowest_expensive(b)?;
        st.swap(j_c, k_b)?;
    } else {
        let k_c = st.lowest_expensive(c)?;
        let j_a = st.need(a, "chore cheap for b", |j| st.cheap_for(b, j))?;
        st.transfer(k_c, a)?;
        st.transfer(j_a, b)?;
    }
    Ok(())
}

/// For `top_size` 1 returns the agent of N_1 and for 2 the agent of N_2,
/// checking that R = 2 with |N_1| = `top_size`.
fn single_top(st: &RepairState, top_size: usize) -> Result<AgentId> {
    let g = &st.groups;
    if g.count() != 2 || g.group(0).len() != top_size {
        return Err(Error::defect(format!(
            "expected two groups with {top_size} agent(s) on top, got {:?}",
            g.groups()
        )));
    }
    Ok(if top_size == 1 { g.group(0)[0] } else { g.group(1)[0] })
}

fn pair_excluding(x: AgentId) -> (AgentId, AgentId) {
    let rest: Vec<AgentId> = (0..3).filter(|&i| i != x).collect();
    (rest[0], rest[1])
}

#[derive(Debug, Clone)]
pub struct EfxOutcome {
    pub allocation: Allocation,
    pub payments: PaymentVector,
    /// None on the identical-agents path.
    pub balanced: Option<BalancedOutcome>,
    pub events: Vec<EfxEvent>,
    /// Which branch handled the instance.
    pub case: &'static str,
}

pub fn efx_fpo_three_bivalued(normal: &BivaluedNormal) -> Result<EfxOutcome> {
    efx_fpo_three_bivalued_with(normal, &EfxOptions::default())
}

pub fn efx_fpo_three_bivalued_with(normal: &BivaluedNormal, opts: &EfxOptions) -> Result<EfxOutcome> {
    let inst = normal.instance();
    if inst.num_agents() != 3 {
        return Err(Error::input(format!(
            "EFX solver requires exactly 3 agents, got {}",
            inst.num_agents()
        )));
    }
    if InstanceClass::distinct_rows(inst) == 1 {
        let (allocation, payments) = identical_greedy(normal)?;
        return Ok(EfxOutcome {
            allocation,
            payments,
            balanced: None,
            events: Vec::new(),
            case: "identical",
        });
    }
    let balanced = balanced_ef1_fpo(normal)?;
    let mut st = RepairState::new(
        normal,
        balanced.allocation.clone(),
        balanced.payments.clone(),
        balanced.groups.clone(),
        opts.check_every_step,
    );
    let case = match (st.groups.count(), st.groups.group(0).len()) {
        (1, _) => {
            reduce_efx_envy(&mut st)?;
            "one_group"
        }
        (2, 1) => {
            fix_r2_singleton_top(&mut st)?;
            "two_groups_single_top"
        }
        (2, _) => {
            fix_r2_pair_top(&mut st)?;
            "two_groups_pair_top"
        }
        _ => "three_groups",
    };
    if !st.is_efx() {
        return Err(Error::defect(format!("{case}: repair ended without EFX")));
    }
    let report = is_ce(inst, &st.allocation, &st.payments);
    if !report.holds {
        return Err(Error::defect(format!("{case}: repair broke the equilibrium: {:?}", report.witness)));
    }
    Ok(EfxOutcome {
        allocation: st.allocation,
        payments: st.payments,
        balanced: Some(balanced),
        events: st.events,
        case,
    })
}

/// Identical agents: chores by decreasing cost, each to the agent with the
/// lowest current cost. Payments equal the shared costs.
fn identical_greedy(normal: &BivaluedNormal) -> Result<(Allocation, PaymentVector)> {
    let inst = normal.instance();
    let mut order: Vec<ChoreId> = inst.chores().collect();
    order.sort_by(|&x, &y| inst.cost(0, y).cmp(inst.cost(0, x)).then(x.cmp(&y)));
    let mut alloc = Allocation::empty(inst.num_agents(), inst.num_chores());
    for j in order {
        let to = inst
            .agents()
            .min_by(|&x, &y| {
                inst.bundle_disutility(x, alloc.bundle(x))
                    .cmp(&inst.bundle_disutility(y, alloc.bundle(y)))
                    .then(x.cmp(&y))
            })
            .expect("three agents");
        alloc.assign(j, to);
    }
    Ok((alloc, PaymentVector::from_row(inst, 0)?))
}

/// Agents whose bundle holds only chores costing them 1.
pub fn only_one_chores(normal: &BivaluedNormal, alloc: &Allocation) -> BTreeSet<AgentId> {
    normal
        .instance()
        .agents()
        .filter(|&i| normal.k_count(alloc, i) == 0)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bivalued::rescale_bivalued;
    use crate::certify::is_efx;
    use crate::model::Instance;
    use crate::oracle::is_fpo_lp;

    fn solve(rows: &[Vec<i64>]) -> (BivaluedNormal, EfxOutcome) {
        let nb = rescale_bivalued(&Instance::from_integers(rows)).unwrap();
        let out = efx_fpo_three_bivalued(&nb).unwrap();
        assert!(is_efx(nb.instance(), &out.allocation).unwrap().holds);
        assert!(is_fpo_lp(nb.instance(), &out.allocation).unwrap());
        (nb, out)
    }

    #[test]
    fn identical_agents() {
        let (_, out) = solve(&[vec![1, 3, 3, 1], vec![1, 3, 3, 1], vec![1, 3, 3, 1]]);
        assert_eq!(out.case, "identical");
        assert_eq!(out.allocation.owner(1), Some(0));
        assert_eq!(out.allocation.owner(2), Some(1));
    }

    #[test]
    fn rejects_other_agent_counts() {
        let nb = rescale_bivalued(&Instance::from_integers(&[vec![1, 2], vec![2, 1]])).unwrap();
        assert!(matches!(efx_fpo_three_bivalued(&nb), Err(Error::Input(_))));
    }

    #[test]
    fn transfer_and_swap_primitives() {
        let nb = rescale_bivalued(&Instance::from_integers(&[vec![1, 1, 1], vec![1, 1, 1], vec![1, 1, 2]]))
            .unwrap();
        let alloc = Allocation::from_owners(3, &[0, 1, 2]).unwrap();
        let pay = PaymentVector::from_row(nb.instance(), 0).unwrap();
        let groups = AgentGroups::new(3, vec![vec![0, 1, 2]]).unwrap();
        let mut st = RepairState::new(&nb, alloc.clone(), pay, groups, true);
        st.transfer(0, 0).unwrap();
        assert!(st.events.is_empty());
        st.swap(0, 1).unwrap();
        st.swap(0, 1).unwrap();
        assert_eq!(st.allocation, alloc);
        // Chore 2 costs agent 2 twice its payment, so it is outside agent 2's MPB set.
        st.swap(1, 2).unwrap();
        assert!(matches!(st.swap(1, 2), Err(Error::Defect(_))));
    }

    #[test]
    fn one_group_instances() {
        solve(&[vec![1, 1, 1, 2, 2], vec![1, 2, 1, 2, 2], vec![1, 1, 2, 2, 2]]);
        solve(&[vec![1, 1, 1, 1, 5, 5], vec![1, 1, 5, 1, 5, 5], vec![1, 5, 1, 1, 5, 5]]);
    }
}
