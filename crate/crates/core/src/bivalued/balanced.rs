//! Balanced EF1 + fPO allocation for bivalued chores, any number of agents.
//!
//! Expensive chores go one by one to the agent holding the fewest chores.
//! Then chores move from the fullest agent to the emptiest one, raising the
//! giver's group payments by k whenever no MPB chore is available to move.

use std::cmp::Reverse;

use num_traits::One;
use serde::Serialize;

use super::groups::{make_init_groups, AgentGroups};
use super::BivaluedNormal;
use crate::certify::{balanced_among, is_ce, is_cost_minimizing, BalanceMode};
use crate::error::{Error, Result};
use crate::model::{is_mpb, mpb_ratio, AgentId, Allocation, ChoreId, PaymentVector};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum BalancedEvent {
    KAssign { chore: ChoreId, to: AgentId },
    Transfer { chore: ChoreId, from: AgentId, to: AgentId },
    Raise { group: usize },
}

#[derive(Debug, Clone)]
pub struct BalancedOutcome {
    pub allocation: Allocation,
    pub payments: PaymentVector,
    pub groups: AgentGroups,
    /// State right after group construction, before any expensive chore.
    pub initial_allocation: Allocation,
    pub initial_payments: PaymentVector,
    pub events: Vec<BalancedEvent>,
}

impl BalancedOutcome {
    pub fn transfer_count(&self) -> usize {
        self.events
            .iter()
            .filter(|e| matches!(e, BalancedEvent::Transfer { .. }))
            .count()
    }

    pub fn raise_count(&self) -> usize {
        self.events
            .iter()
            .filter(|e| matches!(e, BalancedEvent::Raise { .. }))
            .count()
    }
}

#[derive(Debug, Clone)]
pub struct BalancedOptions {
    pub check_every_step: bool,
}

impl Default for BalancedOptions {
    fn default() -> Self {
        Self {
            check_every_step: cfg!(debug_assertions),
        }
    }
}

/// Fullest agent; ties go to the highest group (smallest index), then the
/// lowest agent index.
pub(crate) fn select_giver(alloc: &Allocation, groups: &AgentGroups) -> AgentId {
    (0..alloc.num_agents())
        .max_by_key(|&i| (alloc.size(i), Reverse(groups.group_of(i)), Reverse(i)))
        .expect("at least one agent")
}

/// Emptiest agent; ties go to the lowest group (largest index), then
/// `secondary`, then the lowest agent index.
pub(crate) fn select_receiver(
    alloc: &Allocation,
    groups: &AgentGroups,
    secondary: impl Fn(AgentId) -> usize,
) -> AgentId {
    (0..alloc.num_agents())
        .min_by_key(|&i| (alloc.size(i), Reverse(groups.group_of(i)), secondary(i), i))
        .expect("at least one agent")
}

fn raise_group(alloc: &Allocation, pay: &mut PaymentVector, groups: &mut AgentGroups, r: usize, k: &Rational) {
    let chores: Vec<ChoreId> = groups
        .group(r)
        .iter()
        .flat_map(|&i| alloc.bundle(i).iter().copied())
        .collect();
    pay.scale(&chores, k);
    groups.mark_raised(r);
}

pub fn balanced_ef1_fpo(normal: &BivaluedNormal) -> Result<BalancedOutcome> {
    balanced_ef1_fpo_with(normal, &BalancedOptions::default())
}

pub fn balanced_ef1_fpo_with(normal: &BivaluedNormal, opts: &BalancedOptions) -> Result<BalancedOutcome> {
    let inst = normal.instance();
    let n = inst.num_agents();
    let m = inst.num_chores();
    let (mut alloc, mut pay, mut groups) = make_init_groups(normal)?;
    let initial_allocation = alloc.clone();
    let initial_payments = pay.clone();
    let mut events = Vec::new();

    for j in normal.k_chores() {
        let to = select_receiver(&alloc, &groups, |i| normal.big_k_count(&alloc, i));
        alloc.assign(j, to);
        pay.set(j, normal.k().clone());
        events.push(BalancedEvent::KAssign { chore: j, to });
    }

    let (mut transfers, mut raises) = (0usize, 0usize);
    loop {
        let giver = select_giver(&alloc, &groups);
        let receiver = select_receiver(&alloc, &groups, |i| normal.k_count(&alloc, i));
        if alloc.size(receiver) + 1 >= alloc.size(giver) {
            break;
        }
        let movable = alloc
            .bundle(giver)
            .iter()
            .copied()
            .find(|&j| is_mpb(inst, &pay, receiver, j));
        match movable {
            Some(j) => {
                alloc.transfer(j, receiver)?;
                events.push(BalancedEvent::Transfer {
                    chore: j,
                    from: giver,
                    to: receiver,
                });
                transfers += 1;
                if transfers > m * n {
                    return Err(Error::defect(format!("balancing exceeded {} transfers", m * n)));
                }
            }
            None => {
                let r = groups.group_of(giver);
                raise_group(&alloc, &mut pay, &mut groups, r, normal.k());
                events.push(BalancedEvent::Raise { group: r });
                raises += 1;
                if raises > n {
                    return Err(Error::defect(format!("balancing exceeded {n} payment raises")));
                }
            }
        }
        if opts.check_every_step {
            let report = is_ce(inst, &alloc, &pay);
            if !report.holds {
                return Err(Error::defect(format!("equilibrium lost while balancing: {:?}", report.witness)));
            }
        }
    }
    Ok(BalancedOutcome {
        allocation: alloc,
        payments: pay,
        groups,
        initial_allocation,
        initial_payments,
        events,
    })
}

/// Replays the trace from the post-grouping state and reports every broken
/// structural property. An empty list means the run behaved as proven.
pub fn audit_balanced_trace(normal: &BivaluedNormal, outcome: &BalancedOutcome) -> Vec<String> {
    let inst = normal.instance();
    let k = normal.k();
    let mut groups = match AgentGroups::new(inst.num_agents(), outcome.groups.groups().to_vec()) {
        Ok(g) => g,
        Err(e) => return vec![e.to_string()],
    };
    let num_groups = groups.count();
    let mut alloc = outcome.initial_allocation.clone();
    let mut pay = outcome.initial_payments.clone();
    let mut gained = vec![false; num_groups];
    let mut lost = vec![false; num_groups];
    let mut last_raised: Option<usize> = None;
    let mut problems = Vec::new();
    let mut transfers = 0;

    for (step, event) in outcome.events.iter().enumerate() {
        let mut note = |msg: String| problems.push(format!("step {step}: {msg}"));
        match *event {
            BalancedEvent::KAssign { chore, to } => {
                let r = groups.group_of(to);
                if lost[r] {
                    note(format!("group {r} gains after losing"));
                }
                gained[r] = true;
                alloc.assign(chore, to);
                pay.set(chore, k.clone());
            }
            BalancedEvent::Transfer { chore, from, to } => {
                transfers += 1;
                let (rf, rt) = (groups.group_of(from), groups.group_of(to));
                if rf >= rt {
                    note(format!("transfer from group {rf} to group {rt} is not downward"));
                }
                if gained[rf] {
                    note(format!("group {rf} loses after gaining"));
                }
                if lost[rt] {
                    note(format!("group {rt} gains after losing"));
                }
                if !groups.is_raised(rf) {
                    note(format!("group {rf} loses a chore without being raised"));
                }
                lost[rf] = true;
                gained[rt] = true;
                if alloc.owner(chore) != Some(from) {
                    note(format!("chore {chore} is not held by agent {from}"));
                }
                alloc.assign(chore, to);
            }
            BalancedEvent::Raise { group } => {
                if groups.is_raised(group) {
                    note(format!("group {group} raised twice"));
                }
                if last_raised.is_some_and(|prev| group <= prev) {
                    note(format!("group {group} raised out of order"));
                }
                last_raised = Some(group);
                raise_group(&alloc, &mut pay, &mut groups, group, k);
            }
        }
        for msg in state_violations(normal, &alloc, &pay, &groups) {
            problems.push(format!("step {step}: {msg}"));
        }
    }
    if alloc != outcome.allocation {
        problems.push("replayed allocation differs from the reported one".into());
    }
    if transfers == 0 && !is_cost_minimizing(inst, &alloc) {
        problems.push("no transfers but the allocation is not cost-minimizing".into());
    }
    problems
}

fn state_violations(
    normal: &BivaluedNormal,
    alloc: &Allocation,
    pay: &PaymentVector,
    groups: &AgentGroups,
) -> Vec<String> {
    let inst = normal.instance();
    let k = normal.k();
    let mut out = Vec::new();
    let agents: Vec<AgentId> = inst.agents().collect();

    for &i in &agents {
        for &h in &agents {
            if groups.group_of(i) < groups.group_of(h) && alloc.size(h) > alloc.size(i) + 1 {
                out.push(format!("agent {h} holds more than one chore over higher agent {i}"));
            }
        }
    }
    for (r, grp) in groups.groups().iter().enumerate() {
        if !balanced_among(inst, alloc, grp, BalanceMode::Fully).unwrap_or(false) {
            out.push(format!("group {r} is not fully balanced"));
        }
    }
    for j in inst.chores() {
        if let Some(i) = alloc.owner(j) {
            if !is_mpb(inst, pay, i, j) {
                out.push(format!("chore {j} is not MPB for its owner {i}"));
            }
        }
    }
    let unraised: Vec<AgentId> = agents.iter().copied().filter(|&i| !groups.agent_raised(i)).collect();
    if inst.num_chores() > 0 {
        let low = Rational::one() / k;
        for &i in &agents {
            let want = if groups.agent_raised(i) { low.clone() } else { Rational::one() };
            if mpb_ratio(inst, pay, i).as_ref() != Some(&want) {
                out.push(format!(
                    "agent {i} has MPB ratio other than {}",
                    rational::format_rational(&want)
                ));
            }
        }
    }
    for &i in agents.iter().filter(|&&i| groups.agent_raised(i)) {
        for &j in alloc.bundle(i) {
            if !normal.is_one(i, j) {
                out.push(format!("raised agent {i} holds k-chore {j}"));
            }
            for &u in &unraised {
                if normal.is_one(u, j) {
                    out.push(format!("chore {j} of raised agent {i} costs 1 for unraised agent {u}"));
                }
                if !is_mpb(inst, pay, u, j) {
                    out.push(format!("chore {j} of raised agent {i} is not MPB for unraised agent {u}"));
                }
            }
        }
    }
    for &i in &unraised {
        for &j in alloc.bundle(i).iter().filter(|&&j| !normal.is_one(i, j)) {
            if let Some(u) = unraised.iter().find(|&&u| normal.is_one(u, j)) {
                out.push(format!("k-chore {j} of agent {i} costs 1 for unraised agent {u}"));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bivalued::rescale_bivalued;
    use crate::certify::{is_balanced, is_ef1};
    use crate::model::Instance;
    use crate::oracle::is_fpo_lp;

    fn run(rows: &[Vec<i64>]) -> (BivaluedNormal, BalancedOutcome) {
        let nb = rescale_bivalued(&Instance::from_integers(rows)).unwrap();
        let out = balanced_ef1_fpo(&nb).unwrap();
        (nb, out)
    }

    fn check(nb: &BivaluedNormal, out: &BalancedOutcome) {
        let inst = nb.instance();
        assert!(is_balanced(inst, &out.allocation, BalanceMode::Total).unwrap());
        assert!(is_ef1(inst, &out.allocation).unwrap().holds);
        assert!(is_ce(inst, &out.allocation, &out.payments).holds);
        assert!(is_fpo_lp(inst, &out.allocation).unwrap());
        assert_eq!(audit_balanced_trace(nb, out), Vec::<String>::new());
    }

    #[test]
    fn no_chores() {
        let (nb, out) = run(&[vec![], vec![]]);
        assert_eq!(out.allocation.sizes(), vec![0, 0]);
        assert!(out.events.is_empty());
        check(&nb, &out);
    }

    #[test]
    fn raise_then_transfer() {
        // Agent 0 is cheap on everything, agent 1 only on nothing.
        let (nb, out) = run(&[vec![1, 1, 1, 1], vec![3, 3, 3, 3]]);
        // Row of all 3s becomes all 1s: identical agents, no raise needed.
        assert_eq!(out.raise_count(), 0);
        check(&nb, &out);

        let (nb, out) = run(&[vec![1, 1, 1, 1], vec![3, 3, 3, 1]]);
        check(&nb, &out);
        assert_eq!(out.allocation.sizes(), vec![2, 2]);
        assert_eq!(out.raise_count(), 1);
        assert_eq!(out.transfer_count(), 1);
    }

    #[test]
    fn k_chores_fill_lower_groups() {
        let (nb, out) = run(&[vec![1, 1, 5, 5, 5, 5], vec![5, 5, 1, 5, 5, 5], vec![5, 5, 5, 1, 5, 5]]);
        check(&nb, &out);
        let kc = out
            .events
            .iter()
            .filter(|e| matches!(e, BalancedEvent::KAssign { .. }))
            .count();
        assert_eq!(kc, 2);
        assert_eq!(out.allocation.sizes(), vec![2, 2, 2]);
    }
}
