//! Round-robin allocation and EF1 + fPO for instances with two cost types.
//!
//! Type-1 agents share agent 0's costs; everyone else shares the other row.
//! Chores are split into a type-1 part and a type-2 part, each divided by
//! round robin in a fixed agent order. Chores move one at a time from the
//! type-1 part to the type-2 part, raising type-1 payments when needed.

use num_traits::One;
use serde::Serialize;

use crate::certify::{is_ce, is_pef1};
use crate::error::{Error, Result};
use crate::model::{AgentId, Allocation, ChoreId, ChoreSet, Instance, PaymentVector};
use crate::rational::{self, Rational};

/// Agents pick in cyclic order, each taking its cheapest remaining chore
/// (lowest chore index on ties). Chores outside `chores` stay unassigned.
pub fn round_robin(inst: &Instance, agents: &[AgentId], chores: &ChoreSet) -> Allocation {
    let mut alloc = Allocation::empty(inst.num_agents(), inst.num_chores());
    if agents.is_empty() {
        return alloc;
    }
    let mut pool: Vec<ChoreId> = chores.iter().copied().collect();
    let mut turn = 0;
    while !pool.is_empty() {
        let i = agents[turn % agents.len()];
        let (pos, _) = pool
            .iter()
            .enumerate()
            .min_by(|(_, &a), (_, &b)| inst.cost(i, a).cmp(inst.cost(i, b)).then(a.cmp(&b)))
            .expect("pool is nonempty");
        let j = pool.remove(pos);
        alloc.assign(j, i);
        turn += 1;
    }
    alloc
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoTypePartition {
    pub type_one: Vec<AgentId>,
    pub type_two: Vec<AgentId>,
    pub chores_one: ChoreSet,
    pub chores_two: ChoreSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum TwoTypeEvent {
    /// Chore moved from the type-1 part to the type-2 part.
    Transfer { chore: ChoreId },
    /// Type-1 payments multiplied by `factor`.
    Raise {
        #[serde(serialize_with = "rational::serialize")]
        factor: Rational,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TwoTypeTrace {
    pub events: Vec<TwoTypeEvent>,
    pub iterations: usize,
}

impl TwoTypeTrace {
    pub fn transfer_count(&self) -> usize {
        self.events
            .iter()
            .filter(|e| matches!(e, TwoTypeEvent::Transfer { .. }))
            .count()
    }
}

#[derive(Debug, Clone)]
pub struct TwoTypeOutcome {
    pub allocation: Allocation,
    pub payments: PaymentVector,
    pub partition: TwoTypePartition,
    pub trace: TwoTypeTrace,
}

/// Splits agents into agent 0's type and the rest; errors unless exactly two
/// distinct cost rows occur.
pub fn split_types(inst: &Instance) -> Result<(Vec<AgentId>, Vec<AgentId>)> {
    let first = inst.row(0);
    let (one, two): (Vec<AgentId>, Vec<AgentId>) = inst.agents().partition(|&i| inst.row(i) == first);
    if two.is_empty() {
        return Err(Error::input("instance has a single cost type; it is not two-type"));
    }
    let second = inst.row(two[0]);
    if two.iter().any(|&i| inst.row(i) != second) {
        return Err(Error::input("instance has more than two cost types"));
    }
    Ok((one, two))
}

fn min_ratio(inst: &Instance, pay: &PaymentVector, agent: AgentId, chores: &ChoreSet) -> Option<Rational> {
    chores.iter().map(|&j| inst.cost(agent, j) / pay.get(j)).min()
}

/// γ = (best type-2 ratio over the type-1 part) / (best over the type-2 part).
pub fn raise_factor_two_type(inst: &Instance, pay: &PaymentVector, partition: &TwoTypePartition) -> Result<Rational> {
    let rep = partition.type_two[0];
    let over_one = min_ratio(inst, pay, rep, &partition.chores_one)
        .ok_or_else(|| Error::input("raise needs type-1 chores"))?;
    let over_two = min_ratio(inst, pay, rep, &partition.chores_two)
        .ok_or_else(|| Error::input("raise needs type-2 chores"))?;
    let gamma = over_one / over_two;
    if gamma <= Rational::one() {
        return Err(Error::defect(format!(
            "raise factor {} is not above 1",
            rational::format_rational(&gamma)
        )));
    }
    Ok(gamma)
}

fn reallocate(inst: &Instance, partition: &TwoTypePartition) -> Allocation {
    let one = round_robin(inst, &partition.type_one, &partition.chores_one);
    let two = round_robin(inst, &partition.type_two, &partition.chores_two);
    let mut alloc = one;
    for &j in &partition.chores_two {
        alloc.assign(j, two.owner(j).expect("round robin assigns every chore"));
    }
    alloc
}

#[derive(Debug, Clone)]
pub struct TwoTypeOptions {
    pub check_every_step: bool,
}

impl Default for TwoTypeOptions {
    fn default() -> Self {
        Self {
            check_every_step: cfg!(debug_assertions),
        }
    }
}

pub fn solve_two_type(inst: &Instance) -> Result<TwoTypeOutcome> {
    solve_two_type_with(inst, &TwoTypeOptions::default())
}

pub fn solve_two_type_with(inst: &Instance, opts: &TwoTypeOptions) -> Result<TwoTypeOutcome> {
    let (type_one, type_two) = split_types(inst)?;
    inst.require_positive()?;
    let m = inst.num_chores();
    let mut partition = TwoTypePartition {
        type_one,
        type_two,
        chores_one: inst.chores().collect(),
        chores_two: ChoreSet::new(),
    };
    let mut pay = PaymentVector::from_row(inst, 0)?;
    let mut alloc = reallocate(inst, &partition);
    let mut trace = TwoTypeTrace::default();
    let cap = 2 * m + 2;
    let rep = partition.type_two[0];
    while !is_pef1(inst, &alloc, &pay).holds {
        trace.iterations += 1;
        if trace.iterations > cap {
            return Err(Error::defect(format!("two-type solver exceeded {cap} iterations")));
        }
        let alpha = crate::model::mpb_ratio(inst, &pay, rep).expect("m > 0 inside the loop");
        let movable = partition
            .chores_one
            .iter()
            .copied()
            .find(|&j| inst.cost(rep, j) / pay.get(j) == alpha);
        match movable {
            Some(j) => {
                partition.chores_one.remove(&j);
                partition.chores_two.insert(j);
                alloc = reallocate(inst, &partition);
                trace.events.push(TwoTypeEvent::Transfer { chore: j });
            }
            None => {
                let factor = raise_factor_two_type(inst, &pay, &partition)?;
                pay.scale(&partition.chores_one, &factor);
                trace.events.push(TwoTypeEvent::Raise { factor });
            }
        }
        if opts.check_every_step {
            let report = is_ce(inst, &alloc, &pay);
            if !report.holds {
                return Err(Error::defect(format!("equilibrium lost: {:?}", report.witness)));
            }
        }
    }
    Ok(TwoTypeOutcome {
        allocation: alloc,
        payments: pay,
        partition,
        trace,
    })
}

/// Single cost type: round robin in index order with payments equal to costs.
pub fn solve_identical(inst: &Instance) -> Result<(Allocation, PaymentVector)> {
    if crate::model::InstanceClass::distinct_rows(inst) != 1 {
        return Err(Error::input("agents do not share a cost function"));
    }
    inst.require_positive()?;
    let agents: Vec<AgentId> = inst.agents().collect();
    let alloc = round_robin(inst, &agents, &inst.chores().collect());
    Ok((alloc, PaymentVector::from_row(inst, 0)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::is_ef1;
    use crate::oracle::is_fpo_lp;
    use crate::rational::int;

    #[test]
    fn round_robin_example_b1() {
        let inst = Instance::from_integers(&[vec![1, 1, 1], vec![5, 1, 5], vec![1, 5, 5]]);
        let x = round_robin(&inst, &[0, 1, 2], &inst.chores().collect());
        assert_eq!(x.owner_vector(), Some(vec![0, 1, 2]));
        let costs: Vec<_> = inst.agents().map(|i| inst.bundle_disutility(i, x.bundle(i))).collect();
        assert_eq!(costs, vec![int(1), int(1), int(5)]);
    }

    #[test]
    fn round_robin_small_cases() {
        let single = Instance::from_integers(&[vec![3, 1, 2]]);
        let x = round_robin(&single, &[0], &single.chores().collect());
        assert_eq!(x.sizes(), vec![3]);
        let ident = Instance::from_integers(&[vec![4, 1, 3, 2], vec![4, 1, 3, 2]]);
        let x = round_robin(&ident, &[0, 1], &ident.chores().collect());
        assert_eq!(x.sizes(), vec![2, 2]);
        assert!(x.bundle(0).contains(&1));
        assert_eq!(x.owner_vector(), Some(vec![1, 0, 0, 1]));
    }

    #[test]
    fn two_agent_opposite_costs() {
        let inst = Instance::from_integers(&[vec![1, 2, 3, 4], vec![4, 3, 2, 1]]);
        let out = solve_two_type(&inst).unwrap();
        assert!(is_ef1(&inst, &out.allocation).unwrap().holds);
        assert!(is_fpo_lp(&inst, &out.allocation).unwrap());
        assert!(out.trace.transfer_count() <= inst.num_chores());
    }

    #[test]
    fn single_type_rejected() {
        let inst = Instance::from_integers(&[vec![1, 2], vec![1, 2]]);
        assert!(solve_two_type(&inst).is_err());
        let (x, p) = solve_identical(&inst).unwrap();
        assert!(is_ef1(&inst, &x).unwrap().holds);
        assert!(is_ce(&inst, &x, &p).holds);
        let three = Instance::from_integers(&[vec![1, 2], vec![2, 1], vec![3, 3]]);
        assert!(solve_two_type(&three).is_err());
    }

    #[test]
    fn raise_factor_formula() {
        // Type-2 best ratio over type-1 chores 4, over type-2 chores 1 → 4.
        let inst = Instance::from_integers(&[vec![1, 1], vec![4, 1]]);
        let pay = PaymentVector::new(vec![int(1), int(1)]).unwrap();
        let part = TwoTypePartition {
            type_one: vec![0],
            type_two: vec![1],
            chores_one: [0].into_iter().collect(),
            chores_two: [1].into_iter().collect(),
        };
        assert_eq!(raise_factor_two_type(&inst, &pay, &part).unwrap(), int(4));
        let inst = Instance::from_integers(&[vec![1, 1], vec![1, 1]]);
        assert!(raise_factor_two_type(&inst, &pay, &part).is_err());
    }
}
