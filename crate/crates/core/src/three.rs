//! EF1 + fPO for exactly three agents by maintaining a competitive
//! equilibrium, moving chores away from the big earner and lowering payments
//! when no move keeps every chore at its owner's best pain-per-buck.

use num_traits::One;
use serde::Serialize;

use crate::certify::{is_ce, is_ef1, select_big_earner, select_least_earner};
use crate::error::{Error, Result};
use crate::model::{mpb_ratio, AgentId, Allocation, ChoreId, ChoreSet, Instance, PaymentVector};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum ThreeAgentEvent {
    Roles {
        big: AgentId,
        least: AgentId,
        middle: AgentId,
    },
    Transfer {
        chore: ChoreId,
        from: AgentId,
        to: AgentId,
    },
    PaymentDrop {
        agents: Vec<AgentId>,
        #[serde(serialize_with = "rational::serialize")]
        factor: Rational,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ThreeAgentTrace {
    pub events: Vec<ThreeAgentEvent>,
    /// Transfers plus payment drops.
    pub steps: usize,
}

impl ThreeAgentTrace {
    pub fn transfers(&self) -> impl Iterator<Item = &ThreeAgentEvent> {
        self.events
            .iter()
            .filter(|e| matches!(e, ThreeAgentEvent::Transfer { .. }))
    }
}

#[derive(Debug, Clone)]
pub struct ThreeAgentOptions {
    /// Re-check the equilibrium after every event.
    pub check_every_step: bool,
    /// Step cap is `cap_factor * m^2` (at least `cap_factor`).
    pub cap_factor: usize,
}

impl Default for ThreeAgentOptions {
    fn default() -> Self {
        Self {
            check_every_step: cfg!(debug_assertions),
            cap_factor: 20,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ThreeAgentOutcome {
    pub allocation: Allocation,
    pub payments: PaymentVector,
    pub trace: ThreeAgentTrace,
}

/// β = max over droppers i and targets j of α_i / (d_i(j)/p_j).
///
/// Scaling the droppers' payments by β brings the best target into some
/// dropper's MPB set.
pub fn drop_factor(
    inst: &Instance,
    pay: &PaymentVector,
    droppers: &[AgentId],
    targets: &ChoreSet,
) -> Result<Rational> {
    if targets.is_empty() || droppers.is_empty() {
        return Err(Error::input("payment drop needs droppers and target chores"));
    }
    let mut beta: Option<Rational> = None;
    for &i in droppers {
        let alpha = mpb_ratio(inst, pay, i).ok_or_else(|| Error::input("no chores to price"))?;
        for &j in targets {
            let candidate = &alpha * pay.get(j) / inst.cost(i, j);
            if beta.as_ref().is_none_or(|b| candidate > *b) {
                beta = Some(candidate);
            }
        }
    }
    let beta = beta.expect("nonempty droppers and targets");
    if beta > Rational::one() {
        return Err(Error::defect(format!(
            "payment drop factor {} exceeds 1",
            rational::format_rational(&beta)
        )));
    }
    Ok(beta)
}

pub fn solve_three_agents(inst: &Instance) -> Result<ThreeAgentOutcome> {
    solve_three_agents_with(inst, &ThreeAgentOptions::default())
}

struct Run<'a> {
    inst: &'a Instance,
    alloc: Allocation,
    pay: PaymentVector,
    trace: ThreeAgentTrace,
    cap: usize,
    check: bool,
}

impl Run<'_> {
    fn step(&mut self, event: ThreeAgentEvent) -> Result<()> {
        self.trace.steps += 1;
        self.trace.events.push(event);
        if self.trace.steps > self.cap {
            return Err(Error::defect(format!(
                "three-agent solver exceeded its step cap of {}",
                self.cap
            )));
        }
        if self.check {
            let report = is_ce(self.inst, &self.alloc, &self.pay);
            if !report.holds {
                return Err(Error::defect(format!(
                    "equilibrium lost after step {}: {:?}",
                    self.trace.steps, report.witness
                )));
            }
        }
        Ok(())
    }

    fn transfer(&mut self, chore: ChoreId, from: AgentId, to: AgentId) -> Result<()> {
        self.alloc.transfer(chore, to)?;
        self.step(ThreeAgentEvent::Transfer { chore, from, to })
    }

    fn drop_payments(&mut self, agents: Vec<AgentId>, targets: &ChoreSet) -> Result<()> {
        let factor = drop_factor(self.inst, &self.pay, &agents, targets)?;
        let chores: Vec<ChoreId> = agents
            .iter()
            .flat_map(|&i| self.alloc.bundle(i).iter().copied())
            .collect();
        self.pay.scale(&chores, &factor);
        self.step(ThreeAgentEvent::PaymentDrop { agents, factor })
    }

    fn lowest_mpb_in(&self, bundle_of: AgentId, mpb_for: AgentId) -> Option<ChoreId> {
        let alpha = mpb_ratio(self.inst, &self.pay, mpb_for)?;
        self.alloc
            .bundle(bundle_of)
            .iter()
            .copied()
            .find(|&j| self.inst.cost(mpb_for, j) / self.pay.get(j) == alpha)
    }
}

pub fn solve_three_agents_with(inst: &Instance, opts: &ThreeAgentOptions) -> Result<ThreeAgentOutcome> {
    if inst.num_agents() != 3 {
        return Err(Error::input(format!(
            "three-agent solver requires exactly 3 agents, got {}",
            inst.num_agents()
        )));
    }
    inst.require_positive()?;
    let m = inst.num_chores();
    let owners = vec![0; m];
    let mut run = Run {
        inst,
        alloc: Allocation::from_owners(3, &owners)?,
        pay: PaymentVector::from_row(inst, 0)?,
        trace: ThreeAgentTrace::default(),
        cap: opts.cap_factor * m.max(1) * m.max(1),
        check: opts.check_every_step,
    };
    let everyone = [0, 1, 2];
    while !is_ef1(inst, &run.alloc)?.holds {
        let big = select_big_earner(&run.alloc, &run.pay, &everyone)?;
        let least = select_least_earner(&run.alloc, &run.pay, &everyone)?;
        if big == least {
            return Err(Error::defect("big and least earner coincide in a non-EF1 equilibrium"));
        }
        let middle = 3 - big - least;
        run.trace.events.push(ThreeAgentEvent::Roles { big, least, middle });

        if let Some(j) = run.lowest_mpb_in(big, least) {
            run.transfer(j, big, least)?;
            continue;
        }
        let middle_to_least: Vec<ChoreId> = {
            let alpha = mpb_ratio(inst, &run.pay, least).expect("m > 0 inside the loop");
            run.alloc
                .bundle(middle)
                .iter()
                .copied()
                .filter(|&j| inst.cost(least, j) / run.pay.get(j) == alpha)
                .collect()
        };
        if !middle_to_least.is_empty() {
            let least_earning = run.pay.earning(run.alloc.bundle(least));
            let middle_earning = run.pay.earning(run.alloc.bundle(middle));
            let envied = middle_to_least
                .iter()
                .copied()
                .find(|&j| &middle_earning - run.pay.get(j) > least_earning);
            if let Some(j) = envied {
                run.transfer(j, middle, least)?;
            } else if let Some(j) = run.lowest_mpb_in(big, middle) {
                run.transfer(j, big, middle)?;
            } else {
                let targets = run.alloc.bundle(big).clone();
                run.drop_payments(vec![least, middle], &targets)?;
            }
        } else {
            let targets: ChoreSet = run
                .alloc
                .bundle(big)
                .union(run.alloc.bundle(middle))
                .copied()
                .collect();
            run.drop_payments(vec![least], &targets)?;
        }
    }
    Ok(ThreeAgentOutcome {
        allocation: run.alloc,
        payments: run.pay,
        trace: run.trace,
    })
}
