//! Fairness and equilibrium predicates with concrete failure witnesses.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{mpb_ratio, AgentId, Allocation, ChoreId, Instance, PaymentVector};
use crate::rational::{self, Rational};

/// Evidence that a property fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `envier` values its own bundle (after the relevant removal) at `own`
    /// and the other bundle at `other`, with `own > other`.
    Envy {
        envier: AgentId,
        envied: AgentId,
        #[serde(serialize_with = "rational::serialize")]
        own: Rational,
        #[serde(serialize_with = "rational::serialize")]
        other: Rational,
    },
    Unallocated {
        chore: ChoreId,
    },
    /// `chore` is held by `agent` at a worse pain-per-buck than its best.
    NotMpb {
        agent: AgentId,
        chore: ChoreId,
        #[serde(serialize_with = "rational::serialize")]
        ratio: Rational,
        #[serde(serialize_with = "rational::serialize")]
        mpb_ratio: Rational,
    },
    /// Another allocation that Pareto dominates the checked one.
    Dominated {
        owners: Vec<AgentId>,
    },
    /// A fractional allocation whose total cost beats the checked one.
    FractionallyDominated {
        #[serde(serialize_with = "rational::serialize")]
        total: Rational,
        #[serde(serialize_with = "rational::serialize")]
        lp_optimum: Rational,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FairnessReport {
    pub property: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl FairnessReport {
    pub fn pass(property: &str) -> Self {
        Self {
            property: property.to_string(),
            holds: true,
            witness: None,
        }
    }

    pub fn fail(property: &str, witness: Witness) -> Self {
        Self {
            property: property.to_string(),
            holds: false,
            witness: Some(witness),
        }
    }

    fn from_option(property: &str, witness: Option<Witness>) -> Self {
        match witness {
            Some(w) => Self::fail(property, w),
            None => Self::pass(property),
        }
    }
}

impl fmt::Display for FairnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.property, if self.holds { "pass" } else { "FAIL" })
    }
}

fn first_envy(
    inst: &Instance,
    own_value: impl Fn(AgentId) -> Rational,
    other_value: impl Fn(AgentId, AgentId) -> Rational,
) -> Option<Witness> {
    for i in inst.agents() {
        let own = own_value(i);
        for h in inst.agents().filter(|&h| h != i) {
            let other = other_value(i, h);
            if own > other {
                return Some(Witness::Envy {
                    envier: i,
                    envied: h,
                    own,
                    other,
                });
            }
        }
    }
    None
}

pub fn is_ef(inst: &Instance, alloc: &Allocation) -> Result<FairnessReport> {
    alloc.require_complete(inst)?;
    let w = first_envy(
        inst,
        |i| inst.bundle_disutility(i, alloc.bundle(i)),
        |i, h| inst.bundle_disutility(i, alloc.bundle(h)),
    );
    Ok(FairnessReport::from_option("ef", w))
}

pub fn is_ef1(inst: &Instance, alloc: &Allocation) -> Result<FairnessReport> {
    alloc.require_complete(inst)?;
    let w = first_envy(
        inst,
        |i| inst.disutility_less_one(i, alloc.bundle(i)),
        |i, h| inst.bundle_disutility(i, alloc.bundle(h)),
    );
    Ok(FairnessReport::from_option("ef1", w))
}

pub fn is_efx(inst: &Instance, alloc: &Allocation) -> Result<FairnessReport> {
    alloc.require_complete(inst)?;
    let w = first_envy(
        inst,
        |i| inst.disutility_less_min(i, alloc.bundle(i)),
        |i, h| inst.bundle_disutility(i, alloc.bundle(h)),
    );
    Ok(FairnessReport::from_option("efx", w))
}

/// Does `i` EFX-envy `h`?
pub fn efx_envies(inst: &Instance, alloc: &Allocation, i: AgentId, h: AgentId) -> bool {
    i != h && inst.disutility_less_min(i, alloc.bundle(i)) > inst.bundle_disutility(i, alloc.bundle(h))
}

/// Every ordered (envier, envied) EFX-envy pair.
pub fn efx_envy_pairs(inst: &Instance, alloc: &Allocation) -> Vec<(AgentId, AgentId)> {
    let mut pairs = Vec::new();
    for i in inst.agents() {
        for h in inst.agents() {
            if efx_envies(inst, alloc, i, h) {
                pairs.push((i, h));
            }
        }
    }
    pairs
}

/// Does `i` pEF1-envy `h` under payments `pay`?
pub fn pef1_envies(alloc: &Allocation, pay: &PaymentVector, i: AgentId, h: AgentId) -> bool {
    i != h && pay.earning_less_one(alloc.bundle(i)) > pay.earning(alloc.bundle(h))
}

pub fn is_pef1(inst: &Instance, alloc: &Allocation, pay: &PaymentVector) -> FairnessReport {
    let w = first_envy(
        inst,
        |i| pay.earning_less_one(alloc.bundle(i)),
        |_, h| pay.earning(alloc.bundle(h)),
    );
    FairnessReport::from_option("pef1", w)
}

/// Complete allocation and every chore MPB for its owner.
pub fn is_ce(inst: &Instance, alloc: &Allocation, pay: &PaymentVector) -> FairnessReport {
    if let Some(j) = alloc.unassigned().next() {
        return FairnessReport::fail("ce", Witness::Unallocated { chore: j });
    }
    for i in inst.agents() {
        let Some(alpha) = mpb_ratio(inst, pay, i) else {
            continue;
        };
        for &j in alloc.bundle(i) {
            let ratio = inst.cost(i, j) / pay.get(j);
            if ratio != alpha {
                return FairnessReport::fail(
                    "ce",
                    Witness::NotMpb {
                        agent: i,
                        chore: j,
                        ratio,
                        mpb_ratio: alpha,
                    },
                );
            }
        }
    }
    FairnessReport::pass("ce")
}

fn select_by<F>(agents: &[AgentId], key: F, want_max: bool) -> Result<AgentId>
where
    F: Fn(AgentId) -> Rational,
{
    let mut best: Option<(AgentId, Rational)> = None;
    for &i in agents {
        let v = key(i);
        let better = match &best {
            None => true,
            Some((b, bv)) => {
                if want_max {
                    v > *bv || (v == *bv && i < *b)
                } else {
                    v < *bv || (v == *bv && i < *b)
                }
            }
        };
        if better {
            best = Some((i, v));
        }
    }
    best.map(|(i, _)| i)
        .ok_or_else(|| Error::input("cannot select an earner from an empty agent set"))
}

/// Agent maximizing p_{-1}(x_i); lowest index on ties.
pub fn select_big_earner(alloc: &Allocation, pay: &PaymentVector, agents: &[AgentId]) -> Result<AgentId> {
    select_by(agents, |i| pay.earning_less_one(alloc.bundle(i)), true)
}

/// Agent minimizing p(x_i); lowest index on ties.
pub fn select_least_earner(alloc: &Allocation, pay: &PaymentVector, agents: &[AgentId]) -> Result<AgentId> {
    select_by(agents, |i| pay.earning(alloc.bundle(i)), false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BalanceMode {
    Total,
    OneChores,
    KChores,
    Fully,
}

impl std::str::FromStr for BalanceMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "total" => Ok(Self::Total),
            "one_chores" => Ok(Self::OneChores),
            "k_chores" => Ok(Self::KChores),
            "fully" => Ok(Self::Fully),
            other => Err(Error::input(format!("unknown balance mode {other:?}"))),
        }
    }
}

fn spread(counts: impl Iterator<Item = usize>) -> usize {
    let counts: Vec<usize> = counts.collect();
    match (counts.iter().max(), counts.iter().min()) {
        (Some(hi), Some(lo)) => hi - lo,
        _ => 0,
    }
}

/// Balance test over all agents. The 1-/k-chore modes need an instance whose
/// entries are all 1 or a single k > 1 (a normalized bivalued instance).
pub fn is_balanced(inst: &Instance, alloc: &Allocation, mode: BalanceMode) -> Result<bool> {
    let agents: Vec<AgentId> = inst.agents().collect();
    balanced_among(inst, alloc, &agents, mode)
}

pub fn balanced_among(inst: &Instance, alloc: &Allocation, agents: &[AgentId], mode: BalanceMode) -> Result<bool> {
    let total_ok = spread(agents.iter().map(|&i| alloc.size(i))) <= 1;
    if mode == BalanceMode::Total {
        return Ok(total_ok);
    }
    let one = rational::one();
    let normalized = inst.matrix().iter().flatten().all(|v| *v == one)
        || {
            let others: std::collections::BTreeSet<&Rational> =
                inst.matrix().iter().flatten().filter(|v| **v != one).collect();
            others.len() == 1 && others.iter().all(|v| **v > one)
        };
    if !normalized {
        return Err(Error::input("1-chore/k-chore balance needs a normalized bivalued instance"));
    }
    let ones = |i: AgentId| alloc.bundle(i).iter().filter(|&&j| *inst.cost(i, j) == one).count();
    let one_ok = spread(agents.iter().map(|&i| ones(i))) <= 1;
    let k_ok = spread(agents.iter().map(|&i| alloc.size(i) - ones(i))) <= 1;
    Ok(match mode {
        BalanceMode::Total => total_ok,
        BalanceMode::OneChores => one_ok,
        BalanceMode::KChores => k_ok,
        BalanceMode::Fully => total_ok && one_ok && k_ok,
    })
}

/// Every chore sits with an agent of minimum cost for it.
pub fn is_cost_minimizing(inst: &Instance, alloc: &Allocation) -> bool {
    inst.chores().all(|j| match alloc.owner(j) {
        Some(i) => inst.agents().all(|h| inst.cost(i, j) <= inst.cost(h, j)),
        None => false,
    })
}
