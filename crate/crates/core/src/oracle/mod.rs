//! Ground truth by exhaustive enumeration and exact linear programming.

pub mod simplex;

use std::collections::BTreeSet;
use std::str::FromStr;

use num_traits::Zero;

use crate::certify::{self, Witness};
use crate::error::{Error, Result};
use crate::model::{AgentId, Allocation, Instance, PaymentVector};
use crate::rational::{int, Rational};
use simplex::{LpOutcome, LpProblem};

pub const DEFAULT_ENUM_LIMIT: u64 = 10_000_000;
pub const ENUM_LIMIT_ENV: &str = "CHOREQ_ENUM_LIMIT";

/// Maximum number of allocations an oracle call may enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumBudget(pub u64);

impl Default for EnumBudget {
    fn default() -> Self {
        EnumBudget(DEFAULT_ENUM_LIMIT)
    }
}

impl EnumBudget {
    /// Reads `CHOREQ_ENUM_LIMIT`, falling back to the default.
    pub fn from_env() -> Self {
        std::env::var(ENUM_LIMIT_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(EnumBudget)
            .unwrap_or_default()
    }

    fn check(&self, inst: &Instance) -> Result<u64> {
        let n = inst.num_agents() as u64;
        let mut count: u64 = 1;
        for _ in 0..inst.num_chores() {
            count = count.checked_mul(n).filter(|c| *c <= self.0).ok_or_else(|| {
                Error::Resource(format!(
                    "{}^{} allocations exceed the enumeration limit {}",
                    inst.num_agents(),
                    inst.num_chores(),
                    self.0
                ))
            })?;
        }
        if count > self.0 {
            return Err(Error::Resource(format!("enumeration limit {} is below 1", self.0)));
        }
        Ok(count)
    }
}

/// All complete allocations in lexicographic order of the owner vector
/// (chore 0 is the most significant position).
pub struct AllocationIter {
    num_agents: usize,
    owners: Vec<AgentId>,
    done: bool,
}

impl Iterator for AllocationIter {
    type Item = Vec<AgentId>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let current = self.owners.clone();
        let mut pos = self.owners.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.owners[pos] += 1;
            if self.owners[pos] < self.num_agents {
                break;
            }
            self.owners[pos] = 0;
        }
        Some(current)
    }
}

/// Owner vectors of every complete allocation.
pub fn enumerate_owner_vectors(inst: &Instance, budget: EnumBudget) -> Result<AllocationIter> {
    budget.check(inst)?;
    Ok(AllocationIter {
        num_agents: inst.num_agents(),
        owners: vec![0; inst.num_chores()],
        done: false,
    })
}

pub fn enumerate_allocations(inst: &Instance, budget: EnumBudget) -> Result<impl Iterator<Item = Allocation>> {
    let n = inst.num_agents();
    Ok(enumerate_owner_vectors(inst, budget)?
        .map(move |owners| Allocation::from_owners(n, &owners).expect("enumerated owners are valid")))
}

fn cost_vector(inst: &Instance, owners: &[AgentId]) -> Vec<Rational> {
    let mut costs = vec![Rational::zero(); inst.num_agents()];
    for (j, &i) in owners.iter().enumerate() {
        costs[i] += inst.cost(i, j);
    }
    costs
}

fn agent_costs(inst: &Instance, alloc: &Allocation) -> Vec<Rational> {
    inst.agents().map(|i| inst.bundle_disutility(i, alloc.bundle(i))).collect()
}

fn dominates(y: &[Rational], x: &[Rational]) -> bool {
    y.iter().zip(x).all(|(a, b)| a <= b) && y.iter().zip(x).any(|(a, b)| a < b)
}

/// An integral allocation dominating `alloc`, if any (first in enumeration order).
pub fn find_dominator(inst: &Instance, alloc: &Allocation, budget: EnumBudget) -> Result<Option<Vec<AgentId>>> {
    alloc.require_complete(inst)?;
    let x = agent_costs(inst, alloc);
    for owners in enumerate_owner_vectors(inst, budget)? {
        if dominates(&cost_vector(inst, &owners), &x) {
            return Ok(Some(owners));
        }
    }
    Ok(None)
}

pub fn is_po_bruteforce(inst: &Instance, alloc: &Allocation, budget: EnumBudget) -> Result<bool> {
    Ok(find_dominator(inst, alloc, budget)?.is_none())
}

pub fn po_report(inst: &Instance, alloc: &Allocation, budget: EnumBudget) -> Result<certify::FairnessReport> {
    Ok(match find_dominator(inst, alloc, budget)? {
        Some(owners) => certify::FairnessReport::fail("po", Witness::Dominated { owners }),
        None => certify::FairnessReport::pass("po"),
    })
}

/// The cost-minimization LP whose optimum falls below the current total
/// exactly when a fractional allocation dominates `alloc`.
pub fn fpo_lp(inst: &Instance, alloc: &Allocation) -> Result<LpProblem> {
    alloc.require_complete(inst)?;
    let (n, m) = (inst.num_agents(), inst.num_chores());
    let var = |i: usize, j: usize| i * m + j;
    let mut objective = vec![Rational::zero(); n * m];
    for i in 0..n {
        for j in 0..m {
            objective[var(i, j)] = inst.cost(i, j).clone();
        }
    }
    let equalities = (0..m)
        .map(|j| {
            let mut row = vec![Rational::zero(); n * m];
            for i in 0..n {
                row[var(i, j)] = int(1);
            }
            (row, int(1))
        })
        .collect();
    let inequalities = (0..n)
        .map(|i| {
            let mut row = vec![Rational::zero(); n * m];
            for j in 0..m {
                row[var(i, j)] = inst.cost(i, j).clone();
            }
            (row, inst.bundle_disutility(i, alloc.bundle(i)))
        })
        .collect();
    Ok(LpProblem {
        objective,
        equalities,
        inequalities,
        upper_bounds: vec![Some(int(1)); n * m],
    })
}

/// (current total cost, LP optimum).
pub fn fpo_optimum(inst: &Instance, alloc: &Allocation) -> Result<(Rational, Rational)> {
    let lp = fpo_lp(inst, alloc)?;
    let total: Rational = agent_costs(inst, alloc).into_iter().sum();
    match simplex::solve(&lp)? {
        LpOutcome::Optimal { value, .. } => {
            if value > total {
                return Err(Error::defect("fPO LP optimum exceeds a feasible point"));
            }
            Ok((total, value))
        }
        other => Err(Error::defect(format!("fPO LP reported {other:?}"))),
    }
}

pub fn is_fpo_lp(inst: &Instance, alloc: &Allocation) -> Result<bool> {
    let (total, optimum) = fpo_optimum(inst, alloc)?;
    Ok(total == optimum)
}

pub fn fpo_report(inst: &Instance, alloc: &Allocation) -> Result<certify::FairnessReport> {
    let (total, lp_optimum) = fpo_optimum(inst, alloc)?;
    Ok(if total == lp_optimum {
        certify::FairnessReport::pass("fpo")
    } else {
        certify::FairnessReport::fail("fpo", Witness::FractionallyDominated { total, lp_optimum })
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Predicate {
    Ef,
    Ef1,
    Efx,
    Pef1(PaymentVector),
    Po,
    Fpo,
}

impl Predicate {
    fn cost_rank(&self) -> u8 {
        match self {
            Predicate::Ef | Predicate::Ef1 | Predicate::Efx | Predicate::Pef1(_) => 0,
            Predicate::Po => 1,
            Predicate::Fpo => 2,
        }
    }
}

impl FromStr for Predicate {
    type Err = Error;
    /// Parses the payment-free predicates.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "ef" => Ok(Predicate::Ef),
            "ef1" => Ok(Predicate::Ef1),
            "efx" => Ok(Predicate::Efx),
            "po" => Ok(Predicate::Po),
            "fpo" => Ok(Predicate::Fpo),
            "pef1" => Err(Error::input("pef1 needs a payment vector")),
            other => Err(Error::input(format!("unknown property {other:?}"))),
        }
    }
}

/// Every complete allocation satisfying all predicates, in enumeration order.
pub fn find_allocations(inst: &Instance, predicates: &[Predicate], budget: EnumBudget) -> Result<Vec<Allocation>> {
    let mut preds: Vec<&Predicate> = predicates.iter().collect();
    preds.sort_by_key(|p| p.cost_rank());
    let n = inst.num_agents();
    let needs_po = preds.iter().any(|p| matches!(p, Predicate::Po));
    let owner_vectors: Vec<Vec<AgentId>> = enumerate_owner_vectors(inst, budget)?.collect();
    let cost_vectors: Vec<Vec<Rational>> = if needs_po {
        owner_vectors.iter().map(|o| cost_vector(inst, o)).collect()
    } else {
        Vec::new()
    };
    let mut found = Vec::new();
    'outer: for (idx, owners) in owner_vectors.iter().enumerate() {
        let alloc = Allocation::from_owners(n, owners)?;
        for p in &preds {
            let ok = match p {
                Predicate::Ef => certify::is_ef(inst, &alloc)?.holds,
                Predicate::Ef1 => certify::is_ef1(inst, &alloc)?.holds,
                Predicate::Efx => certify::is_efx(inst, &alloc)?.holds,
                Predicate::Pef1(pay) => certify::is_pef1(inst, &alloc, pay).holds,
                Predicate::Po => {
                    let x = &cost_vectors[idx];
                    !cost_vectors.iter().any(|y| dominates(y, x))
                }
                Predicate::Fpo => is_fpo_lp(inst, &alloc)?,
            };
            if !ok {
                continue 'outer;
            }
        }
        found.push(alloc);
    }
    Ok(found)
}

/// True iff no allocation is both EFX and fPO.
pub fn verify_nonexistence_efx_fpo(inst: &Instance, budget: EnumBudget) -> Result<bool> {
    Ok(find_allocations(inst, &[Predicate::Efx, Predicate::Fpo], budget)?.is_empty())
}

/// Owner vectors of a list of allocations, handy for set comparisons.
pub fn owner_set(allocs: &[Allocation]) -> BTreeSet<Vec<AgentId>> {
    allocs.iter().filter_map(Allocation::owner_vector).collect()
}
