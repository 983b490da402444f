//! EF1 + PO when each agent has its own value pair {a_i, b_i} and every
//! ratio b_i / a_i is at least the number of chores.
//!
//! Every agent is rescaled to {1, k_i} and the balanced algorithm runs with a
//! common k = 2, which only the cheap/expensive pattern influences.

use num_traits::One;
use serde::Serialize;

use super::balanced::{balanced_ef1_fpo, BalancedOutcome};
use super::BivaluedNormal;
use crate::certify::{is_ef1, FairnessReport};
use crate::error::{Error, Result};
use crate::model::{classify, Allocation, Instance};
use crate::oracle::{is_po_bruteforce, EnumBudget};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Serialize)]
pub struct TwoAryReport {
    /// Against the true costs.
    pub ef1: FairnessReport,
    /// Brute force; None when the instance is too large to enumerate.
    pub po: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct TwoAryOutcome {
    pub allocation: Allocation,
    /// Run on the rescaled instance with k = 2.
    pub balanced: BalancedOutcome,
    pub report: TwoAryReport,
}

/// Rescaled copy with entries in {1, 2}. Single-valued agents become all 1
/// and are exempt from the ratio bound.
pub fn normalize_two_ary(inst: &Instance) -> Result<BivaluedNormal> {
    inst.require_positive()?;
    let m = inst.num_chores();
    if m == 0 {
        return BivaluedNormal::new(inst.clone(), rational::int(2));
    }
    let pairs = classify(inst)
        .two_ary
        .ok_or_else(|| Error::input("instance is not 2-ary: some agent has more than two distinct costs"))?;
    let bound = rational::int(m as i64);
    let mut matrix = Vec::with_capacity(inst.num_agents());
    for (i, pair) in pairs.iter().enumerate() {
        if pair.low != pair.high {
            let ratio = &pair.high / &pair.low;
            if ratio < bound {
                return Err(Error::input(format!(
                    "agent {} has cost ratio {} below the required bound k_i >= m = {m}",
                    inst.agent_name(i),
                    rational::format_rational(&ratio)
                )));
            }
        }
        matrix.push(
            inst.row(i)
                .iter()
                .map(|v| {
                    if *v == pair.low {
                        Rational::one()
                    } else {
                        rational::int(2)
                    }
                })
                .collect(),
        );
    }
    BivaluedNormal::new(inst.with_matrix(matrix)?, rational::int(2))
}

pub fn solve_two_ary(inst: &Instance) -> Result<TwoAryOutcome> {
    solve_two_ary_with(inst, EnumBudget::from_env())
}

pub fn solve_two_ary_with(inst: &Instance, budget: EnumBudget) -> Result<TwoAryOutcome> {
    let normal = normalize_two_ary(inst)?;
    let balanced = balanced_ef1_fpo(&normal)?;
    let allocation = balanced.allocation.clone();
    let ef1 = is_ef1(inst, &allocation)?;
    let po = match is_po_bruteforce(inst, &allocation, budget) {
        Ok(v) => Some(v),
        Err(Error::Resource(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(TwoAryOutcome {
        allocation,
        balanced,
        report: TwoAryReport { ef1, po },
    })
}
