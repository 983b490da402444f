//! Bivalued chores: costs drawn from two values, rescaled so every entry is 1
//! or a single k > 1.
//!
//! [`balanced`] computes a balanced EF1 + fPO allocation for any number of
//! agents, [`efx`] repairs it to EFX + fPO for three agents, and [`two_ary`]
//! handles per-agent value pairs when every high value is large enough.

pub mod balanced;
pub mod efx;
pub mod groups;
pub mod two_ary;

use num_traits::One;

use crate::error::{Error, Result};
use crate::model::{classify, AgentId, Allocation, ChoreId, ChoreSet, Instance};
use crate::rational::{self, Rational};

pub use balanced::{
    audit_balanced_trace, balanced_ef1_fpo, balanced_ef1_fpo_with, BalancedEvent, BalancedOptions, BalancedOutcome,
};
pub use efx::{efx_fpo_three_bivalued, efx_fpo_three_bivalued_with, EfxEvent, EfxOptions, EfxOutcome, RepairState};
pub use groups::{make_init_groups, make_init_groups_traced, AgentGroups, GroupMove};
pub use two_ary::{solve_two_ary, TwoAryOutcome, TwoAryReport};

/// Instance with every entry equal to 1 or `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivaluedNormal {
    instance: Instance,
    k: Rational,
}

impl BivaluedNormal {
    /// Wraps an instance that is already normalized.
    pub fn new(instance: Instance, k: Rational) -> Result<Self> {
        if k <= Rational::one() {
            return Err(Error::input("k must exceed 1"));
        }
        let one = Rational::one();
        if instance.matrix().iter().flatten().any(|v| *v != one && *v != k) {
            return Err(Error::input("entries must be 1 or k"));
        }
        Ok(Self { instance, k })
    }

    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    pub fn k(&self) -> &Rational {
        &self.k
    }

    pub fn is_one(&self, i: AgentId, j: ChoreId) -> bool {
        self.instance.cost(i, j).is_one()
    }

    pub fn l_chores(&self) -> ChoreSet {
        self.instance
            .chores()
            .filter(|&j| self.instance.agents().any(|i| self.is_one(i, j)))
            .collect()
    }

    pub fn k_chores(&self) -> ChoreSet {
        self.instance
            .chores()
            .filter(|&j| self.instance.agents().all(|i| !self.is_one(i, j)))
            .collect()
    }

    pub fn is_k_chore(&self, j: ChoreId) -> bool {
        self.instance.agents().all(|i| !self.is_one(i, j))
    }

    /// |x_{i_1}|: chores in the bundle costing the holder 1.
    pub fn one_count(&self, alloc: &Allocation, i: AgentId) -> usize {
        alloc.bundle(i).iter().filter(|&&j| self.is_one(i, j)).count()
    }

    /// |x_{i_k}|: chores in the bundle costing the holder k.
    pub fn k_count(&self, alloc: &Allocation, i: AgentId) -> usize {
        alloc.size(i) - self.one_count(alloc, i)
    }

    /// Number of globally expensive chores in the bundle.
    pub fn big_k_count(&self, alloc: &Allocation, i: AgentId) -> usize {
        alloc.bundle(i).iter().filter(|&&j| self.is_k_chore(j)).count()
    }
}

/// Maps values {a, b} to {1, b/a}. A row that is entirely b becomes all 1.
/// Single-valued or chore-free instances get k = 2.
pub fn rescale_bivalued(inst: &Instance) -> Result<BivaluedNormal> {
    inst.require_positive()?;
    if inst.num_chores() == 0 {
        return BivaluedNormal::new(inst.clone(), rational::int(2));
    }
    let pair = classify(inst)
        .bivalued
        .ok_or_else(|| Error::input("instance is not bivalued: more than two distinct costs"))?;
    let (k, low, high) = if pair.low == pair.high {
        (rational::int(2), pair.low.clone(), None)
    } else {
        (&pair.high / &pair.low, pair.low.clone(), Some(pair.high.clone()))
    };
    let matrix = inst
        .agents()
        .map(|i| {
            let row = inst.row(i);
            let all_high = high.as_ref().is_some_and(|h| row.iter().all(|v| v == h));
            row.iter()
                .map(|v| if all_high || *v == low { Rational::one() } else { k.clone() })
                .collect()
        })
        .collect();
    BivaluedNormal::new(inst.with_matrix(matrix)?, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn rescale_two_and_ten() {
        let inst = Instance::from_integers(&[vec![2, 10, 2], vec![10, 10, 2]]);
        let n = rescale_bivalued(&inst).unwrap();
        assert_eq!(*n.k(), int(5));
        assert_eq!(n.instance().row(0), &[int(1), int(5), int(1)]);
        assert_eq!(n.instance().row(1), &[int(5), int(5), int(1)]);
    }

    #[test]
    fn all_high_row_becomes_ones() {
        let inst = Instance::from_integers(&[vec![1, 3], vec![3, 3]]);
        let n = rescale_bivalued(&inst).unwrap();
        assert_eq!(*n.k(), int(3));
        assert_eq!(n.instance().row(1), &[int(1), int(1)]);
        assert!(n.k_chores().is_empty());
    }

    #[test]
    fn already_normal_is_identity() {
        let inst = Instance::from_integers(&[vec![1, 4, 4], vec![4, 1, 4]]);
        let n = rescale_bivalued(&inst).unwrap();
        assert_eq!(n.instance(), &inst);
        assert_eq!(n.k_chores(), [2].into_iter().collect());
        assert_eq!(n.l_chores(), [0, 1].into_iter().collect());
    }

    #[test]
    fn rational_ratio_and_errors() {
        let inst = Instance::from_rows(vec![vec![int(2), int(3)], vec![int(3), int(2)]]).unwrap();
        assert_eq!(*rescale_bivalued(&inst).unwrap().k(), ratio(3, 2));
        let three = Instance::from_integers(&[vec![1, 2, 3]]);
        assert!(rescale_bivalued(&three).is_err());
        let zero = Instance::from_integers(&[vec![0, 2]]);
        assert!(rescale_bivalued(&zero).is_err());
        let flat = Instance::from_integers(&[vec![7, 7]]);
        let n = rescale_bivalued(&flat).unwrap();
        assert_eq!(*n.k(), int(2));
        assert_eq!(n.instance().row(0), &[int(1), int(1)]);
    }
}
