//! Initial cost-minimizing allocation of the cheap chores and the ordered
//! agent groups built from it.

use std::collections::VecDeque;

use num_traits::One;
use serde::Serialize;

use super::BivaluedNormal;
use crate::certify::select_big_earner;
use crate::error::{Error, Result};
use crate::model::{is_mpb, AgentId, Allocation, ChoreId, Instance, PaymentVector};
use crate::rational::Rational;

/// Ordered partition N_1, ..., N_R of the agents.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AgentGroups {
    groups: Vec<Vec<AgentId>>,
    raised: Vec<bool>,
    #[serde(skip)]
    group_of: Vec<usize>,
}

impl AgentGroups {
    pub fn new(num_agents: usize, groups: Vec<Vec<AgentId>>) -> Result<Self> {
        let mut group_of = vec![usize::MAX; num_agents];
        for (r, g) in groups.iter().enumerate() {
            for &i in g {
                if i >= num_agents || group_of[i] != usize::MAX {
                    return Err(Error::input("groups must partition the agents"));
                }
                group_of[i] = r;
            }
        }
        if group_of.contains(&usize::MAX) {
            return Err(Error::input("groups must partition the agents"));
        }
        let raised = vec![false; groups.len()];
        Ok(Self { groups, raised, group_of })
    }

    /// R.
    pub fn count(&self) -> usize {
        self.groups.len()
    }

    pub fn group(&self, r: usize) -> &[AgentId] {
        &self.groups[r]
    }

    pub fn groups(&self) -> &[Vec<AgentId>] {
        &self.groups
    }

    pub fn group_of(&self, i: AgentId) -> usize {
        self.group_of[i]
    }

    pub fn is_raised(&self, r: usize) -> bool {
        self.raised[r]
    }

    pub fn agent_raised(&self, i: AgentId) -> bool {
        self.raised[self.group_of[i]]
    }

    pub(crate) fn mark_raised(&mut self, r: usize) {
        self.raised[r] = true;
    }
}

/// Breadth-first levels over special paths from `source`: an agent reaches
/// another through one of its own chores that is MPB for the other.
/// Only agents in `allowed` are visited; expansion is in index order.
#[derive(Debug, Clone)]
pub struct MpbGraph {
    level: Vec<Option<usize>>,
    parent: Vec<Option<(AgentId, ChoreId)>>,
}

impl MpbGraph {
    pub fn explore(
        inst: &Instance,
        alloc: &Allocation,
        pay: &PaymentVector,
        source: AgentId,
        allowed: &[bool],
    ) -> Self {
        let n = inst.num_agents();
        let mut level = vec![None; n];
        let mut parent = vec![None; n];
        level[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let next = level[u].expect("queued agents have a level") + 1;
            for &j in alloc.bundle(u) {
                for v in inst.agents() {
                    if allowed[v] && level[v].is_none() && is_mpb(inst, pay, v, j) {
                        level[v] = Some(next);
                        parent[v] = Some((u, j));
                        queue.push_back(v);
                    }
                }
            }
        }
        Self { level, parent }
    }

    /// λ(h; source), or None when unreachable.
    pub fn level(&self, h: AgentId) -> Option<usize> {
        self.level[h]
    }

    /// Last hop of the shortest path to `h`: (previous agent, chore).
    pub fn last_hop(&self, h: AgentId) -> Option<(AgentId, ChoreId)> {
        self.parent[h]
    }

    pub fn component(&self) -> Vec<AgentId> {
        (0..self.level.len()).filter(|&i| self.level[i].is_some()).collect()
    }
}

/// Allocates the cheap chores and forms the agent groups.
///
/// Each cheap chore starts with the lowest-index agent valuing it at 1, with
/// payment 1; expensive chores are left unassigned with payment k. Within the
/// remaining agents the big earner pushes chores along shortest alternating
/// paths to any agent in its component earning less than its p_{-1}; when none
/// is left, the component becomes the next group.
pub fn make_init_groups(normal: &BivaluedNormal) -> Result<(Allocation, PaymentVector, AgentGroups)> {
    make_init_groups_traced(normal).map(|(x, p, g, _)| (x, p, g))
}

/// One chore moved during group construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GroupMove {
    pub chore: ChoreId,
    pub from: AgentId,
    pub to: AgentId,
}

/// Like [`make_init_groups`], also returning the starting allocation and
/// every transfer made.
#[allow(clippy::type_complexity)]
pub fn make_init_groups_traced(
    normal: &BivaluedNormal,
) -> Result<(Allocation, PaymentVector, AgentGroups, (Allocation, Vec<GroupMove>))> {
    let inst = normal.instance();
    let n = inst.num_agents();
    let m = inst.num_chores();
    let mut alloc = Allocation::empty(n, m);
    let mut payments = Vec::with_capacity(m);
    for j in inst.chores() {
        match inst.agents().find(|&i| normal.is_one(i, j)) {
            Some(i) => {
                alloc.assign(j, i);
                payments.push(Rational::one());
            }
            None => payments.push(normal.k().clone()),
        }
    }
    let pay = PaymentVector::new(payments)?;
    let start = alloc.clone();
    let mut trace = Vec::new();
    let mut remaining = vec![true; n];
    let mut groups = Vec::new();
    let cap = 4 * (m + 1) * (m + 1) * (n + 1);
    let mut moves = 0usize;
    while remaining.iter().any(|&r| r) {
        let pool: Vec<AgentId> = (0..n).filter(|&i| remaining[i]).collect();
        let graph = loop {
            let big = select_big_earner(&alloc, &pay, &pool)?;
            let graph = MpbGraph::explore(inst, &alloc, &pay, big, &remaining);
            let threshold = pay.earning_less_one(alloc.bundle(big));
            let target = graph
                .component()
                .into_iter()
                .filter(|&i| i != big && threshold > pay.earning(alloc.bundle(i)))
                .min_by_key(|&i| (graph.level(i), i));
            let Some(target) = target else { break graph };
            let (_, chore) = graph.last_hop(target).expect("reachable agents have a parent");
            let from = alloc.transfer(chore, target)?;
            trace.push(GroupMove { chore, from, to: target });
            moves += 1;
            if moves > cap {
                return Err(Error::defect("group construction exceeded its transfer cap"));
            }
        };
        let group = graph.component();
        for &i in &group {
            remaining[i] = false;
        }
        groups.push(group);
    }
    Ok((alloc, pay, AgentGroups::new(n, groups)?, (start, trace)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bivalued::rescale_bivalued;
    use crate::certify::{balanced_among, is_ce, BalanceMode};

    fn normal(rows: &[Vec<i64>]) -> BivaluedNormal {
        rescale_bivalued(&Instance::from_integers(rows)).unwrap()
    }

    #[test]
    fn example_make_init_groups() {
        let nb = normal(&[vec![1, 1, 1, 1, 5], vec![1, 1, 1, 5, 1], vec![5, 5, 5, 5, 1]]);
        let (x, p, g) = make_init_groups(&nb).unwrap();
        assert_eq!(x.bundle(0).iter().copied().collect::<Vec<_>>(), vec![2, 3]);
        assert_eq!(x.bundle(1).iter().copied().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(x.bundle(2).iter().copied().collect::<Vec<_>>(), vec![4]);
        assert_eq!(g.groups(), &[vec![0, 1], vec![2]]);
        assert!(is_ce(nb.instance(), &x, &p).holds);
    }

    #[test]
    fn single_agent_and_identical_pair() {
        let nb = normal(&[vec![1, 5, 1]]);
        let (x, _, g) = make_init_groups(&nb).unwrap();
        assert_eq!(g.count(), 1);
        assert_eq!(x.sizes(), vec![2]);
        assert_eq!(x.owner(1), None);

        let nb = normal(&[vec![1, 1, 1, 1], vec![1, 1, 1, 1]]);
        let (x, _, g) = make_init_groups(&nb).unwrap();
        assert_eq!(g.groups(), &[vec![0, 1]]);
        assert_eq!(x.sizes(), vec![2, 2]);
    }

    #[test]
    fn group_properties_hold() {
        let nb = normal(&[
            vec![1, 1, 1, 5, 5, 1],
            vec![5, 1, 1, 1, 5, 5],
            vec![5, 5, 5, 5, 1, 5],
            vec![5, 5, 5, 5, 1, 5],
        ]);
        let (x, _, g) = make_init_groups(&nb).unwrap();
        let inst = nb.instance();
        let f: Vec<usize> = g.groups().iter().map(|grp| grp.iter().map(|&i| x.size(i)).max().unwrap()).collect();
        assert!(f.windows(2).all(|w| w[0] >= w[1]));
        for grp in g.groups() {
            assert!(balanced_among(inst, &x, grp, BalanceMode::Total).unwrap());
        }
        for h in inst.agents() {
            for i in inst.agents() {
                if g.group_of(h) < g.group_of(i) {
                    assert!(x.bundle(h).iter().all(|&j| !nb.is_one(i, j)));
                }
            }
        }
    }
}
