//! Replays the bundled fixtures and checks their documented behaviour.
//!
//! The bivalued examples describe runs that depend on arbitrary tie-breaks.
//! Each one is checked twice: once by starting the repair routine from the
//! intermediate state the example describes, asserting every intermediate
//! claim, and once by running the full solver from scratch, asserting the
//! terminal predicates (EFX and a competitive equilibrium).

use std::collections::BTreeSet;

use crate::bivalued::efx::{fix_r2_singleton_top, reduce_efx_envy};
use crate::bivalued::{
    efx_fpo_three_bivalued, make_init_groups_traced, rescale_bivalued, AgentGroups, BalancedEvent, BivaluedNormal,
    EfxEvent, GroupMove, RepairState,
};
use crate::certify::{balanced_among, efx_envy_pairs, is_ce, is_efx, BalanceMode};
use crate::error::{Error, Result};
use crate::fixtures::Fixture;
use crate::model::{AgentId, Allocation, ChoreId, Instance, PaymentVector};
use crate::oracle::{enumerate_allocations, find_dominator, is_fpo_lp, is_po_bruteforce, owner_set, EnumBudget};
use crate::rational;
use crate::twotype::round_robin;

#[derive(Debug, Clone)]
pub struct Check {
    pub description: String,
    pub holds: bool,
}

#[derive(Debug, Clone)]
pub struct ReproReport {
    pub fixture: Fixture,
    pub lines: Vec<String>,
    pub checks: Vec<Check>,
}

impl ReproReport {
    fn new(fixture: Fixture) -> Self {
        Self {
            fixture,
            lines: Vec::new(),
            checks: Vec::new(),
        }
    }

    fn say(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    fn check(&mut self, description: impl Into<String>, holds: bool) {
        self.checks.push(Check {
            description: description.into(),
            holds,
        });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.holds).collect()
    }

    /// Trace lines followed by one `[pass]`/`[FAIL]` line per check.
    pub fn render(&self) -> String {
        let mut out = format!("== {} ==\n", self.fixture);
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        for c in &self.checks {
            out.push_str(&format!("[{}] {}\n", if c.holds { "pass" } else { "FAIL" }, c.description));
        }
        out
    }
}

pub fn run(fixture: Fixture) -> Result<ReproReport> {
    let mut rep = ReproReport::new(fixture);
    let inst = fixture.instance();
    match fixture {
        Fixture::Thm2 => no_efx_fpo(&mut rep, &inst)?,
        Fixture::B1 => b1(&mut rep, &inst)?,
        Fixture::B2 => b2(&mut rep, &inst)?,
        Fixture::B3 => b3(&mut rep, &inst)?,
        Fixture::B4 => b4(&mut rep, &inst)?,
        Fixture::B5 => b5(&mut rep, &inst)?,
        Fixture::B6 => b6(&mut rep, &inst)?,
    }
    Ok(rep)
}

fn no_efx_fpo(rep: &mut ReproReport, inst: &Instance) -> Result<()> {
    let all: Vec<Allocation> = enumerate_allocations(inst, EnumBudget::default())?.collect();
    rep.say(format!("enumerated {} allocations", all.len()));
    rep.check("16 allocations in total", all.len() == 16);
    let mut efx = Vec::new();
    for x in &all {
        if is_efx(inst, x)?.holds {
            efx.push(x.clone());
        }
    }
    for x in &efx {
        let fpo = is_fpo_lp(inst, x)?;
        rep.say(format!("EFX: {}  fPO: {}", show(inst, x), fpo));
    }
    // Each agent gets one cheap and one expensive chore.
    let expected: BTreeSet<Vec<AgentId>> = [[0, 1, 0, 1], [0, 1, 1, 0], [1, 0, 0, 1], [1, 0, 1, 0]]
        .iter()
        .map(|o| o.to_vec())
        .collect();
    rep.check("exactly 4 EFX allocations", efx.len() == 4);
    rep.check(
        "the EFX allocations are the swaps of j1/j2 and j3/j4",
        owner_set(&efx) == expected,
    );
    let mut both = 0;
    for x in &efx {
        if is_fpo_lp(inst, x)? {
            both += 1;
        }
    }
    rep.check("no EFX allocation is fPO", both == 0);
    if both == 0 {
        rep.say("no EFX+fPO allocation exists");
    }
    Ok(())
}

fn b1(rep: &mut ReproReport, inst: &Instance) -> Result<()> {
    let chores = inst.chores().collect();
    let x = round_robin(inst, &[0, 1, 2], &chores);
    let costs = cost_vector(inst, &x);
    rep.say(format!("round robin (a, b, c): {}  costs {:?}", show(inst, &x), costs));
    rep.check("round robin yields costs (1, 1, 5)", costs == ["1", "1", "5"]);
    let po = is_po_bruteforce(inst, &x, EnumBudget::default())?;
    rep.check("round robin outcome is not PO", !po);
    if let Some(owners) = find_dominator(inst, &x, EnumBudget::default())? {
        let y = Allocation::from_owners(inst.num_agents(), &owners)?;
        let better = cost_vector(inst, &y);
        rep.say(format!("dominated by {}  costs {:?}", show(inst, &y), better));
        rep.check("a dominating allocation costs (1, 1, 1)", better == ["1", "1", "1"]);
    }
    Ok(())
}

fn b2(rep: &mut ReproReport, inst: &Instance) -> Result<()> {
    let normal = rescale_bivalued(inst)?;
    let (x, p, groups, (start, moves)) = make_init_groups_traced(&normal)?;
    rep.say(format!("start: {}", show(inst, &start)));
    for mv in &moves {
        rep.say(move_line(inst, mv));
    }
    rep.say(format!("result: {}  groups {}", show(inst, &x), show_groups(inst, &groups)));
    rep.check(
        "starts from a = {j1..j4}, b = {j5}, c = {}",
        start == bundles(inst, &[&["j1", "j2", "j3", "j4"], &["j5"], &[]])?,
    );
    let expected_moves = [("j1", 0, 1), ("j5", 1, 2), ("j2", 0, 1)];
    let got: Vec<(&str, AgentId, AgentId)> = moves
        .iter()
        .map(|m| (inst.chore_name(m.chore), m.from, m.to))
        .collect();
    rep.check("moves j1 to b, then j5 to c, then j2 to b", got == expected_moves);
    rep.check(
        "ends with a = {j3, j4}, b = {j1, j2}, c = {j5}",
        x == bundles(inst, &[&["j3", "j4"], &["j1", "j2"], &["j5"]])?,
    );
    let sets: Vec<BTreeSet<AgentId>> = groups.groups().iter().map(|g| g.iter().copied().collect()).collect();
    rep.check(
        "groups are {a, b} then {c}",
        sets == vec![BTreeSet::from([0, 1]), BTreeSet::from([2])],
    );
    rep.check("result is a competitive equilibrium", is_ce(inst, &x, &p).holds);
    let f: Vec<usize> = groups
        .groups()
        .iter()
        .map(|g| g.iter().map(|&i| x.size(i)).max().unwrap_or(0))
        .collect();
    rep.check("largest bundle per group weakly decreases", f.windows(2).all(|w| w[0] >= w[1]));
    let mut within = true;
    for g in groups.groups() {
        within &= balanced_among(inst, &x, g, BalanceMode::Total)?;
    }
    rep.check("groups have balanced bundle sizes", within);
    let mut separated = true;
    for h in inst.agents() {
        for i in inst.agents() {
            if groups.group_of(h) < groups.group_of(i) {
                separated &= x.bundle(h).iter().all(|&j| !normal.is_one(i, j));
            }
        }
    }
    rep.check("chores of a higher group cost k for every lower agent", separated);
    Ok(())
}

fn b3(rep: &mut ReproReport, inst: &Instance) -> Result<()> {
    let normal = rescale_bivalued(inst)?;
    let start = bundles(inst, &[&["j1", "j2", "j3", "j8"], &["j4", "j5", "j9", "j10"], &["j6", "j7", "j11"]])?;
    let groups = AgentGroups::new(3, vec![vec![0, 1, 2]])?;
    let mut st = RepairState::new(&normal, start.clone(), market_payments(&normal), groups, true);
    rep.say(format!("replay from {}", show(inst, &start)));
    rep.check(
        "b EFX-envies both a and c",
        envy_set(inst, &start) == BTreeSet::from([(1, 0), (1, 2)]),
    );
    reduce_efx_envy(&mut st)?;
    let snaps = replay(&start, &st.events)?;
    log_events(rep, inst, &st.events);
    rep.check(
        "one-group routine hands over to the one-extra routine",
        routines(&st.events) == ["reduce_efx_envy", "fix_one_extra_k"],
    );
    if let Some(at) = enter_index(&st.events, "fix_one_extra_k") {
        rep.check(
            "after the rotation the only EFX-envy is from a towards b",
            envy_set(inst, &snaps[at]) == BTreeSet::from([(0, 1)]),
        );
        let tail = &st.events[at + 1..];
        rep.check(
            "repair swaps, swaps again, then transfers",
            kinds(tail) == ["swap", "swap", "transfer"],
        );
        if tail.len() == 3 {
            rep.check("a still EFX-envies c after the first swap", envy_set(inst, &snaps[at + 2]).contains(&(0, 2)));
            rep.check("c EFX-envies a after the second swap", envy_set(inst, &snaps[at + 3]).contains(&(2, 0)));
            rep.check(
                "the last transfer goes from c to b",
                matches!(tail[2], EfxEvent::Transfer { from: 2, to: 1, .. }),
            );
        }
    }
    finish_replay(rep, &normal, &st, &[(3, 1), (4, 1), (0, 2)]);
    from_scratch(rep, &normal, "one_group")
}

fn b4(rep: &mut ReproReport, inst: &Instance) -> Result<()> {
    let normal = rescale_bivalued(inst)?;
    let start = bundles(inst, &[&["j1", "j2", "j6"], &["j3", "j7", "j8"], &["j4", "j5", "j9", "j10"]])?;
    let groups = AgentGroups::new(3, vec![vec![0, 1, 2]])?;
    let mut st = RepairState::new(&normal, start.clone(), market_payments(&normal), groups, true);
    rep.say(format!("replay from {}", show(inst, &start)));
    rep.check(
        "b and c both EFX-envy a",
        envy_set(inst, &start) == BTreeSet::from([(1, 0), (2, 0)]),
    );
    reduce_efx_envy(&mut st)?;
    let snaps = replay(&start, &st.events)?;
    log_events(rep, inst, &st.events);
    rep.check(
        "first move transfers an expensive chore from c to a",
        matches!(st.events.get(1), Some(&EfxEvent::Transfer { chore, from: 2, to: 0 }) if normal.is_k_chore(chore)),
    );
    rep.check(
        "one-group routine hands over to the two-extra routine",
        routines(&st.events) == ["reduce_efx_envy", "fix_two_extra_k"],
    );
    if let Some(at) = enter_index(&st.events, "fix_two_extra_k") {
        rep.check(
            "then only b EFX-envies c",
            envy_set(inst, &snaps[at]) == BTreeSet::from([(1, 2)]),
        );
        let tail = &st.events[at + 1..];
        let cheap_to_c = |e: &EfxEvent, giver: AgentId| {
            matches!(*e, EfxEvent::Transfer { chore, from, to: 2 } if from == giver && normal.is_one(giver, chore))
        };
        rep.check(
            "repair moves a cheap chore from a to c, then one from b to c",
            tail.len() == 2 && cheap_to_c(&tail[0], 0) && cheap_to_c(&tail[1], 1),
        );
    }
    finish_replay(rep, &normal, &st, &[(1, 2), (0, 2), (4, 1)]);
    from_scratch(rep, &normal, "one_group")
}

fn b5(rep: &mut ReproReport, inst: &Instance) -> Result<()> {
    let normal = rescale_bivalued(inst)?;
    let out = efx_fpo_three_bivalued(&normal)?;
    let balanced = out.balanced.as_ref().ok_or_else(|| Error::defect("B5 is not identical"))?;
    rep.say(format!("groups {}", show_groups(inst, &balanced.groups)));
    rep.say(format!("after group construction: {}", show(inst, &balanced.initial_allocation)));
    log_balanced(rep, inst, &balanced.events);
    rep.say(format!("balanced: {}", show(inst, &balanced.allocation)));
    rep.check(
        "groups are {a} then {b, c}",
        balanced.groups.groups() == [vec![0], vec![1, 2]],
    );
    rep.check(
        "a starts with j1..j6",
        balanced.initial_allocation.bundle(0).iter().copied().collect::<Vec<_>>() == (0..6).collect::<Vec<_>>(),
    );
    let after_k: Vec<&BalancedEvent> = balanced
        .events
        .iter()
        .filter(|e| !matches!(e, BalancedEvent::KAssign { .. }))
        .collect();
    let receivers: BTreeSet<AgentId> = after_k
        .iter()
        .filter_map(|e| match e {
            BalancedEvent::Transfer { from: 0, to, .. } => Some(*to),
            _ => None,
        })
        .collect();
    rep.check(
        "balancing raises a's payments, then moves one chore to each of b and c",
        matches!(after_k.first(), Some(BalancedEvent::Raise { group: 0 }))
            && after_k.len() == 3
            && receivers == BTreeSet::from([1, 2]),
    );
    rep.say(format!(
        "note: the last expensive chore went to b here, so balancing ends at sizes {:?} and is already EFX",
        balanced.allocation.sizes()
    ));
    terminal(rep, &normal, &out.allocation, &out.payments, "solver");

    // The example's own post-balancing state.
    let start = bundles(inst, &[&["j1", "j2", "j3", "j4"], &["j7", "j9", "j5"], &["j8", "j10", "j11", "j6"]])?;
    let mut groups = AgentGroups::new(3, vec![vec![0], vec![1, 2]])?;
    groups.mark_raised(0);
    let mut pay = market_payments(&normal);
    for j in ["j1", "j2", "j3", "j4", "j5", "j6"] {
        pay.set(chore(inst, j)?, rational::int(crate::fixtures::EXAMPLE_K));
    }
    rep.say(format!("replay from {}", show(inst, &start)));
    rep.check("that state is a competitive equilibrium", is_ce(inst, &start, &pay).holds);
    rep.check("c EFX-envies b", envy_set(inst, &start) == BTreeSet::from([(2, 1)]));
    let mut st = RepairState::new(&normal, start.clone(), pay, groups, true);
    fix_r2_singleton_top(&mut st)?;
    log_events(rep, inst, &st.events);
    let moved: Vec<&EfxEvent> = st.events.iter().filter(|e| !matches!(e, EfxEvent::Enter { .. })).collect();
    rep.check(
        "repair moves one chore of a to b",
        moved.len() == 1 && matches!(moved[0], EfxEvent::Transfer { from: 0, to: 1, .. }),
    );
    rep.say("note: a's chores are already MPB for b, so no second raise is needed");
    rep.check("final sizes are (3, 4, 4)", st.allocation.sizes() == [3, 4, 4]);
    terminal(rep, &normal, &st.allocation, &st.payments, "replay");
    Ok(())
}

fn b6(rep: &mut ReproReport, inst: &Instance) -> Result<()> {
    let normal = rescale_bivalued(inst)?;
    let out = efx_fpo_three_bivalued(&normal)?;
    let balanced = out.balanced.as_ref().ok_or_else(|| Error::defect("B6 is not identical"))?;
    rep.say(format!("groups {}", show_groups(inst, &balanced.groups)));
    log_balanced(rep, inst, &balanced.events);
    rep.say(format!("balanced: {}", show(inst, &balanced.allocation)));
    let sets: Vec<BTreeSet<AgentId>> = balanced
        .groups
        .groups()
        .iter()
        .map(|g| g.iter().copied().collect())
        .collect();
    rep.check(
        "groups are {a, b} then {c}",
        sets == vec![BTreeSet::from([0, 1]), BTreeSet::from([2])],
    );
    rep.check(
        "balancing needs no transfers or raises",
        balanced.transfer_count() == 0 && balanced.raise_count() == 0,
    );
    rep.check(
        "balanced bundles have (cheap, expensive) counts (3,1), (2,2), (1,3)",
        profile(&normal, &balanced.allocation) == [(3, 1), (2, 2), (1, 3)],
    );
    log_events(rep, inst, &out.events);
    let moved: Vec<&EfxEvent> = out.events.iter().filter(|e| !matches!(e, EfxEvent::Enter { .. })).collect();
    let ok = moved.len() == 2
        && matches!(*moved[0], EfxEvent::Transfer { chore, from: 2, to: 0 } if normal.is_k_chore(chore))
        && matches!(*moved[1], EfxEvent::Transfer { chore, from: 0, to: 1 } if normal.is_one(1, chore));
    rep.check("repair moves an expensive chore c -> a, then a cheap chore a -> b", ok);
    rep.check("final sizes are (4, 5, 3)", out.allocation.sizes() == [4, 5, 3]);
    rep.check("pair-on-top routine used", out.case == "two_groups_pair_top");
    terminal(rep, &normal, &out.allocation, &out.payments, "solver");
    Ok(())
}

/// L-chores paid 1, K-chores paid k: the unraised one-group market.
fn market_payments(normal: &BivaluedNormal) -> PaymentVector {
    let inst = normal.instance();
    let pay = inst
        .chores()
        .map(|j| if normal.is_k_chore(j) { normal.k().clone() } else { rational::one() })
        .collect();
    PaymentVector::new(pay).expect("positive payments")
}

fn finish_replay(rep: &mut ReproReport, normal: &BivaluedNormal, st: &RepairState, expected: &[(usize, usize)]) {
    rep.say(format!("replay result: {}", show(normal.instance(), &st.allocation)));
    rep.check(
        format!("replay ends with (cheap, expensive) counts {expected:?}"),
        profile(normal, &st.allocation) == expected,
    );
    terminal(rep, normal, &st.allocation, &st.payments, "replay");
}

fn from_scratch(rep: &mut ReproReport, normal: &BivaluedNormal, case: &str) -> Result<()> {
    let out = efx_fpo_three_bivalued(normal)?;
    let inst = normal.instance();
    if let Some(b) = &out.balanced {
        rep.say(format!("solver balanced: {}", show(inst, &b.allocation)));
    }
    log_events(rep, inst, &out.events);
    rep.say(format!("solver result: {}", show(inst, &out.allocation)));
    rep.check(format!("solver takes the {case} path"), out.case == case);
    terminal(rep, normal, &out.allocation, &out.payments, "solver");
    Ok(())
}

fn terminal(rep: &mut ReproReport, normal: &BivaluedNormal, x: &Allocation, p: &PaymentVector, who: &str) {
    let inst = normal.instance();
    rep.check(format!("{who} result is EFX"), is_efx(inst, x).map(|r| r.holds).unwrap_or(false));
    rep.check(format!("{who} result is a competitive equilibrium"), is_ce(inst, x, p).holds);
}

/// (cheap, expensive) chore counts per agent.
fn profile(normal: &BivaluedNormal, x: &Allocation) -> Vec<(usize, usize)> {
    (0..x.num_agents())
        .map(|i| (normal.one_count(x, i), normal.k_count(x, i)))
        .collect()
}

fn envy_set(inst: &Instance, x: &Allocation) -> BTreeSet<(AgentId, AgentId)> {
    efx_envy_pairs(inst, x).into_iter().collect()
}

/// Allocation after each event; index i is the state before event i.
fn replay(start: &Allocation, events: &[EfxEvent]) -> Result<Vec<Allocation>> {
    let mut x = start.clone();
    let mut out = vec![x.clone()];
    for e in events {
        match *e {
            EfxEvent::Transfer { chore, to, .. } => {
                x.transfer(chore, to)?;
            }
            EfxEvent::Swap { first, second } => x.swap(first, second)?,
            EfxEvent::Enter { .. } | EfxEvent::Raise { .. } => {}
        }
        out.push(x.clone());
    }
    Ok(out)
}

fn routines(events: &[EfxEvent]) -> Vec<&'static str> {
    events
        .iter()
        .filter_map(|e| match e {
            EfxEvent::Enter { routine } => Some(*routine),
            _ => None,
        })
        .collect()
}

fn enter_index(events: &[EfxEvent], routine: &str) -> Option<usize> {
    events
        .iter()
        .position(|e| matches!(e, EfxEvent::Enter { routine: r } if *r == routine))
}

fn kinds(events: &[EfxEvent]) -> Vec<&'static str> {
    events
        .iter()
        .map(|e| match e {
            EfxEvent::Enter { .. } => "enter",
            EfxEvent::Transfer { .. } => "transfer",
            EfxEvent::Swap { .. } => "swap",
            EfxEvent::Raise { .. } => "raise",
        })
        .collect()
}

fn log_events(rep: &mut ReproReport, inst: &Instance, events: &[EfxEvent]) {
    for e in events {
        let line = match *e {
            EfxEvent::Enter { routine } => format!("enter {routine}"),
            EfxEvent::Transfer { chore, from, to } => format!(
                "  transfer {} {} -> {}",
                inst.chore_name(chore),
                inst.agent_name(from),
                inst.agent_name(to)
            ),
            EfxEvent::Swap { first, second } => {
                format!("  swap {} <-> {}", inst.chore_name(first), inst.chore_name(second))
            }
            EfxEvent::Raise { agent } => format!("  raise payments of {}", inst.agent_name(agent)),
        };
        rep.say(line);
    }
}

fn log_balanced(rep: &mut ReproReport, inst: &Instance, events: &[BalancedEvent]) {
    for e in events {
        let line = match *e {
            BalancedEvent::KAssign { chore, to } => {
                format!("  assign {} to {}", inst.chore_name(chore), inst.agent_name(to))
            }
            BalancedEvent::Transfer { chore, from, to } => format!(
                "  transfer {} {} -> {}",
                inst.chore_name(chore),
                inst.agent_name(from),
                inst.agent_name(to)
            ),
            BalancedEvent::Raise { group } => format!("  raise group {}", group + 1),
        };
        rep.say(line);
    }
}

fn move_line(inst: &Instance, mv: &GroupMove) -> String {
    format!(
        "  move {} {} -> {}",
        inst.chore_name(mv.chore),
        inst.agent_name(mv.from),
        inst.agent_name(mv.to)
    )
}

fn chore(inst: &Instance, name: &str) -> Result<ChoreId> {
    inst.chore_index(name)
        .ok_or_else(|| Error::input(format!("unknown chore {name}")))
}

fn bundles(inst: &Instance, named: &[&[&str]]) -> Result<Allocation> {
    let bundles = named
        .iter()
        .map(|b| b.iter().map(|name| chore(inst, name)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Allocation::from_bundles(inst.num_chores(), bundles)
}

fn cost_vector(inst: &Instance, x: &Allocation) -> Vec<String> {
    inst.agents()
        .map(|i| rational::format_rational(&inst.bundle_disutility(i, x.bundle(i))))
        .collect()
}

/// `a: {j1, j2}; b: {}; ...`
pub fn show(inst: &Instance, x: &Allocation) -> String {
    inst.agents()
        .map(|i| {
            let names: Vec<&str> = x.bundle(i).iter().map(|&j| inst.chore_name(j)).collect();
            format!("{}: {{{}}}", inst.agent_name(i), names.join(", "))
        })
        .collect::<Vec<_>>()
        .join("; ")
}

fn show_groups(inst: &Instance, groups: &AgentGroups) -> String {
    groups
        .groups()
        .iter()
        .map(|g| {
            let names: Vec<&str> = g.iter().map(|&i| inst.agent_name(i)).collect();
            format!("{{{}}}", names.join(", "))
        })
        .collect::<Vec<_>>()
        .join(" > ")
}
