//! Small documented instances used by `repro` and the acceptance suite.
//!
//! Agents are named `a`, `b`, `c` and chores `j1..jm`. In the bivalued
//! examples `k = 5`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::Instance;

pub const EXAMPLE_K: i64 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Fixture {
    /// Two agents with no EFX + fPO allocation.
    Thm2,
    /// Round robin can return a Pareto-dominated allocation.
    B1,
    /// Group construction on cheap chores only.
    B2,
    /// One group, one extra expensive chore.
    B3,
    /// One group, two extra expensive chores.
    B4,
    /// Two groups, single agent on top.
    B5,
    /// Two groups, pair on top.
    B6,
}

impl Fixture {
    pub const ALL: [Fixture; 7] = [
        Fixture::Thm2,
        Fixture::B1,
        Fixture::B2,
        Fixture::B3,
        Fixture::B4,
        Fixture::B5,
        Fixture::B6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Fixture::Thm2 => "thm2",
            Fixture::B1 => "B1",
            Fixture::B2 => "B2",
            Fixture::B3 => "B3",
            Fixture::B4 => "B4",
            Fixture::B5 => "B5",
            Fixture::B6 => "B6",
        }
    }

    pub fn instance(self) -> Instance {
        let rows: Vec<Vec<i64>> = match self {
            Fixture::Thm2 => vec![vec![1, 1, 3, 3], vec![1, 1, 4, 4]],
            Fixture::B1 => rows(&["111", "k1k", "1kk"]),
            Fixture::B2 => rows(&["1111k", "111k1", "kkkk1"]),
            Fixture::B3 => rows(&["111111kkkkk", "1111111kkkk", "1111k11kkkk"]),
            Fixture::B4 => rows(&["111kkkkkkk", "11111kkkkk", "11111kkkkk"]),
            Fixture::B5 => rows(&["111111k1kkk", "kkkkkk1kkkk", "kkkkkk11kkk"]),
            Fixture::B6 => rows(&["11111kkkkkkk", "11111kkkkkkk", "kkkkk1kkkkkk"]),
        };
        let n = rows.len();
        let m = rows[0].len();
        let agents: Vec<String> = ["a", "b", "c"][..n].iter().map(|s| s.to_string()).collect();
        let chores: Vec<String> = (1..=m).map(|j| format!("j{j}")).collect();
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(crate::rational::int).collect())
            .collect();
        Instance::new(agents, chores, rows).expect("fixtures are valid")
    }
}

fn rows(pattern: &[&str]) -> Vec<Vec<i64>> {
    pattern.iter()
        .map(|r| r.chars().map(|c| if c == 'k' { EXAMPLE_K } else { 1 }).collect())
        .collect()
}

impl fmt::Display for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Fixture {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Fixture::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::input(format!("unknown example {s:?}; expected one of B1..B6, thm2")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::classify;

    #[test]
    fn shapes() {
        let dims: Vec<(usize, usize)> = Fixture::ALL
            .iter()
            .map(|f| (f.instance().num_agents(), f.instance().num_chores()))
            .collect();
        assert_eq!(dims, vec![(2, 4), (3, 3), (3, 5), (3, 11), (3, 10), (3, 11), (3, 12)]);
        for f in &Fixture::ALL[1..] {
            assert!(classify(&f.instance()).bivalued.is_some());
        }
        assert_eq!("b4".parse::<Fixture>().unwrap(), Fixture::B4);
        assert_eq!("THM2".parse::<Fixture>().unwrap(), Fixture::Thm2);
        assert!("B7".parse::<Fixture>().is_err());
    }
}
