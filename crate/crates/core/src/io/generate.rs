//! Seeded random instances for each supported class.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::Instance;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenClass {
    General,
    ThreeAgent,
    TwoType,
    Bivalued,
    TwoAry,
    Identical,
}

impl std::str::FromStr for GenClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "general" => Ok(Self::General),
            "three_agent" | "three_agents" => Ok(Self::ThreeAgent),
            "two_type" => Ok(Self::TwoType),
            "bivalued" => Ok(Self::Bivalued),
            "two_ary" => Ok(Self::TwoAry),
            "identical" => Ok(Self::Identical),
            other => Err(Error::input(format!("unknown instance class {other:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GenParams {
    pub agents: usize,
    pub chores: usize,
    /// High value for bivalued instances (low is 1).
    pub k: Option<i64>,
    /// Inclusive cost range for general, two-type and identical instances.
    pub low: i64,
    pub high: i64,
    /// Probability that a bivalued or 2-ary entry takes the high value.
    pub high_prob: f64,
    /// Give every agent at least one cheap chore in bivalued / 2-ary output.
    pub ensure_cheap: bool,
}

impl GenParams {
    pub fn new(agents: usize, chores: usize) -> Self {
        Self {
            agents,
            chores,
            k: None,
            low: 1,
            high: 10,
            high_prob: 0.5,
            ensure_cheap: true,
        }
    }

    pub fn with_k(mut self, k: i64) -> Self {
        self.k = Some(k);
        self
    }

    pub fn with_range(mut self, low: i64, high: i64) -> Self {
        self.low = low;
        self.high = high;
        self
    }

    pub fn with_high_prob(mut self, p: f64) -> Self {
        self.high_prob = p;
        self
    }
}

pub fn generate(class: GenClass, params: &GenParams, seed: u64) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (n, m) = (params.agents, params.chores);
    if n == 0 {
        return Err(Error::input("need at least one agent"));
    }
    if params.low < 0 || params.low > params.high {
        return Err(Error::input(format!(
            "invalid cost range [{}, {}]",
            params.low, params.high
        )));
    }
    if !(0.0..=1.0).contains(&params.high_prob) {
        return Err(Error::input("high_prob must lie in [0, 1]"));
    }
    let rows = match class {
        GenClass::General => uniform_rows(&mut rng, params, n),
        GenClass::ThreeAgent => {
            if n != 3 {
                return Err(Error::input(format!("three-agent class needs 3 agents, got {n}")));
            }
            uniform_rows(&mut rng, params, n)
        }
        GenClass::Identical => {
            let row = uniform_row(&mut rng, params);
            vec![row; n]
        }
        GenClass::TwoType => two_type_rows(&mut rng, params)?,
        GenClass::Bivalued => {
            let k = params.k.unwrap_or(5);
            if k < 2 {
                return Err(Error::input(format!("bivalued k must be at least 2, got {k}")));
            }
            (0..n).map(|_| two_valued_row(&mut rng, params, k)).collect()
        }
        GenClass::TwoAry => (0..n)
            .map(|_| {
                let k = rng.gen_range(m.max(2) as i64..=m.max(2) as i64 + 5);
                two_valued_row(&mut rng, params, k)
            })
            .collect(),
    };
    Ok(Instance::from_integers(&rows))
}

fn uniform_row(rng: &mut ChaCha8Rng, params: &GenParams) -> Vec<i64> {
    (0..params.chores).map(|_| rng.gen_range(params.low..=params.high)).collect()
}

fn uniform_rows(rng: &mut ChaCha8Rng, params: &GenParams, n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|_| uniform_row(rng, params)).collect()
}

fn two_type_rows(rng: &mut ChaCha8Rng, params: &GenParams) -> Result<Vec<Vec<i64>>> {
    let n = params.agents;
    if n < 2 {
        return Err(Error::input("two-type instances need at least 2 agents"));
    }
    if params.chores == 0 || params.low == params.high {
        return Err(Error::input("two-type instances need chores and a nontrivial cost range"));
    }
    let first = uniform_row(rng, params);
    let second = loop {
        let row = uniform_row(rng, params);
        if row != first {
            break row;
        }
    };
    let mut kinds: Vec<bool> = (0..n).map(|i| i == 0 || (i > 1 && rng.gen_bool(0.5))).collect();
    kinds[1] = false;
    Ok(kinds
        .into_iter()
        .map(|one| if one { first.clone() } else { second.clone() })
        .collect())
}

fn two_valued_row(rng: &mut ChaCha8Rng, params: &GenParams, k: i64) -> Vec<i64> {
    let m = params.chores;
    let mut row: Vec<i64> = (0..m)
        .map(|_| if rng.gen_bool(params.high_prob) { k } else { 1 })
        .collect();
    if params.ensure_cheap && m > 0 && !row.contains(&1) {
        let j = *(0..m).collect::<Vec<_>>().choose(rng).expect("m > 0");
        row[j] = 1;
    }
    row
}
