use proptest::prelude::*;

use choreq::certify::{is_ce, is_ef, is_ef1, is_efx, is_pef1, select_big_earner, select_least_earner};
use choreq::io::{generate, parse_instance_str, serialize_instance, GenClass, GenParams};
use choreq::model::{classify, mpb_ratio, mpb_set, preprocess_zero_chores, AgentId, Allocation, Instance, PaymentVector};
use choreq::oracle::{is_fpo_lp, is_po_bruteforce, EnumBudget};
use choreq::rational::{ratio, Rational};

/// Small matrix with entries in `0..=max` plus an owner vector.
fn instance_and_owners(max_cost: i64) -> impl Strategy<Value = (Instance, Vec<AgentId>)> {
    (1usize..=3, 0usize..=5).prop_flat_map(move |(n, m)| {
        (
            prop::collection::vec(prop::collection::vec(0..=max_cost, m), n),
            prop::collection::vec(0..n, m),
        )
            .prop_map(|(rows, owners)| (Instance::from_integers(&rows), owners))
    })
}

/// Equilibrium built from chosen MPB ratios: each chore is priced at its
/// cheapest normalized cost and owned by an agent attaining it.
fn random_ce() -> impl Strategy<Value = (Instance, Allocation, PaymentVector)> {
    (2usize..=4, 0usize..=6).prop_flat_map(|(n, m)| {
        (
            prop::collection::vec(prop::collection::vec(1i64..=4, m), n),
            prop::collection::vec((1i64..=3, 1i64..=3), n),
            prop::collection::vec(any::<prop::sample::Index>(), m),
        )
            .prop_map(move |(rows, alphas, picks)| {
                let inst = Instance::from_integers(&rows);
                let alpha: Vec<Rational> = alphas.iter().map(|&(a, b)| ratio(a, b)).collect();
                let mut pay = Vec::new();
                let mut owners = Vec::new();
                for (j, pick) in picks.iter().enumerate() {
                    let prices: Vec<Rational> = (0..n).map(|i| inst.cost(i, j) / &alpha[i]).collect();
                    let best = prices.iter().min().unwrap().clone();
                    let ties: Vec<AgentId> = (0..n).filter(|&i| prices[i] == best).collect();
                    owners.push(*pick.get(&ties));
                    pay.push(best);
                }
                (
                    inst,
                    Allocation::from_owners(n, &owners).unwrap(),
                    PaymentVector::new(pay).unwrap(),
                )
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn envy_notions_are_nested((inst, owners) in instance_and_owners(5)) {
        let x = Allocation::from_owners(inst.num_agents(), &owners).unwrap();
        let ef = is_ef(&inst, &x).unwrap().holds;
        let efx = is_efx(&inst, &x).unwrap().holds;
        let ef1 = is_ef1(&inst, &x).unwrap().holds;
        prop_assert!(!ef || efx);
        prop_assert!(!efx || ef1);
    }

    #[test]
    fn efx_matches_every_removal((inst, owners) in instance_and_owners(5)) {
        let x = Allocation::from_owners(inst.num_agents(), &owners).unwrap();
        let by_definition = inst.agents().all(|i| {
            let own = inst.bundle_disutility(i, x.bundle(i));
            inst.agents().filter(|&h| h != i).all(|h| {
                let other = inst.bundle_disutility(i, x.bundle(h));
                x.bundle(i).iter().all(|&j| &own - inst.cost(i, j) <= other)
            })
        });
        prop_assert_eq!(is_efx(&inst, &x).unwrap().holds, by_definition);
    }

    #[test]
    fn witnesses_accompany_failures((inst, owners) in instance_and_owners(5)) {
        let x = Allocation::from_owners(inst.num_agents(), &owners).unwrap();
        for r in [is_ef(&inst, &x).unwrap(), is_ef1(&inst, &x).unwrap(), is_efx(&inst, &x).unwrap()] {
            prop_assert_eq!(r.holds, r.witness.is_none());
        }
    }

    #[test]
    fn fractional_efficiency_implies_pareto((inst, owners) in instance_and_owners(4)) {
        let x = Allocation::from_owners(inst.num_agents(), &owners).unwrap();
        if is_fpo_lp(&inst, &x).unwrap() {
            prop_assert!(is_po_bruteforce(&inst, &x, EnumBudget::default()).unwrap());
        }
    }

    #[test]
    fn payment_envy_freeness((inst, x, pay) in random_ce()) {
        prop_assert!(is_ce(&inst, &x, &pay).holds);
        prop_assert!(is_fpo_lp(&inst, &x).unwrap());
        let pef1 = is_pef1(&inst, &x, &pay).holds;
        if pef1 {
            prop_assert!(is_ef1(&inst, &x).unwrap().holds);
        }
        let everyone: Vec<AgentId> = inst.agents().collect();
        let be = select_big_earner(&x, &pay, &everyone).unwrap();
        let le = select_least_earner(&x, &pay, &everyone).unwrap();
        prop_assert_eq!(pay.earning_less_one(x.bundle(be)) <= pay.earning(x.bundle(le)), pef1);
    }

    #[test]
    fn mpb_sets_attain_the_ratio((inst, _x, pay) in random_ce()) {
        for i in inst.agents() {
            let set = mpb_set(&inst, &pay, i);
            prop_assert_eq!(set.is_empty(), inst.num_chores() == 0);
            if let Some(alpha) = mpb_ratio(&inst, &pay, i) {
                for &j in &set {
                    prop_assert_eq!(inst.cost(i, j) / pay.get(j), alpha.clone());
                }
            }
        }
    }

    #[test]
    fn earnings_split_off_the_top_payment((_inst, x, pay) in random_ce()) {
        for bundle in x.bundles() {
            if let Some(top) = bundle.iter().map(|&j| pay.get(j)).max() {
                prop_assert_eq!(pay.earning_less_one(bundle) + top, pay.earning(bundle));
            }
        }
    }

    /// Setting zero-cost chores aside keeps EF1 and fPO intact.
    #[test]
    fn zero_chore_reduction((inst, owners) in instance_and_owners(3)) {
        let red = preprocess_zero_chores(&inst);
        prop_assert!(red.reduced.all_positive());
        let n = inst.num_agents();
        let owners: Vec<AgentId> = owners.into_iter().take(red.reduced.num_chores()).collect();
        let x = Allocation::from_owners(n, &owners).unwrap();
        let lifted = red.lift(&x);
        prop_assert!(lifted.is_complete());
        if is_ef1(&red.reduced, &x).unwrap().holds {
            prop_assert!(is_ef1(&inst, &lifted).unwrap().holds);
        }
        prop_assert_eq!(is_fpo_lp(&red.reduced, &x).unwrap(), is_fpo_lp(&inst, &lifted).unwrap());
    }

    #[test]
    fn instance_files_round_trip(
        rows in (1usize..=3, 0usize..=4).prop_flat_map(|(n, m)| {
            prop::collection::vec(prop::collection::vec((0i64..=20, 1i64..=6), m), n)
        })
    ) {
        let rows: Vec<Vec<Rational>> =
            rows.iter().map(|r| r.iter().map(|&(a, b)| ratio(a, b)).collect()).collect();
        let inst = Instance::from_rows(rows).unwrap();
        let text = serialize_instance(&inst);
        let back = parse_instance_str(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(serialize_instance(&back), text);
    }

    #[test]
    fn generators_are_deterministic(seed in any::<u64>(), n in 2usize..=4, m in 1usize..=6) {
        let p = GenParams::new(n, m).with_k(3);
        for class in [GenClass::General, GenClass::TwoType, GenClass::Bivalued, GenClass::TwoAry, GenClass::Identical] {
            let a = generate(class, &p, seed).unwrap();
            prop_assert_eq!(&a, &generate(class, &p, seed).unwrap());
            let c = classify(&a);
            match class {
                GenClass::Bivalued => prop_assert!(c.bivalued.is_some()),
                GenClass::TwoAry => prop_assert!(c.two_ary.is_some()),
                GenClass::Identical => prop_assert!(c.identical),
                GenClass::TwoType => prop_assert!(c.two_type),
                _ => {}
            }
        }
    }
}
