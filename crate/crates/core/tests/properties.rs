mod common;

use std::collections::BTreeSet;

use ocnsim::coloring::{verify_coloring, StrongOptions, StrongSolver, Verdict};
use ocnsim::format::{parse_net, print_net};
use ocnsim::net::{normalize_pair, Ocn};
use ocnsim::oracle::{check_candidate, RoundTable};
use proptest::prelude::*;

fn net_strategy() -> impl Strategy<Value = Ocn> {
    (1usize..=4, 1usize..=3)
        .prop_flat_map(|(ns, na)| {
            let t = (0..ns, 0..na, -1i64..=1, 0..ns);
            (Just(ns), Just(na), prop::collection::vec(t, 0..12))
        })
        .prop_map(|(ns, na, ts)| {
            let states: Vec<String> = (0..ns).map(|i| format!("s{i}")).collect();
            let actions: Vec<String> = (0..na).map(|i| format!("a{i}")).collect();
            let ts: Vec<(&str, &str, i64, &str)> = ts
                .iter()
                .map(|&(s, a, d, t)| (states[s].as_str(), actions[a].as_str(), d, states[t].as_str()))
                .collect();
            let states: Vec<&str> = states.iter().map(String::as_str).collect();
            let actions: Vec<&str> = actions.iter().map(String::as_str).collect();
            Ocn::new("N", &states, &actions, &ts).unwrap()
        })
}

proptest! {
    #[test]
    fn print_then_parse_is_identity(net in net_strategy()) {
        let text = print_net(&net);
        let back = parse_net(&text).unwrap();
        prop_assert_eq!(back.states(), net.states());
        prop_assert_eq!(back.actions(), net.actions());
        prop_assert_eq!(back.transitions(), net.transitions());
        prop_assert_eq!(print_net(&back), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// More counter never hurts Spoiler and never helps it against a
    /// larger Duplicator counter.
    #[test]
    fn oracle_is_monotone(seed in 0u64..1000) {
        let (sp, du) = common::random_pair(seed);
        let (nsp, ndu) = normalize_pair(&sp, &du).unwrap();
        let rounds = 40;
        let t = RoundTable::strong(&nsp, &ndu, 12 + rounds as u64, 12 + rounds as u64, rounds);
        for q in 0..sp.state_count() {
            for q2 in 0..du.state_count() {
                for n in 0..12 {
                    for n2 in 0..12 {
                        let here = t.verdict(q, q2, n, n2, rounds).unwrap().spoiler_wins();
                        let more = t.verdict(q, q2, n + 1, n2, rounds).unwrap().spoiler_wins();
                        let other = t.verdict(q, q2, n, n2 + 1, rounds).unwrap().spoiler_wins();
                        prop_assert!(!here || more);
                        prop_assert!(!other || here);
                    }
                }
            }
        }
    }

    /// The relation is downward closed in Spoiler's counter and upward
    /// closed in Duplicator's.
    #[test]
    fn relation_is_monotone(seed in 0u64..1000) {
        let (sp, du) = common::random_pair(seed);
        let mut s = StrongSolver::new(&sp, &du, StrongOptions::default()).unwrap();
        for q in 0..sp.state_count() {
            for q2 in 0..du.state_count() {
                for n in 0..20 {
                    for n2 in 0..20 {
                        if s.query(q, q2, n + 1, n2).unwrap() == Verdict::True {
                            prop_assert_eq!(s.query(q, q2, n, n2).unwrap(), Verdict::True);
                        }
                        if s.query(q, q2, n, n2).unwrap() == Verdict::True {
                            prop_assert_eq!(s.query(q, q2, n, n2 + 1).unwrap(), Verdict::True);
                        }
                    }
                }
            }
        }
    }
}

/// The engine's window checker and the independent one agree on colourings
/// with points added or removed.
#[test]
fn checkers_agree_on_mutated_colourings() {
    use rand::Rng;
    let mut r = common::rng(11);
    let mut done = 0;
    let mut seed = 0;
    while done < 1000 {
        let (sp, du) = common::random_pair(seed);
        seed += 1;
        let (nsp, ndu) = normalize_pair(&sp, &du).unwrap();
        let mut solver = StrongSolver::new(&sp, &du, StrongOptions::default()).unwrap();
        let pc = solver.certify().unwrap().expect("certified").coloring.clone();
        for _ in 0..10 {
            let mut m = pc.clone();
            let i = r.gen_range(0..m.pairs.len());
            let p = &mut m.pairs[i];
            let pick = r.gen_range(0..3);
            let target = match pick {
                0 => &mut p.init,
                1 => &mut p.aper,
                _ => &mut p.per,
            };
            let v = target.clone();
            if !v.is_empty() && r.gen_bool(0.5) {
                target.remove(r.gen_range(0..v.len()));
            } else {
                let (a, b) = v.first().copied().unwrap_or((0, 0));
                let point = (a + r.gen_range(0..3), b + r.gen_range(0..3));
                if !target.contains(&point) {
                    target.push(point);
                }
            }
            // both must agree on which window points violate the condition
            let Ok(engine) = verify_coloring(&nsp, &ndu, &m, 0) else { continue };
            let independent = check_candidate(&nsp, &ndu, &m, 2);
            let a: BTreeSet<_> = engine.yes_violations.iter().copied().collect();
            let b: BTreeSet<_> = independent.yes_violations.iter().copied().collect();
            assert_eq!(a, b, "seed {}", seed - 1);
            let a: BTreeSet<_> = engine.no_violations.iter().copied().collect();
            let b: BTreeSet<_> = independent.negatives.iter().copied().collect();
            assert_eq!(a, b, "seed {}", seed - 1);
            done += 1;
        }
    }
}
