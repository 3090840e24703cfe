#![allow(dead_code)]

use ocnsim::net::Ocn;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random net over `actions` with `states` states named `{prefix}0..`.
pub fn random_net(rng: &mut ChaCha8Rng, name: &str, prefix: &str, states: usize, actions: &[&str], density: f64) -> Ocn {
    let names: Vec<String> = (0..states).map(|i| format!("{prefix}{i}")).collect();
    let mut ts = Vec::new();
    for src in &names {
        for a in actions {
            for d in -1..=1 {
                for dst in &names {
                    if rng.gen_bool(density) {
                        ts.push((src.clone(), a.to_string(), d, dst.clone()));
                    }
                }
            }
        }
    }
    let ts: Vec<(&str, &str, i64, &str)> = ts
        .iter()
        .map(|(s, a, d, t)| (s.as_str(), a.as_str(), *d, t.as_str()))
        .collect();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    Ocn::new(name, &names, actions, &ts).unwrap()
}

/// A random pair as used by the differential suites.
pub fn random_pair(seed: u64) -> (Ocn, Ocn) {
    let mut r = rng(seed);
    let actions: &[&str] = if r.gen_bool(0.5) { &["a"] } else { &["a", "b"] };
    let ns = r.gen_range(1..=3);
    let nd = r.gen_range(1..=3);
    let density = r.gen_range(0.08..0.3);
    let sp = random_net(&mut r, "S", "s", ns, actions, density);
    let du = random_net(&mut r, "D", "d", nd, actions, density);
    (sp, du)
}

pub fn single(name: &str, state: &str, delta: i64) -> Ocn {
    Ocn::new(name, &[state], &["a"], &[(state, "a", delta, state)]).unwrap()
}

/// A random pair for weak simulation; Duplicator's tau-transitions only
/// lead to higher-numbered states, so its tau-paths are shorter than its
/// state count.
pub fn random_weak_pair(seed: u64) -> (Ocn, Ocn) {
    let mut r = rng(seed);
    let actions: &[&str] = &["a", "tau"];
    let ns = r.gen_range(1..=2);
    let nd = r.gen_range(1..=3);
    let density = r.gen_range(0.08..0.3);
    let sp = random_net(&mut r, "S", "s", ns, actions, density);
    let du = random_net(&mut r, "D", "d", nd, actions, density);
    let ts: Vec<(&str, &str, i64, &str)> = du
        .transitions()
        .iter()
        .filter(|t| du.action_name(t.action) != "tau" || t.src < t.dst)
        .map(|t| (du.state_name(t.src), du.action_name(t.action), t.delta as i64, du.state_name(t.dst)))
        .collect();
    let states: Vec<&str> = du.states().iter().map(String::as_str).collect();
    let du = Ocn::new("D", &states, actions, &ts).unwrap();
    (sp, du)
}

/// A random pair for weak simulation whose Duplicator may pump with tau.
pub fn random_pumping_pair(seed: u64) -> (Ocn, Ocn) {
    let mut r = rng(seed ^ 0x5eed);
    let actions: &[&str] = &["a", "tau"];
    let ns = r.gen_range(1..=2);
    let nd = r.gen_range(1..=2);
    let density = r.gen_range(0.1..0.3);
    let sp = random_net(&mut r, "S", "s", ns, actions, density);
    let du = random_net(&mut r, "D", "d", nd, actions, density);
    (sp, du)
}
