//! Brute-force witnesses for differential testing.
//!
//! Nothing here shares code with the symbolic engine: nets are matched by
//! action name, Duplicator replies are tabulated directly from the
//! transition lists and periodic colourings are re-expanded from scratch.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::coloring::PeriodicColoring;
use crate::net::{Config, Ocn, StateId};

/// Outcome of a game cut off after a number of rounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundedVerdict {
    /// Spoiler forces Duplicator stuck within this many rounds (least such).
    SpoilerWinsWithin(u32),
    /// Duplicator is not stuck within this many rounds.
    DuplicatorSurvives(u32),
}

impl BoundedVerdict {
    pub fn spoiler_wins(self) -> bool {
        matches!(self, BoundedVerdict::SpoilerWinsWithin(_))
    }
}

/// Least number of rounds Spoiler needs from every position of a counter box.
///
/// Ranks are exact for the round-bounded game from any position whose
/// counters plus the largest per-round gain, times the rank, stay inside
/// the box.
pub struct RoundTable {
    spoiler_states: usize,
    duplicator_states: usize,
    box1: u64,
    box2: u64,
    rank: Vec<u32>,
}

/// Duplicator's answers to one action from one configuration.
#[derive(Debug, Clone, Default)]
struct Replies {
    targets: Vec<(StateId, u64)>,
    /// Some answer leaves the box; the move is then never counted as won.
    escapes: bool,
}

impl RoundTable {
    /// Strong game: Duplicator answers with one transition carrying the same
    /// action name.
    pub fn strong(spoiler: &Ocn, duplicator: &Ocn, box1: u64, box2: u64, rounds: u32) -> RoundTable {
        let names = action_names(spoiler);
        let replies = |q2: StateId, n2: u64, a: &str| -> Replies {
            let mut r = Replies::default();
            let mut seen = HashSet::new();
            for t in duplicator.transitions() {
                if t.src != q2 || duplicator.action_name(t.action) != a {
                    continue;
                }
                let m = n2 as i64 + t.delta as i64;
                if m < 0 {
                    continue;
                }
                if m as u64 > box2 {
                    r.escapes = true;
                } else if seen.insert((t.dst, m as u64)) {
                    r.targets.push((t.dst, m as u64));
                }
            }
            r
        };
        Self::solve(spoiler, duplicator, &names, box1, box2, rounds, replies)
    }

    /// Weak game: Duplicator answers an action `a` with `tau^i a tau^j`,
    /// and `tau` with `tau^i`, where `i, j <= tau_cap`.
    pub fn weak(
        spoiler: &Ocn,
        duplicator: &Ocn,
        tau: &str,
        box1: u64,
        box2: u64,
        rounds: u32,
        tau_cap: u32,
    ) -> RoundTable {
        let names = action_names(spoiler);
        let tau_closure = |start: Vec<(StateId, u64)>| -> (Vec<(StateId, u64)>, bool) {
            let mut seen: HashSet<(StateId, u64)> = start.iter().copied().collect();
            let mut layer = start;
            let mut escapes = false;
            for _ in 0..tau_cap {
                let mut next = Vec::new();
                for &(q, n) in &layer {
                    for t in duplicator.transitions() {
                        if t.src != q || duplicator.action_name(t.action) != tau {
                            continue;
                        }
                        let m = n as i64 + t.delta as i64;
                        if m < 0 {
                            continue;
                        }
                        if m as u64 > box2 {
                            escapes = true;
                        } else if seen.insert((t.dst, m as u64)) {
                            next.push((t.dst, m as u64));
                        }
                    }
                }
                layer = next;
            }
            (seen.into_iter().collect(), escapes)
        };
        let replies = |q2: StateId, n2: u64, a: &str| -> Replies {
            let (pre, mut escapes) = tau_closure(vec![(q2, n2)]);
            if a == tau {
                let mut targets = pre;
                targets.sort_unstable();
                return Replies { targets, escapes };
            }
            let mut mid = HashSet::new();
            for &(q, n) in &pre {
                for t in duplicator.transitions() {
                    if t.src != q || duplicator.action_name(t.action) != a {
                        continue;
                    }
                    let m = n as i64 + t.delta as i64;
                    if m < 0 {
                        continue;
                    }
                    if m as u64 > box2 {
                        escapes = true;
                    } else {
                        mid.insert((t.dst, m as u64));
                    }
                }
            }
            let (mut targets, e) = tau_closure(mid.into_iter().collect());
            targets.sort_unstable();
            Replies {
                targets,
                escapes: escapes || e,
            }
        };
        Self::solve(spoiler, duplicator, &names, box1, box2, rounds, replies)
    }

    fn solve(
        spoiler: &Ocn,
        duplicator: &Ocn,
        names: &[String],
        box1: u64,
        box2: u64,
        rounds: u32,
        replies: impl Fn(StateId, u64, &str) -> Replies,
    ) -> RoundTable {
        let ns = spoiler.state_count();
        let nd = duplicator.state_count();
        let (w1, w2) = (box1 as usize + 1, box2 as usize + 1);
        let pos = |q: StateId, q2: StateId, n: u64, n2: u64| ((q * nd + q2) * w1 + n as usize) * w2 + n2 as usize;
        let total = ns * nd * w1 * w2;

        // Duplicator's answer table and its reverse
        let action_index: HashMap<&str, usize> =
            names.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let na = names.len();
        let mut fwd: Vec<Replies> = Vec::with_capacity(nd * w2 * na);
        for q2 in 0..nd {
            for n2 in 0..=box2 {
                for a in names {
                    fwd.push(replies(q2, n2, a));
                }
            }
        }
        let fidx = |q2: StateId, n2: u64, a: usize| (q2 * w2 + n2 as usize) * na + a;
        let mut rev: HashMap<(StateId, u64, usize), Vec<(StateId, u64)>> = HashMap::new();
        for q2 in 0..nd {
            for n2 in 0..=box2 {
                for a in 0..na {
                    for &(r2, m2) in &fwd[fidx(q2, n2, a)].targets {
                        rev.entry((r2, m2, a)).or_default().push((q2, n2));
                    }
                }
            }
        }

        // Spoiler moves per state: (action index, delta, target)
        let moves: Vec<Vec<(usize, i64, StateId)>> = (0..ns)
            .map(|q| {
                spoiler
                    .transitions()
                    .iter()
                    .filter(|t| t.src == q)
                    .map(|t| (action_index[spoiler.action_name(t.action)], t.delta as i64, t.dst))
                    .collect()
            })
            .collect();
        let mut into: Vec<Vec<(StateId, usize)>> = vec![Vec::new(); ns];
        for (q, ms) in moves.iter().enumerate() {
            for (i, &(_, _, dst)) in ms.iter().enumerate() {
                into[dst].push((q, i));
            }
        }

        let mut rank = vec![u32::MAX; total];
        let mut pending: HashMap<(usize, usize), u32> = HashMap::new();
        let mut queue = VecDeque::new();
        for q in 0..ns {
            for q2 in 0..nd {
                for n in 0..=box1 {
                    for n2 in 0..=box2 {
                        for &(a, d, _) in &moves[q] {
                            let m = n as i64 + d;
                            if m < 0 || m as u64 > box1 {
                                continue;
                            }
                            let r = &fwd[fidx(q2, n2, a)];
                            if r.targets.is_empty() && !r.escapes {
                                let p = pos(q, q2, n, n2);
                                if rank[p] == u32::MAX && rounds >= 1 {
                                    rank[p] = 1;
                                    queue.push_back((q, q2, n, n2));
                                }
                            }
                        }
                    }
                }
            }
        }
        while let Some((p, p2, m, m2)) = queue.pop_front() {
            let r = rank[pos(p, p2, m, m2)];
            if r >= rounds {
                continue;
            }
            for &(q, i) in &into[p] {
                let (a, d, _) = moves[q][i];
                let n = m as i64 - d;
                if n < 0 || n as u64 > box1 {
                    continue;
                }
                let n = n as u64;
                let Some(sources) = rev.get(&(p2, m2, a)) else {
                    continue;
                };
                for &(q2, n2) in sources {
                    let src = pos(q, q2, n, n2);
                    if rank[src] != u32::MAX {
                        continue;
                    }
                    let f = &fwd[fidx(q2, n2, a)];
                    if f.escapes {
                        continue;
                    }
                    let left = pending.entry((src, i)).or_insert(f.targets.len() as u32);
                    *left -= 1;
                    if *left == 0 {
                        rank[src] = r + 1;
                        queue.push_back((q, q2, n, n2));
                    }
                }
            }
        }
        RoundTable {
            spoiler_states: ns,
            duplicator_states: nd,
            box1,
            box2,
            rank,
        }
    }

    /// Verdict for `rounds` rounds; `None` outside the box.
    pub fn verdict(&self, q: StateId, q2: StateId, n: u64, n2: u64, rounds: u32) -> Option<BoundedVerdict> {
        if q >= self.spoiler_states || q2 >= self.duplicator_states || n > self.box1 || n2 > self.box2 {
            return None;
        }
        let (w1, w2) = (self.box1 as usize + 1, self.box2 as usize + 1);
        let r = self.rank[((q * self.duplicator_states + q2) * w1 + n as usize) * w2 + n2 as usize];
        Some(if r <= rounds {
            BoundedVerdict::SpoilerWinsWithin(r)
        } else {
            BoundedVerdict::DuplicatorSurvives(rounds)
        })
    }
}

fn action_names(net: &Ocn) -> Vec<String> {
    net.actions().iter().map(|a| a.to_string()).collect()
}

/// Round-bounded strong simulation game from one position.
pub fn bounded_round_winner(
    spoiler: &Ocn,
    duplicator: &Ocn,
    (left, right): (Config, Config),
    rounds: u32,
) -> BoundedVerdict {
    let r = rounds as u64;
    let t = RoundTable::strong(spoiler, duplicator, left.counter + r, right.counter + r, rounds);
    t.verdict(left.state, right.state, left.counter, right.counter, rounds)
        .expect("start inside the box")
}

/// Round-bounded weak simulation game whose Duplicator tau-segments have
/// length at most `tau_cap`.
pub fn bounded_weak_round_winner(
    spoiler: &Ocn,
    duplicator: &Ocn,
    tau: &str,
    (left, right): (Config, Config),
    rounds: u32,
    tau_cap: u32,
) -> BoundedVerdict {
    let r = rounds as u64;
    let gain = 2 * tau_cap as u64 + 1;
    let t = RoundTable::weak(
        spoiler,
        duplicator,
        tau,
        left.counter + r,
        right.counter + r * gain,
        rounds,
        tau_cap,
    );
    t.verdict(left.state, right.state, left.counter, right.counter, rounds)
        .expect("start inside the box")
}

/// Result of [`check_candidate`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CandidateReport {
    /// Related window points with a Spoiler move no answer keeps related.
    pub yes_violations: Vec<(StateId, StateId, u64, u64)>,
    /// Unrelated window points; each must be a Spoiler win.
    pub negatives: Vec<(StateId, StateId, u64, u64)>,
}

/// One described pair, re-derived from the stored numbers.
struct Strip {
    rho: i64,
    rho2: i64,
    w: i64,
    /// Levels count along `n'` (true) or along `n` (false).
    upward: bool,
    top_j: i64,
    top_jk: i64,
    k: i64,
    members: HashSet<(i64, i64)>,
}

impl Strip {
    fn offset(&self, n: i64, n2: i64) -> i64 {
        self.rho * n2 - self.rho2 * n
    }

    fn level(&self, n: i64, n2: i64) -> i64 {
        if self.upward {
            n2
        } else {
            n
        }
    }

    fn holds(&self, n: i64, n2: i64) -> bool {
        let d = self.offset(n, n2);
        if d > self.w {
            return true;
        }
        if d < -self.w {
            return false;
        }
        let (mut n, mut n2) = (n, n2);
        while self.level(n, n2) > self.top_jk {
            n -= self.k * self.rho;
            n2 -= self.k * self.rho2;
        }
        self.members.contains(&(n, n2))
    }
}

fn strips(pc: &PeriodicColoring, periods: u64) -> HashMap<(StateId, StateId), Strip> {
    let (l0, l02) = (pc.l0.0 as i64, pc.l0.1 as i64);
    pc.pairs
        .iter()
        .map(|p| {
            let (rho, rho2) = (p.slope.rho(), p.slope.rho_prime());
            let w = p.c as i64 * (rho + rho2);
            // the corner sits below the strip exactly when the strip leaves upward
            let upward = rho * l02 - rho2 * l0 < 0;
            let (base, step) = if upward { (l02, rho2) } else { (l0, rho) };
            let (j, k) = (p.j as i64, p.k as i64);
            let members = p
                .init
                .iter()
                .chain(&p.aper)
                .chain(&p.per)
                .map(|&(a, b)| (a as i64, b as i64))
                .collect();
            let s = Strip {
                rho,
                rho2,
                w,
                upward,
                top_j: base + (j + periods as i64 * k) * step,
                top_jk: base + (j + k) * step,
                k,
                members,
            };
            (p.pair, s)
        })
        .collect()
}

/// Checks the simulation condition at every belt point of every described
/// pair up to `rect(j + periods * k)`, and lists the unrelated ones.
pub fn check_candidate(spoiler: &Ocn, duplicator: &Ocn, pc: &PeriodicColoring, periods: u64) -> CandidateReport {
    let strips = strips(pc, periods);
    let mut report = CandidateReport::default();
    for p in &pc.pairs {
        let s = &strips[&p.pair];
        let (q, q2) = p.pair;
        // scan a box covering every level up to the top
        let reach = s.top_j;
        let (max_n, max_n2) = if s.upward {
            ((s.rho * reach + s.w) / s.rho2.max(1) + 1, reach)
        } else {
            (reach, (s.rho2 * reach + s.w) / s.rho.max(1) + 1)
        };
        for n in 0..=max_n {
            for n2 in 0..=max_n2 {
                let d = s.offset(n, n2);
                if d.abs() > s.w || s.level(n, n2) > s.top_j {
                    continue;
                }
                let point = (q, q2, n as u64, n2 as u64);
                if !s.holds(n, n2) {
                    report.negatives.push(point);
                    continue;
                }
                let answered = spoiler.transitions().iter().filter(|t| t.src == q).all(|t| {
                    let m = n + t.delta as i64;
                    if m < 0 {
                        return true;
                    }
                    let a = spoiler.action_name(t.action);
                    duplicator.transitions().iter().any(|u| {
                        let m2 = n2 + u.delta as i64;
                        u.src == q2
                            && duplicator.action_name(u.action) == a
                            && m2 >= 0
                            && strips
                                .get(&(t.dst, u.dst))
                                .is_some_and(|next| next.holds(m, m2))
                    })
                });
                if !answered {
                    report.yes_violations.push(point);
                }
            }
        }
    }
    report.yes_violations.sort_unstable();
    report.negatives.sort_unstable();
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::normalize_pair;

    fn single(name: &str, st: &str, action: &str, delta: i64) -> Ocn {
        Ocn::new(name, &[st], &[action], &[(st, action, delta, st)]).unwrap()
    }

    fn at(n: u64) -> Config {
        Config { state: 0, counter: n }
    }

    #[test]
    fn a_versus_a() {
        let a = single("A", "p", "a", -1);
        let (sp, du) = normalize_pair(&a, &a).unwrap();
        assert_eq!(
            bounded_round_winner(&sp, &du, (at(1), at(0)), 2),
            BoundedVerdict::SpoilerWinsWithin(1)
        );
        assert_eq!(
            bounded_round_winner(&sp, &du, (at(5), at(3)), 10),
            BoundedVerdict::SpoilerWinsWithin(4)
        );
        assert_eq!(
            bounded_round_winner(&sp, &du, (at(0), at(0)), 30),
            BoundedVerdict::DuplicatorSurvives(30)
        );
        assert_eq!(
            bounded_round_winner(&sp, &du, (at(3), at(5)), 40),
            BoundedVerdict::DuplicatorSurvives(40)
        );
        assert_eq!(
            bounded_round_winner(&sp, &du, (at(9), at(0)), 0),
            BoundedVerdict::DuplicatorSurvives(0)
        );
    }

    #[test]
    fn weak_pumping() {
        let sp = Ocn::new("S", &["p"], &["a", "tau"], &[("p", "a", -1, "p")]).unwrap();
        let du = Ocn::new(
            "D",
            &["q"],
            &["a", "tau"],
            &[("q", "tau", 1, "q"), ("q", "a", -1, "q")],
        )
        .unwrap();
        assert_eq!(
            bounded_weak_round_winner(&sp, &du, "tau", (at(5), at(0)), 12, 8),
            BoundedVerdict::DuplicatorSurvives(12)
        );
        // without tau steps Duplicator at 0 cannot answer
        assert_eq!(
            bounded_weak_round_winner(&sp, &du, "tau", (at(5), at(0)), 12, 0),
            BoundedVerdict::SpoilerWinsWithin(1)
        );
    }

    #[test]
    fn weak_unmatched_action() {
        let sp = single("S", "p", "a", 0);
        let du = Ocn::new("D", &["q"], &["a"], &[]).unwrap();
        assert_eq!(
            bounded_weak_round_winner(&sp, &du, "tau", (at(0), at(3)), 5, 2),
            BoundedVerdict::SpoilerWinsWithin(1)
        );
    }

    #[test]
    fn weak_without_tau_is_strong() {
        let a = single("A", "p", "a", -1);
        let (sp, du) = normalize_pair(&a, &a).unwrap();
        for n in 0..6 {
            for n2 in 0..6 {
                let pos = (at(n), at(n2));
                assert_eq!(
                    bounded_weak_round_winner(&sp, &du, "tau", pos, 12, 0),
                    bounded_round_winner(&sp, &du, pos, 12)
                );
            }
        }
    }

    #[test]
    fn ranks_grow_with_spoiler_counter() {
        let a = single("A", "p", "a", -1);
        let (sp, du) = normalize_pair(&a, &a).unwrap();
        let t = RoundTable::strong(&sp, &du, 40, 40, 40);
        for n in 0..20 {
            for n2 in 0..20 {
                let v = t.verdict(0, 0, n, n2, 20).unwrap();
                if v.spoiler_wins() {
                    assert!(t.verdict(0, 0, n + 1, n2, 20).unwrap().spoiler_wins());
                }
                assert_eq!(v.spoiler_wins(), n > n2);
            }
        }
    }
}
