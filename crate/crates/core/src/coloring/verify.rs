//! Local check of a colouring against the one-round simulation condition,
//! and Spoiler confirmation of its negative points.

use super::periodic::{Expanded, PeriodicColoring};
use super::{Point, SpoilerAttractor, Zone};
use crate::error::{Error, Result};
use crate::net::{build_product, Ocn};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerificationReport {
    /// Related points where some Spoiler move has no reply staying related.
    pub yes_violations: Vec<Point>,
    /// Unrelated points where no Spoiler win was found within the cap.
    pub no_violations: Vec<Point>,
}

impl VerificationReport {
    pub fn is_clean(&self) -> bool {
        self.yes_violations.is_empty() && self.no_violations.is_empty()
    }
}

/// Belt points of every described pair up to `rect(j + 2k)`: the stored
/// points together with one further period of translates.
pub(crate) fn window(pc: &PeriodicColoring, ex: &Expanded) -> Vec<Point> {
    let mut out = Vec::new();
    for p in &pc.pairs {
        let band = ex.band(p.pair).expect("described pair");
        let top = band.rect_level(p.j as i64 + 2 * p.k as i64);
        for level in 0..=top {
            let (lo, hi) = band.row(level);
            for x in lo..=hi {
                let (n, n2) = band.point(level, x);
                debug_assert_eq!(band.belt.zone(n, n2), Zone::Inside);
                out.push((p.pair.0, p.pair.1, n as u64, n2 as u64));
            }
        }
    }
    out
}

/// Whether Duplicator has a reply to every Spoiler move from the point that
/// stays inside the described relation.
pub(crate) fn locally_closed(
    spoiler: &Ocn,
    duplicator: &Ocn,
    ex: &Expanded,
    (q, q2, n, n2): Point,
) -> Result<bool> {
    let (n, n2) = (n as i64, n2 as i64);
    for &si in spoiler.outgoing(q) {
        let t = spoiler.transition(si);
        let m = n + t.delta as i64;
        if m < 0 {
            continue;
        }
        let mut matched = false;
        for &di in duplicator.outgoing_on(q2, t.action) {
            let u = duplicator.transition(di);
            let m2 = n2 + u.delta as i64;
            if m2 < 0 {
                continue;
            }
            let inside = ex.contains((t.dst, u.dst), m, m2).ok_or_else(|| {
                Error::Internal(format!("pair ({}, {}) is not described", t.dst, u.dst))
            })?;
            if inside {
                matched = true;
                break;
            }
        }
        if !matched {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks a colouring over normalised nets.
///
/// Every related belt point up to `rect(j + 2k)` must satisfy the
/// simulation condition against the expanded relation; beyond that the
/// neighbourhoods repeat. Every unrelated belt point in the same window must
/// be a Spoiler win within `spoiler_depth_cap` rounds.
pub fn verify_coloring(
    spoiler: &Ocn,
    duplicator: &Ocn,
    pc: &PeriodicColoring,
    spoiler_depth_cap: u32,
) -> Result<VerificationReport> {
    let ex = Expanded::new(pc)?;
    let (yes_violations, negatives) = split_window(spoiler, duplicator, pc, &ex)?;
    let mut report = VerificationReport {
        yes_violations,
        no_violations: Vec::new(),
    };
    if !negatives.is_empty() {
        let g = build_product(spoiler, duplicator)?;
        let mut nodes = vec![false; g.node_count()];
        for p in &pc.pairs {
            nodes[g.node(p.pair.0, p.pair.1)] = true;
        }
        let far = negatives.iter().map(|p| p.2.max(p.3)).max().unwrap_or(0);
        let a = SpoilerAttractor::compute(
            &g,
            &nodes,
            far + spoiler_depth_cap as u64,
            spoiler_depth_cap,
        );
        for pt in negatives {
            let node = g.node(pt.0, pt.1);
            if !a.wins_within(node, pt.2, pt.3, spoiler_depth_cap) {
                report.no_violations.push(pt);
            }
        }
    }
    report.yes_violations.sort_unstable();
    report.no_violations.sort_unstable();
    Ok(report)
}

/// Related points of the window violating the simulation condition, and the
/// unrelated points of the window.
pub(crate) fn split_window(
    spoiler: &Ocn,
    duplicator: &Ocn,
    pc: &PeriodicColoring,
    ex: &Expanded,
) -> Result<(Vec<Point>, Vec<Point>)> {
    let mut bad = Vec::new();
    let mut negatives = Vec::new();
    for pt in window(pc, ex) {
        let (q, q2, n, n2) = pt;
        if ex.contains((q, q2), n as i64, n2 as i64) == Some(true) {
            if !locally_closed(spoiler, duplicator, ex, pt)? {
                bad.push(pt);
            }
        } else {
            negatives.push(pt);
        }
    }
    Ok((bad, negatives))
}
