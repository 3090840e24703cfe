//! Cross-sections of a coloured belt and detection of their repetition.

use super::periodic::Expanded;
use crate::net::StateId;

/// Related belt points on two consecutive levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossSection {
    pub level: i64,
    pub points: Vec<(i64, i64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EqualSections {
    pub level1: i64,
    pub level2: i64,
    /// `level2 - level1` in slope steps: the second section is the first
    /// shifted by `k * slope`.
    pub k: i64,
}

/// Cross-section of `pair` at `level`; `None` if the pair is not described.
pub fn cross_section(ex: &Expanded, pair: (StateId, StateId), level: i64) -> Option<CrossSection> {
    let band = ex.band(pair)?;
    let mut points = Vec::new();
    for l in [level, level + 1] {
        let (lo, hi) = band.row(l);
        for x in lo..=hi {
            let (n, n2) = band.point(l, x);
            if ex.contains(pair, n, n2)? {
                points.push((n, n2));
            }
        }
    }
    Some(CrossSection { level, points })
}

/// First pair of levels in `[from, to]` whose cross-sections differ by a
/// multiple of the slope.
pub fn find_equal_cross_sections(
    ex: &Expanded,
    pair: (StateId, StateId),
    from: i64,
    to: i64,
) -> Option<EqualSections> {
    let band = *ex.band(pair)?;
    let (sx, sy) = band.shift();
    let sections: Vec<CrossSection> = (from..=to)
        .map(|l| cross_section(ex, pair, l))
        .collect::<Option<_>>()?;
    for (i2, s2) in sections.iter().enumerate() {
        let mut i1 = i2 as i64 - band.step;
        while i1 >= 0 {
            let s1 = &sections[i1 as usize];
            let m = (s2.level - s1.level) / band.step;
            let same = s1.points.len() == s2.points.len()
                && s1
                    .points
                    .iter()
                    .zip(&s2.points)
                    .all(|(a, b)| (a.0 + m * sx, a.1 + m * sy) == *b);
            if same {
                return Some(EqualSections {
                    level1: s1.level,
                    level2: s2.level,
                    k: m,
                });
            }
            i1 -= band.step;
        }
    }
    None
}
