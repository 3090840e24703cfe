//! The finite description of a colouring and its expansion to all points.

use std::collections::{HashMap, HashSet};

use super::{Band, Belt, Zone};
use crate::error::{Error, Result};
use crate::geometry::Slope;
use crate::net::StateId;

/// Description of the relation for one state pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairColoring {
    pub pair: (StateId, StateId),
    pub slope: Slope,
    pub c: u64,
    pub bound: u64,
    pub j: u64,
    pub k: u64,
    /// Related belt points inside the initial rectangle.
    pub init: Vec<(u64, u64)>,
    /// Related belt points beyond the rectangle up to `rect(j)`.
    pub aper: Vec<(u64, u64)>,
    /// Related belt points in `rect(j + k)` but not in `rect(j)`.
    pub per: Vec<(u64, u64)>,
}

impl PairColoring {
    pub fn belt(&self) -> Belt {
        Belt {
            pair: self.pair,
            slope: self.slope,
            c: self.c,
            bound: self.bound,
        }
    }
}

/// Semilinear description of a relation over all listed state pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicColoring {
    pub l0: (u64, u64),
    pub pairs: Vec<PairColoring>,
}

/// Membership oracle for the relation a [`PeriodicColoring`] describes.
#[derive(Debug, Clone)]
pub struct Expanded {
    index: HashMap<(StateId, StateId), usize>,
    bands: Vec<Band>,
    periods: Vec<(i64, i64)>,
    members: Vec<HashSet<(i64, i64)>>,
}

impl Expanded {
    pub fn new(pc: &PeriodicColoring) -> Result<Expanded> {
        let l0 = (pc.l0.0 as i64, pc.l0.1 as i64);
        let mut e = Expanded {
            index: HashMap::new(),
            bands: Vec::new(),
            periods: Vec::new(),
            members: Vec::new(),
        };
        for p in &pc.pairs {
            if p.k == 0 {
                return Err(Error::Internal(format!("zero period for pair {:?}", p.pair)));
            }
            e.index.insert(p.pair, e.bands.len());
            e.bands.push(Band::new(p.belt(), l0)?);
            e.periods.push((p.j as i64, p.k as i64));
            let set = p
                .init
                .iter()
                .chain(&p.aper)
                .chain(&p.per)
                .map(|&(n, n2)| (n as i64, n2 as i64))
                .collect();
            e.members.push(set);
        }
        Ok(e)
    }

    pub fn band(&self, pair: (StateId, StateId)) -> Option<&Band> {
        self.index.get(&pair).map(|&i| &self.bands[i])
    }

    pub fn period(&self, pair: (StateId, StateId)) -> Option<(i64, i64)> {
        self.index.get(&pair).map(|&i| self.periods[i])
    }

    /// `None` when the pair is not described.
    pub fn contains(&self, pair: (StateId, StateId), n: i64, n2: i64) -> Option<bool> {
        let i = *self.index.get(&pair)?;
        let band = &self.bands[i];
        match band.belt.zone(n, n2) {
            Zone::Above => return Some(true),
            Zone::Below => return Some(false),
            Zone::Inside => {}
        }
        let (j, k) = self.periods[i];
        let top = band.rect_level(j + k);
        let level = band.level(n, n2);
        let (mut n, mut n2) = (n, n2);
        if level > top {
            let period = k * band.step;
            let m = (level - top + period - 1) / period;
            let (sx, sy) = band.shift();
            n -= m * k * sx;
            n2 -= m * k * sy;
        }
        Some(self.members[i].contains(&(n, n2)))
    }
}
