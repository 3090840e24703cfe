//! JSON form of a periodic colouring.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::periodic::{PairColoring, PeriodicColoring};
use crate::error::{Error, Result};
use crate::geometry::Slope;
use crate::net::Ocn;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairDocument {
    pub q: String,
    #[serde(rename = "q'")]
    pub q_dup: String,
    pub slope: Slope,
    pub c: u64,
    pub belt_constant: u64,
    pub j: u64,
    pub k: u64,
    pub init: Vec<[u64; 2]>,
    pub aper: Vec<[u64; 2]>,
    pub per: Vec<[u64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringDocument {
    pub schema: u32,
    pub l0: [u64; 2],
    pub pairs: Vec<PairDocument>,
}

fn points(v: &[(u64, u64)]) -> Vec<[u64; 2]> {
    let mut out: Vec<[u64; 2]> = v.iter().map(|&(a, b)| [a, b]).collect();
    out.sort_unstable();
    out
}

impl PairDocument {
    pub fn new(p: &PairColoring, spoiler: &Ocn, duplicator: &Ocn) -> PairDocument {
        PairDocument {
            q: spoiler.state_name(p.pair.0).to_owned(),
            q_dup: duplicator.state_name(p.pair.1).to_owned(),
            slope: p.slope,
            c: p.c,
            belt_constant: p.bound,
            j: p.j,
            k: p.k,
            init: points(&p.init),
            aper: points(&p.aper),
            per: points(&p.per),
        }
    }
}

impl ColoringDocument {
    pub fn new(pc: &PeriodicColoring, spoiler: &Ocn, duplicator: &Ocn) -> ColoringDocument {
        ColoringDocument {
            schema: SCHEMA,
            l0: [pc.l0.0, pc.l0.1],
            pairs: pc
                .pairs
                .iter()
                .map(|p| PairDocument::new(p, spoiler, duplicator))
                .collect(),
        }
    }

    /// Resolves state names against the (normalised) nets.
    pub fn to_coloring(&self, spoiler: &Ocn, duplicator: &Ocn) -> Result<PeriodicColoring> {
        if self.schema != SCHEMA {
            return Err(Error::Internal(format!("unsupported schema {}", self.schema)));
        }
        let pairs = self
            .pairs
            .iter()
            .map(|p| {
                let q = spoiler
                    .state_id(&p.q)
                    .ok_or_else(|| Error::UnknownState(p.q.clone()))?;
                let q2 = duplicator
                    .state_id(&p.q_dup)
                    .ok_or_else(|| Error::UnknownState(p.q_dup.clone()))?;
                let unpack = |v: &[[u64; 2]]| v.iter().map(|a| (a[0], a[1])).collect();
                Ok(PairColoring {
                    pair: (q, q2),
                    slope: p.slope,
                    c: p.c,
                    bound: p.belt_constant,
                    j: p.j,
                    k: p.k,
                    init: unpack(&p.init),
                    aper: unpack(&p.aper),
                    per: unpack(&p.per),
                })
            })
            .collect::<Result<_>>()?;
        Ok(PeriodicColoring {
            l0: (self.l0[0], self.l0[1]),
            pairs,
        })
    }
}

/// Streams the document, one pair per line, keeping only pairs accepted by `keep`.
pub fn write_coloring_json<W: Write>(
    mut out: W,
    pc: &PeriodicColoring,
    spoiler: &Ocn,
    duplicator: &Ocn,
    keep: impl Fn(&PairColoring) -> bool,
) -> std::io::Result<()> {
    write!(
        out,
        "{{\"schema\":{SCHEMA},\"l0\":[{},{}],\"pairs\":[",
        pc.l0.0, pc.l0.1
    )?;
    let mut first = true;
    for p in pc.pairs.iter().filter(|p| keep(p)) {
        out.write_all(if first { b"\n" } else { b",\n" })?;
        first = false;
        serde_json::to_writer(&mut out, &PairDocument::new(p, spoiler, duplicator))?;
    }
    writeln!(out, "\n]}}")?;
    Ok(())
}
