//! Exact integer plane geometry for slopes and belts.
//!
//! Every predicate here reduces to a sign test on small integer products, so
//! nothing is ever rounded. A [`Slope`] is a non-zero vector in the closed
//! positive quadrant; its direction is the open half-line `t * (rho, rho')`
//! for real `t > 0`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Vec2 {
    pub x: i64,
    pub y: i64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        Vec2 { x, y }
    }

    /// `self.x * other.y - self.y * other.x`
    pub fn cross(self, other: Vec2) -> i64 {
        self.x * other.y - self.y * other.x
    }

    pub fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0
    }

    /// Non-zero and in the closed positive quadrant.
    pub fn is_positive(self) -> bool {
        self.x >= 0 && self.y >= 0 && !self.is_zero()
    }

    pub fn scale(self, k: i64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }
}

impl std::ops::Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl std::ops::Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl std::ops::Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// A positive integer vector `(rho, rho')`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "[i64; 2]", try_from = "[i64; 2]")]
pub struct Slope {
    rho: i64,
    rho_prime: i64,
}

impl Slope {
    pub const HORIZONTAL: Slope = Slope { rho: 1, rho_prime: 0 };
    pub const VERTICAL: Slope = Slope { rho: 0, rho_prime: 1 };

    pub fn new(rho: i64, rho_prime: i64) -> Option<Slope> {
        Vec2::new(rho, rho_prime)
            .is_positive()
            .then_some(Slope { rho, rho_prime })
    }

    pub fn from_vec(v: Vec2) -> Option<Slope> {
        Slope::new(v.x, v.y)
    }

    pub fn rho(self) -> i64 {
        self.rho
    }

    pub fn rho_prime(self) -> i64 {
        self.rho_prime
    }

    pub fn as_vec(self) -> Vec2 {
        Vec2::new(self.rho, self.rho_prime)
    }

    /// Divides out the gcd; collinear slopes share one canonical form.
    pub fn canonical(self) -> Slope {
        let g = self.rho.gcd(&self.rho_prime);
        Slope {
            rho: self.rho / g,
            rho_prime: self.rho_prime / g,
        }
    }

    pub fn is_vertical(self) -> bool {
        self.rho == 0
    }

    pub fn is_horizontal(self) -> bool {
        self.rho_prime == 0
    }

    /// Sum of the two vectors; strictly between them when they are not collinear.
    pub fn mediant(self, other: Slope) -> Slope {
        Slope {
            rho: self.rho + other.rho,
            rho_prime: self.rho_prime + other.rho_prime,
        }
    }
}

impl From<Slope> for [i64; 2] {
    fn from(s: Slope) -> [i64; 2] {
        [s.rho, s.rho_prime]
    }
}

impl TryFrom<[i64; 2]> for Slope {
    type Error = String;
    fn try_from(v: [i64; 2]) -> Result<Slope, String> {
        Slope::new(v[0], v[1]).ok_or_else(|| format!("({}, {}) is not a positive vector", v[0], v[1]))
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.rho, self.rho_prime)
    }
}

/// True iff the clockwise angle from `s` to `v` lies strictly between 0 and 180 degrees.
pub fn is_behind(v: Vec2, s: Slope) -> bool {
    s.as_vec().cross(v) < 0
}

/// Orders slopes by steepness: `Less` means `a` is less steep than `b`.
/// Collinear slopes compare `Equal`.
pub fn steeper(a: Slope, b: Slope) -> Ordering {
    if is_behind(a.as_vec(), b) {
        Ordering::Less
    } else if is_behind(b.as_vec(), a) {
        Ordering::Greater
    } else {
        Ordering::Equal
    }
}

/// Whether some point `t * s` with `t > 0` has `n < t*rho - c` and `n' > t*rho' + c`.
pub fn c_above(point: (i64, i64), s: Slope, c: i64) -> bool {
    let (n, n2) = point;
    n2 > c && s.rho_prime * (n + c) < s.rho * (n2 - c)
}

/// Whether some point `t * s` with `t > 0` has `n > t*rho + c` and `n' < t*rho' - c`.
pub fn c_below(point: (i64, i64), s: Slope, c: i64) -> bool {
    let (n, n2) = point;
    n > c && s.rho * (n2 + c) < s.rho_prime * (n - c)
}

/// Slopes agree on which members of `vectors` lie behind them.
pub fn equivalent(a: Slope, b: Slope, vectors: &BTreeSet<Vec2>) -> bool {
    vectors.iter().all(|&v| is_behind(v, a) == is_behind(v, b))
}

/// One slope per class of positive directions, strictly increasing in steepness.
///
/// Even positions hold rays: `(1,0)`, the gcd-normalised positive directions
/// occurring in `vectors`, and `(0,1)`. Odd positions hold the mediant of the
/// two neighbouring rays and stand for the open angle between them.
pub fn interval_representatives(vectors: &BTreeSet<Vec2>) -> Vec<Slope> {
    let directions = vectors
        .iter()
        .filter_map(|&v| Slope::from_vec(v))
        .map(Slope::canonical)
        .chain([Slope::HORIZONTAL, Slope::VERTICAL]);
    let rays = sorted_directions(directions);
    let mut out = Vec::with_capacity(2 * rays.len());
    for (i, &ray) in rays.iter().enumerate() {
        if i > 0 {
            out.push(rays[i - 1].mediant(ray));
        }
        out.push(ray);
    }
    out
}

/// Number of genuinely distinct classes among `reps` with respect to `vectors`.
pub fn distinct_classes(reps: &[Slope], vectors: &BTreeSet<Vec2>) -> usize {
    let mut count = 0;
    for (i, &r) in reps.iter().enumerate() {
        if i == 0 || !equivalent(reps[i - 1], r, vectors) {
            count += 1;
        }
    }
    count
}

/// Every canonical positive direction whose components are at most `bound`,
/// together with the two axes.
pub fn farey_directions(bound: i64) -> Vec<Slope> {
    let bound = bound.max(1);
    let mut all = Vec::new();
    for rho in 0..=bound {
        for rho_prime in 0..=bound {
            if let Some(s) = Slope::new(rho, rho_prime) {
                if s.canonical() == s {
                    all.push(s);
                }
            }
        }
    }
    sorted_directions(all)
}

/// Interleaves mediants between consecutive rays, as in [`interval_representatives`].
pub fn with_mediants(rays: &[Slope]) -> Vec<Slope> {
    let mut out = Vec::with_capacity(2 * rays.len());
    for (i, &ray) in rays.iter().enumerate() {
        if i > 0 {
            out.push(rays[i - 1].mediant(ray));
        }
        out.push(ray);
    }
    out
}

fn sorted_directions(directions: impl IntoIterator<Item = Slope>) -> Vec<Slope> {
    let mut rays: Vec<Slope> = directions.into_iter().map(Slope::canonical).collect();
    rays.sort_by(|&a, &b| steeper(a, b));
    rays.dedup();
    rays
}

/// `rho * n' - rho' * n`: positive on the Duplicator side of the direction.
pub fn signed_offset(point: (i64, i64), s: Slope) -> i64 {
    s.rho * point.1 - s.rho_prime * point.0
}
