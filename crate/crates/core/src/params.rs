//! Bridge parameters and cyclic labels.
//!
//! Punctures `x_1..x_{2n}` are numbered along an orientation of the knot.
//! Arc `γ_m` is the bridge arc from `x_m` to `x_{m+1}` (indices mod `2n`,
//! always reported in `1..=2n`). Odd arcs lie above the bridge sphere.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A puncture `x_m` of the bridge sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PunctureLabel(pub u32);

/// A bridge arc `γ_m`, joining `x_m` to `x_{m+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ArcLabel(pub u32);

impl PunctureLabel {
    pub fn get(self) -> u32 {
        self.0
    }

    /// The arc leaving this puncture.
    pub fn arc_after(self) -> ArcLabel {
        ArcLabel(self.0)
    }
}

impl ArcLabel {
    pub fn get(self) -> u32 {
        self.0
    }

    pub fn is_upper(self) -> bool {
        self.0 % 2 == 1
    }
}

impl fmt::Display for PunctureLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

impl fmt::Display for ArcLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "γ{}", self.0)
    }
}

/// Bridge number `n` and an optional, user-supplied bridge distance `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BridgeParams {
    n: u32,
    d: Option<u64>,
}

impl BridgeParams {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "bridge number must be at least 2, got {n}"
            )));
        }
        Ok(BridgeParams { n, d: None })
    }

    pub fn with_distance(n: u32, d: u64) -> Result<Self> {
        let mut params = Self::new(n)?;
        params.d = Some(d);
        Ok(params)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn d(&self) -> Option<u64> {
        self.d
    }

    /// Number of punctures, `2n`.
    pub fn punctures(&self) -> u32 {
        2 * self.n
    }

    /// `d > 2n`, the standing hypothesis of the genus bounds.
    pub fn d_exceeds_2n(&self) -> bool {
        self.d.is_some_and(|d| d > 2 * u64::from(self.n))
    }

    pub fn d_at_least_4n(&self) -> bool {
        self.d.is_some_and(|d| d >= 4 * u64::from(self.n))
    }

    /// Reduce any integer to a label in `1..=2n`.
    pub fn wrap(&self, value: i64) -> u32 {
        let m = i64::from(self.punctures());
        ((value - 1).rem_euclid(m) + 1) as u32
    }

    pub fn puncture(&self, value: i64) -> PunctureLabel {
        PunctureLabel(self.wrap(value))
    }

    pub fn arc(&self, value: i64) -> ArcLabel {
        ArcLabel(self.wrap(value))
    }

    /// `x_{m+k}`.
    pub fn advance(&self, p: PunctureLabel, k: i64) -> PunctureLabel {
        self.puncture(i64::from(p.0) + k)
    }

    /// Forward distance from `from` to `to` along the orientation, in `0..2n`.
    pub fn forward_distance(&self, from: PunctureLabel, to: PunctureLabel) -> u32 {
        let m = self.punctures();
        (to.0 + m - from.0) % m
    }

    pub fn check_label(&self, value: u32) -> Result<PunctureLabel> {
        if value == 0 || value > self.punctures() {
            return Err(Error::InvalidParameter(format!(
                "label {value} outside 1..={}",
                self.punctures()
            )));
        }
        Ok(PunctureLabel(value))
    }
}

/// Genus/bridge bookkeeping of a single meridional stabilization:
/// a `(g, b)`-bridge surface becomes a `(g + 1, b - 1)`-bridge surface.
pub fn meridional_bookkeeping(genus: u32, bridges: u32) -> Result<(u32, u32)> {
    if bridges == 0 {
        return Err(Error::InvalidOperation(
            "meridional stabilization needs at least one bridge arc".into(),
        ));
    }
    Ok((genus + 1, bridges - 1))
}
