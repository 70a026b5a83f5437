//! Brute-force oracle for the annulus pairing.
//!
//! Searches every bijection from left feet to right feet (each tube taken
//! forward along the knot) and keeps the ones whose tubes never cross. A
//! branch is abandoned as soon as its partial matching contains a crossing
//! pair; every completion of such a branch crosses too, so the surviving set
//! is exactly the set of non-crossing bijections. Arc sets are plain bitmasks
//! here, deliberately separate from the interval arithmetic in `surface`.

use crate::error::{Error, Result};
use crate::params::{BridgeParams, PunctureLabel};
use crate::surface::{IndexSet, TubedSurface};

pub const DEFAULT_ORACLE_CAP: u32 = 8;

type ArcMask = u128;

fn arc_mask(left: u32, right: u32, m: u32) -> ArcMask {
    let mut mask = 0;
    let mut arc = left;
    while arc != right {
        mask |= 1 << (arc - 1);
        arc = arc % m + 1;
    }
    mask
}

fn masks_cross(a: ArcMask, b: ArcMask) -> bool {
    let overlap = a & b;
    overlap != 0 && overlap != a && overlap != b
}

struct Search<'a> {
    m: u32,
    lefts: &'a [u32],
    rights: &'a [u32],
    used: Vec<bool>,
    chosen: Vec<(u32, u32, ArcMask)>,
    found: Vec<Vec<(u32, u32)>>,
}

impl Search<'_> {
    fn run(&mut self, depth: usize) {
        if depth == self.lefts.len() {
            self.found
                .push(self.chosen.iter().map(|&(l, r, _)| (l, r)).collect());
            return;
        }
        let left = self.lefts[depth];
        for k in 0..self.rights.len() {
            if self.used[k] {
                continue;
            }
            let right = self.rights[k];
            let mask = arc_mask(left, right, self.m);
            if self
                .chosen
                .iter()
                .any(|&(_, _, other)| masks_cross(mask, other))
            {
                continue;
            }
            self.used[k] = true;
            self.chosen.push((left, right, mask));
            self.run(depth + 1);
            self.chosen.pop();
            self.used[k] = false;
        }
    }
}

/// All non-crossing bijections from the index to its complement.
pub fn non_crossing_matchings(index: &IndexSet, params: &BridgeParams) -> Vec<Vec<(u32, u32)>> {
    let m = params.punctures();
    assert!(
        m <= ArcMask::BITS,
        "oracle supports at most {} punctures",
        ArcMask::BITS
    );
    let lefts = index.values();
    let rights: Vec<u32> = (1..=m).filter(|v| !lefts.contains(v)).collect();
    let mut search = Search {
        m,
        lefts: &lefts,
        rights: &rights,
        used: vec![false; rights.len()],
        chosen: Vec::new(),
        found: Vec::new(),
    };
    search.run(0);
    search.found
}

/// The unique non-crossing matching, or an oracle violation if there is not
/// exactly one.
pub fn oracle_matching(index: &IndexSet, params: &BridgeParams, cap: u32) -> Result<TubedSurface> {
    if params.n() > cap {
        return Err(Error::ResourceLimit(format!(
            "oracle cap is n <= {cap}, got n = {}",
            params.n()
        )));
    }
    if index.len() != params.n() as usize {
        return Err(Error::InvalidParameter(format!(
            "index {index} has wrong size"
        )));
    }
    let mut found = non_crossing_matchings(index, params);
    if found.len() != 1 {
        return Err(Error::OracleViolation(format!(
            "index {index} admits {} non-crossing matchings",
            found.len()
        )));
    }
    let pairs = found
        .pop()
        .unwrap()
        .into_iter()
        .map(|(l, r)| (PunctureLabel(l), PunctureLabel(r)));
    TubedSurface::from_pairs(params, pairs)
}
