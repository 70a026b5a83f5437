//! Tubed Heegaard surfaces as index sets with their annulus pairing.
//!
//! A surface is determined by its index, the set of left feet. The annuli are
//! the unique non-crossing matching of left feet to right feet taken forward
//! along the knot; they are attached in order of increasing length, which is
//! the same as performing the meridional stabilizations in a valid order.

use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::CyclicInterval;
use crate::params::{ArcLabel, BridgeParams, PunctureLabel};

/// The `n` left feet of a tubed surface, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexSet {
    members: Vec<PunctureLabel>,
}

impl IndexSet {
    pub fn new(params: &BridgeParams, members: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut labels = Vec::new();
        for value in members {
            labels.push(params.check_label(value)?);
        }
        labels.sort_unstable();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter(format!(
                "index has repeated members: {:?}",
                labels.iter().map(|l| l.0).collect::<Vec<_>>()
            )));
        }
        if labels.len() != params.n() as usize {
            return Err(Error::InvalidParameter(format!(
                "index must have exactly n = {} members, got {}",
                params.n(),
                labels.len()
            )));
        }
        Ok(IndexSet { members: labels })
    }

    /// `Σ_b = {1, 3, ..., 2n-1}`: every tube over an upper arc, K below.
    pub fn below_standard(params: &BridgeParams) -> Self {
        IndexSet {
            members: (0..params.n()).map(|k| PunctureLabel(2 * k + 1)).collect(),
        }
    }

    /// `Σ_a = {2, 4, ..., 2n}`.
    pub fn above_standard(params: &BridgeParams) -> Self {
        IndexSet {
            members: (1..=params.n()).map(|k| PunctureLabel(2 * k)).collect(),
        }
    }

    pub fn members(&self) -> &[PunctureLabel] {
        &self.members
    }

    pub fn values(&self) -> Vec<u32> {
        self.members.iter().map(|l| l.0).collect()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, label: PunctureLabel) -> bool {
        self.members.binary_search(&label).is_ok()
    }

    /// Replace `old` by `new`, keeping the set sorted.
    pub(crate) fn replaced(&self, old: PunctureLabel, new: PunctureLabel) -> Self {
        let mut members: Vec<_> = self
            .members
            .iter()
            .copied()
            .filter(|&m| m != old)
            .chain(std::iter::once(new))
            .collect();
        members.sort_unstable();
        IndexSet { members }
    }

    /// Relabel `x_m -> x_{m+k}`.
    pub fn shifted(&self, params: &BridgeParams, k: i64) -> Self {
        let mut members: Vec<_> = self.members.iter().map(|&m| params.advance(m, k)).collect();
        members.sort_unstable();
        IndexSet { members }
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.members.iter().map(|m| m.0).join(","))
    }
}

/// All `n`-subsets of `{1..2n}` in lexicographic order.
pub fn enumerate_indices(params: &BridgeParams) -> Vec<IndexSet> {
    (1..=params.punctures())
        .combinations(params.n() as usize)
        .map(|c| IndexSet {
            members: c.into_iter().map(PunctureLabel).collect(),
        })
        .collect()
}

/// A tube with its left foot at `x_left` and right foot at `x_right`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Annulus {
    left: PunctureLabel,
    right: PunctureLabel,
    length: u32,
    modulus: u32,
}

impl Annulus {
    pub fn new(params: &BridgeParams, left: PunctureLabel, right: PunctureLabel) -> Self {
        Annulus {
            left,
            right,
            length: params.forward_distance(left, right),
            modulus: params.punctures(),
        }
    }

    pub fn left(&self) -> PunctureLabel {
        self.left
    }

    pub fn right(&self) -> PunctureLabel {
        self.right
    }

    pub fn length(&self) -> u32 {
        self.length
    }

    /// Arcs `γ_left, ..., γ_{right-1}` the tube runs over.
    pub fn span(&self) -> CyclicInterval {
        CyclicInterval::new(self.left.0, self.length, self.modulus)
    }

    pub fn covers(&self, arc: ArcLabel) -> bool {
        self.span().contains(arc.0)
    }

    pub fn feet(&self) -> [u32; 2] {
        [self.left.0, self.right.0]
    }

    pub(crate) fn shifted(&self, params: &BridgeParams, k: i64) -> Self {
        Annulus::new(
            params,
            params.advance(self.left, k),
            params.advance(self.right, k),
        )
    }
}

impl fmt::Display for Annulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.left.0, self.right.0)
    }
}

/// Which side of the surface the knot ends up on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Below,
    Above,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Below => "below",
            Side::Above => "above",
        }
    }

    pub fn opposite(self) -> Side {
        match self {
            Side::Below => Side::Above,
            Side::Above => Side::Below,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `p[m]`: number of tubes running over arc `γ_m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoverageVector(Vec<u32>);

impl CoverageVector {
    pub fn at(&self, arc: ArcLabel) -> u32 {
        self.0[arc.0 as usize - 1]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }
}

/// An outermost tube together with every tube nested under it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chunk {
    defining: Annulus,
    members: Vec<Annulus>,
}

impl Chunk {
    pub fn defining(&self) -> &Annulus {
        &self.defining
    }

    /// Members sorted by left foot, the defining annulus included.
    pub fn members(&self) -> &[Annulus] {
        &self.members
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub(crate) fn shifted(&self, params: &BridgeParams, k: i64) -> Self {
        let mut members: Vec<_> = self.members.iter().map(|a| a.shifted(params, k)).collect();
        members.sort_by_key(|a| a.left());
        Chunk {
            defining: self.defining.shifted(params, k),
            members,
        }
    }
}

/// Round `k` of the attachment: the tubes of length `2k - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleRound {
    pub k: u32,
    pub attachments: Vec<[u32; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TubedSurface {
    params: BridgeParams,
    index: IndexSet,
    /// Sorted by left foot.
    annuli: Vec<Annulus>,
    /// `right_of[m - 1]` is `r(m)` for left feet, zero otherwise.
    right_of: Vec<u32>,
    /// `left_of[m - 1]` is the left foot of the tube ending at `x_m`, zero otherwise.
    left_of: Vec<u32>,
}

/// Run the increasing-length attachment and return its rounds.
///
/// Round `k` pairs every still-free left foot `i` with `i + 2k - 1` unless
/// that puncture is already used (a left foot or an earlier right foot).
fn attachment_rounds(
    params: &BridgeParams,
    index: &IndexSet,
) -> Result<Vec<Vec<(PunctureLabel, PunctureLabel)>>> {
    let m = params.punctures() as usize;
    let mut used = vec![false; m + 1];
    for &i in index.members() {
        used[i.0 as usize] = true;
    }
    let mut free: Vec<PunctureLabel> = index.members().to_vec();
    let mut rounds = Vec::with_capacity(params.n() as usize);

    for k in 1..=params.n() {
        let len = i64::from(2 * k - 1);
        let round: Vec<_> = free
            .iter()
            .map(|&i| (i, params.advance(i, len)))
            .filter(|&(_, t)| !used[t.0 as usize])
            .collect();
        for &(i, t) in &round {
            used[t.0 as usize] = true;
            free.retain(|&f| f != i);
        }
        rounds.push(round);
    }

    if !free.is_empty() {
        return Err(Error::InternalConsistency(format!(
            "left feet {:?} of {index} still unpaired after {} rounds",
            free.iter().map(|f| f.0).collect::<Vec<_>>(),
            params.n()
        )));
    }
    Ok(rounds)
}

/// The tubed surface with the given index.
pub fn canonical_pairing(index: &IndexSet, params: &BridgeParams) -> Result<TubedSurface> {
    TubedSurface::new(params, index)
}

impl TubedSurface {
    pub fn new(params: &BridgeParams, index: &IndexSet) -> Result<Self> {
        if index.len() != params.n() as usize
            || index
                .members()
                .iter()
                .any(|m| m.0 == 0 || m.0 > params.punctures())
        {
            return Err(Error::InvalidParameter(format!(
                "index {index} is not an n-subset of 1..={}",
                params.punctures()
            )));
        }
        let pairs = attachment_rounds(params, index)?.into_iter().flatten();
        Self::from_pairs(params, pairs)
    }

    /// Assemble a surface from explicit `(left, right)` feet. Every puncture
    /// must be used exactly once and tubes must not cross.
    pub fn from_pairs(
        params: &BridgeParams,
        pairs: impl IntoIterator<Item = (PunctureLabel, PunctureLabel)>,
    ) -> Result<Self> {
        let m = params.punctures() as usize;
        let mut right_of = vec![0; m];
        let mut left_of = vec![0; m];
        let mut seen = vec![false; m];
        let mut annuli = Vec::new();

        for (l, r) in pairs {
            let l = params.check_label(l.0)?;
            let r = params.check_label(r.0)?;
            for foot in [l, r] {
                let slot = &mut seen[foot.0 as usize - 1];
                if *slot {
                    return Err(Error::InvalidParameter(format!(
                        "puncture {} is a foot of more than one tube",
                        foot.0
                    )));
                }
                *slot = true;
            }
            right_of[l.0 as usize - 1] = r.0;
            left_of[r.0 as usize - 1] = l.0;
            annuli.push(Annulus::new(params, l, r));
        }
        if annuli.len() != params.n() as usize {
            return Err(Error::InvalidParameter(format!(
                "expected {} tubes, got {}",
                params.n(),
                annuli.len()
            )));
        }
        for (a, b) in annuli.iter().tuple_combinations() {
            if a.span().crosses(&b.span()) {
                return Err(Error::InvalidParameter(format!("tubes {a} and {b} cross")));
            }
        }
        annuli.sort_by_key(|a| a.left());
        let index = IndexSet {
            members: annuli.iter().map(|a| a.left()).collect(),
        };

        Ok(TubedSurface {
            params: *params,
            index,
            annuli,
            right_of,
            left_of,
        })
    }

    pub fn params(&self) -> &BridgeParams {
        &self.params
    }

    pub fn n(&self) -> u32 {
        self.params.n()
    }

    pub fn index(&self) -> &IndexSet {
        &self.index
    }

    pub fn annuli(&self) -> &[Annulus] {
        &self.annuli
    }

    /// `r(i)` for a left foot `i`.
    pub fn right_foot(&self, left: PunctureLabel) -> Option<PunctureLabel> {
        let r = *self.right_of.get((left.0 as usize).checked_sub(1)?)?;
        (r != 0).then_some(PunctureLabel(r))
    }

    /// Left foot of the tube whose right foot is `right`.
    pub fn left_foot_ending_at(&self, right: PunctureLabel) -> Option<PunctureLabel> {
        let l = *self.left_of.get((right.0 as usize).checked_sub(1)?)?;
        (l != 0).then_some(PunctureLabel(l))
    }

    pub fn annulus(&self, left: PunctureLabel) -> Option<&Annulus> {
        self.annuli
            .binary_search_by_key(&left, |a| a.left())
            .ok()
            .map(|k| &self.annuli[k])
    }

    pub fn coverage(&self) -> CoverageVector {
        let mut p = vec![0; self.params.punctures() as usize];
        for a in &self.annuli {
            for arc in a.span().iter() {
                p[arc as usize - 1] += 1;
            }
        }
        CoverageVector(p)
    }

    /// Below iff an odd number of tubes run over `γ_1`.
    pub fn side(&self) -> Side {
        let over_first = self.annuli.iter().filter(|a| a.covers(ArcLabel(1))).count();
        if over_first % 2 == 1 {
            Side::Below
        } else {
            Side::Above
        }
    }

    pub fn chunks(&self) -> Vec<Chunk> {
        let strictly_inside = |a: &Annulus, b: &Annulus| a != b && a.span().is_subset_of(&b.span());
        self.annuli
            .iter()
            .filter(|a| !self.annuli.iter().any(|b| strictly_inside(a, b)))
            .map(|d| Chunk {
                defining: *d,
                members: self
                    .annuli
                    .iter()
                    .filter(|a| a.span().is_subset_of(&d.span()))
                    .copied()
                    .collect(),
            })
            .collect()
    }

    /// Rounds `1..=n` of the stabilization order; empty rounds included.
    pub fn stabilization_schedule(&self) -> Vec<ScheduleRound> {
        (1..=self.n())
            .map(|k| ScheduleRound {
                k,
                attachments: self
                    .annuli
                    .iter()
                    .filter(|a| a.length() == 2 * k - 1)
                    .map(|a| a.feet())
                    .collect(),
            })
            .collect()
    }

    /// Check the structural invariants of a tubed surface.
    pub fn check_invariants(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InternalConsistency(format!("{}: {msg}", self.index)));
        let m = self.params.punctures();
        let mut feet = vec![0u32; m as usize];
        for a in &self.annuli {
            feet[a.left().0 as usize - 1] += 1;
            feet[a.right().0 as usize - 1] += 1;
            if a.length() % 2 == 0 || a.length() == 0 || a.length() >= m {
                return fail(format!("tube {a} has invalid length {}", a.length()));
            }
            if a.span().len() != a.length() {
                return fail(format!("tube {a} span/length mismatch"));
            }
        }
        if feet.iter().any(|&c| c != 1) {
            return fail("some puncture is not a foot of exactly one tube".into());
        }
        for (a, b) in self.annuli.iter().tuple_combinations() {
            if a.span().crosses(&b.span()) {
                return fail(format!("tubes {a} and {b} cross"));
            }
        }
        let p = self.coverage();
        for arc in 1..=m {
            let next = arc % m + 1;
            let step = i64::from(p.at(ArcLabel(next))) - i64::from(p.at(ArcLabel(arc)));
            let expected = if self.index.contains(PunctureLabel(next)) {
                1
            } else {
                -1
            };
            if step != expected {
                return fail(format!(
                    "coverage step at x{next} is {step}, expected {expected}"
                ));
            }
        }
        Ok(())
    }

    pub fn to_record(&self) -> SurfaceRecord {
        SurfaceRecord {
            n: self.n(),
            index: self.index.values(),
            annuli: self.annuli.iter().map(|a| a.feet()).collect(),
            p: self.coverage().into_vec(),
            side: self.side(),
            chunks: self
                .chunks()
                .iter()
                .map(|c| ChunkRecord {
                    defining: c.defining().left().0,
                    size: c.size(),
                    members: c.members().iter().map(|a| a.left().0).collect(),
                })
                .collect(),
        }
    }

    /// Rebuild from a record, rejecting records whose derived fields disagree.
    pub fn from_record(record: &SurfaceRecord) -> Result<Self> {
        let params = BridgeParams::new(record.n)?;
        let index = IndexSet::new(&params, record.index.iter().copied())?;
        let surface = TubedSurface::new(&params, &index)?;
        if surface.to_record() != *record {
            return Err(Error::InvalidParameter(format!(
                "record for {index} does not match its canonical surface"
            )));
        }
        Ok(surface)
    }
}

/// Canonical interchange record of a surface. Field order is fixed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceRecord {
    pub n: u32,
    pub index: Vec<u32>,
    pub annuli: Vec<[u32; 2]>,
    pub p: Vec<u32>,
    pub side: Side,
    pub chunks: Vec<ChunkRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChunkRecord {
    pub defining: u32,
    pub size: usize,
    pub members: Vec<u32>,
}
