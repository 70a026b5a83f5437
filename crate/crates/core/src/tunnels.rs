//! Symbolic tunnel systems built from chunk decompositions.
//!
//! Synthesis is done with the knot below the surface. An above-side surface
//! is relabelled by `x_m -> x_{m+1}` (which exchanges the two sides), handled
//! there, and every label is shifted back afterwards.

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::bounds::binomial;
use crate::error::{Error, Result};
use crate::interval::CyclicInterval;
use crate::params::{ArcLabel, BridgeParams, PunctureLabel};
use crate::surface::{
    canonical_pairing, enumerate_indices, Annulus, Chunk, IndexSet, Side, TubedSurface,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Direction {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TunnelKind {
    /// Dual to the bridge disk of a length-1 down tube.
    BridgeDiskDual,
    /// Dual to two bridge disks banded along a longer down tube.
    BandedBridgeDisks,
    /// Dual to a disk separating the ends of a non-defining up tube.
    SeparatingDiskDual,
    /// Joins the chunk at `γ_{i-1}` to `γ_{r(i)}`.
    ChunkConnector,
}

impl TunnelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TunnelKind::BridgeDiskDual => "bridge_disk_dual",
            TunnelKind::BandedBridgeDisks => "banded_bridge_disks",
            TunnelKind::SeparatingDiskDual => "separating_disk_dual",
            TunnelKind::ChunkConnector => "chunk_connector",
        }
    }
}

impl fmt::Display for TunnelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tunnel {
    pub kind: TunnelKind,
    /// Left foot of the defining annulus of the chunk.
    pub chunk: PunctureLabel,
    /// The tube this tunnel is attached to; `None` for connectors.
    pub annulus: Option<Annulus>,
    pub endpoints: (ArcLabel, ArcLabel),
    /// Punctures cut off by the compression disk (separating kind only).
    pub separated: Option<CyclicInterval>,
}

impl Tunnel {
    /// The two bridge arcs whose disks are banded, for `BandedBridgeDisks`.
    pub fn banded_arcs(&self, params: &BridgeParams) -> Option<(ArcLabel, ArcLabel)> {
        match (self.kind, self.annulus) {
            (TunnelKind::BandedBridgeDisks, Some(a)) => {
                Some((a.left().arc_after(), params.arc(i64::from(a.right().0) - 1)))
            }
            _ => None,
        }
    }

    fn shifted(&self, params: &BridgeParams, k: i64) -> Tunnel {
        Tunnel {
            kind: self.kind,
            chunk: params.advance(self.chunk, k),
            annulus: self.annulus.map(|a| a.shifted(params, k)),
            endpoints: (
                params.arc(i64::from(self.endpoints.0 .0) + k),
                params.arc(i64::from(self.endpoints.1 .0) + k),
            ),
            separated: self.separated.map(|s| s.shifted(k)),
        }
    }

    pub fn to_record(&self) -> TunnelRecord {
        TunnelRecord {
            kind: self.kind,
            chunk: self.chunk.0,
            annulus: self.annulus.map(|a| a.feet()),
            endpoints: [self.endpoints.0 .0, self.endpoints.1 .0],
            separated: self.separated.map(|s| s.to_vec()),
        }
    }
}

/// Up iff the left foot has the parity of the knot's side: odd when the knot
/// is below, even when above (after relabelling to the below picture).
pub fn annulus_direction(surface: &TubedSurface, annulus: &Annulus) -> Direction {
    let odd = annulus.left().0 % 2 == 1;
    match (surface.side(), odd) {
        (Side::Below, true) | (Side::Above, false) => Direction::Up,
        _ => Direction::Down,
    }
}

/// The `size - 1` tunnels contributed by the non-defining members of `chunk`.
pub fn chunk_tunnels(surface: &TubedSurface, chunk: &Chunk) -> Result<Vec<Tunnel>> {
    if !surface.chunks().contains(chunk) {
        return Err(Error::InvalidParameter(format!(
            "chunk defined by {} is not a chunk of {}",
            chunk.defining(),
            surface.index()
        )));
    }
    match surface.side() {
        Side::Below => Ok(below_chunk_tunnels(surface.params(), chunk)),
        Side::Above => {
            let params = surface.params();
            let shifted = chunk.shifted(params, 1);
            Ok(below_chunk_tunnels(params, &shifted)
                .iter()
                .map(|t| t.shifted(params, -1))
                .collect())
        }
    }
}

fn below_chunk_tunnels(params: &BridgeParams, chunk: &Chunk) -> Vec<Tunnel> {
    let defining = chunk.defining();
    let i = defining.left();
    let base = params.arc(i64::from(i.0) - 1);
    chunk
        .members()
        .iter()
        .filter(|a| *a != defining)
        .map(|a| {
            let up = a.left().0 % 2 == 1;
            let (kind, separated) = if up {
                // {x_{r(k)}, ..., x_{r(i)-1}}
                let range = CyclicInterval::between(a.right().0, defining.right().0, params);
                (TunnelKind::SeparatingDiskDual, Some(range))
            } else if a.length() == 1 {
                (TunnelKind::BridgeDiskDual, None)
            } else {
                (TunnelKind::BandedBridgeDisks, None)
            };
            Tunnel {
                kind,
                chunk: i,
                annulus: Some(*a),
                endpoints: (base, base),
                separated,
            }
        })
        .collect()
}

fn connector(params: &BridgeParams, chunk: &Chunk) -> Tunnel {
    let d = chunk.defining();
    Tunnel {
        kind: TunnelKind::ChunkConnector,
        chunk: d.left(),
        annulus: None,
        endpoints: (params.arc(i64::from(d.left().0) - 1), d.right().arc_after()),
        separated: None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TunnelSystem {
    surface: TubedSurface,
    tunnels: Vec<Tunnel>,
    omitted: PunctureLabel,
}

impl TunnelSystem {
    pub fn surface(&self) -> &TubedSurface {
        &self.surface
    }

    pub fn tunnels(&self) -> &[Tunnel] {
        &self.tunnels
    }

    /// Defining foot of the chunk whose connector is left out.
    pub fn omitted_connector_foot(&self) -> PunctureLabel {
        self.omitted
    }

    pub fn to_record(&self) -> TunnelSystemRecord {
        TunnelSystemRecord {
            index: self.surface.index().values(),
            side: self.surface.side(),
            omitted: self.omitted.0,
            tunnels: self.tunnels.iter().map(Tunnel::to_record).collect(),
        }
    }
}

/// Chunk tunnels plus a connector for every chunk but the one with the
/// smallest defining foot: `n - 1` tunnels in total.
pub fn tunnel_system(surface: &TubedSurface) -> Result<TunnelSystem> {
    let params = surface.params();
    let chunks = surface.chunks();
    let omitted = chunks
        .iter()
        .map(|c| c.defining().left())
        .min()
        .ok_or_else(|| Error::InternalConsistency("surface without chunks".into()))?;

    let mut tunnels = Vec::with_capacity(params.n() as usize - 1);
    for chunk in &chunks {
        if chunk.defining().left() != omitted {
            tunnels.push(connector(params, chunk));
        }
        let mut members = chunk_tunnels(surface, chunk)?;
        members.sort_by_key(|t| t.annulus.map(|a| a.left()));
        tunnels.extend(members);
    }
    if tunnels.len() != params.n() as usize - 1 {
        return Err(Error::InternalConsistency(format!(
            "{} tunnels for {}, expected {}",
            tunnels.len(),
            surface.index(),
            params.n() - 1
        )));
    }
    Ok(TunnelSystem {
        surface: surface.clone(),
        tunnels,
        omitted,
    })
}

/// Tunnel systems for every index of a bridge number.
pub fn tunnel_atlas(params: &BridgeParams) -> Result<Vec<TunnelSystem>> {
    enumerate_indices(params)
        .iter()
        .map(|i| tunnel_system(&canonical_pairing(i, params)?))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TunnelCount {
    pub total: BigUint,
    pub below: u64,
    pub above: u64,
}

pub fn count_tunnel_systems(params: &BridgeParams) -> Result<TunnelCount> {
    let mut below = 0;
    let mut above = 0;
    for index in enumerate_indices(params) {
        match canonical_pairing(&index, params)?.side() {
            Side::Below => below += 1,
            Side::Above => above += 1,
        }
    }
    Ok(TunnelCount {
        total: binomial(u64::from(params.punctures()), u64::from(params.n()))?,
        below,
        above,
    })
}

/// Relabel `x_m -> x_{m+1}`; exchanges the two sides.
pub fn mirror_index(params: &BridgeParams, index: &IndexSet) -> IndexSet {
    index.shifted(params, 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TunnelRecord {
    pub kind: TunnelKind,
    pub chunk: u32,
    pub annulus: Option<[u32; 2]>,
    pub endpoints: [u32; 2],
    pub separated: Option<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TunnelSystemRecord {
    pub index: Vec<u32>,
    pub side: Side,
    pub omitted: u32,
    pub tunnels: Vec<TunnelRecord>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surface(n: u32, index: &[u32]) -> TubedSurface {
        let p = BridgeParams::new(n).unwrap();
        canonical_pairing(&IndexSet::new(&p, index.iter().copied()).unwrap(), &p).unwrap()
    }

    fn chunk_with(surface: &TubedSurface, foot: u32) -> Chunk {
        surface
            .chunks()
            .into_iter()
            .find(|c| c.defining().left().0 == foot)
            .unwrap()
    }

    #[test]
    fn directions() {
        let s = surface(7, &[1, 3, 5, 6, 7, 11, 12]);
        let dir = |foot| annulus_direction(&s, s.annulus(PunctureLabel(foot)).unwrap());
        assert_eq!(dir(1), Direction::Up);
        assert_eq!(dir(6), Direction::Down);
        for c in s.chunks() {
            assert_eq!(annulus_direction(&s, c.defining()), Direction::Up);
        }
    }

    #[test]
    fn three_member_chunk() {
        let s = surface(7, &[1, 3, 5, 6, 7, 11, 12]);
        let tunnels = chunk_tunnels(&s, &chunk_with(&s, 5)).unwrap();
        assert_eq!(tunnels.len(), 2);

        assert_eq!(tunnels[0].kind, TunnelKind::BandedBridgeDisks);
        assert_eq!(tunnels[0].annulus.unwrap().feet(), [6, 9]);
        assert_eq!(tunnels[0].endpoints, (ArcLabel(4), ArcLabel(4)));
        assert_eq!(
            tunnels[0].banded_arcs(s.params()),
            Some((ArcLabel(6), ArcLabel(8)))
        );

        assert_eq!(tunnels[1].kind, TunnelKind::SeparatingDiskDual);
        assert_eq!(tunnels[1].annulus.unwrap().feet(), [7, 8]);
        assert_eq!(tunnels[1].separated.unwrap().to_vec(), vec![8, 9]);
        assert_eq!(tunnels[1].endpoints, (ArcLabel(4), ArcLabel(4)));
    }

    #[test]
    fn two_member_chunk() {
        let s = surface(7, &[1, 3, 5, 6, 7, 11, 12]);
        let tunnels = chunk_tunnels(&s, &chunk_with(&s, 11)).unwrap();
        assert_eq!(tunnels.len(), 1);
        assert_eq!(tunnels[0].kind, TunnelKind::BridgeDiskDual);
        assert_eq!(tunnels[0].annulus.unwrap().feet(), [12, 13]);
        assert_eq!(tunnels[0].endpoints, (ArcLabel(10), ArcLabel(10)));
        assert!(chunk_tunnels(&s, &chunk_with(&s, 1)).unwrap().is_empty());
    }

    #[test]
    fn foreign_chunk_rejected() {
        let s = surface(7, &[1, 3, 5, 6, 7, 11, 12]);
        let other = surface(7, &[1, 3, 5, 7, 9, 11, 13]);
        assert!(matches!(
            chunk_tunnels(&other, &chunk_with(&s, 5)),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn system_of_sigma_b() {
        let s = surface(3, &[1, 3, 5]);
        let sys = tunnel_system(&s).unwrap();
        assert_eq!(sys.omitted_connector_foot(), PunctureLabel(1));
        let got: Vec<_> = sys
            .tunnels()
            .iter()
            .map(|t| (t.kind, t.chunk.0, t.endpoints.0 .0, t.endpoints.1 .0))
            .collect();
        assert_eq!(
            got,
            vec![
                (TunnelKind::ChunkConnector, 3, 2, 4),
                (TunnelKind::ChunkConnector, 5, 4, 6)
            ]
        );
    }

    #[test]
    fn system_of_single_chunk() {
        let sys = tunnel_system(&surface(3, &[1, 2, 3])).unwrap();
        assert_eq!(sys.tunnels().len(), 2);
        assert!(sys
            .tunnels()
            .iter()
            .all(|t| t.kind != TunnelKind::ChunkConnector));
        // A_2 = (2,5) goes down with length 3; A_3 = (3,4) is an inner up tube.
        assert_eq!(sys.tunnels()[0].kind, TunnelKind::BandedBridgeDisks);
        assert_eq!(sys.tunnels()[1].kind, TunnelKind::SeparatingDiskDual);
        assert_eq!(sys.tunnels()[1].separated.unwrap().to_vec(), vec![4, 5]);
        // γ_0 wraps to γ_6.
        assert_eq!(sys.tunnels()[0].endpoints, (ArcLabel(6), ArcLabel(6)));
    }

    #[test]
    fn system_of_worked_example() {
        let sys = tunnel_system(&surface(7, &[1, 3, 5, 6, 7, 11, 12])).unwrap();
        let connectors = sys
            .tunnels()
            .iter()
            .filter(|t| t.kind == TunnelKind::ChunkConnector)
            .count();
        assert_eq!(connectors, 3);
        assert_eq!(sys.tunnels().len(), 6);
    }

    #[test]
    fn above_side_uses_relabelling() {
        // Σ_a for n = 3: tubes (2,3), (4,5), (6,1), all chunks of size one.
        let s = surface(3, &[2, 4, 6]);
        assert_eq!(s.side(), Side::Above);
        for a in s.annuli() {
            assert_eq!(annulus_direction(&s, a), Direction::Up);
        }
        let sys = tunnel_system(&s).unwrap();
        assert_eq!(sys.omitted_connector_foot(), PunctureLabel(2));
        let ends: Vec<_> = sys
            .tunnels()
            .iter()
            .map(|t| (t.endpoints.0 .0, t.endpoints.1 .0))
            .collect();
        assert_eq!(ends, vec![(3, 5), (5, 1)]);

        // {2,3,4} is handled as {3,4,5} and shifted back.
        let s = surface(3, &[2, 3, 4]);
        assert_eq!(s.side(), Side::Above);
        let sys = tunnel_system(&s).unwrap();
        assert_eq!(sys.tunnels()[0].kind, TunnelKind::BandedBridgeDisks);
        assert_eq!(sys.tunnels()[0].annulus.unwrap().feet(), [3, 6]);
        assert_eq!(sys.tunnels()[0].endpoints, (ArcLabel(1), ArcLabel(1)));
        assert_eq!(sys.tunnels()[1].separated.unwrap().to_vec(), vec![5, 6]);
    }

    #[test]
    fn counts() {
        let c = count_tunnel_systems(&BridgeParams::new(2).unwrap()).unwrap();
        assert_eq!((c.total, c.below, c.above), (BigUint::from(6u32), 3, 3));
        let c = count_tunnel_systems(&BridgeParams::new(3).unwrap()).unwrap();
        assert_eq!((c.total, c.below, c.above), (BigUint::from(20u32), 10, 10));
        let c = count_tunnel_systems(&BridgeParams::new(4).unwrap()).unwrap();
        assert_eq!((c.total, c.below, c.above), (BigUint::from(70u32), 35, 35));
    }

    #[test]
    fn record_layout() {
        let sys = tunnel_system(&surface(3, &[1, 2, 3])).unwrap();
        let json = serde_json::to_string(&sys.to_record()).unwrap();
        assert_eq!(
            json,
            concat!(
                r#"{"index":[1,2,3],"side":"below","omitted":1,"tunnels":["#,
                r#"{"kind":"banded_bridge_disks","chunk":1,"annulus":[2,5],"endpoints":[6,6],"separated":null},"#,
                r#"{"kind":"separating_disk_dual","chunk":1,"annulus":[3,4],"endpoints":[6,6],"separated":[4,5]}]}"#
            )
        );
    }
}
