//! Annulus compressions `[ij]` and the move graph they generate.
//!
//! The compressing annulus `[ij]` runs along the knot from the right foot of
//! `A_i` to the left foot of `A_j`; this stretch is the corridor. Compressing
//! merges `A_i`, the corridor and `A_j` into one tube `(i, r(j))` and leaves a
//! second tube `(r(i), j)` over the corridor, so the index changes by the
//! transposition `(r(i) j)`.
//!
//! A move is valid when `A_i` and `A_j` are disjoint (feet in cyclic order
//! `i, r(i), j, r(j)`) and the corridor is nested-or-disjoint relative to
//! every other tube.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::CyclicInterval;
use crate::params::{BridgeParams, PunctureLabel};
use crate::surface::{canonical_pairing, enumerate_indices, IndexSet, Side, TubedSurface};

pub const DEFAULT_GRAPH_CAP: u32 = 7;

/// The compressing annulus `[ij]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Move {
    i: PunctureLabel,
    j: PunctureLabel,
    corridor: CyclicInterval,
}

impl Move {
    pub fn i(&self) -> PunctureLabel {
        self.i
    }

    pub fn j(&self) -> PunctureLabel {
        self.j
    }

    /// Arcs from `x_{r(i)}` forward to `x_j`.
    pub fn corridor(&self) -> CyclicInterval {
        self.corridor
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} {}]", self.i.0, self.j.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "reason", content = "annulus", rename_all = "kebab-case")]
pub enum RejectReason {
    /// `A_i` lies inside `A_j`.
    NestedEndpoints,
    /// `A_j` lies inside `A_i`, so the corridor runs back over `x_i`.
    CorridorWraps,
    /// The corridor crosses the tube with this left foot.
    CorridorCrossing(PunctureLabel),
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectReason::NestedEndpoints => f.write_str("nested-endpoints"),
            RejectReason::CorridorWraps => f.write_str("corridor-wraps"),
            RejectReason::CorridorCrossing(m) => write!(f, "corridor-crossing({})", m.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MoveCheck {
    pub mv: Move,
    pub rejection: Option<RejectReason>,
}

impl MoveCheck {
    pub fn is_valid(&self) -> bool {
        self.rejection.is_none()
    }
}

/// Decide whether `[ij]` is a valid compression of `surface`.
pub fn check_move(surface: &TubedSurface, i: PunctureLabel, j: PunctureLabel) -> Result<MoveCheck> {
    let params = surface.params();
    let (Some(a_i), Some(a_j)) = (surface.annulus(i), surface.annulus(j)) else {
        let bad = if surface.annulus(i).is_none() { i } else { j };
        return Err(Error::InvalidMove(format!(
            "{} is not a left foot of {}",
            bad.0,
            surface.index()
        )));
    };
    if i == j {
        return Err(Error::ExcludedMove(i.0));
    }

    let corridor = CyclicInterval::between(a_i.right().0, j.0, params);
    let mv = Move { i, j, corridor };
    let reject = |reason| {
        Ok(MoveCheck {
            mv,
            rejection: Some(reason),
        })
    };

    if a_j.span().is_subset_of(&a_i.span()) {
        return reject(RejectReason::CorridorWraps);
    }
    if a_i.span().is_subset_of(&a_j.span()) {
        return reject(RejectReason::NestedEndpoints);
    }
    debug_assert!(a_i.span().is_disjoint(&a_j.span()));

    for other in surface.annuli() {
        if other.left() == i || other.left() == j {
            continue;
        }
        if corridor.crosses(&other.span()) {
            return reject(RejectReason::CorridorCrossing(other.left()));
        }
    }
    Ok(MoveCheck {
        mv,
        rejection: None,
    })
}

pub fn move_valid(surface: &TubedSurface, i: PunctureLabel, j: PunctureLabel) -> Result<bool> {
    Ok(check_move(surface, i, j)?.is_valid())
}

/// Index after compressing along `[ij]`: `j` is replaced by `r(i)`.
pub fn apply_move(surface: &TubedSurface, i: PunctureLabel, j: PunctureLabel) -> Result<IndexSet> {
    let check = check_move(surface, i, j)?;
    if let Some(reason) = check.rejection {
        return Err(Error::MoveRejected {
            i: i.0,
            j: j.0,
            reason,
        });
    }
    let r_i = surface.right_foot(i).expect("checked left foot");
    Ok(surface.index().replaced(j, r_i))
}

/// Undo `[ij]`: given the surface obtained by the compression, recover the
/// index it was applied to. After the move the tube ending at `x_j` starts
/// at the old `r(i)`.
pub fn unapply_move(after: &TubedSurface, i: PunctureLabel, j: PunctureLabel) -> Result<IndexSet> {
    if !after.index().contains(i) {
        return Err(Error::InvalidMove(format!(
            "{} is not a left foot of {}",
            i.0,
            after.index()
        )));
    }
    let old_right = after.left_foot_ending_at(j).ok_or_else(|| {
        Error::InvalidMove(format!("{} is not a right foot of {}", j.0, after.index()))
    })?;
    let before = after.index().replaced(old_right, j);
    let source = canonical_pairing(&before, after.params())?;
    if apply_move(&source, i, j).ok().as_ref() != Some(after.index()) {
        return Err(Error::InvalidMove(format!(
            "{} is not the result of compressing [{} {}]",
            after.index(),
            i.0,
            j.0
        )));
    }
    Ok(before)
}

/// All valid moves of `surface`, ordered by `(i, j)`.
pub fn enumerate_moves(surface: &TubedSurface) -> Vec<(Move, IndexSet)> {
    let feet = surface.index().members();
    let mut out = Vec::new();
    for &i in feet {
        for &j in feet {
            if i == j {
                continue;
            }
            let check = check_move(surface, i, j).expect("feet come from the index");
            if check.is_valid() {
                let target = surface.index().replaced(j, surface.right_foot(i).unwrap());
                out.push((check.mv, target));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MoveEdge {
    pub from: usize,
    pub i: PunctureLabel,
    pub j: PunctureLabel,
    pub to: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Reverse,
}

/// Every index for a fixed `n` with all valid compression edges.
#[derive(Debug, Clone)]
pub struct MoveGraph {
    params: BridgeParams,
    /// Lexicographic, so vertex ids order like the index sets themselves.
    vertices: Vec<IndexSet>,
    sides: Vec<Side>,
    lookup: HashMap<IndexSet, usize>,
    edges: Vec<MoveEdge>,
}

pub fn build_move_graph(params: &BridgeParams, cap: u32) -> Result<MoveGraph> {
    if params.n() > cap {
        return Err(Error::ResourceLimit(format!(
            "move graph cap is n <= {cap}, got n = {}",
            params.n()
        )));
    }
    let vertices = enumerate_indices(params);
    let lookup: HashMap<_, _> = vertices
        .iter()
        .cloned()
        .enumerate()
        .map(|(k, v)| (v, k))
        .collect();
    let mut sides = Vec::with_capacity(vertices.len());
    let mut edges = Vec::new();

    for (from, index) in vertices.iter().enumerate() {
        let surface = canonical_pairing(index, params)?;
        let side = surface.side();
        sides.push(side);
        for (mv, target) in enumerate_moves(&surface) {
            let to = lookup[&target];
            let target_side = canonical_pairing(&target, params)?.side();
            if target_side != side {
                return Err(Error::InternalConsistency(format!(
                    "move {mv} takes {index} ({side}) to {target} ({target_side})"
                )));
            }
            edges.push(MoveEdge {
                from,
                i: mv.i,
                j: mv.j,
                to,
            });
        }
    }

    Ok(MoveGraph {
        params: *params,
        vertices,
        sides,
        lookup,
        edges,
    })
}

impl MoveGraph {
    pub fn params(&self) -> &BridgeParams {
        &self.params
    }

    pub fn vertices(&self) -> &[IndexSet] {
        &self.vertices
    }

    pub fn edges(&self) -> &[MoveEdge] {
        &self.edges
    }

    pub fn side(&self, vertex: usize) -> Side {
        self.sides[vertex]
    }

    pub fn vertex_id(&self, index: &IndexSet) -> Option<usize> {
        self.lookup.get(index).copied()
    }

    /// Undirected neighbours of every vertex, sorted by
    /// `(neighbour, direction, i, j)`.
    fn undirected_adjacency(&self) -> Vec<Vec<(usize, Direction, PunctureLabel, PunctureLabel)>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            adj[e.from].push((e.to, Direction::Forward, e.i, e.j));
            adj[e.to].push((e.from, Direction::Reverse, e.i, e.j));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Connected components of the underlying undirected graph, each sorted,
    /// ordered by smallest member.
    pub fn weak_components(&self) -> Vec<Vec<IndexSet>> {
        let adj = self.undirected_adjacency();
        let mut seen = vec![false; self.vertices.len()];
        let mut components = Vec::new();
        for root in 0..self.vertices.len() {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut queue = VecDeque::from([root]);
            let mut members = Vec::new();
            while let Some(v) = queue.pop_front() {
                members.push(v);
                for &(w, ..) in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            members.sort_unstable();
            components.push(
                members
                    .into_iter()
                    .map(|v| self.vertices[v].clone())
                    .collect(),
            );
        }
        components
    }

    /// Shortest compression path in the undirected closure. Ties go to the
    /// lexicographically smallest neighbour.
    pub fn shortest_path(
        &self,
        start: &IndexSet,
        end: &IndexSet,
    ) -> Result<Option<CompressionPath>> {
        let lookup = |x: &IndexSet| {
            self.vertex_id(x).ok_or_else(|| {
                Error::InvalidParameter(format!("{x} is not an index for n = {}", self.params.n()))
            })
        };
        let (s, t) = (lookup(start)?, lookup(end)?);
        let adj = self.undirected_adjacency();
        let mut parent: Vec<Option<(usize, Direction, PunctureLabel, PunctureLabel)>> =
            vec![None; self.vertices.len()];
        let mut seen = vec![false; self.vertices.len()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            if v == t {
                break;
            }
            for &(w, dir, i, j) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((v, dir, i, j));
                    queue.push_back(w);
                }
            }
        }
        if !seen[t] {
            return Ok(None);
        }

        let mut steps = Vec::new();
        let mut v = t;
        while let Some((u, direction, i, j)) = parent[v] {
            steps.push(PathStep {
                i,
                j,
                direction,
                from: self.vertices[u].clone(),
                to: self.vertices[v].clone(),
            });
            v = u;
        }
        steps.reverse();
        Ok(Some(CompressionPath {
            start: start.clone(),
            end: end.clone(),
            steps,
        }))
    }

    pub fn to_record(&self) -> MoveGraphRecord {
        MoveGraphRecord {
            n: self.params.n(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeRecord {
                    from: self.vertices[e.from].values(),
                    i: e.i.0,
                    j: e.j.0,
                    to: self.vertices[e.to].values(),
                })
                .collect(),
        }
    }

    /// Graphviz rendering; vertices coloured by side, edges labelled `i,j`.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph moves_n{} {{", self.params.n());
        let _ = writeln!(out, "  node [style=filled];");
        for (k, v) in self.vertices.iter().enumerate() {
            let color = match self.sides[k] {
                Side::Below => "lightblue",
                Side::Above => "lightsalmon",
            };
            let label = v
                .values()
                .iter()
                .map(u32::to_string)
                .collect::<Vec<_>>()
                .join(",");
            let _ = writeln!(
                out,
                "  v{k} [label=\"{label}\", fillcolor=\"{color}\", side=\"{}\"];",
                self.sides[k]
            );
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "  v{} -> v{} [label=\"{},{}\"];",
                e.from, e.to, e.i.0, e.j.0
            );
        }
        out.push_str("}\n");
        out
    }
}

/// Build the graph for `params` and search it.
pub fn compression_path(
    params: &BridgeParams,
    start: &IndexSet,
    end: &IndexSet,
    graph_cap: u32,
) -> Result<Option<CompressionPath>> {
    build_move_graph(params, graph_cap)?.shortest_path(start, end)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveGraphRecord {
    pub n: u32,
    pub edges: Vec<EdgeRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub from: Vec<u32>,
    pub i: u32,
    pub j: u32,
    pub to: Vec<u32>,
}

/// One step of a path. A forward step compresses `from` along `[ij]`; a
/// reverse step undoes the compression `to --[ij]--> from`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathStep {
    pub i: PunctureLabel,
    pub j: PunctureLabel,
    pub direction: Direction,
    pub from: IndexSet,
    pub to: IndexSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompressionPath {
    pub start: IndexSet,
    pub end: IndexSet,
    pub steps: Vec<PathStep>,
}

impl CompressionPath {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Re-run every step from `start` using only the move rules and return
    /// the index reached.
    pub fn replay(&self, params: &BridgeParams) -> Result<IndexSet> {
        let mut current = self.start.clone();
        for step in &self.steps {
            let surface = canonical_pairing(&current, params)?;
            current = match step.direction {
                Direction::Forward => apply_move(&surface, step.i, step.j)?,
                Direction::Reverse => unapply_move(&surface, step.i, step.j)?,
            };
        }
        Ok(current)
    }

    pub fn to_record(&self) -> PathRecord {
        PathRecord {
            start: self.start.values(),
            end: self.end.values(),
            steps: self
                .steps
                .iter()
                .map(|s| StepRecord {
                    i: s.i.0,
                    j: s.j.0,
                    direction: s.direction,
                    from: s.from.values(),
                    to: s.to.values(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathRecord {
    pub start: Vec<u32>,
    pub end: Vec<u32>,
    pub steps: Vec<StepRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub i: u32,
    pub j: u32,
    pub direction: Direction,
    pub from: Vec<u32>,
    pub to: Vec<u32>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surface(n: u32, index: &[u32]) -> TubedSurface {
        let p = BridgeParams::new(n).unwrap();
        canonical_pairing(&IndexSet::new(&p, index.iter().copied()).unwrap(), &p).unwrap()
    }

    fn idx(n: u32, v: &[u32]) -> IndexSet {
        IndexSet::new(&BridgeParams::new(n).unwrap(), v.iter().copied()).unwrap()
    }

    const fn x(v: u32) -> PunctureLabel {
        PunctureLabel(v)
    }

    #[test]
    fn valid_move_on_sigma_b() {
        let s = surface(2, &[1, 3]);
        let check = check_move(&s, x(1), x(3)).unwrap();
        assert!(check.is_valid());
        assert_eq!(check.mv.corridor().to_vec(), vec![2]);
        assert_eq!(apply_move(&s, x(1), x(3)).unwrap(), idx(2, &[1, 2]));
        assert_eq!(apply_move(&s, x(3), x(1)).unwrap(), idx(2, &[3, 4]));
    }

    #[test]
    fn nested_tubes_are_rejected() {
        // A_1 = (1,4) contains A_2 = (2,3).
        let s = surface(2, &[1, 2]);
        let check = check_move(&s, x(1), x(2)).unwrap();
        assert_eq!(check.rejection, Some(RejectReason::CorridorWraps));
        let check = check_move(&s, x(2), x(1)).unwrap();
        assert_eq!(check.rejection, Some(RejectReason::NestedEndpoints));
        assert!(enumerate_moves(&s).is_empty());

        let s = surface(3, &[1, 2, 5]);
        let check = check_move(&s, x(1), x(2)).unwrap();
        assert_eq!(check.rejection, Some(RejectReason::CorridorWraps));
        assert_eq!(check.mv.corridor().to_vec(), vec![4, 5, 6, 1]);
        assert!(matches!(
            apply_move(&s, x(1), x(2)),
            Err(Error::MoveRejected {
                i: 1,
                j: 2,
                reason: RejectReason::CorridorWraps
            })
        ));
    }

    #[test]
    fn corridor_crossing_is_rejected() {
        // Tubes (1,2), (3,8), (4,5), (6,7); corridor of [1 4] is {γ2, γ3},
        // which crosses A_3 = (3,8).
        let s = surface(4, &[1, 3, 4, 6]);
        assert_eq!(s.right_foot(x(3)), Some(x(8)));
        let check = check_move(&s, x(1), x(4)).unwrap();
        assert_eq!(check.rejection, Some(RejectReason::CorridorCrossing(x(3))));
    }

    #[test]
    fn bad_feet() {
        let s = surface(2, &[1, 3]);
        assert!(matches!(
            check_move(&s, x(2), x(3)),
            Err(Error::InvalidMove(_))
        ));
        assert!(matches!(
            check_move(&s, x(1), x(1)),
            Err(Error::ExcludedMove(1))
        ));
    }

    #[test]
    fn sigma_a_three_bridge() {
        let s = surface(3, &[2, 4, 6]);
        assert_eq!(s.right_foot(x(2)), Some(x(3)));
        assert_eq!(apply_move(&s, x(2), x(4)).unwrap(), idx(3, &[2, 3, 6]));
        assert_eq!(enumerate_moves(&s).len(), 6);
    }

    #[test]
    fn enumerate_sigma_b_two_bridge() {
        let s = surface(2, &[1, 3]);
        let moves: Vec<_> = enumerate_moves(&s)
            .into_iter()
            .map(|(m, t)| ((m.i().0, m.j().0), t.values()))
            .collect();
        assert_eq!(moves, vec![((1, 3), vec![1, 2]), ((3, 1), vec![3, 4])]);
    }

    #[test]
    fn unapply_inverts_apply() {
        let p = BridgeParams::new(4).unwrap();
        for index in enumerate_indices(&p) {
            let s = canonical_pairing(&index, &p).unwrap();
            for (mv, target) in enumerate_moves(&s) {
                let after = canonical_pairing(&target, &p).unwrap();
                assert_eq!(unapply_move(&after, mv.i(), mv.j()).unwrap(), index);
            }
        }
    }

    #[test]
    fn two_bridge_graph() {
        let p = BridgeParams::new(2).unwrap();
        let g = build_move_graph(&p, DEFAULT_GRAPH_CAP).unwrap();
        assert_eq!(g.vertices().len(), 6);
        assert_eq!(g.edges().len(), 4);
        let comps: Vec<Vec<Vec<u32>>> = g
            .weak_components()
            .iter()
            .map(|c| c.iter().map(IndexSet::values).collect())
            .collect();
        assert_eq!(
            comps,
            vec![
                vec![vec![1, 2], vec![1, 3], vec![3, 4]],
                vec![vec![1, 4], vec![2, 3], vec![2, 4]]
            ]
        );
        let below = g.vertex_id(&idx(2, &[1, 3])).unwrap();
        assert_eq!(g.side(below), Side::Below);
    }

    #[test]
    fn graph_cap() {
        let p = BridgeParams::new(8).unwrap();
        assert!(matches!(
            build_move_graph(&p, DEFAULT_GRAPH_CAP),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn two_bridge_paths() {
        let p = BridgeParams::new(2).unwrap();
        let path = compression_path(&p, &idx(2, &[1, 2]), &idx(2, &[3, 4]), DEFAULT_GRAPH_CAP)
            .unwrap()
            .unwrap();
        assert_eq!(path.len(), 2);
        assert_eq!(path.steps[0].direction, Direction::Reverse);
        assert_eq!(path.steps[0].to, idx(2, &[1, 3]));
        assert_eq!(path.steps[1].direction, Direction::Forward);
        assert_eq!((path.steps[1].i.0, path.steps[1].j.0), (3, 1));
        assert_eq!(path.replay(&p).unwrap(), idx(2, &[3, 4]));

        let same = compression_path(&p, &idx(2, &[1, 3]), &idx(2, &[1, 3]), DEFAULT_GRAPH_CAP)
            .unwrap()
            .unwrap();
        assert!(same.is_empty());

        assert!(
            compression_path(&p, &idx(2, &[1, 3]), &idx(2, &[2, 4]), DEFAULT_GRAPH_CAP)
                .unwrap()
                .is_none()
        );
    }

    #[test]
    fn graph_exports() {
        let p = BridgeParams::new(2).unwrap();
        let g = build_move_graph(&p, DEFAULT_GRAPH_CAP).unwrap();
        let json = serde_json::to_string(&g.to_record()).unwrap();
        assert!(json.starts_with(r#"{"n":2,"edges":[{"from":[1,3],"i":1,"j":3,"to":[1,2]}"#));
        let dot = g.to_dot();
        assert!(dot.contains(r#"v1 [label="1,3", fillcolor="lightblue", side="below"];"#));
        assert!(dot.contains(r#"v1 -> v0 [label="1,3"];"#));
        assert_eq!(dot, g.to_dot());
    }
}
