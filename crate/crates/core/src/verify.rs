//! The verification suite: every invariant of the engine, run exhaustively
//! (or by seeded sampling where exhaustion is too expensive) for each `n`.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::binomial;
use crate::error::Result;
use crate::moves::{build_move_graph, enumerate_moves};
use crate::oracle::oracle_matching;
use crate::params::{ArcLabel, BridgeParams, PunctureLabel};
use crate::surface::{canonical_pairing, enumerate_indices, IndexSet, Side, TubedSurface};
use crate::tunnels::{annulus_direction, tunnel_system, Direction, TunnelKind};

pub const DEFAULT_SEED: u64 = 20_151_007;

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub n_max: u32,
    pub oracle_cap: u32,
    pub graph_cap: u32,
    /// Largest `n` checked exhaustively against the oracle; sampled above.
    pub exhaustive_max: u32,
    pub samples: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            n_max: 4,
            oracle_cap: crate::oracle::DEFAULT_ORACLE_CAP,
            graph_cap: crate::moves::DEFAULT_GRAPH_CAP,
            exhaustive_max: 5,
            samples: 500,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub n: Option<u32>,
    pub checked: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
}

impl CheckOutcome {
    fn new(name: &'static str, n: Option<u32>) -> Self {
        CheckOutcome {
            name,
            n,
            checked: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }

    fn record_all(&mut self, problems: Vec<String>) {
        self.checked += 1;
        if !problems.is_empty() {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(problems.join("; "));
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentSummary {
    pub n: u32,
    pub sizes: Vec<usize>,
    pub sides: Vec<Side>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TunnelSummary {
    pub n: u32,
    pub total: usize,
    pub below: usize,
    pub above: usize,
    pub tunnels_per_system: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub n_max: u32,
    pub oracle_cap: u32,
    pub checks: Vec<CheckOutcome>,
    pub components: Vec<ComponentSummary>,
    pub tunnels: Vec<TunnelSummary>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }
}

/// Draw `count` distinct-looking random indices for `params` (with repeats
/// allowed across draws).
pub fn random_indices(params: &BridgeParams, count: usize, rng: &mut ChaCha8Rng) -> Vec<IndexSet> {
    let m = params.punctures() as usize;
    (0..count)
        .map(|_| {
            let chosen = sample(rng, m, params.n() as usize);
            IndexSet::new(params, chosen.iter().map(|k| k as u32 + 1))
                .expect("sampled n distinct labels")
        })
        .collect()
}

/// Structural, coverage and parity invariants of one surface.
pub fn surface_problems(surface: &TubedSurface) -> Vec<String> {
    let mut problems = Vec::new();
    if let Err(e) = surface.check_invariants() {
        problems.push(e.to_string());
    }
    let p = surface.coverage();
    let first = p.at(ArcLabel(1));
    for m in 1..=surface.params().punctures() {
        if p.at(ArcLabel(m)) % 2 != (first + m - 1) % 2 {
            problems.push(format!("parity alternation fails at γ{m}"));
        }
    }
    let expected_side = if first % 2 == 1 {
        Side::Below
    } else {
        Side::Above
    };
    if surface.side() != expected_side {
        problems.push("side disagrees with p[1] parity".into());
    }
    problems
}

/// Chunk sizes, disjoint defining spans, defining-foot parity.
pub fn chunk_problems(surface: &TubedSurface) -> Vec<String> {
    let mut problems = Vec::new();
    let chunks = surface.chunks();
    let total: usize = chunks.iter().map(|c| c.size()).sum();
    if total != surface.n() as usize {
        problems.push(format!("chunk sizes sum to {total}"));
    }
    for (k, a) in chunks.iter().enumerate() {
        for b in &chunks[k + 1..] {
            if !a.defining().span().is_disjoint(&b.defining().span()) {
                problems.push(format!(
                    "defining {} and {} overlap",
                    a.defining(),
                    b.defining()
                ));
            }
        }
        for m in a.members() {
            if m != a.defining() && !(m.span().is_subset_of(&a.defining().span())) {
                problems.push(format!("member {m} escapes {}", a.defining()));
            }
        }
        let odd = a.defining().left().0 % 2 == 1;
        let want_odd = surface.side() == Side::Below;
        if odd != want_odd {
            problems.push(format!(
                "defining {} has wrong parity for {}",
                a.defining(),
                surface.side()
            ));
        }
    }
    problems
}

/// Every valid move preserves the side, adds exactly 2 to the coverage of
/// each corridor arc and nothing elsewhere, has an odd corridor and acts on
/// the index as the transposition `(r(i) j)`.
pub fn move_problems(surface: &TubedSurface) -> Result<Vec<String>> {
    let params = surface.params();
    let mut problems = Vec::new();
    let before = surface.coverage();
    let moves = enumerate_moves(surface);
    let n = surface.n() as usize;
    if moves.len() > n * (n - 1) {
        problems.push(format!("{} moves exceed n(n-1)", moves.len()));
    }
    for (mv, target) in moves {
        let r_i = surface.right_foot(mv.i()).expect("left foot");
        if surface.index().contains(r_i) {
            problems.push(format!("{mv}: r(i) already in index"));
        }
        let mut expected: Vec<PunctureLabel> = surface
            .index()
            .members()
            .iter()
            .map(|&m| if m == mv.j() { r_i } else { m })
            .collect();
        expected.sort_unstable();
        if target.members() != expected.as_slice() {
            problems.push(format!("{mv}: index action gives {target}"));
        }
        if mv.corridor().len() % 2 == 0 {
            problems.push(format!("{mv}: even corridor"));
        }
        let after = canonical_pairing(&target, params)?;
        if after.side() != surface.side() {
            problems.push(format!("{mv}: side changes to {}", after.side()));
        }
        let after_p = after.coverage();
        for arc in 1..=params.punctures() {
            let delta = i64::from(after_p.at(ArcLabel(arc))) - i64::from(before.at(ArcLabel(arc)));
            let want = if mv.corridor().contains(arc) { 2 } else { 0 };
            if delta != want {
                problems.push(format!(
                    "{mv}: coverage of γ{arc} changes by {delta}, expected {want}"
                ));
            }
        }
    }
    Ok(problems)
}

/// Tunnel count, chunk/connector bookkeeping, endpoints and kinds.
pub fn tunnel_problems(surface: &TubedSurface) -> Result<Vec<String>> {
    let params = surface.params();
    let mut problems = Vec::new();
    let system = tunnel_system(surface)?;
    let chunks = surface.chunks();
    let n = surface.n() as usize;
    let identity: usize = chunks.iter().map(|c| c.size() - 1).sum::<usize>() + chunks.len() - 1;
    if identity != n - 1 || system.tunnels().len() != n - 1 {
        problems.push(format!(
            "tunnel count {} / identity {identity}, expected {}",
            system.tunnels().len(),
            n - 1
        ));
    }
    let smallest = chunks.iter().map(|c| c.defining().left()).min().unwrap();
    if system.omitted_connector_foot() != smallest {
        problems.push("wrong connector omitted".into());
    }
    for chunk in &chunks {
        let d = chunk.defining();
        if annulus_direction(surface, d) != Direction::Up {
            problems.push(format!("defining {d} does not go up"));
        }
        let base = params.arc(i64::from(d.left().0) - 1);
        let connectors = system
            .tunnels()
            .iter()
            .filter(|t| t.kind == TunnelKind::ChunkConnector && t.chunk == d.left())
            .count();
        let want = usize::from(d.left() != smallest);
        if connectors != want {
            problems.push(format!("chunk {d} has {connectors} connectors"));
        }
        for t in system.tunnels().iter().filter(|t| t.chunk == d.left()) {
            match t.kind {
                TunnelKind::ChunkConnector => {
                    if t.endpoints != (base, d.right().arc_after()) {
                        problems.push(format!("connector of {d} has endpoints {:?}", t.endpoints));
                    }
                }
                kind => {
                    if t.endpoints != (base, base) {
                        problems.push(format!("{kind} tunnel of {d} not on γ_(i-1)"));
                    }
                    let a = t.annulus.expect("member tunnels carry an annulus");
                    let consistent = match annulus_direction(surface, &a) {
                        Direction::Up => kind == TunnelKind::SeparatingDiskDual,
                        Direction::Down if a.length() == 1 => kind == TunnelKind::BridgeDiskDual,
                        Direction::Down => kind == TunnelKind::BandedBridgeDisks,
                    };
                    if !consistent {
                        problems.push(format!("{kind} inconsistent with tube {a}"));
                    }
                }
            }
        }
    }
    Ok(problems)
}

fn worked_examples() -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("worked-examples", None);
    let chunk_sizes = |n: u32, idx: &[u32]| -> Result<Vec<usize>> {
        let p = BridgeParams::new(n)?;
        let s = canonical_pairing(&IndexSet::new(&p, idx.iter().copied())?, &p)?;
        Ok(s.chunks().iter().map(|c| c.size()).collect())
    };
    let sizes = chunk_sizes(7, &[1, 3, 5, 6, 7, 11, 12])?;
    out.record(sizes == [1, 1, 3, 2], || {
        format!("(1,3,5,6,7,11,12) chunk sizes {sizes:?}")
    });
    let sizes = chunk_sizes(3, &[1, 2, 3])?;
    out.record(sizes == [3], || format!("(1,2,3) chunk sizes {sizes:?}"));

    // The ten three-bridge systems drawn with the knot below the surface.
    let p = BridgeParams::new(3)?;
    let drawn: [[u32; 3]; 10] = [
        [1, 3, 5],
        [1, 3, 4],
        [1, 2, 5],
        [3, 5, 6],
        [1, 2, 4],
        [3, 4, 6],
        [2, 5, 6],
        [1, 5, 6],
        [1, 2, 3],
        [3, 4, 5],
    ];
    let mut below: Vec<Vec<u32>> = enumerate_indices(&p)
        .into_iter()
        .filter(|i| {
            canonical_pairing(i, &p)
                .map(|s| s.side() == Side::Below)
                .unwrap_or(false)
        })
        .map(|i| i.values())
        .collect();
    below.sort();
    let mut drawn: Vec<Vec<u32>> = drawn.iter().map(|d| d.to_vec()).collect();
    drawn.sort();
    out.record(below == drawn, || {
        format!("three-bridge below class {below:?}")
    });
    Ok(out)
}

pub fn verify(config: &VerifyConfig) -> Result<VerifyReport> {
    let mut checks = vec![worked_examples()?];
    let mut components = Vec::new();
    let mut tunnels = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    for n in 2..=config.n_max {
        let params = BridgeParams::new(n)?;
        let all = enumerate_indices(&params);

        let mut count = CheckOutcome::new("enumeration-count", Some(n));
        let expected = binomial(2 * u64::from(n), u64::from(n))?;
        count.record(expected == all.len().into(), || {
            format!("{} indices, expected {expected}", all.len())
        });
        checks.push(count);

        if n <= config.oracle_cap {
            let mut oracle = CheckOutcome::new("pairing-oracle", Some(n));
            let pool = if n <= config.exhaustive_max {
                all.clone()
            } else {
                random_indices(&params, config.samples, &mut rng)
            };
            for index in &pool {
                let ours = canonical_pairing(index, &params)?;
                match oracle_matching(index, &params, config.oracle_cap) {
                    Ok(theirs) => {
                        oracle.record(ours == theirs, || format!("{index}: pairing differs"))
                    }
                    Err(e) => oracle.record(false, || format!("{index}: {e}")),
                }
            }
            checks.push(oracle);
        }

        let mut surf = CheckOutcome::new("surface-invariants", Some(n));
        let mut chunk = CheckOutcome::new("chunk-invariants", Some(n));
        let mut tunnel = CheckOutcome::new("tunnel-invariants", Some(n));
        let mut moves = CheckOutcome::new("move-invariants", Some(n));
        let check_moves = n <= config.graph_cap;
        let mut summary = TunnelSummary {
            n,
            total: 0,
            below: 0,
            above: 0,
            tunnels_per_system: Vec::new(),
        };
        for index in &all {
            let s = canonical_pairing(index, &params)?;
            surf.record_all(surface_problems(&s));
            chunk.record_all(chunk_problems(&s));
            tunnel.record_all(tunnel_problems(&s)?);
            if check_moves {
                moves.record_all(move_problems(&s)?);
            }
            summary.total += 1;
            match s.side() {
                Side::Below => summary.below += 1,
                Side::Above => summary.above += 1,
            }
            let len = tunnel_system(&s)?.tunnels().len();
            if !summary.tunnels_per_system.contains(&len) {
                summary.tunnels_per_system.push(len);
            }
        }
        checks.extend([surf, chunk, tunnel]);
        tunnels.push(summary);

        if check_moves {
            checks.push(moves);
            let mut comp = CheckOutcome::new("side-components", Some(n));
            let graph = build_move_graph(&params, config.graph_cap)?;
            let weak = graph.weak_components();
            let sides: Vec<Side> = weak
                .iter()
                .map(|c| canonical_pairing(&c[0], &params).map(|s| s.side()))
                .collect::<Result<_>>()?;
            let homogeneous = weak.iter().zip(&sides).all(|(c, &side)| {
                c.iter().all(|i| {
                    canonical_pairing(i, &params)
                        .map(|s| s.side() == side)
                        .unwrap_or(false)
                })
            });
            comp.record(
                weak.len() == 2 && homogeneous && sides[0] != sides[1],
                || {
                    format!(
                        "{} components with sizes {:?}",
                        weak.len(),
                        weak.iter().map(Vec::len).collect::<Vec<_>>()
                    )
                },
            );
            checks.push(comp);
            components.push(ComponentSummary {
                n,
                sizes: weak.iter().map(Vec::len).collect(),
                sides,
            });
        }
    }

    Ok(VerifyReport {
        n_max: config.n_max,
        oracle_cap: config.oracle_cap,
        checks,
        components,
        tunnels,
    })
}
