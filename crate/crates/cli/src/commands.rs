use serde::Serialize;

use tubed_core::bounds::{reports_to_csv, serialize_big, stable_genus_report, StableGenusReport};
use tubed_core::moves::{
    apply_move, build_move_graph, check_move, MoveGraphRecord, PathRecord, RejectReason,
};
use tubed_core::oracle::{non_crossing_matchings, oracle_matching};
use tubed_core::surface::{ChunkRecord, ScheduleRound, SurfaceRecord};
use tubed_core::tunnels::{count_tunnel_systems, tunnel_system, TunnelSystemRecord};
use tubed_core::verify::{verify, VerifyConfig, VerifyReport};
use tubed_core::{
    canonical_pairing, enumerate_indices, BridgeParams, Error, IndexSet, PunctureLabel, Side,
    TubedSurface,
};

use crate::args::{Command, Format, Invocation};
use crate::document::Document;
use crate::{CliError, Outcome};

pub fn dispatch(inv: &Invocation) -> Result<Outcome, CliError> {
    match inv.subcommand {
        Command::Enumerate => enumerate(inv),
        Command::Pair => pair(inv),
        Command::Classify => classify(inv),
        Command::Moves => moves(inv),
        Command::Graph => graph(inv),
        Command::Path => path(inv),
        Command::Chunks => chunks(inv),
        Command::Tunnels => tunnels(inv),
        Command::Bounds => bounds(inv),
        Command::Verify => run_verify(inv),
    }
}

fn csv_list(values: &[u32]) -> String {
    values
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn required_index(inv: &Invocation) -> Result<IndexSet, CliError> {
    inv.index_set()?
        .ok_or_else(|| CliError::usage(format!("{} requires --index", inv.subcommand.name())))
}

fn surface(inv: &Invocation) -> Result<(BridgeParams, TubedSurface), CliError> {
    let params = inv.params()?;
    let s = canonical_pairing(&required_index(inv)?, &params)?;
    Ok((params, s))
}

fn emit<T: Serialize>(
    inv: &Invocation,
    result: &T,
    text: impl FnOnce() -> Vec<String>,
) -> Document {
    match inv.format {
        Format::Text => Document::text(inv, &text()),
        _ => Document::json(inv, result),
    }
}

#[derive(Serialize)]
struct Classified {
    index: Vec<u32>,
    side: Side,
    p: Vec<u32>,
}

fn classified(s: &TubedSurface) -> Classified {
    Classified {
        index: s.index().values(),
        side: s.side(),
        p: s.coverage().into_vec(),
    }
}

#[derive(Serialize)]
struct Batch<T> {
    total: usize,
    below: usize,
    above: usize,
    entries: Vec<T>,
}

fn batch<T>(entries: Vec<(Side, T)>) -> Batch<T> {
    let below = entries.iter().filter(|(s, _)| *s == Side::Below).count();
    Batch {
        total: entries.len(),
        below,
        above: entries.len() - below,
        entries: entries.into_iter().map(|(_, t)| t).collect(),
    }
}

#[derive(Serialize)]
struct Entry {
    index: Vec<u32>,
    side: Side,
}

fn enumerate(inv: &Invocation) -> Result<Outcome, CliError> {
    let params = inv.params()?;
    let mut entries = Vec::new();
    for index in enumerate_indices(&params) {
        let side = canonical_pairing(&index, &params)?.side();
        entries.push((
            side,
            Entry {
                index: index.values(),
                side,
            },
        ));
    }
    let result = batch(entries);
    let doc = emit(inv, &result, || {
        result
            .entries
            .iter()
            .map(|e| format!("{} {}", csv_list(&e.index), e.side))
            .collect()
    });
    Ok(Outcome::ok(doc))
}

#[derive(Serialize)]
struct OracleCheck {
    checked: bool,
    matchings: Option<usize>,
    agrees: Option<bool>,
}

#[derive(Serialize)]
struct Paired {
    surface: SurfaceRecord,
    schedule: Vec<ScheduleRound>,
    oracle: OracleCheck,
}

fn pair(inv: &Invocation) -> Result<Outcome, CliError> {
    let (params, s) = surface(inv)?;
    let oracle = if params.n() <= inv.oracle_cap {
        let matchings = non_crossing_matchings(s.index(), &params).len();
        let theirs = oracle_matching(s.index(), &params, inv.oracle_cap)?;
        if theirs != s {
            return Err(Error::OracleViolation(format!(
                "{}: recursion and oracle disagree",
                s.index()
            ))
            .into());
        }
        OracleCheck {
            checked: true,
            matchings: Some(matchings),
            agrees: Some(true),
        }
    } else {
        OracleCheck {
            checked: false,
            matchings: None,
            agrees: None,
        }
    };
    let result = Paired {
        surface: s.to_record(),
        schedule: s.stabilization_schedule(),
        oracle,
    };
    let doc = emit(inv, &result, || {
        let mut lines = vec![format!("index {} side {}", s.index(), s.side())];
        for a in s.annuli() {
            lines.push(format!(
                "annulus {} -> {} length {}",
                a.left().0,
                a.right().0,
                a.length()
            ));
        }
        for r in &result.schedule {
            let pairs: Vec<String> = r
                .attachments
                .iter()
                .map(|[l, r]| format!("({l},{r})"))
                .collect();
            lines.push(format!("round {} {}", r.k, pairs.join(" ")));
        }
        lines.push(match result.oracle.agrees {
            Some(_) => "oracle agrees".to_string(),
            None => "oracle skipped".to_string(),
        });
        lines
    });
    Ok(Outcome::ok(doc))
}

fn classify(inv: &Invocation) -> Result<Outcome, CliError> {
    let params = inv.params()?;
    if let Some(index) = inv.index_set()? {
        let c = classified(&canonical_pairing(&index, &params)?);
        let doc = emit(inv, &c, || {
            vec![format!("{} {}", csv_list(&c.index), c.side)]
        });
        return Ok(Outcome::ok(doc));
    }
    let mut entries = Vec::new();
    for index in enumerate_indices(&params) {
        let s = canonical_pairing(&index, &params)?;
        entries.push((s.side(), classified(&s)));
    }
    let result = batch(entries);
    let doc = emit(inv, &result, || {
        let mut lines: Vec<String> = result
            .entries
            .iter()
            .map(|c| format!("{} {}", csv_list(&c.index), c.side))
            .collect();
        lines.push(format!("below {} above {}", result.below, result.above));
        lines
    });
    Ok(Outcome::ok(doc))
}

#[derive(Serialize)]
struct MoveEntry {
    i: u32,
    j: u32,
    valid: bool,
    corridor: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rejection: Option<RejectReason>,
    #[serde(skip_serializing_if = "Option::is_none")]
    target: Option<Vec<u32>>,
}

#[derive(Serialize)]
struct MoveList {
    index: Vec<u32>,
    side: Side,
    valid: usize,
    moves: Vec<MoveEntry>,
}

#[derive(Serialize)]
struct Applied {
    i: u32,
    j: u32,
    corridor: Vec<u32>,
    before: SurfaceRecord,
    after: SurfaceRecord,
}

fn moves(inv: &Invocation) -> Result<Outcome, CliError> {
    let (params, s) = surface(inv)?;
    if let Some([i, j]) = inv.apply {
        let check = check_move(&s, PunctureLabel(i), PunctureLabel(j))?;
        let target = apply_move(&s, PunctureLabel(i), PunctureLabel(j))?;
        let after = canonical_pairing(&target, &params)?;
        let result = Applied {
            i,
            j,
            corridor: check.mv.corridor().to_vec(),
            before: s.to_record(),
            after: after.to_record(),
        };
        let doc = emit(inv, &result, || {
            vec![format!(
                "{} --[{i} {j}]--> {} ({})",
                s.index(),
                after.index(),
                after.side()
            )]
        });
        return Ok(Outcome::ok(doc));
    }

    let mut entries = Vec::new();
    for &i in s.index().members() {
        for &j in s.index().members() {
            if i == j {
                continue;
            }
            let check = check_move(&s, i, j)?;
            let target = if check.is_valid() {
                Some(apply_move(&s, i, j)?.values())
            } else {
                None
            };
            entries.push(MoveEntry {
                i: i.0,
                j: j.0,
                valid: check.is_valid(),
                corridor: check.mv.corridor().to_vec(),
                rejection: check.rejection,
                target,
            });
        }
    }
    let result = MoveList {
        index: s.index().values(),
        side: s.side(),
        valid: entries.iter().filter(|e| e.valid).count(),
        moves: entries,
    };
    let doc = emit(inv, &result, || {
        result
            .moves
            .iter()
            .map(|m| match (&m.target, &m.rejection) {
                (Some(t), _) => format!("[{} {}] valid -> {}", m.i, m.j, csv_list(t)),
                (None, Some(r)) => format!("[{} {}] rejected {r}", m.i, m.j),
                (None, None) => format!("[{} {}] rejected", m.i, m.j),
            })
            .collect()
    });
    Ok(Outcome::ok(doc))
}

#[derive(Serialize)]
struct Component {
    size: usize,
    side: Side,
    first: Vec<u32>,
}

#[derive(Serialize)]
struct GraphResult {
    vertices: usize,
    edge_count: usize,
    components: Vec<Component>,
    graph: MoveGraphRecord,
}

fn graph(inv: &Invocation) -> Result<Outcome, CliError> {
    let params = inv.params()?;
    let g = build_move_graph(&params, inv.graph_cap)?;
    if inv.format == Format::Dot {
        return Ok(Outcome::ok(Document::commented(inv, "//", &g.to_dot())));
    }
    let components = g
        .weak_components()
        .into_iter()
        .map(|c| Component {
            size: c.len(),
            side: g.side(g.vertex_id(&c[0]).expect("component vertex")),
            first: c[0].values(),
        })
        .collect();
    let result = GraphResult {
        vertices: g.vertices().len(),
        edge_count: g.edges().len(),
        components,
        graph: g.to_record(),
    };
    let doc = emit(inv, &result, || {
        let mut lines = vec![format!(
            "vertices {} edges {}",
            result.vertices, result.edge_count
        )];
        for c in &result.components {
            lines.push(format!(
                "component {} {} from {}",
                c.side,
                c.size,
                csv_list(&c.first)
            ));
        }
        lines
    });
    Ok(Outcome::ok(doc))
}

#[derive(Serialize)]
struct PathResult {
    found: bool,
    start: Vec<u32>,
    start_side: Side,
    target: Vec<u32>,
    target_side: Side,
    #[serde(skip_serializing_if = "Option::is_none")]
    length: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    path: Option<PathRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
}

fn path(inv: &Invocation) -> Result<Outcome, CliError> {
    let params = inv.params()?;
    let start = required_index(inv)?;
    let target = inv
        .target_set()?
        .ok_or_else(|| CliError::usage("path requires --target"))?;
    let start_side = canonical_pairing(&start, &params)?.side();
    let target_side = canonical_pairing(&target, &params)?.side();
    let g = build_move_graph(&params, inv.graph_cap)?;
    let found = g.shortest_path(&start, &target)?;
    let reason = match (&found, start_side == target_side) {
        (Some(_), _) => None,
        (None, false) => Some(format!(
            "the indices lie on opposite sides ({start_side} and {target_side})"
        )),
        (None, true) => Some(format!("no path within the {start_side} class")),
    };
    let result = PathResult {
        found: found.is_some(),
        start: start.values(),
        start_side,
        target: target.values(),
        target_side,
        length: found.as_ref().map(|p| p.len()),
        path: found.as_ref().map(|p| p.to_record()),
        reason: reason.clone(),
    };
    let doc = emit(inv, &result, || match &found {
        Some(p) => {
            let mut lines = vec![format!("path of length {}", p.len())];
            for s in &p.steps {
                let dir = match s.direction {
                    tubed_core::moves::Direction::Forward => "forward",
                    tubed_core::moves::Direction::Reverse => "reverse",
                };
                lines.push(format!(
                    "{} --[{} {}] {dir}--> {}",
                    s.from, s.i.0, s.j.0, s.to
                ));
            }
            lines
        }
        None => vec![format!("no path: {}", reason.clone().unwrap_or_default())],
    });
    match reason {
        None => Ok(Outcome::ok(doc)),
        Some(r) => Ok(Outcome {
            doc,
            failure: Some(CliError::NoPath(format!("{start} -> {target}: {r}"))),
        }),
    }
}

#[derive(Serialize)]
struct ChunkResult {
    index: Vec<u32>,
    side: Side,
    count: usize,
    sizes: Vec<usize>,
    chunks: Vec<ChunkRecord>,
}

fn chunks(inv: &Invocation) -> Result<Outcome, CliError> {
    let (_, s) = surface(inv)?;
    let record = s.to_record();
    let result = ChunkResult {
        index: record.index,
        side: record.side,
        count: record.chunks.len(),
        sizes: record.chunks.iter().map(|c| c.size).collect(),
        chunks: record.chunks,
    };
    let doc = emit(inv, &result, || {
        let sizes: Vec<String> = result.sizes.iter().map(usize::to_string).collect();
        let mut lines = vec![format!("sizes {}", sizes.join(","))];
        for c in &result.chunks {
            lines.push(format!(
                "chunk {} members {}",
                c.defining,
                csv_list(&c.members)
            ));
        }
        lines
    });
    Ok(Outcome::ok(doc))
}

#[derive(Serialize)]
struct TunnelBatch {
    #[serde(serialize_with = "serialize_big")]
    total: num_bigint::BigUint,
    below: u64,
    above: u64,
    systems: Vec<TunnelSystemRecord>,
}

fn tunnel_lines(r: &TunnelSystemRecord) -> Vec<String> {
    let mut lines = vec![format!(
        "{} {} omitted {}",
        csv_list(&r.index),
        r.side,
        r.omitted
    )];
    for t in &r.tunnels {
        lines.push(format!(
            "  {} chunk {} endpoints {},{}",
            t.kind.as_str(),
            t.chunk,
            t.endpoints[0],
            t.endpoints[1]
        ));
    }
    lines
}

fn tunnels(inv: &Invocation) -> Result<Outcome, CliError> {
    let params = inv.params()?;
    if let Some(index) = inv.index_set()? {
        let record = tunnel_system(&canonical_pairing(&index, &params)?)?.to_record();
        let doc = emit(inv, &record, || tunnel_lines(&record));
        return Ok(Outcome::ok(doc));
    }
    let count = count_tunnel_systems(&params)?;
    let systems = enumerate_indices(&params)
        .iter()
        .map(|i| Ok(tunnel_system(&canonical_pairing(i, &params)?)?.to_record()))
        .collect::<Result<Vec<_>, CliError>>()?;
    let result = TunnelBatch {
        total: count.total,
        below: count.below,
        above: count.above,
        systems,
    };
    let doc = emit(inv, &result, || {
        let mut lines: Vec<String> = result.systems.iter().flat_map(tunnel_lines).collect();
        lines.push(format!(
            "total {} below {} above {}",
            result.total, result.below, result.above
        ));
        lines
    });
    Ok(Outcome::ok(doc))
}

fn bounds(inv: &Invocation) -> Result<Outcome, CliError> {
    let n = inv.params()?.n();
    let reports: Vec<StableGenusReport> = if inv.d.is_empty() {
        vec![stable_genus_report(&BridgeParams::new(n)?)]
    } else {
        inv.d
            .iter()
            .map(|&d| Ok(stable_genus_report(&BridgeParams::with_distance(n, d)?)))
            .collect::<Result<_, Error>>()?
    };
    let doc =
        match inv.format {
            Format::Csv => Document::commented(inv, "#", &reports_to_csv(&reports)?),
            _ => emit(inv, &reports, || {
                reports
                    .iter()
                    .map(|r| {
                        let d = r.d.map_or("-".to_string(), |d| d.to_string());
                        let lower = r
                            .cross_side_stable_genus_lower
                            .map_or("-".to_string(), |v| v.to_string());
                        format!(
                        "n {} d {d}: genus {} surfaces <= {} same-side <= {} cross-side >= {lower}",
                        r.n, r.heegaard_genus, r.surface_count_upper, r.same_side_stable_genus_upper
                    )
                    })
                    .collect()
            }),
        };
    Ok(Outcome::ok(doc))
}

fn verify_lines(report: &VerifyReport) -> Vec<String> {
    let mut lines: Vec<String> = report
        .checks
        .iter()
        .map(|c| {
            let n = c.n.map_or("all".to_string(), |n| format!("n={n}"));
            let status = if c.passed() { "PASS" } else { "FAIL" };
            let mut line = format!(
                "[{status}] {} {n}: {} checked, {} failed",
                c.name, c.checked, c.failures
            );
            if let Some(f) = &c.first_failure {
                line.push_str(&format!(" (first: {f})"));
            }
            line
        })
        .collect();
    for c in &report.components {
        let sizes: Vec<String> = c.sizes.iter().map(usize::to_string).collect();
        lines.push(format!("components n={}: ({})", c.n, sizes.join(",")));
    }
    for t in &report.tunnels {
        lines.push(format!(
            "tunnel systems n={}: {} total, {} below, {} above",
            t.n, t.total, t.below, t.above
        ));
    }
    lines
}

fn run_verify(inv: &Invocation) -> Result<Outcome, CliError> {
    let config = VerifyConfig {
        n_max: inv.params()?.n(),
        oracle_cap: inv.oracle_cap,
        graph_cap: inv.graph_cap,
        ..VerifyConfig::default()
    };
    let report = verify(&config)?;
    let doc = emit(inv, &report, || verify_lines(&report));
    let failure = (!report.passed()).then(|| {
        let failed: Vec<String> = report
            .checks
            .iter()
            .filter(|c| !c.passed())
            .map(|c| {
                format!(
                    "{}{}",
                    c.name,
                    c.n.map_or(String::new(), |n| format!(" n={n}"))
                )
            })
            .collect();
        CliError::Verification(format!("failed checks: {}", failed.join(", ")))
    });
    Ok(Outcome { doc, failure })
}
