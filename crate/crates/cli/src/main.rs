mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use spatial_conflict::embedding::{enumerate_embeddings, Equivalence, RotationSystem};
use spatial_conflict::fixtures::{figure, Figure, Sides};
use spatial_conflict::graph::{Cycle, EdgeId, Graph};
use spatial_conflict::io::{
    conflict_graph_dot, read_graph, read_graph_json, signed_graph_dot, signed_graph_from_json,
    GraphJson,
};
use spatial_conflict::maximal_planar::{
    count_all, enumerate_classes, enumerate_labeled, Classing, MaximalPlanarSubgraph,
};
use spatial_conflict::petersen::{
    conjecture_probe, fragment_embeddings, verify_family, Cell, PROBE_STATE_CAP,
};
use spatial_conflict::planarity::is_planar;
use spatial_conflict::realization::{check_linked_pair, realize, PROJECTION_SEED};
use spatial_conflict::signed::{is_balanced, verify_balance, Balance};
use spatial_conflict::spatial::{
    build_conflict_graph, build_strong_conflict_graph, default_budget, fragments_of, Placement,
    SphereSide,
};
use spatial_conflict::tutte::{
    cycle_conflict_graph, is_bipartite, reference_planarity, tutte_planarity, Bipartition,
};

use report::{envelope, to_pretty, write_file, CliError, CliResult, Input};

/// Environment variable holding the default worker count.
const JOBS_ENV: &str = "SPATIAL_CONFLICT_JOBS";

#[derive(Parser)]
#[command(
    name = "spatial-conflict",
    version,
    about = "Signed conflict graphs of embedded maximal planar subgraphs"
)]
struct Cli {
    /// Worker threads; 0 or unset uses every core.
    #[arg(long, global = true, env = JOBS_ENV)]
    jobs: Option<usize>,
    /// What to print on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Also write the JSON report here.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Planarity by cycle conflict graphs, checked against two other tests.
    Planarity {
        /// Graph JSON file.
        #[arg(long)]
        graph: PathBuf,
    },
    /// Fragments of a cycle and their conflict graph.
    ConflictCycle {
        /// Graph JSON file.
        #[arg(long)]
        graph: PathBuf,
        /// Cycle as a comma-separated vertex list.
        #[arg(long)]
        cycle: String,
    },
    /// Sphere embeddings of a planar graph.
    Embeddings {
        /// Graph JSON file.
        #[arg(long)]
        graph: PathBuf,
        /// Identify embeddings under automorphisms and reflection.
        #[arg(long)]
        iso: bool,
    },
    /// Maximal planar subgraphs.
    Mps {
        /// Graph JSON file.
        #[arg(long)]
        graph: PathBuf,
        /// One representative per class of (M, fragments).
        #[arg(long)]
        iso: bool,
    },
    /// Signed conflict graph of one embedded maximal planar subgraph.
    Conflict {
        /// Graph JSON file.
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        pick: MpsPick,
        /// Moves per implicit search; defaults to twice the edge count of M.
        #[arg(long)]
        budget: Option<usize>,
        /// Skip the implicit searches.
        #[arg(long)]
        strong_only: bool,
    },
    /// Balance of a signed graph.
    Balance {
        /// Signed-graph JSON file.
        #[arg(long)]
        signed_graph: PathBuf,
    },
    /// Petersen family checks.
    Petersen {
        #[command(subcommand)]
        command: PetersenCommand,
    },
    /// Spatial realization of M with its fragments.
    Realize {
        #[command(flatten)]
        source: EmbeddedSource,
        /// Fragment edge ids routed outside the sphere; the rest go inside.
        #[arg(long, value_delimiter = ',')]
        outside: Vec<EdgeId>,
        /// Write the polylines as OBJ.
        #[arg(long, value_name = "PATH")]
        obj: Option<PathBuf>,
    },
    /// Search a realization for linked cycles through two fragments.
    LinkCheck {
        #[command(flatten)]
        source: EmbeddedSource,
        /// Fragment pair `f,f2`; defaults to the fixture's first pair.
        #[arg(long, value_delimiter = ',', num_args = 1)]
        pair: Vec<EdgeId>,
        /// Route the pair on the same or opposite sides; defaults to the fixture's choice, else same.
        #[arg(long, value_enum)]
        sides: Option<SidesArg>,
        /// Exit 1 unless the outcome matches.
        #[arg(long, value_enum)]
        expect: Option<Expect>,
    },
}

#[derive(Subcommand)]
enum PetersenCommand {
    /// Maximal planar subgraph counts and conflict-graph balance over the family.
    Verify {
        /// Moves per implicit search; defaults to twice the edge count of M.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Random nonplanar graphs: linkless embeddability against balanced conflict graphs.
    Probe {
        /// Number of random graphs.
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        /// Fewest vertices per sample.
        #[arg(long)]
        min_v: usize,
        /// Most vertices per sample.
        #[arg(long)]
        max_v: usize,
        /// Report file.
        #[arg(long)]
        out: PathBuf,
        /// Moves per implicit search; defaults to twice the edge count of M.
        #[arg(long)]
        budget: Option<usize>,
        /// Distinct states per implicit search.
        #[arg(long, default_value_t = PROBE_STATE_CAP)]
        state_cap: usize,
        /// Where candidate graphs are written; defaults to `<out>.candidates`.
        #[arg(long)]
        dump_dir: Option<PathBuf>,
    },
}

#[derive(Args)]
struct MpsPick {
    /// Index into `mps --iso` order (or `mps` order with --labeled).
    #[arg(long)]
    mps_index: usize,
    /// Index into the inequivalent embeddings of that M.
    #[arg(long, default_value_t = 0)]
    embedding: usize,
    /// Index labeled subgraphs instead of classes.
    #[arg(long)]
    labeled: bool,
}

#[derive(Args)]
struct EmbeddedSource {
    /// Built-in figure fixture.
    #[arg(long, conflicts_with_all = ["graph", "m"])]
    fixture: Option<String>,
    /// Host graph.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Embedded M as graph JSON with rotations.
    #[arg(long, requires = "graph", conflicts_with = "mps_index")]
    m: Option<PathBuf>,
    /// Index into `mps --iso` order, instead of --m.
    #[arg(long, requires = "graph")]
    mps_index: Option<usize>,
    /// Index into the inequivalent embeddings of that M.
    #[arg(long, default_value_t = 0)]
    embedding: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SidesArg {
    Same,
    Opposite,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Expect {
    Linked,
    Unlinked,
}

/// What a command hands back: the report body plus the stdout renderings.
struct Outcome {
    command: &'static str,
    seed: Option<u64>,
    budget: Option<usize>,
    inputs: Vec<Input>,
    result: Value,
    text: String,
    dot: Option<String>,
    failure: Option<String>,
}

impl Outcome {
    fn new(command: &'static str, inputs: Vec<Input>, result: Value, text: String) -> Self {
        Outcome {
            command,
            seed: None,
            budget: None,
            inputs,
            result,
            text,
            dot: None,
            failure: None,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                report::EXIT_USAGE as u8
            } else {
                0
            });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code() as u8)
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(n) = cli.jobs.filter(|&n| n > 0) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let out = match cli.command {
        Command::Planarity { graph } => planarity(&graph)?,
        Command::ConflictCycle { graph, cycle } => conflict_cycle(&graph, &cycle)?,
        Command::Embeddings { graph, iso } => embeddings(&graph, iso)?,
        Command::Mps { graph, iso } => mps(&graph, iso)?,
        Command::Conflict {
            graph,
            pick,
            budget,
            strong_only,
        } => conflict(&graph, &pick, budget, strong_only)?,
        Command::Balance { signed_graph } => balance(&signed_graph)?,
        Command::Petersen { command } => match command {
            PetersenCommand::Verify { budget } => petersen_verify(budget)?,
            PetersenCommand::Probe {
                samples,
                seed,
                min_v,
                max_v,
                out,
                budget,
                state_cap,
                dump_dir,
            } => petersen_probe(
                samples, seed, min_v, max_v, &out, budget, state_cap, dump_dir,
            )?,
        },
        Command::Realize {
            source,
            outside,
            obj,
        } => realize_cmd(&source, &outside, obj.as_deref())?,
        Command::LinkCheck {
            source,
            pair,
            sides,
            expect,
        } => link_check(&source, &pair, sides, expect)?,
    };
    let report = envelope(out.command, out.seed, out.budget, &out.inputs, out.result)?;
    let pretty = to_pretty(&report);
    if let Some(path) = &cli.json {
        write_file(path, &pretty)?;
    }
    match cli.format {
        Format::Text => print!("{}", out.text),
        Format::Json => print!("{pretty}"),
        Format::Dot => match &out.dot {
            Some(d) => print!("{d}"),
            None => {
                return Err(CliError::Usage(format!(
                    "{} has no DOT output",
                    out.command
                )))
            }
        },
    }
    match out.failure {
        Some(m) => Err(CliError::Assertion(m)),
        None => Ok(()),
    }
}

fn load_graph(path: &Path) -> CliResult<Graph> {
    read_graph(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn vertex_list(vs: &[u32]) -> String {
    vs.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

fn planarity(path: &Path) -> CliResult<Outcome> {
    let g = load_graph(path)?;
    let tutte = tutte_planarity(&g);
    let reference = reference_planarity(&g);
    let dmp = is_planar(&g);
    let planar = tutte.is_ok();
    let agree = planar == reference && planar == dmp;
    let witness = tutte.as_ref().err();
    let mut text = format!("{}\n", if planar { "planar" } else { "nonplanar" });
    if let Some(c) = witness {
        text += &format!("witness cycle: {}\n", vertex_list(&c.vertices));
    }
    let result = json!({
        "planar": planar,
        "tutte": planar,
        "reference": reference,
        "demoucron_malgrange_pertuiset": dmp,
        "agree": agree,
        "witness_cycle": witness.map(|c| &c.vertices),
    });
    let mut out = Outcome::new("planarity", vec![Input::new("graph", path)], result, text);
    if !agree {
        out.failure = Some(format!(
            "planarity tests disagree: tutte {planar}, reference {reference}, dmp {dmp}"
        ));
    }
    Ok(out)
}

fn parse_vertices(s: &str) -> CliResult<Vec<u32>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad vertex {t:?} in {s:?}")))
        })
        .collect()
}

fn conflict_cycle(path: &Path, cycle: &str) -> CliResult<Outcome> {
    let g = load_graph(path)?;
    let c = Cycle::from_vertices(&g, &parse_vertices(cycle)?)?;
    let (frags, h) = cycle_conflict_graph(&g, &c)?;
    let bip = is_bipartite(&h);
    let mut text = format!("{} fragments, {} conflicts\n", frags.len(), h.edges.len());
    for (i, f) in frags.iter().enumerate() {
        let att: Vec<u32> = f.attachments.iter().copied().collect();
        text += &format!("  fragment {i}: attachments {}\n", vertex_list(&att));
    }
    for (a, b) in &h.edges {
        text += &format!("  conflict {a} - {b}\n");
    }
    let bipartition = match &bip {
        Bipartition::Coloring(c) => {
            text += "bipartite\n";
            json!({ "bipartite": true, "coloring": c })
        }
        Bipartition::OddCycle(c) => {
            text += &format!("not bipartite, odd cycle of fragments {:?}\n", c);
            json!({ "bipartite": false, "odd_cycle": c })
        }
    };
    let result = json!({
        "cycle": c.vertices,
        "fragments": to_value(&frags),
        "conflict_graph": to_value(&h),
        "bipartition": bipartition,
    });
    Ok(Outcome::new(
        "conflict-cycle",
        vec![Input::new("graph", path)],
        result,
        text,
    ))
}

fn embeddings(path: &Path, iso: bool) -> CliResult<Outcome> {
    let g = load_graph(path)?;
    let eq = if iso {
        Equivalence::Isomorphic
    } else {
        Equivalence::Labeled
    };
    let all = enumerate_embeddings(&g, eq)?;
    let text = format!(
        "{} embeddings ({})\n",
        all.len(),
        if iso { "up to isomorphism" } else { "labeled" }
    );
    let list: Vec<Value> = all
        .iter()
        .map(|rs| json!({ "rotations": GraphJson::from_rotation_system(rs).rotations, "faces": rs.trace_faces().len() }))
        .collect();
    let result = json!({ "equivalence": if iso { "isomorphic" } else { "labeled" }, "count": all.len(), "embeddings": list });
    Ok(Outcome::new(
        "embeddings",
        vec![Input::new("graph", path)],
        result,
        text,
    ))
}

fn mps_list(g: &Graph, iso: bool) -> CliResult<Vec<MaximalPlanarSubgraph>> {
    Ok(if iso {
        enumerate_classes(g, Classing::FragmentIso)?
    } else {
        enumerate_labeled(g)?
    })
}

fn mps_json(i: usize, m: &MaximalPlanarSubgraph) -> Value {
    json!({
        "index": i,
        "m_edges": m.m.edge_count(),
        "fragments": m.fragments.iter().map(|f| (f.edge, f.a, f.b)).collect::<Vec<_>>(),
    })
}

fn mps(path: &Path, iso: bool) -> CliResult<Outcome> {
    let g = load_graph(path)?;
    let counts = count_all(&g)?;
    let list = mps_list(&g, iso)?;
    let mut text = format!(
        "maximal planar subgraphs: {} labeled, {} up to isomorphism of M, {} up to isomorphism of (M, fragments)\n",
        counts.labeled, counts.plain_iso, counts.fragment_iso
    );
    for (i, m) in list.iter().enumerate() {
        let frags: Vec<String> = m
            .fragments
            .iter()
            .map(|f| format!("{}:{}-{}", f.edge, f.a, f.b))
            .collect();
        text += &format!("  M{i}: fragments {}\n", frags.join(" "));
    }
    let result = json!({
        "classing": if iso { "fragment_iso" } else { "labeled" },
        "counts": to_value(&counts),
        "mps": list.iter().enumerate().map(|(i, m)| mps_json(i, m)).collect::<Vec<_>>(),
    });
    Ok(Outcome::new(
        "mps",
        vec![Input::new("graph", path)],
        result,
        text,
    ))
}

fn pick_embedded(
    g: &Graph,
    index: usize,
    embedding: usize,
    labeled: bool,
) -> CliResult<(MaximalPlanarSubgraph, RotationSystem)> {
    let list = mps_list(g, !labeled)?;
    let n = list.len();
    let m = list
        .into_iter()
        .nth(index)
        .ok_or_else(|| CliError::Usage(format!("mps index {index} out of range (0..{n})")))?;
    let embs = fragment_embeddings(&m, Equivalence::Isomorphic)?;
    let k = embs.len();
    let rs = embs
        .into_iter()
        .nth(embedding)
        .ok_or_else(|| CliError::Usage(format!("embedding {embedding} out of range (0..{k})")))?;
    Ok((m, rs))
}

fn balance_text(b: &Balance) -> String {
    match b {
        Balance::Balanced { x, y } => format!(
            "balanced\n  side x: {}\n  side y: {}\n",
            vertex_list(&x.iter().copied().collect::<Vec<_>>()),
            vertex_list(&y.iter().copied().collect::<Vec<_>>())
        ),
        Balance::Unbalanced { cycle } => format!(
            "unbalanced\nnegative cycle: {}\n",
            vertex_list(&cycle.vertices)
        ),
    }
}

fn conflict(
    path: &Path,
    pick: &MpsPick,
    budget: Option<usize>,
    strong_only: bool,
) -> CliResult<Outcome> {
    let g = load_graph(path)?;
    let (m, rs) = pick_embedded(&g, pick.mps_index, pick.embedding, pick.labeled)?;
    let (scg, used) = if strong_only {
        (build_strong_conflict_graph(&g, &m, &rs)?, None)
    } else {
        let b = budget.unwrap_or_else(|| default_budget(&rs));
        (build_conflict_graph(&g, &m, &rs, b)?, Some(b))
    };
    let bal = scg.balance();
    let mut text = format!(
        "M{} embedding {}: {} fragments, {} edges ({} strong), {} undecided pairs\n",
        pick.mps_index,
        pick.embedding,
        scg.fragments.len(),
        scg.edges.len(),
        scg.edges.iter().filter(|e| e.kind.is_strong()).count(),
        scg.undecided.len()
    );
    for e in &scg.edges {
        text += &format!("  {} {} {} ({:?})\n", e.a, e.sign, e.b, e.kind);
    }
    text += &balance_text(&bal);
    let result = json!({
        "mps_index": pick.mps_index,
        "labeled_index": pick.labeled,
        "embedding": pick.embedding,
        "rotations": GraphJson::from_rotation_system(&rs).rotations,
        "conflict_graph": to_value(&scg),
        "balance": to_value(&bal),
    });
    let mut out = Outcome::new("conflict", vec![Input::new("graph", path)], result, text);
    out.budget = used;
    out.dot = Some(conflict_graph_dot(&scg));
    Ok(out)
}

fn balance(path: &Path) -> CliResult<Outcome> {
    let sg = signed_graph_from_json(&read_text(path)?)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let b = is_balanced(&sg);
    let certified = verify_balance(&sg, &b);
    let result = json!({ "balance": to_value(&b), "certificate_valid": certified });
    let mut out = Outcome::new(
        "balance",
        vec![Input::new("signed_graph", path)],
        result,
        balance_text(&b),
    );
    out.dot = Some(signed_graph_dot(&sg));
    if !certified {
        out.failure = Some("balance certificate does not verify".into());
    }
    Ok(out)
}

fn petersen_verify(budget: Option<usize>) -> CliResult<Outcome> {
    let r = verify_family(budget)?;
    let mut text = String::new();
    for m in &r.members {
        text += &format!(
            "{:8} labeled {:4}  iso(M) {:3}  iso(M, fragments) {:3}\n",
            m.name, m.counts.labeled, m.counts.plain_iso, m.counts.fragment_iso
        );
    }
    let mut failures = Vec::new();
    match r.matching_conventions.first() {
        Some(c) => text += &format!("45 maximal planar subgraphs ({c:?} convention)\n"),
        None => {
            let t = &r.totals;
            text += &format!(
                "no convention gives 45: labeled {}, iso(M) {}, iso(M, fragments) {}\n",
                t.labeled, t.plain_iso, t.fragment_iso
            );
            failures.push("count 45 not reproduced".to_string());
        }
    }
    if r.all_unbalanced {
        text += "all conflict graphs unbalanced\n";
    } else {
        text += &format!(
            "{} balanced conflict graphs ({} with complete search), {} undecided pairs\n",
            r.balanced_cases.len(),
            r.balanced_complete.len(),
            r.undecided_pairs
        );
        for (name, m, e) in &r.balanced_cases {
            text += &format!("  balanced: {name} M{m} embedding {e}\n");
        }
        if !r.balanced_complete.is_empty() {
            failures.push(format!(
                "{} balanced conflict graphs with complete search",
                r.balanced_complete.len()
            ));
        }
    }
    text += &format!(
        "K4,4-e maximal planar subgraphs with balanced strong and unbalanced full conflict graph: {}\n",
        r.k44e_strong_balanced_full_unbalanced
    );
    if r.k44e_strong_balanced_full_unbalanced == 0 {
        failures.push("no K4,4-e M with balanced strong and unbalanced full conflict graph".into());
    }
    let mut out = Outcome::new("petersen verify", Vec::new(), to_value(&r), text);
    out.budget = budget;
    out.failure = (!failures.is_empty()).then(|| failures.join("; "));
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn petersen_probe(
    samples: usize,
    seed: u64,
    min_v: usize,
    max_v: usize,
    out_path: &Path,
    budget: Option<usize>,
    state_cap: usize,
    dump_dir: Option<PathBuf>,
) -> CliResult<Outcome> {
    let r = conjecture_probe(samples, min_v, max_v, seed, budget, state_cap)?;
    let mut text = format!("{samples} samples on {min_v}..={max_v} vertices, seed {seed}\n");
    for (cell, n) in &r.contingency {
        text += &format!("  {cell:?}: {n}\n");
    }
    let mut failures = Vec::new();
    for m in &r.family {
        text += &format!("  family {}: {:?}\n", m.name, m.cell);
        if m.cell != Cell::LinkedAllUnbalanced {
            failures.push(m.name.clone());
        }
    }
    text += &format!("  K5: {:?}\n", r.k5.cell);
    if !r.candidates.is_empty() {
        let dir = dump_dir.unwrap_or_else(|| {
            let mut p = out_path.as_os_str().to_owned();
            p.push(".candidates");
            PathBuf::from(p)
        });
        std::fs::create_dir_all(&dir)?;
        for s in r
            .results
            .iter()
            .filter(|s| s.classification.cell.is_candidate())
        {
            write_file(
                &dir.join(format!("sample-{}.graph.json", s.id)),
                &(spatial_conflict::io::graph_to_json(&s.graph) + "\n"),
            )?;
            write_file(
                &dir.join(format!("sample-{}.witness.json", s.id)),
                &to_pretty(&to_value(&s.classification)),
            )?;
        }
        text += &format!(
            "{} candidate graphs written to {}\n",
            r.candidates.len(),
            dir.display()
        );
    }
    let mut out = Outcome::new("petersen probe", Vec::new(), to_value(&r), text);
    out.seed = Some(seed);
    out.budget = budget;
    let report = envelope(out.command, out.seed, out.budget, &[], out.result.clone())?;
    write_file(out_path, &to_pretty(&report))?;
    if !failures.is_empty() {
        out.failure = Some(format!(
            "family members outside (linked, all unbalanced): {}",
            failures.join(", ")
        ));
    }
    Ok(out)
}

/// Host graph, embedded M, recorded inputs and the fixture if one was named.
type Embedded = (Graph, RotationSystem, Vec<Input>, Option<Figure>);

fn resolve(src: &EmbeddedSource) -> CliResult<Embedded> {
    if let Some(name) = &src.fixture {
        let fig = figure(name)?;
        let rs = fig
            .embedding
            .clone()
            .ok_or_else(|| CliError::Usage(format!("fixture {name} has no embedded M")))?;
        return Ok((fig.graph.clone(), rs, Vec::new(), Some(fig)));
    }
    let path = src
        .graph
        .as_ref()
        .ok_or_else(|| CliError::Usage("give --fixture or --graph".into()))?;
    let g = load_graph(path)?;
    let mut inputs = vec![Input::new("graph", path)];
    let rs = match (&src.m, src.mps_index) {
        (Some(mp), _) => {
            inputs.push(Input::new("m", mp));
            let rs = read_graph_json(mp)
                .and_then(|j| j.to_rotation_system())
                .map_err(|e| CliError::Usage(format!("{}: {e}", mp.display())))?
                .ok_or_else(|| CliError::Usage(format!("{} has no rotations", mp.display())))?;
            if !rs.graph().is_subgraph_of(&g) {
                return Err(CliError::Usage(
                    "M is not a subgraph of the host graph".into(),
                ));
            }
            rs
        }
        (None, Some(k)) => pick_embedded(&g, k, src.embedding, false)?.1,
        (None, None) => {
            return Err(CliError::Usage(
                "give --m or --mps-index with --graph".into(),
            ))
        }
    };
    Ok((g, rs, inputs, None))
}

fn realize_cmd(src: &EmbeddedSource, outside: &[EdgeId], obj: Option<&Path>) -> CliResult<Outcome> {
    let (g, rs, inputs, fig) = resolve(src)?;
    let frags = fragments_of(&g, rs.graph());
    for e in outside {
        if !frags.iter().any(|f| f.edge == *e) {
            return Err(CliError::Usage(format!("edge {e} is not a fragment")));
        }
    }
    let sides: Placement = frags
        .iter()
        .map(|f| {
            (
                f.edge,
                if outside.contains(&f.edge) {
                    SphereSide::Outside
                } else {
                    SphereSide::Inside
                },
            )
        })
        .collect();
    let sr = realize(&rs, &frags, &sides)?;
    if let Some(p) = obj {
        write_file(p, &sr.to_obj())?;
    }
    let text = format!(
        "realized {} vertices and {} polylines without crossings\n",
        sr.vertices.len(),
        sr.edges.len()
    );
    let polylines: Value = serde_json::from_str(&sr.to_json()).expect("realization JSON");
    let result = json!({
        "fixture": fig.map(|f| f.name),
        "sides": to_value(&sides),
        "realization": polylines,
    });
    Ok(Outcome::new("realize", inputs, result, text))
}

fn link_check(
    src: &EmbeddedSource,
    pair: &[EdgeId],
    sides: Option<SidesArg>,
    expect: Option<Expect>,
) -> CliResult<Outcome> {
    let (g, rs, inputs, fig) = resolve(src)?;
    let fixture_pair = fig.as_ref().and_then(|f| f.pairs.first());
    let (f, f2) = match (pair, fixture_pair) {
        ([a, b], _) => (*a, *b),
        ([], Some(p)) => (p.f, p.f2),
        _ => return Err(CliError::Usage("give --pair f,f2".into())),
    };
    let same = match (sides, fixture_pair) {
        (Some(s), _) => s == SidesArg::Same,
        (None, Some(p)) if pair.is_empty() => p.sides == Sides::Same,
        _ => true,
    };
    let frags = fragments_of(&g, rs.graph());
    let get = |e: EdgeId| {
        frags
            .iter()
            .find(|x| x.edge == e)
            .copied()
            .ok_or_else(|| CliError::Usage(format!("edge {e} is not a fragment")))
    };
    let (fa, fb) = (get(f)?, get(f2)?);
    let placement: Placement = [
        (f, SphereSide::Inside),
        (
            f2,
            if same {
                SphereSide::Inside
            } else {
                SphereSide::Outside
            },
        ),
    ]
    .into();
    let found = check_linked_pair(rs.graph(), &rs, &fa, &fb, &placement)?;
    let text = match &found {
        Some(p) => format!(
            "linked: cycles ({}) and ({}), linking number {}\n",
            vertex_list(&p.first.vertices),
            vertex_list(&p.second.vertices),
            p.linking_number
        ),
        None => "no linked cycle pair in this realization\n".to_string(),
    };
    let result = json!({
        "fixture": fig.map(|f| f.name),
        "pair": [f, f2],
        "sides": if same { "same" } else { "opposite" },
        "linked_pair": to_value(&found),
    });
    let mut out = Outcome::new("link-check", inputs, result, text);
    out.seed = Some(PROJECTION_SEED);
    out.failure = match (expect, found.is_some()) {
        (Some(Expect::Linked), false) => Some("expected a linked pair".into()),
        (Some(Expect::Unlinked), true) => Some("expected no linked pair".into()),
        _ => None,
    };
    Ok(out)
}
