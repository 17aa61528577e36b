//! `k3fib`: classification, heights, torsion, neighbor steps, lattice tables and
//! corpus verification from the command line.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on usage or input errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use k3fib::algebra::FieldKind;
use k3fib::corpus::{self, FibrationRecord};
use k3fib::lattice::{self, RootLabel};
use k3fib::model::{format_model, parse_model, parse_point, SurfacePoint, WeierstrassModel};
use k3fib::mordell::{self, HeightContext, RHO};
use k3fib::neighbor::{self, DivisorSpec};
use k3fib::tate::{classify_all, FiberConfiguration};

#[derive(Parser)]
#[command(
    name = "k3fib",
    version,
    about = "Fibrations of the supersingular K3 surface of Artin invariant 1 in characteristic 3"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Worker threads for corpus verification (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Singular fibers of a model file.
    Classify {
        model: PathBuf,
        /// Treat the model as defined over this field (F3 or F9).
        #[arg(long)]
        field: Option<String>,
    },
    /// Néron–Tate heights of sections, written `(x ; y)`.
    Height {
        model: PathBuf,
        #[arg(required = true)]
        sections: Vec<String>,
    },
    /// Order of a section in the Mordell–Weil group (`inf` if it is not torsion).
    Torsion {
        model: PathBuf,
        section: String,
        #[arg(long, default_value_t = 12)]
        bound: u32,
    },
    /// Check disc NS = -9 from the fibers, the torsion order and generators of the free part.
    Disc {
        model: PathBuf,
        #[arg(long)]
        torsion: u32,
        sections: Vec<String>,
    },
    /// A 2-neighbor step: elliptic parameter and new model.
    Neighbor {
        model: PathBuf,
        divisor: PathBuf,
        /// Compare the result with this model.
        #[arg(long)]
        target: Option<PathBuf>,
    },
    /// Root lattice tables.
    Lattice {
        #[command(subcommand)]
        op: LatticeOp,
    },
    /// The catalog of 52 fibrations.
    Corpus {
        #[command(subcommand)]
        op: CorpusOp,
    },
}

#[derive(Subcommand)]
enum LatticeOp {
    /// Determinant of a root lattice such as E7 or A11.
    Det { label: String },
    /// Orthogonal complement of A2 (and of A2^2) in a root lattice.
    A2comp { label: String },
    /// Root systems of the 23 Niemeier lattices with roots.
    Niemeier,
    /// Fibration lattices from A2^2 embeddings, compared with the printed table.
    Enumerate,
}

#[derive(Subcommand)]
enum CorpusOp {
    /// Verify records (all, or one with --id); also replays the recorded neighbor steps.
    Verify {
        #[arg(long)]
        id: Option<u32>,
        /// A corpus file instead of the built-in one.
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Print a record.
    Show {
        #[arg(long)]
        id: u32,
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

/// Failure classes, mapped to exit codes.
enum Failure {
    Usage(String),
    Verification(String),
}

impl From<k3fib::Error> for Failure {
    fn from(e: k3fib::Error) -> Self {
        match e {
            k3fib::Error::Parse(_) => Failure::Usage(e.to_string()),
            other => Failure::Verification(other.to_string()),
        }
    }
}

type Outcome = std::result::Result<bool, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_model(path: &Path) -> Result<WeierstrassModel, Failure> {
    Ok(parse_model(&read(path)?)?)
}

fn emit<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value).expect("serializable report")),
        Format::Text => print!("{}", text()),
    }
}

#[derive(Serialize)]
struct FiberRow {
    place: String,
    kodaira: String,
    lattice: Option<String>,
    v_delta: Option<u32>,
    components: u32,
}

#[derive(Serialize)]
struct ClassifyReport {
    field: String,
    quasi_elliptic: bool,
    fibers: Vec<FiberRow>,
    nonrational_i1: u32,
    sum_v_delta: Option<u32>,
    root_system: String,
    shioda_tate_rank: Option<u32>,
}

fn classify_report(m: &WeierstrassModel, cfg: &FiberConfiguration) -> ClassifyReport {
    ClassifyReport {
        field: m.field.to_string(),
        quasi_elliptic: cfg.quasi_elliptic,
        fibers: cfg
            .fibers
            .iter()
            .map(|f| FiberRow {
                place: f.place.to_string(),
                kodaira: f.kodaira.to_string(),
                lattice: f.lattice_label().map(|l| l.to_string()),
                v_delta: f.v_delta,
                components: f.component_count(),
            })
            .collect(),
        nonrational_i1: cfg.nonrational_i1,
        sum_v_delta: (!cfg.quasi_elliptic).then(|| cfg.sum_v_delta()),
        root_system: lattice::RootSystem::new(cfg.root_labels()).to_string(),
        shioda_tate_rank: lattice::shioda_tate_mw_rank(cfg, RHO).ok(),
    }
}

fn classify(format: Format, path: &Path, field: Option<&str>) -> Outcome {
    let mut m = load_model(path)?;
    if let Some(f) = field {
        let kind = FieldKind::parse(f)?;
        if kind == FieldKind::F3 && !m.coeffs().iter().all(|c| c.is_over_f3()) {
            return Err(Failure::Usage("the model has coefficients outside F3".into()));
        }
        m.field = kind;
    }
    let cfg = classify_all(&m)?;
    let rep = classify_report(&m, &cfg);
    emit(format, &rep, || {
        let mut s = String::new();
        for f in &cfg.fibers {
            s += &format!("{}\n", f.report_line());
        }
        if cfg.nonrational_i1 > 0 {
            s += &format!("I1 fibers off F9-rational places: {}\n", cfg.nonrational_i1);
        }
        s += &format!("root system: {}\n", rep.root_system);
        if let Some(v) = rep.sum_v_delta {
            s += &format!("sum v(Delta) = {v}\n");
        }
        if let Some(r) = rep.shioda_tate_rank {
            s += &format!("Shioda-Tate MW rank: {r}\n");
        }
        s
    });
    Ok(true)
}

fn sections(texts: &[String]) -> Result<Vec<SurfacePoint>, Failure> {
    texts.iter().map(|t| parse_point(t).map_err(Failure::from)).collect()
}

#[derive(Serialize)]
struct HeightRow {
    section: String,
    intersection_with_zero: i64,
    height: String,
}

fn height(format: Format, path: &Path, texts: &[String]) -> Outcome {
    let ctx = HeightContext::new(load_model(path)?)?;
    let pts = sections(texts)?;
    let mut rows = Vec::new();
    for (t, p) in texts.iter().zip(&pts) {
        rows.push(HeightRow {
            section: t.clone(),
            intersection_with_zero: mordell::intersect_with_zero(&ctx, p)?,
            height: mordell::height(&ctx, p)?.to_string(),
        });
    }
    let gram = if pts.len() > 1 { Some(mordell::height_gram(&ctx, &pts)?) } else { None };
    let gram_text: Option<Vec<Vec<String>>> =
        gram.as_ref().map(|g| g.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect());
    #[derive(Serialize)]
    struct Out {
        sections: Vec<HeightRow>,
        gram: Option<Vec<Vec<String>>>,
    }
    let out = Out { sections: rows, gram: gram_text };
    emit(format, &out, || {
        let mut s = String::new();
        for r in &out.sections {
            s += &format!("{}: P.O = {}, h = {}\n", r.section, r.intersection_with_zero, r.height);
        }
        if let Some(g) = &out.gram {
            s += "height pairing:\n";
            for row in g {
                s += &format!("  {}\n", row.join(" "));
            }
        }
        s
    });
    Ok(true)
}

fn torsion(format: Format, path: &Path, text: &str, bound: u32) -> Outcome {
    let ctx = HeightContext::new(load_model(path)?)?;
    let p = parse_point(text)?;
    let order = mordell::torsion_order(&ctx, &p, bound)?;
    #[derive(Serialize)]
    struct Out {
        section: String,
        order: Option<u32>,
    }
    let out = Out { section: text.to_string(), order };
    emit(format, &out, || format!("{}: order {}\n", text, order.map_or("inf".to_string(), |n| n.to_string())));
    Ok(true)
}

fn disc(format: Format, path: &Path, tor: u32, texts: &[String]) -> Outcome {
    let ctx = HeightContext::new(load_model(path)?)?;
    let pts = sections(texts)?;
    let gram = mordell::height_gram(&ctx, &pts)?;
    let rank = lattice::shioda_tate_mw_rank(&ctx.config, RHO)?;
    if pts.len() as u32 != rank {
        return Err(Failure::Usage(format!("{} sections given for Mordell-Weil rank {rank}", pts.len())));
    }
    let d = mordell::ns_disc_check(&ctx.config, tor, &gram)?;
    emit(format, &d, || {
        format!(
            "disc trivial = {}, det MWL = {}, |tors| = {}, disc NS = {} ({})\n",
            d.disc_trivial,
            d.disc_mwl,
            d.torsion,
            d.disc_ns,
            if d.pass { "pass" } else { "FAIL" }
        )
    });
    Ok(d.pass)
}

fn neighbor_cmd(format: Format, model: &Path, divisor: &Path, target: Option<&Path>) -> Outcome {
    let m = load_model(model)?;
    let f = DivisorSpec::parse(&read(divisor)?)?;
    let res = neighbor::neighbor_step(&m, &f)?;
    let comparison = match target {
        Some(t) => Some(neighbor::compare_models(&res.model, &load_model(t)?)?),
        None => None,
    };
    let rep = classify_report(&res.model, &res.config);
    #[derive(Serialize)]
    struct Out<'a> {
        parameter: String,
        dimension: usize,
        model: String,
        fibers: &'a ClassifyReport,
        pole_mismatches: &'a [String],
        comparison: &'a Option<neighbor::Comparison>,
    }
    let out = Out {
        parameter: res.parameter.to_string(),
        dimension: res.parameter.dimension,
        model: format_model(&res.model),
        fibers: &rep,
        pole_mismatches: &res.pole_mismatches,
        comparison: &comparison,
    };
    emit(format, &out, || {
        let mut s = format!("# {}\n# solution space modulo constants: dimension {}\n", out.parameter, out.dimension);
        s += &out.model;
        s += &format!("# fibers: {}\n", rep.root_system);
        for p in out.pole_mismatches {
            s += &format!("# pole mismatch: {p}\n");
        }
        if let Some(c) = &comparison {
            s += &format!(
                "# target fibers {}; identified = {}; base change {}; map {}\n",
                c.target_fibers,
                c.identified,
                c.base_change.as_deref().unwrap_or("-"),
                c.map.as_deref().unwrap_or("-")
            );
        }
        s
    });
    let ok = res.pole_mismatches.is_empty() && comparison.as_ref().is_none_or(|c| c.identified);
    Ok(ok)
}

fn lattice_cmd(format: Format, op: &LatticeOp) -> Outcome {
    match op {
        LatticeOp::Det { label } => {
            let l = RootLabel::parse(label)?;
            let d = lattice::gram_det(l)?;
            #[derive(Serialize)]
            struct Out {
                label: String,
                det: i64,
                formula: i64,
            }
            let out = Out { label: l.to_string(), det: d, formula: l.det_formula() };
            emit(format, &out, || format!("{d}\n"));
            Ok(d == l.det_formula())
        }
        LatticeOp::A2comp { label } => {
            let l = RootLabel::parse(label)?;
            let one = lattice::a2_complement(l);
            let two = lattice::a2sq_complement(l);
            #[derive(Serialize)]
            struct Out {
                label: String,
                a2: Option<String>,
                a2_squared: Option<String>,
            }
            let out =
                Out { label: l.to_string(), a2: one.map(|r| r.to_string()), a2_squared: two.map(|r| r.to_string()) };
            emit(format, &out, || {
                format!(
                    "A2 in {}: {}\nA2^2 in {}: {}\n",
                    out.label,
                    out.a2.as_deref().unwrap_or("none"),
                    out.label,
                    out.a2_squared.as_deref().unwrap_or("none")
                )
            });
            Ok(true)
        }
        LatticeOp::Niemeier => {
            let rows: Vec<String> = lattice::niemeier_roots().iter().map(|r| r.to_string()).collect();
            emit(format, &rows, || rows.iter().map(|r| format!("{r}\n")).collect());
            Ok(true)
        }
        LatticeOp::Enumerate => {
            let rows = lattice::enumerate_fibration_lattices();
            let cmp = lattice::compare_with_table(&rows);
            #[derive(Serialize)]
            struct Out<'a> {
                rows: &'a [lattice::FibrationLattice],
                comparison: &'a lattice::TableComparison,
            }
            emit(format, &Out { rows: &rows, comparison: &cmp }, || {
                let mut s = String::new();
                for r in &rows {
                    s += &format!(
                        "{:<22} {:<4} {:<22} mw_rank={}\n",
                        r.source.to_string(),
                        r.code,
                        r.roots.to_string(),
                        r.mw_rank
                    );
                }
                s += &format!(
                    "{} rows; {} match the printed table, {} errata, {} missing, {} extra\n",
                    rows.len(),
                    cmp.matched,
                    cmp.errata.len(),
                    cmp.missing.len(),
                    cmp.extra.len()
                );
                for e in &cmp.errata {
                    s += &format!(
                        "erratum: printed {} {} {} / computed {}\n",
                        e.printed.source, e.printed.code, e.printed.roots, e.computed.roots
                    );
                }
                s
            });
            Ok(cmp.is_consistent())
        }
    }
}

fn records(file: Option<&Path>) -> Result<Vec<FibrationRecord>, Failure> {
    Ok(match file {
        Some(p) => corpus::parse_corpus(&read(p)?)?,
        None => corpus::builtin_corpus()?,
    })
}

fn corpus_cmd(format: Format, op: &CorpusOp) -> Outcome {
    match op {
        CorpusOp::Verify { id, file } => {
            let recs = records(file.as_deref())?;
            let selected: Vec<FibrationRecord> = match id {
                Some(n) => {
                    let r =
                        recs.iter().find(|r| r.id == *n).ok_or_else(|| Failure::Usage(format!("no fibration {n}")))?;
                    vec![r.clone()]
                }
                None => recs.clone(),
            };
            let summary = corpus::verify_all(&selected);
            let step_ids: Vec<u32> = selected.iter().filter(|r| r.derived_from.is_some()).map(|r| r.id).collect();
            let mut steps = Vec::new();
            let mut step_errors = Vec::new();
            for sid in step_ids {
                match corpus::verify_step(&recs, sid) {
                    Ok(s) => steps.push(s),
                    Err(e) => step_errors.push(format!("step to {sid}: {e}")),
                }
            }
            #[derive(Serialize)]
            struct Out<'a> {
                summary: &'a corpus::CorpusSummary,
                steps: &'a [corpus::StepReport],
                step_errors: &'a [String],
            }
            let ok = summary.failures == 0 && step_errors.is_empty() && steps.iter().all(|s| s.passed());
            emit(format, &Out { summary: &summary, steps: &steps, step_errors: &step_errors }, || {
                let mut s = String::new();
                for r in &summary.reports {
                    s += &corpus::render_report(r);
                }
                for st in &steps {
                    s += &corpus::render_step(st);
                }
                for e in &step_errors {
                    s += &format!("FAIL {e}\n");
                }
                s += &format!(
                    "{} records: fibers match {}, sum v(Delta) = 24 on {} of {} elliptic, {} with failures, {} errata\n",
                    summary.records,
                    summary.fibers_matched,
                    summary.sum_v_delta_ok,
                    summary.elliptic,
                    summary.failures,
                    summary.errata.len()
                );
                s
            });
            Ok(ok)
        }
        CorpusOp::Show { id, file } => {
            let recs = records(file.as_deref())?;
            let r = recs.iter().find(|r| r.id == *id).ok_or_else(|| Failure::Usage(format!("no fibration {id}")))?;
            #[derive(Serialize)]
            struct Out {
                id: u32,
                printed: String,
                model: String,
                header: String,
                fibers: Vec<(String, String)>,
                sections: Vec<(String, String)>,
                mw_rank: u32,
                torsion: Option<u32>,
                derived_from: Option<(u32, String)>,
                notes: Vec<String>,
            }
            let out = Out {
                id: r.id,
                printed: r.printed.clone(),
                model: format_model(&r.model),
                header: r.header.to_string(),
                fibers: r
                    .fibers
                    .iter()
                    .map(|f| (f.place.as_ref().map_or("?".into(), |p| p.to_string()), f.label.to_string()))
                    .collect(),
                sections: r.effective_sections().iter().map(|s| (s.kind.to_string(), s.text.clone())).collect(),
                mw_rank: r.mw_rank,
                torsion: r.torsion,
                derived_from: r.derived_from.clone(),
                notes: r.notes.clone(),
            };
            emit(format, &out, || {
                let mut s = format!("fibration {}: {}\n{}", out.id, out.printed, out.model);
                s += &format!("header: {}\n", out.header);
                for (p, l) in &out.fibers {
                    s += &format!("fiber {l} at {p}\n");
                }
                for (k, t) in &out.sections {
                    s += &format!("section {k} {t}\n");
                }
                s += &format!("mw_rank: {}\n", out.mw_rank);
                if let Some(t) = out.torsion {
                    s += &format!("torsion: {t}\n");
                }
                if let Some((src, d)) = &out.derived_from {
                    s += &format!("derived from {src} with {d}\n");
                }
                for n in &out.notes {
                    s += &format!("note: {n}\n");
                }
                s
            });
            Ok(true)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let f = cli.format;
    match &cli.command {
        Command::Classify { model, field } => classify(f, model, field.as_deref()),
        Command::Height { model, sections } => height(f, model, sections),
        Command::Torsion { model, section, bound } => torsion(f, model, section, *bound),
        Command::Disc { model, torsion: t, sections } => disc(f, model, *t, sections),
        Command::Neighbor { model, divisor, target } => neighbor_cmd(f, model, divisor, target.as_deref()),
        Command::Lattice { op } => lattice_cmd(f, op),
        Command::Corpus { op } => corpus_cmd(f, op),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Verification(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
