//! The catalog of 52 fibrations and its verification harness.
//!
//! The corpus file is a list of blocks:
//!
//! ```text
//! [fibration 5]
//! printed = y^2 = x^3-t^3x^2+t^3x
//! a2 = -t^3
//! a4 = t^3
//! a6 = 0
//! header = E7 A2 D10
//! fiber = 0 E7              # place (`0`, `-1+i`, `inf`, or `?`) and root lattice
//! section = torsion(2) (0,0)
//! section = non-torsion (1,1)
//! mw_rank = 1
//! torsion = 2               # order of the torsion group, when stated
//! claim_height = 2 5/2      # printed height of section 2
//! claim_disc_trivial = 144  # printed absolute discriminant of the trivial lattice
//! corrected_section = 1 torsion(4) (-t^3 ; i*t^3)
//! derived_from = 1 fib5_from_1.div  # neighbor step: source record and divisor file
//! source_a2 = ...           # the source equation as quoted for the step, when it
//! source_a4 = ...           # differs from the source record's own equation
//! source_a6 = ...
//! note = free text
//! ```
//!
//! Printed values are kept verbatim. A `corrected_section` replaces the numbered
//! printed section for the checks that need a valid section; the printed one is still
//! checked and its failure reported.

use std::collections::BTreeSet;

use num_rational::Rational64;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{parse_poly, Place};
use crate::error::{Error, Result};
use crate::lattice::{shioda_tate_mw_rank, trivial_lattice, RootLabel, RootSystem};
use crate::model::format_model;
use crate::model::parse_point;
use crate::model::{is_on_curve, validate_k3, K3Verdict, SurfacePoint, WeierstrassModel};
use crate::mordell::{self, HeightContext, RHO};
use crate::neighbor::{compare_models, neighbor_step, Comparison, DivisorSpec};

/// The corpus shipped with the crate.
pub const BUILTIN_CORPUS: &str = include_str!("../data/corpus.txt");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SectionKind {
    Torsion(u32),
    NonTorsion,
    Unknown,
}

impl SectionKind {
    fn parse(s: &str) -> Result<SectionKind> {
        if s == "non-torsion" {
            return Ok(SectionKind::NonTorsion);
        }
        if s == "?" {
            return Ok(SectionKind::Unknown);
        }
        s.strip_prefix("torsion(")
            .and_then(|r| r.strip_suffix(')'))
            .and_then(|n| n.parse().ok())
            .map(SectionKind::Torsion)
            .ok_or_else(|| Error::Parse(format!("unknown section kind `{s}`")))
    }
}

impl std::fmt::Display for SectionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SectionKind::Torsion(n) => write!(f, "torsion({n})"),
            SectionKind::NonTorsion => f.write_str("non-torsion"),
            SectionKind::Unknown => f.write_str("?"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SectionEntry {
    pub kind: SectionKind,
    pub text: String,
    pub point: SurfacePoint,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpectedFiber {
    pub place: Option<Place>,
    pub label: RootLabel,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FibrationRecord {
    pub id: u32,
    pub printed: String,
    pub model: WeierstrassModel,
    pub header: RootSystem,
    pub fibers: Vec<ExpectedFiber>,
    pub sections: Vec<SectionEntry>,
    /// `(index of the printed section, replacement)`, 1-based.
    pub corrected_sections: Vec<(usize, SectionEntry)>,
    pub mw_rank: u32,
    pub torsion: Option<u32>,
    pub claim_heights: Vec<(usize, Rational64)>,
    pub claim_disc_trivial: Option<i64>,
    pub derived_from: Option<(u32, String)>,
    pub source_model: Option<WeierstrassModel>,
    pub notes: Vec<String>,
}

impl FibrationRecord {
    /// The fiber lattices the record claims: the table when printed, else the header.
    pub fn expected_labels(&self) -> RootSystem {
        if self.fibers.is_empty() {
            self.header.clone()
        } else {
            RootSystem::new(self.fibers.iter().map(|f| f.label).collect())
        }
    }

    /// Printed sections with corrections substituted.
    pub fn effective_sections(&self) -> Vec<SectionEntry> {
        let mut out = self.sections.clone();
        for (k, s) in &self.corrected_sections {
            if *k >= 1 && *k <= out.len() {
                out[*k - 1] = s.clone();
            } else {
                out.push(s.clone());
            }
        }
        out
    }
}

#[derive(Default)]
struct Draft {
    id: u32,
    line: usize,
    printed: String,
    coeffs: [Option<String>; 3],
    header: Option<RootSystem>,
    fibers: Vec<ExpectedFiber>,
    sections: Vec<SectionEntry>,
    corrected: Vec<(usize, SectionEntry)>,
    mw_rank: Option<u32>,
    torsion: Option<u32>,
    claim_heights: Vec<(usize, Rational64)>,
    claim_disc: Option<i64>,
    derived_from: Option<(u32, String)>,
    source: [Option<String>; 3],
    notes: Vec<String>,
}

impl Draft {
    fn finish(self) -> Result<FibrationRecord> {
        let err = |m: &str| Error::Parse(format!("fibration {} (line {}): {m}", self.id, self.line));
        let mut polys = Vec::new();
        for c in &self.coeffs {
            polys.push(match c {
                None => return Err(err("missing coefficient")),
                Some(s) => parse_poly(s)?,
            });
        }
        let [a2, a4, a6]: [_; 3] = polys.try_into().expect("three coefficients");
        let source_model = match &self.source {
            [None, None, None] => None,
            [Some(b2), Some(b4), Some(b6)] => {
                Some(WeierstrassModel::new(parse_poly(b2)?, parse_poly(b4)?, parse_poly(b6)?))
            }
            _ => return Err(err("source_a2, source_a4 and source_a6 go together")),
        };
        Ok(FibrationRecord {
            id: self.id,
            printed: self.printed,
            model: WeierstrassModel::new(a2, a4, a6),
            header: self.header.ok_or_else(|| err("missing header"))?,
            fibers: self.fibers,
            sections: self.sections,
            corrected_sections: self.corrected,
            mw_rank: self.mw_rank.ok_or_else(|| err("missing mw_rank"))?,
            torsion: self.torsion,
            claim_heights: self.claim_heights,
            claim_disc_trivial: self.claim_disc,
            derived_from: self.derived_from,
            source_model,
            notes: self.notes,
        })
    }
}

fn parse_section(value: &str) -> Result<SectionEntry> {
    let (kind, point) =
        value.split_once(' ').ok_or_else(|| Error::Parse(format!("section `{value}` needs a kind and a point")))?;
    let text = point.trim().to_string();
    Ok(SectionEntry { kind: SectionKind::parse(kind)?, point: parse_point(&text)?, text })
}

fn parse_rational(s: &str) -> Result<Rational64> {
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    match s.split_once('/') {
        Some((a, b)) => {
            let (a, b): (i64, i64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
            if b == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(a, b))
        }
        None => Ok(Rational64::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

/// Parse a corpus file. Records must have distinct ids; errors name the line.
pub fn parse_corpus(text: &str) -> Result<Vec<FibrationRecord>> {
    let mut out: Vec<FibrationRecord> = Vec::new();
    let mut cur: Option<Draft> = None;
    for (k, raw) in text.lines().enumerate() {
        let lineno = k + 1;
        let line = match raw.find(" #") {
            Some(pos) => &raw[..pos],
            None if raw.trim_start().starts_with('#') => "",
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let at = |e: Error| Error::Parse(format!("line {lineno}: {e}"));
        if let Some(h) = line.strip_prefix("[fibration ").and_then(|r| r.strip_suffix(']')) {
            if let Some(d) = cur.take() {
                out.push(d.finish()?);
            }
            let id: u32 = h.trim().parse().map_err(|_| Error::Parse(format!("line {lineno}: bad id `{h}`")))?;
            if out.iter().any(|r| r.id == id) {
                return Err(Error::Parse(format!("line {lineno}: duplicate fibration {id}")));
            }
            cur = Some(Draft { id, line: lineno, ..Draft::default() });
            continue;
        }
        let d = cur.as_mut().ok_or_else(|| Error::Parse(format!("line {lineno}: entry outside a block")))?;
        let (key, value) = line
            .split_once('=')
            .map(|(a, b)| (a.trim(), b.trim()))
            .ok_or_else(|| Error::Parse(format!("line {lineno}: expected `key = value`")))?;
        match key {
            "printed" => d.printed = value.to_string(),
            "a2" => d.coeffs[0] = Some(value.to_string()),
            "a4" => d.coeffs[1] = Some(value.to_string()),
            "a6" => d.coeffs[2] = Some(value.to_string()),
            "header" => d.header = Some(RootSystem::parse(value).map_err(at)?),
            "fiber" => {
                let (p, l) = value
                    .split_once(' ')
                    .ok_or_else(|| Error::Parse(format!("line {lineno}: fiber needs place and label")))?;
                let place = if p == "?" { None } else { Some(Place::parse(p).map_err(at)?) };
                d.fibers.push(ExpectedFiber { place, label: RootLabel::parse(l).map_err(at)? });
            }
            "section" => d.sections.push(parse_section(value).map_err(at)?),
            "corrected_section" => {
                let (idx, rest) = value
                    .split_once(' ')
                    .ok_or_else(|| Error::Parse(format!("line {lineno}: corrected_section needs an index")))?;
                let idx: usize = idx.parse().map_err(|_| Error::Parse(format!("line {lineno}: bad index")))?;
                d.corrected.push((idx, parse_section(rest.trim()).map_err(at)?));
            }
            "mw_rank" => {
                d.mw_rank = Some(value.parse().map_err(|_| Error::Parse(format!("line {lineno}: bad mw_rank")))?)
            }
            "torsion" => {
                d.torsion = Some(value.parse().map_err(|_| Error::Parse(format!("line {lineno}: bad torsion")))?)
            }
            "claim_height" => {
                let (idx, h) = value
                    .split_once(' ')
                    .ok_or_else(|| Error::Parse(format!("line {lineno}: claim_height needs index and value")))?;
                let idx: usize = idx.parse().map_err(|_| Error::Parse(format!("line {lineno}: bad index")))?;
                d.claim_heights.push((idx, parse_rational(h).map_err(at)?));
            }
            "claim_disc_trivial" => {
                d.claim_disc =
                    Some(value.parse().map_err(|_| Error::Parse(format!("line {lineno}: bad discriminant")))?)
            }
            "derived_from" => {
                let (src, file) = value
                    .split_once(' ')
                    .ok_or_else(|| Error::Parse(format!("line {lineno}: derived_from needs id and file")))?;
                let src: u32 = src.parse().map_err(|_| Error::Parse(format!("line {lineno}: bad id")))?;
                d.derived_from = Some((src, file.trim().to_string()));
            }
            "source_a2" => d.source[0] = Some(value.to_string()),
            "source_a4" => d.source[1] = Some(value.to_string()),
            "source_a6" => d.source[2] = Some(value.to_string()),
            "note" => d.notes.push(value.to_string()),
            other => return Err(Error::Parse(format!("line {lineno}: unknown key `{other}`"))),
        }
    }
    if let Some(d) = cur.take() {
        out.push(d.finish()?);
    }
    out.sort_by_key(|r| r.id);
    Ok(out)
}

pub fn load_corpus(path: &std::path::Path) -> Result<Vec<FibrationRecord>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_corpus(&text)
}

pub fn builtin_corpus() -> Result<Vec<FibrationRecord>> {
    parse_corpus(BUILTIN_CORPUS)
}

/// A printed claim that a computation here contradicts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Erratum {
    pub id: u32,
    pub claim: String,
    pub computed: String,
    pub operation: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectionReport {
    pub point: String,
    pub kind: SectionKind,
    pub corrected: bool,
    pub on_curve: bool,
    pub torsion_order: Option<u32>,
    pub height: Option<String>,
    /// `h = 0` exactly for the torsion sections.
    pub height_consistent: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecordReport {
    pub id: u32,
    pub verdict: String,
    pub fibers: Vec<String>,
    pub expected: String,
    pub computed: Option<String>,
    pub fibers_match: bool,
    pub sum_v_delta: Option<u32>,
    pub sections: Vec<SectionReport>,
    pub shioda_tate_rank: Option<u32>,
    pub mw_rank: u32,
    pub rank_match: Option<bool>,
    pub disc: Option<mordell::DiscCheck>,
    pub errata: Vec<Erratum>,
    pub failures: Vec<String>,
}

impl RecordReport {
    /// No internal check failed (errata against the printed text are not failures).
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn place_string(p: &Option<Place>) -> String {
    p.as_ref().map_or("?".to_string(), |p| p.to_string())
}

pub fn verify_record(r: &FibrationRecord) -> RecordReport {
    let mut rep = RecordReport {
        id: r.id,
        verdict: String::new(),
        fibers: Vec::new(),
        expected: r.expected_labels().to_string(),
        computed: None,
        fibers_match: false,
        sum_v_delta: None,
        sections: Vec::new(),
        shioda_tate_rank: None,
        mw_rank: r.mw_rank,
        rank_match: None,
        disc: None,
        errata: Vec::new(),
        failures: Vec::new(),
    };
    let erratum = |claim: String, computed: String, operation: &str| Erratum {
        id: r.id,
        claim,
        computed,
        operation: operation.to_string(),
    };
    let verdict = validate_k3(&r.model);
    rep.verdict = match &verdict {
        K3Verdict::Elliptic => "elliptic".into(),
        K3Verdict::QuasiElliptic => "quasi-elliptic".into(),
        K3Verdict::RationalSurface => "rational".into(),
        K3Verdict::Invalid(why) => format!("invalid: {why}"),
    };
    if !matches!(verdict, K3Verdict::Elliptic | K3Verdict::QuasiElliptic) {
        rep.errata.push(erratum(format!("{} defines a K3 fibration", r.printed), rep.verdict.clone(), "validate_k3"));
        return rep;
    }
    let ctx = match HeightContext::new(r.model.clone()) {
        Ok(c) => c,
        Err(e) => {
            rep.failures.push(format!("classification failed: {e}"));
            rep.errata.push(erratum(rep.expected.clone(), format!("unclassified: {e}"), "classify_all"));
            return rep;
        }
    };
    let cfg = &ctx.config;
    rep.fibers = cfg.fibers.iter().map(|f| f.report_line()).collect();
    let computed = RootSystem::new(cfg.root_labels());
    rep.computed = Some(computed.to_string());
    rep.fibers_match = computed == r.expected_labels();
    if !rep.fibers_match {
        rep.errata.push(erratum(
            format!("fibers {}", rep.expected),
            format!("fibers {computed} ({})", rep.fibers.join("; ")),
            "classify_all",
        ));
    } else {
        // same lattices: check the printed places one by one
        let mut wrong = Vec::new();
        for f in r.fibers.iter().filter(|f| f.place.is_some()) {
            let here = f.place.as_ref().and_then(|p| cfg.fiber_at(p)).and_then(|fd| fd.lattice_label());
            if here != Some(f.label) {
                let actual: Vec<String> = cfg
                    .fibers
                    .iter()
                    .filter(|fd| fd.lattice_label() == Some(f.label))
                    .map(|fd| fd.place.to_string())
                    .collect();
                wrong.push((
                    format!("{} at {}", f.label, place_string(&f.place)),
                    format!("{} at {}", f.label, actual.join(", ")),
                ));
            }
        }
        if !wrong.is_empty() {
            let (c, d): (Vec<String>, Vec<String>) = wrong.into_iter().unzip();
            rep.errata.push(erratum(c.join("; "), d.join("; "), "classify_all (fiber places)"));
        }
    }
    if header_mismatch(r) {
        rep.errata.push(erratum(
            format!("header {} vs table {}", r.header, r.expected_labels()),
            format!("fibers {computed}"),
            "classify_all (header)",
        ));
    }
    if !cfg.quasi_elliptic {
        let s = cfg.sum_v_delta();
        rep.sum_v_delta = Some(s);
        if s != 24 {
            rep.failures.push(format!("sum of v(Delta) is {s}"));
        }
    }

    // sections
    let mut torsion_points = Vec::new();
    let mut free_points = Vec::new();
    let corrected_idx: BTreeSet<usize> = r.corrected_sections.iter().map(|(k, _)| *k).collect();
    let all: Vec<(SectionEntry, bool)> = r
        .sections
        .iter()
        .cloned()
        .map(|s| (s, false))
        .chain(r.corrected_sections.iter().map(|(_, s)| (s.clone(), true)))
        .collect();
    for (k, (s, corrected)) in all.iter().enumerate() {
        let printed_idx = k + 1;
        let mut sr = SectionReport {
            point: s.text.clone(),
            kind: s.kind,
            corrected: *corrected,
            on_curve: is_on_curve(&r.model, &s.point),
            torsion_order: None,
            height: None,
            height_consistent: None,
        };
        if !sr.on_curve {
            let fixed = !*corrected && corrected_idx.contains(&printed_idx);
            rep.errata.push(erratum(
                format!("section {} {} lies on the curve", s.kind, s.text),
                if fixed { "not on the curve (corrected entry supplied)".into() } else { "not on the curve".into() },
                "is_on_curve",
            ));
            if *corrected {
                rep.failures.push(format!("corrected section {} is not on the curve", s.text));
            }
            rep.sections.push(sr);
            continue;
        }
        match mordell::torsion_order(&ctx, &s.point, 12) {
            Ok(t) => sr.torsion_order = t,
            Err(e) => rep.failures.push(format!("torsion order of {}: {e}", s.text)),
        }
        match (s.kind, sr.torsion_order) {
            (SectionKind::Torsion(n), Some(m)) if n == m => {}
            (SectionKind::NonTorsion, None) | (SectionKind::Unknown, _) => {}
            (kind, got) => rep.errata.push(erratum(
                format!("section {} is {kind}", s.text),
                got.map_or("non-torsion".to_string(), |m| format!("torsion({m})")),
                "torsion_order",
            )),
        }
        match mordell::height(&ctx, &s.point) {
            Ok(h) => {
                sr.height = Some(h.to_string());
                let ok = (h == Rational64::zero()) == sr.torsion_order.is_some();
                sr.height_consistent = Some(ok);
                if !ok {
                    rep.failures.push(format!("height {h} of {} disagrees with its torsion order", s.text));
                }
                if let Some((_, claim)) = r.claim_heights.iter().find(|(i, _)| *i == printed_idx) {
                    if *claim != h {
                        rep.errata.push(erratum(format!("height of {} is {claim}", s.text), h.to_string(), "height"));
                    }
                }
            }
            Err(e) => rep.failures.push(format!("height of {}: {e}", s.text)),
        }
        let replaced = !*corrected && corrected_idx.contains(&printed_idx);
        if !replaced {
            match sr.torsion_order {
                Some(_) => torsion_points.push(s.point.clone()),
                None => free_points.push(s.point.clone()),
            }
        }
        rep.sections.push(sr);
    }

    // ranks
    match shioda_tate_mw_rank(cfg, RHO) {
        Ok(st) => {
            rep.shioda_tate_rank = Some(st);
            rep.rank_match = Some(st == r.mw_rank);
            if rep.fibers_match && st != r.mw_rank {
                rep.failures.push(format!("Shioda-Tate rank {st} vs stated {}", r.mw_rank));
            }
        }
        Err(e) => rep.failures.push(e.to_string()),
    }
    let (_, disc_t) = trivial_lattice(cfg);
    if let Some(claim) = r.claim_disc_trivial {
        if claim.abs() != disc_t.abs() {
            rep.errata.push(erratum(
                format!("trivial lattice discriminant {claim}"),
                disc_t.to_string(),
                "trivial_lattice",
            ));
        }
    }
    if let (Some(tor), Some(st)) = (r.torsion, rep.shioda_tate_rank) {
        let gens: Vec<SurfacePoint> = free_points.into_iter().take(st as usize).collect();
        if gens.len() == st as usize {
            match mordell::height_gram(&ctx, &gens).and_then(|g| mordell::ns_disc_check(cfg, tor, &g)) {
                Ok(d) => {
                    if !d.pass {
                        rep.failures.push(format!("disc NS = {} (expected -9)", d.disc_ns));
                    }
                    rep.disc = Some(d);
                }
                Err(e) => rep.failures.push(format!("disc check: {e}")),
            }
        }
    }
    let _ = torsion_points;
    rep
}

fn header_mismatch(r: &FibrationRecord) -> bool {
    !r.fibers.is_empty() && r.fibers.iter().all(|f| f.place.is_some()) && r.header != r.expected_labels()
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusSummary {
    pub records: usize,
    pub fibers_matched: usize,
    pub elliptic: usize,
    pub sum_v_delta_ok: usize,
    pub failures: usize,
    pub errata: Vec<Erratum>,
    pub reports: Vec<RecordReport>,
}

/// Verify every record (in parallel); the output is ordered by id.
pub fn verify_all(records: &[FibrationRecord]) -> CorpusSummary {
    let mut reports: Vec<RecordReport> = records.par_iter().map(verify_record).collect();
    reports.sort_by_key(|r| r.id);
    let errata = reports.iter().flat_map(|r| r.errata.iter().cloned()).collect();
    CorpusSummary {
        records: reports.len(),
        fibers_matched: reports.iter().filter(|r| r.fibers_match).count(),
        elliptic: reports.iter().filter(|r| r.verdict == "elliptic").count(),
        sum_v_delta_ok: reports.iter().filter(|r| r.sum_v_delta == Some(24)).count(),
        failures: reports.iter().filter(|r| !r.passed()).count(),
        errata,
        reports,
    }
}

/// Line-oriented rendering of a report.
pub fn render_report(rep: &RecordReport) -> String {
    let mut s = format!("fibration {}: {}\n", rep.id, rep.verdict);
    for f in &rep.fibers {
        s += &format!("  {f}\n");
    }
    s += &format!(
        "  fibers expected={} computed={} match={}\n",
        rep.expected,
        rep.computed.as_deref().unwrap_or("-"),
        rep.fibers_match
    );
    if let Some(v) = rep.sum_v_delta {
        s += &format!("  sum_v_delta={v}\n");
    }
    for sec in &rep.sections {
        s += &format!(
            "  section {} {}{} on_curve={} order={} height={}\n",
            sec.kind,
            sec.point,
            if sec.corrected { " (corrected)" } else { "" },
            sec.on_curve,
            sec.torsion_order.map_or("inf".into(), |n| n.to_string()),
            sec.height.as_deref().unwrap_or("-")
        );
    }
    s += &format!(
        "  mw_rank stated={} shioda_tate={}\n",
        rep.mw_rank,
        rep.shioda_tate_rank.map_or("-".into(), |n| n.to_string())
    );
    if let Some(d) = &rep.disc {
        s += &format!(
            "  disc trivial={} mwl={} torsion={} ns={} pass={}\n",
            d.disc_trivial, d.disc_mwl, d.torsion, d.disc_ns, d.pass
        );
    }
    for e in &rep.errata {
        s += &format!("  erratum [{}]: printed {} / computed {}\n", e.operation, e.claim, e.computed);
    }
    for f in &rep.failures {
        s += &format!("  FAIL {f}\n");
    }
    s
}

/// Divisor files shipped with the crate, by name.
pub const BUILTIN_DIVISORS: &[(&str, &str)] = &[
    ("fib4_from_1.div", include_str!("../data/divisors/fib4_from_1.div")),
    ("fib5_from_1.div", include_str!("../data/divisors/fib5_from_1.div")),
    ("fib9_from_1.div", include_str!("../data/divisors/fib9_from_1.div")),
    ("fib13_from_11.div", include_str!("../data/divisors/fib13_from_11.div")),
    ("fib22_from_21.div", include_str!("../data/divisors/fib22_from_21.div")),
];

pub fn builtin_divisor(name: &str) -> Result<DivisorSpec> {
    let text = BUILTIN_DIVISORS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| Error::Parse(format!("no divisor file `{name}`")))?;
    DivisorSpec::parse(text)
}

/// Outcome of replaying the neighbor step recorded for a fibration.
#[derive(Clone, Debug, Serialize)]
pub struct StepReport {
    pub source: u32,
    pub target: u32,
    pub divisor: String,
    pub parameter: String,
    pub dimension: usize,
    /// How the quoted source equation relates to the source record, when it differs.
    pub source_check: Option<Comparison>,
    pub model: String,
    pub comparison: Comparison,
    pub pole_mismatches: Vec<String>,
    pub millis: f64,
}

impl StepReport {
    pub fn passed(&self) -> bool {
        self.dimension == 1
            && self.comparison.identified
            && self.pole_mismatches.is_empty()
            && self.source_check.as_ref().is_none_or(|c| c.identified)
    }
}

/// Replay the step that produced record `target` and compare with its printed model.
pub fn verify_step(records: &[FibrationRecord], target: u32) -> Result<StepReport> {
    let start = std::time::Instant::now();
    let find = |id: u32| records.iter().find(|r| r.id == id).ok_or_else(|| Error::Parse(format!("no fibration {id}")));
    let rec = find(target)?;
    let (source, divisor) = rec
        .derived_from
        .clone()
        .ok_or_else(|| Error::Neighbor(format!("fibration {target} records no neighbor step")))?;
    let src = find(source)?;
    let (model, source_check) = match &rec.source_model {
        Some(m) => (m.clone(), Some(compare_models(m, &src.model)?)),
        None => (src.model.clone(), None),
    };
    let f = builtin_divisor(&divisor)?;
    let res = neighbor_step(&model, &f)?;
    let comparison = compare_models(&res.model, &rec.model)?;
    Ok(StepReport {
        source,
        target,
        divisor: f.to_string(),
        parameter: res.parameter.to_string(),
        dimension: res.parameter.dimension,
        source_check,
        model: format_model(&res.model),
        comparison,
        pole_mismatches: res.pole_mismatches,
        millis: start.elapsed().as_secs_f64() * 1000.0,
    })
}

/// Every record with a recorded step.
pub fn verify_steps(records: &[FibrationRecord]) -> Vec<Result<StepReport>> {
    let ids: Vec<u32> = records.iter().filter(|r| r.derived_from.is_some()).map(|r| r.id).collect();
    ids.par_iter().map(|id| verify_step(records, *id)).collect()
}

pub fn render_step(s: &StepReport) -> String {
    let mut out = format!("step {} -> {}: {} (dimension {})\n", s.source, s.target, s.parameter, s.dimension);
    if let Some(c) = &s.source_check {
        out += &format!(
            "  quoted source vs record {}: identified={} base_change={} map={}\n",
            s.source,
            c.identified,
            c.base_change.as_deref().unwrap_or("-"),
            c.map.as_deref().unwrap_or("-")
        );
    }
    let c = &s.comparison;
    out += &format!(
        "  fibers computed={} printed={} identified={} base_change={} map={}\n",
        c.computed_fibers,
        c.target_fibers,
        c.identified,
        c.base_change.as_deref().unwrap_or("-"),
        c.map.as_deref().unwrap_or("-")
    );
    for m in &s.pole_mismatches {
        out += &format!("  pole mismatch: {m}\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_builtin() {
        let recs = builtin_corpus().unwrap();
        assert_eq!(recs.len(), 52);
        let ids: Vec<u32> = recs.iter().map(|r| r.id).collect();
        assert_eq!(ids, (1..=52).collect::<Vec<_>>());
    }

    #[test]
    fn rejects_duplicates_and_unknown_keys() {
        let block = "[fibration 1]\na2 = 0\na4 = 0\na6 = t\nheader = A2\nmw_rank = 0\n";
        assert!(parse_corpus(&format!("{block}{block}")).is_err());
        assert!(parse_corpus("[fibration 1]\nfoo = 1\n").is_err());
        assert!(parse_corpus("a2 = 1\n").is_err());
    }
}
