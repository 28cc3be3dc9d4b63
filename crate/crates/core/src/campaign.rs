//! Verification sweeps: run the full pipeline over parameter ranges,
//! compare against predictions, and keep a resumable result log.
//!
//! A sweep expands family-spec templates into instances, skips any
//! whose `instance_key` already appears in the log (so interrupted
//! multi-hour runs resume where they stopped), and computes the rest
//! in parallel — one instance per worker, results appended to the log
//! through a single guarded writer. Torsion hunts are sweeps over
//! cycle products `C_k × K_n` with `k` not a multiple of 3, checking
//! every computed profile against the vanishing window and flagging
//! torsion or out-of-window homology loudly instead of crashing.

use crate::error::Error;
use crate::family::FamilySpec;
use crate::graph::Graph;
use crate::homology::{run_pipeline, HomologyProfile, PipelineOptions, ReductionSummary};
use crate::predict::{predict, vanishing_window, PredictOptions, Provenance, WedgeProfile};
use crate::Result;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::{BTreeMap, BTreeSet};
use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::Path;
use std::sync::Mutex;

/// One computed instance: what was run, what came out, and how it
/// compares to the catalogued prediction. Serialized as one JSON line
/// in the result log.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceRecord {
    /// Hash of the graph's sorted edge list plus the options that
    /// affect the result (reduction on/off, dimension cap).
    pub instance_key: String,
    pub spec: String,
    /// Computed profile; absent when the pipeline errored.
    pub computed: Option<HomologyProfile>,
    /// Catalogued prediction; absent when no rule applies.
    pub predicted: Option<WedgeProfile>,
    pub rule: Option<String>,
    pub provenance: Option<Provenance>,
    /// computed == predicted, when both are present.
    #[serde(rename = "match")]
    pub matches: Option<bool>,
    pub torsion_found: bool,
    /// For hunts: whether homology escaped the vanishing window.
    pub window_violation: Option<bool>,
    pub notes: Vec<String>,
    pub error: Option<String>,
    pub timings_ms: BTreeMap<String, u64>,
    pub faces: Option<u64>,
    pub reduction: Option<ReductionSummary>,
}

/// Options shared by every instance of a sweep.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepOptions {
    pub reduce: bool,
    pub max_dim: Option<usize>,
    pub max_faces: u64,
    pub max_bytes: u64,
    pub max_millis: Option<u64>,
    pub allow_conjecture: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        let p = PipelineOptions::default();
        SweepOptions {
            reduce: p.reduce,
            max_dim: None,
            max_faces: p.max_faces,
            max_bytes: p.max_bytes,
            max_millis: Some(30 * 60 * 1000),
            allow_conjecture: false,
        }
    }
}

impl SweepOptions {
    fn pipeline(&self) -> PipelineOptions {
        PipelineOptions {
            reduce: self.reduce,
            max_dim: self.max_dim,
            max_faces: self.max_faces,
            max_bytes: self.max_bytes,
            max_millis: self.max_millis,
        }
    }
}

/// One family template with parameter ranges, e.g.
/// `{"template": "cycle-x-complete:k={k},n={n}", "k": [3,12], "n": [2,2]}`.
/// Ranges are inclusive; every placeholder in the template must have a
/// range and vice versa.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyRange {
    pub template: String,
    #[serde(default)]
    pub k: Option<[u32; 2]>,
    #[serde(default)]
    pub n: Option<[u32; 2]>,
    #[serde(default)]
    pub m: Option<[u32; 2]>,
}

impl FamilyRange {
    fn expand(&self) -> Result<Vec<String>> {
        let mut axes: Vec<(&str, [u32; 2])> = Vec::new();
        for (name, range) in [("{k}", self.k), ("{n}", self.n), ("{m}", self.m)] {
            match (self.template.contains(name), range) {
                (true, Some([lo, hi])) => {
                    if lo < 1 || lo > hi {
                        return Err(Error::Parameter(format!(
                            "range for {name} must satisfy 1 <= lo <= hi, got [{lo}, {hi}]"
                        )));
                    }
                    axes.push((name, [lo, hi]));
                }
                (true, None) => {
                    return Err(Error::Parameter(format!(
                        "template `{}` uses {name} but no range is given",
                        self.template
                    )))
                }
                (false, Some(_)) => {
                    return Err(Error::Parameter(format!(
                        "range for {name} given but template `{}` does not use it",
                        self.template
                    )))
                }
                (false, None) => {}
            }
        }
        let mut texts = vec![self.template.clone()];
        for (name, [lo, hi]) in axes {
            let mut next = Vec::with_capacity(texts.len() * (hi - lo + 1) as usize);
            for t in &texts {
                for v in lo..=hi {
                    next.push(t.replace(name, &v.to_string()));
                }
            }
            texts = next;
        }
        for t in &texts {
            FamilySpec::parse(t)?;
        }
        Ok(texts)
    }
}

/// A verification sweep: families to expand plus shared options.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepSpec {
    pub families: Vec<FamilyRange>,
    #[serde(default)]
    pub options: SweepOptions,
}

impl SweepSpec {
    pub fn from_json(text: &str) -> Result<SweepSpec> {
        Ok(serde_json::from_str(text)?)
    }

    fn expand(&self) -> Result<Vec<String>> {
        let mut out = Vec::new();
        for fam in &self.families {
            out.extend(fam.expand()?);
        }
        Ok(out)
    }
}

/// A torsion hunt over `C_k × K_n`; values of `k` divisible by 3 are
/// skipped (those have exact formulas, not windows).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HuntSpec {
    pub k_range: [u32; 2],
    pub n_range: [u32; 2],
    #[serde(default)]
    pub options: SweepOptions,
}

/// Key identifying a computation up to graph equality and the options
/// that change its mathematical result.
pub fn instance_key(g: &Graph, reduce: bool, max_dim: Option<usize>) -> String {
    let mut edges = g.edges();
    edges.sort_unstable();
    let mut hasher = Sha256::new();
    hasher.update(format!("v={};", g.vertex_count()));
    for (a, b) in edges {
        hasher.update(format!("{a}-{b};"));
    }
    hasher.update(format!("reduce={reduce};max_dim={max_dim:?}"));
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn key_for_text(text: &str, opts: &SweepOptions) -> String {
    match FamilySpec::parse(text).and_then(|s| s.build()) {
        Ok(g) => instance_key(&g, opts.reduce, opts.max_dim),
        Err(_) => {
            let mut hasher = Sha256::new();
            hasher.update(format!("unbuildable-spec:{text}"));
            hasher
                .finalize()
                .iter()
                .map(|b| format!("{b:02x}"))
                .collect()
        }
    }
}

fn blank_record(key: String, spec: String) -> InstanceRecord {
    InstanceRecord {
        instance_key: key,
        spec,
        computed: None,
        predicted: None,
        rule: None,
        provenance: None,
        matches: None,
        torsion_found: false,
        window_violation: None,
        notes: Vec::new(),
        error: None,
        timings_ms: BTreeMap::new(),
        faces: None,
        reduction: None,
    }
}

/// Build, predict, compute, compare. Never panics on a bad instance:
/// parameter, resource, and unsupported-prediction outcomes all land
/// in the record.
fn run_instance(text: &str, key: String, opts: &SweepOptions) -> InstanceRecord {
    let mut rec = blank_record(key, text.to_string());
    let spec = match FamilySpec::parse(text) {
        Ok(s) => s,
        Err(e) => {
            rec.error = Some(e.to_string());
            return rec;
        }
    };
    let graph = match spec.build() {
        Ok(g) => g,
        Err(e) => {
            rec.error = Some(e.to_string());
            return rec;
        }
    };

    match predict(
        &spec,
        &PredictOptions {
            allow_conjecture: opts.allow_conjecture,
        },
    ) {
        Ok(p) => {
            rec.predicted = Some(p.profile);
            rec.rule = Some(p.rule);
            rec.provenance = Some(p.provenance);
            rec.notes.extend(p.notes);
        }
        Err(e) => rec.notes.push(format!("no prediction: {e}")),
    }

    match run_pipeline(&graph, &opts.pipeline()) {
        Ok(report) => {
            rec.torsion_found = report.profile.has_torsion();
            if let Some(p) = &rec.predicted {
                rec.matches = Some(p.matches(&report.profile));
            }
            rec.computed = Some(report.profile);
            rec.faces = Some(report.faces);
            rec.timings_ms = report.timings_ms;
            rec.reduction = Some(report.reduction);
        }
        Err(e) => rec.error = Some(e.to_string()),
    }
    rec
}

/// Parse a result log (line-delimited JSON, blank lines ignored).
pub fn load_log(path: &Path) -> Result<Vec<InstanceRecord>> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let text = std::fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec: InstanceRecord = serde_json::from_str(line)
            .map_err(|e| Error::Parse(format!("{}:{}: bad record: {e}", path.display(), i + 1)))?;
        out.push(rec);
    }
    Ok(out)
}

struct LogWriter {
    inner: Option<BufWriter<File>>,
}

impl LogWriter {
    fn open(path: Option<&Path>) -> Result<LogWriter> {
        let inner = match path {
            None => None,
            Some(p) => {
                if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                    std::fs::create_dir_all(dir)?;
                }
                Some(BufWriter::new(
                    OpenOptions::new().create(true).append(true).open(p)?,
                ))
            }
        };
        Ok(LogWriter { inner })
    }

    fn append(&mut self, rec: &InstanceRecord) -> Result<()> {
        if let Some(w) = &mut self.inner {
            serde_json::to_writer(&mut *w, rec)?;
            w.write_all(b"\n")?;
            w.flush()?;
        }
        Ok(())
    }
}

/// Run every instance of the sweep not already present in the log.
/// Returns all records belonging to the sweep (resumed and fresh),
/// sorted by instance key. Instances are computed in parallel on the
/// current rayon pool; the log sees one appended line per fresh
/// instance, in completion order.
pub fn verify_sweep(sweep: &SweepSpec, log: Option<&Path>) -> Result<Vec<InstanceRecord>> {
    let texts = sweep.expand()?;
    let mut instances: BTreeMap<String, String> = BTreeMap::new();
    for t in texts {
        let key = key_for_text(&t, &sweep.options);
        instances.entry(key).or_insert(t);
    }

    let mut records: Vec<InstanceRecord> = Vec::new();
    let mut done: BTreeSet<String> = BTreeSet::new();
    if let Some(path) = log {
        for rec in load_log(path)? {
            if instances.contains_key(&rec.instance_key) && done.insert(rec.instance_key.clone()) {
                records.push(rec);
            }
        }
    }

    let pending: Vec<(String, String)> = instances
        .into_iter()
        .filter(|(k, _)| !done.contains(k))
        .collect();
    let writer = Mutex::new(LogWriter::open(log)?);
    let fresh: Result<Vec<InstanceRecord>> = pending
        .par_iter()
        .map(|(key, text)| {
            let rec = run_instance(text, key.clone(), &sweep.options);
            writer.lock().expect("log writer poisoned").append(&rec)?;
            Ok(rec)
        })
        .collect();
    records.extend(fresh?);
    records.sort_by(|a, b| a.instance_key.cmp(&b.instance_key));
    Ok(records)
}

/// Sweep `C_k × K_n` over the given ranges (skipping multiples of 3),
/// checking every computed profile for torsion and against the
/// vanishing window. A profile outside the window is recorded as a
/// falsification event in the record's notes, never a crash.
pub fn hunt_torsion(hunt: &HuntSpec, log: Option<&Path>) -> Result<Vec<InstanceRecord>> {
    let [klo, khi] = hunt.k_range;
    let [nlo, nhi] = hunt.n_range;
    if klo < 3 || klo > khi || nlo < 1 || nlo > nhi {
        return Err(Error::Parameter(format!(
            "hunt ranges must satisfy 3 <= klo <= khi and 1 <= nlo <= nhi, \
             got k in [{klo}, {khi}], n in [{nlo}, {nhi}]"
        )));
    }
    let mut families = Vec::new();
    for k in klo..=khi {
        if k % 3 == 0 {
            continue;
        }
        families.push(FamilyRange {
            template: format!("cycle-x-complete:k={k},n={{n}}"),
            k: None,
            n: Some([nlo, nhi]),
            m: None,
        });
    }
    let sweep = SweepSpec {
        families,
        options: hunt.options,
    };
    let mut records = verify_sweep(&sweep, log)?;
    for rec in &mut records {
        annotate_window(rec);
    }
    Ok(records)
}

/// Post-process a hunt record: compare the computed support against
/// the vanishing window for its (k, n) and note the Betti numbers seen
/// in the window (data the catalogue does not predict).
fn annotate_window(rec: &mut InstanceRecord) {
    let computed = match &rec.computed {
        Some(c) => c,
        None => return,
    };
    let spec = match FamilySpec::parse(&rec.spec) {
        Ok(s) => s,
        Err(_) => return,
    };
    let (k, n) = match spec.factors.as_slice() {
        [(crate::family::Family::Cycle, kp), (crate::family::Family::Complete, np)] => {
            (kp[0], np[0])
        }
        _ => return,
    };
    let window = match vanishing_window(k, n) {
        Ok(w) => w,
        Err(_) => return, // k too small for a proven window: nothing to check
    };
    let support = computed.support();
    let escaped: Vec<i32> = support
        .iter()
        .copied()
        .filter(|q| !window.contains(*q))
        .collect();
    rec.window_violation = Some(!escaped.is_empty());
    if escaped.is_empty() {
        let seen: Vec<String> = window
            .allowed_dims
            .iter()
            .map(|&q| format!("betti_{q}={}", computed.free_rank(q)))
            .collect();
        rec.notes.push(format!(
            "window {{{}, {}}} respected; {}",
            window.allowed_dims[0],
            window.allowed_dims[1],
            seen.join(", ")
        ));
    } else {
        rec.notes.push(format!(
            "FALSIFICATION: homology in dimensions {escaped:?} escapes the window \
             {{{}, {}}}",
            window.allowed_dims[0], window.allowed_dims[1]
        ));
    }
    if rec.torsion_found {
        let summands: Vec<String> = computed
            .torsion
            .iter()
            .map(|(q, t)| format!("dim {q}: {t:?}"))
            .collect();
        rec.notes
            .push(format!("TORSION FOUND: {}", summands.join("; ")));
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<ReportFormat> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "text" | "text-table" | "table" => Ok(ReportFormat::Text),
            other => Err(Error::Parameter(format!(
                "unknown report format `{other}`; expected json, csv, or text"
            ))),
        }
    }
}

#[derive(Default, Serialize)]
struct Summary {
    records: usize,
    matches: usize,
    mismatches: usize,
    no_prediction: usize,
    errors: usize,
    conjectures: usize,
    torsion: usize,
}

impl Summary {
    fn of(records: &[InstanceRecord]) -> Summary {
        let mut s = Summary {
            records: records.len(),
            ..Summary::default()
        };
        for r in records {
            match r.matches {
                Some(true) => s.matches += 1,
                Some(false) => s.mismatches += 1,
                None if r.error.is_some() => s.errors += 1,
                None => s.no_prediction += 1,
            }
            if r.provenance == Some(Provenance::Conjectural) {
                s.conjectures += 1;
            }
            if r.torsion_found {
                s.torsion += 1;
            }
        }
        s
    }
}

/// Render records deterministically: sorted by instance key, timings
/// stripped (so parallel and serial runs emit identical bytes), with a
/// summary header and conjectural rows kept apart from the proven ones.
pub fn report_emit(records: &[InstanceRecord], format: ReportFormat) -> Result<String> {
    let mut rows: Vec<InstanceRecord> = records
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.timings_ms = BTreeMap::new();
            r
        })
        .collect();
    rows.sort_by(|a, b| a.instance_key.cmp(&b.instance_key));
    let summary = Summary::of(&rows);
    match format {
        ReportFormat::Json => {
            let doc = serde_json::json!({ "summary": summary, "records": rows });
            Ok(serde_json::to_string_pretty(&doc)? + "\n")
        }
        ReportFormat::Csv => Ok(render_csv(&rows)),
        ReportFormat::Text => Ok(render_text(&rows, &summary)),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

fn render_csv(rows: &[InstanceRecord]) -> String {
    let mut out = String::from(
        "instance_key,spec,rule,provenance,predicted,computed,match,torsion_found,\
         window_violation,error,notes\n",
    );
    for r in rows {
        let provenance = match r.provenance {
            Some(Provenance::Proven) => "proven",
            Some(Provenance::Conjectural) => "conjectural",
            None => "",
        };
        let fields = [
            r.instance_key.clone(),
            r.spec.clone(),
            r.rule.clone().unwrap_or_default(),
            provenance.to_string(),
            opt(&r.predicted),
            r.computed
                .as_ref()
                .map(|c| c.to_string())
                .unwrap_or_default(),
            opt(&r.matches),
            r.torsion_found.to_string(),
            opt(&r.window_violation),
            r.error.clone().unwrap_or_default(),
            r.notes.join(" | "),
        ];
        let line: Vec<String> = fields.iter().map(|f| csv_field(f)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

fn render_text(rows: &[InstanceRecord], summary: &Summary) -> String {
    let comparable = summary.matches + summary.mismatches;
    let mut out = format!(
        "{} record(s): {}/{} match, {} mismatch, {} no-prediction, {} error, \
         {} conjecture, {} with torsion\n",
        summary.records,
        summary.matches,
        comparable,
        summary.mismatches,
        summary.no_prediction,
        summary.errors,
        summary.conjectures,
        summary.torsion,
    );
    let (conjectural, proven): (Vec<&InstanceRecord>, Vec<&InstanceRecord>) = rows
        .iter()
        .partition(|r| r.provenance == Some(Provenance::Conjectural));
    let band = |title: Option<&str>, rows: &[&InstanceRecord], out: &mut String| {
        if rows.is_empty() {
            return;
        }
        if let Some(t) = title {
            out.push_str(&format!("-- {t} --\n"));
        }
        for r in rows {
            let status = match (&r.matches, &r.error) {
                (Some(true), _) => "match".to_string(),
                (Some(false), _) => "MISMATCH".to_string(),
                (None, Some(e)) => format!("error: {e}"),
                (None, None) => "no prediction".to_string(),
            };
            let computed = r
                .computed
                .as_ref()
                .map(|c| c.to_string())
                .unwrap_or_else(|| "-".to_string());
            let predicted = r
                .predicted
                .as_ref()
                .map(|p| p.to_string())
                .unwrap_or_else(|| "-".to_string());
            out.push_str(&format!(
                "{:<40} computed: {:<28} predicted: {:<28} {}\n",
                r.spec, computed, predicted, status
            ));
            for n in &r.notes {
                out.push_str(&format!("    note: {n}\n"));
            }
        }
    };
    band(None, &proven, &mut out);
    band(Some("CONJECTURE"), &conjectural, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmp_log(name: &str) -> std::path::PathBuf {
        let mut p = std::env::temp_dir();
        let nanos = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .unwrap()
            .as_nanos();
        p.push(format!(
            "campaign-{name}-{}-{nanos}.jsonl",
            std::process::id()
        ));
        p
    }

    fn small_sweep() -> SweepSpec {
        SweepSpec {
            families: vec![FamilyRange {
                template: "complete-x-complete:n={n},m={m}".into(),
                k: None,
                n: Some([2, 3]),
                m: Some([2, 3]),
            }],
            options: SweepOptions::default(),
        }
    }

    #[test]
    fn sweep_over_complete_pairs_matches_everywhere() {
        let records = verify_sweep(&small_sweep(), None).unwrap();
        assert_eq!(records.len(), 4);
        for r in &records {
            assert_eq!(r.matches, Some(true), "{}", r.spec);
            assert!(!r.torsion_found);
            assert!(r.error.is_none());
        }
        let keys: Vec<&String> = records.iter().map(|r| &r.instance_key).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn resume_skips_logged_instances() {
        let log = tmp_log("resume");
        let first = verify_sweep(&small_sweep(), Some(&log)).unwrap();
        let lines_after_first = std::fs::read_to_string(&log).unwrap().lines().count();
        let second = verify_sweep(&small_sweep(), Some(&log)).unwrap();
        let lines_after_second = std::fs::read_to_string(&log).unwrap().lines().count();
        std::fs::remove_file(&log).ok();

        assert_eq!(lines_after_first, 4);
        assert_eq!(lines_after_second, 4, "resume must not recompute");
        assert_eq!(first.len(), second.len());
        for (a, b) in first.iter().zip(second.iter()) {
            assert_eq!(a.instance_key, b.instance_key);
            assert_eq!(
                a.computed.as_ref().map(|c| c.to_string()),
                b.computed.as_ref().map(|c| c.to_string())
            );
        }
    }

    #[test]
    fn instance_key_separates_options_but_not_runs() {
        let g = FamilySpec::parse("cycle:k=6").unwrap().build().unwrap();
        let a = instance_key(&g, true, None);
        let b = instance_key(&g, true, None);
        let c = instance_key(&g, false, None);
        let d = instance_key(&g, true, Some(2));
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
        assert_eq!(a.len(), 64);
    }

    #[test]
    fn duplicate_graphs_collapse_within_a_sweep() {
        // path:k=2 and complete:n=2 build the same edge K₂ (different
        // labels, same canonical edge list), so only one instance runs.
        let sweep = SweepSpec {
            families: vec![
                FamilyRange {
                    template: "path:k={k}".into(),
                    k: Some([2, 2]),
                    n: None,
                    m: None,
                },
                FamilyRange {
                    template: "complete:n={n}".into(),
                    k: None,
                    n: Some([2, 2]),
                    m: None,
                },
            ],
            options: SweepOptions::default(),
        };
        let records = verify_sweep(&sweep, None).unwrap();
        assert_eq!(records.len(), 1);
    }

    #[test]
    fn invalid_parameters_become_error_records() {
        let sweep = SweepSpec {
            families: vec![FamilyRange {
                template: "cycle:k={k}".into(),
                k: Some([2, 3]),
                n: None,
                m: None,
            }],
            options: SweepOptions::default(),
        };
        let records = verify_sweep(&sweep, None).unwrap();
        assert_eq!(records.len(), 2);
        let failed: Vec<&InstanceRecord> = records.iter().filter(|r| r.error.is_some()).collect();
        assert_eq!(failed.len(), 1);
        assert!(failed[0].error.as_ref().unwrap().contains("k >= 3"));
    }

    #[test]
    fn range_validation_rejects_bad_sweeps() {
        let bad = FamilyRange {
            template: "cycle:k={k}".into(),
            k: Some([5, 3]),
            n: None,
            m: None,
        };
        assert!(matches!(bad.expand(), Err(Error::Parameter(_))));
        let missing = FamilyRange {
            template: "cycle:k={k}".into(),
            k: None,
            n: None,
            m: None,
        };
        assert!(matches!(missing.expand(), Err(Error::Parameter(_))));
        let unused = FamilyRange {
            template: "cycle:k=5".into(),
            k: None,
            n: Some([2, 3]),
            m: None,
        };
        assert!(matches!(unused.expand(), Err(Error::Parameter(_))));
    }

    #[test]
    fn resource_overrun_is_recorded_not_fatal() {
        let options = SweepOptions {
            max_faces: 10,
            ..SweepOptions::default()
        };
        let sweep = SweepSpec {
            families: vec![FamilyRange {
                template: "cycle:k={k}".into(),
                k: Some([12, 12]),
                n: None,
                m: None,
            }],
            options,
        };
        let records = verify_sweep(&sweep, None).unwrap();
        assert_eq!(records.len(), 1);
        let r = &records[0];
        assert!(r.error.as_ref().unwrap().contains("face count"));
        assert!(r.computed.is_none());
        assert_eq!(r.matches, None);
        // The prediction is still recorded for the audit trail.
        assert!(r.predicted.is_some());
    }

    #[test]
    fn hunt_skips_multiples_of_three_and_checks_the_window() {
        let hunt = HuntSpec {
            k_range: [7, 9],
            n_range: [2, 2],
            options: SweepOptions::default(),
        };
        let records = hunt_torsion(&hunt, None).unwrap();
        // k = 7, 8 only; 9 is a multiple of 3.
        assert_eq!(records.len(), 2);
        for r in &records {
            assert!(r.error.is_none(), "{:?}", r.error);
            assert_eq!(r.window_violation, Some(false), "{}", r.spec);
            assert!(!r.torsion_found);
            assert!(r.notes.iter().any(|n| n.contains("window")));
        }
    }

    #[test]
    fn report_counts_and_bands() {
        let mut a = blank_record("k1".into(), "complete-x-complete:n=2,m=2".into());
        a.matches = Some(true);
        a.rule = Some("complete-pair".into());
        a.provenance = Some(Provenance::Proven);
        let mut b = a.clone();
        b.instance_key = "k2".into();
        b.spec = "complete-x-complete:n=2,m=3".into();
        let mut c = a.clone();
        c.instance_key = "k3".into();
        let records = vec![a, b, c];

        let text = report_emit(&records, ReportFormat::Text).unwrap();
        assert!(text.contains("3/3 match"), "{text}");

        let mut conj = blank_record(
            "k0".into(),
            "complete-x-complete-x-complete:n=3,m=3,l=3".into(),
        );
        conj.provenance = Some(Provenance::Conjectural);
        conj.matches = Some(false);
        let mut with_conj = records.clone();
        with_conj.push(conj);
        let text = report_emit(&with_conj, ReportFormat::Text).unwrap();
        assert!(text.contains("CONJECTURE"));
        let proven_pos = text.find("complete-x-complete:n=2,m=2").unwrap();
        let conj_pos = text.find("CONJECTURE").unwrap();
        assert!(
            conj_pos > proven_pos,
            "conjectures segregated at the bottom"
        );

        let csv = report_emit(&records, ReportFormat::Csv).unwrap();
        assert!(csv.starts_with("instance_key,"));
        assert_eq!(csv.lines().count(), 4);

        let empty = report_emit(&[], ReportFormat::Text).unwrap();
        assert!(empty.contains("0 record(s)"));

        assert!("yaml".parse::<ReportFormat>().is_err());
    }

    #[test]
    fn reports_are_deterministic_across_timing_jitter() {
        let mut a = blank_record("k1".into(), "cycle:k=6".into());
        a.timings_ms.insert("total".into(), 12);
        let mut b = a.clone();
        b.timings_ms.insert("total".into(), 99);
        let ra = report_emit(&[a], ReportFormat::Json).unwrap();
        let rb = report_emit(&[b], ReportFormat::Json).unwrap();
        assert_eq!(ra, rb);
    }

    #[test]
    fn mismatch_records_keep_both_profiles() {
        // Force a fake mismatch to check the audit-trail invariant.
        let mut r = blank_record("k9".into(), "cycle:k=6".into());
        r.predicted = Some(WedgeProfile::spheres(1, 2));
        r.computed = Some(HomologyProfile::trivial());
        r.matches = Some(false);
        let csv = report_emit(&[r.clone()], ReportFormat::Csv).unwrap();
        assert!(csv.contains("2 S^1"));
        let json = report_emit(&[r], ReportFormat::Json).unwrap();
        assert!(json.contains("predicted") && json.contains("computed"));
    }
}
