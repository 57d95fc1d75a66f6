//! The `hullcensus` command-line tool.
//!
//! Every command builds an [`OutputDocument`]; the `--format` flag only
//! chooses how it is printed. Counts are decimal strings in every format.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::brute::{self, Filters};
use crate::census::{self, HullSpectrum, Method};
use crate::classify::{self, Classification, ClassifyOptions, CodeType};
use crate::error::{Error, Result};
use crate::qcomb::Count;
use crate::ratio::{self, Grid, RatioReport};

/// Version of the JSON document layout and the CSV column sets.
pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable naming the result cache directory.
pub const CACHE_ENV: &str = "HULLCENSUS_CACHE";

#[derive(Parser, Debug)]
#[command(
    name = "hullcensus",
    version,
    about = "Count linear codes by hull dimension"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Worker threads for enumeration and classification.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Neither read nor write the result cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Number of [n,k]_q codes for each hull dimension.
    Spectrum(SpectrumArgs),
    /// Consecutive count ratios with their coefficients and bounds.
    Ratios(RatiosArgs),
    /// Codes up to equivalence, by type and hull dimension.
    Classify(ClassifyArgs),
    /// Compare independent routes to the same counts.
    Crosscheck(CrosscheckArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    Sendrier,
    Product,
    Brute,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub k: u32,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
    /// Most subspaces a brute-force run may visit.
    #[arg(long)]
    pub guard: Option<Count>,
    /// Resumable tally file for brute-force runs.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Recheck the hull by explicit intersection on every N-th code.
    #[arg(long)]
    pub verify_every: Option<u64>,
}

#[derive(Args, Debug)]
pub struct RatiosArgs {
    /// Field order; repeat with --verify-grid to cover several fields.
    #[arg(long, required = true)]
    pub q: Vec<u32>,
    #[arg(long, required_unless_present = "verify_grid")]
    pub n: Option<u32>,
    #[arg(long, required_unless_present = "verify_grid")]
    pub k: Option<u32>,
    /// Check the ratio inequality on every tuple up to --max-n.
    #[arg(long)]
    pub verify_grid: bool,
    #[arg(long, default_value_t = 2)]
    pub min_n: u32,
    #[arg(long, default_value_t = 14)]
    pub max_n: u32,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub k: u32,
    /// Keep classes with minimum distance at least this.
    #[arg(long, default_value_t = 0)]
    pub min_d: u32,
    /// Keep classes whose dual has minimum distance at least this.
    #[arg(long, default_value_t = 0)]
    pub min_dd: u32,
    /// Check the mass formula at every hull dimension.
    #[arg(long)]
    pub mass_check: bool,
    /// Evaluate the conjectured decreasing chain of class counts.
    #[arg(long)]
    pub conjecture: bool,
    /// List every class.
    #[arg(long)]
    pub list: bool,
    /// Allow lengths above the default limit (at most 10).
    #[arg(long)]
    pub max_n: Option<u32>,
}

#[derive(Args, Debug)]
pub struct CrosscheckArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub max_n: u32,
    #[arg(long, default_value_t = 1)]
    pub min_n: u32,
    /// Also enumerate every subspace and compare.
    #[arg(long)]
    pub with_brute: bool,
}

/// A labeled grid of strings, printed as an aligned table or as CSV.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TextTable {
    pub title: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl TextTable {
    fn new(title: impl Into<String>, headers: &[&str]) -> Self {
        TextTable {
            title: title.into(),
            headers: headers.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    fn render(&self) -> String {
        let mut widths: Vec<usize> = self.headers.iter().map(String::len).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let line = |cells: &[String]| {
            cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        let mut out = String::new();
        if !self.title.is_empty() {
            out.push_str(&self.title);
            out.push('\n');
        }
        out.push_str(&line(&self.headers));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&line(row));
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Provenance {
    pub method: String,
    pub formulas: Vec<String>,
    pub cached: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Timing {
    pub elapsed_us: u64,
}

/// The result of one command. Timing and the cache flag are excluded from
/// `canonical_hash`, so identical inputs hash identically.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutputDocument {
    pub schema_version: u32,
    pub command: String,
    pub parameters: Value,
    pub results: Value,
    pub provenance: Provenance,
    pub timing: Timing,
    pub canonical_hash: String,
    /// Outcome of any verification the command performed.
    pub verified: bool,
    #[serde(skip)]
    pub tables: Vec<TextTable>,
    #[serde(skip)]
    pub csv: TextTable,
}

impl OutputDocument {
    fn canonical_value(&self) -> Value {
        json!({
            "schema_version": self.schema_version,
            "command": self.command,
            "parameters": self.parameters,
            "results": self.results,
            "provenance": {
                "method": self.provenance.method,
                "formulas": self.provenance.formulas,
            },
            "verified": self.verified,
        })
    }

    fn seal(mut self) -> Self {
        // serde_json maps are sorted, so this serialization is canonical
        let bytes = serde_json::to_vec(&self.canonical_value()).expect("json values serialize");
        self.canonical_hash = hex::encode(Sha256::digest(&bytes));
        self
    }

    pub fn render(&self, format: Format) -> Result<String> {
        Ok(match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self)?;
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
                w.write_record(&self.csv.headers).map_err(io)?;
                for row in &self.csv.rows {
                    w.write_record(row).map_err(io)?;
                }
                String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.into_error()))?)
                    .expect("csv of utf-8 fields is utf-8")
            }
            Format::Table => self
                .tables
                .iter()
                .map(TextTable::render)
                .collect::<Vec<_>>()
                .join("\n"),
        })
    }
}

struct Draft {
    command: &'static str,
    parameters: Value,
    results: Value,
    method: String,
    formulas: Vec<String>,
    cached: bool,
    verified: bool,
    tables: Vec<TextTable>,
    csv: TextTable,
}

impl Draft {
    fn finish(self, start: Instant) -> OutputDocument {
        OutputDocument {
            schema_version: SCHEMA_VERSION,
            command: self.command.to_string(),
            parameters: self.parameters,
            results: self.results,
            provenance: Provenance {
                method: self.method,
                formulas: self.formulas,
                cached: self.cached,
            },
            timing: Timing {
                elapsed_us: start.elapsed().as_micros() as u64,
            },
            canonical_hash: String::new(),
            verified: self.verified,
            tables: self.tables,
            csv: self.csv,
        }
        .seal()
    }
}

/// A memo of expensive results on disk. Any failure to read or write is
/// treated as a miss.
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn from_env(disabled: bool) -> Cache {
        let dir = if disabled {
            None
        } else {
            std::env::var_os(CACHE_ENV)
                .map(PathBuf::from)
                .or_else(|| dirs::cache_dir().map(|d| d.join("hullcensus")))
        };
        Cache { dir }
    }

    pub fn disabled() -> Cache {
        Cache { dir: None }
    }

    fn path(&self, key: &Value) -> Option<PathBuf> {
        let mut keyed = key.clone();
        keyed["schema_version"] = json!(SCHEMA_VERSION);
        let digest = Sha256::digest(serde_json::to_vec(&keyed).ok()?);
        Some(
            self.dir
                .as_ref()?
                .join(format!("{}.json", hex::encode(digest))),
        )
    }

    fn get<T: DeserializeOwned>(&self, key: &Value) -> Option<T> {
        let bytes = std::fs::read(self.path(key)?).ok()?;
        serde_json::from_slice(&bytes).ok()
    }

    fn put<T: Serialize>(&self, key: &Value, value: &T) {
        let Some(path) = self.path(key) else { return };
        let write = || -> std::io::Result<()> {
            std::fs::create_dir_all(path.parent().expect("cache file has a parent"))?;
            let tmp = path.with_extension("tmp");
            std::fs::write(&tmp, serde_json::to_vec(value)?)?;
            std::fs::rename(tmp, &path)
        };
        let _ = write();
    }

    fn memo<T, F>(&self, key: Value, compute: F) -> Result<(T, bool)>
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> Result<T>,
    {
        if let Some(v) = self.get(&key) {
            return Ok((v, true));
        }
        let v = compute()?;
        self.put(&key, &v);
        Ok((v, false))
    }
}

fn counts(v: &[Count]) -> Vec<String> {
    v.iter().map(Count::to_string).collect()
}

fn method_formulas(m: Method) -> Vec<String> {
    let s: &[&str] = match m {
        Method::Sendrier => &["sum over self-orthogonal subcodes of Gaussian binomials"],
        Method::ProductEven => &[
            "product formula for even q",
            "self-orthogonal counts sigma(n, k)",
        ],
        Method::ProductOdd => &[
            "product formula for odd q",
            "quadratic character of (-1)^(n/2)",
        ],
        Method::LcdClosed => &["closed form for LCD codes over odd q"],
        Method::BruteForce => &[
            "exhaustive RREF enumeration",
            "hull dimension = k - rank(G G^T)",
        ],
    };
    s.iter().map(|x| x.to_string()).collect()
}

pub fn cmd_spectrum(a: &SpectrumArgs, cache: &Cache) -> Result<OutputDocument> {
    let start = Instant::now();
    let method = match a.method {
        MethodArg::Auto | MethodArg::Product => Method::product_for(a.q),
        MethodArg::Sendrier => Method::Sendrier,
        MethodArg::Brute => Method::BruteForce,
    };
    let (sp, cached): (HullSpectrum, bool) = if method == Method::BruteForce {
        let opts = brute::Options {
            guard: a
                .guard
                .clone()
                .unwrap_or_else(|| brute::Options::default().guard),
            verify_every: a.verify_every,
            checkpoint: a.checkpoint.clone(),
        };
        // guard first, so a refusal is never masked by a cache hit
        brute::check_guard(a.n, a.k, a.q, &opts.guard)?;
        cache.memo(
            json!({"kind": "brute_spectrum", "q": a.q, "n": a.n, "k": a.k}),
            || brute::brute_spectrum_with(a.n, a.k, a.q, &opts),
        )?
    } else {
        (census::spectrum(a.n, a.k, a.q, method)?, false)
    };
    let verified = sp.validate().is_ok();
    let mut table = TextTable::new(
        format!(
            "[{}, {}] codes over GF({}), method {}",
            a.n,
            a.k,
            a.q,
            method.name()
        ),
        &["l", "count"],
    );
    let mut csv = TextTable::new("", &["q", "n", "k", "l", "count", "method"]);
    for (l, c) in sp.counts.iter().enumerate() {
        table.push(vec![l.to_string(), c.to_string()]);
        csv.push(vec![
            a.q.to_string(),
            a.n.to_string(),
            a.k.to_string(),
            l.to_string(),
            c.to_string(),
            method.name().to_string(),
        ]);
    }
    table.push(vec!["total".into(), sp.total().to_string()]);
    Ok(Draft {
        command: "spectrum",
        parameters: json!({"q": a.q, "n": a.n, "k": a.k, "method": method}),
        results: json!({"counts": counts(&sp.counts), "total": sp.total().to_string()}),
        method: method.name().to_string(),
        formulas: method_formulas(method),
        cached,
        verified,
        tables: vec![table],
        csv,
    }
    .finish(start))
}

const RATIO_COLUMNS: [&str; 13] = [
    "q",
    "n",
    "k",
    "l",
    "ratio",
    "ratio_decimal",
    "alpha",
    "mu",
    "bound",
    "branch",
    "half_bound",
    "satisfied",
    "tight",
];

fn ratio_row(r: &RatioReport) -> Vec<String> {
    vec![
        r.q.to_string(),
        r.n.to_string(),
        r.k.to_string(),
        r.l.to_string(),
        r.ratio.to_string(),
        r.ratio_decimal(),
        r.alpha.to_string(),
        r.mu.to_string(),
        r.bound.to_string(),
        r.branch.label(),
        r.half_bound.to_string(),
        r.satisfied.to_string(),
        r.tight.to_string(),
    ]
}

fn ratio_json(r: &RatioReport) -> Value {
    json!({
        "l": r.l,
        "ratio": r.ratio,
        "ratio_decimal_display_only": r.ratio_decimal(),
        "alpha": r.alpha,
        "mu": r.mu,
        "bound": r.bound,
        "branch": r.branch.label(),
        "half_bound": r.half_bound,
        "condition_star": r.condition_star,
        "satisfied": r.satisfied,
        "tight": r.tight,
    })
}

const RATIO_FORMULAS: [&str; 2] = [
    "ratio coefficient alpha by parity of n and k-l",
    "bound (q^(l+1)-1), halved for odd q, even n, eta=+1, k-l odd",
];

pub fn cmd_ratios(a: &RatiosArgs) -> Result<OutputDocument> {
    let start = Instant::now();
    let formulas: Vec<String> = RATIO_FORMULAS.iter().map(|s| s.to_string()).collect();
    let mut csv = TextTable::new("", &RATIO_COLUMNS);
    if a.verify_grid {
        let grid = Grid {
            qs: a.q.clone(),
            min_n: a.min_n,
            max_n: a.max_n,
        };
        let check = ratio::verify_main_theorem(&grid)?;
        let tight = check.reports.iter().filter(|r| r.tight).count();
        for r in &check.reports {
            csv.push(ratio_row(r));
        }
        let mut summary = TextTable::new("ratio inequality over the grid", &["quantity", "value"]);
        summary.push(vec![
            "tuples".into(),
            (check.reports.len() + check.degenerate.len()).to_string(),
        ]);
        summary.push(vec!["checked".into(), check.reports.len().to_string()]);
        summary.push(vec![
            "violations".into(),
            check.violations.len().to_string(),
        ]);
        summary.push(vec![
            "degenerate".into(),
            check.degenerate.len().to_string(),
        ]);
        summary.push(vec!["tight".into(), tight.to_string()]);
        let mut tables = vec![summary];
        if !check.violations.is_empty() {
            let mut v = TextTable::new("violations", &RATIO_COLUMNS);
            for r in &check.violations {
                v.push(ratio_row(r));
            }
            tables.push(v);
        }
        let degenerate: Vec<Value> = check
            .degenerate
            .iter()
            .map(|&(q, n, k, l)| json!({"q": q, "n": n, "k": k, "l": l}))
            .collect();
        return Ok(Draft {
            command: "ratios",
            parameters: json!({"qs": grid.qs, "min_n": grid.min_n, "max_n": grid.max_n, "verify_grid": true}),
            results: json!({
                "checked": check.reports.len(),
                "violations": check.violations.iter().map(|r| {
                    let mut v = ratio_json(r);
                    v["q"] = json!(r.q);
                    v["n"] = json!(r.n);
                    v["k"] = json!(r.k);
                    v
                }).collect::<Vec<_>>(),
                "degenerate": degenerate,
                "tight": tight,
            }),
            method: "exact ratios from the self-orthogonal subcode sum".into(),
            formulas,
            cached: false,
            verified: check.violations.is_empty(),
            tables,
            csv,
        }
        .finish(start));
    }

    let [q] = a.q[..] else {
        return Err(Error::domain("ratios for one (n, k) take exactly one --q"));
    };
    let (n, k) = (
        a.n.expect("clap enforces --n"),
        a.k.expect("clap enforces --k"),
    );
    if k == 0 || 2 * k > n {
        return Err(Error::domain(format!(
            "ratios need 1 <= k <= n/2, got n={n}, k={k}"
        )));
    }
    let mut rows = Vec::new();
    let mut table = TextTable::new(
        format!("A_l / A_(l+1) for [{n}, {k}] codes over GF({q}); decimals are display only"),
        &[
            "l", "ratio", "decimal", "alpha", "mu", "bound", "branch", "ok",
        ],
    );
    for l in 0..k {
        match ratio::ratio_report(n, k, l, q) {
            Ok(r) => {
                table.push(vec![
                    l.to_string(),
                    r.ratio.to_string(),
                    r.ratio_decimal(),
                    r.alpha.to_string(),
                    r.mu.to_string(),
                    r.bound.to_string(),
                    r.branch.label(),
                    if r.satisfied { "yes" } else { "NO" }.into(),
                ]);
                csv.push(ratio_row(&r));
                rows.push(ratio_json(&r));
            }
            Err(e @ Error::DegenerateRatio { .. }) => {
                let msg = e.to_string();
                let mut row = vec![l.to_string(), "undefined".into()];
                row.resize(table.headers.len(), "-".into());
                table.push(row);
                rows.push(json!({"l": l, "degenerate": true, "reason": msg}));
            }
            Err(e) => return Err(e),
        }
    }
    let verified = rows.iter().all(|r| r["satisfied"] != json!(false));
    Ok(Draft {
        command: "ratios",
        parameters: json!({"q": q, "n": n, "k": k}),
        results: json!({"ratios": rows}),
        method: "exact ratios from the self-orthogonal subcode sum".into(),
        formulas,
        cached: false,
        verified,
        tables: vec![table],
        csv,
    }
    .finish(start))
}

fn census_json(t: &classify::CensusTable) -> Value {
    let mut cells = serde_json::Map::new();
    for (ty, row) in &t.cells {
        let by_hull: Vec<String> = row.values().map(u64::to_string).collect();
        cells.insert(
            ty.name().to_string(),
            json!({"by_hull": by_hull, "total": t.total(*ty).to_string()}),
        );
    }
    json!({"min_d": t.min_distance, "min_dual_d": t.min_dual_distance, "cells": cells})
}

fn census_table(title: String, t: &classify::CensusTable) -> TextTable {
    let mut headers = vec!["type".to_string()];
    headers.extend((0..=t.k).map(|h| format!("l={h}")));
    headers.push("total".into());
    let mut table = TextTable {
        title,
        headers,
        rows: Vec::new(),
    };
    for (ty, row) in &t.cells {
        let mut r = vec![ty.name().to_string()];
        r.extend(row.values().map(u64::to_string));
        r.push(t.total(*ty).to_string());
        table.push(r);
    }
    table
}

pub fn cmd_classify(a: &ClassifyArgs, cache: &Cache) -> Result<OutputDocument> {
    let start = Instant::now();
    let opts = ClassifyOptions { max_n: a.max_n };
    let limit = opts
        .max_n
        .unwrap_or(0)
        .max(classify::default_max_length(a.q));
    if a.n > limit.min(classify::MAX_ORBIT_LENGTH) {
        return Err(Error::GuardExceeded {
            needed: Count::from(a.n as u64),
            limit: Count::from(limit.min(classify::MAX_ORBIT_LENGTH) as u64),
            unit: "coordinates (classification length)",
        });
    }
    // the unfiltered classification is cached; filters are applied on top
    let (base, cached): (Classification, bool) = cache.memo(
        json!({"kind": "classify", "q": a.q, "n": a.n, "k": a.k}),
        || classify::classify_with(a.n, a.k, a.q, &Filters::default(), &opts),
    )?;
    let filtered =
        classify::CensusTable::from_records(a.q, a.n, a.k, a.min_d, a.min_dd, &base.records);

    let mut results = json!({
        "classes": base.records.len(),
        "census": census_json(&filtered),
        "census_unfiltered": census_json(&base.census_all),
    });
    let mut tables = vec![census_table(
        format!(
            "[{}, {}] codes over GF({}) up to equivalence, d >= {}, dual d >= {}",
            a.n, a.k, a.q, a.min_d, a.min_dd
        ),
        &filtered,
    )];
    if a.min_d > 1 || a.min_dd > 1 {
        tables.push(census_table(
            "without distance filters".into(),
            &base.census_all,
        ));
    }
    let mut verified = true;
    let mut formulas = vec!["orbit sweep under the monomial group".to_string()];
    if a.mass_check {
        formulas.push("mass formula: sum of |G|/|Aut| equals the labeled count".into());
        let mut t = TextTable::new(
            "mass formula",
            &["l", "classes", "mass", "expected", "holds"],
        );
        let mut rows = Vec::new();
        for l in 0..=a.k {
            let m = classify::mass_formula_check(&base.records, a.n, a.k, l, a.q)?;
            verified &= m.holds;
            t.push(vec![
                l.to_string(),
                m.classes.to_string(),
                m.mass.to_string(),
                m.expected.to_string(),
                m.holds.to_string(),
            ]);
            rows.push(serde_json::to_value(&m)?);
        }
        tables.push(t);
        results["mass_check"] = json!(rows);
    }
    if a.conjecture {
        let counts: Vec<u64> = (0..=a.k)
            .map(|h| base.census_all.get(CodeType::Linear, h))
            .collect();
        let report = classify::ConjectureReport {
            q: a.q,
            n: a.n,
            k: a.k,
            holds: classify::chain_holds(&counts),
            counts,
        };
        let mut t = TextTable::new(
            "decreasing chain of class counts (reported only)",
            &["counts", "holds"],
        );
        t.push(vec![
            format!("{:?}", report.counts),
            report.holds.to_string(),
        ]);
        tables.push(t);
        results["conjecture"] = serde_json::to_value(&report)?;
    }
    let export = classify::export_rows(&base.records);
    let csv = if a.list {
        let mut csv = TextTable::new("", &EXPORT_COLUMNS);
        for r in &export {
            csv.push(export_row(r));
        }
        tables.push(TextTable {
            title: "classes".into(),
            ..csv.clone()
        });
        results["class_list"] = serde_json::to_value(&export)?;
        csv
    } else {
        let mut csv = TextTable::new(
            "",
            &[
                "q",
                "n",
                "k",
                "min_d",
                "min_dual_d",
                "type",
                "hull_dim",
                "classes",
            ],
        );
        for scope in [&filtered, &base.census_all] {
            for (ty, row) in &scope.cells {
                for (h, c) in row {
                    csv.push(vec![
                        a.q.to_string(),
                        a.n.to_string(),
                        a.k.to_string(),
                        scope.min_distance.to_string(),
                        scope.min_dual_distance.to_string(),
                        ty.name().to_string(),
                        h.to_string(),
                        c.to_string(),
                    ]);
                }
            }
        }
        csv
    };
    Ok(Draft {
        command: "classify",
        parameters: json!({"q": a.q, "n": a.n, "k": a.k, "min_d": a.min_d, "min_dual_d": a.min_dd}),
        results,
        method: "orbit sweep".into(),
        formulas,
        cached,
        verified,
        tables,
        csv,
    }
    .finish(start))
}

const EXPORT_COLUMNS: [&str; 11] = [
    "n",
    "k",
    "q",
    "hull_dim",
    "d",
    "dual_d",
    "even",
    "self_orthogonal",
    "lcd",
    "aut_order",
    "generator",
];

fn export_row(r: &classify::ExportRow) -> Vec<String> {
    let opt = |v: Option<u32>| v.map_or_else(|| "-".to_string(), |d| d.to_string());
    vec![
        r.n.to_string(),
        r.k.to_string(),
        r.q.to_string(),
        r.hull_dim.to_string(),
        opt(r.d),
        opt(r.dual_d),
        r.even.map_or_else(|| "-".to_string(), |e| e.to_string()),
        r.self_orthogonal.to_string(),
        r.lcd.to_string(),
        r.aut_order.to_string(),
        r.generator.clone(),
    ]
}

/// First disagreement found by a cross-check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Disagreement {
    pub route: String,
    pub n: u32,
    pub k: u32,
    pub l: u32,
    pub expected: Count,
    pub got: Count,
}

fn crosscheck_tuple(q: u32, n: u32, k: u32, l: u32) -> Result<Option<Disagreement>> {
    let reference = census::sendrier_count(n, k, l, q)?;
    let mut routes: Vec<(&str, Count)> = vec![("product", census::product_count(n, k, l, q)?)];
    if q.is_multiple_of(2) {
        routes.push((
            "product, separate even-q route",
            census::product_count_even_q_separate(n, k, l, q)?,
        ));
    }
    routes.push(("duality", census::sendrier_count(n, n - k, l, q)?));
    Ok(routes
        .into_iter()
        .find(|(_, v)| *v != reference)
        .map(|(route, got)| Disagreement {
            route: route.to_string(),
            n,
            k,
            l,
            expected: reference.clone(),
            got,
        }))
}

pub fn cmd_crosscheck(a: &CrosscheckArgs, cache: &Cache) -> Result<OutputDocument> {
    use rayon::prelude::*;
    let start = Instant::now();
    if a.min_n == 0 || a.min_n > a.max_n {
        return Err(Error::domain(format!(
            "need 1 <= min-n <= max-n, got {}..{}",
            a.min_n, a.max_n
        )));
    }
    let mut tuples = Vec::new();
    for n in a.min_n..=a.max_n {
        for k in 0..=n / 2 {
            for l in 0..=k {
                tuples.push((n, k, l));
            }
        }
    }
    let results: Vec<Option<Disagreement>> = tuples
        .par_iter()
        .map(|&(n, k, l)| crosscheck_tuple(a.q, n, k, l))
        .collect::<Result<_>>()?;
    let mut first = results.into_iter().flatten().next();
    let mut brute_checked = 0u64;
    if a.with_brute && first.is_none() {
        'outer: for n in a.min_n..=a.max_n {
            for k in 0..=n / 2 {
                let (b, _): (HullSpectrum, bool) = cache.memo(
                    json!({"kind": "brute_spectrum", "q": a.q, "n": n, "k": k}),
                    || brute::brute_spectrum(n, k, a.q),
                )?;
                brute_checked += 1;
                let s = census::spectrum(n, k, a.q, Method::Sendrier)?;
                if let Some(l) = (0..=k as usize).find(|&l| b.counts[l] != s.counts[l]) {
                    first = Some(Disagreement {
                        route: "brute force".into(),
                        n,
                        k,
                        l: l as u32,
                        expected: s.counts[l].clone(),
                        got: b.counts[l].clone(),
                    });
                    break 'outer;
                }
            }
        }
    }
    let mut table = TextTable::new(
        format!("cross-checks over GF({})", a.q),
        &["quantity", "value"],
    );
    table.push(vec!["lengths".into(), format!("{}..={}", a.min_n, a.max_n)]);
    table.push(vec!["formula tuples".into(), tuples.len().to_string()]);
    table.push(vec![
        "brute-force spectra".into(),
        brute_checked.to_string(),
    ]);
    table.push(vec![
        "result".into(),
        match &first {
            None => "all equal".to_string(),
            Some(d) => format!(
                "{} differs at n={}, k={}, l={}: expected {}, got {}",
                d.route, d.n, d.k, d.l, d.expected, d.got
            ),
        },
    ]);
    let mut csv = TextTable::new("", &["route", "n", "k", "l", "expected", "got"]);
    if let Some(d) = &first {
        csv.push(vec![
            d.route.clone(),
            d.n.to_string(),
            d.k.to_string(),
            d.l.to_string(),
            d.expected.to_string(),
            d.got.to_string(),
        ]);
    }
    Ok(Draft {
        command: "crosscheck",
        parameters: json!({"q": a.q, "min_n": a.min_n, "max_n": a.max_n, "with_brute": a.with_brute}),
        results: json!({
            "formula_tuples": tuples.len(),
            "brute_spectra": brute_checked,
            "first_disagreement": first,
        }),
        method: "formula against formula, and against enumeration".into(),
        formulas: vec![
            "sum over self-orthogonal subcodes".into(),
            "product formula by parity of q".into(),
            "duality A(n, k, l) = A(n, n-k, l)".into(),
        ],
        cached: false,
        verified: first.is_none(),
        tables: vec![table],
        csv,
    }
    .finish(start))
}

/// Runs one parsed command.
pub fn execute(cli: &Cli, cache: &Cache) -> Result<OutputDocument> {
    let run = || match &cli.command {
        Command::Spectrum(a) => cmd_spectrum(a, cache),
        Command::Ratios(a) => cmd_ratios(a),
        Command::Classify(a) => cmd_classify(a, cache),
        Command::Crosscheck(a) => cmd_crosscheck(a, cache),
    };
    match cli.threads {
        Some(0) => Err(Error::domain("--threads must be at least 1")),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Io(std::io::Error::other(e)))?
            .install(run),
        None => run(),
    }
}

/// Parses arguments, runs the command and prints the result. Returns the
/// process exit code: 0 ok, 1 verification failed, 2 usage or domain error,
/// 3 resource guard.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let cache = Cache::from_env(cli.no_cache);
    let doc = match execute(&cli, &cache).and_then(|d| Ok((d.render(cli.format)?, d))) {
        Ok((text, doc)) => {
            let _ = out.write_all(text.as_bytes());
            doc
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return e.exit_code();
        }
    };
    if doc.verified {
        0
    } else {
        let _ = writeln!(err, "verification failed; see the results for details");
        1
    }
}
