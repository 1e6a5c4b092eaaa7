//! Command line front end: `check`, `enumerate`, `witness`, `classify` and
//! `lattice`.
//!
//! Every command produces an [`Envelope`] rendered as JSON, CSV or an aligned
//! text table. Exit codes: 0 success, 1 domain failure (invalid witness,
//! positivity failure, unusable K3 discriminant), 2 invalid input.

use std::io::{self, Write};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::conditions::{self, ConditionError, DiscriminantProfile, PellSearch, ProfileFilter};
use crate::family::{self, FamilyError, FamilyWitness};
use crate::lattice::{self, GramMatrix, LatticeError};
use crate::motive::{self, DerivationTrace, HyperkahlerReport, MotiveError, MotiveExpression, MotiveStatus, Proof};

pub const SCHEMA_VERSION: &str = "1.0";
/// Upper limit on `enumerate` ranges.
pub const MAX_ENUMERATE: u64 = 10_000_000;
const ENUMERATE_CHUNK: u64 = 1 << 14;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "hassett-lab", version, about = "Discriminant conditions and motive classification for special cubic fourfolds")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Search bound on `a` for the Pell-type conditions.
    #[arg(long, global = true, env = "HASSETT_LAB_A_BOUND", default_value_t = conditions::DEFAULT_A_BOUND)]
    pub a_bound: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WitnessMode {
    Auto,
    None,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate every condition on one discriminant.
    Check {
        #[arg(allow_hyphen_values = true)]
        d: String,
    },
    /// List admissible discriminants in a range that pass the given filters.
    Enumerate {
        #[arg(allow_hyphen_values = true)]
        min: String,
        #[arg(allow_hyphen_values = true)]
        max: String,
        /// Require an associated K3 surface.
        #[arg(long)]
        k3: bool,
        /// Require F(X) to be a Hilbert square.
        #[arg(long)]
        fano: bool,
        /// Require the Bülles condition.
        #[arg(long)]
        bulles: bool,
        /// Require the Bülles condition and an associated K3 surface.
        #[arg(long)]
        bulles_k3: bool,
        /// Require a birational Hilbert-square certificate.
        #[arg(long)]
        addington: bool,
        /// Require an LLSvS certificate.
        #[arg(long)]
        llsvs: bool,
        /// Require a tail discriminant 6m^2 or 6m^2 + 2.
        #[arg(long)]
        tail: bool,
    },
    /// Build and verify a nineteen-discriminant family witness.
    Witness {
        #[arg(allow_hyphen_values = true)]
        d: String,
        #[arg(long, default_value = "14", allow_hyphen_values = true)]
        k3_disc: String,
    },
    /// Classify the motive of the family inside C_d.
    Classify {
        #[arg(allow_hyphen_values = true)]
        d: String,
        #[arg(long, value_enum, default_value_t = WitnessMode::Auto)]
        witness: WitnessMode,
        #[arg(long, default_value = "14", allow_hyphen_values = true)]
        k3_disc: String,
    },
    /// Realize labelling discriminants in one Gram matrix.
    Lattice {
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        discs: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorEntry {
    pub code: String,
    pub message: String,
}

/// Output of one command. Exactly one of `result` and `errors` is filled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub schema_version: String,
    pub command: String,
    pub result: Option<T>,
    pub errors: Vec<ErrorEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessResult {
    pub witness: FamilyWitness,
    pub trace: DerivationTrace,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyResult {
    pub d: u64,
    pub status: MotiveStatus,
    pub trace: DerivationTrace,
    pub witness: Option<FamilyWitness>,
    /// Decomposition of `h(X)` for the generic member, when proven.
    pub motive: Option<MotiveExpression>,
    pub fano: HyperkahlerReport,
    pub llsvs: HyperkahlerReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeResult {
    pub discs: Vec<u64>,
    pub gram: GramMatrix,
    pub sublattice_discriminants: Vec<u64>,
    /// Leading principal minors as decimal strings; they outgrow 64 bits.
    pub leading_minors: Vec<String>,
    pub positive_definite: bool,
}

/// A command failure with its error code and exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub exit_code: i32,
    pub entry: ErrorEntry,
}

impl Failure {
    fn new(exit_code: i32, code: &str, message: impl Into<String>) -> Self {
        Failure {
            exit_code,
            entry: ErrorEntry {
                code: code.into(),
                message: message.into(),
            },
        }
    }

    fn input(message: impl Into<String>) -> Self {
        Failure::new(EXIT_INPUT, "invalid-input", message)
    }
}

impl From<ConditionError> for Failure {
    fn from(e: ConditionError) -> Self {
        let code = match e {
            ConditionError::NotAdmissible(_) => "not-admissible",
            ConditionError::InvalidRange { .. } => "invalid-range",
            ConditionError::Overflow(_) => "overflow",
            ConditionError::InvalidInput(_) | ConditionError::InvalidBound => "invalid-input",
        };
        Failure::new(EXIT_INPUT, code, e.to_string())
    }
}

impl From<FamilyError> for Failure {
    fn from(e: FamilyError) -> Self {
        match &e {
            FamilyError::NotAdmissible(_) => Failure::new(EXIT_INPUT, "not-admissible", e.to_string()),
            FamilyError::InvalidInput(_) => Failure::input(e.to_string()),
            FamilyError::InvalidK3Disc { .. } => Failure::new(EXIT_DOMAIN, "invalid-k3-disc", e.to_string()),
            FamilyError::WitnessInvalid { .. } => Failure::new(EXIT_DOMAIN, "witness-invalid", e.to_string()),
        }
    }
}

impl From<LatticeError> for Failure {
    fn from(e: LatticeError) -> Self {
        match &e {
            LatticeError::NotAdmissible(_) => Failure::new(EXIT_INPUT, "not-admissible", e.to_string()),
            LatticeError::PositivityFailure { .. } => Failure::new(EXIT_DOMAIN, "positivity-failure", e.to_string()),
            LatticeError::InvalidInput(_) | LatticeError::IndexOutOfRange { .. } => Failure::input(e.to_string()),
        }
    }
}

impl From<MotiveError> for Failure {
    fn from(e: MotiveError) -> Self {
        match e {
            MotiveError::NotAdmissible(_) => Failure::new(EXIT_INPUT, "not-admissible", e.to_string()),
            MotiveError::WitnessInvalid(inner) => inner.into(),
            other => Failure::new(EXIT_DOMAIN, "motive-error", other.to_string()),
        }
    }
}

type CmdResult<T> = std::result::Result<T, Failure>;

/// Parses a positive integer below 2^63.
pub fn parse_positive(s: &str) -> CmdResult<u64> {
    let v: i128 = s
        .trim()
        .parse()
        .map_err(|_| Failure::input(format!("'{s}' is not an integer")))?;
    if v <= 0 {
        return Err(Failure::input(format!("{v} is not a positive integer")));
    }
    if v >= crate::arith::MAX_INPUT as i128 {
        return Err(Failure::input(format!("{v} exceeds 2^63 - 1")));
    }
    Ok(v as u64)
}

fn check_bound(a_bound: u64) -> CmdResult<u64> {
    if a_bound == 0 {
        Err(Failure::input("--a-bound must be at least 1"))
    } else {
        Ok(a_bound)
    }
}

pub fn cmd_check(d: &str, a_bound: u64) -> CmdResult<DiscriminantProfile> {
    let d = parse_positive(d)?;
    let p = conditions::profile(d, check_bound(a_bound)?)?;
    if !p.admissible {
        return Err(ConditionError::NotAdmissible(d).into());
    }
    Ok(p)
}

fn enumerate_args(min: &str, max: &str, a_bound: u64) -> CmdResult<(u64, u64)> {
    let range_err = |m: &str| Failure::new(EXIT_INPUT, "invalid-range", m.to_string());
    let min = parse_positive(min).map_err(|f| range_err(&f.entry.message))?;
    let max = parse_positive(max).map_err(|f| range_err(&f.entry.message))?;
    if min > max || max > MAX_ENUMERATE {
        return Err(range_err(&format!("need 1 <= min <= max <= {MAX_ENUMERATE}, got [{min}, {max}]")));
    }
    check_bound(a_bound)?;
    Ok((min, max))
}

pub fn cmd_enumerate(min: &str, max: &str, filter: &ProfileFilter, a_bound: u64) -> CmdResult<Vec<DiscriminantProfile>> {
    let (min, max) = enumerate_args(min, max, a_bound)?;
    Ok(conditions::enumerate_profiles(min, max, filter, a_bound)?)
}

pub fn cmd_witness(d: &str, k3_disc: &str) -> CmdResult<WitnessResult> {
    let d = parse_positive(d)?;
    let k3 = parse_positive(k3_disc)?;
    let witness = family::build_witness(d, k3)?;
    let trace = family::verify_witness(&witness)?;
    Ok(WitnessResult { witness, trace })
}

pub fn cmd_classify(d: &str, mode: WitnessMode, k3_disc: &str, a_bound: u64) -> CmdResult<ClassifyResult> {
    let d = parse_positive(d)?;
    let k3 = parse_positive(k3_disc)?;
    let profile = conditions::profile(d, check_bound(a_bound)?)?;
    if !profile.admissible {
        return Err(ConditionError::NotAdmissible(d).into());
    }
    let witness = match mode {
        WitnessMode::Auto => Some(family::build_witness(d, k3)?),
        WitnessMode::None => None,
    };
    let (status, trace) = motive::classify(&profile, witness.as_ref())?;
    let motive = match (&witness, status.is_proven()) {
        (Some(w), true) => {
            let rho2 = w.lattice_rank() as u32;
            let cubic = motive::chow_kunneth_cubic(rho2)?;
            Some(motive::substitute_k3(&cubic, rho2, rho2 - 1)?)
        }
        _ => None,
    };
    Ok(ClassifyResult {
        d,
        status,
        trace,
        witness,
        motive,
        fano: motive::fano_status(&profile, status),
        llsvs: motive::llsvs_status(&profile, status),
    })
}

pub fn cmd_lattice(discs: &[String]) -> CmdResult<LatticeResult> {
    let discs = discs.iter().map(|s| parse_positive(s)).collect::<CmdResult<Vec<u64>>>()?;
    let gram = lattice::simultaneous_gram(&discs)?;
    let sublattice_discriminants = (1..gram.rank())
        .map(|i| {
            let v = lattice::sublattice_discriminant(&gram, i)?;
            u64::try_from(v).map_err(|e| LatticeError::InvalidInput(e.to_string()))
        })
        .collect::<std::result::Result<Vec<u64>, LatticeError>>()?;
    Ok(LatticeResult {
        discs,
        leading_minors: lattice::leading_minors(&gram).iter().map(|m| m.to_string()).collect(),
        positive_definite: lattice::is_positive_definite(&gram),
        sublattice_discriminants,
        gram,
    })
}

// ---------------------------------------------------------------------------
// tabular rendering

/// One titled block of a table or CSV document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub title: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Section {
    fn new(title: &str, headers: &[&str]) -> Self {
        Section {
            title: title.into(),
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }
}

/// Flattening of a result payload into table sections.
pub trait Tabular {
    fn sections(&self) -> Vec<Section>;
}

const PROFILE_HEADERS: [&str; 13] = [
    "d",
    "residue_mod_6",
    "admissible",
    "has_associated_k3",
    "bulles_with_k3",
    "contains_plane_divisor",
    "c14_member_rational",
    "fano_n",
    "bulles",
    "addington",
    "llsvs",
    "tail",
    "tail_primes",
];

fn opt<T>(v: Option<T>, f: impl FnOnce(T) -> String) -> String {
    v.map_or_else(|| "-".to_string(), f)
}

fn pell_cell(s: &Option<PellSearch>) -> String {
    match s {
        None => "-".into(),
        Some(PellSearch::Found(c)) => format!("n={} a={}", c.n, c.a),
        Some(PellSearch::BoundExhausted { a_bound }) => format!("none(a<={a_bound})"),
    }
}

fn profile_row(p: &DiscriminantProfile) -> Vec<String> {
    vec![
        p.d.to_string(),
        p.residue_mod_6.to_string(),
        p.admissible.to_string(),
        p.has_associated_k3.to_string(),
        p.bulles_with_k3.to_string(),
        p.contains_plane_divisor.to_string(),
        p.c14_member_rational.to_string(),
        opt(p.fano_hilb2, |c| c.n.to_string()),
        opt(p.bulles, |c| format!("f={} g={} n={}", c.f, c.g, c.n)),
        pell_cell(&p.addington),
        pell_cell(&p.llsvs),
        opt(p.tail.as_ref(), |t| format!("6*{}^2+{}", t.m, t.offset)),
        opt(p.tail.as_ref(), |t| {
            t.prime_factorization_of_m
                .factors
                .iter()
                .map(|pp| format!("{}^{}", pp.prime, pp.exponent))
                .collect::<Vec<_>>()
                .join("*")
        }),
    ]
}

fn trace_section(trace: &DerivationTrace) -> Section {
    let mut s = Section::new("trace", &["step", "anchor", "statement"]);
    for (i, step) in trace.steps.iter().enumerate() {
        s.rows.push(vec![(i + 1).to_string(), step.anchor.to_string(), step.statement.clone()]);
    }
    s
}

fn proof(p: Proof) -> String {
    match p {
        Proof::Proven => "proven".into(),
        Proof::Unknown => "unknown".into(),
    }
}

fn relation_cells(r: &HyperkahlerReport) -> Vec<String> {
    use motive::Relation::*;
    let (n, a) = match r.relation {
        IsomorphicHilb2 { n } => (n.to_string(), "-".to_string()),
        BirationalHilb2 { n, a } | BirationalHilb4 { n, a } => (n.to_string(), a.to_string()),
        UndefinedContainsPlane | NoneKnown => ("-".into(), "-".into()),
    };
    let variety = match r.variety {
        motive::Hyperkahler::FanoVariety => "F(X)",
        motive::Hyperkahler::LlsvsEightfold => "L(X)",
    };
    vec![
        variety.into(),
        r.relation.name().into(),
        n,
        a,
        proof(r.motive_status.finite_dimensional),
        proof(r.motive_status.abelian_type),
        r.anchor.to_string(),
    ]
}

impl Tabular for DiscriminantProfile {
    fn sections(&self) -> Vec<Section> {
        let mut s = Section::new("profile", &PROFILE_HEADERS);
        s.rows.push(profile_row(self));
        vec![s]
    }
}

impl Tabular for Vec<DiscriminantProfile> {
    fn sections(&self) -> Vec<Section> {
        let mut s = Section::new("profiles", &PROFILE_HEADERS);
        s.rows.extend(self.iter().map(profile_row));
        vec![s]
    }
}

fn witness_section(w: &FamilyWitness) -> Section {
    let mut s = Section::new("discriminants", &["d", "role", "certificate"]);
    for &d in &w.all_discs {
        let (role, cert) = if d == w.target_d && d == w.k3_disc {
            ("target+k3", w.certificates.k3.map(|c| format!("f={} g={} n={}", c.f, c.g, c.n)))
        } else if d == w.target_d {
            ("target", None)
        } else if d == w.k3_disc {
            ("k3", w.certificates.k3.map(|c| format!("f={} g={} n={}", c.f, c.g, c.n)))
        } else {
            ("tail", w.certificates.tails.get(&d).map(|t| format!("6*{}^2+{}", t.m, t.offset)))
        };
        s.rows.push(vec![d.to_string(), role.into(), cert.unwrap_or_else(|| "-".into())]);
    }
    s
}

impl Tabular for WitnessResult {
    fn sections(&self) -> Vec<Section> {
        let w = &self.witness;
        let mut summary = Section::new("witness", &["target_d", "k3_disc", "distinct", "lattice_rank"]);
        summary.rows.push(vec![
            w.target_d.to_string(),
            w.k3_disc.to_string(),
            w.all_discs.len().to_string(),
            w.lattice_rank().to_string(),
        ]);
        vec![summary, witness_section(w), trace_section(&self.trace)]
    }
}

impl Tabular for ClassifyResult {
    fn sections(&self) -> Vec<Section> {
        let mut status = Section::new("status", &["d", "finite_dimensional", "abelian_type", "motive"]);
        status.rows.push(vec![
            self.d.to_string(),
            proof(self.status.finite_dimensional),
            proof(self.status.abelian_type),
            opt(self.motive.as_ref(), |m| m.to_string()),
        ]);
        let mut hk = Section::new(
            "hyperkahler",
            &["variety", "relation", "n", "a", "finite_dimensional", "abelian_type", "anchor"],
        );
        hk.rows.push(relation_cells(&self.fano));
        hk.rows.push(relation_cells(&self.llsvs));
        let mut out = vec![status, trace_section(&self.trace), hk];
        if let Some(w) = &self.witness {
            out.push(witness_section(w));
        }
        out
    }
}

impl Tabular for LatticeResult {
    fn sections(&self) -> Vec<Section> {
        let rank = self.gram.rank();
        let mut summary = Section::new("lattice", &["rank", "positive_definite", "determinant"]);
        summary.rows.push(vec![
            rank.to_string(),
            self.positive_definite.to_string(),
            self.leading_minors.last().cloned().unwrap_or_default(),
        ]);
        let col_names: Vec<String> = (0..rank).map(|j| format!("c{j}")).collect();
        let mut headers: Vec<&str> = vec!["row"];
        headers.extend(col_names.iter().map(String::as_str));
        let mut gram = Section::new("gram", &headers);
        for (i, row) in self.gram.rows().iter().enumerate() {
            let mut cells = vec![i.to_string()];
            cells.extend(row.iter().map(i64::to_string));
            gram.rows.push(cells);
        }
        let mut subs = Section::new("sublattices", &["index", "input", "discriminant", "leading_minor"]);
        for (k, (&d, &sub)) in self.discs.iter().zip(&self.sublattice_discriminants).enumerate() {
            subs.rows.push(vec![
                (k + 1).to_string(),
                d.to_string(),
                sub.to_string(),
                self.leading_minors.get(k + 1).cloned().unwrap_or_default(),
            ]);
        }
        vec![summary, gram, subs]
    }
}

fn error_section(errors: &[ErrorEntry]) -> Section {
    let mut s = Section::new("errors", &["code", "message"]);
    s.rows.extend(errors.iter().map(|e| vec![e.code.clone(), e.message.clone()]));
    s
}

fn escape_cell(c: &str) -> String {
    c.replace('\\', "\\\\").replace('|', "\\|")
}

fn table_line(cells: &[String], widths: &[usize]) -> String {
    cells
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let c = escape_cell(c);
            let w = widths.get(i).copied().unwrap_or(0);
            format!("{c:<w$}")
        })
        .collect::<Vec<_>>()
        .join(" | ")
        .trim_end()
        .to_string()
}

fn rule(widths: &[usize]) -> String {
    widths.iter().map(|w| "-".repeat((*w).max(1))).collect::<Vec<_>>().join("-+-")
}

pub fn render_table(sections: &[Section]) -> String {
    let mut out = String::new();
    for (k, s) in sections.iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        let mut widths: Vec<usize> = s.headers.iter().map(|h| h.chars().count()).collect();
        for row in &s.rows {
            for (i, c) in row.iter().enumerate() {
                if i < widths.len() {
                    widths[i] = widths[i].max(escape_cell(c).chars().count());
                }
            }
        }
        out.push_str(&format!("== {} ==\n", s.title));
        out.push_str(&table_line(&s.headers, &widths));
        out.push('\n');
        out.push_str(&rule(&widths));
        out.push('\n');
        for row in &s.rows {
            out.push_str(&table_line(row, &widths));
            out.push('\n');
        }
    }
    out
}

fn split_table_line(line: &str) -> Vec<String> {
    let mut cells = vec![String::new()];
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '\\' => {
                if let Some(n) = chars.next() {
                    cells.last_mut().unwrap().push(n);
                }
            }
            '|' => cells.push(String::new()),
            _ => cells.last_mut().unwrap().push(c),
        }
    }
    cells.into_iter().map(|c| c.trim().to_string()).collect()
}

/// Inverse of [`render_table`].
pub fn parse_table(text: &str) -> Vec<Section> {
    let mut out: Vec<Section> = Vec::new();
    let mut lines = text.lines().peekable();
    while let Some(line) = lines.next() {
        let Some(title) = line.strip_prefix("== ").and_then(|l| l.strip_suffix(" ==")) else {
            continue;
        };
        let headers = lines.next().map(split_table_line).unwrap_or_default();
        lines.next(); // rule
        let mut rows = Vec::new();
        while let Some(l) = lines.peek() {
            if l.is_empty() || l.starts_with("== ") {
                break;
            }
            let mut row = split_table_line(l);
            row.resize(headers.len(), String::new());
            rows.push(row);
            lines.next();
        }
        out.push(Section {
            title: title.to_string(),
            headers,
            rows,
        });
    }
    out
}

fn csv_block(s: &Section) -> String {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    w.write_record(&s.headers).expect("in-memory write");
    for row in &s.rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8 input")
}

pub fn render_csv(sections: &[Section]) -> String {
    sections
        .iter()
        .map(|s| format!("[{}]\n{}", s.title, csv_block(s)))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Inverse of [`render_csv`].
pub fn parse_csv(text: &str) -> Vec<Section> {
    let mut out = Vec::new();
    let mut title: Option<String> = None;
    let mut body = String::new();
    let flush = |title: &mut Option<String>, body: &mut String, out: &mut Vec<Section>| {
        if let Some(t) = title.take() {
            let mut r = csv::ReaderBuilder::new()
                .has_headers(false)
                .flexible(true)
                .from_reader(body.as_bytes());
            let mut records = r
                .records()
                .filter_map(|rec| rec.ok())
                .map(|rec| rec.iter().map(str::to_string).collect::<Vec<_>>());
            let headers = records.next().unwrap_or_default();
            out.push(Section {
                title: t,
                headers,
                rows: records.collect(),
            });
        }
        body.clear();
    };
    for line in text.split_inclusive('\n') {
        let trimmed = line.trim_end_matches(['\n', '\r']);
        if let Some(t) = trimmed.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            if !t.contains(',') {
                flush(&mut title, &mut body, &mut out);
                title = Some(t.to_string());
                continue;
            }
        }
        if trimmed.is_empty() && title.is_some() && !body.is_empty() {
            // blank separator between blocks; quoted fields never span lines here
            continue;
        }
        body.push_str(line);
    }
    flush(&mut title, &mut body, &mut out);
    out
}

// ---------------------------------------------------------------------------
// dispatch

fn envelope<'a, T>(command: &str, outcome: &'a CmdResult<T>) -> Envelope<&'a T> {
    Envelope {
        schema_version: SCHEMA_VERSION.into(),
        command: command.into(),
        result: outcome.as_ref().ok(),
        errors: outcome.as_ref().err().map(|f| vec![f.entry.clone()]).unwrap_or_default(),
    }
}

/// Renders a finished command and returns its exit code.
pub fn render<T: Serialize + Tabular>(command: &str, outcome: &CmdResult<T>, format: Format) -> (String, i32) {
    let code = outcome.as_ref().map_or_else(|f| f.exit_code, |_| EXIT_OK);
    let sections = match outcome {
        Ok(r) => r.sections(),
        Err(f) => vec![error_section(std::slice::from_ref(&f.entry))],
    };
    let text = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&envelope(command, outcome)).expect("serializable payload");
            s.push('\n');
            s
        }
        Format::Csv => render_csv(&sections),
        Format::Table => render_table(&sections),
    };
    (text, code)
}

fn stream_enumerate(
    out: &mut dyn Write,
    min: &str,
    max: &str,
    filter: &ProfileFilter,
    a_bound: u64,
    format: Format,
) -> io::Result<i32> {
    let (min, max) = match enumerate_args(min, max, a_bound) {
        Ok(r) => r,
        Err(f) => {
            let (text, code) = render::<Vec<DiscriminantProfile>>("enumerate", &Err(f), format);
            out.write_all(text.as_bytes())?;
            return Ok(code);
        }
    };
    let headers: Vec<String> = PROFILE_HEADERS.iter().map(|h| h.to_string()).collect();
    let widths: Vec<usize> = headers.iter().map(|h| h.len().max(10)).collect();
    match format {
        Format::Json => write!(
            out,
            "{{\"schema_version\":\"{SCHEMA_VERSION}\",\"command\":\"enumerate\",\"result\":["
        )?,
        Format::Csv => {
            writeln!(out, "[profiles]")?;
            let block = csv_block(&Section { title: String::new(), headers, rows: Vec::new() });
            out.write_all(block.as_bytes())?;
        }
        Format::Table => {
            writeln!(out, "== profiles ==")?;
            writeln!(out, "{}", table_line(&headers, &widths))?;
            writeln!(out, "{}", rule(&widths))?;
        }
    }
    let mut first = true;
    let mut lo = min;
    while lo <= max {
        let hi = max.min(lo.saturating_add(ENUMERATE_CHUNK - 1));
        let chunk = conditions::enumerate_profiles(lo, hi, filter, a_bound).map_err(io::Error::other)?;
        for p in &chunk {
            match format {
                Format::Json => {
                    if !first {
                        out.write_all(b",")?;
                    }
                    out.write_all(b"\n")?;
                    serde_json::to_writer(&mut *out, p)?;
                }
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(profile_row(p)).map_err(io::Error::other)?;
                    out.write_all(&w.into_inner().map_err(|e| io::Error::other(e.to_string()))?)?;
                }
                Format::Table => writeln!(out, "{}", table_line(&profile_row(p), &widths))?,
            }
            first = false;
        }
        out.flush()?;
        lo = hi + 1;
    }
    if format == Format::Json {
        writeln!(out, "\n],\"errors\":[]}}")?;
    }
    Ok(EXIT_OK)
}

/// Runs a parsed command line, writing the rendered output to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> io::Result<i32> {
    let a = cli.a_bound;
    let (text, code) = match &cli.command {
        Command::Check { d } => render("check", &cmd_check(d, a), cli.format),
        Command::Enumerate { min, max, k3, fano, bulles, bulles_k3, addington, llsvs, tail } => {
            let filter = ProfileFilter {
                has_associated_k3: *k3,
                fano: *fano,
                bulles: *bulles,
                bulles_with_k3: *bulles_k3,
                addington: *addington,
                llsvs: *llsvs,
                tail: *tail,
            };
            return stream_enumerate(out, min, max, &filter, a, cli.format);
        }
        Command::Witness { d, k3_disc } => render("witness", &cmd_witness(d, k3_disc), cli.format),
        Command::Classify { d, witness, k3_disc } => {
            render("classify", &cmd_classify(d, *witness, k3_disc, a), cli.format)
        }
        Command::Lattice { discs } => render("lattice", &cmd_lattice(discs), cli.format),
    };
    out.write_all(text.as_bytes())?;
    Ok(code)
}

/// Parses `args` (including the program name) and runs the command.
/// Usage errors go to `err` with exit code 2.
pub fn main_with_args<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match run(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DOMAIN
        }
    }
}
