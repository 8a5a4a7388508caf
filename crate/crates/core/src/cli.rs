//! Command implementations behind the `ccm` binary. Each command reads and
//! writes plain files so runs can be chained in scripts; the binary only
//! parses arguments and maps errors to exit codes.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use crate::algebra::{is_ccm, ternary_is_ccm, CorrelationProfile, CycSum, PhaseCode, PhaseMatrix, TernaryMatrix};
use crate::archive::{format_archive, parse_archive, read_archive, read_phase_archive, Record};
use crate::classify::{census, CensusSummary, FactorPool};
use crate::construct::{concatenate, dual_pair_combine, kronecker};
use crate::error::{CcmError, Result};
use crate::search::{brute_force_ccm, run_search, search_ternary_ccm, Progress, SearchConfig, SearchHooks};
use crate::symmetry::{canonical_form, orbit_size};

/// Environment switch that lifts every feasibility guard.
pub const GUARD_ENV: &str = "CCM_GUARD_OVERRIDE";

pub fn guard_override_from_env() -> bool {
    std::env::var(GUARD_ENV).map(|v| v == "1").unwrap_or(false)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub record: Record,
    pub ccm: bool,
    /// Always false for ternary records.
    pub normalized: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub verdicts: Vec<Verdict>,
}

impl VerifyReport {
    pub fn total(&self) -> usize {
        self.verdicts.len()
    }

    pub fn passed(&self) -> usize {
        self.verdicts.iter().filter(|v| v.ccm).count()
    }

    pub fn all_pass(&self) -> bool {
        self.passed() == self.total()
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for (i, v) in self.verdicts.iter().enumerate() {
            let _ = writeln!(
                s,
                "{} {} {} {}",
                i + 1,
                if v.ccm { "ccm" } else { "not-ccm" },
                if v.normalized { "normalized" } else { "-" },
                v.record
            );
        }
        let _ = writeln!(s, "{}/{} CCM", self.passed(), self.total());
        s
    }
}

pub fn verify_records(records: Vec<Record>) -> VerifyReport {
    let verdicts = records
        .into_iter()
        .map(|record| {
            let (ccm, normalized) = match &record {
                Record::Phase(m) => (is_ccm(m), m.is_normalized()),
                Record::Ternary(t) => (ternary_is_ccm(t), false),
            };
            Verdict { record, ccm, normalized }
        })
        .collect();
    VerifyReport { verdicts }
}

pub fn cmd_verify(archive: &Path) -> Result<VerifyReport> {
    Ok(verify_records(read_archive(archive)?))
}

/// Reads a matrix argument. Accepted forms, tried in order: a path to an
/// archive (first phase record), bracketed quad notation `[[1,i],[1,-i]]`,
/// a binary code `++-+`, a code `p:digits`, or an inline archive record. Codes
/// become one-column matrices.
pub fn parse_matrix_arg(input: &str) -> Result<PhaseMatrix> {
    let perr = |msg: String| CcmError::Parse { line: 1, msg };
    let path = Path::new(input);
    if path.is_file() {
        return read_archive(path)?
            .into_iter()
            .find_map(|r| r.as_phase().cloned())
            .ok_or_else(|| perr(format!("{input}: no phase matrix in archive")));
    }
    let t = input.trim();
    if t.starts_with('[') {
        return PhaseMatrix::parse_quad(t);
    }
    if !t.is_empty() && t.chars().all(|c| c == '+' || c == '-') {
        let signs: Vec<i8> = t.chars().map(|c| if c == '+' { 1 } else { -1 }).collect();
        return code_column(&PhaseCode::binary(&signs)?);
    }
    if let Some((p, digits)) = t.split_once(':') {
        let p: u32 = p.parse().map_err(|_| perr(format!("bad modulus in {t:?}")))?;
        let exps = digits
            .chars()
            .map(|c| c.to_digit(36).map(|d| d as u8).ok_or_else(|| perr(format!("bad digit {c:?}"))))
            .collect::<Result<Vec<u8>>>()?;
        return code_column(&PhaseCode::new(p, exps)?);
    }
    match t.parse::<Record>()? {
        Record::Phase(m) => Ok(m),
        Record::Ternary(_) => Err(perr("expected a phase matrix, found a ternary one".into())),
    }
}

fn code_column(code: &PhaseCode) -> Result<PhaseMatrix> {
    PhaseMatrix::from_columns(code.p(), std::slice::from_ref(code))
}

fn value_fields(v: &CycSum) -> (String, String) {
    match v.as_gaussian() {
        Some((re, im)) => (re.to_string(), im.to_string()),
        None => {
            let z = v.to_complex();
            // Clean up -0 and rounding dust so equal inputs give equal bytes.
            let fmt = |x: f64| {
                let r = (x * 1e9).round() / 1e9;
                format!("{:.9}", if r == 0.0 { 0.0 } else { r })
            };
            (fmt(z.re), fmt(z.im))
        }
    }
}

/// `lag,real,imag` rows for every lag of the composite autocorrelation.
pub fn acf_csv(m: &PhaseMatrix) -> Result<String> {
    let profile = CorrelationProfile::of_matrix(m)?;
    let mut s = String::from("lag,real,imag\n");
    for (j, v) in profile.iter() {
        let (re, im) = value_fields(v);
        let _ = writeln!(s, "{j},{re},{im}");
    }
    Ok(s)
}

pub fn cmd_acf(input: &str, out: &Path) -> Result<usize> {
    let m = parse_matrix_arg(input)?;
    let csv = acf_csv(&m)?;
    fs::write(out, &csv)?;
    Ok(2 * m.n_rows() - 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Pruned,
    Brute,
    Ternary,
}

#[derive(Clone, Debug)]
pub struct SearchRequest {
    pub mode: SearchMode,
    /// `p` is ignored in ternary mode.
    pub config: SearchConfig,
    pub out: PathBuf,
    pub summary: Option<PathBuf>,
    pub checkpoint: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchSummary {
    pub mode: SearchMode,
    pub p: u32,
    pub n_rows: usize,
    pub n_cols: usize,
    pub raw: usize,
    pub nodes: u64,
    pub taxicab_pruned: u64,
    pub reversal_pruned: u64,
    pub branches: usize,
    pub resumed_branches: usize,
    pub wall_seconds: f64,
}

fn in_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if jobs == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CcmError::Io(e.to_string()))?;
    Ok(pool.install(f))
}

/// Runs a search, writes the raw archive to `req.out` and, if asked, a JSON
/// summary next to it.
pub fn cmd_search(req: &SearchRequest, progress: Option<&(dyn Fn(&Progress) + Sync)>) -> Result<SearchSummary> {
    let cfg = &req.config;
    let start = Instant::now();
    let mut summary = SearchSummary {
        mode: req.mode,
        p: cfg.p,
        n_rows: cfg.n_rows,
        n_cols: cfg.n_cols,
        raw: 0,
        nodes: 0,
        taxicab_pruned: 0,
        reversal_pruned: 0,
        branches: 0,
        resumed_branches: 0,
        wall_seconds: 0.0,
    };
    let text = match req.mode {
        SearchMode::Pruned => {
            let hooks = SearchHooks {
                checkpoint: req.checkpoint.clone(),
                progress,
            };
            let outcome = run_search(cfg, &hooks)?;
            let s = &outcome.stats;
            summary.nodes = s.nodes;
            summary.taxicab_pruned = s.taxicab_pruned;
            summary.reversal_pruned = s.reversal_pruned;
            summary.branches = s.branches;
            summary.resumed_branches = s.resumed_branches;
            summary.raw = outcome.matrices.len();
            format_archive(&outcome.matrices)
        }
        SearchMode::Brute => {
            let found = in_pool(cfg.jobs, || brute_force_ccm(cfg.p, cfg.n_rows, cfg.n_cols, cfg.guard_override))??;
            summary.raw = found.len();
            format_archive(&found)
        }
        SearchMode::Ternary => {
            summary.p = 3;
            let found: Vec<TernaryMatrix> = search_ternary_ccm(cfg.n_rows, cfg.n_cols, cfg.guard_override)?;
            summary.raw = found.len();
            format_archive(&found)
        }
    };
    fs::write(&req.out, text)?;
    summary.wall_seconds = start.elapsed().as_secs_f64();
    if let Some(path) = &req.summary {
        write_json(path, &summary)?;
    }
    Ok(summary)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CcmError::Io(e.to_string()))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

#[derive(Clone, Debug, Default)]
pub struct ClassifyOutputs {
    pub csv: Option<PathBuf>,
    pub witnesses: Option<PathBuf>,
    pub summary: Option<PathBuf>,
}

/// Census of one archive. All matrices must share a shape; the factor pool
/// for that shape is searched on the fly.
pub fn cmd_classify(archive: &Path, outputs: &ClassifyOutputs, jobs: usize) -> Result<CensusSummary> {
    let matrices = read_phase_archive(archive)?;
    let pool = match matrices.first() {
        Some(m) => FactorPool::for_target(m.p(), m.n_rows(), m.n_cols(), jobs)?,
        None => FactorPool::new(),
    };
    let c = in_pool(jobs, || census(&matrices, &pool))??;
    if let Some(path) = &outputs.csv {
        fs::write(path, c.to_csv())?;
    }
    if let Some(path) = &outputs.witnesses {
        fs::write(path, c.witness_archive())?;
    }
    let summary = c.summary();
    if let Some(path) = &outputs.summary {
        write_json(path, &summary)?;
    }
    Ok(summary)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstructKind {
    Kron,
    Concat,
    Dual,
}

fn single_record(path: &Path) -> Result<Record> {
    let mut recs = read_archive(path)?;
    if recs.len() != 1 {
        return Err(CcmError::Parse {
            line: 1,
            msg: format!("{}: expected exactly one matrix, found {}", path.display(), recs.len()),
        });
    }
    Ok(recs.remove(0))
}

fn phase_operand(rec: Record, name: &str) -> Result<PhaseMatrix> {
    match rec {
        Record::Phase(m) => Ok(m),
        Record::Ternary(_) => Err(CcmError::Parse {
            line: 1,
            msg: format!("operand {name} must be a phase matrix"),
        }),
    }
}

fn ternary_operand(rec: Record, name: &str) -> Result<TernaryMatrix> {
    match rec {
        Record::Ternary(t) => Ok(t),
        Record::Phase(_) => Err(CcmError::Parse {
            line: 1,
            msg: format!("operand {name} must be a ternary matrix"),
        }),
    }
}

/// Builds one matrix from two single-record archives and writes it to `out`.
pub fn cmd_construct(kind: ConstructKind, a: &Path, b: &Path, out: &Path) -> Result<PhaseMatrix> {
    let (ra, rb) = (single_record(a)?, single_record(b)?);
    let m = match kind {
        ConstructKind::Kron => kronecker(&phase_operand(ra, "A")?, &phase_operand(rb, "B")?)?,
        ConstructKind::Concat => concatenate(&phase_operand(ra, "A")?, &phase_operand(rb, "B")?)?,
        ConstructKind::Dual => dual_pair_combine(&ternary_operand(ra, "A")?, &ternary_operand(rb, "B")?)?,
    };
    fs::write(out, format_archive([&m]))?;
    Ok(m)
}

/// Canonical form and orbit size of each matrix in an archive or argument.
pub fn cmd_canonical(input: &str) -> Result<Vec<(PhaseMatrix, u128)>> {
    let path = Path::new(input);
    let matrices = if path.is_file() {
        read_phase_archive(path)?
    } else if let Ok(recs) = parse_archive(input) {
        recs.into_iter().filter_map(|r| r.as_phase().cloned()).collect()
    } else {
        vec![parse_matrix_arg(input)?]
    };
    matrices.iter().map(|m| Ok((canonical_form(m)?, orbit_size(m)?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_argument_forms() {
        let m = parse_matrix_arg("[[1,1],[1,-1]]").unwrap();
        assert_eq!(m.exps(), &[0, 0, 0, 2]);
        assert_eq!(parse_matrix_arg("4 2 2 00 02").unwrap(), m);
        let code = parse_matrix_arg("++-").unwrap();
        assert_eq!(code.shape(), (3, 1));
        assert_eq!(parse_matrix_arg("4:013").unwrap().exps(), &[0, 1, 3]);
        assert!(parse_matrix_arg("nonsense").is_err());
    }

    #[test]
    fn acf_of_trivial_code() {
        assert_eq!(acf_csv(&parse_matrix_arg("4:1").unwrap()).unwrap(), "lag,real,imag\n0,1,0\n");
        let csv = acf_csv(&parse_matrix_arg("3:01").unwrap()).unwrap();
        assert_eq!(csv.lines().nth(2).unwrap(), "0,2.000000000,0.000000000");
    }

    #[test]
    fn verify_counts() {
        let r = verify_records(parse_archive("4 2 2 00 00\n4 2 2 00 02\n").unwrap());
        assert_eq!((r.passed(), r.total()), (1, 2));
        assert!(r.render().ends_with("1/2 CCM\n"));
    }
}
