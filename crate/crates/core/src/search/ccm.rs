//! Outside-in exhaustive search for normalized CCMs.
//!
//! Rows are placed in the order `r_1, r_N, r_2, r_{N-1}, r_3, …`. Each bottom
//! row `r_b` is the only unknown in the lag `b-1` row correlation once the
//! top rows above it are fixed, so it is read off a table of rows keyed by
//! their sum instead of being enumerated.

use std::collections::{HashMap, HashSet};
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::PathBuf;
use std::rc::Rc;
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tuples::{all_rows, rows_by_sum, sorted_within_runs, zero_sum_tuples};
use crate::algebra::{CyclotomicRing, PhaseMatrix};
use crate::error::{CcmError, Result};
use crate::symmetry::canonical_form;

/// Nodes between two progress records of one branch.
pub const PROGRESS_INTERVAL: u64 = 1_000_000;

/// Largest `N · K · log2 p` searched without an explicit override.
pub const SEARCH_GUARD_BITS: f64 = 64.0;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub p: u32,
    pub n_rows: usize,
    pub n_cols: usize,
    /// Keep only the column-reversal representative with the smaller
    /// second-row exponent.
    pub prune_reversal: bool,
    /// Sort top rows inside runs of equal columns.
    pub prune_sorted_rows: bool,
    /// With `prune_sorted_rows`, also sort the middle row of an odd-height
    /// matrix. Turning this off raises the quad-phase 5x4 raw count from 1611 to 5246.
    pub sort_middle_row: bool,
    /// Report every matrix found; otherwise one canonical form per class.
    pub emit_raw: bool,
    pub guard_override: bool,
    /// Worker threads; 0 uses the rayon default.
    pub jobs: usize,
}

impl SearchConfig {
    pub fn new(p: u32, n_rows: usize, n_cols: usize) -> Self {
        SearchConfig {
            p,
            n_rows,
            n_cols,
            prune_reversal: true,
            prune_sorted_rows: true,
            sort_middle_row: true,
            emit_raw: true,
            guard_override: false,
            jobs: 0,
        }
    }

    pub fn unpruned(mut self) -> Self {
        self.prune_reversal = false;
        self.prune_sorted_rows = false;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.p < 2 || self.p > crate::algebra::MAX_MODULUS {
            return Err(CcmError::InvalidModulus(self.p));
        }
        if self.n_rows == 0 || self.n_cols == 0 {
            return Err(CcmError::DimensionMismatch("search needs N >= 1 and K >= 1".into()));
        }
        let bits = (self.n_rows * self.n_cols) as f64 * (self.p as f64).log2();
        if bits > SEARCH_GUARD_BITS && !self.guard_override {
            return Err(CcmError::GuardExceeded(format!(
                "search space of 2^{bits:.1} exceeds 2^{SEARCH_GUARD_BITS}"
            )));
        }
        if (self.p as f64).powi(self.n_cols as i32) > 1e7 {
            return Err(CcmError::GuardExceeded(format!(
                "row table of {}^{} entries",
                self.p, self.n_cols
            )));
        }
        Ok(())
    }
}

/// Side-channel record emitted every [`PROGRESS_INTERVAL`] nodes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Progress {
    pub branch: usize,
    pub nodes: u64,
    pub found: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub branches: usize,
    pub resumed_branches: usize,
    pub nodes: u64,
    pub taxicab_pruned: u64,
    pub reversal_pruned: u64,
    pub leaves: u64,
    pub found: u64,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub matrices: Vec<PhaseMatrix>,
    pub stats: SearchStats,
}

/// Optional checkpoint file and progress sink.
#[derive(Default)]
pub struct SearchHooks<'a> {
    pub checkpoint: Option<PathBuf>,
    pub progress: Option<&'a (dyn Fn(&Progress) + Sync)>,
}

#[derive(Serialize, Deserialize)]
struct CheckpointHeader {
    p: u32,
    n_rows: usize,
    n_cols: usize,
    prune_reversal: bool,
    prune_sorted_rows: bool,
    sort_middle_row: bool,
}

#[derive(Serialize, Deserialize)]
struct CheckpointEntry {
    branch: usize,
    nodes: u64,
    matrices: Vec<String>,
}

#[derive(Clone, Copy, Debug)]
enum Slot {
    Top(usize),
    Bottom(usize),
}

struct Plan {
    p: u32,
    n: usize,
    k: usize,
    prune_reversal: bool,
    prune_sorted: bool,
    sort_middle: bool,
    /// Slots after `r_1`, `r_N` and `r_2`.
    order: Vec<Slot>,
    /// Lags left for the leaf check.
    leaf_lags: Vec<usize>,
    by_sum: HashMap<Vec<i64>, Vec<Vec<u8>>>,
    bound: i64,
    all: Vec<Vec<u8>>,
}

impl Plan {
    fn new(cfg: &SearchConfig) -> Self {
        let (n, k) = (cfg.n_rows, cfg.n_cols);
        let mut order = Vec::new();
        let (mut lo, mut hi) = (2usize, n.saturating_sub(2));
        let mut bottom = true;
        while lo <= hi {
            if bottom {
                order.push(Slot::Bottom(hi));
                hi -= 1;
            } else {
                order.push(Slot::Top(lo));
                lo += 1;
            }
            bottom = !bottom;
        }
        let solved: HashSet<usize> = order
            .iter()
            .filter_map(|s| match s {
                Slot::Bottom(b) => Some(*b),
                Slot::Top(_) => None,
            })
            .chain(std::iter::once(n - 1))
            .collect();
        let leaf_lags = (1..n).filter(|l| !solved.contains(l)).collect();
        let ring = CyclotomicRing::get(cfg.p);
        Plan {
            p: cfg.p,
            n,
            k,
            prune_reversal: cfg.prune_reversal,
            prune_sorted: cfg.prune_sorted_rows,
            sort_middle: cfg.sort_middle_row,
            order,
            leaf_lags,
            by_sum: rows_by_sum(cfg.p, k),
            bound: k as i64 * ring.max_root_norm(),
            all: all_rows(cfg.p, k),
        }
    }

    fn lag_hist(&self, m: &[u8], lag: usize, from: usize, hist: &mut [i64]) {
        let (p, k) = (self.p as usize, self.k);
        hist.iter_mut().for_each(|h| *h = 0);
        for i in from..self.n - lag {
            let a = &m[i * k..(i + 1) * k];
            let b = &m[(i + lag) * k..(i + lag + 1) * k];
            for (&x, &y) in a.iter().zip(b) {
                hist[(x as usize + p - y as usize) % p] += 1;
            }
        }
    }
}

struct Worker<'a> {
    plan: &'a Plan,
    ring: &'static CyclotomicRing,
    m: Vec<u8>,
    hist: Vec<i64>,
    target: Vec<i64>,
    runs_cache: HashMap<Vec<bool>, Rc<Vec<Vec<u8>>>>,
    all: Rc<Vec<Vec<u8>>>,
    stats: SearchStats,
    found: Vec<Vec<u8>>,
    branch: usize,
    next_report: u64,
    progress: Option<&'a (dyn Fn(&Progress) + Sync)>,
}

impl<'a> Worker<'a> {
    fn tick(&mut self) {
        self.stats.nodes += 1;
        if self.stats.nodes >= self.next_report {
            self.next_report += PROGRESS_INTERVAL;
            if let Some(f) = self.progress {
                f(&Progress {
                    branch: self.branch,
                    nodes: self.stats.nodes,
                    found: self.found.len() as u64,
                });
            }
        }
    }

    fn set_row(&mut self, r: usize, row: &[u8]) {
        let k = self.plan.k;
        self.m[r * k..(r + 1) * k].copy_from_slice(row);
    }

    fn descend(&mut self, depth: usize) {
        let plan = self.plan;
        if depth == plan.order.len() {
            self.leaf();
            return;
        }
        match plan.order[depth] {
            Slot::Bottom(b) => self.place_bottom(depth, b),
            Slot::Top(t) => self.place_top(depth, t),
        }
    }

    fn place_bottom(&mut self, depth: usize, b: usize) {
        let plan = self.plan;
        let p = plan.p as usize;
        // Σ_{i>=1} r_i·conj(r_{i+b}) is known; r_1·conj(r_b) = conj(Σ r_b)
        let mut hist = std::mem::take(&mut self.hist);
        plan.lag_hist(&self.m, b, 1, &mut hist);
        // Σ r_b = -conj(partial)
        let mut target = std::mem::take(&mut self.target);
        target.iter_mut().for_each(|t| *t = 0);
        for (e, &c) in hist.iter().enumerate() {
            target[(p - e) % p] -= c;
        }
        let key = self.ring.reduce(&target);
        self.hist = hist;
        self.target = target;
        if key.iter().map(|c| c.abs()).sum::<i64>() > plan.bound {
            self.stats.taxicab_pruned += 1;
            return;
        }
        let Some(rows) = plan.by_sum.get(&key) else {
            return;
        };
        let filter = plan.prune_reversal && b == plan.n - 2 && plan.n >= 4;
        for row in rows {
            self.tick();
            if filter && !self.reversal_ok(row) {
                self.stats.reversal_pruned += 1;
                continue;
            }
            self.set_row(b, row);
            self.descend(depth + 1);
        }
    }

    /// Column `k` and its conjugate reversal, renormalized, have second-row
    /// exponents `m_{2,k}` and `m_{N,k} - m_{N-1,k}`; keep the smaller.
    fn reversal_ok(&self, row: &[u8]) -> bool {
        let (p, k, n) = (self.plan.p as usize, self.plan.k, self.plan.n);
        (1..k).all(|c| {
            let cur = self.m[k + c] as usize;
            let rev = (self.m[(n - 1) * k + c] as usize + p - row[c] as usize) % p;
            cur <= rev
        })
    }

    fn place_top(&mut self, depth: usize, t: usize) {
        let plan = self.plan;
        let k = plan.k;
        let middle = plan.n % 2 == 1 && t == plan.n / 2;
        let cands = if plan.prune_sorted && (plan.sort_middle || !middle) {
            // runs of columns equal on every top row placed so far
            let runs: Vec<bool> = (0..k)
                .map(|c| c == 0 || (1..t).any(|r| self.m[r * k + c] != self.m[r * k + c - 1]))
                .collect();
            let p = plan.p;
            self.runs_cache
                .entry(runs)
                .or_insert_with_key(|runs| Rc::new(sorted_within_runs(p, runs)))
                .clone()
        } else {
            self.all.clone()
        };
        for row in cands.iter() {
            self.tick();
            self.set_row(t, row);
            self.descend(depth + 1);
        }
    }

    fn leaf(&mut self) {
        self.stats.leaves += 1;
        let plan = self.plan;
        let mut hist = std::mem::take(&mut self.hist);
        let ok = plan.leaf_lags.iter().all(|&lag| {
            plan.lag_hist(&self.m, lag, 0, &mut hist);
            self.ring.is_zero(&hist)
        });
        self.hist = hist;
        if ok {
            self.stats.found += 1;
            self.found.push(self.m.clone());
        }
    }
}

fn merge_stats(into: &mut SearchStats, s: &SearchStats) {
    into.nodes += s.nodes;
    into.taxicab_pruned += s.taxicab_pruned;
    into.reversal_pruned += s.reversal_pruned;
    into.leaves += s.leaves;
    into.found += s.found;
}

fn load_checkpoint(path: &PathBuf, cfg: &SearchConfig) -> Result<HashMap<usize, CheckpointEntry>> {
    let header = CheckpointHeader {
        p: cfg.p,
        n_rows: cfg.n_rows,
        n_cols: cfg.n_cols,
        prune_reversal: cfg.prune_reversal,
        prune_sorted_rows: cfg.prune_sorted_rows,
        sort_middle_row: cfg.sort_middle_row,
    };
    let header_line = serde_json::to_string(&header).expect("header serializes");
    let mut done = HashMap::new();
    let text = if path.exists() { fs::read_to_string(path)? } else { String::new() };
    let mut lines = text.lines();
    match lines.next() {
        Some(line) if line != header_line => {
            return Err(CcmError::Parse {
                line: 1,
                msg: "checkpoint belongs to a different search".into(),
            });
        }
        _ => {}
    }
    let mut kept = vec![header_line];
    let mut dirty = !text.ends_with('\n');
    for line in lines {
        // a torn final line from an interrupted write is dropped
        match serde_json::from_str::<CheckpointEntry>(line) {
            Ok(entry) => {
                done.insert(entry.branch, entry);
                kept.push(line.to_string());
            }
            Err(_) => dirty = true,
        }
    }
    if dirty {
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, kept.join("\n") + "\n")?;
        fs::rename(&tmp, path)?;
    }
    Ok(done)
}

/// Run the search with optional checkpoint and progress reporting.
pub fn run_search(cfg: &SearchConfig, hooks: &SearchHooks<'_>) -> Result<SearchOutcome> {
    cfg.validate()?;
    let (p, n, k) = (cfg.p, cfg.n_rows, cfg.n_cols);
    let mut stats = SearchStats::default();
    let zero_rows = zero_sum_tuples(p, k);

    let raw: Vec<Vec<u8>> = match n {
        1 => {
            stats.nodes = 1;
            stats.found = 1;
            vec![vec![0u8; k]]
        }
        2 => {
            // every zero-sum bottom row completes the matrix
            stats.nodes = zero_rows.len() as u64;
            stats.found = zero_rows.len() as u64;
            zero_rows
                .iter()
                .map(|r| std::iter::repeat_n(0u8, k).chain(r.iter().copied()).collect())
                .collect()
        }
        _ => {
            let plan = Plan::new(cfg);
            // m_{2,1} = 1; with sorting on, r_2 is non-decreasing
            let mut one_run = vec![false; k];
            one_run[0] = true;
            let seconds: Vec<Vec<u8>> = if cfg.prune_sorted_rows {
                sorted_within_runs(p, &one_run)
            } else {
                all_rows(p, k)
            }
            .into_iter()
            .filter(|r| r[0] == 0)
            .collect();
            let branches: Vec<(&Vec<u8>, &Vec<u8>)> = zero_rows
                .iter()
                .flat_map(|last| seconds.iter().map(move |second| (last, second)))
                .collect();
            stats.branches = branches.len();
            let done = match &hooks.checkpoint {
                Some(path) => load_checkpoint(path, cfg)?,
                None => HashMap::new(),
            };
            stats.resumed_branches = done.len();
            let sink = hooks
                .checkpoint
                .as_ref()
                .map(|path| OpenOptions::new().append(true).open(path).map(Mutex::new))
                .transpose()?;
            let work = |(idx, (last, second)): (usize, &(&Vec<u8>, &Vec<u8>))| -> Result<(Vec<Vec<u8>>, SearchStats)> {
                if let Some(entry) = done.get(&idx) {
                    let mut s = SearchStats {
                        nodes: entry.nodes,
                        ..Default::default()
                    };
                    let found = entry
                        .matrices
                        .iter()
                        .map(|t| t.parse::<PhaseMatrix>().map(PhaseMatrix::into_exps))
                        .collect::<Result<Vec<_>>>()?;
                    s.found = found.len() as u64;
                    return Ok((found, s));
                }
                let mut w = Worker {
                    plan: &plan,
                    ring: CyclotomicRing::get(p),
                    m: vec![0u8; n * k],
                    hist: vec![0; p as usize],
                    target: vec![0; p as usize],
                    runs_cache: HashMap::new(),
                    all: Rc::new(plan.all.clone()),
                    stats: SearchStats::default(),
                    found: Vec::new(),
                    branch: idx,
                    next_report: PROGRESS_INTERVAL,
                    progress: hooks.progress,
                };
                w.set_row(n - 1, last);
                w.set_row(1, second);
                w.descend(0);
                // the branch root itself
                w.stats.nodes += 1;
                if let Some(sink) = &sink {
                    let entry = CheckpointEntry {
                        branch: idx,
                        nodes: w.stats.nodes,
                        matrices: w
                            .found
                            .iter()
                            .map(|e| PhaseMatrix::from_raw(p, n, k, e.clone()).to_string())
                            .collect(),
                    };
                    let line = serde_json::to_string(&entry).expect("entry serializes");
                    let mut f = sink.lock().expect("checkpoint lock poisoned");
                    writeln!(f, "{line}")?;
                    f.flush()?;
                }
                Ok((w.found, w.stats))
            };
            let results: Vec<Result<(Vec<Vec<u8>>, SearchStats)>> = if cfg.jobs > 0 {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(cfg.jobs)
                    .build()
                    .map_err(|e| CcmError::Io(e.to_string()))?;
                pool.install(|| branches.par_iter().enumerate().map(work).collect())
            } else {
                branches.par_iter().enumerate().map(work).collect()
            };
            let mut raw = Vec::new();
            for r in results {
                let (found, s) = r?;
                merge_stats(&mut stats, &s);
                raw.extend(found);
            }
            stats.nodes += zero_rows.len() as u64;
            raw
        }
    };

    let mut matrices: Vec<PhaseMatrix> = raw.into_iter().map(|e| PhaseMatrix::from_raw(p, n, k, e)).collect();
    matrices.sort_unstable();
    matrices.dedup();
    if !cfg.emit_raw {
        let mut classes = matrices
            .par_iter()
            .map(canonical_form)
            .collect::<Result<Vec<_>>>()?;
        classes.sort_unstable();
        classes.dedup();
        matrices = classes;
    }
    Ok(SearchOutcome { matrices, stats })
}

/// All matrices found by the pruned search, sorted.
pub fn search_ccm(cfg: &SearchConfig) -> Result<Vec<PhaseMatrix>> {
    Ok(run_search(cfg, &SearchHooks::default())?.matrices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::is_ccm;

    #[test]
    fn two_rows_emit_every_zero_sum_row() {
        let out = search_ccm(&SearchConfig::new(4, 2, 4)).unwrap();
        assert_eq!(out.len(), 36);
        assert!(out.iter().all(is_ccm));
    }

    #[test]
    fn emitted_matrices_are_normalized_ccms() {
        for n in 3..=4 {
            let out = search_ccm(&SearchConfig::new(4, n, 4)).unwrap();
            assert!(!out.is_empty());
            assert!(out.iter().all(|m| is_ccm(m) && m.is_normalized()));
        }
    }

    #[test]
    fn guard_blocks_oversized_searches() {
        let cfg = SearchConfig::new(4, 9, 4);
        assert!(matches!(search_ccm(&cfg), Err(CcmError::GuardExceeded(_))));
    }
}
