//! Exhaustive search for perfect, quasi-perfect and more generally
//! `t`-imperfect lattice codes of a given volume range.
//!
//! For `t_max <= 1` a code of volume `M` must have packing radius
//! `s_r = max{s ∈ D : μ(s) <= M}` and covering radius `s_r` or the next
//! element `s_R`, so each lattice needs one injectivity test at `s_r` and, if
//! it passes, one covering test at `s_R`. Sublattices are built from the last
//! HNF row upwards; the last `k` rows span `Λ ∩ {x_0 = … = x_{n-k-1} = 0}`,
//! which must already be injective on the ball, so failing tails are cut
//! before the rows above them are enumerated.

use std::collections::{BTreeMap, HashSet};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{analyze, radii, sweep, CodeAnalysis, Radii};
use crate::error::{Error, Result};
use crate::exact_ball::{ball_points, iroot, mu, NormOrderedBall, PowRadius};
use crate::lattice::{
    canonical_congruence_form, count_sublattices, divisors, for_each_sublattice, HnfBasis, MAX_DIM,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchQuery {
    pub n: usize,
    pub p: u32,
    pub volume_min: u64,
    pub volume_max: u64,
    pub t_max: u64,
    pub dedupe: bool,
}

impl SearchQuery {
    pub fn new(n: usize, p: u32, volume_min: u64, volume_max: u64, t_max: u64) -> Self {
        SearchQuery { n, p, volume_min, volume_max, t_max, dedupe: true }
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_DIM).contains(&self.n) {
            return Err(Error::DimensionUnsupported { dim: self.n, supported: "1..=4" });
        }
        if self.p == 0 {
            return Err(Error::invalid("exponent p must be at least 1"));
        }
        if self.volume_min == 0 || self.volume_min > self.volume_max {
            return Err(Error::invalid(format!(
                "volume range [{}, {}] must satisfy 1 <= min <= max",
                self.volume_min, self.volume_max
            )));
        }
        if self.volume_max > u32::MAX as u64 {
            return Err(Error::LimitExceeded { requested: self.volume_max, limit: u32::MAX as u64 });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchCounts {
    /// Sublattices of the searched volumes, pruned ones included.
    pub lattices: u64,
    /// Lattices whose translated balls of radius `s_r` are disjoint.
    pub injective: u64,
    /// Lattices with `t <= t_max`, before deduplication.
    pub covering: u64,
    /// Volumes skipped because a checkpoint recorded them with no hits.
    pub resumed_volumes: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchHit {
    pub basis: HnfBasis,
    pub analysis: CodeAnalysis,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub query: SearchQuery,
    pub counts: SearchCounts,
    pub hits: Vec<SearchHit>,
    pub bound_provenance: String,
}

impl SearchReport {
    pub fn bases(&self) -> Vec<HnfBasis> {
        self.hits.iter().map(|h| h.basis.clone()).collect()
    }
}

#[derive(Clone, Debug, Default)]
pub struct SearchOptions {
    /// Worker threads; `None` uses the global rayon pool.
    pub jobs: Option<usize>,
    /// Append one `M<TAB>hits<TAB>millis` line per finished volume.
    pub checkpoint: Option<PathBuf>,
    /// Where the volume cap came from, copied into the report.
    pub bound_provenance: String,
}

/// The image of a point under `Z^n → Z^n/Λ`: coordinates reduced into the
/// HNF box `[0, d_0) × … × [0, d_{n-1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HomomorphismLabel {
    pub residues: Vec<i64>,
}

impl HomomorphismLabel {
    pub fn of(h: &HnfBasis, x: &[i64]) -> Self {
        HomomorphismLabel { residues: h.reduce(x) }
    }
}

/// Whether lattice translates of `B(s)` are pairwise disjoint.
pub fn injectivity_test(h: &HnfBasis, p: u32, s: PowRadius) -> bool {
    if mu(h.dim(), p, s) > h.det() {
        return false;
    }
    let mut seen = HashSet::new();
    ball_points(h.dim(), p, s).iter().all(|x| seen.insert(h.coset_index(x)))
}

/// Whether lattice translates of `B(s)` cover Z^n.
pub fn covering_test(h: &HnfBasis, p: u32, s: PowRadius) -> bool {
    if mu(h.dim(), p, s) < h.det() {
        return false;
    }
    let seen: HashSet<u64> = ball_points(h.dim(), p, s).iter().map(|x| h.coset_index(x)).collect();
    seen.len() as u64 == h.det()
}

/// One canonical representative per congruence class, sorted for reports.
pub fn dedupe_congruence(bases: &[HnfBasis]) -> Result<Vec<HnfBasis>> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for b in bases {
        let c = canonical_congruence_form(b.basis())?;
        if seen.insert(c.clone()) {
            out.push(c);
        }
    }
    out.sort_by(|a, b| a.report_cmp(b));
    Ok(out)
}

pub fn run_search(q: &SearchQuery) -> Result<SearchReport> {
    run_search_with(q, &SearchOptions::default())
}

pub fn run_search_with(q: &SearchQuery, opts: &SearchOptions) -> Result<SearchReport> {
    q.validate()?;
    match opts.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| Error::invalid(format!("thread pool: {e}")))?
            .install(|| search(q, opts)),
        None => search(q, opts),
    }
}

struct VolumeResult {
    volume: u64,
    injective: u64,
    hits: Vec<(HnfBasis, CodeAnalysis)>,
}

fn search(q: &SearchQuery, opts: &SearchOptions) -> Result<SearchReport> {
    let done = match &opts.checkpoint {
        Some(path) => read_checkpoint(path)?,
        None => BTreeMap::new(),
    };
    let volumes: Vec<u64> = (q.volume_min..=q.volume_max)
        .filter(|m| done.get(m) != Some(&0))
        .collect();
    let resumed = (q.volume_max - q.volume_min + 1) - volumes.len() as u64;
    let log = match &opts.checkpoint {
        Some(path) => Some(Mutex::new(
            OpenOptions::new().create(true).append(true).open(path).map_err(io_err)?,
        )),
        None => None,
    };

    let ctx = Context::new(q, &volumes);
    let mut results: Vec<VolumeResult> = volumes
        .par_iter()
        .with_max_len(1)
        .map(|&m| -> Result<VolumeResult> {
            let start = Instant::now();
            let r = ctx.volume(m)?;
            if let Some(log) = &log {
                let mut f = log.lock().expect("checkpoint lock");
                writeln!(f, "{}\t{}\t{}", m, r.hits.len(), start.elapsed().as_millis())
                    .and_then(|_| f.flush())
                    .map_err(io_err)?;
            }
            Ok(r)
        })
        .collect::<Result<_>>()?;
    results.sort_by_key(|r| r.volume);

    let mut counts = SearchCounts {
        lattices: (q.volume_min..=q.volume_max).map(|m| count_sublattices(q.n, m)).sum(),
        resumed_volumes: resumed,
        ..SearchCounts::default()
    };
    let mut hits = Vec::new();
    for r in results {
        counts.injective += r.injective;
        counts.covering += r.hits.len() as u64;
        if q.dedupe {
            // congruent lattices share a determinant, so classes never span volumes
            let mut classes = BTreeMap::new();
            for (h, _) in r.hits {
                let c = canonical_congruence_form(h.basis())?;
                classes.entry(c.rows().to_vec()).or_insert(c);
            }
            for c in classes.into_values() {
                let analysis = analyze(c.basis(), q.p)?;
                hits.push(SearchHit { basis: c, analysis });
            }
        } else {
            hits.extend(r.hits.into_iter().map(|(basis, analysis)| SearchHit { basis, analysis }));
        }
    }
    hits.sort_by(|a, b| a.basis.report_cmp(&b.basis));
    Ok(SearchReport {
        query: q.clone(),
        counts,
        hits,
        bound_provenance: opts.bound_provenance.clone(),
    })
}

fn io_err(e: std::io::Error) -> Error {
    Error::invalid(format!("checkpoint: {e}"))
}

fn read_checkpoint(path: &PathBuf) -> Result<BTreeMap<u64, u64>> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(BTreeMap::new()),
        Err(e) => return Err(io_err(e)),
    };
    let mut done = BTreeMap::new();
    for line in BufReader::new(file).lines() {
        let line = line.map_err(io_err)?;
        let mut fields = line.split('\t');
        let (Some(m), Some(hits)) = (fields.next(), fields.next()) else {
            continue;
        };
        if let (Ok(m), Ok(hits)) = (m.trim().parse(), hits.trim().parse()) {
            done.insert(m, hits);
        }
    }
    Ok(done)
}

/// Read-only data shared by all volumes.
struct Context {
    n: usize,
    p: u32,
    t_max: u64,
    ball: NormOrderedBall,
    diffs: BTreeMap<u64, DiffSet>,
}

impl Context {
    fn new(q: &SearchQuery, volumes: &[u64]) -> Self {
        let top = volumes.iter().copied().max().unwrap_or(1);
        let mut s = 1u64;
        while mu(q.n, q.p, PowRadius(s)) <= top {
            s *= 2;
        }
        let ball = NormOrderedBall::new(q.n, q.p, PowRadius(s));
        let mut ctx = Context { n: q.n, p: q.p, t_max: q.t_max, ball, diffs: BTreeMap::new() };
        let radii: std::collections::BTreeSet<u64> = volumes.iter().map(|&m| ctx.radii_for(m).0).collect();
        let built: Vec<(u64, DiffSet)> = radii
            .into_par_iter()
            .map(|s| (s, DiffSet::new(&ctx.ball, s)))
            .collect();
        ctx.diffs.extend(built);
        ctx
    }

    /// `(s_r, s_R)` for volume `m`.
    fn radii_for(&self, m: u64) -> (u64, u64) {
        let norms = self.ball.norms();
        let big = norms[m as usize];
        let small = norms[norms.partition_point(|&x| x < big) - 1];
        (small, big)
    }

    fn volume(&self, m: u64) -> Result<VolumeResult> {
        if self.t_max >= 2 {
            return self.volume_full(m);
        }
        let (s_r, s_big) = self.radii_for(m);
        let mu_r = self.ball.count_within(PowRadius(s_r)) as u64;
        let mu_big = self.ball.count_within(PowRadius(s_big));
        let diff = &self.diffs[&s_r];
        let mut stamps = Stamps::new(m as usize);
        let mut injective = 0u64;
        let mut hits = Vec::new();
        let mut err = None;
        let mut walker = Walker::new(self.n, diff);
        walker.run(m, &mut |rows| {
            injective += 1;
            let perfect = mu_r == m;
            if !perfect && (self.t_max == 0 || !stamps.covers(rows, self.n, &self.ball, mu_big)) {
                return;
            }
            let h = HnfBasis::from_rows(rows.iter().take(self.n).map(|r| r[..self.n].to_vec()).collect())
                .expect("walker yields HNF rows");
            match analyze(h.basis(), self.p) {
                Ok(a) => {
                    debug_assert_eq!(a.packing_pow.get(), s_r);
                    debug_assert!(a.t <= self.t_max);
                    hits.push((h, a));
                }
                Err(e) => err = Some(e),
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        Ok(VolumeResult { volume: m, injective, hits })
    }

    /// Full analysis of every sublattice; used when `t_max >= 2`.
    fn volume_full(&self, m: u64) -> Result<VolumeResult> {
        let (s_r, _) = self.radii_for(m);
        let mut injective = 0;
        let mut hits = Vec::new();
        let mut err = None;
        for_each_sublattice(self.n, m, |h| {
            let r = sweep(h, &self.ball).unwrap_or_else(|| radii(h, self.p));
            if r.packing.get() == s_r {
                injective += 1;
            }
            if self.gap(r).is_some_and(|t| t > self.t_max) {
                return;
            }
            match analyze(h.basis(), self.p) {
                Ok(a) if a.t <= self.t_max => hits.push((h.clone(), a)),
                Ok(_) => {}
                Err(e) => err = Some(e),
            }
        })?;
        if let Some(e) = err {
            return Err(e);
        }
        Ok(VolumeResult { volume: m, injective, hits })
    }

    /// Imperfection degree from the ball's own shells, when it reaches `R`.
    fn gap(&self, r: Radii) -> Option<u64> {
        let norms = self.ball.norms();
        if norms.last().is_none_or(|&top| top < r.covering.get()) {
            return None;
        }
        let lo = norms.partition_point(|&x| x < r.packing.get());
        let hi = norms.partition_point(|&x| x < r.covering.get());
        let mut shells = 0;
        let mut prev = None;
        for &x in &norms[lo..hi] {
            if prev != Some(x) {
                shells += 1;
                prev = Some(x);
            }
        }
        Some(shells)
    }
}

/// `B(s) - B(s)` as a bitmap over the box `[-w, w]^n`, `w = 2⌊s^{1/p}⌋`,
/// plus its points grouped by leading coordinate.
struct DiffSet {
    n: usize,
    w: i64,
    side: usize,
    bits: Vec<bool>,
    /// `slices[k][x]`: the points `v` with `v_0 = … = v_{k-1} = 0` and `v_k = x`.
    slices: Vec<Vec<Vec<[i64; MAX_DIM]>>>,
}

impl DiffSet {
    fn new(ball: &NormOrderedBall, s: u64) -> Self {
        let n = ball.dim();
        let w = 2 * iroot(s, ball.exponent()) as i64;
        let side = (2 * w + 1) as usize;
        let mut bits = vec![false; side.pow(n as u32)];
        let k = ball.count_within(PowRadius(s));
        let index = |x: &[i64], y: &[i64]| {
            x.iter().zip(y).fold(0usize, |acc, (a, b)| acc * side + (a - b + w) as usize)
        };
        for i in 0..k {
            for j in 0..k {
                bits[index(ball.point(i), ball.point(j))] = true;
            }
        }
        let mut d = DiffSet { n, w, side, bits, slices: Vec::new() };
        d.slices = (0..n)
            .map(|k| {
                let mut by_x = vec![Vec::new(); w as usize + 1];
                let mut v = [0i64; MAX_DIM];
                d.collect_slice(k, k + 1, &mut v, &mut by_x);
                by_x
            })
            .collect();
        d
    }

    fn collect_slice(&self, k: usize, j: usize, v: &mut [i64; MAX_DIM], out: &mut [Vec<[i64; MAX_DIM]>]) {
        if j == self.n {
            for x in 0..=self.w {
                v[k] = x;
                if self.contains(v) {
                    out[x as usize].push(*v);
                }
            }
            return;
        }
        for y in -self.w..=self.w {
            v[j] = y;
            self.collect_slice(k, j + 1, v, out);
        }
        v[j] = 0;
    }

    fn contains(&self, v: &[i64; MAX_DIM]) -> bool {
        let mut idx = 0usize;
        for &c in &v[..self.n] {
            if c.abs() > self.w {
                return false;
            }
            idx = idx * self.side + (c + self.w) as usize;
        }
        self.bits[idx]
    }
}

type Rows = [[i64; MAX_DIM]; MAX_DIM];

/// Bottom-up HNF enumeration that drops every tail meeting the difference set.
///
/// At level `k` the candidates for row `k` are the `N = d_{k+1}⋯d_{n-1}` box
/// points `u`, one per coset of the tail lattice `T` below. A vector
/// `c·row_k + t` lies in the difference set iff `c·u` falls in the coset of a
/// slice point at height `c·d_k`, so each tail gets one bitmask per coset
/// recording the multipliers `c` that would hit it.
struct Walker<'a> {
    n: usize,
    diff: &'a DiffSet,
    rows: Rows,
    masks: Vec<Vec<u64>>,
}

impl<'a> Walker<'a> {
    fn new(n: usize, diff: &'a DiffSet) -> Self {
        Walker { n, diff, rows: [[0; MAX_DIM]; MAX_DIM], masks: vec![Vec::new(); n] }
    }

    fn run(&mut self, m: u64, visit: &mut impl FnMut(&Rows)) {
        self.level(self.n - 1, m, visit);
    }

    fn level(&mut self, k: usize, rest: u64, visit: &mut impl FnMut(&Rows)) {
        let choices = if k == 0 { vec![rest] } else { divisors(rest) };
        for d in choices {
            self.rows[k] = [0; MAX_DIM];
            self.rows[k][k] = d as i64;
            let c_max = self.diff.w / d as i64;
            let masked = (1..=64).contains(&c_max);
            let mut mask = std::mem::take(&mut self.masks[k]);
            if masked {
                self.fill_masks(k, c_max, &mut mask);
            }
            let mut u = 0usize;
            loop {
                let clear = if masked {
                    self.offsets_clear(k, c_max, &mask, u)
                } else {
                    c_max == 0 || !self.tail_meets_diff(k)
                };
                if clear {
                    if k == 0 {
                        visit(&self.rows);
                    } else {
                        self.level(k - 1, rest / d, visit);
                    }
                }
                u += 1;
                if !self.next_offsets(k) {
                    break;
                }
            }
            self.masks[k] = mask;
        }
    }

    fn fill_masks(&self, k: usize, c_max: i64, mask: &mut Vec<u64>) {
        let cosets: usize = (k + 1..self.n).map(|j| self.rows[j][j] as usize).product();
        mask.clear();
        mask.resize(cosets, 0);
        let d = self.rows[k][k];
        for c in 1..=c_max {
            for v in &self.diff.slices[k][(c * d) as usize] {
                mask[self.tail_label(k, *v)] |= 1 << (c - 1);
            }
        }
    }

    /// Whether row `k`, whose offsets are box point number `u`, keeps the
    /// rows `k..` clear of the difference set.
    fn offsets_clear(&self, k: usize, c_max: i64, mask: &[u64], u: usize) -> bool {
        if mask[u] & 1 != 0 {
            return false;
        }
        let mut v = [0i64; MAX_DIM];
        for c in 2..=c_max {
            for j in k + 1..self.n {
                v[j] = c * self.rows[k][j];
            }
            if mask[self.tail_label(k, v)] >> (c - 1) & 1 != 0 {
                return false;
            }
        }
        true
    }

    /// Index of the coset of `T` containing coordinates `k+1..` of `v`.
    fn tail_label(&self, k: usize, mut v: [i64; MAX_DIM]) -> usize {
        let mut idx = 0usize;
        for j in k + 1..self.n {
            let d = self.rows[j][j];
            let q = v[j].div_euclid(d);
            if q != 0 {
                for l in j..self.n {
                    v[l] -= q * self.rows[j][l];
                }
            }
            idx = idx * d as usize + v[j] as usize;
        }
        idx
    }

    // odometer over row k's entries right of the diagonal, last entry fastest
    fn next_offsets(&mut self, k: usize) -> bool {
        for j in (k + 1..self.n).rev() {
            if self.rows[k][j] + 1 < self.rows[j][j] {
                self.rows[k][j] += 1;
                return true;
            }
            self.rows[k][j] = 0;
        }
        false
    }

    /// Direct enumeration of lattice vectors `Σ_{i>=k} c_i row_i` with
    /// `c_k > 0` inside the box; used when the masks would not fit.
    fn tail_meets_diff(&self, k: usize) -> bool {
        let w = self.diff.w;
        let d = self.rows[k][k];
        let mut c = 1;
        while c * d <= w {
            let mut v = [0i64; MAX_DIM];
            for j in k..self.n {
                v[j] = c * self.rows[k][j];
            }
            if self.complete(k + 1, &mut v) {
                return true;
            }
            c += 1;
        }
        false
    }

    fn complete(&self, j: usize, v: &mut [i64; MAX_DIM]) -> bool {
        if j == self.n {
            return self.diff.contains(v);
        }
        let w = self.diff.w;
        let d = self.rows[j][j];
        let base = *v;
        let lo = (-w - base[j]).div_euclid(d) + ((-w - base[j]).rem_euclid(d) != 0) as i64;
        let hi = (w - base[j]).div_euclid(d);
        for c in lo..=hi {
            for l in j..self.n {
                v[l] = base[l] + c * self.rows[j][l];
            }
            if self.complete(j + 1, v) {
                return true;
            }
        }
        *v = base;
        false
    }
}

/// Generation-stamped coset marks, reused across the lattices of one volume.
struct Stamps {
    marks: Vec<u32>,
    generation: u32,
}

impl Stamps {
    fn new(m: usize) -> Self {
        Stamps { marks: vec![0; m], generation: 0 }
    }

    /// Whether the first `count` ball points reach every coset.
    fn covers(&mut self, rows: &Rows, n: usize, ball: &NormOrderedBall, count: usize) -> bool {
        self.generation += 1;
        let mut remaining = self.marks.len();
        for i in 0..count {
            let label = coset_index(rows, n, ball.point(i));
            if self.marks[label] != self.generation {
                self.marks[label] = self.generation;
                remaining -= 1;
                if remaining == 0 {
                    return true;
                }
            }
        }
        false
    }
}

fn coset_index(rows: &Rows, n: usize, x: &[i64]) -> usize {
    let mut y = [0i64; MAX_DIM];
    y[..n].copy_from_slice(x);
    let mut idx = 0usize;
    for j in 0..n {
        let d = rows[j][j];
        let q = y[j].div_euclid(d);
        if q != 0 {
            for k in j..n {
                y[k] -= q * rows[j][k];
            }
        }
        idx = idx * d as usize + y[j] as usize;
    }
    idx
}
