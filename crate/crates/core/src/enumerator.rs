//! Exhaustive census of `(L,k)`-free `r`-graphs with at most 64 edge slots.
//!
//! Edges are decided in colex rank order, which is vertex-incremental: every
//! `r`-set inside `{0,..,v-1}` precedes every `r`-set with maximum `v`. A
//! `k`-set is checked as soon as its last `r`-subset is decided.

use std::collections::HashSet;
use std::ops::ControlFlow;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::Budget;
use crate::freeness::{is_lk_free, ForbiddenList};
use crate::hypergraph::{Hypergraph, CANONICAL_MAX_N};
use crate::subset::{binomial, colex_rank, next_colex, ColexSubsets};
use crate::{Error, Result};

/// Edge slots the backtracking engine supports (one `u64` mask).
pub const MAX_SLOTS: usize = 64;
/// Largest `C(n,r)` for the plain `2^C(n,r)` scan.
pub const EXHAUSTIVE_MAX_SLOTS: usize = 30;
/// Largest number of free positions an extension set may have.
pub const EXTENSION_MAX_POSITIONS: usize = 30;
/// Vertex guard for isomorphism-class counting.
pub const ISO_MAX_N: usize = 8;

/// Prefix depth at which parallel work is split.
const SPLIT_MIN_DEPTH: usize = 10;
const FLUSH_EVERY: u64 = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    #[default]
    Backtracking,
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Worker threads; 0 and 1 both mean single-threaded.
    pub threads: usize,
    pub node_budget: Option<u64>,
    pub time_budget: Option<Duration>,
    pub method: Method,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            threads: 1,
            node_budget: None,
            time_budget: None,
            method: Method::Backtracking,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountReport {
    pub n: usize,
    pub r: usize,
    pub k: usize,
    #[serde(rename = "L")]
    pub list: ForbiddenList,
    #[serde(serialize_with = "decimal")]
    pub labeled_count: BigUint,
    pub iso_count: Option<u64>,
    pub method: Method,
    pub elapsed_s: f64,
    pub nodes: u64,
}

fn decimal<S: Serializer>(value: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(value)
}

impl CountReport {
    pub const CSV_HEADER: &'static str = "n,r,k,L,labeled_count,iso_count,method,elapsed_s,nodes";

    pub fn to_csv_row(&self) -> String {
        let members: Vec<String> = self.list.members().iter().map(|m| m.to_string()).collect();
        format!(
            "{},{},{},\"{{{}}}\",{},{},{},{:.6},{}",
            self.n,
            self.r,
            self.k,
            members.join(","),
            self.labeled_count,
            self.iso_count.map(|c| c.to_string()).unwrap_or_default(),
            match self.method {
                Method::Backtracking => "backtracking",
                Method::Exhaustive => "exhaustive",
            },
            self.elapsed_s,
            self.nodes
        )
    }
}

/// Budget bookkeeping shared by all workers.
struct Guard {
    nodes: AtomicU64,
    stop: AtomicBool,
    tripped: Mutex<Option<Budget>>,
    node_budget: Option<u64>,
    deadline: Option<Instant>,
}

impl Guard {
    fn new(opts: &SearchOptions) -> Self {
        Guard {
            nodes: AtomicU64::new(0),
            stop: AtomicBool::new(false),
            tripped: Mutex::new(None),
            node_budget: opts.node_budget,
            deadline: opts.time_budget.map(|t| Instant::now() + t),
        }
    }

    fn trip(&self, budget: Budget) {
        self.tripped.lock().unwrap().get_or_insert(budget);
        self.stop.store(true, Ordering::Relaxed);
    }

    /// Adds `n` visited nodes; false once the search must stop.
    fn flush(&self, n: u64) -> bool {
        let total = self.nodes.fetch_add(n, Ordering::Relaxed) + n;
        if self.node_budget.is_some_and(|b| total > b) {
            self.trip(Budget::Nodes);
        }
        if self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.trip(Budget::Time);
        }
        !self.stop.load(Ordering::Relaxed)
    }

    fn finish(&self, partial: u128) -> Result<u64> {
        let nodes = self.nodes.load(Ordering::Relaxed);
        match *self.tripped.lock().unwrap() {
            Some(budget) => Err(Error::BudgetExceeded {
                budget,
                nodes,
                partial,
            }),
            None => Ok(nodes),
        }
    }
}

/// Precomputed `k`-set masks for one `(n, r, k, L)`.
struct Engine {
    n: usize,
    r: usize,
    slots: usize,
    list: u128,
    /// `closing[d]`: masks of the `k`-sets whose last `r`-subset has rank `d`.
    closing: Vec<Vec<u64>>,
}

impl Engine {
    /// Accepts `n < k` (then nothing is forbidden) so that small cases of
    /// the extension statistics need no special path.
    fn new(n: usize, r: usize, list: &ForbiddenList) -> Result<Self> {
        if list.r() != r {
            return Err(Error::params(format!(
                "list is for r={}, not r={r}",
                list.r()
            )));
        }
        let slots = binomial(n, r);
        if slots > MAX_SLOTS as u64 {
            return Err(Error::params(format!(
                "C({n},{r}) = {slots} edge slots exceeds the engine limit of {MAX_SLOTS}"
            )));
        }
        let mask = list
            .mask()
            .ok_or_else(|| Error::params("list range too large for the census engine"))?;
        let k = list.k();
        let slots = slots as usize;
        let mut closing = vec![Vec::new(); slots];
        if n >= k {
            let mut sub = vec![0usize; r];
            for kset in ColexSubsets::new(n, k) {
                let mut km = 0u64;
                let mut idx: Vec<usize> = (0..r).collect();
                loop {
                    for (s, &i) in sub.iter_mut().zip(&idx) {
                        *s = kset[i];
                    }
                    km |= 1 << colex_rank(&sub);
                    if !next_colex(&mut idx, k) {
                        break;
                    }
                }
                closing[colex_rank(&kset[k - r..]) as usize].push(km);
            }
        }
        Ok(Engine {
            n,
            r,
            slots,
            list: mask,
            closing,
        })
    }

    #[inline]
    fn ok_at(&self, depth: usize, mask: u64) -> bool {
        self.closing[depth]
            .iter()
            .all(|&km| self.list >> (mask & km).count_ones() & 1 == 0)
    }

    fn is_free(&self, mask: u64) -> bool {
        (0..self.slots).all(|d| self.ok_at(d, mask))
    }

    fn split_depth(&self) -> usize {
        (self.r..=self.n)
            .map(|v| binomial(v, self.r) as usize)
            .find(|&d| d >= SPLIT_MIN_DEPTH)
            .unwrap_or(self.slots)
            .min(self.slots)
    }
}

struct Walker<'a> {
    engine: &'a Engine,
    guard: &'a Guard,
    pending: u64,
    count: u128,
}

impl<'a> Walker<'a> {
    fn new(engine: &'a Engine, guard: &'a Guard) -> Self {
        Walker {
            engine,
            guard,
            pending: 0,
            count: 0,
        }
    }

    /// Extends `mask` (decided below `depth`) to depth `limit`, calling
    /// `visit` on each surviving prefix. Absent is tried before present.
    fn walk<F>(&mut self, depth: usize, limit: usize, mask: u64, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(u64) -> ControlFlow<()>,
    {
        if depth == limit {
            if limit == self.engine.slots {
                self.count += 1;
            }
            return visit(mask);
        }
        self.pending += 1;
        if self.pending == FLUSH_EVERY {
            self.pending = 0;
            if !self.guard.flush(FLUSH_EVERY) {
                return ControlFlow::Break(());
            }
        }
        for bit in 0..2u64 {
            let m = mask | bit << depth;
            if self.engine.ok_at(depth, m) {
                self.walk(depth + 1, limit, m, visit)?;
            }
        }
        ControlFlow::Continue(())
    }

    fn close(&mut self) {
        self.guard.flush(std::mem::take(&mut self.pending));
    }
}

fn pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::params(format!("cannot start worker pool: {e}")))
}

/// Folds every free mask into per-subtree accumulators and combines them.
/// The result does not depend on the thread count.
fn par_fold<T, F, M>(
    engine: &Engine,
    guard: &Guard,
    threads: usize,
    init: impl Fn() -> T + Sync,
    fold: F,
    merge: M,
) -> Result<(T, u128)>
where
    T: Send,
    F: Fn(&mut T, u64) + Sync,
    M: Fn(T, T) -> T + Sync + Send,
{
    if threads <= 1 {
        let mut acc = init();
        let mut w = Walker::new(engine, guard);
        let _ = w.walk(0, engine.slots, 0, &mut |m| {
            fold(&mut acc, m);
            ControlFlow::Continue(())
        });
        w.close();
        return Ok((acc, w.count));
    }
    let mut prefixes = Vec::new();
    let split = engine.split_depth();
    let mut w = Walker::new(engine, guard);
    let _ = w.walk(0, split, 0, &mut |m| {
        prefixes.push(m);
        ControlFlow::Continue(())
    });
    w.close();
    let mut leaf_count = w.count;
    let mut acc = init();
    if split == engine.slots {
        prefixes.iter().for_each(|&m| fold(&mut acc, m));
        return Ok((acc, leaf_count));
    }
    let (sub, count) = pool(threads)?.install(|| {
        prefixes
            .par_iter()
            .map(|&p| {
                let mut acc = init();
                let mut w = Walker::new(engine, guard);
                let _ = w.walk(split, engine.slots, p, &mut |m| {
                    fold(&mut acc, m);
                    ControlFlow::Continue(())
                });
                w.close();
                (acc, w.count)
            })
            .reduce(|| (init(), 0), |(a, x), (b, y)| (merge(a, b), x + y))
    });
    leaf_count += count;
    acc = merge(acc, sub);
    Ok((acc, leaf_count))
}

fn check_params(n: usize, r: usize, k: usize, list: &ForbiddenList) -> Result<()> {
    if !(n >= k && k > r && r >= 2) {
        return Err(Error::params(format!(
            "need n >= k > r >= 2 (got n={n}, r={r}, k={k})"
        )));
    }
    if list.k() != k || list.r() != r {
        return Err(Error::params(format!(
            "list is for (k={}, r={}), not (k={k}, r={r})",
            list.k(),
            list.r()
        )));
    }
    Ok(())
}

/// `f(n,r,k,L)`, the number of labeled `(L,k)`-free `r`-graphs on `n`
/// vertices.
pub fn count_labeled(
    n: usize,
    r: usize,
    k: usize,
    list: &ForbiddenList,
    opts: &SearchOptions,
) -> Result<CountReport> {
    check_params(n, r, k, list)?;
    let start = Instant::now();
    let engine = Engine::new(n, r, list)?;
    let guard = Guard::new(opts);
    let count = match opts.method {
        Method::Backtracking => {
            let ((), count) = par_fold(&engine, &guard, opts.threads, || (), |_, _| {}, |_, _| ())?;
            count
        }
        Method::Exhaustive => exhaustive_count(&engine, &guard, opts.threads)?,
    };
    let nodes = guard.finish(count)?;
    Ok(CountReport {
        n,
        r,
        k,
        list: list.clone(),
        labeled_count: BigUint::from(count),
        iso_count: None,
        method: opts.method,
        elapsed_s: start.elapsed().as_secs_f64(),
        nodes,
    })
}

fn exhaustive_count(engine: &Engine, guard: &Guard, threads: usize) -> Result<u128> {
    if engine.slots > EXHAUSTIVE_MAX_SLOTS {
        return Err(Error::params(format!(
            "exhaustive scan limited to {EXHAUSTIVE_MAX_SLOTS} edge slots"
        )));
    }
    let total = 1u64 << engine.slots;
    let chunk = FLUSH_EVERY.min(total);
    let scan = |c: u64| -> u128 {
        if !guard.flush(chunk) {
            return 0;
        }
        (c * chunk..(c + 1) * chunk)
            .filter(|&m| engine.is_free(m))
            .count() as u128
    };
    let chunks = total / chunk;
    if threads <= 1 {
        Ok((0..chunks).map(scan).sum())
    } else {
        Ok(pool(threads)?.install(|| (0..chunks).into_par_iter().map(scan).sum()))
    }
}

/// Number of isomorphism classes of `(L,k)`-free `r`-graphs, together with
/// the labeled count.
pub fn count_iso_classes(
    n: usize,
    r: usize,
    k: usize,
    list: &ForbiddenList,
    opts: &SearchOptions,
) -> Result<CountReport> {
    check_params(n, r, k, list)?;
    if n > ISO_MAX_N.min(CANONICAL_MAX_N) {
        return Err(Error::params(format!(
            "isomorphism counting limited to n <= {ISO_MAX_N}"
        )));
    }
    let start = Instant::now();
    let engine = Engine::new(n, r, list)?;
    let guard = Guard::new(opts);
    let (forms, count) = par_fold(
        &engine,
        &guard,
        opts.threads,
        HashSet::new,
        |set: &mut HashSet<u64>, m| {
            let g = Hypergraph::from_bits(n, r, m).expect("mask within slots");
            let canon = g.canonical_form().expect("n within canonical guard");
            set.insert(canon.to_bits().expect("at most 64 slots"));
        },
        |mut a, b| {
            a.extend(b);
            a
        },
    )?;
    let nodes = guard.finish(count)?;
    Ok(CountReport {
        n,
        r,
        k,
        list: list.clone(),
        labeled_count: BigUint::from(count),
        iso_count: Some(forms.len() as u64),
        method: Method::Backtracking,
        elapsed_s: start.elapsed().as_secs_f64(),
        nodes,
    })
}

/// Calls `visitor` on every `(L,k)`-free `r`-graph, single-threaded, in
/// lexicographic order of the edge indicator sequence over colex-ranked
/// slots. Returns the number of visits.
pub fn enumerate_free<F>(
    n: usize,
    r: usize,
    k: usize,
    list: &ForbiddenList,
    opts: &SearchOptions,
    mut visitor: F,
) -> Result<u64>
where
    F: FnMut(&Hypergraph) -> ControlFlow<()>,
{
    check_params(n, r, k, list)?;
    let engine = Engine::new(n, r, list)?;
    let guard = Guard::new(opts);
    let mut aborted = false;
    let mut w = Walker::new(&engine, &guard);
    let _ = w.walk(0, engine.slots, 0, &mut |m| {
        let g = Hypergraph::from_bits(n, r, m).expect("mask within slots");
        let flow = visitor(&g);
        aborted = flow.is_break();
        flow
    });
    w.close();
    if aborted {
        return Err(Error::Aborted);
    }
    guard.finish(w.count)?;
    Ok(w.count as u64)
}

/// Pair checks for `k`-sets containing a base set `A`. Each check has a
/// fixed part (the `r`-subsets of the `k`-set that miss some vertex of `A`)
/// and a mask over the free positions (those containing `A`).
struct ExtensionKernel {
    positions: Vec<u64>,
    fixed: Vec<Vec<u64>>,
    pos_masks: Vec<u32>,
    /// Checks are grouped by their highest position; `starts[j]..starts[j+1]`.
    starts: Vec<usize>,
    list: u128,
}

impl ExtensionKernel {
    fn new(base: &[usize], n: usize, r: usize, list: &ForbiddenList) -> Result<Self> {
        let k = list.k();
        if base.len() >= r {
            return Err(Error::params(format!(
                "base set must have fewer than r={r} vertices"
            )));
        }
        if base.iter().any(|&v| v >= n) || base.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::params(format!(
                "base {base:?} is not a sorted subset of [n]"
            )));
        }
        let mask = list
            .mask()
            .ok_or_else(|| Error::params("list range too large for extension counting"))?;
        let others: Vec<usize> = (0..n).filter(|v| !base.contains(v)).collect();
        let with_base = |extra: &[usize]| {
            let mut s: Vec<usize> = extra
                .iter()
                .map(|&i| others[i])
                .chain(base.iter().copied())
                .collect();
            s.sort_unstable();
            s
        };
        let free = r - base.len();
        let p = binomial(others.len(), free);
        if p > EXTENSION_MAX_POSITIONS as u64 {
            return Err(Error::params(format!(
                "{p} free positions exceeds the limit of {EXTENSION_MAX_POSITIONS}"
            )));
        }
        let positions: Vec<u64> = ColexSubsets::new(others.len(), free)
            .map(|s| colex_rank(&with_base(&s)))
            .collect();
        let mut checks: Vec<(usize, Vec<u64>, u32)> = Vec::new();
        if n >= k {
            for extra in ColexSubsets::new(others.len(), k - base.len()) {
                let kset = with_base(&extra);
                let mut fixed = Vec::new();
                let mut pm = 0u32;
                for sub in ColexSubsets::new(k, r) {
                    let e: Vec<usize> = sub.iter().map(|&i| kset[i]).collect();
                    let rank = colex_rank(&e);
                    match positions.iter().position(|&q| q == rank) {
                        Some(j) => pm |= 1 << j,
                        None => fixed.push(rank),
                    }
                }
                checks.push((31 - pm.leading_zeros() as usize, fixed, pm));
            }
        }
        checks.sort_by_key(|c| c.0);
        let mut starts = vec![0; positions.len() + 1];
        for (top, _, _) in &checks {
            starts[top + 1] += 1;
        }
        for j in 0..positions.len() {
            starts[j + 1] += starts[j];
        }
        let (fixed, pos_masks) = checks.into_iter().map(|(_, f, m)| (f, m)).unzip();
        Ok(ExtensionKernel {
            positions,
            fixed,
            pos_masks,
            starts,
            list: mask,
        })
    }

    fn bases(&self, h: &Hypergraph) -> Vec<u32> {
        self.fixed
            .iter()
            .map(|f| f.iter().filter(|&&q| h.contains_rank(q)).count() as u32)
            .collect()
    }

    fn fixed_masks(&self) -> Vec<u64> {
        self.fixed
            .iter()
            .map(|f| f.iter().fold(0u64, |acc, &q| acc | 1 << q))
            .collect()
    }

    fn position_mask(&self) -> u64 {
        self.positions.iter().fold(0u64, |acc, &q| acc | 1 << q)
    }

    /// Counts (or collects) assignments of the positions that keep every
    /// checked `k`-set off the list.
    fn run(&self, bases: &[u32], out: &mut Option<&mut Vec<u32>>) -> u64 {
        fn go(
            kernel: &ExtensionKernel,
            bases: &[u32],
            depth: usize,
            x: u32,
            out: &mut Option<&mut Vec<u32>>,
        ) -> u64 {
            if depth == kernel.positions.len() {
                if let Some(v) = out.as_deref_mut() {
                    v.push(x);
                }
                return 1;
            }
            let mut total = 0;
            for bit in 0..2u32 {
                let y = x | bit << depth;
                let ok = (kernel.starts[depth]..kernel.starts[depth + 1]).all(|c| {
                    kernel.list >> (bases[c] + (y & kernel.pos_masks[c]).count_ones()) & 1 == 0
                });
                if ok {
                    total += go(kernel, bases, depth + 1, y, out);
                }
            }
            total
        }
        go(self, bases, 0, 0, out)
    }
}

/// `D(A,H,n)`: the free hypergraphs that agree with `H` on every `r`-set
/// not containing `A`. Members are stored as difference masks over
/// `positions` (bit `j` set when the `r`-set with rank `positions[j]`
/// differs from `H`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionSet {
    pub base: Vec<usize>,
    pub anchor: Hypergraph,
    pub positions: Vec<u64>,
    pub members: Vec<u32>,
}

impl ExtensionSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn member(&self, i: usize) -> Hypergraph {
        let mut g = self.anchor.clone();
        let diff = self.members[i];
        for (j, &q) in self.positions.iter().enumerate() {
            if diff >> j & 1 == 1 {
                g.set_rank(q, !g.contains_rank(q));
            }
        }
        g
    }
}

pub fn extension_set(base: &[usize], h: &Hypergraph, list: &ForbiddenList) -> Result<ExtensionSet> {
    if h.n() >= list.k() && !is_lk_free(h, list)?.free {
        return Err(Error::Precondition("anchor is not (L,k)-free".into()));
    }
    let kernel = ExtensionKernel::new(base, h.n(), h.r(), list)?;
    let bases = kernel.bases(h);
    let mut assignments = Vec::new();
    kernel.run(&bases, &mut Some(&mut assignments));
    let own = kernel
        .positions
        .iter()
        .enumerate()
        .fold(0u32, |acc, (j, &q)| {
            acc | u32::from(h.contains_rank(q)) << j
        });
    Ok(ExtensionSet {
        base: base.to_vec(),
        anchor: h.clone(),
        positions: kernel.positions,
        members: assignments.into_iter().map(|x| x ^ own).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DMode {
    Exhaustive,
    /// Reservoir sample of `samples` anchors drawn from the census.
    Sample {
        seed: u64,
        samples: usize,
    },
}

/// `d(a,n)` with `A = {0,..,a-1}`. `exact` is false in sample mode, where
/// `value` is only a lower bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DStat {
    pub a: usize,
    pub n: usize,
    pub r: usize,
    pub k: usize,
    #[serde(rename = "L")]
    pub list: ForbiddenList,
    pub value: u64,
    pub exact: bool,
    /// Distinct anchors evaluated (anchors equal off the free positions
    /// share one extension set).
    pub anchors: u64,
}

pub fn max_d(
    a: usize,
    n: usize,
    list: &ForbiddenList,
    mode: DMode,
    opts: &SearchOptions,
) -> Result<DStat> {
    let (r, k) = (list.r(), list.k());
    if a >= r || r < 2 {
        return Err(Error::params(format!("need 0 <= a < r (got a={a}, r={r})")));
    }
    let stat = |value, anchors| DStat {
        a,
        n,
        r,
        k,
        list: list.clone(),
        value,
        exact: mode == DMode::Exhaustive,
        anchors,
    };
    if n < r {
        // no r-sets at all: the only hypergraph is edgeless
        return Ok(stat(1, 1));
    }
    if a > n {
        return Err(Error::params("a exceeds n"));
    }
    let engine = Engine::new(n, r, list)?;
    let base: Vec<usize> = (0..a).collect();
    let kernel = ExtensionKernel::new(&base, n, r, list)?;
    let fixed = kernel.fixed_masks();
    let outside = !kernel.position_mask();
    let guard = Guard::new(opts);
    let anchors: Vec<u64> = match mode {
        DMode::Exhaustive => {
            let (set, count) = par_fold(
                &engine,
                &guard,
                opts.threads,
                HashSet::new,
                |s: &mut HashSet<u64>, m| {
                    s.insert(m & outside);
                },
                |mut x, y| {
                    x.extend(y);
                    x
                },
            )?;
            guard.finish(count)?;
            let mut v: Vec<u64> = set.into_iter().collect();
            v.sort_unstable();
            v
        }
        DMode::Sample { seed, samples } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut reservoir = Vec::with_capacity(samples);
            let mut w = Walker::new(&engine, &guard);
            let mut seen = 0u64;
            let _ = w.walk(0, engine.slots, 0, &mut |m| {
                seen += 1;
                if reservoir.len() < samples {
                    reservoir.push(m);
                } else {
                    let j = rng.gen_range(0..seen);
                    if (j as usize) < samples {
                        reservoir[j as usize] = m;
                    }
                }
                ControlFlow::Continue(())
            });
            w.close();
            guard.finish(w.count)?;
            reservoir
        }
    };
    let best = anchors
        .iter()
        .map(|&h| {
            let bases: Vec<u32> = fixed.iter().map(|&f| (h & f).count_ones()).collect();
            kernel.run(&bases, &mut None)
        })
        .max()
        .unwrap_or(0);
    Ok(stat(best, anchors.len() as u64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn list(members: &[usize]) -> ForbiddenList {
        ForbiddenList::new(4, 3, members.iter().copied()).unwrap()
    }

    fn count(n: usize, members: &[usize]) -> u128 {
        let report = count_labeled(n, 3, 4, &list(members), &SearchOptions::default()).unwrap();
        u128::try_from(report.labeled_count).unwrap()
    }

    #[test]
    fn census_examples() {
        assert_eq!(count(5, &[1, 3]), 64);
        assert_eq!(count(5, &[0, 2, 3]), 6);
        assert_eq!(count(4, &[1, 3]), 1 + 6 + 1);
        assert_eq!(count(6, &[1, 2, 3]), 2);
        assert_eq!(count(6, &[]), 1 << 20);
    }

    #[test]
    fn parameter_guards() {
        let opts = SearchOptions::default();
        assert!(count_labeled(3, 3, 4, &list(&[1]), &opts).is_err());
        assert!(count_labeled(9, 3, 4, &list(&[1]), &opts).is_err());
        assert!(
            count_iso_classes(9, 2, 3, &ForbiddenList::new(3, 2, [0]).unwrap(), &opts).is_err()
        );
    }

    #[test]
    fn budgets_abort() {
        let opts = SearchOptions {
            node_budget: Some(10_000),
            ..SearchOptions::default()
        };
        match count_labeled(7, 3, 4, &list(&[]), &opts) {
            Err(Error::BudgetExceeded {
                budget: Budget::Nodes,
                partial,
                ..
            }) => assert!(partial < 1 << 35),
            other => panic!("expected a budget error, got {other:?}"),
        }
        let timed = SearchOptions {
            time_budget: Some(Duration::ZERO),
            threads: 4,
            ..SearchOptions::default()
        };
        assert!(matches!(
            count_labeled(7, 3, 4, &list(&[]), &timed),
            Err(Error::BudgetExceeded {
                budget: Budget::Time,
                ..
            })
        ));
    }

    #[test]
    fn threads_do_not_change_counts() {
        for members in [&[1, 4][..], &[2], &[0, 3]] {
            let one = count(6, members);
            for threads in [2, 8] {
                let opts = SearchOptions {
                    threads,
                    ..SearchOptions::default()
                };
                let r = count_labeled(6, 3, 4, &list(members), &opts).unwrap();
                assert_eq!(u128::try_from(r.labeled_count).unwrap(), one);
            }
        }
    }

    #[test]
    fn iso_examples() {
        let opts = SearchOptions::default();
        let iso = |n, m: &[usize]| {
            count_iso_classes(n, 3, 4, &list(m), &opts)
                .unwrap()
                .iso_count
        };
        assert_eq!(iso(4, &[1, 2, 3]), Some(2));
        assert_eq!(iso(5, &[0, 2, 3]), Some(2));
        assert_eq!(iso(4, &[]), Some(5));
    }

    #[test]
    fn enumerate_examples() {
        let opts = SearchOptions::default();
        let mut seen = Vec::new();
        let visits = enumerate_free(5, 3, 4, &list(&[1, 2, 3]), &opts, |g| {
            seen.push(g.edge_count());
            ControlFlow::Continue(())
        })
        .unwrap();
        assert_eq!(visits, 2);
        assert_eq!(seen, vec![0, 10]);
        let all =
            enumerate_free(4, 3, 4, &list(&[]), &opts, |_| ControlFlow::Continue(())).unwrap();
        assert_eq!(all, 16);
        let stop = enumerate_free(4, 3, 4, &list(&[]), &opts, |_| ControlFlow::Break(()));
        assert_eq!(stop, Err(Error::Aborted));
    }

    #[test]
    fn extension_examples() {
        let h = Hypergraph::empty(5, 3).unwrap();
        let d = extension_set(&[0, 1], &h, &list(&[1, 4])).unwrap();
        assert!(!d.is_empty() && d.len() <= 80);
        assert!(d.members.contains(&0));
        for i in 0..d.len() {
            assert!(is_lk_free(&d.member(i), &list(&[1, 4])).unwrap().free);
        }
        let k4 = Hypergraph::complete(4, 3).unwrap();
        assert!(matches!(
            extension_set(&[0], &k4, &list(&[4])),
            Err(Error::Precondition(_))
        ));
        let big = Hypergraph::empty(12, 3).unwrap();
        assert!(extension_set(&[0], &big, &list(&[1, 4])).is_err());
    }

    #[test]
    fn d_small_cases() {
        let opts = SearchOptions::default();
        let l = list(&[1, 4]);
        assert_eq!(max_d(1, 2, &l, DMode::Exhaustive, &opts).unwrap().value, 1);
        assert_eq!(max_d(2, 2, &l, DMode::Exhaustive, &opts).unwrap().value, 1);
        // n = 3 < k: the single triple is unconstrained
        assert_eq!(max_d(2, 3, &l, DMode::Exhaustive, &opts).unwrap().value, 2);
        let exact = max_d(2, 5, &l, DMode::Exhaustive, &opts).unwrap();
        assert!(exact.value <= 80);
        let sampled = max_d(
            2,
            5,
            &l,
            DMode::Sample {
                seed: 0,
                samples: 5,
            },
            &opts,
        )
        .unwrap();
        assert!(!sampled.exact && sampled.value <= exact.value);
    }

    #[test]
    fn report_serialization() {
        let report = count_labeled(5, 3, 4, &list(&[1, 3]), &SearchOptions::default()).unwrap();
        let v = serde_json::to_value(&report).unwrap();
        assert_eq!(v["labeled_count"], "64");
        assert_eq!(v["L"], serde_json::json!([1, 3]));
        assert_eq!(v["method"], "backtracking");
        assert!(report
            .to_csv_row()
            .starts_with("5,3,4,\"{1,3}\",64,,backtracking,"));
    }
}
