//! Exhaustive enumeration of all [n, k]_q codes through their RREF generator
//! matrices, used as ground truth for the closed forms.
//!
//! Order is fixed: pivot sets in lexicographic order, then the free cells of
//! each pivot set as an odometer in row-major order with the last cell
//! turning fastest. Shard `i` is the `i`-th pivot set, so shard ids and
//! checkpoint files are reproducible.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::census::{HullSpectrum, Method};
use crate::error::{Error, Result};
use crate::gf::{binary_min_weight, bits, rref_in_place, Code, Field, Matrix};
use crate::qcomb::{gaussian_binomial, Count};

/// Default cap on the number of subspaces one enumeration may visit.
pub const DEFAULT_GUARD: u64 = 1_000_000_000;

/// Per-code predicates; a code is tallied only if it passes all of them.
/// Distances of 0 or 1 impose no constraint.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Filters {
    pub min_distance: u32,
    pub min_dual_distance: u32,
    pub even: bool,
    pub self_orthogonal: bool,
    pub lcd: bool,
}

impl Filters {
    pub fn is_empty(&self) -> bool {
        *self == Filters::default()
    }

    /// Both distances at least 2, the setting of the filtered censuses.
    pub fn nondegenerate() -> Filters {
        Filters {
            min_distance: 2,
            min_dual_distance: 2,
            ..Filters::default()
        }
    }
}

/// A tally cell. Self-orthogonality and LCD are `hull_dim == k` and
/// `hull_dim == 0`; evenness is recorded for binary codes only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellKey {
    pub hull_dim: u32,
    pub even: Option<bool>,
}

/// One enumeration job: all [n, k]_q codes, optionally restricted to some
/// pivot-set shards.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationTask {
    pub q: u32,
    pub n: u32,
    pub k: u32,
    pub filters: Filters,
    pub shards: Option<Vec<usize>>,
}

impl EnumerationTask {
    pub fn new(n: u32, k: u32, q: u32) -> Self {
        EnumerationTask {
            q,
            n,
            k,
            filters: Filters::default(),
            shards: None,
        }
    }

    pub fn with_filters(mut self, filters: Filters) -> Self {
        self.filters = filters;
        self
    }

    pub fn with_shards(mut self, shards: Vec<usize>) -> Self {
        self.shards = Some(shards);
        self
    }

    fn label(&self) -> String {
        format!(
            "q={} n={} k={} filters={}",
            self.q,
            self.n,
            self.k,
            serde_json::to_string(&self.filters).expect("filters serialize")
        )
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    /// Refuse jobs that would visit more subspaces than this.
    pub guard: Count,
    /// Recompute the hull by explicit intersection on every n-th code.
    pub verify_every: Option<u64>,
    /// Resumable per-shard tallies.
    pub checkpoint: Option<PathBuf>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            guard: Count::from(DEFAULT_GUARD),
            verify_every: None,
            checkpoint: None,
        }
    }
}

/// Result of an enumeration: how many subspaces were visited and how many
/// passing codes landed in each cell.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub visited: Count,
    pub cells: BTreeMap<CellKey, Count>,
}

impl Tally {
    pub fn total(&self) -> Count {
        self.cells.values().sum()
    }

    /// Passing codes with the given hull dimension.
    pub fn by_hull(&self, hull_dim: u32) -> Count {
        self.cells
            .iter()
            .filter(|(c, _)| c.hull_dim == hull_dim)
            .map(|(_, v)| v)
            .sum()
    }

    fn absorb(&mut self, shard: &ShardTally) {
        self.visited += &shard.visited;
        for (key, v) in &shard.cells {
            *self.cells.entry(*key).or_default() += v;
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
struct ShardTally {
    visited: Count,
    cells: Vec<(CellKey, Count)>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct Checkpoint {
    task: String,
    shards: BTreeMap<usize, ShardTally>,
}

/// All k-subsets of 0..n in lexicographic order.
pub fn pivot_sets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // advance the rightmost position that still has room
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Free cells of the RREF with the given pivots, as (row, column) in
/// row-major order.
pub fn free_cells(n: usize, pivots: &[usize]) -> Vec<(usize, usize)> {
    let mut cells = Vec::new();
    for (r, &p) in pivots.iter().enumerate() {
        for c in p + 1..n {
            if !pivots.contains(&c) {
                cells.push((r, c));
            }
        }
    }
    cells
}

/// Refuses the job if it exceeds the guard; returns the number of subspaces.
pub fn check_guard(n: u32, k: u32, q: u32, guard: &Count) -> Result<Count> {
    Field::of_order(q)?;
    if k > n {
        return Err(Error::domain(format!(
            "dimension k={k} exceeds length n={n}"
        )));
    }
    let total = gaussian_binomial(n as u64, k as u64, q as u64);
    if &total > guard {
        return Err(Error::GuardExceeded {
            needed: total,
            limit: guard.clone(),
            unit: "subspaces",
        });
    }
    Ok(total)
}

/// Visits every k-dimensional subspace of GF(q)^n once, as its RREF
/// generator matrix, in the fixed enumeration order. Returns the number of
/// subspaces visited.
pub fn enumerate_rref(
    n: u32,
    k: u32,
    q: u32,
    guard: &Count,
    mut visitor: impl FnMut(&Matrix),
) -> Result<Count> {
    check_guard(n, k, q, guard)?;
    let f = Field::of_order(q)?;
    let (n, k) = (n as usize, k as usize);
    let mut visited = 0u64;
    for pivots in pivot_sets(n, k) {
        visited += for_each_in_shard(f, n, &pivots, |data| {
            let m = Matrix::new(f, k, n, data.to_vec()).expect("odometer stays in the field");
            visitor(&m);
            Ok(())
        })?;
    }
    Ok(Count::from(visited))
}

/// Runs the odometer over one pivot set; `data` is the row-major RREF.
fn for_each_in_shard(
    f: &Field,
    n: usize,
    pivots: &[usize],
    mut visit: impl FnMut(&[u8]) -> Result<()>,
) -> Result<u64> {
    let k = pivots.len();
    let q = f.order() as u8;
    let mut data = vec![0u8; k * n];
    for (r, &p) in pivots.iter().enumerate() {
        data[r * n + p] = 1;
    }
    let cells: Vec<usize> = free_cells(n, pivots)
        .iter()
        .map(|&(r, c)| r * n + c)
        .collect();
    let mut visited = 0u64;
    loop {
        visit(&data)?;
        visited += 1;
        let mut j = cells.len();
        loop {
            if j == 0 {
                return Ok(visited);
            }
            j -= 1;
            let cell = &mut data[cells[j]];
            *cell += 1;
            if *cell < q {
                break;
            }
            *cell = 0;
        }
    }
}

/// Binary odometer over one pivot set with rows packed in words. Consecutive
/// counter values differ in their trailing bits, so each step toggles only
/// the cells whose digit changed.
fn for_each_in_binary_shard(
    n: usize,
    pivots: &[usize],
    mut visit: impl FnMut(&[u64]) -> Result<()>,
) -> Result<u64> {
    let cells = free_cells(n, pivots);
    if cells.len() >= 64 {
        return Err(Error::Unsupported(format!(
            "a shard with {} free cells is too large to enumerate",
            cells.len()
        )));
    }
    let mut rows: Vec<u64> = pivots.iter().map(|&p| 1u64 << p).collect();
    let last = cells.len().wrapping_sub(1);
    let steps = 1u64 << cells.len();
    for m in 0..steps {
        if m > 0 {
            let mut diff = (m - 1) ^ m;
            while diff != 0 {
                let b = diff.trailing_zeros() as usize;
                diff &= diff - 1;
                let (r, c) = cells[last - b];
                rows[r] ^= 1 << c;
            }
        }
        visit(&rows)?;
    }
    Ok(steps)
}

fn shard_tally(
    task: &EnumerationTask,
    shard: usize,
    pivots: &[usize],
    opts: &Options,
) -> Result<ShardTally> {
    let f = Field::of_order(task.q)?;
    let (n, k) = (task.n as usize, task.k as usize);
    let filters = task.filters;
    let mut cells: BTreeMap<CellKey, u64> = BTreeMap::new();
    let mut seen = 0u64;
    let mut sample = |hull: usize, code: &dyn Fn() -> Code| -> Result<()> {
        seen += 1;
        if let Some(every) = opts.verify_every {
            if every > 0 && seen.is_multiple_of(every) {
                let c = code();
                let slow = c.hull_dimension_by_intersection();
                if slow != hull {
                    return Err(Error::Mismatch(format!(
                        "shard {shard}: Gram-rank hull {hull} but intersection hull {slow} for {c:?}"
                    )));
                }
            }
        }
        Ok(())
    };

    let visited = if f.order() == 2 && n <= bits::MAX_BITS {
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        for_each_in_binary_shard(n, pivots, |rows| {
            let hull = k - bits::gram_rank(rows);
            sample(hull, &|| {
                Code::from_rref(bits::unpack(rows, n)).expect("enumerated RREF")
            })?;
            let even = rows.iter().all(|r| r.count_ones() % 2 == 0);
            let keep = passes(&filters, k, hull, Some(even), || {
                let d = match filters.min_distance {
                    0..=1 => true,
                    2 => rows.iter().all(|r| r.count_ones() != 1),
                    m => k > 0 && binary_min_weight(rows) >= m as usize,
                };
                let dd = match filters.min_dual_distance {
                    0..=1 => true,
                    2 => rows.iter().fold(0, |a, r| a | r) == full,
                    m => dual_distance_at_least(&bits::unpack(rows, n), m),
                };
                d && dd
            });
            if keep {
                *cells
                    .entry(CellKey {
                        hull_dim: hull as u32,
                        even: Some(even),
                    })
                    .or_default() += 1;
            }
            Ok(())
        })?
    } else {
        let mut gram = vec![0u8; k * k];
        for_each_in_shard(f, n, pivots, |data| {
            for i in 0..k {
                for j in i..k {
                    let v = crate::gf::dot(f, &data[i * n..(i + 1) * n], &data[j * n..(j + 1) * n]);
                    gram[i * k + j] = v;
                    gram[j * k + i] = v;
                }
            }
            let hull = k - rref_in_place(f, &mut gram, k, k).len();
            let matrix =
                || Matrix::new(f, k, n, data.to_vec()).expect("odometer stays in the field");
            sample(hull, &|| {
                Code::from_rref(matrix()).expect("enumerated RREF")
            })?;
            let even = (f.order() == 2).then(|| {
                (0..k)
                    .all(|i| data[i * n..(i + 1) * n].iter().filter(|&&x| x != 0).count() % 2 == 0)
            });
            let keep = passes(&filters, k, hull, even, || {
                let d = match filters.min_distance {
                    0..=1 => true,
                    2 => (0..k)
                        .all(|i| data[i * n..(i + 1) * n].iter().filter(|&&x| x != 0).count() != 1),
                    m => k > 0 && min_distance_at_least(&matrix(), m),
                };
                let dd = match filters.min_dual_distance {
                    0..=1 => true,
                    2 => (0..n).all(|c| (0..k).any(|r| data[r * n + c] != 0)),
                    m => dual_distance_at_least(&matrix(), m),
                };
                d && dd
            });
            if keep {
                *cells
                    .entry(CellKey {
                        hull_dim: hull as u32,
                        even,
                    })
                    .or_default() += 1;
            }
            Ok(())
        })?
    };
    Ok(ShardTally {
        visited: Count::from(visited),
        cells: cells
            .into_iter()
            .map(|(key, v)| (key, Count::from(v)))
            .collect(),
    })
}

fn passes(
    filters: &Filters,
    k: usize,
    hull: usize,
    even: Option<bool>,
    distances: impl FnOnce() -> bool,
) -> bool {
    if filters.self_orthogonal && hull != k {
        return false;
    }
    if filters.lcd && hull != 0 {
        return false;
    }
    if filters.even && even != Some(true) {
        return false;
    }
    distances()
}

fn min_distance_at_least(m: &Matrix, bound: u32) -> bool {
    let c = Code::from_generator(m);
    matches!(c.min_distance(), Ok(Some(d)) if d >= bound as usize)
}

fn dual_distance_at_least(m: &Matrix, bound: u32) -> bool {
    let c = Code::from_generator(m);
    matches!(c.dual_distance(), Ok(Some(d)) if d >= bound as usize)
}

fn load_checkpoint(path: &Path, label: &str) -> Result<Checkpoint> {
    if !path.exists() {
        return Ok(Checkpoint {
            task: label.to_string(),
            shards: BTreeMap::new(),
        });
    }
    let cp: Checkpoint = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    if cp.task != label {
        return Err(Error::domain(format!(
            "checkpoint {} belongs to task {:?}, not {label:?}",
            path.display(),
            cp.task
        )));
    }
    Ok(cp)
}

fn save_checkpoint(path: &Path, cp: &Checkpoint) -> Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, serde_json::to_string_pretty(cp)?)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Tallies every code of the task that passes its filters, by hull dimension
/// and evenness. Shards run in parallel; the merged result does not depend
/// on scheduling.
pub fn brute_filtered_count(task: &EnumerationTask, opts: &Options) -> Result<Tally> {
    let total = check_guard(task.n, task.k, task.q, &opts.guard)?;
    let all = pivot_sets(task.n as usize, task.k as usize);
    let wanted: Vec<usize> = match &task.shards {
        None => (0..all.len()).collect(),
        Some(ids) => {
            if let Some(bad) = ids.iter().find(|&&i| i >= all.len()) {
                return Err(Error::domain(format!(
                    "shard {bad} out of range; there are {} pivot sets",
                    all.len()
                )));
            }
            let mut ids = ids.clone();
            ids.sort_unstable();
            ids.dedup();
            ids
        }
    };

    let label = task.label();
    let checkpoint = match &opts.checkpoint {
        Some(path) => Some((path.as_path(), Mutex::new(load_checkpoint(path, &label)?))),
        None => None,
    };
    let done: BTreeMap<usize, ShardTally> = match &checkpoint {
        Some((_, cp)) => cp.lock().expect("checkpoint lock").shards.clone(),
        None => BTreeMap::new(),
    };

    let fresh: Vec<(usize, ShardTally)> = wanted
        .par_iter()
        .filter(|id| !done.contains_key(id))
        .map(|&id| {
            let t = shard_tally(task, id, &all[id], opts)?;
            if let Some((path, cp)) = &checkpoint {
                let mut cp = cp.lock().expect("checkpoint lock");
                cp.shards.insert(id, t.clone());
                save_checkpoint(path, &cp)?;
            }
            Ok((id, t))
        })
        .collect::<Result<_>>()?;

    let mut tally = Tally::default();
    let mut merged: BTreeMap<usize, &ShardTally> = fresh.iter().map(|(i, t)| (*i, t)).collect();
    for id in &wanted {
        if let Some(t) = done.get(id) {
            merged.insert(*id, t);
        }
    }
    for t in merged.values() {
        tally.absorb(t);
    }
    if task.shards.is_none() && tally.visited != total {
        return Err(Error::Mismatch(format!(
            "enumeration visited {} subspaces, expected {total}",
            tally.visited
        )));
    }
    Ok(tally)
}

/// Hull spectrum by exhaustive enumeration with default options.
pub fn brute_spectrum(n: u32, k: u32, q: u32) -> Result<HullSpectrum> {
    brute_spectrum_with(n, k, q, &Options::default())
}

pub fn brute_spectrum_with(n: u32, k: u32, q: u32, opts: &Options) -> Result<HullSpectrum> {
    let tally = brute_filtered_count(&EnumerationTask::new(n, k, q), opts)?;
    Ok(HullSpectrum {
        q,
        n,
        k,
        counts: (0..=k).map(|l| tally.by_hull(l)).collect(),
        method: Method::BruteForce,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pivot_sets_are_lexicographic() {
        assert_eq!(
            pivot_sets(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(pivot_sets(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(pivot_sets(2, 3), Vec::<Vec<usize>>::new());
    }

    #[test]
    fn enumeration_counts() {
        let g = Count::from(DEFAULT_GUARD);
        assert_eq!(
            enumerate_rref(4, 2, 2, &g, |_| {}).unwrap(),
            Count::from(35)
        );
        assert_eq!(enumerate_rref(3, 1, 2, &g, |_| {}).unwrap(), Count::from(7));
        assert_eq!(
            enumerate_rref(6, 3, 3, &g, |_| {}).unwrap(),
            Count::from(33_880)
        );
    }

    #[test]
    fn enumeration_order_is_odometer() {
        let g = Count::from(DEFAULT_GUARD);
        let mut seen = Vec::new();
        enumerate_rref(3, 1, 2, &g, |m| seen.push(m.to_string())).unwrap();
        assert_eq!(seen, ["100", "101", "110", "111", "010", "011", "001"]);
    }

    #[test]
    fn enumerated_matrices_are_distinct_rrefs() {
        let g = Count::from(DEFAULT_GUARD);
        let mut seen = std::collections::HashSet::new();
        enumerate_rref(4, 2, 3, &g, |m| {
            assert_eq!(&m.rref().matrix, m);
            assert!(seen.insert(m.clone()));
        })
        .unwrap();
        assert_eq!(seen.len(), 130);
    }

    #[test]
    fn small_spectra() {
        assert_eq!(
            brute_spectrum(4, 2, 2).unwrap().counts,
            [20u64, 12, 3].map(Count::from)
        );
        assert_eq!(
            brute_spectrum(3, 1, 2).unwrap().counts,
            [4u64, 3].map(Count::from)
        );
    }

    #[test]
    fn binary_and_table_paths_agree() {
        // GF(2) through the table path by way of enumerate_rref
        let g = Count::from(DEFAULT_GUARD);
        let mut counts = [0u64; 4];
        enumerate_rref(7, 3, 2, &g, |m| {
            counts[Code::from_generator(m).hull_dimension_by_intersection()] += 1
        })
        .unwrap();
        let fast = brute_spectrum(7, 3, 2).unwrap();
        assert_eq!(fast.counts, counts.map(Count::from));
    }

    #[test]
    fn filtered_worked_example() {
        let task = EnumerationTask::new(4, 2, 2).with_filters(Filters::nondegenerate());
        let t = brute_filtered_count(&task, &Options::default()).unwrap();
        assert_eq!(t.visited, Count::from(35));
        // orbits under S4: three pairings for the self-dual class, and
        // 24 / 4 = 6 for the LCD class span{1110, 0101}
        assert_eq!(t.by_hull(2), Count::from(3));
        assert_eq!(t.by_hull(0), Count::from(6));
        assert_eq!(t.by_hull(1), Count::zero());
    }

    #[test]
    fn self_orthogonal_filter_above_half_is_empty() {
        let so = Filters {
            self_orthogonal: true,
            ..Filters::default()
        };
        for q in [2, 3] {
            let t = brute_filtered_count(
                &EnumerationTask::new(5, 3, q).with_filters(so),
                &Options::default(),
            )
            .unwrap();
            assert!(t.total().is_zero());
        }
    }

    #[test]
    fn shards_add_up() {
        let task = EnumerationTask::new(6, 3, 2);
        let whole = brute_filtered_count(&task, &Options::default()).unwrap();
        let mut sum = Tally::default();
        for part in [vec![0, 5, 7], vec![1, 2, 3, 4, 6], (8..20).collect()] {
            let t =
                brute_filtered_count(&task.clone().with_shards(part), &Options::default()).unwrap();
            sum.visited += &t.visited;
            for (key, v) in t.cells {
                *sum.cells.entry(key).or_default() += &v;
            }
        }
        assert_eq!(sum, whole);
    }

    #[test]
    fn guard_reports_needed_count() {
        let opts = Options {
            guard: Count::from(100),
            ..Options::default()
        };
        match brute_spectrum_with(6, 3, 3, &opts) {
            Err(Error::GuardExceeded { needed, .. }) => assert_eq!(needed, Count::from(33_880)),
            other => panic!("expected guard refusal, got {other:?}"),
        }
    }

    #[test]
    fn sampled_intersection_check_passes() {
        let opts = Options {
            verify_every: Some(7),
            ..Options::default()
        };
        brute_spectrum_with(6, 3, 2, &opts)
            .unwrap()
            .validate()
            .unwrap();
        brute_spectrum_with(4, 2, 3, &opts)
            .unwrap()
            .validate()
            .unwrap();
    }
}
