//! Column-partitioned linear algebra over in-process workers.
//!
//! Each worker owns a contiguous block of columns of every matrix and the
//! matching slice of every `n1`-vector. A matrix-vector product runs in three
//! phases: every worker forms the partial product of its column block, the
//! partials are summed at the root (reduce), and the result is handed back
//! slice by slice (scatter). Reductions combine worker partials in a fixed
//! pairwise tree over worker index, so for a given partition the result is
//! bitwise reproducible.
//!
//! Transport is shared memory; [`CommStats`] counts the messages and bytes an
//! MPI deployment of the same schedule would move.

use std::ops::Range;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::ColumnMatrix;

const F64_BYTES: u64 = std::mem::size_of::<f64>() as u64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnPartition {
    n_cols: usize,
    ranges: Vec<Range<usize>>,
}

impl ColumnPartition {
    pub fn n_workers(&self) -> usize {
        self.ranges.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn ranges(&self) -> &[Range<usize>] {
        &self.ranges
    }

    pub fn range(&self, worker: usize) -> Range<usize> {
        self.ranges[worker].clone()
    }
}

/// Splits `0..n_cols` into `n_workers` contiguous blocks whose sizes differ by
/// at most one; the first `n_cols % n_workers` blocks get the extra column.
///
/// # Panics
/// When `n_workers == 0`.
pub fn partition_columns(n_cols: usize, n_workers: usize) -> ColumnPartition {
    assert!(n_workers >= 1, "at least one worker is required");
    let base = n_cols / n_workers;
    let extra = n_cols % n_workers;
    let mut lo = 0;
    let ranges = (0..n_workers)
        .map(|w| {
            let hi = lo + base + usize::from(w < extra);
            let r = lo..hi;
            lo = hi;
            r
        })
        .collect();
    ColumnPartition { n_cols, ranges }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CommStats {
    pub reduce_ops: u64,
    pub scatter_ops: u64,
    pub bytes_reduced: u64,
    pub bytes_scattered: u64,
}

impl CommStats {
    pub fn record_reduce(&mut self, len: usize) {
        self.reduce_ops += 1;
        self.bytes_reduced += len as u64 * F64_BYTES;
    }

    pub fn record_scatter(&mut self, len: usize) {
        self.scatter_ops += 1;
        self.bytes_scattered += len as u64 * F64_BYTES;
    }

    /// Element-wise `self - earlier`.
    pub fn since(&self, earlier: &CommStats) -> CommStats {
        CommStats {
            reduce_ops: self.reduce_ops - earlier.reduce_ops,
            scatter_ops: self.scatter_ops - earlier.scatter_ops,
            bytes_reduced: self.bytes_reduced - earlier.bytes_reduced,
            bytes_scattered: self.bytes_scattered - earlier.bytes_scattered,
        }
    }

    pub fn scaled(&self, k: u64) -> CommStats {
        CommStats {
            reduce_ops: self.reduce_ops * k,
            scatter_ops: self.scatter_ops * k,
            bytes_reduced: self.bytes_reduced * k,
            bytes_scattered: self.bytes_scattered * k,
        }
    }
}

impl std::ops::Add for CommStats {
    type Output = CommStats;
    fn add(self, o: CommStats) -> CommStats {
        CommStats {
            reduce_ops: self.reduce_ops + o.reduce_ops,
            scatter_ops: self.scatter_ops + o.scatter_ops,
            bytes_reduced: self.bytes_reduced + o.bytes_reduced,
            bytes_scattered: self.bytes_scattered + o.bytes_scattered,
        }
    }
}

/// Sums equally sized partial vectors with a left-to-right pairwise tree:
/// `((p0 + p1) + (p2 + p3)) + ...`, an odd trailing element is carried up.
pub fn tree_reduce(mut parts: Vec<Vec<f64>>) -> Vec<f64> {
    if parts.is_empty() {
        return Vec::new();
    }
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(mut left) = it.next() {
            if let Some(right) = it.next() {
                for (l, r) in left.iter_mut().zip(&right) {
                    *l += r;
                }
            }
            next.push(left);
        }
        parts = next;
    }
    parts.pop().unwrap_or_default()
}

/// A group of SPMD workers sharing one column partition.
///
/// With more than one worker, each phase runs on a dedicated thread pool and
/// returns only after every worker finished (a barrier). A single worker runs
/// inline with no synchronization at all.
pub struct Cluster {
    partition: ColumnPartition,
    pool: Option<rayon::ThreadPool>,
    stats: CommStats,
}

impl std::fmt::Debug for Cluster {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Cluster")
            .field("partition", &self.partition)
            .field("stats", &self.stats)
            .finish()
    }
}

impl Cluster {
    pub fn new(n_cols: usize, n_workers: usize) -> Result<Self> {
        if n_workers == 0 {
            return Err(Error::Spec("n_workers must be at least 1".into()));
        }
        let partition = partition_columns(n_cols, n_workers);
        let pool = if n_workers > 1 {
            Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n_workers)
                    .build()
                    .map_err(|e| Error::Spec(format!("cannot start worker pool: {e}")))?,
            )
        } else {
            None
        };
        Ok(Cluster {
            partition,
            pool,
            stats: CommStats::default(),
        })
    }

    pub fn partition(&self) -> &ColumnPartition {
        &self.partition
    }

    pub fn n_workers(&self) -> usize {
        self.partition.n_workers()
    }

    pub fn stats(&self) -> CommStats {
        self.stats
    }

    pub fn reset_stats(&mut self) {
        self.stats = CommStats::default();
    }

    /// Runs `task(worker, columns)` on every worker and returns the results in
    /// worker order.
    pub fn map_workers<T, F>(&self, task: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize, Range<usize>) -> T + Sync + Send,
    {
        let ranges = self.partition.ranges();
        match &self.pool {
            None => ranges
                .iter()
                .enumerate()
                .map(|(w, r)| task(w, r.clone()))
                .collect(),
            Some(pool) => {
                use rayon::prelude::*;
                pool.install(|| {
                    ranges
                        .par_iter()
                        .enumerate()
                        .map(|(w, r)| task(w, r.clone()))
                        .collect()
                })
            }
        }
    }

    /// Sums per-worker partials at the root; one reduce of `len` doubles.
    pub fn reduce(&mut self, parts: Vec<Vec<f64>>) -> Vec<f64> {
        let len = parts.first().map_or(0, Vec::len);
        debug_assert!(parts.iter().all(|p| p.len() == len));
        self.stats.record_reduce(len);
        tree_reduce(parts)
    }

    /// Records handing each worker its slice of an `n1`-vector.
    pub fn scatter(&mut self, v: &[f64]) {
        self.stats.record_scatter(v.len());
    }

    /// Gathers per-worker slices (no communication is charged: the slices
    /// stay where they were computed).
    pub fn concat(&self, slices: Vec<Vec<f64>>) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.partition.n_cols());
        for s in slices {
            out.extend(s);
        }
        out
    }

    /// `M x` for several matrices sharing the column space of `x`, each
    /// reduced and scattered separately.
    pub fn matvec_many(&mut self, mats: &[&ColumnMatrix], x: &[f64]) -> Result<Vec<Vec<f64>>> {
        let n = self.partition.n_cols();
        if x.len() != n {
            return Err(Error::dim("x", n, x.len()));
        }
        for (k, m) in mats.iter().enumerate() {
            if m.ncols() != n {
                return Err(Error::dim(format!("matrix {k} columns"), n, m.ncols()));
            }
        }
        let partials: Vec<Vec<Vec<f64>>> = self.map_workers(|_, cols| {
            mats.iter()
                .map(|m| {
                    let mut out = vec![0.0; m.nrows()];
                    m.matvec_columns(cols.clone(), x, &mut out);
                    out
                })
                .collect()
        });
        let mut per_matrix: Vec<Vec<Vec<f64>>> = vec![Vec::with_capacity(partials.len()); mats.len()];
        for worker in partials {
            for (k, p) in worker.into_iter().enumerate() {
                per_matrix[k].push(p);
            }
        }
        Ok(per_matrix
            .into_iter()
            .map(|parts| {
                let v = self.reduce(parts);
                self.scatter(&v);
                v
            })
            .collect())
    }

    pub fn matvec(&mut self, m: &ColumnMatrix, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.matvec_many(&[m], x)?.pop().unwrap_or_default())
    }

    /// `x' M x`. When `mx` (already scattered) is supplied the matvec is
    /// skipped; either way the final sum is one reduce of a single double.
    pub fn quadform(&mut self, m: &ColumnMatrix, x: &[f64], mx: Option<&[f64]>) -> Result<f64> {
        let owned;
        let mx = match mx {
            Some(v) => {
                if v.len() != x.len() {
                    return Err(Error::dim("M x", x.len(), v.len()));
                }
                v
            }
            None => {
                if m.nrows() != m.ncols() {
                    return Err(Error::dim("square matrix rows", m.ncols(), m.nrows()));
                }
                owned = self.matvec(m, x)?;
                &owned
            }
        };
        let parts = self.map_workers(|_, cols| vec![cols.map(|j| x[j] * mx[j]).sum::<f64>()]);
        Ok(self.reduce(parts)[0])
    }

    /// `A' g`; worker `w` computes its own slice `[A]_j' g` with no
    /// communication.
    pub fn transpose_matvec(&self, a: &ColumnMatrix, g: &[f64]) -> Result<Vec<f64>> {
        if a.nrows() != g.len() {
            return Err(Error::dim("multiplier vector", a.nrows(), g.len()));
        }
        if a.ncols() != self.partition.n_cols() {
            return Err(Error::dim("matrix columns", self.partition.n_cols(), a.ncols()));
        }
        let slices = self.map_workers(|_, cols| cols.map(|j| a.column_dot(j, g)).collect());
        Ok(self.concat(slices))
    }
}
