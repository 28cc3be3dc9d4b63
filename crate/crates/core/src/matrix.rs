//! Sparse integer matrices and Smith normal form over arbitrary-
//! precision integers.
//!
//! The Smith form is computed in two phases. While any ±1 entry exists,
//! it is used as a pivot (chosen to keep fill-in low: sparsest row
//! first, then sparsest column); each such step is unimodular and
//! contributes an invariant factor of 1. Boundary matrices of the
//! complexes this crate builds are overwhelmingly eliminated in this
//! phase. Whatever survives is handed to a dense textbook Smith
//! reduction with minimal-absolute-value pivoting, remainder descent,
//! and the divisibility sweep that enforces `d1 | d2 | …`. Every
//! arithmetic operation in both phases is exact `BigInt` arithmetic.

use crate::error::{Error, Resource};
use crate::Result;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::time::Instant;

/// A sparse matrix over the integers; absent entries are zero.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SparseIntMatrix {
    row_count: usize,
    col_count: usize,
    entries: BTreeMap<(u32, u32), BigInt>,
}

impl SparseIntMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseIntMatrix {
            row_count: rows,
            col_count: cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn row_count(&self) -> usize {
        self.row_count
    }

    pub fn col_count(&self) -> usize {
        self.col_count
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Set entry `(i, j)`; zero values delete the entry.
    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        assert!(
            i < self.row_count && j < self.col_count,
            "index out of range"
        );
        let key = (i as u32, j as u32);
        if v.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, v);
        }
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        self.entries
            .get(&(i as u32, j as u32))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> + '_ {
        self.entries
            .iter()
            .map(|(&(i, j), v)| (i as usize, j as usize, v))
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = SparseIntMatrix::new(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    m.set(i, j, BigInt::from(v));
                }
            }
        }
        m
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::zero(); self.col_count]; self.row_count];
        for (i, j, v) in self.iter() {
            out[i][j] = v.clone();
        }
        out
    }

    /// Matrix product, for consistency checks (`∂ ∘ ∂ = 0`).
    pub fn multiply(&self, other: &SparseIntMatrix) -> SparseIntMatrix {
        assert_eq!(self.col_count, other.row_count, "dimension mismatch");
        let mut other_rows: HashMap<u32, Vec<(u32, &BigInt)>> = HashMap::new();
        for (&(i, j), v) in &other.entries {
            other_rows.entry(i).or_default().push((j, v));
        }
        let mut acc: BTreeMap<(u32, u32), BigInt> = BTreeMap::new();
        for (&(i, j), v) in &self.entries {
            if let Some(row) = other_rows.get(&j) {
                for &(c, w) in row {
                    let e = acc.entry((i, c)).or_insert_with(BigInt::zero);
                    *e += v * w;
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        SparseIntMatrix {
            row_count: self.row_count,
            col_count: other.col_count,
            entries: acc,
        }
    }
}

/// Result of a Smith normal form computation: the invariant factors
/// `d1 | d2 | … | dr`, positive, in divisibility order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub divisors: Vec<BigUint>,
}

impl SmithForm {
    /// Rank of the matrix (number of invariant factors).
    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    /// Invariant factors greater than one — the torsion contributions.
    pub fn torsion_divisors(&self) -> Vec<BigUint> {
        self.divisors
            .iter()
            .filter(|d| **d > BigUint::one())
            .cloned()
            .collect()
    }
}

/// Smith normal form of `m`.
pub fn smith_normal_form(m: &SparseIntMatrix) -> SmithForm {
    smith_normal_form_with_deadline(m, None).expect("no deadline set")
}

/// Smith normal form with an optional wall-clock cutoff.
pub fn smith_normal_form_with_deadline(
    m: &SparseIntMatrix,
    deadline: Option<Instant>,
) -> Result<SmithForm> {
    let mut elim = Elim::new(m);
    let unit_pivots = elim.eliminate_units(deadline)?;
    let dense = elim.remaining_dense();
    let tail = dense_snf(dense, deadline)?;
    let mut divisors = vec![BigUint::one(); unit_pivots];
    divisors.extend(tail);
    Ok(SmithForm { divisors })
}

struct Elim {
    rows: Vec<HashMap<u32, BigInt>>,
    col_rows: Vec<HashSet<u32>>,
    row_live: Vec<bool>,
    col_live: Vec<bool>,
    /// (row nnz, row id) for live rows, kept in sync after every update.
    order: BTreeSet<(u32, u32)>,
}

impl Elim {
    fn new(m: &SparseIntMatrix) -> Self {
        let mut rows: Vec<HashMap<u32, BigInt>> = vec![HashMap::new(); m.row_count];
        let mut col_rows: Vec<HashSet<u32>> = vec![HashSet::new(); m.col_count];
        for (&(i, j), v) in &m.entries {
            rows[i as usize].insert(j, v.clone());
            col_rows[j as usize].insert(i);
        }
        let order = rows
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.is_empty())
            .map(|(i, r)| (r.len() as u32, i as u32))
            .collect();
        Elim {
            rows,
            col_rows,
            row_live: vec![true; m.row_count],
            col_live: vec![true; m.col_count],
            order,
        }
    }

    /// Eliminate with ±1 pivots until none remain; returns how many.
    fn eliminate_units(&mut self, deadline: Option<Instant>) -> Result<usize> {
        let mut count = 0usize;
        loop {
            if let Some(d) = deadline {
                if Instant::now() > d {
                    return Err(Error::resource(
                        Resource::Time,
                        format!("deadline exceeded after {count} elimination steps"),
                    ));
                }
            }
            // Sparsest row holding a unit entry; sparsest column within it.
            let mut pivot: Option<(u32, u32)> = None;
            for &(_, r) in self.order.iter() {
                let best = self.rows[r as usize]
                    .iter()
                    .filter(|(_, v)| v.is_one() || (-BigInt::one()).eq(*v))
                    .map(|(&c, _)| (self.col_rows[c as usize].len(), c))
                    .min();
                if let Some((_, c)) = best {
                    pivot = Some((r, c));
                    break;
                }
            }
            let Some((pr, pc)) = pivot else {
                return Ok(count);
            };
            let e = self.rows[pr as usize][&pc].clone(); // ±1
            let touched: Vec<u32> = self.col_rows[pc as usize]
                .iter()
                .copied()
                .filter(|&r| r != pr)
                .collect();
            let pivot_row: Vec<(u32, BigInt)> = self.rows[pr as usize]
                .iter()
                .map(|(&c, v)| (c, v.clone()))
                .collect();
            for r2 in touched {
                // row_r2 -= (entry / e) * pivot_row, with 1/e = e for ±1.
                let factor = &self.rows[r2 as usize][&pc] * &e;
                self.order
                    .remove(&(self.rows[r2 as usize].len() as u32, r2));
                for (c, v) in &pivot_row {
                    let delta = v * &factor;
                    let slot = self.rows[r2 as usize].entry(*c);
                    match slot {
                        std::collections::hash_map::Entry::Occupied(mut o) => {
                            *o.get_mut() -= delta;
                            if o.get().is_zero() {
                                o.remove();
                                self.col_rows[*c as usize].remove(&r2);
                            }
                        }
                        std::collections::hash_map::Entry::Vacant(vac) => {
                            if !delta.is_zero() {
                                vac.insert(-delta);
                                self.col_rows[*c as usize].insert(r2);
                            }
                        }
                    }
                }
                if !self.rows[r2 as usize].is_empty() {
                    self.order.insert((self.rows[r2 as usize].len() as u32, r2));
                }
            }
            // Retire the pivot row and column.
            self.order
                .remove(&(self.rows[pr as usize].len() as u32, pr));
            let cols: Vec<u32> = self.rows[pr as usize].keys().copied().collect();
            for c in cols {
                self.col_rows[c as usize].remove(&pr);
            }
            self.rows[pr as usize].clear();
            self.row_live[pr as usize] = false;
            self.col_live[pc as usize] = false;
            count += 1;
        }
    }

    /// Collect the untouched block as a dense matrix.
    fn remaining_dense(&self) -> Vec<Vec<BigInt>> {
        let live_rows: Vec<usize> = (0..self.rows.len())
            .filter(|&r| self.row_live[r] && !self.rows[r].is_empty())
            .collect();
        let mut live_cols: BTreeSet<u32> = BTreeSet::new();
        for &r in &live_rows {
            for &c in self.rows[r].keys() {
                if self.col_live[c as usize] {
                    live_cols.insert(c);
                }
            }
        }
        let col_index: HashMap<u32, usize> =
            live_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        live_rows
            .iter()
            .map(|&r| {
                let mut row = vec![BigInt::zero(); live_cols.len()];
                for (&c, v) in &self.rows[r] {
                    if let Some(&j) = col_index.get(&c) {
                        row[j] = v.clone();
                    }
                }
                row
            })
            .collect()
    }
}

/// Dense Smith reduction: minimal-absolute-value pivoting with
/// remainder descent, followed by the divisibility sweep.
// Index loops stay: each body reads one row while mutating another, so
// iterator forms would need split borrows for no clarity gain.
#[allow(clippy::needless_range_loop)]
fn dense_snf(mut a: Vec<Vec<BigInt>>, deadline: Option<Instant>) -> Result<Vec<BigUint>> {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let mut divisors = Vec::new();
    let mut k = 0usize;
    while k < m.min(n) {
        if let Some(d) = deadline {
            if Instant::now() > d {
                return Err(Error::resource(
                    Resource::Time,
                    format!("deadline exceeded at dense pivot {k}"),
                ));
            }
        }
        // Minimal |entry| in the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for i in k..m {
            for j in k..n {
                if a[i][j].is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if a[bi][bj].abs() <= a[i][j].abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(k, bi);
        swap_cols(&mut a, k, bj);
        'clear: loop {
            let mut dirty = false;
            for i in k + 1..m {
                if a[i][k].is_zero() {
                    continue;
                }
                let q = &a[i][k] / &a[k][k];
                if !q.is_zero() {
                    for j in k..n {
                        let t = &a[k][j] * &q;
                        a[i][j] -= t;
                    }
                }
                if !a[i][k].is_zero() {
                    a.swap(i, k); // strictly smaller pivot
                    dirty = true;
                }
            }
            if dirty {
                continue 'clear;
            }
            for j in k + 1..n {
                if a[k][j].is_zero() {
                    continue;
                }
                let q = &a[k][j] / &a[k][k];
                if !q.is_zero() {
                    for i in k..m {
                        let t = &a[i][k] * &q;
                        a[i][j] -= t;
                    }
                }
                if !a[k][j].is_zero() {
                    swap_cols(&mut a, j, k);
                    dirty = true;
                }
            }
            if dirty {
                continue 'clear;
            }
            // Row and column are clear; enforce divisibility.
            let d = a[k][k].clone();
            let mut offender = None;
            'sweep: for i in k + 1..m {
                for j in k + 1..n {
                    if !(&a[i][j] % &d).is_zero() {
                        offender = Some(i);
                        break 'sweep;
                    }
                }
            }
            match offender {
                Some(i) => {
                    // Fold the offending row into the pivot row; the next
                    // pass shrinks the pivot to a common divisor.
                    for j in k..n {
                        let t = a[i][j].clone();
                        a[k][j] += t;
                    }
                }
                None => break 'clear,
            }
        }
        divisors.push(a[k][k].abs().to_biguint().expect("nonnegative"));
        k += 1;
    }
    Ok(divisors)
}

fn swap_cols(a: &mut [Vec<BigInt>], x: usize, y: usize) {
    if x == y {
        return;
    }
    for row in a.iter_mut() {
        row.swap(x, y);
    }
}

/// Rank over the rationals by fraction-free (Bareiss) elimination — an
/// independent route used to cross-check Smith form ranks.
pub fn rational_rank(m: &SparseIntMatrix) -> usize {
    let mut a = m.to_dense();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0usize;
    let mut prev = BigInt::one();
    for j in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !a[i][j].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..rows {
            for j2 in j + 1..cols {
                let num = &a[rank][j] * &a[i][j2] - &a[i][j] * &a[rank][j2];
                a[i][j2] = num / &prev; // exact by the Bareiss identity
            }
            a[i][j] = BigInt::zero();
        }
        prev = a[rank][j].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Exact determinant of a square integer matrix (Bareiss elimination).
pub fn determinant(mat: &[Vec<BigInt>]) -> BigInt {
    let n = mat.len();
    if n == 0 {
        return BigInt::one();
    }
    assert!(mat.iter().all(|r| r.len() == n), "square matrix required");
    let mut a = mat.to_vec();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}
