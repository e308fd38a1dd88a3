use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::Rational;

/// A sparse vector: strictly increasing column indices, no zero entries.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(u32, Rational)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    /// Builds from arbitrary `(column, value)` pairs, summing duplicates and dropping zeros.
    pub fn from_pairs(mut pairs: Vec<(u32, Rational)>) -> Self {
        pairs.sort_by_key(|(c, _)| *c);
        let mut entries: Vec<(u32, Rational)> = Vec::with_capacity(pairs.len());
        for (c, v) in pairs {
            match entries.last_mut() {
                Some((lc, lv)) if *lc == c => *lv += v,
                _ => entries.push((c, v)),
            }
        }
        entries.retain(|(_, v)| !v.is_zero());
        SparseVec { entries }
    }

    pub fn entries(&self) -> &[(u32, Rational)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(u32, Rational)> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn leading(&self) -> Option<u32> {
        self.entries.first().map(|(c, _)| *c)
    }

    pub fn get(&self, col: u32) -> Rational {
        match self.entries.binary_search_by_key(&col, |(c, _)| *c) {
            Ok(i) => self.entries[i].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn scale(&self, f: &Rational) -> SparseVec {
        if f.is_zero() {
            return SparseVec::new();
        }
        SparseVec { entries: self.entries.iter().map(|(c, v)| (*c, v * f)).collect() }
    }

    /// `self + f * other`.
    pub fn add_scaled(&self, f: &Rational, other: &SparseVec) -> SparseVec {
        let (a, b) = (&self.entries, &other.entries);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            let (ca, cb) = (a[i].0, b[j].0);
            if ca < cb {
                out.push(a[i].clone());
                i += 1;
            } else if cb < ca {
                out.push((cb, f * &b[j].1));
                j += 1;
            } else {
                let v = &a[i].1 + &(f * &b[j].1);
                if !v.is_zero() {
                    out.push((ca, v));
                }
                i += 1;
                j += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(|(c, v)| (*c, f * v)));
        SparseVec { entries: out }
    }
}

/// Rows of sparse rational vectors with a fixed column dimension.
#[derive(Clone, Debug, Default)]
pub struct SpanMatrix {
    ncols: usize,
    rows: Vec<SparseVec>,
}

impl SpanMatrix {
    pub fn new(ncols: usize) -> Self {
        SpanMatrix { ncols, rows: Vec::new() }
    }

    pub fn from_rows(ncols: usize, rows: Vec<SparseVec>) -> Self {
        let mut m = SpanMatrix::new(ncols);
        for r in rows {
            m.push(r);
        }
        m
    }

    /// Appends a row; panics if a column index is out of range.
    pub fn push(&mut self, row: SparseVec) {
        if let Some((c, _)) = row.entries.last() {
            assert!((*c as usize) < self.ncols, "column {} out of range {}", c, self.ncols);
        }
        self.rows.push(row);
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        eliminate(&self.rows).pivots.len()
    }

    /// Indices of an independent subset of the rows spanning the row space.
    pub fn independent_rows(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = eliminate(&self.rows).pivots.iter().map(|p| p.origin).collect();
        idx.sort_unstable();
        idx
    }

    /// A row-echelon basis of the row space, sorted by leading column.
    pub fn echelon_basis(&self) -> Vec<SparseVec> {
        eliminate(&self.rows).pivots.into_iter().map(|p| p.row).collect()
    }

    /// The reduced row-echelon basis: leading coefficient 1, and no row has
    /// a nonzero entry in another row's leading column.
    pub fn reduced_echelon(&self) -> Vec<SparseVec> {
        let mut rows = self.echelon_basis();
        let mut pos: HashMap<u32, usize> = HashMap::new();
        for i in (0..rows.len()).rev() {
            let lead = rows[i].entries[0].1.recip();
            let mut r = rows[i].scale(&lead);
            let hits: Vec<(u32, Rational)> =
                r.entries[1..].iter().filter(|(c, _)| pos.contains_key(c)).cloned().collect();
            for (c, v) in hits {
                let f = -v;
                r = r.add_scaled(&f, &rows[pos[&c]]);
            }
            pos.insert(r.entries[0].0, i);
            rows[i] = r;
        }
        rows
    }
}

pub(crate) struct Pivot {
    pub row: SparseVec,
    pub origin: usize,
}

pub(crate) struct Elimination {
    pub pivots: Vec<Pivot>,
}

/// Bucketed sparse elimination.
///
/// Rows are grouped by leading column. The lowest column is processed first;
/// its pivot is the sparsest row (ties by lowest original index), and every
/// other row in the bucket is reduced against it and re-bucketed.
pub(crate) fn eliminate(rows: &[SparseVec]) -> Elimination {
    let mut buckets: BTreeMap<u32, Vec<(usize, SparseVec)>> = BTreeMap::new();
    for (i, r) in rows.iter().enumerate() {
        if let Some(c) = r.leading() {
            buckets.entry(c).or_default().push((i, r.clone()));
        }
    }
    let mut pivots = Vec::new();
    while let Some((col, mut bucket)) = buckets.pop_first() {
        let best = bucket
            .iter()
            .enumerate()
            .min_by_key(|(_, (orig, r))| (r.nnz(), *orig))
            .map(|(k, _)| k)
            .unwrap();
        let (origin, pivot) = bucket.swap_remove(best);
        let lead_inv = pivot.entries[0].1.recip();
        let reduce = |(orig, r): (usize, SparseVec)| {
            let f = -(&r.entries[0].1 * &lead_inv);
            (orig, r.add_scaled(&f, &pivot))
        };
        let reduced: Vec<(usize, SparseVec)> = if bucket.len() > 64 {
            bucket.into_par_iter().map(reduce).collect()
        } else {
            bucket.into_iter().map(reduce).collect()
        };
        for (orig, r) in reduced {
            if let Some(c) = r.leading() {
                debug_assert!(c > col);
                buckets.entry(c).or_default().push((orig, r));
            }
        }
        pivots.push(Pivot { row: pivot, origin });
    }
    Elimination { pivots }
}
