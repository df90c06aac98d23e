//! Sparse integer matrices used for boundary operators.

use num::bigint::BigInt;
use num::traits::Zero;
use std::collections::HashMap;
use std::io::Write;

/// Sparse matrix over the integers, stored as coordinate triples.
///
/// Invariant: at most one entry per `(row, col)` position, every stored value
/// nonzero, triples sorted by `(col, row)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseIntMat {
    rows: usize,
    cols: usize,
    entries: Vec<(u32, u32, BigInt)>,
}

impl SparseIntMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseIntMat { rows, cols, entries: Vec::new() }
    }

    /// Builds a matrix from unordered triples, summing duplicates and
    /// dropping zeros.
    pub fn from_triples<I>(rows: usize, cols: usize, triples: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, BigInt)>,
    {
        let mut acc: HashMap<(u32, u32), BigInt> = HashMap::new();
        for (r, c, v) in triples {
            assert!((r as usize) < rows && (c as usize) < cols, "entry out of bounds");
            let slot = acc.entry((r, c)).or_insert_with(BigInt::zero);
            *slot += v;
        }
        let mut entries: Vec<(u32, u32, BigInt)> = acc
            .into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|((r, c), v)| (r, c, v))
            .collect();
        entries.sort_by_key(|&(r, c, _)| (c, r));
        SparseIntMat { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (u32, u32, &BigInt)> {
        self.entries.iter().map(|(r, c, v)| (*r, *c, v))
    }

    pub fn get(&self, r: u32, c: u32) -> Option<&BigInt> {
        let i = self
            .entries
            .binary_search_by_key(&(c, r), |&(er, ec, _)| (ec, er))
            .ok()?;
        Some(&self.entries[i].2)
    }

    /// Entries of one column as `(row, value)` pairs in row order.
    pub fn column(&self, c: u32) -> impl Iterator<Item = (u32, &BigInt)> {
        let lo = self.entries.partition_point(move |&(_, ec, _)| ec < c);
        let hi = self.entries.partition_point(move |&(_, ec, _)| ec <= c);
        self.entries[lo..hi].iter().map(|(r, _, v)| (*r, v))
    }

    /// Matrix product `self * rhs` (so `self` is applied after `rhs`).
    pub fn mul(&self, rhs: &SparseIntMat) -> SparseIntMat {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut triples = Vec::new();
        for c in 0..rhs.cols as u32 {
            let mut acc: HashMap<u32, BigInt> = HashMap::new();
            for (mid, v) in rhs.column(c) {
                for (r, w) in self.column(mid) {
                    let slot = acc.entry(r).or_insert_with(BigInt::zero);
                    *slot += v * w;
                }
            }
            for (r, v) in acc {
                if !v.is_zero() {
                    triples.push((r, c, v));
                }
            }
        }
        SparseIntMat::from_triples(self.rows, rhs.cols, triples)
    }

    /// Writes the dump format: a header `k l rows cols` followed by one
    /// `row col value` triple per line.
    pub fn write_dump<W: Write>(&self, w: &mut W, k: usize, l: u32) -> std::io::Result<()> {
        writeln!(w, "{} {} {} {}", k, l, self.rows, self.cols)?;
        for (r, c, v) in self.entries() {
            writeln!(w, "{} {} {}", r, c, v)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::bigint::BigInt;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn from_triples_merges_and_sorts() {
        let m = SparseIntMat::from_triples(
            2,
            3,
            vec![(1, 2, b(4)), (0, 0, b(1)), (1, 2, b(-4)), (0, 2, b(7))],
        );
        assert_eq!(m.nnz(), 2);
        assert_eq!(m.get(0, 0), Some(&b(1)));
        assert_eq!(m.get(0, 2), Some(&b(7)));
        assert_eq!(m.get(1, 2), None);
    }

    #[test]
    fn column_slices() {
        let m = SparseIntMat::from_triples(3, 2, vec![(0, 1, b(5)), (2, 1, b(-1)), (1, 0, b(2))]);
        let c1: Vec<_> = m.column(1).map(|(r, v)| (r, v.clone())).collect();
        assert_eq!(c1, vec![(0, b(5)), (2, b(-1))]);
        assert_eq!(m.column(0).count(), 1);
    }

    #[test]
    fn product_matches_dense() {
        // [[1,2],[0,3]] * [[4,0],[1,1]] = [[6,2],[3,3]]
        let a = SparseIntMat::from_triples(2, 2, vec![(0, 0, b(1)), (0, 1, b(2)), (1, 1, b(3))]);
        let x = SparseIntMat::from_triples(2, 2, vec![(0, 0, b(4)), (1, 0, b(1)), (1, 1, b(1))]);
        let p = a.mul(&x);
        assert_eq!(p.get(0, 0), Some(&b(6)));
        assert_eq!(p.get(0, 1), Some(&b(2)));
        assert_eq!(p.get(1, 0), Some(&b(3)));
        assert_eq!(p.get(1, 1), Some(&b(3)));
    }

    #[test]
    fn dump_format() {
        let m = SparseIntMat::from_triples(2, 2, vec![(0, 1, b(-1)), (1, 0, b(1))]);
        let mut out = Vec::new();
        m.write_dump(&mut out, 2, 3).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text, "2 3 2 2\n1 0 1\n0 1 -1\n");
    }
}
