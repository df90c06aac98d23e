//! Smith normal form of sparse integer matrices.
//!
//! Elimination keeps arbitrary-precision entries throughout. Pivots of
//! absolute value one are taken first, ordered by Markowitz cost
//! `(row_len - 1) * (col_len - 1)` to limit fill-in; when no unit entry is
//! left, the smallest remaining entry is used with balanced division, which
//! strictly shrinks the pivot until its row and column clear exactly.

use crate::matrix::SparseIntMat;
use num::bigint::BigInt;
use num::traits::{One, Signed, Zero};
use num::Integer;
use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};

/// Invariant factors `d_1 | d_2 | ... | d_r` of an integer matrix, all
/// positive, one per unit of rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub rank: usize,
    pub invariant_factors: Vec<BigInt>,
}

impl SmithForm {
    /// Factors exceeding one, i.e. the torsion coefficients contributed by
    /// this matrix as a boundary operator.
    pub fn nonunit_factors(&self) -> Vec<BigInt> {
        self.invariant_factors.iter().filter(|f| !f.is_one()).cloned().collect()
    }
}

pub fn smith_normal_form(m: &SparseIntMat) -> SmithForm {
    Work::new(m).run()
}

pub fn rank(m: &SparseIntMat) -> usize {
    smith_normal_form(m).rank
}

struct Work {
    rows: Vec<HashMap<u32, BigInt>>,
    cols: Vec<HashSet<u32>>,
    row_alive: Vec<bool>,
    col_alive: Vec<bool>,
    units: BinaryHeap<Reverse<(u64, u32, u32)>>,
    diag: Vec<BigInt>,
}

impl Work {
    fn new(m: &SparseIntMat) -> Self {
        let mut rows: Vec<HashMap<u32, BigInt>> = vec![HashMap::new(); m.rows()];
        let mut cols: Vec<HashSet<u32>> = vec![HashSet::new(); m.cols()];
        let mut units = BinaryHeap::new();
        for (r, c, v) in m.entries() {
            rows[r as usize].insert(c, v.clone());
            cols[c as usize].insert(r);
        }
        for (r, row) in rows.iter().enumerate() {
            for (&c, v) in row {
                if v.abs().is_one() {
                    let cost = markowitz(row.len(), cols[c as usize].len());
                    units.push(Reverse((cost, r as u32, c)));
                }
            }
        }
        Work {
            rows,
            cols,
            row_alive: vec![true; m.rows()],
            col_alive: vec![true; m.cols()],
            units,
            diag: Vec::new(),
        }
    }

    fn run(mut self) -> SmithForm {
        loop {
            let pivot = self.pop_unit().or_else(|| self.scan_smallest());
            match pivot {
                Some((r, c)) => self.eliminate(r, c),
                None => break,
            }
        }
        let rank = self.diag.len();
        SmithForm { rank, invariant_factors: chain_factors(self.diag) }
    }

    fn cost(&self, r: u32, c: u32) -> u64 {
        markowitz(self.rows[r as usize].len(), self.cols[c as usize].len())
    }

    fn pop_unit(&mut self) -> Option<(u32, u32)> {
        while let Some(Reverse((cost, r, c))) = self.units.pop() {
            if !self.row_alive[r as usize] || !self.col_alive[c as usize] {
                continue;
            }
            match self.rows[r as usize].get(&c) {
                Some(v) if v.abs().is_one() => {}
                _ => continue,
            }
            let actual = self.cost(r, c);
            if actual > cost {
                self.units.push(Reverse((actual, r, c)));
                continue;
            }
            return Some((r, c));
        }
        None
    }

    fn scan_smallest(&self) -> Option<(u32, u32)> {
        let mut best: Option<(BigInt, u64, u32, u32)> = None;
        for (r, row) in self.rows.iter().enumerate() {
            if !self.row_alive[r] {
                continue;
            }
            for (&c, v) in row {
                let key = (v.abs(), self.cost(r as u32, c), r as u32, c);
                if best.as_ref().is_none_or(|b| {
                    (&key.0, key.1, key.2, key.3) < (&b.0, b.1, b.2, b.3)
                }) {
                    best = Some(key);
                }
            }
        }
        best.map(|(_, _, r, c)| (r, c))
    }

    /// One elimination attempt at `(r, c)`. Finalizes the pivot unless a
    /// balanced remainder survives, in which case a strictly smaller entry
    /// now exists and the outer loop re-selects.
    fn eliminate(&mut self, r: u32, c: u32) {
        let p = self.rows[r as usize][&c].clone();

        let mut others: Vec<u32> =
            self.cols[c as usize].iter().copied().filter(|&x| x != r).collect();
        others.sort_unstable();
        let mut pivot_row: Vec<(u32, BigInt)> =
            self.rows[r as usize].iter().map(|(&cc, v)| (cc, v.clone())).collect();
        pivot_row.sort_unstable_by_key(|&(cc, _)| cc);

        let mut leftover = false;
        for r2 in others {
            let a = self.rows[r2 as usize][&c].clone();
            let (q, rem) = balanced_divmod(&a, &p);
            if !q.is_zero() {
                self.row_sub(r2, &pivot_row, &q);
            }
            if !rem.is_zero() {
                leftover = true;
            }
        }
        if leftover {
            return;
        }

        let mut row_cols: Vec<u32> =
            self.rows[r as usize].keys().copied().filter(|&x| x != c).collect();
        row_cols.sort_unstable();
        let mut leftover = false;
        for c2 in row_cols {
            // Column operation col_c2 -= q * col_c touches only row r here,
            // because column c was just cleared down to the pivot.
            let a = self.rows[r as usize][&c2].clone();
            let (_, rem) = balanced_divmod(&a, &p);
            if rem.is_zero() {
                self.rows[r as usize].remove(&c2);
                self.cols[c2 as usize].remove(&r);
            } else {
                if rem.abs().is_one() {
                    let cost = self.cost(r, c2);
                    self.units.push(Reverse((cost, r, c2)));
                }
                self.rows[r as usize].insert(c2, rem);
                leftover = true;
            }
        }
        if leftover {
            return;
        }

        self.diag.push(p.abs());
        self.rows[r as usize].clear();
        self.cols[c as usize].clear();
        self.row_alive[r as usize] = false;
        self.col_alive[c as usize] = false;
    }

    fn row_sub(&mut self, target: u32, pivot_row: &[(u32, BigInt)], q: &BigInt) {
        for (cc, vv) in pivot_row {
            let delta = q * vv;
            let row = &mut self.rows[target as usize];
            match row.get_mut(cc) {
                Some(slot) => {
                    *slot -= &delta;
                    if slot.is_zero() {
                        row.remove(cc);
                        self.cols[*cc as usize].remove(&target);
                    } else if slot.abs().is_one() {
                        let cost = markowitz(row.len(), self.cols[*cc as usize].len());
                        self.units.push(Reverse((cost, target, *cc)));
                    }
                }
                None => {
                    row.insert(*cc, -&delta);
                    self.cols[*cc as usize].insert(target);
                    if delta.abs().is_one() {
                        let cost = markowitz(
                            self.rows[target as usize].len(),
                            self.cols[*cc as usize].len(),
                        );
                        self.units.push(Reverse((cost, target, *cc)));
                    }
                }
            }
        }
    }
}

fn markowitz(row_len: usize, col_len: usize) -> u64 {
    (row_len.saturating_sub(1) as u64) * (col_len.saturating_sub(1) as u64)
}

/// Quotient and remainder with `|rem| <= |p| / 2`.
fn balanced_divmod(a: &BigInt, p: &BigInt) -> (BigInt, BigInt) {
    let (mut q, mut r) = a.div_rem(p);
    if &r.abs() * 2 > p.abs() {
        if r.is_positive() {
            r -= p.abs();
            q += p.signum();
        } else {
            r += p.abs();
            q -= p.signum();
        }
    }
    (q, r)
}

/// Turns the diagonal produced by elimination into the invariant-factor
/// chain: `diag(a, b)` is equivalent to `diag(gcd(a, b), lcm(a, b))`.
fn chain_factors(diag: Vec<BigInt>) -> Vec<BigInt> {
    let units = diag.iter().filter(|d| d.is_one()).count();
    let mut rest: Vec<BigInt> = diag.into_iter().filter(|d| !d.is_one()).collect();
    loop {
        let mut changed = false;
        for i in 0..rest.len() {
            for j in i + 1..rest.len() {
                if !(&rest[j] % &rest[i]).is_zero() {
                    let g = rest[i].gcd(&rest[j]);
                    let l = &rest[i] * &rest[j] / &g;
                    rest[i] = g;
                    rest[j] = l;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    rest.sort();
    let mut factors = vec![BigInt::one(); units];
    factors.extend(rest);
    factors
}
