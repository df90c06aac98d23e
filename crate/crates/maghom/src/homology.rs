//! Integer homology of based chain complexes and the (k,l)-graded
//! magnitude homology tables built from them.

use crate::chain::MagnitudeComplex;
use crate::graph::Graph;
use crate::matrix::SparseIntMat;
use crate::snf::smith_normal_form;
use crate::{Error, Result};
use num::BigInt;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::mpsc;

/// One homology group: free rank plus the nontrivial cyclic torsion orders
/// in divisibility order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyGroup {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{}", r)),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{}", t));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Homology at one degree from its two adjacent boundary maps:
/// `d_out` leaves the degree, `d_in` enters it. The free rank is
/// dim ker(d_out) - rank(d_in); torsion comes from the nonunit invariant
/// factors of d_in.
pub fn homology_of_pair(d_out: &SparseIntMat, d_in: &SparseIntMat) -> HomologyGroup {
    assert_eq!(d_out.cols(), d_in.rows(), "boundary maps must share the middle degree");
    assert!(d_out.mul(d_in).is_zero(), "composite boundary must vanish");
    let rank_out = crate::snf::rank(d_out);
    let snf_in = smith_normal_form(d_in);
    let rank = d_out.cols() - rank_out - snf_in.rank;
    HomologyGroup { rank, torsion: snf_in.nonunit_factors() }
}

/// Homology in every degree of a complex given by `sizes[k]` generators in
/// degree k and boundary maps `diffs[k]: C_k -> C_{k-1}`.
pub fn complex_homology(sizes: &[usize], diffs: &[SparseIntMat]) -> Vec<HomologyGroup> {
    assert_eq!(sizes.len(), diffs.len());
    let top = SparseIntMat::zero(sizes.last().copied().unwrap_or(0), 0);
    (0..sizes.len())
        .map(|k| {
            let d_in = if k + 1 < diffs.len() { &diffs[k + 1] } else { &top };
            homology_of_pair(&diffs[k], d_in)
        })
        .collect()
}

/// How a table is computed: direct Smith reduction of the full boundary
/// matrices, or reduction of the complex by a named matching rule first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Method {
    Naive,
    Morse(String),
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Method> {
        if s == "naive" {
            Ok(Method::Naive)
        } else if let Some(rule) = s.strip_prefix("morse:") {
            if rule.is_empty() {
                Err(Error::InvalidParam("morse method needs a rule name".into()))
            } else {
                Ok(Method::Morse(rule.to_string()))
            }
        } else {
            Err(Error::InvalidParam(format!(
                "unknown method `{}` (expected `naive` or `morse:<rule>`)",
                s
            )))
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Naive => write!(f, "naive"),
            Method::Morse(rule) => write!(f, "morse:{}", rule),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TableConfig {
    pub cap: usize,
    pub jobs: usize,
}

impl Default for TableConfig {
    fn default() -> TableConfig {
        TableConfig { cap: crate::DEFAULT_GENERATOR_CAP, jobs: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub k: usize,
    pub l: u32,
    pub rank: usize,
    /// Torsion orders as decimal strings, in divisibility order.
    pub torsion: Vec<String>,
}

impl TableEntry {
    pub fn group(&self) -> HomologyGroup {
        HomologyGroup {
            rank: self.rank,
            torsion: self
                .torsion
                .iter()
                .map(|t| t.parse().expect("torsion entries are decimal integers"))
                .collect(),
        }
    }
}

/// Magnitude homology ranks and torsion for all 0 <= k <= l <= lmax.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyTable {
    pub graph: String,
    pub method: String,
    pub lmax: u32,
    pub entries: Vec<TableEntry>,
}

impl HomologyTable {
    pub fn get(&self, k: usize, l: u32) -> Option<&TableEntry> {
        self.entries.iter().find(|e| e.k == k && e.l == l)
    }

    pub fn rank(&self, k: usize, l: u32) -> usize {
        self.get(k, l).map_or(0, |e| e.rank)
    }

    /// Whether every entry off the k = l diagonal is trivial.
    pub fn is_diagonal(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.k as u32 == e.l || (e.rank == 0 && e.torsion.is_empty()))
    }

    /// Grid rendering: one row per l, one column per k.
    pub fn pretty(&self) -> String {
        let kmax = self.lmax as usize;
        let cell = |k: usize, l: u32| -> String {
            match self.get(k, l) {
                None => String::new(),
                Some(e) => {
                    let mut s = e.rank.to_string();
                    for t in &e.torsion {
                        s.push_str(&format!("+Z/{}", t));
                    }
                    s
                }
            }
        };
        let mut rows: Vec<Vec<String>> = Vec::new();
        let mut header = vec!["l\\k".to_string()];
        header.extend((0..=kmax).map(|k| k.to_string()));
        rows.push(header);
        for l in 0..=self.lmax {
            let mut row = vec![l.to_string()];
            row.extend((0..=kmax).map(|k| cell(k, l)));
            rows.push(row);
        }
        let mut widths = vec![0usize; kmax + 2];
        for row in &rows {
            for (i, s) in row.iter().enumerate() {
                widths[i] = widths[i].max(s.len());
            }
        }
        let mut out = String::new();
        for row in &rows {
            let line: Vec<String> =
                row.iter().enumerate().map(|(i, s)| format!("{:>w$}", s, w = widths[i])).collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        out
    }
}

/// Computes the magnitude homology table of a graph for all l <= lmax.
/// Length slices are independent and are distributed over `config.jobs`
/// worker threads.
pub fn mh_table(
    g: &Graph,
    graph_name: &str,
    lmax: u32,
    method: &Method,
    config: &TableConfig,
) -> Result<HomologyTable> {
    let d = g.apsp()?;
    let compute_slice = |l: u32| -> Result<Vec<HomologyGroup>> {
        match method {
            Method::Naive => {
                let c = MagnitudeComplex::build(&d, l, config.cap)?;
                Ok(complex_homology(&c.sizes(), &c.diffs))
            }
            Method::Morse(rule) => {
                let (sizes, diffs) = crate::morse::reduced_slice(g, &d, l, rule, config.cap)?;
                Ok(complex_homology(&sizes, &diffs))
            }
        }
    };

    let jobs = config.jobs.max(1).min(lmax as usize + 1);
    let mut slices: Vec<(u32, Result<Vec<HomologyGroup>>)> = if jobs <= 1 {
        (0..=lmax).map(|l| (l, compute_slice(l))).collect()
    } else {
        let next = AtomicU32::new(0);
        let (tx, rx) = mpsc::channel();
        std::thread::scope(|scope| {
            for _ in 0..jobs {
                let tx = tx.clone();
                let next = &next;
                let compute_slice = &compute_slice;
                scope.spawn(move || loop {
                    let l = next.fetch_add(1, Ordering::Relaxed);
                    if l > lmax || tx.send((l, compute_slice(l))).is_err() {
                        break;
                    }
                });
            }
        });
        drop(tx);
        rx.into_iter().collect()
    };
    slices.sort_by_key(|(l, _)| *l);

    let mut entries = Vec::new();
    for (l, slice) in slices {
        let groups = slice?;
        for (k, group) in groups.into_iter().enumerate() {
            entries.push(TableEntry {
                k,
                l,
                rank: group.rank,
                torsion: group.torsion.iter().map(|t| t.to_string()).collect(),
            });
        }
    }
    Ok(HomologyTable {
        graph: graph_name.to_string(),
        method: method.to_string(),
        lmax,
        entries,
    })
}
