//! Generators and boundary matrices of the magnitude chain complex.
//!
//! The degree-(k,l) generators are the vertex sequences (x_0,...,x_k) with
//! consecutive entries distinct and total step length l. The boundary drops
//! an interior vertex when doing so preserves the total length, with sign
//! alternating in the position.

use crate::graph::{DistanceMatrix, Graph, Vertex};
use crate::matrix::SparseIntMat;
use crate::{Error, Result};

/// A generator of the chain complex: a vertex sequence with its cached
/// total step length.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathSequence {
    pub vertices: Vec<Vertex>,
    pub ell: u32,
}

impl PathSequence {
    pub fn degree(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Renders as `(a,b,c)` using the graph's vertex labels.
    pub fn display_with(&self, g: &Graph) -> String {
        let names: Vec<String> = self.vertices.iter().map(|&v| g.label(v)).collect();
        format!("({})", names.join(","))
    }
}

/// Sum of consecutive distances along the sequence; 0 for a single vertex.
pub fn length_ell(vertices: &[Vertex], d: &DistanceMatrix) -> u32 {
    vertices.windows(2).map(|w| d.dist(w[0], w[1])).sum()
}

/// The ordered basis of one (k,l) grading: every valid sequence, in
/// lexicographic order.
#[derive(Debug, Clone)]
pub struct IndexSet {
    pub k: usize,
    pub l: u32,
    sequences: Vec<PathSequence>,
}

impl IndexSet {
    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }

    pub fn get(&self, i: usize) -> &PathSequence {
        &self.sequences[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &PathSequence> {
        self.sequences.iter()
    }

    /// Position of a vertex sequence in the basis order.
    pub fn index_of(&self, vertices: &[Vertex]) -> Option<usize> {
        self.sequences.binary_search_by(|s| s.vertices.as_slice().cmp(vertices)).ok()
    }
}

/// Enumerates I_{k,l} by depth-first extension in ascending vertex order,
/// pruning branches whose remaining budget cannot be spent: each remaining
/// step costs between 1 and the diameter.
pub fn enumerate_generators(d: &DistanceMatrix, k: usize, l: u32, cap: usize) -> Result<IndexSet> {
    let n = d.size() as Vertex;
    let diam = d.diameter().max(1);
    let mut sequences = Vec::new();
    let mut prefix: Vec<Vertex> = Vec::with_capacity(k + 1);

    struct Dfs<'a> {
        d: &'a DistanceMatrix,
        n: Vertex,
        k: usize,
        l: u32,
        diam: u32,
        cap: usize,
    }
    impl Dfs<'_> {
        fn extend(
            &self,
            prefix: &mut Vec<Vertex>,
            ell: u32,
            out: &mut Vec<PathSequence>,
        ) -> Result<()> {
            let steps_left = (self.k + 1 - prefix.len()) as u32;
            let budget = self.l - ell;
            if budget < steps_left || budget > steps_left * self.diam {
                return Ok(());
            }
            if steps_left == 0 {
                if out.len() == self.cap {
                    return Err(Error::GeneratorCap { k: self.k, l: self.l, cap: self.cap });
                }
                out.push(PathSequence { vertices: prefix.clone(), ell });
                return Ok(());
            }
            let last = *prefix.last().unwrap();
            for v in 0..self.n {
                if v == last {
                    continue;
                }
                let step = self.d.dist(last, v);
                if ell + step > self.l {
                    continue;
                }
                prefix.push(v);
                self.extend(prefix, ell + step, out)?;
                prefix.pop();
            }
            Ok(())
        }
    }

    let dfs = Dfs { d, n, k, l, diam, cap };
    if k == 0 {
        if l == 0 {
            for v in 0..n {
                sequences.push(PathSequence { vertices: vec![v], ell: 0 });
            }
        }
    } else if (k as u32) <= l {
        for v in 0..n {
            prefix.push(v);
            dfs.extend(&mut prefix, 0, &mut sequences)?;
            prefix.pop();
        }
    }
    Ok(IndexSet { k, l, sequences })
}

/// Boundary matrix between two adjacent gradings of the same l: column per
/// upper generator, entry (-1)^i on the deletion of interior vertex x_i
/// exactly when x_i lies on a geodesic between its neighbors.
pub fn boundary_between(d: &DistanceMatrix, upper: &IndexSet, lower: &IndexSet) -> SparseIntMat {
    assert_eq!(upper.l, lower.l);
    assert_eq!(upper.k, lower.k + 1);
    let mut triples: Vec<(u32, u32, i64)> = Vec::new();
    let mut scratch: Vec<Vertex> = Vec::new();
    for (col, seq) in upper.iter().enumerate() {
        let x = &seq.vertices;
        for i in 1..upper.k {
            if !d.between(x[i - 1], x[i], x[i + 1]) {
                continue;
            }
            scratch.clear();
            scratch.extend_from_slice(&x[..i]);
            scratch.extend_from_slice(&x[i + 1..]);
            let row = lower
                .index_of(&scratch)
                .expect("length-preserving deletion stays in the lower grading");
            let sign = if i % 2 == 1 { -1 } else { 1 };
            triples.push((row as u32, col as u32, sign));
        }
    }
    SparseIntMat::from_triples(
        lower.len(),
        upper.len(),
        triples.into_iter().map(|(r, c, v)| (r, c, v.into())),
    )
}

/// Spec of one boundary map by grading alone; enumerates both bases.
pub fn boundary_matrix(d: &DistanceMatrix, k: usize, l: u32, cap: usize) -> Result<SparseIntMat> {
    assert!(k >= 1, "boundary needs a positive degree");
    let upper = enumerate_generators(d, k, l, cap)?;
    let lower = enumerate_generators(d, k - 1, l, cap)?;
    Ok(boundary_between(d, &upper, &lower))
}

/// All gradings of one total length l: bases and boundary maps for
/// k = 0..=l. `diffs[k]` maps degree k to degree k-1; `diffs[0]` is the
/// zero map out of degree 0.
#[derive(Debug, Clone)]
pub struct MagnitudeComplex {
    pub l: u32,
    pub sets: Vec<IndexSet>,
    pub diffs: Vec<SparseIntMat>,
}

impl MagnitudeComplex {
    pub fn build(d: &DistanceMatrix, l: u32, cap: usize) -> Result<MagnitudeComplex> {
        let kmax = l as usize;
        let mut sets = Vec::with_capacity(kmax + 1);
        for k in 0..=kmax {
            sets.push(enumerate_generators(d, k, l, cap)?);
        }
        let mut diffs = Vec::with_capacity(kmax + 1);
        diffs.push(SparseIntMat::zero(0, sets[0].len()));
        for k in 1..=kmax {
            diffs.push(boundary_between(d, &sets[k], &sets[k - 1]));
        }
        Ok(MagnitudeComplex { l, sets, diffs })
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.sets.iter().map(|s| s.len()).collect()
    }
}
