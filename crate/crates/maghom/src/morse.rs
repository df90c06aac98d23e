//! Algebraic Morse theory for based free integer chain complexes:
//! matchings, acyclicity certificates with explicit cycle witnesses, and
//! the reduced complex carrying the zig-zag differential.

use crate::chain::MagnitudeComplex;
use crate::matrix::SparseIntMat;
use crate::{Error, Result};
use num::{BigInt, Zero};
use std::collections::HashMap;

/// A free chain complex with a chosen basis in every degree:
/// `sizes[k]` generators in degree k, `diffs[k]: C_k -> C_{k-1}`, with
/// `diffs[0]` mapping to the zero module.
#[derive(Debug, Clone)]
pub struct BasedComplex {
    pub sizes: Vec<usize>,
    pub diffs: Vec<SparseIntMat>,
    /// Length label when the complex is one magnitude slice.
    pub grading: Option<u32>,
}

impl BasedComplex {
    pub fn new(
        sizes: Vec<usize>,
        diffs: Vec<SparseIntMat>,
        grading: Option<u32>,
    ) -> Result<BasedComplex> {
        if sizes.is_empty() || sizes.len() != diffs.len() {
            return Err(Error::Internal("complex needs one differential per degree".into()));
        }
        if diffs[0].rows() != 0 || diffs[0].cols() != sizes[0] {
            return Err(Error::Internal("degree-0 differential must map to the zero module".into()));
        }
        for k in 1..sizes.len() {
            if diffs[k].rows() != sizes[k - 1] || diffs[k].cols() != sizes[k] {
                return Err(Error::Internal(format!(
                    "differential {} has shape {}x{}, expected {}x{}",
                    k,
                    diffs[k].rows(),
                    diffs[k].cols(),
                    sizes[k - 1],
                    sizes[k]
                )));
            }
        }
        for k in 1..sizes.len() - 1 {
            if !diffs[k].mul(&diffs[k + 1]).is_zero() {
                return Err(Error::Internal(format!(
                    "composite differential through degree {} is nonzero",
                    k
                )));
            }
        }
        Ok(BasedComplex { sizes, diffs, grading })
    }

    pub fn degrees(&self) -> usize {
        self.sizes.len()
    }
}

impl From<&MagnitudeComplex> for BasedComplex {
    fn from(c: &MagnitudeComplex) -> BasedComplex {
        BasedComplex { sizes: c.sizes(), diffs: c.diffs.clone(), grading: Some(c.l) }
    }
}

/// A partial pairing of generators across adjacent degrees:
/// `pairs[k]` holds (lower id in degree k-1, upper id in degree k).
/// `pairs[0]` is always empty.
#[derive(Debug, Clone, Default)]
pub struct Matching {
    pub pairs: Vec<Vec<(u32, u32)>>,
}

impl Matching {
    pub fn empty(degrees: usize) -> Matching {
        Matching { pairs: vec![Vec::new(); degrees] }
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.iter().map(|p| p.len()).sum()
    }
}

/// A directed cycle in the matched differential graph, alternating between
/// degree `upper_degree` and the degree below: a_1 -> b_1 -> a_2 -> ... ->
/// b_p -> a_1, where each a_i -> b_i is a differential edge avoiding a_i's
/// partner and each b_i -> a_{i+1} is a reversed matched edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleWitness {
    pub upper_degree: usize,
    pub uppers: Vec<u32>,
    pub lowers: Vec<u32>,
}

impl CycleWitness {
    /// The cycle as (degree, generator id) in traversal order.
    pub fn alternating_ids(&self) -> Vec<(usize, u32)> {
        let mut out = Vec::with_capacity(2 * self.uppers.len());
        for i in 0..self.uppers.len() {
            out.push((self.upper_degree, self.uppers[i]));
            out.push((self.upper_degree - 1, self.lowers[i]));
        }
        out
    }
}

/// Per-degree partner lookup tables for one adjacent-degree layer.
struct Layer {
    /// For each degree-k generator: its matched partner below, if any.
    partner_low: Vec<Option<u32>>,
    /// For each degree-(k-1) generator: its matched partner above, if any.
    partner_up: Vec<Option<u32>>,
}

fn build_layer(c: &BasedComplex, m: &Matching, k: usize) -> Layer {
    let mut partner_low = vec![None; c.sizes[k]];
    let mut partner_up = vec![None; c.sizes[k - 1]];
    for &(low, up) in &m.pairs[k] {
        partner_low[up as usize] = Some(low);
        partner_up[low as usize] = Some(up);
    }
    Layer { partner_low, partner_up }
}

/// Checks that the matching is structurally sound: pairs reference valid
/// generators, no generator is used twice in any role, and every matched
/// differential entry is invertible over the integers.
pub fn validate_matching(c: &BasedComplex, m: &Matching) -> Result<()> {
    if m.pairs.len() != c.degrees() {
        return Err(Error::MatchingInvalid(format!(
            "matching covers {} degrees, complex has {}",
            m.pairs.len(),
            c.degrees()
        )));
    }
    if !m.pairs[0].is_empty() {
        return Err(Error::MatchingInvalid("degree 0 has no degree below to pair with".into()));
    }
    let mut used: Vec<Vec<bool>> = c.sizes.iter().map(|&n| vec![false; n]).collect();
    let mut claim = |deg: usize, id: u32| -> Result<()> {
        let slot = used[deg]
            .get_mut(id as usize)
            .ok_or_else(|| Error::MatchingInvalid(format!("generator {} out of range in degree {}", id, deg)))?;
        if *slot {
            return Err(Error::MatchingInvalid(format!(
                "generator {} in degree {} appears in more than one pair",
                id, deg
            )));
        }
        *slot = true;
        Ok(())
    };
    for k in 1..c.degrees() {
        for &(low, up) in &m.pairs[k] {
            claim(k - 1, low)?;
            claim(k, up)?;
            match c.diffs[k].get(low, up) {
                None => {
                    return Err(Error::MatchingInvalid(format!(
                        "matched entry ({}, {}) in degree {} is not an edge of the differential",
                        low, up, k
                    )))
                }
                Some(v) if v == &BigInt::from(1) || v == &BigInt::from(-1) => {}
                Some(v) => {
                    return Err(Error::MatchingInvalid(format!(
                        "matched entry ({}, {}) in degree {} has non-unit value {}",
                        low, up, k, v
                    )))
                }
            }
        }
    }
    Ok(())
}

/// Topological orders of the matched upper generators, one per layer, with
/// every matched-graph edge pointing forward in the order.
#[derive(Debug, Clone)]
pub struct AcyclicityCert {
    topo: Vec<Vec<u32>>,
}

/// Decides whether the matched differential graph is acyclic. Cycles only
/// ever alternate between two adjacent degrees, so each layer is checked
/// independently: the condensed digraph on matched upper generators has an
/// edge a -> a' when the differential sends a to the partner of a' without
/// passing through a's own partner.
pub fn check_acyclic(
    c: &BasedComplex,
    m: &Matching,
) -> std::result::Result<AcyclicityCert, CycleWitness> {
    let mut topo = vec![Vec::new(); c.degrees()];
    for (k, topo_k) in topo.iter_mut().enumerate().skip(1) {
        let layer = build_layer(c, m, k);
        let uppers: Vec<u32> = (0..c.sizes[k] as u32)
            .filter(|&a| layer.partner_low[a as usize].is_some())
            .collect();
        let adjacency: HashMap<u32, Vec<u32>> = uppers
            .iter()
            .map(|&a| {
                let mut next: Vec<u32> = c.diffs[k]
                    .column(a)
                    .filter(|&(b, _)| layer.partner_low[a as usize] != Some(b))
                    .filter_map(|(b, _)| layer.partner_up[b as usize])
                    .collect();
                next.sort_unstable();
                next.dedup();
                (a, next)
            })
            .collect();

        const WHITE: u8 = 0;
        const GRAY: u8 = 1;
        const BLACK: u8 = 2;
        let mut color = vec![WHITE; c.sizes[k]];
        let mut finished: Vec<u32> = Vec::with_capacity(uppers.len());
        for &start in &uppers {
            if color[start as usize] != WHITE {
                continue;
            }
            let mut stack: Vec<(u32, usize)> = vec![(start, 0)];
            color[start as usize] = GRAY;
            while let Some(&mut (node, ref mut idx)) = stack.last_mut() {
                let next = adjacency[&node].get(*idx).copied();
                *idx += 1;
                match next {
                    Some(w) if color[w as usize] == WHITE => {
                        color[w as usize] = GRAY;
                        stack.push((w, 0));
                    }
                    Some(w) if color[w as usize] == GRAY => {
                        let pos = stack
                            .iter()
                            .position(|&(n, _)| n == w)
                            .expect("gray node is on the current path");
                        let cycle_uppers: Vec<u32> =
                            stack[pos..].iter().map(|&(n, _)| n).collect();
                        let p = cycle_uppers.len();
                        let lowers: Vec<u32> = (0..p)
                            .map(|i| {
                                let a_next = cycle_uppers[(i + 1) % p];
                                layer.partner_low[a_next as usize]
                                    .expect("cycle nodes are matched uppers")
                            })
                            .collect();
                        let witness =
                            CycleWitness { upper_degree: k, uppers: cycle_uppers, lowers };
                        assert!(
                            witness_is_valid(c, m, &witness),
                            "detected cycle failed independent re-validation"
                        );
                        return Err(witness);
                    }
                    Some(_) => {}
                    None => {
                        color[node as usize] = BLACK;
                        finished.push(node);
                        stack.pop();
                    }
                }
            }
        }
        finished.reverse();
        *topo_k = finished;
    }
    Ok(AcyclicityCert { topo })
}

/// Independently re-checks a claimed cycle against the complex and the
/// matching: every downward step must be a differential edge avoiding the
/// source's partner, and every upward step must be a reversed matched edge.
pub fn witness_is_valid(c: &BasedComplex, m: &Matching, w: &CycleWitness) -> bool {
    let k = w.upper_degree;
    if k == 0 || k >= c.degrees() {
        return false;
    }
    let p = w.uppers.len();
    if p < 2 || w.lowers.len() != p {
        return false;
    }
    let layer = build_layer(c, m, k);
    for i in 0..p {
        let a = w.uppers[i];
        let b = w.lowers[i];
        let a_next = w.uppers[(i + 1) % p];
        if c.diffs[k].get(b, a).is_none() {
            return false;
        }
        if layer.partner_low[a as usize] == Some(b) {
            return false;
        }
        if layer.partner_up[b as usize] != Some(a_next) {
            return false;
        }
    }
    true
}

/// The complex on unmatched generators with the zig-zag differential.
#[derive(Debug, Clone)]
pub struct ReducedComplex {
    pub grading: Option<u32>,
    /// Surviving original generator ids per degree, ascending.
    pub unmatched: Vec<Vec<u32>>,
    pub diffs: Vec<SparseIntMat>,
}

impl ReducedComplex {
    pub fn sizes(&self) -> Vec<usize> {
        self.unmatched.iter().map(|u| u.len()).collect()
    }
}

/// Reduces the complex along a Morse matching. The differential entry from
/// unmatched u (degree k) to unmatched v (degree k-1) is the signed sum
/// over all zig-zag paths u -> b_1 -> a_1 -> ... -> v, each path weighted
/// by the product of its differential entries with one factor of -1/entry
/// per reversed matched edge. Acyclicity makes the layer a DAG, so the sum
/// is evaluated by dynamic programming in topological order.
pub fn reduce(c: &BasedComplex, m: &Matching) -> Result<ReducedComplex> {
    validate_matching(c, m)?;
    let cert = match check_acyclic(c, m) {
        Ok(cert) => cert,
        Err(w) => return Err(Error::NotMorse(w.uppers.len(), w.upper_degree)),
    };

    let mut matched: Vec<Vec<bool>> = c.sizes.iter().map(|&n| vec![false; n]).collect();
    for k in 1..c.degrees() {
        for &(low, up) in &m.pairs[k] {
            matched[k - 1][low as usize] = true;
            matched[k][up as usize] = true;
        }
    }
    let unmatched: Vec<Vec<u32>> = matched
        .iter()
        .map(|used| {
            (0..used.len() as u32).filter(|&i| !used[i as usize]).collect::<Vec<u32>>()
        })
        .collect();

    let mut diffs = Vec::with_capacity(c.degrees());
    diffs.push(SparseIntMat::zero(0, unmatched[0].len()));
    for k in 1..c.degrees() {
        let layer = build_layer(c, m, k);
        let lower_index: HashMap<u32, u32> = unmatched[k - 1]
            .iter()
            .enumerate()
            .map(|(i, &id)| (id, i as u32))
            .collect();
        let mut triples: Vec<(u32, u32, BigInt)> = Vec::new();
        if !unmatched[k - 1].is_empty() {
            for (col, &source) in unmatched[k].iter().enumerate() {
                // Signed weight of all partial zig-zags from the source to
                // each matched upper generator.
                let mut weight: HashMap<u32, BigInt> = HashMap::new();
                weight.insert(source, BigInt::from(1));
                let mut out: HashMap<u32, BigInt> = HashMap::new();
                let relax = |a: u32, w: &BigInt, weight: &mut HashMap<u32, BigInt>, out: &mut HashMap<u32, BigInt>| {
                    for (b, value) in c.diffs[k].column(a) {
                        if layer.partner_low[a as usize] == Some(b) {
                            continue;
                        }
                        match layer.partner_up[b as usize] {
                            Some(a_next) => {
                                // Reversed edge contributes -1/entry, and
                                // matched entries are +-1.
                                let inv = c.diffs[k]
                                    .get(b, a_next)
                                    .expect("matched pair is a differential edge");
                                let delta = -(w * value * inv);
                                *weight.entry(a_next).or_insert_with(BigInt::zero) += delta;
                            }
                            None => {
                                if lower_index.contains_key(&b) {
                                    *out.entry(b).or_insert_with(BigInt::zero) += w * value;
                                }
                            }
                        }
                    }
                };
                let w0 = weight[&source].clone();
                relax(source, &w0, &mut weight, &mut out);
                for &a in &cert.topo[k] {
                    let Some(w) = weight.get(&a).cloned() else { continue };
                    if w.is_zero() {
                        continue;
                    }
                    relax(a, &w, &mut weight, &mut out);
                }
                for (b, value) in out {
                    if !value.is_zero() {
                        triples.push((lower_index[&b], col as u32, value));
                    }
                }
            }
        }
        diffs.push(SparseIntMat::from_triples(unmatched[k - 1].len(), unmatched[k].len(), triples));
    }

    for k in 1..diffs.len() - 1 {
        if !diffs[k].mul(&diffs[k + 1]).is_zero() {
            return Err(Error::Internal(format!(
                "reduced differential fails to square to zero through degree {}",
                k
            )));
        }
    }

    Ok(ReducedComplex { grading: c.grading, unmatched, diffs })
}

/// Empirical stand-in for the homotopy equivalence: homology of the
/// reduced complex must agree with the original in every degree.
pub fn homology_equivalence_check(c: &BasedComplex, r: &ReducedComplex) -> bool {
    crate::homology::complex_homology(&c.sizes, &c.diffs)
        == crate::homology::complex_homology(&r.sizes(), &r.diffs)
}

/// Reduced boundary data for one length slice of a graph's magnitude
/// complex, produced by the named matching rule.
pub fn reduced_slice(
    g: &crate::graph::Graph,
    d: &crate::graph::DistanceMatrix,
    l: u32,
    rule: &str,
    cap: usize,
) -> Result<(Vec<usize>, Vec<SparseIntMat>)> {
    let rule = crate::rules::rule_for(rule, g, d)?;
    let complex = MagnitudeComplex::build(d, l, cap)?;
    let matching = crate::rules::generate_matching(&complex, &rule, d)?;
    let based = BasedComplex::from(&complex);
    let reduced = reduce(&based, &matching)?;
    Ok((reduced.sizes(), reduced.diffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::enumerate_generators;
    use crate::graph::{named, Graph};
    use crate::homology::complex_homology;
    use rand::{Rng, SeedableRng};

    fn mat(rows: usize, cols: usize, entries: &[(u32, u32, i64)]) -> SparseIntMat {
        SparseIntMat::from_triples(
            rows,
            cols,
            entries.iter().map(|&(r, c, v)| (r, c, BigInt::from(v))),
        )
    }

    fn two_degree(entries: &[(u32, u32, i64)], lower: usize, upper: usize) -> BasedComplex {
        BasedComplex::new(
            vec![lower, upper],
            vec![SparseIntMat::zero(0, lower), mat(lower, upper, entries)],
            None,
        )
        .unwrap()
    }

    #[test]
    fn empty_matching_reduces_to_itself() {
        let g = named::cycle(5).unwrap();
        let d = g.apsp().unwrap();
        let c = BasedComplex::from(&MagnitudeComplex::build(&d, 3, usize::MAX).unwrap());
        let m = Matching::empty(c.degrees());
        validate_matching(&c, &m).unwrap();
        let r = reduce(&c, &m).unwrap();
        assert_eq!(r.sizes(), c.sizes);
        for k in 0..c.degrees() {
            assert_eq!(r.diffs[k], c.diffs[k]);
        }
    }

    #[test]
    fn validation_rejects_bad_pairs() {
        let c = two_degree(&[(0, 0, 1), (1, 0, 2), (1, 1, 1)], 2, 2);
        let ok = Matching { pairs: vec![vec![], vec![(0, 0)]] };
        validate_matching(&c, &ok).unwrap();
        let double = Matching { pairs: vec![vec![], vec![(0, 0), (0, 1)]] };
        assert!(matches!(validate_matching(&c, &double), Err(Error::MatchingInvalid(_))));
        let non_unit = Matching { pairs: vec![vec![], vec![(1, 0)]] };
        let err = validate_matching(&c, &non_unit).unwrap_err();
        assert!(err.to_string().contains("non-unit"));
        let non_edge = Matching { pairs: vec![vec![], vec![(0, 1)]] };
        let err = validate_matching(&c, &non_edge).unwrap_err();
        assert!(err.to_string().contains("not an edge"));
    }

    #[test]
    fn single_pair_reduces_to_schur_complement() {
        // Differential [[1, 1], [1, 2]] with the (0,0) entry matched:
        // the surviving entry is 2 - 1*1*1 = 1.
        let c = two_degree(&[(0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, 2)], 2, 2);
        let m = Matching { pairs: vec![vec![], vec![(0, 0)]] };
        let r = reduce(&c, &m).unwrap();
        assert_eq!(r.unmatched, vec![vec![1], vec![1]]);
        assert_eq!(r.diffs[1].get(0, 0), Some(&BigInt::from(1)));
        assert!(homology_equivalence_check(&c, &r));
    }

    #[test]
    fn schur_sign_uses_negated_inverse() {
        // Differential [[-1, 3], [2, 5]] with the (0,0) entry matched:
        // zig-zag weight is 5 + 3*(-(-1))*2 = 11.
        let c = two_degree(&[(0, 0, -1), (0, 1, 3), (1, 0, 2), (1, 1, 5)], 2, 2);
        let m = Matching { pairs: vec![vec![], vec![(0, 0)]] };
        let r = reduce(&c, &m).unwrap();
        assert_eq!(r.diffs[1].get(0, 0), Some(&BigInt::from(11)));
        assert!(homology_equivalence_check(&c, &r));
    }

    #[test]
    fn two_cycle_is_caught_with_witness() {
        let c = two_degree(&[(0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, 1)], 2, 2);
        let m = Matching { pairs: vec![vec![], vec![(0, 0), (1, 1)]] };
        validate_matching(&c, &m).unwrap();
        let w = check_acyclic(&c, &m).unwrap_err();
        assert_eq!(w.upper_degree, 1);
        assert_eq!(w.uppers.len(), 2);
        assert!(witness_is_valid(&c, &m, &w));
        assert!(matches!(reduce(&c, &m), Err(Error::NotMorse(2, 1))));
        // Tampered witnesses fail the independent check.
        let mut bad = w.clone();
        bad.lowers.swap(0, 1);
        assert!(!witness_is_valid(&c, &m, &bad));
    }

    #[test]
    fn path_slice_with_hand_matching() {
        // P_3 at l = 2: pair (0,2) with (0,1,2). The reduced complex keeps
        // five degree-2 generators and (2,0), with a single surviving
        // differential entry from (2,1,0).
        let g = named::path(3).unwrap();
        let d = g.apsp().unwrap();
        let complex = MagnitudeComplex::build(&d, 2, usize::MAX).unwrap();
        let lower = enumerate_generators(&d, 1, 2, usize::MAX).unwrap();
        let upper = enumerate_generators(&d, 2, 2, usize::MAX).unwrap();
        let pair = (
            lower.index_of(&[0, 2]).unwrap() as u32,
            upper.index_of(&[0, 1, 2]).unwrap() as u32,
        );
        let c = BasedComplex::from(&complex);
        let m = Matching { pairs: vec![vec![], vec![], vec![pair]] };
        let r = reduce(&c, &m).unwrap();
        assert_eq!(r.sizes(), vec![0, 1, 5]);
        assert_eq!(r.diffs[2].nnz(), 1);
        assert!(homology_equivalence_check(&c, &r));
        let h = complex_homology(&r.sizes(), &r.diffs);
        assert_eq!(h[2].rank, 4);
        assert_eq!(h[1].rank, 0);
    }

    fn random_connected_graph(rng: &mut impl Rng, max_n: usize) -> Graph {
        loop {
            let n = rng.random_range(2..=max_n);
            let mut edges = Vec::new();
            for u in 0..n as u32 {
                for v in u + 1..n as u32 {
                    if rng.random_bool(0.5) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::new(n, &edges).unwrap();
            if g.is_connected() {
                return g;
            }
        }
    }

    fn random_matching(rng: &mut impl Rng, c: &BasedComplex) -> Matching {
        let mut pairs = vec![Vec::new(); c.degrees()];
        let mut used: Vec<Vec<bool>> = c.sizes.iter().map(|&n| vec![false; n]).collect();
        let mut candidates: Vec<(usize, u32, u32)> = Vec::new();
        for k in 1..c.degrees() {
            for (low, up, v) in c.diffs[k].entries() {
                if v == &BigInt::from(1) || v == &BigInt::from(-1) {
                    candidates.push((k, low, up));
                }
            }
        }
        // Shuffle by sorting on random keys to stay independent of slice
        // ordering details.
        let mut keyed: Vec<(u64, (usize, u32, u32))> =
            candidates.into_iter().map(|c| (rng.random(), c)).collect();
        keyed.sort_unstable();
        for (_, (k, low, up)) in keyed {
            if rng.random_bool(0.1) {
                continue;
            }
            if !used[k - 1][low as usize] && !used[k][up as usize] {
                used[k - 1][low as usize] = true;
                used[k][up as usize] = true;
                pairs[k].push((low, up));
            }
        }
        Matching { pairs }
    }

    #[test]
    fn random_matchings_reduce_or_witness() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20250819);
        let mut reduced_count = 0;
        let mut witness_count = 0;
        for _ in 0..80 {
            let g = random_connected_graph(&mut rng, 6);
            let d = g.apsp().unwrap();
            let l = rng.random_range(2..=4);
            let complex = MagnitudeComplex::build(&d, l, usize::MAX).unwrap();
            let c = BasedComplex::from(&complex);
            let m = random_matching(&mut rng, &c);
            validate_matching(&c, &m).unwrap();
            match check_acyclic(&c, &m) {
                Ok(_) => {
                    let r = reduce(&c, &m).unwrap();
                    assert!(homology_equivalence_check(&c, &r), "homology changed");
                    let removed = 2 * m.pair_count();
                    assert_eq!(
                        r.sizes().iter().sum::<usize>() + removed,
                        c.sizes.iter().sum::<usize>()
                    );
                    reduced_count += 1;
                }
                Err(w) => {
                    assert!(witness_is_valid(&c, &m, &w));
                    witness_count += 1;
                }
            }
        }
        assert!(reduced_count > 0, "no matching reduced; corpus too hostile");
        assert!(witness_count > 0, "no cycle ever found; corpus too tame");
    }

    #[test]
    fn reduction_shrinks_but_preserves_homology_on_icosahedron_slice() {
        let g = named::icosahedron();
        let d = g.apsp().unwrap();
        let complex = MagnitudeComplex::build(&d, 2, usize::MAX).unwrap();
        let c = BasedComplex::from(&complex);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let m = random_matching(&mut rng, &c);
            if check_acyclic(&c, &m).is_ok() {
                let r = reduce(&c, &m).unwrap();
                assert!(homology_equivalence_check(&c, &r));
            }
        }
    }
}
