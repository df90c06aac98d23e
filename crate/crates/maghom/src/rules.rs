//! Matching rules: prefix-driven recipes that pair chain generators.
//!
//! A rule maps a vertex sequence to idle, insert-a-vertex, or
//! delete-the-second-to-last. Scanning prefixes of a generator for the first
//! non-idle outcome yields its matching state, and the states across a whole
//! length slice assemble into a matching for the Morse engine. Validity of a
//! rule (each insert answered by a delete and vice versa) guarantees the
//! matching is an involution; acyclicity is checked separately.

use std::collections::HashMap;
use std::fmt;

use crate::chain::{enumerate_generators, length_ell, MagnitudeComplex, PathSequence};
use crate::graph::{named, DistanceMatrix, Graph, Vertex};
use crate::morse::{CycleWitness, Matching};
use crate::{Error, Result};

/// What a rule says about one sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleOutcome {
    Idle,
    Insert(Vertex),
    Delete,
}

/// How a generator participates in the matching, with positions in the
/// generator's own coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchState {
    Unmatched,
    /// Matched to the longer sequence with `v` placed right after index `pos`.
    InsertAt { pos: usize, v: Vertex },
    /// Matched to the shorter sequence with index `pos` removed.
    DeleteAt { pos: usize },
}

impl MatchState {
    /// The partner sequence, or None for Unmatched.
    pub fn partner(&self, vertices: &[Vertex]) -> Option<Vec<Vertex>> {
        match *self {
            MatchState::Unmatched => None,
            MatchState::InsertAt { pos, v } => {
                let mut out = vertices.to_vec();
                out.insert(pos + 1, v);
                Some(out)
            }
            MatchState::DeleteAt { pos } => {
                let mut out = vertices.to_vec();
                out.remove(pos);
                Some(out)
            }
        }
    }
}

type RuleFn = Box<dyn Fn(&[Vertex]) -> RuleOutcome + Send + Sync>;

/// A named matching rule. The evaluator is pure and total on sequences with
/// distinct consecutive vertices; it is only ever consulted on sequences
/// whose proper prefixes all evaluate to idle.
pub struct MatchingRule {
    name: String,
    diagonal: bool,
    eval: RuleFn,
}

impl fmt::Debug for MatchingRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MatchingRule")
            .field("name", &self.name)
            .field("diagonal", &self.diagonal)
            .finish()
    }
}

impl MatchingRule {
    pub fn new(
        name: impl Into<String>,
        diagonal: bool,
        eval: impl Fn(&[Vertex]) -> RuleOutcome + Send + Sync + 'static,
    ) -> MatchingRule {
        MatchingRule { name: name.into(), diagonal, eval: Box::new(eval) }
    }

    /// Rule defined by a finite table of non-idle cases; everything else is
    /// idle.
    pub fn from_table(
        name: impl Into<String>,
        diagonal: bool,
        entries: Vec<(Vec<Vertex>, RuleOutcome)>,
    ) -> MatchingRule {
        let table: HashMap<Vec<Vertex>, RuleOutcome> = entries.into_iter().collect();
        MatchingRule::new(name, diagonal, move |s: &[Vertex]| {
            table.get(s).copied().unwrap_or(RuleOutcome::Idle)
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Whether the rule claims the no-idle-on-long-steps property. Checked by
    /// validate_rule, relied on for diagonality conclusions.
    pub fn is_diagonal(&self) -> bool {
        self.diagonal
    }

    pub fn outcome(&self, prefix: &[Vertex]) -> RuleOutcome {
        (self.eval)(prefix)
    }
}

fn fmt_seq(s: &[Vertex]) -> String {
    let parts: Vec<String> = s.iter().map(|v| v.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Scans prefixes for the first non-idle outcome and turns it into a state.
/// Errors if the outcome cannot describe a legal partner: insertion at the
/// very front, deletion without two predecessors, a non-geodesic splice, or
/// an inserted vertex colliding with its neighbors in the sequence.
pub fn match_state(rule: &MatchingRule, vertices: &[Vertex], d: &DistanceMatrix) -> Result<MatchState> {
    let n = d.size() as u32;
    for j in 0..vertices.len() {
        match rule.outcome(&vertices[..=j]) {
            RuleOutcome::Idle => {}
            RuleOutcome::Insert(v) => {
                if j == 0 {
                    return Err(Error::RuleViolation(format!(
                        "rule `{}` inserts before the first vertex of {}",
                        rule.name,
                        fmt_seq(vertices)
                    )));
                }
                if v >= n {
                    return Err(Error::RuleViolation(format!(
                        "rule `{}` inserts unknown vertex {} into {}",
                        rule.name,
                        v,
                        fmt_seq(vertices)
                    )));
                }
                let (a, b) = (vertices[j - 1], vertices[j]);
                if v == a || v == b {
                    return Err(Error::RuleViolation(format!(
                        "rule `{}` inserts {} next to itself in {}",
                        rule.name,
                        v,
                        fmt_seq(vertices)
                    )));
                }
                if d.dist(a, v) + d.dist(v, b) != d.dist(a, b) {
                    return Err(Error::RuleViolation(format!(
                        "rule `{}` inserts {} off the geodesic between {} and {} in {}",
                        rule.name,
                        v,
                        a,
                        b,
                        fmt_seq(vertices)
                    )));
                }
                return Ok(MatchState::InsertAt { pos: j - 1, v });
            }
            RuleOutcome::Delete => {
                if j < 2 {
                    return Err(Error::RuleViolation(format!(
                        "rule `{}` deletes without two predecessors in {}",
                        rule.name,
                        fmt_seq(vertices)
                    )));
                }
                let (a, b, c) = (vertices[j - 2], vertices[j - 1], vertices[j]);
                if d.dist(a, b) + d.dist(b, c) != d.dist(a, c) {
                    return Err(Error::RuleViolation(format!(
                        "rule `{}` deletes non-geodesic vertex {} in {}",
                        rule.name,
                        b,
                        fmt_seq(vertices)
                    )));
                }
                return Ok(MatchState::DeleteAt { pos: j - 1 });
            }
        }
    }
    Ok(MatchState::Unmatched)
}

/// Exhaustively checks the rule's validity over all sequences of length at
/// most `lmax` whose proper prefixes are idle: every insert must name a
/// geodesic vertex, be idle on the spliced prefix, and be answered by a
/// delete; every delete must be geodesic and answered by the reciprocal
/// insert. For rules claiming diagonality, idling on a distance->=2 last step
/// is also a violation. The first offending sequence is reported.
pub fn validate_rule(rule: &MatchingRule, d: &DistanceMatrix, lmax: u32) -> Result<()> {
    let n = d.size() as u32;
    let mut stack: Vec<Vec<Vertex>> = (0..n).rev().map(|v| vec![v]).collect();
    while let Some(seq) = stack.pop() {
        let k = seq.len() - 1;
        match rule.outcome(&seq) {
            RuleOutcome::Idle => {
                if rule.diagonal && k >= 1 && d.dist(seq[k - 1], seq[k]) >= 2 {
                    return Err(Error::RuleViolation(format!(
                        "rule `{}` claims diagonality but is idle on {} whose last step has distance {}",
                        rule.name,
                        fmt_seq(&seq),
                        d.dist(seq[k - 1], seq[k])
                    )));
                }
                let used = length_ell(&seq, d);
                for w in (0..n).rev() {
                    if w != seq[k] && used + d.dist(seq[k], w) <= lmax {
                        let mut next = seq.clone();
                        next.push(w);
                        stack.push(next);
                    }
                }
            }
            RuleOutcome::Insert(v) => {
                if k == 0 {
                    return Err(Error::RuleViolation(format!(
                        "rule `{}` inserts on the single-vertex sequence {}",
                        rule.name,
                        fmt_seq(&seq)
                    )));
                }
                let (a, b) = (seq[k - 1], seq[k]);
                if v >= n || v == a || v == b || d.dist(a, v) + d.dist(v, b) != d.dist(a, b) {
                    return Err(Error::RuleViolation(format!(
                        "rule `{}` answers {} with an invalid insertion of {}",
                        rule.name,
                        fmt_seq(&seq),
                        v
                    )));
                }
                let mut spliced: Vec<Vertex> = seq[..k].to_vec();
                spliced.push(v);
                if rule.outcome(&spliced) != RuleOutcome::Idle {
                    return Err(Error::RuleViolation(format!(
                        "rule `{}` inserts {} into {} but is not idle on the spliced prefix {}",
                        rule.name,
                        v,
                        fmt_seq(&seq),
                        fmt_seq(&spliced)
                    )));
                }
                spliced.push(b);
                if rule.outcome(&spliced) != RuleOutcome::Delete {
                    return Err(Error::RuleViolation(format!(
                        "rule `{}` inserts {} into {} but does not delete it back on {}",
                        rule.name,
                        v,
                        fmt_seq(&seq),
                        fmt_seq(&spliced)
                    )));
                }
            }
            RuleOutcome::Delete => {
                if k < 2 {
                    return Err(Error::RuleViolation(format!(
                        "rule `{}` deletes on {} which has no vertex to delete",
                        rule.name,
                        fmt_seq(&seq)
                    )));
                }
                let (a, b, c) = (seq[k - 2], seq[k - 1], seq[k]);
                if d.dist(a, b) + d.dist(b, c) != d.dist(a, c) {
                    return Err(Error::RuleViolation(format!(
                        "rule `{}` deletes non-geodesic {} in {}",
                        rule.name,
                        b,
                        fmt_seq(&seq)
                    )));
                }
                let mut shortened: Vec<Vertex> = seq[..k - 1].to_vec();
                shortened.push(c);
                if rule.outcome(&shortened) != RuleOutcome::Insert(b) {
                    return Err(Error::RuleViolation(format!(
                        "rule `{}` deletes {} in {} but {} does not insert it back",
                        rule.name,
                        b,
                        fmt_seq(&seq),
                        fmt_seq(&shortened)
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Matches every generator of the slice according to its state, checking
/// that the pairing is a mutual involution: each insert state must point at
/// a partner whose delete state points straight back.
pub fn generate_matching(
    c: &MagnitudeComplex,
    rule: &MatchingRule,
    d: &DistanceMatrix,
) -> Result<Matching> {
    let degrees = c.sets.len();
    let mut states: Vec<Vec<MatchState>> = Vec::with_capacity(degrees);
    for set in &c.sets {
        let mut per = Vec::with_capacity(set.len());
        for s in set.iter() {
            per.push(match_state(rule, &s.vertices, d)?);
        }
        states.push(per);
    }

    let mut pairs: Vec<Vec<(u32, u32)>> = vec![Vec::new(); degrees];
    let mut deletes = 0usize;
    for k in 0..degrees {
        for (i, st) in states[k].iter().enumerate() {
            let me = &c.sets[k].get(i).vertices;
            match *st {
                MatchState::Unmatched => {}
                MatchState::InsertAt { pos, v: _ } => {
                    let partner = st.partner(me).expect("insert state has a partner");
                    let up = c.sets.get(k + 1).ok_or_else(|| {
                        Error::Internal(format!(
                            "partner of {} exceeds the slice's top degree",
                            fmt_seq(me)
                        ))
                    })?;
                    let j = up.index_of(&partner).ok_or_else(|| {
                        Error::Internal(format!(
                            "partner {} of {} is not a generator of this slice",
                            fmt_seq(&partner),
                            fmt_seq(me)
                        ))
                    })?;
                    match states[k + 1][j] {
                        MatchState::DeleteAt { pos: dp } if dp == pos + 1 => {
                            pairs[k + 1].push((i as u32, j as u32));
                        }
                        other => {
                            return Err(Error::MatchingInvalid(format!(
                                "{} matches up to {} but the partner's state is {:?}",
                                fmt_seq(me),
                                fmt_seq(&partner),
                                other
                            )));
                        }
                    }
                }
                MatchState::DeleteAt { pos } => {
                    deletes += 1;
                    let partner = st.partner(me).expect("delete state has a partner");
                    let removed = me[pos];
                    let down = &c.sets[k - 1];
                    let j = down.index_of(&partner).ok_or_else(|| {
                        Error::Internal(format!(
                            "partner {} of {} is not a generator of this slice",
                            fmt_seq(&partner),
                            fmt_seq(me)
                        ))
                    })?;
                    match states[k - 1][j] {
                        MatchState::InsertAt { pos: ip, v } if ip + 1 == pos && v == removed => {}
                        other => {
                            return Err(Error::MatchingInvalid(format!(
                                "{} matches down to {} but the partner's state is {:?}",
                                fmt_seq(me),
                                fmt_seq(&partner),
                                other
                            )));
                        }
                    }
                }
            }
        }
    }
    let total: usize = pairs.iter().map(|p| p.len()).sum();
    if total != deletes {
        return Err(Error::MatchingInvalid(format!(
            "pairing is not an involution: {} insert states vs {} delete states",
            total, deletes
        )));
    }
    Ok(Matching { pairs })
}

/// Generators of I_{k,l} left unmatched by the rule, in lexicographic order.
pub fn enumerate_unmatched(
    rule: &MatchingRule,
    d: &DistanceMatrix,
    k: usize,
    l: u32,
    cap: usize,
) -> Result<Vec<PathSequence>> {
    let set = enumerate_generators(d, k, l, cap)?;
    let mut out = Vec::new();
    for s in set.iter() {
        if match_state(rule, &s.vertices, d)? == MatchState::Unmatched {
            out.push(s.clone());
        }
    }
    Ok(out)
}

/// Re-derives the bookkeeping of a zig-zag cycle (per-step deletion position
/// d_i, partner insertion position c_i) and checks the shape constraints
/// every such cycle must satisfy: d_{i+1} != c_i+1, d_{i+1} <= c_i+2, and
/// d_i <= c_i+1, cyclically.
pub fn witness_shape_ok(
    c: &MagnitudeComplex,
    rule: &MatchingRule,
    d: &DistanceMatrix,
    w: &CycleWitness,
) -> Result<()> {
    let p = w.uppers.len();
    if p == 0 || w.upper_degree == 0 || w.upper_degree >= c.sets.len() {
        return Err(Error::Internal("malformed witness".into()));
    }
    let uppers = &c.sets[w.upper_degree];
    let lowers = &c.sets[w.upper_degree - 1];
    let mut del = Vec::with_capacity(p);
    let mut ins = Vec::with_capacity(p);
    for i in 0..p {
        let a = &uppers.get(w.uppers[i] as usize).vertices;
        let b = &lowers.get(w.lowers[i] as usize).vertices;
        let mut pos = None;
        for idx in 0..a.len() {
            let mut shorter = a.clone();
            shorter.remove(idx);
            if &shorter == b {
                pos = Some(idx);
                break;
            }
        }
        let di = pos.ok_or_else(|| {
            Error::Internal(format!(
                "witness step {} is not a single deletion: {} vs {}",
                i,
                fmt_seq(a),
                fmt_seq(b)
            ))
        })?;
        let ci = match match_state(rule, b, d)? {
            MatchState::InsertAt { pos, .. } => pos,
            other => {
                return Err(Error::Internal(format!(
                    "witness lower {} has state {:?}, expected an insert",
                    fmt_seq(b),
                    other
                )));
            }
        };
        del.push(di);
        ins.push(ci);
    }
    for i in 0..p {
        let (ci, di, dnext) = (ins[i], del[i], del[(i + 1) % p]);
        if dnext == ci + 1 || dnext > ci + 2 || di > ci + 1 {
            return Err(Error::Internal(format!(
                "witness violates the cycle shape at step {}: d_i={}, c_i={}, d_next={}",
                i, di, ci, dnext
            )));
        }
    }
    Ok(())
}

/// Unique first step from u toward v along the one shortest path, for every
/// pair at distance >= 2. Errors unless the step is unique for all pairs.
fn unique_first_step(g: &Graph, d: &DistanceMatrix) -> Result<Vec<Option<Vertex>>> {
    let n = g.vertex_count();
    let mut table = vec![None; n * n];
    for u in 0..n as Vertex {
        for v in 0..n as Vertex {
            if d.dist(u, v) < 2 {
                continue;
            }
            let mut found = None;
            for &w in g.neighbors(u) {
                if 1 + d.dist(w, v) == d.dist(u, v) {
                    if found.is_some() {
                        return Err(Error::Internal(format!(
                            "no unique first step from {} toward {}",
                            u, v
                        )));
                    }
                    found = Some(w);
                }
            }
            table[u as usize * n + v as usize] = Some(found.expect("connected graph"));
        }
    }
    Ok(table)
}

fn first_step_rule(name: &str, g: &Graph, d: &DistanceMatrix) -> Result<MatchingRule> {
    let sigma = unique_first_step(g, d)?;
    let n = g.vertex_count();
    let dm = d.clone();
    let sig = move |u: Vertex, v: Vertex| sigma[u as usize * n + v as usize];
    Ok(MatchingRule::new(name, true, move |s: &[Vertex]| {
        let k = s.len() - 1;
        if k >= 2 && dm.dist(s[k - 2], s[k]) >= 2 && sig(s[k - 2], s[k]) == Some(s[k - 1]) {
            return RuleOutcome::Delete;
        }
        if k >= 1 && dm.dist(s[k - 1], s[k]) >= 2 {
            return RuleOutcome::Insert(sig(s[k - 1], s[k]).expect("distance >= 2"));
        }
        RuleOutcome::Idle
    }))
}

/// Matching rule for trees: delete the previous vertex when it is the first
/// step of the geodesic closing over it, otherwise insert the first step of
/// the final gap.
pub fn tree_rule(g: &Graph, d: &DistanceMatrix) -> Result<MatchingRule> {
    if !g.is_connected() || g.edge_count() != g.vertex_count().saturating_sub(1) {
        return Err(Error::Precondition(format!(
            "tree rule needs a tree: graph has {} vertices and {} edges",
            g.vertex_count(),
            g.edge_count()
        )));
    }
    first_step_rule("tree", g, d)
}

/// The same first-step rule driven by geodetic uniqueness instead of
/// acyclicity; sound on graphs that are both geodetic and ptolemaic.
pub fn geodetic_ptolemaic_rule(g: &Graph, d: &DistanceMatrix) -> Result<MatchingRule> {
    if !crate::graph::is_geodetic(g, d) {
        return Err(Error::Precondition("rule needs a geodetic graph".into()));
    }
    if !crate::graph::is_ptolemaic(d) {
        return Err(Error::Precondition("rule needs a ptolemaic graph".into()));
    }
    first_step_rule("geopto", g, d)
}

/// Matching rule for pawful graphs (diameter <= 2, every induced path
/// u - w - v with a chord u w completable by a common neighbor). `f` picks a
/// common neighbor for a distance-2 pair, `g` a common neighbor for a
/// distance pattern (2, 2, 1) triple; the defaults take the smallest index.
pub fn pawful_rule(g: &Graph, d: &DistanceMatrix) -> Result<MatchingRule> {
    pawful_rule_with(g, d, |_, _, cands| cands[0], |_, _, _, cands| cands[0])
}

pub fn pawful_rule_with(
    g: &Graph,
    d: &DistanceMatrix,
    f_choice: impl Fn(Vertex, Vertex, &[Vertex]) -> Vertex,
    g_choice: impl Fn(Vertex, Vertex, Vertex, &[Vertex]) -> Vertex,
) -> Result<MatchingRule> {
    if !crate::graph::is_pawful(g, d) {
        return Err(Error::Precondition("rule needs a pawful graph".into()));
    }
    let n = g.vertex_count() as Vertex;
    let common = |u: Vertex, v: Vertex| -> Vec<Vertex> {
        g.neighbors(u).iter().copied().filter(|&w| d.dist(v, w) == 1).collect()
    };
    let mut f_tbl: HashMap<(Vertex, Vertex), Vertex> = HashMap::new();
    let mut g_tbl: HashMap<(Vertex, Vertex, Vertex), Vertex> = HashMap::new();
    for u in 0..n {
        for v in 0..n {
            if d.dist(u, v) != 2 {
                continue;
            }
            let cands = common(u, v);
            let pick = f_choice(u, v, &cands);
            if !cands.contains(&pick) {
                return Err(Error::RuleViolation(format!(
                    "f choice for ({},{}) returned {}, not a common neighbor",
                    u, v, pick
                )));
            }
            f_tbl.insert((u, v), pick);
            for w in 0..n {
                if d.dist(v, w) != 2 || d.dist(u, w) != 1 {
                    continue;
                }
                let cands: Vec<Vertex> =
                    common(u, v).into_iter().filter(|&x| d.dist(w, x) == 1).collect();
                let pick = g_choice(u, v, w, &cands);
                if !cands.contains(&pick) {
                    return Err(Error::RuleViolation(format!(
                        "g choice for ({},{},{}) returned {}, not a shared neighbor",
                        u, v, w, pick
                    )));
                }
                g_tbl.insert((u, v, w), pick);
            }
        }
    }
    let dm = d.clone();
    Ok(MatchingRule::new("pawful", true, move |s: &[Vertex]| {
        let k = s.len() - 1;
        if k == 1 && dm.dist(s[0], s[1]) == 2 {
            return RuleOutcome::Insert(f_tbl[&(s[0], s[1])]);
        }
        if k >= 2 && dm.dist(s[k - 1], s[k]) == 2 {
            if dm.dist(s[k - 2], s[k]) == 1 {
                return RuleOutcome::Insert(s[k - 2]);
            }
            if dm.dist(s[k - 2], s[k]) == 2 {
                // Prefix steps are unit distance whenever this evaluator is
                // reached through a prefix scan, so the key is present.
                if let Some(&x) = g_tbl.get(&(s[k - 2], s[k], s[k - 1])) {
                    return RuleOutcome::Insert(x);
                }
                return RuleOutcome::Idle;
            }
        }
        if k == 2 && dm.dist(s[0], s[2]) == 2 && s[1] == f_tbl[&(s[0], s[2])] {
            return RuleOutcome::Delete;
        }
        if k >= 3 && dm.dist(s[k - 2], s[k]) == 2 {
            if dm.dist(s[k - 3], s[k]) == 1 && s[k - 3] == s[k - 1] {
                return RuleOutcome::Delete;
            }
            if dm.dist(s[k - 3], s[k]) == 2
                && g_tbl.get(&(s[k - 3], s[k], s[k - 2])) == Some(&s[k - 1])
            {
                return RuleOutcome::Delete;
            }
        }
        RuleOutcome::Idle
    }))
}

/// Orientation convention for the icosahedron's two-fold choices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Chirality {
    #[default]
    Left,
    Right,
}

/// Orientation data for the icosahedral rule. For each ordered distance-2
/// pair the two common neighbors are split into a left and a right one by
/// the sign of the scalar triple product of the embedding coordinates.
pub struct IcosaTables {
    pub graph: Graph,
    pub dist: DistanceMatrix,
    /// Smallest neighbor of each vertex.
    pub f: Vec<Vertex>,
    pub g_left: HashMap<(Vertex, Vertex), Vertex>,
    pub g_right: HashMap<(Vertex, Vertex), Vertex>,
    /// For d(u,v)=1, d(v,w)=2: the member of {g_left(v,w), g_right(v,w)}
    /// nearer to u, left-biased on ties (ties occur only when d(u,w)=3).
    pub xi: HashMap<(Vertex, Vertex, Vertex), Vertex>,
    /// For d(u,v)=1, d(w,x)=2, d(v,x)=3, u != w: the strictly nearer member
    /// of {g_left(w,x), g_right(w,x)} to u.
    pub zeta: HashMap<(Vertex, Vertex, Vertex, Vertex), Vertex>,
}

pub fn icosa_tables(chirality: Chirality) -> Result<IcosaTables> {
    let g = named::icosahedron();
    let d = g.apsp()?;
    let coords = named::icosahedron_coords();
    let triple = |u: Vertex, v: Vertex, w: Vertex| -> f64 {
        let (a, b, c) = (coords[u as usize], coords[v as usize], coords[w as usize]);
        a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0])
    };
    let f: Vec<Vertex> = (0..12).map(|u| g.neighbors(u)[0]).collect();
    let mut g_left = HashMap::new();
    let mut g_right = HashMap::new();
    for u in 0..12 {
        for v in 0..12 {
            if d.dist(u, v) != 2 {
                continue;
            }
            let commons: Vec<Vertex> =
                g.neighbors(u).iter().copied().filter(|&w| d.dist(v, w) == 1).collect();
            if commons.len() != 2 {
                return Err(Error::Internal(format!(
                    "distance-2 pair ({},{}) has {} common neighbors",
                    u,
                    v,
                    commons.len()
                )));
            }
            let t0 = triple(u, v, commons[0]);
            if t0 == 0.0 || triple(u, v, commons[1]).signum() == t0.signum() {
                return Err(Error::Internal(format!(
                    "orientation is degenerate for pair ({},{})",
                    u, v
                )));
            }
            let (pos, neg) = if t0 > 0.0 {
                (commons[0], commons[1])
            } else {
                (commons[1], commons[0])
            };
            let (l, r) = match chirality {
                Chirality::Left => (pos, neg),
                Chirality::Right => (neg, pos),
            };
            g_left.insert((u, v), l);
            g_right.insert((u, v), r);
        }
    }
    let mut xi = HashMap::new();
    let mut zeta = HashMap::new();
    for u in 0..12 {
        for v in 0..12 {
            if d.dist(u, v) != 1 {
                continue;
            }
            for w in 0..12 {
                if d.dist(v, w) != 2 {
                    continue;
                }
                let (a, b) = (g_left[&(v, w)], g_right[&(v, w)]);
                let pick = if d.dist(b, u) < d.dist(a, u) { b } else { a };
                xi.insert((u, v, w), pick);
            }
            for w in 0..12 {
                if w == u {
                    continue;
                }
                for x in 0..12 {
                    if d.dist(w, x) != 2 || d.dist(v, x) != 3 {
                        continue;
                    }
                    let (a, b) = (g_left[&(w, x)], g_right[&(w, x)]);
                    let y = match d.dist(a, u).cmp(&d.dist(b, u)) {
                        std::cmp::Ordering::Less => a,
                        std::cmp::Ordering::Greater => b,
                        std::cmp::Ordering::Equal => {
                            return Err(Error::Internal(format!(
                                "nearest common neighbor is tied for ({},{},{},{})",
                                u, v, w, x
                            )));
                        }
                    };
                    zeta.insert((u, v, w, x), y);
                }
            }
        }
    }
    Ok(IcosaTables { graph: g, dist: d, f, g_left, g_right, xi, zeta })
}

/// Matching rule for the built-in icosahedron. Twelve cases keyed on the
/// distances of the last step and the step over the previous vertex; the
/// two-fold neighbor choices are disambiguated by the embedding orientation.
pub fn icosahedral_rule(chirality: Chirality) -> Result<MatchingRule> {
    let t = icosa_tables(chirality)?;
    let IcosaTables { dist: dm, f, g_left: gl, xi, zeta, .. } = t;
    Ok(MatchingRule::new("icosa", true, move |s: &[Vertex]| {
        let k = s.len() - 1;
        if k == 1 && dm.dist(s[0], s[1]) == 3 {
            return RuleOutcome::Insert(f[s[0] as usize]);
        }
        if k >= 2 && dm.dist(s[k - 1], s[k]) == 3 {
            return RuleOutcome::Insert(s[k - 2]);
        }
        if k == 1 && dm.dist(s[0], s[1]) == 2 {
            return RuleOutcome::Insert(gl[&(s[0], s[1])]);
        }
        if k >= 2 && dm.dist(s[k - 1], s[k]) == 2 && dm.dist(s[k - 2], s[k]) != 3 {
            if let Some(&x) = xi.get(&(s[k - 2], s[k - 1], s[k])) {
                return RuleOutcome::Insert(x);
            }
            return RuleOutcome::Idle;
        }
        if k == 2 && dm.dist(s[1], s[2]) == 2 && dm.dist(s[0], s[2]) == 3 && s[1] != f[s[0] as usize]
        {
            return RuleOutcome::Insert(gl[&(s[1], s[2])]);
        }
        if k >= 3 && dm.dist(s[k - 1], s[k]) == 2 && dm.dist(s[k - 2], s[k]) == 3 && s[k - 1] != s[k - 3]
        {
            if let Some(&y) = zeta.get(&(s[k - 3], s[k - 2], s[k - 1], s[k])) {
                return RuleOutcome::Insert(y);
            }
            return RuleOutcome::Idle;
        }
        if k == 2 && dm.dist(s[0], s[2]) == 3 && s[1] == f[s[0] as usize] {
            return RuleOutcome::Delete;
        }
        if k >= 3 && dm.dist(s[k - 2], s[k]) == 3 && s[k - 3] == s[k - 1] {
            return RuleOutcome::Delete;
        }
        if k == 2 && dm.dist(s[0], s[2]) == 2 && s[1] == gl[&(s[0], s[2])] {
            return RuleOutcome::Delete;
        }
        if k >= 3
            && dm.dist(s[k - 2], s[k]) == 2
            && dm.dist(s[k - 3], s[k]) != 3
            && xi.get(&(s[k - 3], s[k - 2], s[k])) == Some(&s[k - 1])
        {
            return RuleOutcome::Delete;
        }
        if k == 3
            && dm.dist(s[1], s[3]) == 2
            && dm.dist(s[0], s[3]) == 3
            && s[1] != f[s[0] as usize]
            && s[2] == gl[&(s[1], s[3])]
        {
            return RuleOutcome::Delete;
        }
        if k >= 4
            && dm.dist(s[k - 2], s[k]) == 2
            && dm.dist(s[k - 3], s[k]) == 3
            && s[k - 4] != s[k - 2]
            && zeta.get(&(s[k - 4], s[k - 3], s[k - 2], s[k])) == Some(&s[k - 1])
        {
            return RuleOutcome::Delete;
        }
        RuleOutcome::Idle
    }))
}

/// Signed-distance bookkeeping on a cycle with vertices 0..n-1 in ring
/// order. Odd cycles have n = 2m+1 and offsets in {-m..m}; even cycles have
/// n = 2m and offsets in {-m+1..m}, so the antipodal offset is always +m.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleContext {
    m: u32,
    even: bool,
}

impl CycleContext {
    pub fn odd(m: u32) -> CycleContext {
        CycleContext { m, even: false }
    }

    pub fn even(m: u32) -> CycleContext {
        CycleContext { m, even: true }
    }

    pub fn n(&self) -> u32 {
        if self.even {
            2 * self.m
        } else {
            2 * self.m + 1
        }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Signed offset from u to v, in {-m..m} (odd) or {-m+1..m} (even).
    pub fn delta(&self, u: Vertex, v: Vertex) -> i64 {
        let n = self.n() as i64;
        let r = (v as i64 - u as i64).rem_euclid(n);
        if r > self.m as i64 {
            r - n
        } else {
            r
        }
    }

    pub fn dist(&self, u: Vertex, v: Vertex) -> u32 {
        self.delta(u, v).unsigned_abs() as u32
    }

    /// First step from u toward v; for the even antipode d(u,v)=m the
    /// positive direction wins since delta(u,v) = +m there.
    pub fn sigma(&self, u: Vertex, v: Vertex) -> Vertex {
        debug_assert!(self.dist(u, v) >= 2);
        let n = self.n() as i64;
        (u as i64 + self.delta(u, v).signum()).rem_euclid(n) as Vertex
    }

    /// Odd: the steps u->v->w share a sign, with d(u,v)=1 and d(v,w)=m.
    /// Even: delta(u,v) = -1 and delta(v,w) = -(m-1).
    pub fn chi(&self, u: Vertex, v: Vertex, w: Vertex) -> bool {
        if self.even {
            self.delta(u, v) == -1 && self.delta(v, w) == -(self.m as i64) + 1
        } else {
            let (a, b) = (self.delta(u, v), self.delta(v, w));
            a.signum() == b.signum() && a.unsigned_abs() == 1 && b.unsigned_abs() == self.m as u64
        }
    }

    /// Even cycles only: even degree and every two-step block matches chi.
    pub fn is_special(&self, vertices: &[Vertex]) -> bool {
        debug_assert!(self.even);
        let k = vertices.len() - 1;
        if !k.is_multiple_of(2) {
            return false;
        }
        (0..k / 2).all(|i| self.chi(vertices[2 * i], vertices[2 * i + 1], vertices[2 * i + 2]))
    }

    /// Largest even j such that the prefix of degree j is special.
    pub fn rho(&self, vertices: &[Vertex]) -> usize {
        debug_assert!(self.even);
        let k = vertices.len() - 1;
        let mut j = 0;
        while j + 2 <= k && self.chi(vertices[j], vertices[j + 1], vertices[j + 2]) {
            j += 2;
        }
        j
    }
}

/// Matching rule for the odd cycle on 2m+1 vertices, m >= 2. Not diagonal:
/// idling is deliberate on the chi pattern, which is where all the homology
/// lives.
pub fn odd_cycle_rule(m: u32) -> Result<MatchingRule> {
    if m < 2 {
        return Err(Error::InvalidParam(format!(
            "odd cycle rule needs m >= 2, got m={}",
            m
        )));
    }
    let cx = CycleContext::odd(m);
    Ok(MatchingRule::new("odd-cycle", false, move |s: &[Vertex]| {
        let k = s.len() - 1;
        if k >= 2 && cx.dist(s[k - 2], s[k]) >= 2 && s[k - 1] == cx.sigma(s[k - 2], s[k]) {
            return RuleOutcome::Delete;
        }
        if k >= 1
            && cx.dist(s[k - 1], s[k]) >= 2
            && !(k >= 2 && cx.chi(s[k - 2], s[k - 1], s[k]))
        {
            return RuleOutcome::Insert(cx.sigma(s[k - 1], s[k]));
        }
        RuleOutcome::Idle
    }))
}

/// Matching rule for the even cycle on 2m vertices, m >= 3. Not diagonal;
/// the unmatched sequences carry a special prefix of chi blocks.
pub fn even_cycle_rule(m: u32) -> Result<MatchingRule> {
    if m < 3 {
        return Err(Error::InvalidParam(format!(
            "even cycle rule needs m >= 3, got m={}",
            m
        )));
    }
    let cx = CycleContext::even(m);
    Ok(MatchingRule::new("even-cycle", false, move |s: &[Vertex]| {
        let k = s.len() - 1;
        if k >= 2 && cx.dist(s[k - 2], s[k]) >= 2 && s[k - 1] == cx.sigma(s[k - 2], s[k]) {
            return RuleOutcome::Delete;
        }
        if k >= 3 && cx.delta(s[k - 3], s[k - 2]) == 1 && cx.chi(s[k - 2], s[k - 1], s[k]) {
            return RuleOutcome::Delete;
        }
        if k >= 1
            && cx.dist(s[k - 1], s[k]) >= 2
            && !(k >= 2 && cx.chi(s[k - 2], s[k - 1], s[k]))
            && !(k >= 2 && cx.chi(s[k - 1], s[k - 2], s[k]))
        {
            return RuleOutcome::Insert(cx.sigma(s[k - 1], s[k]));
        }
        if k >= 2 && cx.chi(s[k - 1], s[k - 2], s[k]) {
            return RuleOutcome::Insert(s[k - 2]);
        }
        RuleOutcome::Idle
    }))
}

/// Hand-written rule on the six-vertex example graph. Valid, so it generates
/// a matching, but the matched differential graph contains a zig-zag cycle
/// among the four degree-3 generators at length 3.
pub fn non_morse_rule() -> MatchingRule {
    use RuleOutcome::{Delete, Insert};
    MatchingRule::from_table(
        "non-morse",
        false,
        vec![
            (vec![0, 3], Insert(1)),
            (vec![0, 1, 3], Delete),
            (vec![0, 4], Insert(2)),
            (vec![0, 2, 4], Delete),
            (vec![0, 1, 5], Insert(4)),
            (vec![0, 1, 4, 5], Delete),
            (vec![0, 2, 5], Insert(3)),
            (vec![0, 2, 3, 5], Delete),
        ],
    )
}

/// Count of unmatched generators at (k,l) under the odd cycle rule on
/// C_{2m+1}.
pub fn t_odd(m: u32, k: i64, l: i64) -> u64 {
    if k < 0 || l < 0 {
        return 0;
    }
    let (kn, ln) = (k as usize, l as usize);
    let mut t = vec![vec![0u64; ln + 1]; kn + 1];
    for kk in 0..=kn {
        for ll in 0..=ln {
            t[kk][ll] = if (kk, ll) == (0, 0) {
                2 * m as u64 + 1
            } else if (kk, ll) == (1, 1) {
                4 * m as u64 + 2
            } else {
                let a = if kk >= 1 && ll >= 1 { t[kk - 1][ll - 1] } else { 0 };
                let b = if kk >= 2 && ll >= (m + 1) as usize {
                    t[kk - 2][ll - (m + 1) as usize]
                } else {
                    0
                };
                a + 2 * b
            };
        }
    }
    t[kn][ln]
}

/// Count of unmatched generators at (k,l) under the even cycle rule on
/// C_{2m}.
pub fn t_even(m: u32, k: i64, l: i64) -> u64 {
    if k < 0 || l < 0 {
        return 0;
    }
    let (kn, ln) = (k as usize, l as usize);
    let mut t = vec![vec![0u64; ln + 1]; kn + 1];
    for kk in 0..=kn {
        for ll in 0..=ln {
            t[kk][ll] = if (kk, ll) == (0, 0) {
                2 * m as u64
            } else if (kk, ll) == (1, 1) {
                4 * m as u64
            } else {
                let a = if kk >= 1 && ll >= 1 { t[kk - 1][ll - 1] } else { 0 };
                let b = if kk >= 2 && ll >= m as usize { t[kk - 2][ll - m as usize] } else { 0 };
                a.max(b)
            };
        }
    }
    t[kn][ln]
}

/// Resolves a CLI rule name against a graph, enforcing each rule's
/// precondition. Cycle rules require the graph to be the canonical cycle
/// labeling and the icosahedral rule the built-in icosahedron, because their
/// lookup tables are tied to vertex identities.
pub fn rule_for(name: &str, g: &Graph, d: &DistanceMatrix) -> Result<MatchingRule> {
    match name {
        "tree" => tree_rule(g, d),
        "geopto" => geodetic_ptolemaic_rule(g, d),
        "pawful" => pawful_rule(g, d),
        "icosa" => {
            if !g.same_adjacency(&named::icosahedron()) {
                return Err(Error::Precondition(
                    "icosahedral rule needs the built-in icosahedron labeling".into(),
                ));
            }
            icosahedral_rule(Chirality::Left)
        }
        "odd-cycle" => {
            let n = g.vertex_count();
            if n < 5 || n.is_multiple_of(2) || !g.same_adjacency(&named::cycle(n)?) {
                return Err(Error::Precondition(
                    "odd cycle rule needs the canonical odd cycle on >= 5 vertices".into(),
                ));
            }
            odd_cycle_rule(((n - 1) / 2) as u32)
        }
        "even-cycle" => {
            let n = g.vertex_count();
            if n < 6 || n % 2 == 1 || !g.same_adjacency(&named::cycle(n)?) {
                return Err(Error::Precondition(
                    "even cycle rule needs the canonical even cycle on >= 6 vertices".into(),
                ));
            }
            even_cycle_rule((n / 2) as u32)
        }
        other => Err(Error::InvalidParam(format!("unknown rule `{}`", other))),
    }
}
