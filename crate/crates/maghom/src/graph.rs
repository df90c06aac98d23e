//! Finite simple graphs, shortest-path metrics, named families, and the
//! structural predicates used by the matching rules.

use crate::{Error, Result};
use std::collections::{BTreeSet, HashSet};
use std::path::Path;

pub type Vertex = u32;

#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<Vertex>>,
    labels: Option<Vec<String>>,
    connected: bool,
}

impl Graph {
    /// Builds a simple graph on vertices `0..n` from an edge list.
    /// Duplicate edges and orientations are merged; self-loops are rejected.
    pub fn new(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Graph> {
        let mut sets: Vec<BTreeSet<Vertex>> = vec![BTreeSet::new(); n];
        for &(u, v) in edges {
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            for x in [u, v] {
                if x as usize >= n {
                    return Err(Error::VertexOutOfRange(x, n));
                }
            }
            sets[u as usize].insert(v);
            sets[v as usize].insert(u);
        }
        let adj: Vec<Vec<Vertex>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        let connected = connected_from(&adj);
        Ok(Graph { n, adj, labels: None, connected })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Graph {
        assert_eq!(labels.len(), self.n);
        self.labels = Some(labels);
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v as usize].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::new();
        for u in 0..self.n as Vertex {
            for &v in self.neighbors(u) {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    pub fn label(&self, v: Vertex) -> String {
        match &self.labels {
            Some(l) => l[v as usize].clone(),
            None => v.to_string(),
        }
    }

    pub fn same_adjacency(&self, other: &Graph) -> bool {
        self.n == other.n && self.adj == other.adj
    }

    /// All-pairs shortest paths by BFS from every vertex. Errors on a
    /// disconnected graph, naming one unreachable pair.
    pub fn apsp(&self) -> Result<DistanceMatrix> {
        let n = self.n;
        let mut d = vec![u32::MAX; n * n];
        let mut queue = std::collections::VecDeque::new();
        for s in 0..n {
            let row = &mut d[s * n..(s + 1) * n];
            row[s] = 0;
            queue.clear();
            queue.push_back(s as Vertex);
            while let Some(u) = queue.pop_front() {
                let du = row[u as usize];
                for &w in self.neighbors(u) {
                    if row[w as usize] == u32::MAX {
                        row[w as usize] = du + 1;
                        queue.push_back(w);
                    }
                }
            }
            if let Some(t) = row.iter().position(|&x| x == u32::MAX) {
                return Err(Error::Disconnected(s as Vertex, t as Vertex));
            }
        }
        Ok(DistanceMatrix { n, d })
    }

    pub fn complement(&self) -> Graph {
        let mut edges = Vec::new();
        for u in 0..self.n as Vertex {
            for v in u + 1..self.n as Vertex {
                if !self.has_edge(u, v) {
                    edges.push((u, v));
                }
            }
        }
        Graph::new(self.n, &edges).expect("complement of a valid graph is valid")
    }
}

fn connected_from(adj: &[Vec<Vertex>]) -> bool {
    let n = adj.len();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &w in &adj[u] {
            if !seen[w as usize] {
                seen[w as usize] = true;
                count += 1;
                stack.push(w as usize);
            }
        }
    }
    count == n
}

/// Dense all-pairs distance table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<u32>,
}

impl DistanceMatrix {
    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dist(&self, u: Vertex, v: Vertex) -> u32 {
        self.d[u as usize * self.n + v as usize]
    }

    pub fn diameter(&self) -> u32 {
        self.d.iter().copied().max().unwrap_or(0)
    }

    /// Number of vertices at each distance from `v`, indexed by distance up
    /// to the graph diameter.
    pub fn profile(&self, v: Vertex) -> Vec<usize> {
        let mut counts = vec![0usize; self.diameter() as usize + 1];
        for u in 0..self.n as Vertex {
            counts[self.dist(v, u) as usize] += 1;
        }
        counts
    }

    /// Whether `w` lies on a geodesic from `u` to `v`.
    #[inline]
    pub fn between(&self, u: Vertex, w: Vertex, v: Vertex) -> bool {
        self.dist(u, w) + self.dist(w, v) == self.dist(u, v)
    }
}

pub mod named {
    use super::*;

    pub fn path(n: usize) -> Result<Graph> {
        if n == 0 {
            return Err(Error::InvalidParam("path needs at least one vertex".into()));
        }
        let edges: Vec<_> = (0..n as Vertex - 1).map(|i| (i, i + 1)).collect();
        Graph::new(n, &edges)
    }

    pub fn cycle(n: usize) -> Result<Graph> {
        if n < 3 {
            return Err(Error::InvalidParam("cycle needs at least three vertices".into()));
        }
        let edges: Vec<_> = (0..n as Vertex).map(|i| (i, (i + 1) % n as Vertex)).collect();
        Graph::new(n, &edges)
    }

    pub fn complete(n: usize) -> Result<Graph> {
        if n == 0 {
            return Err(Error::InvalidParam("complete graph needs at least one vertex".into()));
        }
        let mut edges = Vec::new();
        for u in 0..n as Vertex {
            for v in u + 1..n as Vertex {
                edges.push((u, v));
            }
        }
        Graph::new(n, &edges)
    }

    /// Tree given by an explicit edge list; vertex count is inferred.
    pub fn tree_from_edges(edges: &[(Vertex, Vertex)]) -> Result<Graph> {
        let n = edges.iter().map(|&(u, v)| u.max(v) as usize + 1).max().unwrap_or(1);
        let g = Graph::new(n, edges)?;
        if !g.is_connected() || g.edge_count() != n - 1 {
            return Err(Error::InvalidParam("edge list does not describe a tree".into()));
        }
        Ok(g)
    }

    /// Join of two graphs: disjoint union plus all edges between the parts.
    pub fn join(g: &Graph, h: &Graph) -> Graph {
        let off = g.vertex_count() as Vertex;
        let mut edges = g.edges();
        for (u, v) in h.edges() {
            edges.push((u + off, v + off));
        }
        for u in 0..off {
            for v in 0..h.vertex_count() as Vertex {
                edges.push((u, v + off));
            }
        }
        Graph::new(g.vertex_count() + h.vertex_count(), &edges).expect("join of valid graphs")
    }

    const PHI: f64 = 1.618033988749895;

    /// Vertex coordinates defining the icosahedron labeling: the graph and
    /// the orientation data used by the icosahedral matching rule both come
    /// from this table.
    pub fn icosahedron_coords() -> [[f64; 3]; 12] {
        [
            [0.0, 1.0, PHI],
            [0.0, 1.0, -PHI],
            [0.0, -1.0, PHI],
            [0.0, -1.0, -PHI],
            [1.0, PHI, 0.0],
            [1.0, -PHI, 0.0],
            [-1.0, PHI, 0.0],
            [-1.0, -PHI, 0.0],
            [PHI, 0.0, 1.0],
            [PHI, 0.0, -1.0],
            [-PHI, 0.0, 1.0],
            [-PHI, 0.0, -1.0],
        ]
    }

    pub fn icosahedron() -> Graph {
        let coords = icosahedron_coords();
        let mut edges = Vec::new();
        for u in 0..12 {
            for v in u + 1..12 {
                let dsq: f64 = (0..3).map(|i| (coords[u][i] - coords[v][i]).powi(2)).sum();
                // Nearest pairs are at squared distance 4; the next shell is
                // at 4 + 4*phi.
                if dsq < 5.0 {
                    edges.push((u as Vertex, v as Vertex));
                }
            }
        }
        Graph::new(12, &edges).expect("icosahedron adjacency")
    }

    fn cayley_z4_z4(gens: &[(u32, u32)]) -> Graph {
        let mut edges = Vec::new();
        for a in 0..4u32 {
            for b in 0..4u32 {
                for &(x, y) in gens {
                    let u = 4 * a + b;
                    let v = 4 * ((a + x) % 4) + (b + y) % 4;
                    if u != v {
                        edges.push((u, v));
                    }
                }
            }
        }
        Graph::new(16, &edges).expect("Cayley graph on Z/4 x Z/4")
    }

    /// Rook's graph on the 4x4 grid: Cayley graph of Z/4 x Z/4 with
    /// generators (0,x) and (x,0) for x = 1,2,3.
    pub fn rook44() -> Graph {
        cayley_z4_z4(&[(0, 1), (0, 2), (0, 3), (1, 0), (2, 0), (3, 0)])
    }

    /// Shrikhande graph: Cayley graph of Z/4 x Z/4 with generators
    /// +-(0,1), +-(1,0), +-(1,1).
    pub fn shrikhande() -> Graph {
        cayley_z4_z4(&[(0, 1), (0, 3), (1, 0), (3, 0), (1, 1), (3, 3)])
    }

    /// Generalized Petersen graph GP(n, k): outer cycle 0..n, spokes to the
    /// inner vertices n..2n, inner edges at stride k.
    pub fn generalized_petersen(n: usize, k: usize) -> Result<Graph> {
        if n < 3 || k == 0 || 2 * k >= n {
            return Err(Error::InvalidParam("generalized Petersen needs n >= 3, 0 < k < n/2".into()));
        }
        let n32 = n as Vertex;
        let mut edges = Vec::new();
        for i in 0..n32 {
            edges.push((i, (i + 1) % n32));
            edges.push((i, n32 + i));
            edges.push((n32 + i, n32 + (i + k as Vertex) % n32));
        }
        Graph::new(2 * n, &edges)
    }

    pub fn dodecahedron() -> Graph {
        generalized_petersen(10, 2).expect("GP(10,2)")
    }

    pub fn desargues() -> Graph {
        generalized_petersen(10, 3).expect("GP(10,3)")
    }

    /// Six-vertex graph admitting a valid matching rule whose generated
    /// matching is not Morse. Labeled 1..6 to match the usual drawing.
    pub fn non_morse_example() -> Graph {
        let edges =
            [(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 5), (4, 5)];
        Graph::new(6, &edges)
            .expect("non-Morse example adjacency")
            .with_labels((1..=6).map(|i| i.to_string()).collect())
    }
}

/// Parses a graph specification string: a named family
/// (`icosahedron`, `rook44`, `shrikhande`, `dodecahedron`, `desargues`),
/// a parameterized constructor (`path(4)`, `cycle(5)`, `complete(3)`,
/// `tree(0-1,1-2)`, `join(a,b)`, `complement(a)`), or a path to an
/// edge-list file.
pub fn from_spec(spec: &str) -> Result<Graph> {
    let s = spec.trim();
    if let Some(i) = s.find('(') {
        if !s.ends_with(')') {
            return Err(Error::Parse(format!("unbalanced parentheses in `{}`", s)));
        }
        let name = &s[..i];
        let inner = &s[i + 1..s.len() - 1];
        return match name {
            "path" => named::path(parse_count(inner)?),
            "cycle" => named::cycle(parse_count(inner)?),
            "complete" => named::complete(parse_count(inner)?),
            "tree" => {
                let mut edges = Vec::new();
                for part in inner.split(',') {
                    let (a, b) = part
                        .trim()
                        .split_once('-')
                        .ok_or_else(|| Error::Parse(format!("bad tree edge `{}`", part)))?;
                    edges.push((parse_vertex(a)?, parse_vertex(b)?));
                }
                named::tree_from_edges(&edges)
            }
            "join" => {
                let parts = split_top_level(inner);
                if parts.len() != 2 {
                    return Err(Error::Parse("join takes exactly two graphs".into()));
                }
                Ok(named::join(&from_spec(parts[0])?, &from_spec(parts[1])?))
            }
            "complement" => Ok(from_spec(inner)?.complement()),
            _ => Err(Error::UnknownGraph(s.to_string())),
        };
    }
    match s {
        "icosahedron" => Ok(named::icosahedron()),
        "rook44" => Ok(named::rook44()),
        "shrikhande" => Ok(named::shrikhande()),
        "dodecahedron" => Ok(named::dodecahedron()),
        "desargues" => Ok(named::desargues()),
        _ => {
            if Path::new(s).exists() {
                read_edge_list(Path::new(s))
            } else {
                Err(Error::UnknownGraph(s.to_string()))
            }
        }
    }
}

fn parse_count(s: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| Error::Parse(format!("bad vertex count `{}`", s)))
}

fn parse_vertex(s: &str) -> Result<Vertex> {
    s.trim().parse().map_err(|_| Error::Parse(format!("bad vertex `{}`", s)))
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(s[start..].trim());
    parts
}

/// Reads the edge-list file format: a header line `n <count>` followed by
/// one `u v` pair per line, with `#` starting a comment. Vertices are
/// 0-based.
pub fn read_edge_list(path: &Path) -> Result<Graph> {
    parse_edge_list(&std::fs::read_to_string(path)?)
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for raw in text.lines() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match (&n, fields.as_slice()) {
            (None, ["n", count]) => n = Some(parse_count(count)?),
            (None, _) => {
                return Err(Error::Parse("edge list must start with a header `n <count>`".into()))
            }
            (Some(_), [u, v]) => edges.push((parse_vertex(u)?, parse_vertex(v)?)),
            (Some(_), _) => return Err(Error::Parse(format!("bad edge line `{}`", line))),
        }
    }
    let n = n.ok_or_else(|| Error::Parse("empty edge-list file".into()))?;
    Graph::new(n, &edges)
}

/// Diameter at most 2, and every path u - w - ... with d(u,v) = d(v,w) = 2
/// and d(u,w) = 1 admits a vertex adjacent to all of u, v, w.
pub fn is_pawful(g: &Graph, d: &DistanceMatrix) -> bool {
    if d.diameter() > 2 {
        return false;
    }
    let n = g.vertex_count() as Vertex;
    for u in 0..n {
        for w in 0..n {
            if d.dist(u, w) != 1 {
                continue;
            }
            'triple: for v in 0..n {
                if d.dist(u, v) != 2 || d.dist(v, w) != 2 {
                    continue;
                }
                for x in 0..n {
                    if d.dist(x, u) == 1 && d.dist(x, v) == 1 && d.dist(x, w) == 1 {
                        continue 'triple;
                    }
                }
                return false;
            }
        }
    }
    true
}

/// Unique shortest path between every pair of vertices.
pub fn is_geodetic(g: &Graph, d: &DistanceMatrix) -> bool {
    let n = g.vertex_count();
    let mut order: Vec<Vertex> = (0..n as Vertex).collect();
    let mut count = vec![0u64; n];
    for s in 0..n as Vertex {
        order.sort_by_key(|&v| d.dist(s, v));
        for x in count.iter_mut() {
            *x = 0;
        }
        count[s as usize] = 1;
        for &v in &order {
            if v == s {
                continue;
            }
            let dv = d.dist(s, v);
            let mut c = 0u64;
            for &u in g.neighbors(v) {
                if d.dist(s, u) + 1 == dv {
                    c += count[u as usize];
                }
            }
            if c != 1 {
                return false;
            }
            count[v as usize] = c;
        }
    }
    true
}

/// Ptolemy's inequality for every vertex quadruple:
/// d(x,y)d(z,w) + d(y,z)d(x,w) >= d(x,z)d(y,w).
pub fn is_ptolemaic(d: &DistanceMatrix) -> bool {
    let n = d.size() as Vertex;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let dxy = d.dist(x, y) as u64;
                let dyz = d.dist(y, z) as u64;
                let dxz = d.dist(x, z) as u64;
                for w in 0..n {
                    let lhs = dxy * d.dist(z, w) as u64 + dyz * d.dist(x, w) as u64;
                    if lhs < dxz * d.dist(y, w) as u64 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Geodesic concatenation characterization of ptolemaic graphs: whenever
/// y != z, y lies on a geodesic from x to z, and z lies on a geodesic from
/// y to w, the concatenation is a geodesic from x to w.
pub fn ptolemaic_char2(d: &DistanceMatrix) -> bool {
    let n = d.size() as Vertex;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if y == z || !d.between(x, y, z) {
                    continue;
                }
                for w in 0..n {
                    if d.between(y, z, w) && d.dist(x, y) + d.dist(y, z) + d.dist(z, w) != d.dist(x, w)
                    {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// The localized form of [`ptolemaic_char2`], restricted to
/// d(x,y) = d(y,z) = 1.
pub fn ptolemaic_char3(d: &DistanceMatrix) -> bool {
    let n = d.size() as Vertex;
    for x in 0..n {
        for y in 0..n {
            if d.dist(x, y) != 1 {
                continue;
            }
            for z in 0..n {
                if d.dist(y, z) != 1 || d.dist(x, z) != 2 {
                    continue;
                }
                for w in 0..n {
                    if d.between(y, z, w) && 2 + d.dist(z, w) != d.dist(x, w) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// No induced cycle of length four or more, decided by repeatedly deleting
/// simplicial vertices.
pub fn is_chordal(g: &Graph) -> bool {
    let n = g.vertex_count();
    let mut alive = vec![true; n];
    let mut remaining = n;
    while remaining > 0 {
        let mut found = None;
        'candidates: for v in 0..n {
            if !alive[v] {
                continue;
            }
            let nbrs: Vec<Vertex> =
                g.neighbors(v as Vertex).iter().copied().filter(|&u| alive[u as usize]).collect();
            for (i, &a) in nbrs.iter().enumerate() {
                for &b in &nbrs[i + 1..] {
                    if !g.has_edge(a, b) {
                        continue 'candidates;
                    }
                }
            }
            found = Some(v);
            break;
        }
        match found {
            Some(v) => {
                alive[v] = false;
                remaining -= 1;
            }
            None => return false,
        }
    }
    true
}

/// Every induced path is a shortest path, decided by pruning pendant
/// vertices and twins down to a single vertex.
pub fn is_distance_hereditary(g: &Graph) -> bool {
    let n = g.vertex_count();
    assert!(n <= 128, "distance-hereditary check supports at most 128 vertices");
    if n == 0 {
        return true;
    }
    let mut alive: u128 = if n == 128 { !0 } else { (1u128 << n) - 1 };
    let mut masks: Vec<u128> = (0..n)
        .map(|v| g.neighbors(v as Vertex).iter().fold(0u128, |m, &u| m | 1 << u))
        .collect();
    let mut remaining = n;
    while remaining > 1 {
        let mut removed = None;
        'outer: for v in 0..n {
            if alive & (1 << v) == 0 {
                continue;
            }
            let nv = masks[v] & alive;
            if nv.count_ones() == 1 {
                removed = Some(v);
                break;
            }
            for (u, &mask_u) in masks.iter().enumerate() {
                if u == v || alive & (1 << u) == 0 {
                    continue;
                }
                let nu = mask_u & alive;
                if nv & !(1 << u) == nu & !(1 << v) {
                    removed = Some(v);
                    break 'outer;
                }
            }
        }
        match removed {
            Some(v) => {
                alive &= !(1 << v);
                for m in masks.iter_mut() {
                    *m &= !(1 << v);
                }
                remaining -= 1;
            }
            None => return false,
        }
    }
    true
}

/// Every biconnected component induces a clique.
pub fn is_block_graph(g: &Graph) -> bool {
    for comp in biconnected_components(g) {
        for (i, &a) in comp.iter().enumerate() {
            for &b in &comp[i + 1..] {
                if !g.has_edge(a, b) {
                    return false;
                }
            }
        }
    }
    true
}

fn biconnected_components(g: &Graph) -> Vec<Vec<Vertex>> {
    struct State<'a> {
        g: &'a Graph,
        disc: Vec<i64>,
        low: Vec<i64>,
        time: i64,
        stack: Vec<(Vertex, Vertex)>,
        comps: Vec<Vec<Vertex>>,
    }
    fn dfs(s: &mut State, u: Vertex, parent: Option<Vertex>) {
        s.disc[u as usize] = s.time;
        s.low[u as usize] = s.time;
        s.time += 1;
        let mut parent_edges = 0;
        for &w in s.g.neighbors(u) {
            if s.disc[w as usize] < 0 {
                s.stack.push((u, w));
                dfs(s, w, Some(u));
                s.low[u as usize] = s.low[u as usize].min(s.low[w as usize]);
                if s.low[w as usize] >= s.disc[u as usize] {
                    let mut verts = HashSet::new();
                    while let Some(e) = s.stack.pop() {
                        verts.insert(e.0);
                        verts.insert(e.1);
                        if e == (u, w) {
                            break;
                        }
                    }
                    let mut comp: Vec<Vertex> = verts.into_iter().collect();
                    comp.sort_unstable();
                    s.comps.push(comp);
                }
            } else if Some(w) == parent && parent_edges == 0 {
                parent_edges += 1;
            } else if s.disc[w as usize] < s.disc[u as usize] {
                s.stack.push((u, w));
                s.low[u as usize] = s.low[u as usize].min(s.disc[w as usize]);
            }
        }
    }
    let n = g.vertex_count();
    let mut state =
        State { g, disc: vec![-1; n], low: vec![-1; n], time: 0, stack: Vec::new(), comps: Vec::new() };
    for v in 0..n as Vertex {
        if state.disc[v as usize] < 0 {
            dfs(&mut state, v, None);
        }
    }
    state.comps
}

/// All trees on `n` vertices up to isomorphism, enumerated by decoding
/// every Pruefer sequence and deduplicating on a canonical form.
pub fn all_trees(n: usize) -> Vec<Graph> {
    match n {
        0 => return Vec::new(),
        1 => return vec![Graph::new(1, &[]).unwrap()],
        2 => return vec![Graph::new(2, &[(0, 1)]).unwrap()],
        _ => {}
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut prufer = vec![0u32; n - 2];
    loop {
        let edges = prufer_decode(n, &prufer);
        if seen.insert(tree_canonical(n, &edges)) {
            out.push(Graph::new(n, &edges).unwrap());
        }
        let mut i = 0;
        loop {
            if i == prufer.len() {
                return out;
            }
            prufer[i] += 1;
            if (prufer[i] as usize) < n {
                break;
            }
            prufer[i] = 0;
            i += 1;
        }
    }
}

fn prufer_decode(n: usize, seq: &[u32]) -> Vec<(Vertex, Vertex)> {
    let mut degree = vec![1u32; n];
    for &s in seq {
        degree[s as usize] += 1;
    }
    let mut leaves: BTreeSet<u32> =
        (0..n as u32).filter(|&v| degree[v as usize] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &s in seq {
        let leaf = *leaves.iter().next().unwrap();
        leaves.remove(&leaf);
        edges.push((leaf, s));
        degree[s as usize] -= 1;
        if degree[s as usize] == 1 {
            leaves.insert(s);
        }
    }
    let rest: Vec<u32> = leaves.into_iter().collect();
    edges.push((rest[0], rest[1]));
    edges
}

fn tree_canonical(n: usize, edges: &[(Vertex, Vertex)]) -> String {
    let mut adj: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    fn encode(adj: &[Vec<Vertex>], root: Vertex, parent: Option<Vertex>) -> String {
        let mut parts: Vec<String> = adj[root as usize]
            .iter()
            .filter(|&&w| Some(w) != parent)
            .map(|&w| encode(adj, w, Some(root)))
            .collect();
        parts.sort();
        format!("({})", parts.concat())
    }
    // Tree centers are isomorphism-invariant, so rooting there canonizes.
    let mut degree: Vec<usize> = adj.iter().map(|a| a.len()).collect();
    let mut removed = vec![false; n];
    let mut remaining = n;
    let mut frontier: Vec<Vertex> =
        (0..n as Vertex).filter(|&v| degree[v as usize] <= 1).collect();
    while remaining > 2 {
        let mut next = Vec::new();
        for &v in &frontier {
            removed[v as usize] = true;
            remaining -= 1;
            for &w in &adj[v as usize] {
                if !removed[w as usize] {
                    degree[w as usize] -= 1;
                    if degree[w as usize] == 1 {
                        next.push(w);
                    }
                }
            }
        }
        frontier = next;
    }
    (0..n as Vertex)
        .filter(|&v| !removed[v as usize])
        .map(|c| encode(&adj, c, None))
        .min()
        .unwrap()
}

/// All connected graphs on `n` vertices up to isomorphism, grown one vertex
/// at a time: every connected graph has a non-cut vertex, so attaching a new
/// vertex to every nonempty neighbor subset of every smaller graph reaches
/// everything. Iso classes are keyed by the minimal adjacency bitmask over
/// all vertex permutations, so the cost caps the size at 8 vertices.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    assert!(n <= 8, "iso-class enumeration supports at most 8 vertices");
    if n == 0 {
        return Vec::new();
    }
    // Pairs (i,j) with i < j are indexed j*(j-1)/2 + i, so masks on fewer
    // vertices embed into larger ones unchanged.
    let pair_index = |i: usize, j: usize| j * (j - 1) / 2 + i;
    let mut level: Vec<u64> = vec![0];
    for size in 2..=n {
        let perms = permutations(size);
        let remaps: Vec<Vec<u64>> = perms
            .iter()
            .map(|p| {
                let mut map = vec![0u64; size * (size - 1) / 2];
                for j in 1..size {
                    for i in 0..j {
                        let (a, b) = (p[i].min(p[j]), p[i].max(p[j]));
                        map[pair_index(i, j)] = 1 << pair_index(a, b);
                    }
                }
                map
            })
            .collect();
        let canonical = |mask: u64| -> u64 {
            remaps
                .iter()
                .map(|map| {
                    let mut out = 0u64;
                    let mut m = mask;
                    while m != 0 {
                        let e = m.trailing_zeros() as usize;
                        out |= map[e];
                        m &= m - 1;
                    }
                    out
                })
                .min()
                .unwrap()
        };
        let base = pair_index(0, size - 1);
        let mut seen = HashSet::new();
        for &parent in &level {
            for subset in 1u64..1 << (size - 1) {
                seen.insert(canonical(parent | (subset << base)));
            }
        }
        level = seen.into_iter().collect();
        level.sort_unstable();
    }
    level
        .into_iter()
        .map(|mask| {
            let mut edges = Vec::new();
            for j in 1..n {
                for i in 0..j {
                    if mask & (1 << pair_index(i, j)) != 0 {
                        edges.push((i as Vertex, j as Vertex));
                    }
                }
            }
            Graph::new(n, &edges).expect("decoded mask is a valid graph")
        })
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    fn heap(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(cur.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, cur, out);
            if k.is_multiple_of(2) {
                cur.swap(i, k - 1);
            } else {
                cur.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_dedups_and_validates() {
        let g = Graph::new(3, &[(0, 1), (1, 0), (1, 2)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 0));
        assert!(matches!(Graph::new(2, &[(0, 0)]), Err(Error::SelfLoop(0))));
        assert!(matches!(Graph::new(2, &[(0, 5)]), Err(Error::VertexOutOfRange(5, 2))));
    }

    #[test]
    fn disconnected_flagged_and_named() {
        let g = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(!g.is_connected());
        match g.apsp() {
            Err(Error::Disconnected(a, b)) => assert_eq!((a, b), (0, 2)),
            other => panic!("expected disconnected error, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn connected_graph_census() {
        // Known census of connected graphs up to isomorphism.
        for (n, count) in [(1, 1), (2, 1), (3, 2), (4, 6), (5, 21), (6, 112)] {
            let graphs = connected_graphs(n);
            assert_eq!(graphs.len(), count, "census at n={n}");
            for g in &graphs {
                assert!(g.is_connected());
                assert_eq!(g.vertex_count(), n);
            }
        }
        let trees: usize =
            connected_graphs(6).iter().filter(|g| g.edge_count() == 5).count();
        assert_eq!(trees, all_trees(6).len());
    }

    #[test]
    fn cycle_distances() {
        let g = named::cycle(5).unwrap();
        let d = g.apsp().unwrap();
        assert_eq!(d.dist(0, 2), 2);
        assert_eq!(d.dist(0, 3), 2);
        assert_eq!(d.diameter(), 2);
        assert_eq!(d.profile(0), vec![1, 2, 2]);
    }

    #[test]
    fn metric_matches_adjacency() {
        for g in [named::cycle(6).unwrap(), named::icosahedron(), named::rook44()] {
            let d = g.apsp().unwrap();
            for u in 0..g.vertex_count() as Vertex {
                for v in 0..g.vertex_count() as Vertex {
                    assert_eq!(d.dist(u, v) == 1, g.has_edge(u, v));
                    assert_eq!(d.dist(u, v), d.dist(v, u));
                }
            }
        }
    }

    #[test]
    fn icosahedron_shape() {
        let g = named::icosahedron();
        assert_eq!(g.vertex_count(), 12);
        assert!((0..12).all(|v| g.degree(v) == 5));
        let d = g.apsp().unwrap();
        assert_eq!(d.diameter(), 3);
        for v in 0..12 {
            assert_eq!(d.profile(v), vec![1, 5, 5, 1]);
        }
    }

    #[test]
    fn strongly_regular_pair() {
        let rook = named::rook44();
        let shr = named::shrikhande();
        for g in [&rook, &shr] {
            assert_eq!(g.vertex_count(), 16);
            assert!((0..16).all(|v| g.degree(v) == 6));
            let d = g.apsp().unwrap();
            for v in 0..16 {
                assert_eq!(d.profile(v), vec![1, 6, 9]);
            }
        }
        // Same parameters, different graphs: the neighborhood of a vertex
        // splits into two triangles in the rook graph but forms a single
        // 6-cycle in the Shrikhande graph.
        let components = |g: &Graph, v: Vertex| {
            let nbrs: Vec<Vertex> = g.neighbors(v).to_vec();
            let mut seen = vec![false; nbrs.len()];
            let mut comps = 0;
            for i in 0..nbrs.len() {
                if seen[i] {
                    continue;
                }
                comps += 1;
                let mut stack = vec![i];
                seen[i] = true;
                while let Some(j) = stack.pop() {
                    for (k, &w) in nbrs.iter().enumerate() {
                        if !seen[k] && g.has_edge(nbrs[j], w) {
                            seen[k] = true;
                            stack.push(k);
                        }
                    }
                }
            }
            comps
        };
        assert_eq!(components(&rook, 0), 2);
        assert_eq!(components(&shr, 0), 1);
    }

    #[test]
    fn petersen_family_shape() {
        let dod = named::dodecahedron();
        let des = named::desargues();
        for g in [&dod, &des] {
            assert_eq!(g.vertex_count(), 20);
            assert!((0..20).all(|v| g.degree(v) == 3));
            let d = g.apsp().unwrap();
            for v in 0..20 {
                assert_eq!(d.profile(v), vec![1, 3, 6, 6, 3, 1]);
            }
        }
        // Desargues is bipartite, the dodecahedron is not.
        let bipartite = |g: &Graph| {
            let mut color = vec![-1i8; g.vertex_count()];
            color[0] = 0;
            let mut queue = std::collections::VecDeque::from([0 as Vertex]);
            while let Some(u) = queue.pop_front() {
                for &w in g.neighbors(u) {
                    if color[w as usize] < 0 {
                        color[w as usize] = 1 - color[u as usize];
                        queue.push_back(w);
                    } else if color[w as usize] == color[u as usize] {
                        return false;
                    }
                }
            }
            true
        };
        assert!(bipartite(&des));
        assert!(!bipartite(&dod));
    }

    #[test]
    fn non_morse_example_metric() {
        let g = named::non_morse_example();
        let d = g.apsp().unwrap();
        assert_eq!(d.dist(0, 3), 2);
        assert_eq!(d.dist(0, 4), 2);
        assert_eq!(d.dist(0, 5), 3);
        assert_eq!(d.dist(1, 5), 2);
        assert_eq!(g.label(0), "1");
        assert_eq!(g.label(5), "6");
    }

    #[test]
    fn complement_of_hexagon_is_prism() {
        let g = named::cycle(6).unwrap().complement();
        let d = g.apsp().unwrap();
        assert!((0..6).all(|v| g.degree(v) == 3));
        assert_eq!(d.diameter(), 2);
        assert!(g.has_edge(0, 2) && g.has_edge(0, 3) && !g.has_edge(0, 1));
        assert!(is_pawful(&g, &d));
    }

    #[test]
    fn pawful_cases() {
        let c5 = named::cycle(5).unwrap();
        assert!(!is_pawful(&c5, &c5.apsp().unwrap()));
        let c7c = named::cycle(7).unwrap().complement();
        assert!(is_pawful(&c7c, &c7c.apsp().unwrap()));
        let join = named::join(&named::path(2).unwrap(), &named::path(3).unwrap());
        assert!(is_pawful(&join, &join.apsp().unwrap()));
        let k4 = named::complete(4).unwrap();
        assert!(is_pawful(&k4, &k4.apsp().unwrap()));
        let p4 = named::path(4).unwrap();
        assert!(!is_pawful(&p4, &p4.apsp().unwrap()));
    }

    #[test]
    fn geodetic_cases() {
        for spec in ["path(5)", "cycle(5)", "complete(4)"] {
            let g = from_spec(spec).unwrap();
            assert!(is_geodetic(&g, &g.apsp().unwrap()), "{} should be geodetic", spec);
        }
        let c4 = named::cycle(4).unwrap();
        assert!(!is_geodetic(&c4, &c4.apsp().unwrap()));
        let rook = named::rook44();
        assert!(!is_geodetic(&rook, &rook.apsp().unwrap()));
    }

    #[test]
    fn ptolemaic_cases() {
        let c4 = named::cycle(4).unwrap();
        assert!(!is_ptolemaic(&c4.apsp().unwrap()));
        let c5 = named::cycle(5).unwrap();
        assert!(!is_ptolemaic(&c5.apsp().unwrap()));
        for spec in ["path(5)", "complete(5)", "tree(0-1,0-2,0-3)"] {
            let g = from_spec(spec).unwrap();
            assert!(is_ptolemaic(&g.apsp().unwrap()), "{} should be ptolemaic", spec);
        }
    }

    #[test]
    fn characterizations_agree_on_small_graphs() {
        // C_4 is distance-hereditary but not chordal; C_5 is neither;
        // trees and cliques are both.
        let c4 = named::cycle(4).unwrap();
        assert!(is_distance_hereditary(&c4) && !is_chordal(&c4));
        let c5 = named::cycle(5).unwrap();
        assert!(!is_distance_hereditary(&c5) && !is_chordal(&c5));
        for spec in ["path(6)", "complete(5)"] {
            let g = from_spec(spec).unwrap();
            let d = g.apsp().unwrap();
            assert!(is_chordal(&g) && is_distance_hereditary(&g));
            assert!(is_ptolemaic(&d) && ptolemaic_char2(&d) && ptolemaic_char3(&d));
        }
    }

    #[test]
    fn block_graph_cases() {
        // Two triangles sharing a vertex.
        let bowtie = Graph::new(5, &[(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)]).unwrap();
        assert!(is_block_graph(&bowtie));
        assert!(is_block_graph(&named::path(4).unwrap()));
        assert!(!is_block_graph(&named::cycle(4).unwrap()));
        let diamond = Graph::new(4, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(!is_block_graph(&diamond));
        let d = bowtie.apsp().unwrap();
        assert!(is_geodetic(&bowtie, &d) && is_ptolemaic(&d));
    }

    #[test]
    fn tree_enumeration_counts() {
        let expected = [1usize, 1, 1, 2, 3, 6, 11];
        for (i, &count) in expected.iter().enumerate() {
            let n = i + 1;
            let trees = all_trees(n);
            assert_eq!(trees.len(), count, "tree count for n = {}", n);
            for t in &trees {
                assert!(t.is_connected());
                assert_eq!(t.edge_count(), n - 1);
            }
        }
    }

    #[test]
    fn spec_parsing() {
        assert_eq!(from_spec("path(4)").unwrap().edge_count(), 3);
        assert_eq!(from_spec("join(path(1),path(1))").unwrap().edge_count(), 1);
        assert_eq!(from_spec("complement(cycle(6))").unwrap().degree(0), 3);
        assert_eq!(from_spec("tree(0-1,1-2,1-3)").unwrap().degree(1), 3);
        assert_eq!(from_spec("join(complete(2),complement(cycle(4)))").unwrap().vertex_count(), 6);
        assert!(from_spec("wat").is_err());
        assert!(from_spec("cycle(2)").is_err());
    }

    #[test]
    fn edge_list_round_trip() {
        let text = "# sample\nn 4\n0 1\n1 2 # tail comment\n2 3\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 3);
        assert!(parse_edge_list("0 1\n").is_err());
    }

    /// Subset-distance oracle for the pruning-based recognizer: a graph is
    /// distance-hereditary iff every connected induced subgraph preserves
    /// distances.
    fn dh_oracle(g: &Graph, d: &DistanceMatrix) -> bool {
        let n = g.vertex_count();
        for mask in 1u32..(1 << n) {
            let verts: Vec<Vertex> = (0..n as Vertex).filter(|&v| mask >> v & 1 == 1).collect();
            if verts.len() < 2 {
                continue;
            }
            let index = |v: Vertex| verts.iter().position(|&x| x == v).unwrap();
            let mut sub_edges = Vec::new();
            for (i, &u) in verts.iter().enumerate() {
                for &v in &verts[i + 1..] {
                    if g.has_edge(u, v) {
                        sub_edges.push((index(u) as Vertex, index(v) as Vertex));
                    }
                }
            }
            let sub = Graph::new(verts.len(), &sub_edges).unwrap();
            if !sub.is_connected() {
                continue;
            }
            let sd = sub.apsp().unwrap();
            for (i, &u) in verts.iter().enumerate() {
                for (j, &v) in verts.iter().enumerate() {
                    if sd.dist(i as Vertex, j as Vertex) != d.dist(u, v) {
                        return false;
                    }
                }
            }
        }
        true
    }

    #[test]
    fn dh_pruning_matches_subset_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20240817);
        let mut checked = 0;
        while checked < 60 {
            let n = rng.random_range(2..=6);
            let mut edges = Vec::new();
            for u in 0..n as Vertex {
                for v in u + 1..n as Vertex {
                    if rng.random_bool(0.5) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::new(n, &edges).unwrap();
            if !g.is_connected() {
                continue;
            }
            checked += 1;
            let d = g.apsp().unwrap();
            assert_eq!(is_distance_hereditary(&g), dh_oracle(&g, &d));
        }
    }

    #[test]
    fn ptolemaic_equivalences_on_random_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        while checked < 120 {
            let n = rng.random_range(2..=7);
            let mut edges = Vec::new();
            for u in 0..n as Vertex {
                for v in u + 1..n as Vertex {
                    if rng.random_bool(0.45) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::new(n, &edges).unwrap();
            if !g.is_connected() {
                continue;
            }
            checked += 1;
            let d = g.apsp().unwrap();
            let p1 = is_ptolemaic(&d);
            assert_eq!(p1, ptolemaic_char2(&d));
            assert_eq!(p1, ptolemaic_char3(&d));
            assert_eq!(p1, is_chordal(&g) && is_distance_hereditary(&g));
            assert_eq!(p1 && is_geodetic(&g, &d), is_block_graph(&g));
        }
    }
}
