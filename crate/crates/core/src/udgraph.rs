//! Finite simple graphs, the graph families used by the constructions, exact
//! chromatic numbers, and unit-distance graphs of point sets on a sphere.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sphere_geom::{GeomError, SphereParams, SpherePoint, Vec3};

/// Default chord tolerance for deciding that two points are at unit distance.
pub const DEFAULT_UNIT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("edge ({0}, {1}) references a vertex outside 0..{2}")]
    VertexOutOfRange(usize, usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("edge ({i}, {j}) has chord {chord}, not within {tol} of 1")]
    NotUnit {
        i: usize,
        j: usize,
        chord: f64,
        tol: f64,
    },
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphRepr> for Graph {
    type Error = GraphError;
    fn try_from(repr: GraphRepr) -> Result<Self, GraphError> {
        Graph::new(repr.n, repr.edges.into_iter().map(|[a, b]| (a, b)))
    }
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> Self {
        GraphRepr {
            n: g.n,
            edges: g.edges.into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }
}

impl Graph {
    /// Builds a graph, keeping the edge order given. Edges are stored with the
    /// smaller endpoint first.
    pub fn new<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(GraphError::VertexOutOfRange(a, b, n));
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(GraphError::DuplicateEdge(e.0, e.1));
            }
            out.push(e);
        }
        Ok(Graph { n, edges: out })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn adjacency(&self) -> Vec<Vec<bool>> {
        let mut adj = vec![vec![false; self.n]; self.n];
        for &(a, b) in &self.edges {
            adj[a][b] = true;
            adj[b][a] = true;
        }
        adj
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut nb = vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            nb[a].push(b);
            nb[b].push(a);
        }
        nb
    }

    /// Same graph with vertex `v` renamed to `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Graph, GraphError> {
        if perm.len() != self.n {
            return Err(GraphError::LengthMismatch {
                expected: self.n,
                got: perm.len(),
            });
        }
        Graph::new(self.n, self.edges.iter().map(|&(a, b)| (perm[a], perm[b])))
    }

    pub fn is_triangle_free(&self) -> bool {
        let adj = self.adjacency();
        self.edges
            .iter()
            .all(|&(a, b)| (0..self.n).all(|c| !(adj[a][c] && adj[b][c])))
    }
}

/// Odd cycle `C_{2k+1}`.
pub fn gen_odd_cycle(k: usize) -> Graph {
    assert!(k >= 1, "odd cycle needs k >= 1");
    gen_cycle(2 * k + 1)
}

pub fn gen_cycle(m: usize) -> Graph {
    assert!(m >= 3, "cycle needs at least 3 vertices");
    Graph::new(m, (0..m).map(|i| (i, (i + 1) % m))).expect("cycle is simple")
}

/// Odd cycle of length `m = 2k+1` on vertices `0..m` with a pendant vertex
/// `i + m` attached to each cycle vertex `i`.
pub fn gen_pendant_cycle(k: usize) -> Graph {
    assert!(k >= 1, "pendant cycle needs k >= 1");
    let m = 2 * k + 1;
    let cycle = (0..m).map(|i| (i, (i + 1) % m));
    let pendants = (0..m).map(|i| (i, i + m));
    Graph::new(2 * m, cycle.chain(pendants)).expect("pendant cycle is simple")
}

/// Mycielskian of `C₅`: outer cycle `0..5`, shadows `5..10`, hub `10`.
pub fn gen_groetzsch() -> Graph {
    let mut edges: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
    for i in 0..5 {
        edges.push((5 + i, (i + 1) % 5));
        edges.push((5 + i, (i + 4) % 5));
    }
    for i in 0..5 {
        edges.push((5 + i, 10));
    }
    Graph::new(11, edges).expect("Grötzsch graph is simple")
}

pub fn gen_complete(n: usize) -> Graph {
    assert!(n >= 1, "complete graph needs n >= 1");
    Graph::new(n, (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))))
        .expect("complete graph is simple")
}

/// True iff every edge joins two different colors.
pub fn verify_coloring(g: &Graph, colors: &[usize]) -> Result<bool, GraphError> {
    if colors.len() != g.n() {
        return Err(GraphError::LengthMismatch {
            expected: g.n(),
            got: colors.len(),
        });
    }
    Ok(g.edges().iter().all(|&(a, b)| colors[a] != colors[b]))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChromaticResult {
    pub chi: usize,
    pub coloring: Vec<usize>,
}

/// Exact chromatic number with a witness coloring.
///
/// Lower bound from a greedy clique, upper bound from greedy DSATUR, then a
/// DSATUR-ordered branch and bound. Colors are introduced in increasing order,
/// which fixes the first vertex to color 0 and breaks color symmetry.
pub fn chromatic_number(g: &Graph) -> ChromaticResult {
    let n = g.n();
    if n == 0 {
        return ChromaticResult {
            chi: 0,
            coloring: Vec::new(),
        };
    }
    let adj = g.adjacency();
    let nbrs = g.neighbors();
    let lower = greedy_clique(&adj, &nbrs).len().max(1);
    let mut best = dsatur_greedy(&nbrs, n);
    let mut best_k = count_colors(&best);

    if best_k > lower {
        let mut search = BranchAndBound {
            nbrs: &nbrs,
            colors: vec![usize::MAX; n],
            // sat_count[v][c]: number of colored neighbors of v with color c
            sat_count: vec![vec![0; n + 1]; n],
            saturation: vec![0; n],
            best_k,
            best: best.clone(),
            lower,
        };
        search.descend(0, 0);
        best_k = search.best_k;
        best = search.best;
    }
    debug_assert!(verify_coloring(g, &best).unwrap());
    ChromaticResult {
        chi: best_k,
        coloring: best,
    }
}

fn count_colors(colors: &[usize]) -> usize {
    colors.iter().copied().max().map_or(0, |c| c + 1)
}

fn greedy_clique(adj: &[Vec<bool>], nbrs: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut best = Vec::new();
    for start in 0..n {
        let mut clique = vec![start];
        let mut cand: Vec<usize> = nbrs[start].clone();
        cand.sort_by_key(|&v| (std::cmp::Reverse(nbrs[v].len()), v));
        for v in cand {
            if clique.iter().all(|&u| adj[u][v]) {
                clique.push(v);
            }
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    best
}

fn dsatur_greedy(nbrs: &[Vec<usize>], n: usize) -> Vec<usize> {
    let mut colors = vec![usize::MAX; n];
    for _ in 0..n {
        let v = pick_dsatur(nbrs, &colors, |v| {
            let mut used: Vec<usize> = nbrs[v]
                .iter()
                .filter_map(|&u| (colors[u] != usize::MAX).then_some(colors[u]))
                .collect();
            used.sort_unstable();
            used.dedup();
            used.len()
        });
        let mut c = 0;
        while nbrs[v].iter().any(|&u| colors[u] == c) {
            c += 1;
        }
        colors[v] = c;
    }
    colors
}

/// Uncolored vertex of maximum saturation, then maximum uncolored degree,
/// then lowest index.
fn pick_dsatur(
    nbrs: &[Vec<usize>],
    colors: &[usize],
    saturation: impl Fn(usize) -> usize,
) -> usize {
    let mut best: Option<(usize, usize, usize)> = None;
    for v in 0..colors.len() {
        if colors[v] != usize::MAX {
            continue;
        }
        let s = saturation(v);
        let d = nbrs[v].iter().filter(|&&u| colors[u] == usize::MAX).count();
        match best {
            Some((_, bs, bd)) if (s, d) <= (bs, bd) => {}
            _ => best = Some((v, s, d)),
        }
    }
    best.expect("an uncolored vertex remains").0
}

struct BranchAndBound<'a> {
    nbrs: &'a [Vec<usize>],
    colors: Vec<usize>,
    sat_count: Vec<Vec<usize>>,
    saturation: Vec<usize>,
    best_k: usize,
    best: Vec<usize>,
    lower: usize,
}

impl BranchAndBound<'_> {
    fn descend(&mut self, colored: usize, used: usize) {
        if self.best_k == self.lower {
            return;
        }
        if colored == self.colors.len() {
            if used < self.best_k {
                self.best_k = used;
                self.best = self.colors.clone();
            }
            return;
        }
        let sat = &self.saturation;
        let v = pick_dsatur(self.nbrs, &self.colors, |v| sat[v]);
        // colors 0..used are existing; `used` opens a new class
        for c in 0..=used {
            if c + 1 >= self.best_k {
                break;
            }
            if self.sat_count[v][c] > 0 {
                continue;
            }
            self.assign(v, c);
            self.descend(colored + 1, used.max(c + 1));
            self.unassign(v, c);
            if self.best_k == self.lower {
                return;
            }
        }
    }

    fn assign(&mut self, v: usize, c: usize) {
        self.colors[v] = c;
        for i in 0..self.nbrs[v].len() {
            let u = self.nbrs[v][i];
            if self.sat_count[u][c] == 0 {
                self.saturation[u] += 1;
            }
            self.sat_count[u][c] += 1;
        }
    }

    fn unassign(&mut self, v: usize, c: usize) {
        self.colors[v] = usize::MAX;
        for i in 0..self.nbrs[v].len() {
            let u = self.nbrs[v][i];
            self.sat_count[u][c] -= 1;
            if self.sat_count[u][c] == 0 {
                self.saturation[u] -= 1;
            }
        }
    }
}

/// A graph together with points on a sphere realizing every edge as a unit chord.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EmbeddedRepr", into = "EmbeddedRepr")]
pub struct EmbeddedGraph {
    graph: Graph,
    points: Vec<SpherePoint>,
    unit_tol: f64,
}

#[derive(Serialize, Deserialize)]
struct EmbeddedRepr {
    n: usize,
    edges: Vec<[usize; 2]>,
    r: f64,
    points: Vec<[f64; 3]>,
    unit_tol: f64,
}

impl TryFrom<EmbeddedRepr> for EmbeddedGraph {
    type Error = GraphError;
    fn try_from(repr: EmbeddedRepr) -> Result<Self, GraphError> {
        let graph = Graph::new(repr.n, repr.edges.into_iter().map(|[a, b]| (a, b)))?;
        let params = SphereParams::new(repr.r)?;
        let points = repr
            .points
            .into_iter()
            .map(|v| params.point(Vec3::from(v)))
            .collect::<Result<Vec<_>, _>>()?;
        EmbeddedGraph::new(graph, points, repr.unit_tol)
    }
}

impl From<EmbeddedGraph> for EmbeddedRepr {
    fn from(e: EmbeddedGraph) -> Self {
        let r = e.radius();
        EmbeddedRepr {
            n: e.graph.n,
            edges: e.graph.edges.iter().map(|&(a, b)| [a, b]).collect(),
            r,
            points: e
                .points
                .iter()
                .map(|p| [p.v().x, p.v().y, p.v().z])
                .collect(),
            unit_tol: e.unit_tol,
        }
    }
}

impl EmbeddedGraph {
    pub fn new(graph: Graph, points: Vec<SpherePoint>, unit_tol: f64) -> Result<Self, GraphError> {
        if points.len() != graph.n() {
            return Err(GraphError::LengthMismatch {
                expected: graph.n(),
                got: points.len(),
            });
        }
        if let Some(first) = points.first() {
            for p in &points {
                if (p.r() - first.r()).abs() > 1e-12 * first.r() {
                    return Err(GeomError::RadiusMismatch(first.r(), p.r()).into());
                }
            }
        }
        for &(i, j) in graph.edges() {
            let chord = points[i].chord(&points[j]);
            if (chord - 1.0).abs() > unit_tol {
                return Err(GraphError::NotUnit {
                    i,
                    j,
                    chord,
                    tol: unit_tol,
                });
            }
        }
        Ok(EmbeddedGraph {
            graph,
            points,
            unit_tol,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn points(&self) -> &[SpherePoint] {
        &self.points
    }

    pub fn unit_tol(&self) -> f64 {
        self.unit_tol
    }

    pub fn radius(&self) -> f64 {
        self.points.first().map_or(f64::NAN, |p| p.r())
    }

    /// Largest `|chord − 1|` over the edges.
    pub fn max_edge_error(&self) -> f64 {
        self.graph
            .edges()
            .iter()
            .map(|&(i, j)| (self.points[i].chord(&self.points[j]) - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Wavefront OBJ: one `v` line per vertex and one `l` line per edge.
    pub fn to_obj(&self) -> String {
        let mut s = String::new();
        for p in &self.points {
            let v = p.v();
            s.push_str(&format!("v {:.17e} {:.17e} {:.17e}\n", v.x, v.y, v.z));
        }
        for &(a, b) in self.graph.edges() {
            s.push_str(&format!("l {} {}\n", a + 1, b + 1));
        }
        s
    }
}

/// Graph with an edge between every pair of points whose chord is within
/// `tol` of 1.
pub fn unit_distance_graph(points: &[SpherePoint], tol: f64) -> Result<EmbeddedGraph, GraphError> {
    let n = points.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if (points[i].chord(&points[j]) - 1.0).abs() <= tol {
                edges.push((i, j));
            }
        }
    }
    EmbeddedGraph::new(Graph::new(n, edges)?, points.to_vec(), tol)
}
