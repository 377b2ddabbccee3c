//! Weighted undirected graphs with optional self-loops, plus the cut and
//! expansion primitives everything else is built on.
//!
//! Weights are nonnegative reals. The weighted degree of `i` is
//! `deg(i) = sum_j w(i,j)` with a self-loop counted once. A graph is
//! *unit-regular* when every degree equals 1 (tolerance 1e-9) and *lazy*
//! when every self-loop weight is at least 1/2 (tolerance 1e-12).

use crate::error::{Error, Result};

/// Tolerance for the unit-regularity flag.
pub const UNIT_REGULAR_TOL: f64 = 1e-9;
/// Tolerance for the laziness flag.
pub const LAZY_TOL: f64 = 1e-12;
/// Exhaustive subset enumeration is refused above this vertex count.
pub const MAX_BRUTE_N: usize = 24;
/// Dense matrix powering is refused above this vertex count.
pub const MAX_POWER_N: usize = 4096;
/// Explicit product-space materialization is refused above this size.
pub const MAX_EXPLICIT_SIZE: u64 = 1 << 20;

/// Undirected weighted graph stored as symmetric adjacency lists.
///
/// Each undirected edge `{i,j}` with `i != j` appears in both lists; a
/// self-loop appears once in the list of its vertex. Neighbor lists are
/// sorted by vertex index and carry strictly positive weights.
#[derive(Clone, Debug)]
pub struct WeightedGraph {
    n: usize,
    adj: Vec<Vec<(usize, f64)>>,
    deg: Vec<f64>,
}

impl WeightedGraph {
    /// Builds a graph from an edge list. Duplicate edges are summed,
    /// zero-weight edges dropped, negative weights rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("graph must have at least one vertex"));
        }
        let mut acc: std::collections::BTreeMap<(usize, usize), f64> = std::collections::BTreeMap::new();
        for &(u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::invalid(format!(
                    "edge ({u}, {v}) references a vertex outside 0..{n}"
                )));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::invalid(format!("edge ({u}, {v}) has invalid weight {w}")));
            }
            let key = (u.min(v), u.max(v));
            *acc.entry(key).or_insert(0.0) += w;
        }
        let mut adj = vec![Vec::new(); n];
        for (&(u, v), &w) in &acc {
            if w == 0.0 {
                continue;
            }
            adj[u].push((v, w));
            if u != v {
                adj[v].push((u, w));
            }
        }
        for list in &mut adj {
            list.sort_unstable_by_key(|&(j, _)| j);
        }
        let deg = adj
            .iter()
            .map(|list| list.iter().map(|&(_, w)| w).sum())
            .collect();
        Ok(WeightedGraph { n, adj, deg })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Weighted degree of `i` (self-loop counted once).
    pub fn degree(&self, i: usize) -> f64 {
        self.deg[i]
    }

    pub fn degrees(&self) -> &[f64] {
        &self.deg
    }

    /// Total volume `sum_i deg(i)`.
    pub fn volume(&self) -> f64 {
        self.deg.iter().sum()
    }

    /// Neighbors of `i` sorted by index, with positive weights.
    pub fn neighbors(&self, i: usize) -> &[(usize, f64)] {
        &self.adj[i]
    }

    /// Weight of the edge `{i,j}` (0 when absent).
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        match self.adj[i].binary_search_by_key(&j, |&(v, _)| v) {
            Ok(pos) => self.adj[i][pos].1,
            Err(_) => 0.0,
        }
    }

    pub fn edge_count(&self) -> usize {
        let loops = (0..self.n).filter(|&i| self.weight(i, i) > 0.0).count();
        let entries: usize = self.adj.iter().map(Vec::len).sum();
        (entries - loops) / 2 + loops
    }

    pub fn is_unit_regular(&self) -> bool {
        self.deg.iter().all(|&d| (d - 1.0).abs() <= UNIT_REGULAR_TOL)
    }

    pub fn is_lazy(&self) -> bool {
        (0..self.n).all(|i| self.weight(i, i) >= 0.5 - LAZY_TOL)
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for &(j, _) in &self.adj[i] {
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Two-colorability over positive-weight edges; any self-loop breaks it.
    pub fn is_bipartite(&self) -> bool {
        let mut color = vec![u8::MAX; self.n];
        for start in 0..self.n {
            if color[start] != u8::MAX {
                continue;
            }
            color[start] = 0;
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                for &(j, _) in &self.adj[i] {
                    if j == i {
                        return false;
                    }
                    if color[j] == u8::MAX {
                        color[j] = 1 - color[i];
                        queue.push_back(j);
                    } else if color[j] == color[i] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Canonical text form: header line `n <count>`, then one `u v w` line
    /// per edge with `u <= v`, sorted lexicographically.
    pub fn to_text(&self) -> String {
        let mut out = format!("n {}\n", self.n);
        for i in 0..self.n {
            for &(j, w) in &self.adj[i] {
                if j >= i {
                    out.push_str(&format!("{i} {j} {w}\n"));
                }
            }
        }
        out
    }
}

/// Parses the text format produced by [`WeightedGraph::to_text`].
///
/// Blank lines and lines starting with `#` are ignored. The first data line
/// must be `n <count>`; every following data line is `u v w`.
pub fn parse_graph(text: &str) -> Result<WeightedGraph> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = t.split_whitespace().collect();
        match n {
            None => {
                if fields.len() != 2 || fields[0] != "n" {
                    return Err(Error::Parse {
                        line,
                        message: "expected header `n <count>`".into(),
                    });
                }
                let count: usize = fields[1].parse().map_err(|_| Error::Parse {
                    line,
                    message: format!("invalid vertex count `{}`", fields[1]),
                })?;
                if count == 0 {
                    return Err(Error::Parse {
                        line,
                        message: "vertex count must be positive".into(),
                    });
                }
                n = Some(count);
            }
            Some(count) => {
                if fields.len() != 3 {
                    return Err(Error::Parse {
                        line,
                        message: "expected edge line `u v w`".into(),
                    });
                }
                let u: usize = fields[0].parse().map_err(|_| Error::Parse {
                    line,
                    message: format!("invalid vertex `{}`", fields[0]),
                })?;
                let v: usize = fields[1].parse().map_err(|_| Error::Parse {
                    line,
                    message: format!("invalid vertex `{}`", fields[1]),
                })?;
                let w: f64 = fields[2].parse().map_err(|_| Error::Parse {
                    line,
                    message: format!("invalid weight `{}`", fields[2]),
                })?;
                if u >= count || v >= count {
                    return Err(Error::Parse {
                        line,
                        message: format!("edge ({u}, {v}) outside 0..{count}"),
                    });
                }
                if !w.is_finite() || w < 0.0 {
                    return Err(Error::Parse {
                        line,
                        message: format!("invalid weight {w}"),
                    });
                }
                edges.push((u, v, w));
            }
        }
    }
    match n {
        Some(count) => WeightedGraph::from_edges(count, &edges),
        None => Err(Error::Parse {
            line: 0,
            message: "missing header `n <count>`".into(),
        }),
    }
}

/// A set of vertices of a specific graph, kept sorted, with its volume.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexSet {
    members: Vec<usize>,
    volume: f64,
}

impl VertexSet {
    pub fn new(g: &WeightedGraph, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut m: Vec<usize> = members.into_iter().collect();
        m.sort_unstable();
        m.dedup();
        if let Some(&v) = m.last() {
            if v >= g.n() {
                return Err(Error::invalid(format!("vertex {v} outside 0..{}", g.n())));
            }
        }
        // explicit fold: `Sum` seeds with -0.0, which would leak a negative
        // zero volume for the empty set
        let volume = m.iter().fold(0.0, |acc, &i| acc + g.degree(i));
        Ok(VertexSet { members: m, volume })
    }

    pub fn singleton(g: &WeightedGraph, v: usize) -> Result<Self> {
        Self::new(g, [v])
    }

    pub fn full(g: &WeightedGraph) -> Self {
        VertexSet {
            members: (0..g.n()).collect(),
            volume: g.volume(),
        }
    }

    pub fn empty() -> Self {
        VertexSet {
            members: Vec::new(),
            volume: 0.0,
        }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn complement(&self, g: &WeightedGraph) -> VertexSet {
        let members: Vec<usize> = (0..g.n()).filter(|v| !self.contains(*v)).collect();
        let volume = members.iter().map(|&i| g.degree(i)).sum();
        VertexSet { members, volume }
    }

    /// Membership mask, handy for repeated lookups.
    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &v in &self.members {
            m[v] = true;
        }
        m
    }
}

/// Ordered cut weight `w(S,T) = chi_S^T A chi_T`: the sum of `w(i,j)` over
/// vertex pairs `(i,j)` in `S x T`. A shared self-loop contributes once; a
/// non-loop edge with both endpoints in `S ∩ T` contributes in both
/// directions. Symmetric in its arguments.
pub fn cut_weight(g: &WeightedGraph, s: &VertexSet, t: &VertexSet) -> f64 {
    let t_mask = t.mask(g.n());
    let mut acc = 0.0;
    for &i in s.members() {
        for &(j, w) in g.neighbors(i) {
            if t_mask[j] {
                acc += w;
            }
        }
    }
    acc
}

/// Incoming weight vector `d_S(i) = w(i, S)` for every vertex `i`.
pub fn incoming_vector(g: &WeightedGraph, s: &VertexSet) -> Vec<f64> {
    let mut d = vec![0.0; g.n()];
    for &j in s.members() {
        for &(i, w) in g.neighbors(j) {
            d[i] += w;
        }
    }
    d
}

/// Edge expansion `phi(S) = w(S, V \ S) / vol(S)` for a nonempty `S` with
/// `vol(S) <= vol(V)/2`. Equals `1 - w(S,S)/vol(S)`.
pub fn expansion(g: &WeightedGraph, s: &VertexSet) -> Result<f64> {
    if s.is_empty() {
        return Err(Error::domain("expansion of the empty set is undefined"));
    }
    if s.volume() > g.volume() / 2.0 + 1e-9 {
        return Err(Error::domain(format!(
            "expansion needs vol(S) <= vol(V)/2, got {} > {}",
            s.volume(),
            g.volume() / 2.0
        )));
    }
    let internal = cut_weight(g, s, s);
    Ok(1.0 - internal / s.volume())
}

/// View of the current subset inside [`for_each_subset`].
pub(crate) struct SubsetView<'a> {
    pub members: &'a [usize],
    pub volume: f64,
    /// `w(S,S)` in the ordered-pair convention.
    pub internal_weight: f64,
    /// `w(i, S)` for every vertex `i`.
    pub incoming: &'a [f64],
}

struct SubsetScan<'g, F> {
    g: &'g WeightedGraph,
    max_size: usize,
    max_volume: f64,
    members: Vec<usize>,
    incoming: Vec<f64>,
    /// Saved `incoming` entries, restored verbatim on backtrack so the
    /// float state is bit-identical no matter what the scan visited in
    /// between (plain `-=` would leave cancellation dust).
    undo: Vec<f64>,
    volume: f64,
    internal: f64,
    visit: F,
}

impl<'g, F: FnMut(&SubsetView)> SubsetScan<'g, F> {
    fn recurse(&mut self, v: usize) {
        if v == self.g.n() {
            if !self.members.is_empty() {
                (self.visit)(&SubsetView {
                    members: &self.members,
                    volume: self.volume,
                    internal_weight: self.internal,
                    incoming: &self.incoming,
                });
            }
            return;
        }
        if self.members.len() < self.max_size
            && self.volume + self.g.degree(v) <= self.max_volume + 1e-9
        {
            let saved_internal = self.internal;
            let saved_volume = self.volume;
            let undo_base = self.undo.len();
            self.internal += 2.0 * self.incoming[v] + self.g.weight(v, v);
            self.volume += self.g.degree(v);
            self.members.push(v);
            for &(i, w) in self.g.neighbors(v) {
                self.undo.push(self.incoming[i]);
                self.incoming[i] += w;
            }
            self.recurse(v + 1);
            for &(i, _) in self.g.neighbors(v).iter().rev() {
                self.incoming[i] = self.undo.pop().expect("undo stack underflow");
            }
            debug_assert_eq!(self.undo.len(), undo_base);
            self.members.pop();
            self.volume = saved_volume;
            self.internal = saved_internal;
        }
        self.recurse(v + 1);
    }
}

/// Enumerates every nonempty subset with at most `max_size` members and
/// volume at most `max_volume (+1e-9)`, maintaining members, volume,
/// internal weight, and the full incoming vector incrementally.
///
/// Intended for exhaustive certification; callers must enforce the
/// [`MAX_BRUTE_N`] guard themselves.
pub(crate) fn for_each_subset<F: FnMut(&SubsetView)>(
    g: &WeightedGraph,
    max_size: usize,
    max_volume: f64,
    visit: F,
) {
    let mut scan = SubsetScan {
        g,
        max_size,
        max_volume,
        members: Vec::with_capacity(g.n()),
        incoming: vec![0.0; g.n()],
        undo: Vec::with_capacity(g.n() * g.n().min(MAX_BRUTE_N)),
        volume: 0.0,
        internal: 0.0,
        visit,
    };
    scan.recurse(0);
}

/// Minimum expansion over nonempty sets with `vol(S) <= delta * vol(V)`,
/// by exhaustive enumeration. Ties prefer smaller sets, then lexicographically
/// smaller membership.
pub fn small_set_expansion(g: &WeightedGraph, delta: f64) -> Result<(f64, VertexSet)> {
    if g.n() > MAX_BRUTE_N {
        return Err(Error::capacity(format!(
            "exhaustive small-set scan needs n <= {MAX_BRUTE_N}, got {}",
            g.n()
        )));
    }
    if !(delta > 0.0 && delta <= 0.5) {
        return Err(Error::invalid(format!("delta must lie in (0, 1/2], got {delta}")));
    }
    let cap = delta * g.volume();
    let mut best: Option<(f64, Vec<usize>)> = None;
    for_each_subset(g, g.n(), cap, |view| {
        if view.volume <= 0.0 {
            return;
        }
        let phi = 1.0 - view.internal_weight / view.volume;
        let better = match &best {
            None => true,
            Some((bphi, bmem)) => {
                phi < *bphi
                    || (phi == *bphi
                        && (view.members.len() < bmem.len()
                            || (view.members.len() == bmem.len() && view.members < bmem.as_slice())))
            }
        };
        if better {
            best = Some((phi, view.members.to_vec()));
        }
    });
    match best {
        Some((phi, members)) => Ok((phi, VertexSet::new(g, members)?)),
        None => Err(Error::domain(format!(
            "no nonempty set has volume <= {delta} * vol(V)"
        ))),
    }
}

/// `t`-step walk graph: adjacency `A^t` of a unit-regular graph, computed by
/// dense binary exponentiation. Memory and time are cubic in `n`; guarded by
/// [`MAX_POWER_N`].
pub fn graph_power(g: &WeightedGraph, t: u32) -> Result<WeightedGraph> {
    if t == 0 {
        return Err(Error::invalid("power must be at least 1"));
    }
    if g.n() > MAX_POWER_N {
        return Err(Error::capacity(format!(
            "dense powering needs n <= {MAX_POWER_N}, got {}",
            g.n()
        )));
    }
    if !g.is_unit_regular() {
        return Err(Error::domain("graph powering requires a unit-regular graph"));
    }
    let n = g.n();
    let mut base = vec![0.0f64; n * n];
    for i in 0..n {
        for &(j, w) in g.neighbors(i) {
            base[i * n + j] = w;
        }
    }
    // acc starts as identity
    let mut acc = vec![0.0f64; n * n];
    for i in 0..n {
        acc[i * n + i] = 1.0;
    }
    let mut e = t;
    let mut cur = base;
    loop {
        if e & 1 == 1 {
            acc = mat_mul(&acc, &cur, n);
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        cur = mat_mul(&cur, &cur, n);
    }
    let mut max_asym = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            max_asym = max_asym.max((acc[i * n + j] - acc[j * n + i]).abs());
        }
    }
    if max_asym > 1e-9 {
        return Err(Error::domain(format!(
            "power lost symmetry beyond tolerance (max asymmetry {max_asym:.3e})"
        )));
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i..n {
            let w = if i == j {
                acc[i * n + i].max(0.0)
            } else {
                (0.5 * (acc[i * n + j] + acc[j * n + i])).max(0.0)
            };
            if w > 0.0 {
                edges.push((i, j, w));
            }
        }
    }
    WeightedGraph::from_edges(n, &edges)
}

fn mat_mul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut c = vec![0.0f64; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0.0 {
                continue;
            }
            let row = &b[k * n..(k + 1) * n];
            let out = &mut c[i * n..(i + 1) * n];
            for j in 0..n {
                out[j] += aik * row[j];
            }
        }
    }
    c
}

/// Lazy reweighting: `w'(i,j) = (1-alpha) w(i,j)` off the diagonal and
/// `w'(i,i) = (1-alpha) w(i,i) + alpha`. Unit-regularity is preserved; the
/// result is lazy whenever `alpha >= 1/2`.
pub fn lazify(g: &WeightedGraph, alpha: f64) -> Result<WeightedGraph> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::invalid(format!("alpha must lie in [0, 1), got {alpha}")));
    }
    let mut edges = Vec::new();
    for i in 0..g.n() {
        let mut loop_w = alpha;
        for &(j, w) in g.neighbors(i) {
            if j == i {
                loop_w += (1.0 - alpha) * w;
            } else if j > i {
                edges.push((i, j, (1.0 - alpha) * w));
            }
        }
        if loop_w > 0.0 {
            edges.push((i, i, loop_w));
        }
    }
    WeightedGraph::from_edges(g.n(), &edges)
}

/// Built-in unit-regular families.
#[derive(Clone, Debug, PartialEq)]
pub enum GraphFamily {
    /// Cycle on `n >= 3` vertices, every edge weight 1/2.
    Cycle { n: usize },
    /// Complete graph on `n >= 2` vertices, edge weight 1/(n-1).
    Complete { n: usize },
    /// Complete bipartite graph with equal halves of size `half >= 1`,
    /// edge weight 1/half.
    CompleteBipartite { half: usize },
    /// Path on `n >= 2` vertices with edge weight 1/2 and self-loops of
    /// weight 1/2 at both endpoints.
    Path { n: usize },
    /// Two `clique`-cliques joined by one bridge edge of weight `bridge`;
    /// clique edges carry `(1-bridge)/(clique-1)` and non-bridge vertices a
    /// self-loop of weight `bridge` to stay unit-regular.
    Dumbbell { clique: usize, bridge: f64 },
    /// Explicit Hamming cube `[k]^dim` under the eps-noise kernel.
    HypercubeExplicit { k: u32, dim: u32, eps: f64 },
}

/// Materializes one of the built-in families.
pub fn generate(family: &GraphFamily) -> Result<WeightedGraph> {
    match *family {
        GraphFamily::Cycle { n } => {
            if n < 3 {
                return Err(Error::invalid("cycle needs n >= 3"));
            }
            let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, 0.5)).collect();
            WeightedGraph::from_edges(n, &edges)
        }
        GraphFamily::Complete { n } => {
            if n < 2 {
                return Err(Error::invalid("complete graph needs n >= 2"));
            }
            let w = 1.0 / (n as f64 - 1.0);
            let mut edges = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    edges.push((i, j, w));
                }
            }
            WeightedGraph::from_edges(n, &edges)
        }
        GraphFamily::CompleteBipartite { half } => {
            if half < 1 {
                return Err(Error::invalid("bipartite half must be >= 1"));
            }
            let w = 1.0 / half as f64;
            let mut edges = Vec::new();
            for i in 0..half {
                for j in 0..half {
                    edges.push((i, half + j, w));
                }
            }
            WeightedGraph::from_edges(2 * half, &edges)
        }
        GraphFamily::Path { n } => {
            if n < 2 {
                return Err(Error::invalid("path needs n >= 2"));
            }
            let mut edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1, 0.5)).collect();
            edges.push((0, 0, 0.5));
            edges.push((n - 1, n - 1, 0.5));
            WeightedGraph::from_edges(n, &edges)
        }
        GraphFamily::Dumbbell { clique, bridge } => {
            if clique < 2 {
                return Err(Error::invalid("dumbbell cliques need >= 2 vertices"));
            }
            if !(bridge > 0.0 && bridge < 1.0) {
                return Err(Error::invalid(format!(
                    "bridge weight must lie in (0, 1), got {bridge}"
                )));
            }
            let k = clique;
            let w = (1.0 - bridge) / (k as f64 - 1.0);
            let mut edges = Vec::new();
            for side in 0..2 {
                let off = side * k;
                for i in 0..k {
                    for j in (i + 1)..k {
                        edges.push((off + i, off + j, w));
                    }
                }
            }
            edges.push((0, k, bridge));
            for v in 0..2 * k {
                if v != 0 && v != k {
                    edges.push((v, v, bridge));
                }
            }
            WeightedGraph::from_edges(2 * k, &edges)
        }
        GraphFamily::HypercubeExplicit { k, dim, eps } => {
            let model = crate::hypercube::HypercubeModel::new(k, dim, eps)?;
            crate::hypercube::ExplicitHypercube::new(&model)?.to_graph()
        }
    }
}
