//! Random-walk steps, mixing, and sweep-cut local partitioning.

use crate::error::{Error, Result};
use crate::graph::{cut_weight, VertexSet, WeightedGraph};

/// Nonnegative mass assignment on the vertices. Not necessarily normalized.
#[derive(Clone, Debug, PartialEq)]
pub struct MassVector {
    entries: Vec<f64>,
}

impl MassVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("mass vector must have at least one entry"));
        }
        for (i, &x) in entries.iter().enumerate() {
            if !x.is_finite() || x < 0.0 {
                return Err(Error::invalid(format!("entry {i} has invalid mass {x}")));
            }
        }
        Ok(MassVector { entries })
    }

    /// Point mass at `v`.
    pub fn indicator(n: usize, v: usize) -> Result<Self> {
        if v >= n {
            return Err(Error::invalid(format!("vertex {v} outside 0..{n}")));
        }
        let mut entries = vec![0.0; n];
        entries[v] = 1.0;
        Ok(MassVector { entries })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("mass vector must have at least one entry"));
        }
        Ok(MassVector {
            entries: vec![1.0 / n as f64; n],
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, i: usize) -> f64 {
        self.entries[i]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().sum()
    }

    pub fn is_probability(&self) -> bool {
        (self.total() - 1.0).abs() <= 1e-12
    }

    /// L1 distance to the uniform probability vector.
    pub fn l1_distance_to_uniform(&self) -> f64 {
        let n = self.entries.len() as f64;
        self.entries.iter().map(|&x| (x - 1.0 / n).abs()).sum()
    }

    /// Mass on a set of vertices.
    pub fn mass_on(&self, s: &VertexSet) -> f64 {
        s.members().iter().map(|&i| self.entries[i]).sum()
    }
}

/// One walk step `(Ap)(i) = sum_j w(i,j) p(j)`. Conserves total mass on
/// unit-regular graphs.
pub fn walk_step(g: &WeightedGraph, p: &MassVector) -> Result<MassVector> {
    if p.len() != g.n() {
        return Err(Error::invalid(format!(
            "mass vector length {} does not match n = {}",
            p.len(),
            g.n()
        )));
    }
    let mut out = vec![0.0; g.n()];
    for j in 0..g.n() {
        let pj = p.get(j);
        if pj == 0.0 {
            continue;
        }
        for &(i, w) in g.neighbors(j) {
            out[i] += w * pj;
        }
    }
    MassVector::new(out)
}

/// Result of a mixing-time search up to a step cap.
#[derive(Clone, Debug, PartialEq)]
pub enum MixingOutcome {
    /// First `t` at which every point-mass start is within L1 distance 1/4
    /// of uniform.
    Mixed(usize),
    /// Not mixed within the cap (carried back to the caller).
    Unmixed(usize),
}

/// Smallest `t` with `max_v || A^t chi_v - u ||_1 <= 1/4`, or `Unmixed(cap)`.
/// Requires a unit-regular graph so that uniform is stationary.
pub fn mixing_time(g: &WeightedGraph, cap: usize) -> Result<MixingOutcome> {
    if !g.is_unit_regular() {
        return Err(Error::domain("mixing time requires a unit-regular graph"));
    }
    if cap == 0 {
        return Err(Error::invalid("step cap must be >= 1"));
    }
    let n = g.n();
    let mut columns: Vec<MassVector> = (0..n).map(|v| MassVector::indicator(n, v).unwrap()).collect();
    let worst = |cols: &[MassVector]| -> f64 {
        cols.iter()
            .map(|c| c.l1_distance_to_uniform())
            .fold(0.0, f64::max)
    };
    if worst(&columns) <= 0.25 {
        return Ok(MixingOutcome::Mixed(0));
    }
    for t in 1..=cap {
        for c in &mut columns {
            *c = walk_step(g, c)?;
        }
        if worst(&columns) <= 0.25 {
            return Ok(MixingOutcome::Mixed(t));
        }
    }
    Ok(MixingOutcome::Unmixed(cap))
}

/// Best prefix cut of the density ordering of `p`.
///
/// Vertices are ranked by `p(i)/deg(i)` (ties by index); among the prefixes
/// with at most `max_size` members and volume at most `vol(V)/2`, the one
/// of minimum expansion is returned (first such prefix on ties).
pub fn sweep_cut(g: &WeightedGraph, p: &MassVector, max_size: usize) -> Result<(VertexSet, f64)> {
    if p.len() != g.n() {
        return Err(Error::invalid("mass vector length does not match the graph"));
    }
    if max_size == 0 || 2 * max_size > g.n() {
        return Err(Error::invalid(format!(
            "max_size must lie in 1..=n/2, got {max_size} with n = {}",
            g.n()
        )));
    }
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by(|&a, &b| {
        let da = p.get(a) / g.degree(a);
        let db = p.get(b) / g.degree(b);
        db.partial_cmp(&da).unwrap().then(a.cmp(&b))
    });
    let half = g.volume() / 2.0 + 1e-9;
    let mut incoming = vec![0.0; g.n()];
    let mut volume = 0.0;
    let mut internal = 0.0;
    let mut best: Option<(f64, usize)> = None;
    for (len, &v) in order.iter().take(max_size).enumerate() {
        internal += 2.0 * incoming[v] + g.weight(v, v);
        volume += g.degree(v);
        for &(i, w) in g.neighbors(v) {
            incoming[i] += w;
        }
        if volume > half || volume <= 0.0 {
            continue;
        }
        let phi = 1.0 - internal / volume;
        if best.map_or(true, |(bphi, _)| phi < bphi) {
            best = Some((phi, len + 1));
        }
    }
    match best {
        Some((phi, len)) => Ok((VertexSet::new(g, order[..len].iter().copied())?, phi)),
        None => Err(Error::domain("no admissible sweep prefix")),
    }
}

/// Output of walk-based local partitioning.
#[derive(Clone, Debug)]
pub struct LocalPartition {
    pub set: VertexSet,
    pub expansion: f64,
    /// Walk step at which the best sweep was found.
    pub steps: usize,
}

/// Runs the walk from a point mass and sweeps after every step, keeping the
/// best cut seen (earliest step on ties).
pub fn rw_local_partition(
    g: &WeightedGraph,
    seed_vertex: usize,
    t_max: usize,
    max_size: usize,
) -> Result<LocalPartition> {
    if t_max == 0 {
        return Err(Error::invalid("step budget must be >= 1"));
    }
    let mut p = MassVector::indicator(g.n(), seed_vertex)?;
    let mut best: Option<LocalPartition> = None;
    for t in 1..=t_max {
        p = walk_step(g, &p)?;
        let (set, phi) = sweep_cut(g, &p, max_size)?;
        if best.as_ref().map_or(true, |b| phi < b.expansion) {
            best = Some(LocalPartition {
                set,
                expansion: phi,
                steps: t,
            });
        }
    }
    Ok(best.expect("t_max >= 1 always yields a sweep"))
}

/// Default walk budget for local partitioning: `4 * ceil(log2 n)`.
pub fn default_walk_budget(n: usize) -> usize {
    let lg = (usize::BITS - n.max(2).next_power_of_two().leading_zeros() - 1) as usize;
    4 * lg.max(1)
}

/// Expansion of the complement-aware cut `(S, V \ S)` of a sweep result,
/// re-derived from scratch; used by tests to validate incremental sweeps.
pub fn expansion_of_cut(g: &WeightedGraph, s: &VertexSet) -> Result<f64> {
    let boundary = cut_weight(g, s, &s.complement(g));
    if s.is_empty() {
        return Err(Error::domain("empty cut"));
    }
    Ok(boundary / s.volume())
}
