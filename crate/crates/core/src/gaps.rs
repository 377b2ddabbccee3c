//! Combinatorial and vertex-expansion gap measures with checkable
//! certificates.
//!
//! The combinatorial gap minimizes `1 - w(S,T)/|S|` over equal-size pairs
//! with `|S| = |T| <= n/2`; for a fixed `S` the best `T` is the top-`|S|`
//! prefix of the incoming-weight vector, so the exhaustive scan only
//! enumerates `S`. Larger graphs fall back to an alternating fractional
//! heuristic whose witnesses are still exactly checkable.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::curve::curve_of_values;
use crate::error::{Error, Result};
use crate::graph::{
    cut_weight, expansion, for_each_subset, incoming_vector, small_set_expansion, VertexSet,
    WeightedGraph, MAX_BRUTE_N,
};

/// Default restart count for the fractional fallback.
pub const DEFAULT_RESTARTS: usize = 20;
/// Default alternation cap per restart for the fractional fallback.
pub const DEFAULT_ITER_CAP: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GapMethod {
    Exhaustive,
    Heuristic,
}

/// Witness achieving a gap certificate's value.
#[derive(Clone, Debug)]
pub enum GapWitness {
    Sets { s: VertexSet, t: VertexSet },
    Fractional { chi_s: Vec<f64>, chi_t: Vec<f64> },
}

/// A gap value together with the witness that attains it. `evaluate`
/// recomputes the value from the witness alone, so certificates remain
/// checkable independently of how they were found.
#[derive(Clone, Debug)]
pub struct GapCertificate {
    pub value: f64,
    pub method: GapMethod,
    pub witness: GapWitness,
}

impl GapCertificate {
    /// Recomputes `1 - w(S,T)/vol(S)` from the stored witness.
    pub fn evaluate(&self, g: &WeightedGraph) -> Result<f64> {
        match &self.witness {
            GapWitness::Sets { s, t } => {
                if s.is_empty() {
                    return Err(Error::domain("certificate with an empty witness set"));
                }
                Ok(1.0 - cut_weight(g, s, t) / s.volume())
            }
            GapWitness::Fractional { chi_s, chi_t } => {
                if chi_s.len() != g.n() || chi_t.len() != g.n() {
                    return Err(Error::invalid("witness length does not match the graph"));
                }
                let vol: f64 = chi_s
                    .iter()
                    .zip(g.degrees())
                    .map(|(c, d)| c * d)
                    .sum();
                if vol <= 0.0 {
                    return Err(Error::domain("fractional witness has zero volume"));
                }
                Ok(1.0 - quad_form(g, chi_s, chi_t) / vol)
            }
        }
    }

    /// Whether the stored value matches the witness within 1e-12.
    pub fn reproduces(&self, g: &WeightedGraph) -> Result<bool> {
        Ok((self.evaluate(g)? - self.value).abs() <= 1e-12)
    }
}

/// `chi_s^T A chi_t` over the adjacency.
fn quad_form(g: &WeightedGraph, x: &[f64], y: &[f64]) -> f64 {
    let mut total = 0.0;
    for j in 0..g.n() {
        if y[j] == 0.0 {
            continue;
        }
        for &(i, w) in g.neighbors(j) {
            total += w * x[i] * y[j];
        }
    }
    total
}

/// `A x` over the adjacency.
fn adj_times(g: &WeightedGraph, x: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; g.n()];
    for j in 0..g.n() {
        if x[j] == 0.0 {
            continue;
        }
        for &(i, w) in g.neighbors(j) {
            out[i] += w * x[j];
        }
    }
    out
}

/// Sum of the `s` largest entries (scratch is clobbered). Summed in
/// descending order so equal-value multisets give bit-identical totals
/// regardless of their layout.
fn top_sum(scratch: &mut [f64], s: usize) -> f64 {
    debug_assert!(s >= 1 && s <= scratch.len());
    if s < scratch.len() {
        scratch.select_nth_unstable_by(s - 1, |a, b| b.partial_cmp(a).unwrap());
    }
    scratch[..s].sort_unstable_by(|a, b| b.partial_cmp(a).unwrap());
    scratch[..s].iter().sum()
}

/// Exhaustive minimum of `1 - (top-|S| of d_S) / |S|` over nonempty `S`
/// with `|S| <= max_size`. Ties prefer smaller, then lexicographically
/// smaller `S`.
fn exhaustive_gap(g: &WeightedGraph, max_size: usize) -> Result<GapCertificate> {
    if max_size == 0 {
        return Err(Error::domain("no admissible set size"));
    }
    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut scratch = vec![0.0; g.n()];
    for_each_subset(g, max_size, f64::INFINITY, |view| {
        let s = view.members.len();
        scratch.copy_from_slice(view.incoming);
        let value = 1.0 - top_sum(&mut scratch, s) / s as f64;
        let better = match &best {
            None => true,
            Some((bv, bm)) => {
                value < *bv
                    || (value == *bv
                        && (s < bm.len() || (s == bm.len() && view.members < bm.as_slice())))
            }
        };
        if better {
            best = Some((value, view.members.to_vec()));
        }
    });
    let (value, members) = best.ok_or_else(|| Error::domain("graph admits no candidate set"))?;
    let s_set = VertexSet::new(g, members)?;
    // best response T: the |S| vertices of largest incoming weight,
    // ties by index
    let incoming = incoming_vector(g, &s_set);
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by(|&a, &b| incoming[b].partial_cmp(&incoming[a]).unwrap().then(a.cmp(&b)));
    let mut t_members: Vec<usize> = order[..s_set.size()].to_vec();
    t_members.sort_unstable();
    let t_set = VertexSet::new(g, t_members)?;
    Ok(GapCertificate {
        value,
        method: GapMethod::Exhaustive,
        witness: GapWitness::Sets { s: s_set, t: t_set },
    })
}

/// Combinatorial gap over pairs with `|S| = |T| <= n/2`. Exhaustive up to
/// [`MAX_BRUTE_N`] vertices, after which it silently degrades to the
/// fractional heuristic (check the certificate's `method`).
pub fn comb_gap(g: &WeightedGraph) -> Result<GapCertificate> {
    comb_gap_delta(g, 0.5)
}

/// Combinatorial gap restricted to `|S| <= delta * n`, `delta` in (0, 1/2].
pub fn comb_gap_delta(g: &WeightedGraph, delta: f64) -> Result<GapCertificate> {
    if !g.is_unit_regular() {
        return Err(Error::domain("combinatorial gap requires a unit-regular graph"));
    }
    if !(delta > 0.0 && delta <= 0.5) {
        return Err(Error::invalid(format!("delta must lie in (0, 1/2], got {delta}")));
    }
    let max_size = (delta * g.n() as f64 + 1e-9).floor() as usize;
    if max_size == 0 {
        return Err(Error::domain(format!(
            "delta = {delta} admits no nonempty set on {} vertices",
            g.n()
        )));
    }
    if g.n() <= MAX_BRUTE_N {
        exhaustive_gap(g, max_size)
    } else {
        fractional_gap(g, delta, DEFAULT_RESTARTS, DEFAULT_ITER_CAP, 0)
    }
}

/// Alternating-maximization heuristic over fractional indicators at fixed
/// volume. Works on any graph with positive volume; the certificate value
/// can undershoot the combinatorial optimum (fractional pairs are a
/// strictly larger search space), so treat it as a checkable candidate,
/// not a bound.
pub fn comb_gap_fractional(
    g: &WeightedGraph,
    restarts: usize,
    iter_cap: usize,
    seed: u64,
) -> Result<GapCertificate> {
    fractional_gap(g, 0.5, restarts, iter_cap, seed)
}

fn fractional_gap(
    g: &WeightedGraph,
    delta: f64,
    restarts: usize,
    iter_cap: usize,
    seed: u64,
) -> Result<GapCertificate> {
    if restarts == 0 || iter_cap == 0 {
        return Err(Error::invalid("restart and iteration counts must be >= 1"));
    }
    if g.volume() <= 0.0 {
        return Err(Error::domain("fractional gap needs a graph with positive volume"));
    }
    let vmax = delta * g.volume();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // deterministic volume targets first (each integer and the cap itself),
    // then random fractions of the cap
    let mut targets: Vec<f64> = (1..=vmax.floor() as usize).map(|v| v as f64).collect();
    if targets.last() != Some(&vmax) {
        targets.push(vmax);
    }
    let mut best: Option<(f64, Vec<f64>, Vec<f64>)> = None;
    for r in 0..restarts {
        // sweep the deterministic targets first, then keep revisiting them
        // with fresh scores, interleaved with random volumes
        let v = if r < targets.len() {
            targets[r]
        } else if r % 2 == 0 {
            vmax * (1.0 - rng.gen::<f64>())
        } else {
            targets[r % targets.len()]
        };
        let scores: Vec<f64> = (0..g.n()).map(|_| rng.gen::<f64>()).collect();
        let mut chi_s = fractional_prefix(g, &scores, v);
        let mut chi_t = fractional_prefix(g, &adj_times(g, &chi_s), v);
        let mut prev = 1.0 - quad_form(g, &chi_s, &chi_t) / v;
        for _ in 0..iter_cap {
            chi_s = fractional_prefix(g, &adj_times(g, &chi_t), v);
            chi_t = fractional_prefix(g, &adj_times(g, &chi_s), v);
            let value = 1.0 - quad_form(g, &chi_s, &chi_t) / v;
            if prev - value < 1e-13 {
                break;
            }
            prev = value;
        }
        let vol: f64 = chi_s.iter().zip(g.degrees()).map(|(c, d)| c * d).sum();
        let value = 1.0 - quad_form(g, &chi_s, &chi_t) / vol;
        if best.as_ref().map_or(true, |(bv, _, _)| value < *bv) {
            best = Some((value, chi_s, chi_t));
        }
    }
    let (value, chi_s, chi_t) = best.unwrap();
    Ok(GapCertificate {
        value,
        method: GapMethod::Heuristic,
        witness: GapWitness::Fractional { chi_s, chi_t },
    })
}

/// Greedy fractional indicator of volume `v`: vertices by `score/deg`
/// descending (ties by index), the last one taken fractionally.
fn fractional_prefix(g: &WeightedGraph, scores: &[f64], v: f64) -> Vec<f64> {
    let mut order: Vec<usize> = (0..g.n()).filter(|&i| g.degree(i) > 0.0).collect();
    order.sort_by(|&a, &b| {
        let da = scores[a] / g.degree(a);
        let db = scores[b] / g.degree(b);
        db.partial_cmp(&da).unwrap().then(a.cmp(&b))
    });
    let mut chi = vec![0.0; g.n()];
    let mut rem = v;
    for i in order {
        if rem <= 0.0 {
            break;
        }
        let take = g.degree(i).min(rem);
        chi[i] = take / g.degree(i);
        rem -= take;
    }
    chi
}

/// Vertex-expansion profile of one set.
#[derive(Clone, Copy, Debug)]
pub struct VertexExpansionProfile {
    /// Minimal (fractional) boundary amount that covers half the outgoing
    /// cut weight; 0 under the zero-cut convention.
    pub n_half: f64,
    /// `min(n_half / vol(S), 1)`; defined as 1 when the cut is zero.
    pub phi_v: f64,
    /// Edge expansion of the set.
    pub expansion: f64,
    /// `expansion * phi_v`.
    pub psi_product: f64,
}

struct ProfileParts {
    n_half: f64,
    phi_v: f64,
    expansion: f64,
    psi: f64,
}

fn set_form_n_half(members: &[usize], incoming: &[f64], cut: f64) -> f64 {
    let target = cut / 2.0;
    let mut mask = vec![false; incoming.len()];
    for &v in members {
        mask[v] = true;
    }
    let mut order: Vec<usize> = (0..incoming.len()).filter(|&i| !mask[i]).collect();
    order.sort_by(|&a, &b| incoming[b].partial_cmp(&incoming[a]).unwrap().then(a.cmp(&b)));
    let mut acc = 0.0;
    let mut count = 0.0;
    for v in order {
        let d = incoming[v];
        if d <= 0.0 {
            break;
        }
        if acc + d >= target - 1e-15 {
            count += ((target - acc) / d).max(0.0);
            return count;
        }
        acc += d;
        count += 1.0;
    }
    count
}

fn curve_form_n_half(g: &WeightedGraph, incoming: &[f64], vol: f64, cut: f64) -> Result<f64> {
    let target = cut / 2.0;
    if target <= 1e-15 {
        return Ok(0.0);
    }
    let curve = curve_of_values(g, incoming)?;
    let (xs, ys) = curve.breakpoints();
    let base_mass = curve.eval(vol);
    for i in 1..xs.len() {
        if xs[i] <= vol {
            continue;
        }
        if ys[i] - base_mass >= target - 1e-15 {
            let x0 = vol.max(xs[i - 1]);
            let y0 = curve.eval(x0);
            let need = target - (y0 - base_mass);
            if need <= 1e-15 {
                return Ok(x0 - vol);
            }
            let slope = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]);
            return Ok(x0 - vol + need / slope);
        }
    }
    Err(Error::domain(
        "half the cut weight is unreachable along the incoming-weight curve",
    ))
}

fn profile_parts(
    g: &WeightedGraph,
    members: &[usize],
    vol: f64,
    internal: f64,
    incoming: &[f64],
    use_curve_form: bool,
) -> Result<ProfileParts> {
    let cut = (vol - internal).max(0.0);
    let expansion = cut / vol;
    if cut <= 1e-15 {
        // zero-cut convention: nothing to cover, but no vertex boundary
        // separates the set either
        return Ok(ProfileParts {
            n_half: 0.0,
            phi_v: 1.0,
            expansion,
            psi: 0.0,
        });
    }
    let n_half = if use_curve_form {
        curve_form_n_half(g, incoming, vol, cut)?
    } else {
        set_form_n_half(members, incoming, cut)
    };
    let phi_v = (n_half / vol).min(1.0);
    Ok(ProfileParts {
        n_half,
        phi_v,
        expansion,
        psi: expansion * phi_v,
    })
}

fn profile_of(g: &WeightedGraph, s: &VertexSet, use_curve_form: bool) -> Result<VertexExpansionProfile> {
    expansion(g, s)?; // validates nonempty and the volume cap
    let incoming = incoming_vector(g, s);
    let internal = cut_weight(g, s, s);
    let parts = profile_parts(g, s.members(), s.volume(), internal, &incoming, use_curve_form)?;
    Ok(VertexExpansionProfile {
        n_half: parts.n_half,
        phi_v: parts.phi_v,
        expansion: parts.expansion,
        psi_product: parts.psi,
    })
}

/// Vertex-expansion profile of `S`, picking the curve form on lazy graphs
/// and the greedy boundary form otherwise.
pub fn vertex_profile(g: &WeightedGraph, s: &VertexSet) -> Result<VertexExpansionProfile> {
    profile_of(g, s, g.is_lazy())
}

/// Greedy boundary form: fractionally count complement vertices by
/// incoming weight until half the cut is covered.
pub fn vertex_profile_set_form(g: &WeightedGraph, s: &VertexSet) -> Result<VertexExpansionProfile> {
    profile_of(g, s, false)
}

/// Curve form: walk the incoming-weight curve past width `vol(S)` until
/// half the cut is accumulated. Guaranteed to exist on lazy graphs.
pub fn vertex_profile_curve_form(
    g: &WeightedGraph,
    s: &VertexSet,
) -> Result<VertexExpansionProfile> {
    profile_of(g, s, true)
}

/// Certified dominance pair `(1 + phi_v(S), 1 - phi(S)/2)` of one set.
pub fn certified_pair(g: &WeightedGraph, s: &VertexSet) -> Result<(f64, f64)> {
    let p = vertex_profile(g, s)?;
    Ok((1.0 + p.phi_v, 1.0 - p.expansion / 2.0))
}

/// Graph-level certified pair `(1 + min_S phi_v(S), 1 - min_S phi(S)/2)`
/// over nonempty sets of at most half the volume. Exhaustive; requires
/// `n <= MAX_BRUTE_N`.
pub fn graph_certified_pair(g: &WeightedGraph) -> Result<(f64, f64)> {
    if g.n() > MAX_BRUTE_N {
        return Err(Error::capacity(format!(
            "exhaustive profile scan needs n <= {MAX_BRUTE_N}, got {}",
            g.n()
        )));
    }
    if g.volume() <= 0.0 {
        return Err(Error::domain("graph has no volume"));
    }
    let use_curve = g.is_lazy();
    let mut min_phi_v = f64::INFINITY;
    let mut min_phi = f64::INFINITY;
    let mut failure: Option<Error> = None;
    for_each_subset(g, g.n(), g.volume() / 2.0, |view| {
        if failure.is_some() || view.volume <= 0.0 {
            return;
        }
        match profile_parts(
            g,
            view.members,
            view.volume,
            view.internal_weight,
            view.incoming,
            use_curve,
        ) {
            Ok(parts) => {
                min_phi_v = min_phi_v.min(parts.phi_v);
                min_phi = min_phi.min(parts.expansion);
            }
            Err(e) => failure = Some(e),
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    if !min_phi_v.is_finite() {
        return Err(Error::domain("no set fits under half the volume"));
    }
    Ok((1.0 + min_phi_v, 1.0 - min_phi / 2.0))
}

/// Minimum of `phi(S) * phi_v(S)` over nonempty sets of at most half the
/// volume, with the attaining set (ties prefer smaller, then lexicographic).
pub fn psi_graph(g: &WeightedGraph) -> Result<(f64, VertexSet)> {
    if g.n() > MAX_BRUTE_N {
        return Err(Error::capacity(format!(
            "exhaustive profile scan needs n <= {MAX_BRUTE_N}, got {}",
            g.n()
        )));
    }
    if g.volume() <= 0.0 {
        return Err(Error::domain("graph has no volume"));
    }
    let use_curve = g.is_lazy();
    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut failure: Option<Error> = None;
    for_each_subset(g, g.n(), g.volume() / 2.0, |view| {
        if failure.is_some() || view.volume <= 0.0 {
            return;
        }
        let parts = match profile_parts(
            g,
            view.members,
            view.volume,
            view.internal_weight,
            view.incoming,
            use_curve,
        ) {
            Ok(p) => p,
            Err(e) => {
                failure = Some(e);
                return;
            }
        };
        let better = match &best {
            None => true,
            Some((bv, bm)) => {
                parts.psi < *bv
                    || (parts.psi == *bv
                        && (view.members.len() < bm.len()
                            || (view.members.len() == bm.len() && view.members < bm.as_slice())))
            }
        };
        if better {
            best = Some((parts.psi, view.members.to_vec()));
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    match best {
        Some((value, members)) => Ok((value, VertexSet::new(g, members)?)),
        None => Err(Error::domain("no set fits under half the volume")),
    }
}

/// Outcome of testing `C(d_S, a * vol(S)) <= b * vol(S)` over every
/// nonempty set of at most half the volume.
#[derive(Clone, Debug)]
pub struct HypothesisCheck {
    pub holds: bool,
    /// Largest `C(d_S, a vol) - b vol` seen (positive means violated).
    pub max_violation: f64,
    /// Set attaining the largest violation value.
    pub worst_set: Option<VertexSet>,
}

/// Exhaustively tests the dominance hypothesis at `(a, b)`. Requires
/// `n <= MAX_BRUTE_N`.
pub fn curve_hypothesis_check(g: &WeightedGraph, a: f64, b: f64) -> Result<HypothesisCheck> {
    if g.n() > MAX_BRUTE_N {
        return Err(Error::capacity(format!(
            "exhaustive hypothesis scan needs n <= {MAX_BRUTE_N}, got {}",
            g.n()
        )));
    }
    if !(a.is_finite() && a > 0.0 && b.is_finite() && b > 0.0) {
        return Err(Error::invalid("hypothesis parameters must be positive and finite"));
    }
    if g.volume() <= 0.0 {
        return Err(Error::domain("graph has no volume"));
    }
    let mut worst: Option<(f64, Vec<usize>)> = None;
    let mut failure: Option<Error> = None;
    for_each_subset(g, g.n(), g.volume() / 2.0, |view| {
        if failure.is_some() || view.volume <= 0.0 {
            return;
        }
        let curve = match curve_of_values(g, view.incoming) {
            Ok(c) => c,
            Err(e) => {
                failure = Some(e);
                return;
            }
        };
        let violation = curve.eval(a * view.volume) - b * view.volume;
        if worst.as_ref().map_or(true, |(wv, _)| violation > *wv) {
            worst = Some((violation, view.members.to_vec()));
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    match worst {
        Some((max_violation, members)) => Ok(HypothesisCheck {
            holds: max_violation <= 1e-9,
            max_violation,
            worst_set: Some(VertexSet::new(g, members)?),
        }),
        None => Err(Error::domain("no set fits under half the volume")),
    }
}

/// Pair `(comb_gap at delta/2, phi_delta / 2)`: the restricted gap on the
/// left is never below the right-hand side (within tolerance) on
/// unit-regular graphs.
pub fn relation_check(g: &WeightedGraph, delta: f64) -> Result<(f64, f64)> {
    let gap = comb_gap_delta(g, delta / 2.0)?;
    let (phi, _) = small_set_expansion(g, delta)?;
    Ok((gap.value, phi / 2.0))
}
