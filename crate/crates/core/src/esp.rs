//! Evolving-set process: exact one-step transition laws, the gauge that
//! certifies per-step volume decay, the truncated-mass identity, and the
//! volume-biased sampler used for local partitioning.
//!
//! One step from `S` draws a uniform threshold `U` in (0, 1] and moves to
//! `{y : w(y, S)/deg(y) >= U}`. Distinct incoming densities therefore give
//! a finite atom list: each successor is a prefix of the density order and
//! its probability is the width of the threshold interval selecting it.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{cut_weight, incoming_vector, VertexSet, WeightedGraph};

/// Incoming-weight view of a set: `d_S(i) = w(i, S)`, the normalized
/// densities `d_S(i)/deg(i)`, and the vertex order by density descending
/// (ties by index).
#[derive(Clone, Debug)]
pub struct IncomingProfile {
    values: Vec<f64>,
    densities: Vec<f64>,
    order: Vec<usize>,
}

impl IncomingProfile {
    pub fn new(g: &WeightedGraph, s: &VertexSet) -> Self {
        let values = incoming_vector(g, s);
        let densities: Vec<f64> = values
            .iter()
            .enumerate()
            .map(|(i, &v)| if g.degree(i) > 0.0 { v / g.degree(i) } else { 0.0 })
            .collect();
        let mut order: Vec<usize> = (0..g.n()).collect();
        order.sort_by(|&a, &b| {
            densities[b]
                .partial_cmp(&densities[a])
                .unwrap()
                .then(a.cmp(&b))
        });
        IncomingProfile {
            values,
            densities,
            order,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn density(&self, i: usize) -> f64 {
        self.densities[i]
    }

    /// Vertices by density descending, ties by index.
    pub fn order(&self) -> &[usize] {
        &self.order
    }
}

/// One atom of the transition law: thresholds in `(u_lo, u_hi]` produce
/// `successor`, which happens with probability `u_hi - u_lo`.
#[derive(Clone, Debug)]
pub struct EspAtom {
    pub u_lo: f64,
    pub u_hi: f64,
    pub successor: VertexSet,
    pub probability: f64,
}

fn atom(g: &WeightedGraph, members: &[usize], lo: f64, hi: f64) -> Result<EspAtom> {
    Ok(EspAtom {
        u_lo: lo,
        u_hi: hi,
        successor: VertexSet::new(g, members.iter().copied())?,
        probability: hi - lo,
    })
}

/// Exact transition law from `S`: atoms in decreasing threshold order,
/// successors nested (each a prefix of the density order), probabilities
/// summing to 1. The empty successor leads whenever the top density is
/// below 1; the law of the empty set is a single self-atom.
pub fn esp_transition_distribution(g: &WeightedGraph, s: &VertexSet) -> Result<Vec<EspAtom>> {
    let profile = IncomingProfile::new(g, s);
    let order = profile.order();
    let mut atoms = Vec::new();
    let mut hi = 1.0;
    let mut pos = 0usize;
    while pos < g.n() {
        let v = profile.density(order[pos]);
        if v <= 0.0 {
            break;
        }
        if v < hi {
            atoms.push(atom(g, &order[..pos], v, hi)?);
            hi = v;
        }
        while pos < g.n() && profile.density(order[pos]) == v {
            pos += 1;
        }
    }
    atoms.push(atom(g, &order[..pos], 0.0, hi)?);
    Ok(atoms)
}

/// Successor of `S` at an explicit threshold `u` in (0, 1].
pub fn esp_step_at(g: &WeightedGraph, s: &VertexSet, u: f64) -> Result<VertexSet> {
    if !(u > 0.0 && u <= 1.0) {
        return Err(Error::invalid(format!("threshold must lie in (0, 1], got {u}")));
    }
    let profile = IncomingProfile::new(g, s);
    VertexSet::new(g, (0..g.n()).filter(|&i| profile.density(i) >= u))
}

/// Samples one plain step: `U` uniform in (0, 1].
pub fn esp_sample_step(
    g: &WeightedGraph,
    s: &VertexSet,
    rng: &mut impl Rng,
) -> Result<(VertexSet, f64)> {
    let u = 1.0 - rng.gen::<f64>();
    Ok((esp_step_at(g, s, u)?, u))
}

/// Exact gauge `1 - E[sqrt(vol(S') / vol(S))]` for a nonempty `S` of at
/// most half the volume.
pub fn gauge_exact(g: &WeightedGraph, s: &VertexSet) -> Result<f64> {
    if s.is_empty() {
        return Err(Error::domain("gauge of the empty set is undefined"));
    }
    if s.volume() > g.volume() / 2.0 + 1e-9 {
        return Err(Error::domain(format!(
            "gauge needs vol(S) <= vol(V)/2, got {}",
            s.volume()
        )));
    }
    let mut mean_root = 0.0;
    for a in esp_transition_distribution(g, s)? {
        mean_root += a.probability * (a.successor.volume() / s.volume()).sqrt();
    }
    Ok(1.0 - mean_root)
}

/// Monte Carlo estimate of the gauge: `(mean, standard error)`. The
/// standard error needs at least two trials.
pub fn gauge_monte_carlo(
    g: &WeightedGraph,
    s: &VertexSet,
    trials: usize,
    seed: u64,
) -> Result<(f64, Option<f64>)> {
    if s.is_empty() {
        return Err(Error::domain("gauge of the empty set is undefined"));
    }
    if s.volume() > g.volume() / 2.0 + 1e-9 {
        return Err(Error::domain("gauge needs vol(S) <= vol(V)/2"));
    }
    if trials == 0 {
        return Err(Error::invalid("trial count must be >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..trials {
        let (next, _) = esp_sample_step(g, s, &mut rng)?;
        let x = 1.0 - (next.volume() / s.volume()).sqrt();
        sum += x;
        sum_sq += x * x;
    }
    let mean = sum / trials as f64;
    let stderr = if trials >= 2 {
        let var = ((sum_sq - sum * sum / trials as f64) / (trials as f64 - 1.0)).max(0.0);
        Some((var / trials as f64).sqrt())
    } else {
        None
    };
    Ok((mean, stderr))
}

/// Truncated-mass identity at `t` in (0, 1]: the left side integrates
/// successor volume over thresholds up to `t`, the right side sums
/// `min(t * deg(i), d_S(i))`. Returns `(lhs, rhs)`; they agree to
/// within accumulation error.
pub fn mp_identity_check(g: &WeightedGraph, s: &VertexSet, t: f64) -> Result<(f64, f64)> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::invalid(format!("t must lie in (0, 1], got {t}")));
    }
    let mut lhs = 0.0;
    for a in esp_transition_distribution(g, s)? {
        let overlap = (a.u_hi.min(t) - a.u_lo.max(0.0)).max(0.0);
        lhs += overlap * a.successor.volume();
    }
    let d = incoming_vector(g, s);
    let rhs = (0..g.n())
        .map(|i| (t * g.degree(i)).min(d[i]))
        .sum::<f64>();
    Ok((lhs, rhs))
}

/// One volume-biased step: the walker at `x_in_s` moves by the walk kernel
/// to `x_next`, and the threshold is drawn uniformly from
/// `(0, density(x_next)]`, so the successor always contains the walker.
/// Returns `(successor, x_next, u)`.
pub fn vb_esp_sample_step(
    g: &WeightedGraph,
    s: &VertexSet,
    x_in_s: usize,
    rng: &mut impl Rng,
) -> Result<(VertexSet, usize, f64)> {
    if s.is_empty() {
        return Err(Error::domain("volume-biased step needs a nonempty set"));
    }
    if !s.contains(x_in_s) {
        return Err(Error::invalid(format!("walker {x_in_s} is not in the set")));
    }
    let deg = g.degree(x_in_s);
    if deg <= 0.0 {
        return Err(Error::domain(format!("walker {x_in_s} has zero degree")));
    }
    let draw = rng.gen::<f64>() * deg;
    let mut x_next = x_in_s;
    let mut acc = 0.0;
    for &(j, w) in g.neighbors(x_in_s) {
        acc += w;
        x_next = j;
        if draw < acc {
            break;
        }
    }
    let q = {
        let d: f64 = g
            .neighbors(x_next)
            .iter()
            .filter(|&&(j, _)| s.contains(j))
            .map(|&(_, w)| w)
            .sum();
        d / g.degree(x_next)
    };
    debug_assert!(q > 0.0, "walker stepped to a vertex with no weight into the set");
    let u = q * (1.0 - rng.gen::<f64>());
    Ok((esp_step_at(g, s, u)?, x_next, u))
}

/// Exact law of the volume-biased step: successor probabilities are the
/// plain-step probabilities reweighted by `vol(S')/vol(S)` (the empty
/// successor drops out). Probabilities sum to 1 by the volume martingale.
pub fn vb_transition_law(g: &WeightedGraph, s: &VertexSet) -> Result<Vec<(VertexSet, f64)>> {
    if s.is_empty() {
        return Err(Error::domain("volume-biased law needs a nonempty set"));
    }
    let mut out = Vec::new();
    for a in esp_transition_distribution(g, s)? {
        let p = a.probability * a.successor.volume() / s.volume();
        if p > 0.0 {
            out.push((a.successor, p));
        }
    }
    Ok(out)
}

/// Why a trajectory stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    /// A recorded set met the expansion target.
    TargetReached,
    /// The current set outgrew the volume budget.
    BudgetExceeded,
    /// The step cap ran out.
    StepCapReached,
    /// Absorbed at the empty set (plain process only).
    ReachedEmpty,
    /// Absorbed at the full vertex set.
    ReachedFull,
}

/// One recorded step.
#[derive(Clone, Debug)]
pub struct EspStepRecord {
    pub set: VertexSet,
    pub u: f64,
    /// Expansion of the new set when defined (nonempty, at most half the
    /// volume).
    pub expansion: Option<f64>,
    /// `1 - sqrt(vol(new) / vol(old))`.
    pub gauge_term: f64,
}

/// A full trajectory with enough detail to replay and audit it.
#[derive(Clone, Debug)]
pub struct EspTrajectory {
    pub seed: u64,
    pub initial: VertexSet,
    pub steps: Vec<EspStepRecord>,
    pub termination: Termination,
}

/// Runs the process from `start` for at most `step_cap` steps.
///
/// `volume_biased` keeps a coupled walker and never dies; the plain
/// process may reach the empty set. `volume_budget` and `phi_target`
/// stop the run early (checked after each recorded step).
pub fn esp_run(
    g: &WeightedGraph,
    start: &VertexSet,
    step_cap: usize,
    seed: u64,
    volume_biased: bool,
    volume_budget: Option<f64>,
    phi_target: Option<f64>,
) -> Result<EspTrajectory> {
    if start.is_empty() {
        return Err(Error::domain("trajectory must start from a nonempty set"));
    }
    if step_cap == 0 {
        return Err(Error::invalid("step cap must be >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = g.volume() / 2.0 + 1e-9;
    let mut cur = start.clone();
    let mut walker = if volume_biased {
        let pick = rng.gen_range(0..cur.size());
        Some(cur.members()[pick])
    } else {
        None
    };
    let mut steps = Vec::new();
    let mut termination = Termination::StepCapReached;
    for _ in 0..step_cap {
        let (next, u) = match walker {
            Some(x) => {
                let (next, x_next, u) = vb_esp_sample_step(g, &cur, x, &mut rng)?;
                walker = Some(x_next);
                (next, u)
            }
            None => esp_sample_step(g, &cur, &mut rng)?,
        };
        let gauge_term = 1.0 - (next.volume() / cur.volume()).sqrt();
        let expansion = if !next.is_empty() && next.volume() <= half {
            Some(1.0 - cut_weight(g, &next, &next) / next.volume())
        } else {
            None
        };
        steps.push(EspStepRecord {
            set: next.clone(),
            u,
            expansion,
            gauge_term,
        });
        cur = next;
        if cur.is_empty() {
            termination = Termination::ReachedEmpty;
            break;
        }
        if cur.size() == g.n() {
            termination = Termination::ReachedFull;
            break;
        }
        if let Some(budget) = volume_budget {
            if cur.volume() > budget + 1e-9 {
                termination = Termination::BudgetExceeded;
                break;
            }
        }
        if let (Some(target), Some(phi)) = (phi_target, steps.last().unwrap().expansion) {
            if phi <= target + 1e-12 {
                termination = Termination::TargetReached;
                break;
            }
        }
    }
    Ok(EspTrajectory {
        seed,
        initial: start.clone(),
        steps,
        termination,
    })
}

/// Local partitioning around a seed vertex with the volume-biased process:
/// returns the best-expansion set seen within the budget, its expansion,
/// and the full trajectory (whose termination tells whether the run blew
/// its budget). Requires `size_budget <= n/2`.
pub fn esp_local_partition(
    g: &WeightedGraph,
    seed_vertex: usize,
    step_cap: usize,
    size_budget: usize,
    phi_target: Option<f64>,
    seed: u64,
) -> Result<(VertexSet, f64, EspTrajectory)> {
    if size_budget == 0 || 2 * size_budget > g.n() {
        return Err(Error::invalid(format!(
            "size budget must lie in 1..=n/2, got {size_budget} with n = {}",
            g.n()
        )));
    }
    let start = VertexSet::singleton(g, seed_vertex)?;
    let budget = size_budget as f64;
    let traj = esp_run(g, &start, step_cap, seed, true, Some(budget), phi_target)?;
    let mut best_set = start.clone();
    let mut best_phi = crate::graph::expansion(g, &start)?;
    for rec in &traj.steps {
        if rec.set.volume() > budget + 1e-9 {
            continue;
        }
        if let Some(phi) = rec.expansion {
            if phi < best_phi {
                best_phi = phi;
                best_set = rec.set.clone();
            }
        }
    }
    Ok((best_set, best_phi, traj))
}
