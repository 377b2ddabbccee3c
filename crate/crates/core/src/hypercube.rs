//! Noisy Hamming-cube models `[k]^d` and their weight-class reduction.
//!
//! Under the noise kernel each coordinate resamples independently with
//! probability `eps` (uniformly over the alphabet), so the walk weight
//! between strings factorizes over coordinates: agreeing coordinates
//! contribute `1 - eps + eps/k`, disagreeing ones `eps/k`. Everything the
//! crate needs about Hamming balls survives projection onto the number of
//! nonzero coordinates; the projected chain on `{0, ..., d}` is computed
//! exactly, which is what makes dimensions in the hundreds tractable.

use crate::error::{Error, Result};
use crate::graph::{WeightedGraph, MAX_EXPLICIT_SIZE, MAX_POWER_N};
use rand::Rng;

/// Kernel construction is refused above this dimension.
pub const MAX_CHAIN_DIM: u32 = 10_000;
/// Dimension above which binomial terms are assembled in log space.
const LOG_SPACE_DIM: u32 = 500;

/// Parameters of the noisy cube `[k]^d` with full resampling rate `eps`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HypercubeModel {
    k: u32,
    d: u32,
    eps: f64,
}

impl HypercubeModel {
    pub fn new(k: u32, d: u32, eps: f64) -> Result<Self> {
        if k < 2 {
            return Err(Error::invalid("alphabet size k must be >= 2"));
        }
        if d < 1 {
            return Err(Error::invalid("dimension must be >= 1"));
        }
        if !(0.0..=1.0).contains(&eps) {
            return Err(Error::invalid(format!("eps must lie in [0, 1], got {eps}")));
        }
        Ok(HypercubeModel { k, d, eps })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Per-coordinate weight when the two strings agree there.
    pub fn p_same(&self) -> f64 {
        1.0 - self.eps + self.eps / self.k as f64
    }

    /// Per-coordinate weight when they disagree.
    pub fn p_diff(&self) -> f64 {
        self.eps / self.k as f64
    }

    /// Natural log of the state-space size `k^d`.
    pub fn log_size(&self) -> f64 {
        self.d as f64 * (self.k as f64).ln()
    }

    /// Stay-weight thresholds are level-monotone in this regime.
    pub fn monotone_regime(&self) -> bool {
        self.eps <= 0.5 + 1e-12
    }

    fn explicit_size(&self) -> Result<usize> {
        let mut size: u64 = 1;
        for _ in 0..self.d {
            size = size.saturating_mul(self.k as u64);
            if size > MAX_EXPLICIT_SIZE {
                return Err(Error::capacity(format!(
                    "explicit cube needs k^d <= {MAX_EXPLICIT_SIZE}"
                )));
            }
        }
        Ok(size as usize)
    }
}

/// Walk weight between two explicit strings (digit vectors of length `d`).
pub fn pair_weight(m: &HypercubeModel, x: &[u32], y: &[u32]) -> Result<f64> {
    m.explicit_size()?;
    if x.len() != m.d() as usize || y.len() != m.d() as usize {
        return Err(Error::invalid("digit strings must have length d"));
    }
    let (ps, pd) = (m.p_same(), m.p_diff());
    let mut w = 1.0;
    for (a, b) in x.iter().zip(y) {
        if *a >= m.k() || *b >= m.k() {
            return Err(Error::invalid("digit out of alphabet range"));
        }
        w *= if a == b { ps } else { pd };
    }
    Ok(w)
}

fn ln_factorials(n: usize) -> Vec<f64> {
    let mut lf = vec![0.0; n + 1];
    for i in 1..=n {
        lf[i] = lf[i - 1] + (i as f64).ln();
    }
    lf
}

/// Binomial pmf helpers, stable for large `n` and extreme `p`: small `n`
/// uses a ratio recurrence anchored at the mode, large `n` exponentiates
/// log terms entry by entry; the two agree to ~1e-13.
struct BinomialTables {
    lf: Vec<f64>,
}

impl BinomialTables {
    fn new(max_n: usize) -> Self {
        BinomialTables { lf: ln_factorials(max_n) }
    }

    fn ln_pmf(&self, n: usize, j: usize, p: f64, q: f64) -> f64 {
        self.lf[n] - self.lf[j] - self.lf[n - j] + j as f64 * p.ln() + (n - j) as f64 * q.ln()
    }

    fn pmf(&self, n: usize, p: f64, log_space: bool) -> Vec<f64> {
        if p <= 0.0 {
            let mut v = vec![0.0; n + 1];
            v[0] = 1.0;
            return v;
        }
        if p >= 1.0 {
            let mut v = vec![0.0; n + 1];
            v[n] = 1.0;
            return v;
        }
        let q = 1.0 - p;
        let mut v = vec![0.0; n + 1];
        if log_space {
            for j in 0..=n {
                v[j] = self.ln_pmf(n, j, p, q).exp();
            }
        } else {
            // anchor at the mode, then exact ratio recurrences outward
            let mode = (((n + 1) as f64) * p).floor().min(n as f64) as usize;
            v[mode] = self.ln_pmf(n, mode, p, q).exp();
            for j in (0..mode).rev() {
                v[j] = v[j + 1] * ((j + 1) as f64 * q) / ((n - j) as f64 * p);
            }
            for j in mode..n {
                v[j + 1] = v[j] * ((n - j) as f64 * p) / ((j + 1) as f64 * q);
            }
        }
        v
    }
}

/// Exact projection of the cube walk onto the number of nonzero
/// coordinates: a reversible chain on `{0, ..., d}`.
///
/// Rows are the transition laws `P(a, .)`; `stationary()` is the binomial
/// law of nonzero-coordinate counts under the uniform distribution on the
/// cube. Memory is quadratic in `d`.
#[derive(Clone, Debug)]
pub struct WeightChainKernel {
    k: u32,
    d: usize,
    eps: f64,
    rows: Vec<f64>,
    /// Row-wise prefix sums: `cum[a*(d+1)+b] = P(a, <= b)`.
    cum: Vec<f64>,
    pi: Vec<f64>,
    pi_cum: Vec<f64>,
}

/// Builds the weight-class chain for a model. Guarded by [`MAX_CHAIN_DIM`].
pub fn weight_chain(m: &HypercubeModel) -> Result<WeightChainKernel> {
    weight_chain_with_mode(m, m.d() > LOG_SPACE_DIM)
}

/// As [`weight_chain`] with the log-space assembly forced on or off; the
/// two modes agree to ~1e-12 and are cross-pinned in the tests.
pub fn weight_chain_with_mode(m: &HypercubeModel, log_space: bool) -> Result<WeightChainKernel> {
    let d = m.d() as usize;
    if m.d() > MAX_CHAIN_DIM {
        return Err(Error::capacity(format!(
            "weight chain needs d <= {MAX_CHAIN_DIM}, got {d}"
        )));
    }
    let k = m.k() as f64;
    let p_back = m.eps() / k; // a nonzero coordinate resampling to zero
    let p_out = m.eps() * (k - 1.0) / k; // a zero coordinate leaving zero
    let tables = BinomialTables::new(d);
    let w = d + 1;
    let mut rows = vec![0.0; w * w];
    for a in 0..=d {
        // Z ~ Bin(a, eps/k) nonzero coordinates dropping to zero,
        // W ~ Bin(d-a, eps(k-1)/k) zero coordinates becoming nonzero;
        // the new count is (a - Z) + W.
        let pz = tables.pmf(a, p_back, log_space);
        let pw = tables.pmf(d - a, p_out, log_space);
        let row = &mut rows[a * w..(a + 1) * w];
        for (z, &vz) in pz.iter().enumerate() {
            if vz == 0.0 {
                continue;
            }
            for (x, &vw) in pw.iter().enumerate() {
                row[a - z + x] += vz * vw;
            }
        }
    }
    let pi = tables.pmf(d, (k - 1.0) / k, log_space);
    let mut cum = vec![0.0; w * w];
    for a in 0..=d {
        let mut acc = 0.0;
        for b in 0..=d {
            acc += rows[a * w + b];
            cum[a * w + b] = acc;
        }
    }
    let mut pi_cum = vec![0.0; w];
    let mut acc = 0.0;
    for (j, &p) in pi.iter().enumerate() {
        acc += p;
        pi_cum[j] = acc;
    }
    Ok(WeightChainKernel {
        k: m.k(),
        d,
        eps: m.eps(),
        rows,
        cum,
        pi,
        pi_cum,
    })
}

impl WeightChainKernel {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn prob(&self, a: usize, b: usize) -> f64 {
        self.rows[a * (self.d + 1) + b]
    }

    pub fn row(&self, a: usize) -> &[f64] {
        &self.rows[a * (self.d + 1)..(a + 1) * (self.d + 1)]
    }

    /// `P(a, <= b)`.
    pub fn cum_prob(&self, a: usize, b: usize) -> f64 {
        self.cum[a * (self.d + 1) + b]
    }

    pub fn stationary(&self) -> &[f64] {
        &self.pi
    }

    /// Fraction of the cube inside the Hamming ball of radius `r`.
    pub fn ball_fraction(&self, r: usize) -> f64 {
        self.pi_cum[r.min(self.d)]
    }

    /// Stay weight of weight class `s` with respect to the ball `B_r`:
    /// the walk mass a class-`s` string sends inside the ball.
    pub fn stay_weight(&self, s: usize, r: usize) -> f64 {
        self.cum_prob(s, r)
    }

    fn monotone_or_err(&self) -> Result<()> {
        if self.eps > 0.5 + 1e-12 {
            return Err(Error::domain(
                "ball-shaped evolving sets require the monotone regime eps <= 1/2",
            ));
        }
        Ok(())
    }
}

/// Expansion data of the Hamming ball `B_r`.
#[derive(Clone, Debug)]
pub struct BallProfile {
    pub radius: usize,
    pub size_fraction: f64,
    /// Boundary mass over ball volume; meaningful as an expansion when the
    /// fraction is at most 1/2.
    pub expansion: f64,
    /// Stay weights of the classes `0..=r` inside the ball.
    pub stay_weights: Vec<f64>,
}

/// Profile of the radius-`r` ball under the class chain.
pub fn ball_profile(kernel: &WeightChainKernel, r: usize) -> Result<BallProfile> {
    if r > kernel.d() {
        return Err(Error::invalid(format!("radius {r} exceeds dimension {}", kernel.d())));
    }
    let frac = kernel.ball_fraction(r);
    let mut inside = 0.0;
    for s in 0..=r {
        inside += kernel.stationary()[s] * kernel.stay_weight(s, r);
    }
    let expansion = 1.0 - inside / frac;
    let stay_weights = (0..=r).map(|s| kernel.stay_weight(s, r)).collect();
    Ok(BallProfile {
        radius: r,
        size_fraction: frac,
        expansion,
        stay_weights,
    })
}

/// Expansion and size fraction of a single-coordinate cut
/// `{x : x_1 = a}`: exactly `(eps (k-1)/k, 1/k)`.
pub fn coordinate_cut_expansion(m: &HypercubeModel) -> (f64, f64) {
    let k = m.k() as f64;
    (m.eps() * (k - 1.0) / k, 1.0 / k)
}

/// Outcome of checking that stay weights decrease along weight classes and
/// agree with the explicit cube.
#[derive(Clone, Debug)]
pub struct LevelCheck {
    pub holds: bool,
    /// First adjacent class pair `(s, s+1)` with increasing stay weight.
    pub witness: Option<(usize, usize)>,
    /// Largest gap between explicit per-vertex in-ball weight and the
    /// class value from the chain.
    pub max_projection_error: f64,
}

/// Verifies, for the ball `B_r`, that (a) every explicit vertex of weight
/// class `s` has in-ball weight equal to the chain's stay weight, and
/// (b) stay weights are non-increasing in `s`. Requires the explicit guard.
pub fn level_monotonicity_check(m: &HypercubeModel, r: usize) -> Result<LevelCheck> {
    let kernel = weight_chain(m)?;
    if r > kernel.d() {
        return Err(Error::invalid(format!("radius {r} exceeds dimension {}", kernel.d())));
    }
    let cube = ExplicitHypercube::new(m)?;
    let ball: Vec<usize> = cube.ball(r);
    let mut max_err = 0.0f64;
    for x in 0..cube.len() {
        let mut inside = 0.0;
        for &y in &ball {
            inside += pair_weight(m, cube.digits(x), cube.digits(y))?;
        }
        let class = cube.weight_class(x);
        max_err = max_err.max((inside - kernel.stay_weight(class, r)).abs());
    }
    let mut witness = None;
    for s in 0..kernel.d() {
        if kernel.stay_weight(s + 1, r) > kernel.stay_weight(s, r) + 1e-12 {
            witness = Some((s, s + 1));
            break;
        }
    }
    Ok(LevelCheck {
        holds: witness.is_none() && max_err <= 1e-9,
        witness,
        max_projection_error: max_err,
    })
}

/// One step of a ball-shaped evolving-set trajectory.
#[derive(Clone, Debug)]
pub struct BallStep {
    /// Ball radius after the step; -1 encodes the empty set, `d` the full cube.
    pub radius: i64,
    pub size_fraction: f64,
    /// Present when the ball is nonempty with fraction at most 1/2.
    pub expansion: Option<f64>,
    pub u: f64,
    /// Walker weight class for the volume-biased variant.
    pub walker_class: Option<usize>,
}

fn step_record(kernel: &WeightChainKernel, radius: i64, u: f64, walker: Option<usize>) -> BallStep {
    if radius < 0 {
        return BallStep {
            radius,
            size_fraction: 0.0,
            expansion: None,
            u,
            walker_class: walker,
        };
    }
    let frac = kernel.ball_fraction(radius as usize);
    let expansion = if frac <= 0.5 {
        ball_profile(kernel, radius as usize).ok().map(|p| p.expansion)
    } else {
        None
    };
    BallStep {
        radius,
        size_fraction: frac,
        expansion,
        u,
        walker_class: walker,
    }
}

fn successor_radius(kernel: &WeightChainKernel, r: usize, u: f64) -> i64 {
    // stay weights are non-increasing in the class in the monotone regime,
    // so the threshold set {s : w_s >= u} is a prefix
    let mut next: i64 = -1;
    for s in 0..=kernel.d() {
        if kernel.stay_weight(s, r) >= u {
            next = s as i64;
        } else {
            break;
        }
    }
    next
}

/// Radius of the evolving-set successor of `B_r` at threshold `u`
/// (-1 encodes the empty set). Requires the monotone regime.
pub fn ball_step(kernel: &WeightChainKernel, r: usize, u: f64) -> Result<i64> {
    kernel.monotone_or_err()?;
    if r > kernel.d() {
        return Err(Error::invalid(format!("radius {r} exceeds dimension {}", kernel.d())));
    }
    if !(u > 0.0 && u <= 1.0) {
        return Err(Error::invalid(format!("threshold must lie in (0, 1], got {u}")));
    }
    Ok(successor_radius(kernel, r, u))
}

/// Exact one-step law of the ball radius from `B_r` under a uniform
/// threshold: pairs `(radius, probability)` with -1 for the empty set,
/// probabilities summing to 1.
pub fn ball_successor_law(kernel: &WeightChainKernel, r: usize) -> Result<Vec<(i64, f64)>> {
    kernel.monotone_or_err()?;
    if r > kernel.d() {
        return Err(Error::invalid(format!("radius {r} exceeds dimension {}", kernel.d())));
    }
    // successor radius s needs u in (w_{s+1}, w_s]; the empty set takes
    // (w_0, 1]
    let mut out = Vec::new();
    let w0 = kernel.stay_weight(0, r);
    if w0 < 1.0 {
        out.push((-1i64, 1.0 - w0));
    }
    for s in 0..=kernel.d() {
        let hi = kernel.stay_weight(s, r);
        let lo = if s == kernel.d() {
            0.0
        } else {
            kernel.stay_weight(s + 1, r)
        };
        if hi > lo {
            out.push((s as i64, hi - lo));
        }
    }
    Ok(out)
}

/// Runs the evolving-set process started at the singleton ball `B_0`,
/// using that in the monotone regime every successor of a ball is a ball.
/// The empty set and the full cube are absorbing; the trajectory stops
/// there early. Requires `eps <= 1/2`.
pub fn esp_on_balls(
    kernel: &WeightChainKernel,
    steps: usize,
    rng: &mut impl Rng,
) -> Result<Vec<BallStep>> {
    kernel.monotone_or_err()?;
    if steps == 0 {
        return Err(Error::invalid("step count must be >= 1"));
    }
    let mut out = Vec::with_capacity(steps);
    let mut radius: i64 = 0;
    for _ in 0..steps {
        let u = 1.0 - rng.gen::<f64>();
        radius = successor_radius(kernel, radius as usize, u);
        out.push(step_record(kernel, radius, u, None));
        if radius < 0 || radius == kernel.d() as i64 {
            break;
        }
    }
    Ok(out)
}

/// Volume-biased variant: a walker coupled to the set keeps the process
/// away from the empty set. The walker moves by the class chain; the
/// threshold is drawn uniformly from `(0, stay weight of the walker]`.
pub fn vb_esp_on_balls(
    kernel: &WeightChainKernel,
    steps: usize,
    rng: &mut impl Rng,
) -> Result<Vec<BallStep>> {
    kernel.monotone_or_err()?;
    if steps == 0 {
        return Err(Error::invalid("step count must be >= 1"));
    }
    let mut out = Vec::with_capacity(steps);
    let mut radius: usize = 0;
    let mut class: usize = 0;
    for _ in 0..steps {
        // walker's next weight class
        let draw = rng.gen::<f64>();
        let row_cum = &kernel.cum[class * (kernel.d + 1)..(class + 1) * (kernel.d + 1)];
        let mut next_class = kernel.d;
        for (b, &c) in row_cum.iter().enumerate() {
            if draw < c {
                next_class = b;
                break;
            }
        }
        let w_next = kernel.stay_weight(next_class, radius);
        let u = w_next * (1.0 - rng.gen::<f64>());
        let next_radius = successor_radius(kernel, radius, u);
        debug_assert!(next_radius >= next_class as i64);
        radius = next_radius as usize;
        class = next_class;
        out.push(step_record(kernel, next_radius, u, Some(next_class)));
        if radius == kernel.d() {
            break;
        }
    }
    Ok(out)
}

/// Summary of one in-cap ball.
#[derive(Clone, Debug)]
pub struct BallSummary {
    pub radius: usize,
    pub size_fraction: f64,
    pub expansion: f64,
}

/// Numeric record contrasting the single-coordinate cut with every small
/// Hamming ball: the cut has expansion at most `eps`, while all balls the
/// ball-shaped evolving-set exploration can reach at small volume keep
/// markedly larger expansion.
#[derive(Clone, Debug)]
pub struct CounterexampleReport {
    pub k: u32,
    pub d: u32,
    pub eps: f64,
    pub delta_target: f64,
    pub coordinate_cut_fraction: f64,
    pub coordinate_cut_expansion: f64,
    pub cut_expansion_leq_eps: bool,
    /// Size-fraction cap defining "small" balls.
    pub cap: f64,
    pub balls: Vec<BallSummary>,
    pub largest_in_cap_radius: Option<usize>,
    pub min_ball_expansion: Option<f64>,
    pub min_ball_radius: Option<usize>,
    /// Whether the smallest in-cap ball expansion still exceeds the cut's.
    pub separation_holds: Option<bool>,
    /// No ball fits under the cap at all.
    pub vacuous: bool,
    /// `eps = 0` makes every expansion zero.
    pub degenerate_eps: bool,
    pub threshold: Option<f64>,
    pub threshold_met: Option<bool>,
    pub summary: String,
}

/// Builds the cut-versus-balls report. `delta_target` must equal `1/k`
/// (the coordinate cut's size fraction); `cap` bounds the ball sizes
/// under scrutiny, and `threshold` optionally pins a floor that the
/// minimum in-cap ball expansion is compared against.
pub fn counterexample_report(
    m: &HypercubeModel,
    delta_target: f64,
    cap: f64,
    threshold: Option<f64>,
) -> Result<CounterexampleReport> {
    if !(delta_target > 0.0 && delta_target < 1.0) {
        return Err(Error::invalid("delta_target must lie in (0, 1)"));
    }
    if (1.0 / delta_target).round() as u32 != m.k() {
        return Err(Error::invalid(format!(
            "delta_target {} does not match the coordinate cut fraction 1/{}",
            delta_target,
            m.k()
        )));
    }
    if !(cap > 0.0 && cap <= 1.0) {
        return Err(Error::invalid("cap must lie in (0, 1]"));
    }
    let kernel = weight_chain(m)?;
    let (cut_exp, cut_frac) = coordinate_cut_expansion(m);
    let mut balls = Vec::new();
    for r in 0..=kernel.d() {
        let frac = kernel.ball_fraction(r);
        // the full-ball fraction is 1 only up to summation dust
        if frac > cap + 1e-12 {
            break;
        }
        let p = ball_profile(&kernel, r)?;
        balls.push(BallSummary {
            radius: r,
            size_fraction: frac,
            expansion: p.expansion,
        });
    }
    // the full cube (expansion 0) can sit in the list when cap = 1, but the
    // small-ball assertion is about proper balls only
    let min = balls
        .iter()
        .filter(|b| b.radius < kernel.d())
        .min_by(|a, b| a.expansion.partial_cmp(&b.expansion).unwrap());
    let (min_exp, min_r) = match min {
        Some(b) => (Some(b.expansion), Some(b.radius)),
        None => (None, None),
    };
    let vacuous = balls.is_empty();
    let degenerate_eps = m.eps() == 0.0;
    let separation_holds = min_exp.map(|e| e > cut_exp);
    let threshold_met = match (threshold, min_exp) {
        (Some(t), Some(e)) => Some(e >= t),
        _ => None,
    };
    let summary = if vacuous {
        format!(
            "no ball of [{}]^{} fits under the size cap {cap}; the report is vacuous",
            m.k(),
            m.d()
        )
    } else {
        format!(
            "coordinate cut: fraction {cut_frac:.6}, expansion {cut_exp:.6}; \
             {} balls under cap {cap} (largest radius {}), minimum ball expansion {:.6} at radius {}; \
             ball-shaped evolving-set exploration stays within this family and never sees \
             expansion below that minimum",
            balls.len(),
            balls.last().map(|b| b.radius).unwrap(),
            min_exp.unwrap(),
            min_r.unwrap()
        )
    };
    Ok(CounterexampleReport {
        k: m.k(),
        d: m.d(),
        eps: m.eps(),
        delta_target,
        coordinate_cut_fraction: cut_frac,
        coordinate_cut_expansion: cut_exp,
        cut_expansion_leq_eps: cut_exp <= m.eps() + 1e-15,
        cap,
        largest_in_cap_radius: balls.last().map(|b| b.radius),
        balls,
        min_ball_expansion: min_exp,
        min_ball_radius: min_r,
        separation_holds,
        vacuous,
        degenerate_eps,
        threshold,
        threshold_met,
        summary,
    })
}

/// Fully materialized cube for cross-checking the class chain on small
/// instances. Vertex `i` has the base-`k` digits of `i`.
pub struct ExplicitHypercube {
    model: HypercubeModel,
    digits: Vec<Vec<u32>>,
}

impl ExplicitHypercube {
    pub fn new(m: &HypercubeModel) -> Result<Self> {
        let size = m.explicit_size()?;
        let mut digits = Vec::with_capacity(size);
        for i in 0..size {
            let mut v = Vec::with_capacity(m.d() as usize);
            let mut rest = i;
            for _ in 0..m.d() {
                v.push((rest % m.k() as usize) as u32);
                rest /= m.k() as usize;
            }
            digits.push(v);
        }
        Ok(ExplicitHypercube { model: *m, digits })
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn model(&self) -> &HypercubeModel {
        &self.model
    }

    pub fn digits(&self, i: usize) -> &[u32] {
        &self.digits[i]
    }

    /// Number of nonzero coordinates.
    pub fn weight_class(&self, i: usize) -> usize {
        self.digits[i].iter().filter(|&&x| x != 0).count()
    }

    /// Vertices of the Hamming ball of radius `r` around the all-zeros string.
    pub fn ball(&self, r: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.weight_class(i) <= r).collect()
    }

    /// Dense graph materialization; quadratic in `k^d`, so guarded harder
    /// than the explicit path itself.
    pub fn to_graph(&self) -> Result<WeightedGraph> {
        let n = self.len();
        if n > MAX_POWER_N {
            return Err(Error::capacity(format!(
                "dense cube graph needs k^d <= {MAX_POWER_N}, got {n}"
            )));
        }
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i..n {
                let w = pair_weight(&self.model, &self.digits[i], &self.digits[j])?;
                if w > 0.0 {
                    edges.push((i, j, w));
                }
            }
        }
        WeightedGraph::from_edges(n, &edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn model(k: u32, d: u32, eps: f64) -> HypercubeModel {
        HypercubeModel::new(k, d, eps).unwrap()
    }

    #[test]
    fn kernel_small_known_values() {
        let kernel = weight_chain(&model(2, 2, 0.5)).unwrap();
        assert!((kernel.prob(0, 0) - 0.5625).abs() < 1e-15);
        assert!((kernel.prob(0, 1) - 0.375).abs() < 1e-15);
        assert!((kernel.prob(0, 2) - 0.0625).abs() < 1e-15);
        let pi = kernel.stationary();
        assert!((pi[0] - 0.25).abs() < 1e-15);
        assert!((pi[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn kernel_rows_are_stochastic_and_reversible() {
        for (k, d, eps) in [(2u32, 6u32, 0.3), (3, 5, 0.37), (8, 16, 0.1), (5, 9, 1.0)] {
            let kernel = weight_chain(&model(k, d, eps)).unwrap();
            let pi = kernel.stationary();
            for a in 0..=kernel.d() {
                let s: f64 = kernel.row(a).iter().sum();
                assert!((s - 1.0).abs() < 1e-12, "row {a} sums to {s}");
            }
            // detailed balance
            for a in 0..=kernel.d() {
                for b in 0..=kernel.d() {
                    let lhs = pi[a] * kernel.prob(a, b);
                    let rhs = pi[b] * kernel.prob(b, a);
                    assert!((lhs - rhs).abs() <= 1e-13 * (1.0 + lhs.abs()));
                }
            }
            // stationarity
            for b in 0..=kernel.d() {
                let mass: f64 = (0..=kernel.d()).map(|a| pi[a] * kernel.prob(a, b)).sum();
                assert!((mass - pi[b]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn kernel_matches_explicit_cube() {
        for (k, d, eps) in [(2u32, 3u32, 0.2), (3, 2, 0.3)] {
            let m = model(k, d, eps);
            let kernel = weight_chain(&m).unwrap();
            let cube = ExplicitHypercube::new(&m).unwrap();
            for x in 0..cube.len() {
                let a = cube.weight_class(x);
                let mut by_class = vec![0.0; d as usize + 1];
                for y in 0..cube.len() {
                    by_class[cube.weight_class(y)] +=
                        pair_weight(&m, cube.digits(x), cube.digits(y)).unwrap();
                }
                for (b, &mass) in by_class.iter().enumerate() {
                    assert!(
                        (mass - kernel.prob(a, b)).abs() < 1e-13,
                        "({k},{d},{eps}) class {a}->{b}"
                    );
                }
            }
        }
    }

    #[test]
    fn coordinate_cut_matches_explicit_expansion() {
        for (k, d, eps) in [(2u32, 3u32, 0.2), (3, 2, 0.3)] {
            let m = model(k, d, eps);
            let g = ExplicitHypercube::new(&m).unwrap().to_graph().unwrap();
            // first coordinate (least significant digit) equal to 0
            let members: Vec<usize> = (0..g.n()).filter(|i| i % k as usize == 0).collect();
            let s = crate::graph::VertexSet::new(&g, members).unwrap();
            let phi = crate::graph::expansion(&g, &s).unwrap();
            let (cut, frac) = coordinate_cut_expansion(&m);
            assert!((phi - cut).abs() < 1e-12);
            assert!((s.volume() / g.volume() - frac).abs() < 1e-12);
        }
    }

    #[test]
    fn log_space_path_pins_to_direct_at_500() {
        let m = model(8, 500, 0.1);
        let direct = weight_chain_with_mode(&m, false).unwrap();
        let logged = weight_chain_with_mode(&m, true).unwrap();
        let mut max_diff = 0.0f64;
        for a in 0..=direct.d() {
            for b in 0..=direct.d() {
                max_diff = max_diff.max((direct.prob(a, b) - logged.prob(a, b)).abs());
            }
        }
        for j in 0..=direct.d() {
            max_diff = max_diff.max((direct.stationary()[j] - logged.stationary()[j]).abs());
        }
        assert!(max_diff < 1e-12, "paths disagree by {max_diff}");
    }

    #[test]
    fn frozen_small_ball_floors() {
        // minimum expansion among balls with size fraction <= 0.01, and the
        // radius attaining it, for eps = 0.1 on [8]^d
        let cases = [
            (32u32, 22usize, 0.41078229362739804),
            (64, 48, 0.4445682269342093),
            (128, 102, 0.43919327807699615),
        ];
        for (d, want_r, want_exp) in cases {
            let kernel = weight_chain(&model(8, d, 0.1)).unwrap();
            let mut best: Option<(usize, f64)> = None;
            for r in 0..kernel.d() {
                if kernel.ball_fraction(r) > 0.01 {
                    break;
                }
                let e = ball_profile(&kernel, r).unwrap().expansion;
                if best.map_or(true, |(_, be)| e < be) {
                    best = Some((r, e));
                }
            }
            let (r, e) = best.unwrap();
            assert_eq!(r, want_r, "d={d}");
            assert!((e - want_exp).abs() < 1e-9, "d={d}: {e} vs {want_exp}");
        }
    }

    #[test]
    fn frozen_octant_scale_ball() {
        // ball closest in size to the coordinate cut fraction 1/8 at d=128
        let kernel = weight_chain(&model(8, 128, 0.1)).unwrap();
        let r = (0..=kernel.d())
            .min_by(|&a, &b| {
                let fa = (kernel.ball_fraction(a) - 0.125).abs();
                let fb = (kernel.ball_fraction(b) - 0.125).abs();
                fa.partial_cmp(&fb).unwrap()
            })
            .unwrap();
        assert_eq!(r, 107);
        let p = ball_profile(&kernel, r).unwrap();
        assert!((p.size_fraction - 0.11678051554450149).abs() < 1e-9);
        assert!((p.expansion - 0.2823218566014014).abs() < 1e-9);
    }

    #[test]
    fn ball_martingale_identity() {
        // expected successor volume of a threshold step equals the ball volume
        let kernel = weight_chain(&model(8, 16, 0.5)).unwrap();
        for r in [0usize, 3, 5, 9] {
            let lhs: f64 = (0..=kernel.d())
                .map(|s| kernel.stationary()[s] * kernel.stay_weight(s, r))
                .sum();
            assert!((lhs - kernel.ball_fraction(r)).abs() < 1e-12);
        }
    }

    #[test]
    fn level_monotonicity_small_instances() {
        for (k, d, eps) in [(2u32, 8u32, 0.1), (3, 5, 0.3), (2, 6, 0.5)] {
            let m = model(k, d, eps);
            for r in 0..d as usize {
                let check = level_monotonicity_check(&m, r).unwrap();
                assert!(check.holds, "({k},{d},{eps}) r={r}: {:?}", check.witness);
                assert!(check.max_projection_error < 1e-12);
            }
        }
    }

    #[test]
    fn esp_on_balls_transitions_and_absorption() {
        let kernel = weight_chain(&model(2, 6, 0.3)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let steps = esp_on_balls(&kernel, 200, &mut rng).unwrap();
        for w in steps.windows(2) {
            assert!(w[0].radius >= 0 && w[0].radius < kernel.d() as i64);
        }
        if let Some(last) = steps.last() {
            if steps.len() < 200 {
                assert!(last.radius < 0 || last.radius == kernel.d() as i64);
            }
        }
        // successor law sums to one: widths of the u-intervals partition (0,1]
        for r in 0..kernel.d() {
            let mut total = 1.0 - kernel.stay_weight(0, r); // empty-set interval
            let mut prev = kernel.stay_weight(0, r);
            for s in 1..=kernel.d() {
                let w = kernel.stay_weight(s, r);
                assert!(w <= prev + 1e-12);
                total += prev - w;
                prev = w;
            }
            total += prev;
            assert!((total - 1.0).abs() < 1e-12);
        }
        assert!(esp_on_balls(&weight_chain(&model(2, 4, 0.9)).unwrap(), 5, &mut rng).is_err());
    }

    #[test]
    fn vb_esp_on_balls_never_dies() {
        let kernel = weight_chain(&model(2, 8, 0.4)).unwrap();
        for seed in 0..20u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let steps = vb_esp_on_balls(&kernel, 60, &mut rng).unwrap();
            for st in &steps {
                assert!(st.radius >= 0);
                let c = st.walker_class.unwrap() as i64;
                assert!(c <= st.radius);
            }
        }
    }

    #[test]
    fn ball_step_and_law_on_tiny_cube() {
        let kernel = weight_chain(&model(2, 2, 0.5)).unwrap();
        // stay weights from r = 0: w_0 = 0.5625, w_1 = 0.1875, w_2 = 0.0625
        assert_eq!(ball_step(&kernel, 0, 0.6).unwrap(), -1);
        assert_eq!(ball_step(&kernel, 0, 0.5).unwrap(), 0);
        assert_eq!(ball_step(&kernel, 0, 0.125).unwrap(), 1);
        assert_eq!(ball_step(&kernel, 0, 0.05).unwrap(), 2);
        assert!(ball_step(&kernel, 0, 0.0).is_err());
        assert!(ball_step(&kernel, 3, 0.5).is_err());

        let law = ball_successor_law(&kernel, 0).unwrap();
        let expect = [(-1i64, 0.4375), (0, 0.375), (1, 0.125), (2, 0.0625)];
        assert_eq!(law.len(), expect.len());
        for ((r, p), (er, ep)) in law.iter().zip(expect.iter()) {
            assert_eq!(r, er);
            assert!((p - ep).abs() < 1e-15);
        }
        // set-size martingale in fraction units
        for r in 0..=2usize {
            let mean: f64 = ball_successor_law(&kernel, r)
                .unwrap()
                .iter()
                .map(|&(s, p)| if s < 0 { 0.0 } else { p * kernel.ball_fraction(s as usize) })
                .sum();
            assert!((mean - kernel.ball_fraction(r)).abs() < 1e-12);
        }
    }

    #[test]
    fn report_separates_cut_from_balls() {
        let m = model(8, 32, 0.1);
        let rep = counterexample_report(&m, 0.125, 0.01, Some(0.4)).unwrap();
        assert!(rep.cut_expansion_leq_eps);
        assert!(!rep.vacuous);
        assert!(!rep.degenerate_eps);
        assert_eq!(rep.min_ball_radius, Some(22));
        assert!((rep.coordinate_cut_expansion - 0.0875).abs() < 1e-15);
        assert_eq!(rep.separation_holds, Some(true));
        assert_eq!(rep.threshold_met, Some(true));
        assert!(counterexample_report(&m, 0.3, 0.01, None).is_err());
    }

    #[test]
    fn report_with_full_cap_lists_whole_cube_but_scopes_minimum() {
        let m = model(2, 6, 0.25);
        let rep = counterexample_report(&m, 0.5, 1.0, None).unwrap();
        assert_eq!(rep.balls.len(), 7);
        let last = rep.balls.last().unwrap();
        assert_eq!(last.radius, 6);
        assert!(last.expansion.abs() < 1e-12);
        // minimum skips the full cube
        assert!(rep.min_ball_radius.unwrap() < 6);
        assert!(rep.min_ball_expansion.unwrap() > 0.0);
    }

    #[test]
    fn capacity_guards() {
        assert!(weight_chain(&model(2, 20_000, 0.1)).is_err());
        assert!(ExplicitHypercube::new(&model(2, 30, 0.1)).is_err());
        let m = model(2, 13, 0.1); // 8192 vertices: explicit ok, dense graph not
        assert!(ExplicitHypercube::new(&m).is_ok());
        assert!(ExplicitHypercube::new(&m).unwrap().to_graph().is_err());
    }
}
