//! Concave mass curves and the drop/dominance/convergence inequalities
//! built on them.
//!
//! The curve of a mass vector `p` reports, for each budget `x`, the largest
//! mass obtainable by fractionally selecting vertices of total degree `x`,
//! greedily by density `p(i)/deg(i)`. It is piecewise linear, concave, and
//! starts at the origin; one walk step provably flattens it, which is what
//! every inequality in this module quantifies.

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::walks::{walk_step, MassVector};

/// Piecewise-linear concave curve through `(0, 0)`, constant beyond its
/// last breakpoint and zero for `x <= 0`.
#[derive(Clone, Debug)]
pub struct ConcaveCurve {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl ConcaveCurve {
    /// Breakpoint abscissae and ordinates, starting at `(0, 0)`.
    pub fn breakpoints(&self) -> (&[f64], &[f64]) {
        (&self.xs, &self.ys)
    }

    pub fn total_width(&self) -> f64 {
        *self.xs.last().unwrap()
    }

    pub fn total_mass(&self) -> f64 {
        *self.ys.last().unwrap()
    }

    /// Curve value by linear interpolation; clamped to 0 on the left and to
    /// the total mass on the right.
    pub fn eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x >= self.total_width() {
            return self.total_mass();
        }
        let i = match self.xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => return self.ys[i],
            Err(i) => i,
        };
        let (x0, y0) = (self.xs[i - 1], self.ys[i - 1]);
        let (x1, y1) = (self.xs[i], self.ys[i]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    /// Largest increase between consecutive slopes (0 when concave).
    pub fn max_concavity_violation(&self) -> f64 {
        let mut worst = 0.0f64;
        let mut prev_slope = f64::INFINITY;
        for i in 1..self.xs.len() {
            let slope = (self.ys[i] - self.ys[i - 1]) / (self.xs[i] - self.xs[i - 1]);
            worst = worst.max(slope - prev_slope);
            prev_slope = slope;
        }
        worst
    }
}

/// Curve of a nonnegative mass assignment (see module docs). Vertices tied
/// in density are merged into a single segment.
pub fn curve_of(g: &WeightedGraph, p: &MassVector) -> Result<ConcaveCurve> {
    if p.len() != g.n() {
        return Err(Error::invalid(format!(
            "mass vector length {} does not match n = {}",
            p.len(),
            g.n()
        )));
    }
    curve_of_values(g, p.as_slice())
}

/// As [`curve_of`] for a raw value slice (used for incoming-weight profiles
/// where constructing a [`MassVector`] would be noise).
pub fn curve_of_values(g: &WeightedGraph, values: &[f64]) -> Result<ConcaveCurve> {
    if values.len() != g.n() {
        return Err(Error::invalid("value slice length does not match the graph"));
    }
    let mut idx: Vec<usize> = Vec::with_capacity(g.n());
    for (i, &v) in values.iter().enumerate() {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::invalid(format!("entry {i} has invalid mass {v}")));
        }
        if g.degree(i) <= 0.0 {
            if v > 0.0 {
                return Err(Error::domain(format!(
                    "vertex {i} has zero degree but positive mass"
                )));
            }
            continue; // zero width, zero mass: contributes nothing
        }
        idx.push(i);
    }
    idx.sort_by(|&a, &b| {
        let da = values[a] / g.degree(a);
        let db = values[b] / g.degree(b);
        db.partial_cmp(&da).unwrap().then(a.cmp(&b))
    });
    let mut xs = vec![0.0];
    let mut ys = vec![0.0];
    let mut pos = 0usize;
    while pos < idx.len() {
        let density = values[idx[pos]] / g.degree(idx[pos]);
        let mut width = 0.0;
        let mut mass = 0.0;
        while pos < idx.len() && values[idx[pos]] / g.degree(idx[pos]) == density {
            width += g.degree(idx[pos]);
            mass += values[idx[pos]];
            pos += 1;
        }
        xs.push(xs.last().unwrap() + width);
        ys.push(ys.last().unwrap() + mass);
    }
    Ok(ConcaveCurve { xs, ys })
}

/// Parameter pair `(a, b)` of the dominance hypothesis
/// `C(d_S, a * vol(S)) <= b * vol(S)`, with its derived threshold,
/// mixture coefficients, and per-step decay factor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveDominanceParams {
    a: f64,
    b: f64,
}

impl CurveDominanceParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && a > 1.0) {
            return Err(Error::invalid(format!("parameter a must exceed 1, got {a}")));
        }
        if !(b.is_finite() && b > 0.0 && b < 1.0) {
            return Err(Error::invalid(format!("parameter b must lie in (0, 1), got {b}")));
        }
        Ok(CurveDominanceParams { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// `t = (b - b^2) / (a - b^2)`, the mass threshold the dominance proof
    /// splits at. Always in (0, 1).
    pub fn threshold(&self) -> f64 {
        (self.b - self.b * self.b) / (self.a - self.b * self.b)
    }

    /// Coefficient of the `C(p, b x)` term: `(a - b) / (a - b^2)`.
    pub fn low_coefficient(&self) -> f64 {
        (self.a - self.b) / (self.a - self.b * self.b)
    }

    /// Coefficient of the `C(p, a x / b)` term: `(b - b^2) / (a - b^2)`.
    /// The two coefficients sum to 1.
    pub fn high_coefficient(&self) -> f64 {
        (self.b - self.b * self.b) / (self.a - self.b * self.b)
    }

    /// Per-step decay `(sqrt(a) - sqrt(b)) * (1 - sqrt(b)) / (sqrt(a) + b)`.
    pub fn decay(&self) -> f64 {
        let (ra, rb) = (self.a.sqrt(), self.b.sqrt());
        (ra - rb) * (1.0 - rb) / (ra + self.b)
    }
}

/// Chord-inequality residual at integral `x`:
/// `1/2 (C(p, x(1-gap)) + C(p, x(1+gap))) - C(Ap, x)`.
///
/// `gap` defaults to the graph's combinatorial gap; passing one explicitly
/// lets callers substitute restricted or degenerate variants. Nonnegative
/// (within 1e-9) whenever `gap` is a valid combinatorial gap of `g`.
pub fn chord_slack(g: &WeightedGraph, p: &MassVector, x: usize, gap: Option<f64>) -> Result<f64> {
    if !g.is_unit_regular() {
        return Err(Error::domain("chord slack requires a unit-regular graph"));
    }
    if x == 0 || 2 * x > g.n() {
        return Err(Error::invalid(format!(
            "x must lie in 1..=n/2, got {x} with n = {}",
            g.n()
        )));
    }
    let gap = match gap {
        Some(v) => {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::invalid(format!("gap must lie in [0, 1], got {v}")));
            }
            v
        }
        None => crate::gaps::comb_gap(g)?.value,
    };
    let cp = curve_of(g, p)?;
    let cap = curve_of(g, &walk_step(g, p)?)?;
    let x = x as f64;
    Ok(0.5 * (cp.eval(x * (1.0 - gap)) + cp.eval(x * (1.0 + gap))) - cap.eval(x))
}

/// Dominance-inequality residual at `x = s_size`:
/// `c_low C(p, b x) + c_high C(p, a x / b) - C(Ap, x)`.
///
/// Only meaningful when the hypothesis `C(d_S, a vol(S)) <= b vol(S)` has
/// been certified for every `S` (see the gap-measures hypothesis check);
/// with an uncertified pair the residual can go negative.
pub fn dominance_slack(
    g: &WeightedGraph,
    p: &MassVector,
    s_size: usize,
    params: &CurveDominanceParams,
) -> Result<f64> {
    if !g.is_unit_regular() {
        return Err(Error::domain("dominance slack requires a unit-regular graph"));
    }
    if s_size == 0 || 2 * s_size > g.n() {
        return Err(Error::invalid(format!(
            "set size must lie in 1..=n/2, got {s_size} with n = {}",
            g.n()
        )));
    }
    let cp = curve_of(g, p)?;
    let cap = curve_of(g, &walk_step(g, p)?)?;
    let x = s_size as f64;
    let rhs = params.low_coefficient() * cp.eval(params.b() * x)
        + params.high_coefficient() * cp.eval(params.a() * x / params.b());
    Ok(rhs - cap.eval(x))
}

/// Deviation envelope `x/n + c sqrt(min(x, n-x)) (1 - decay(a,b))^t`.
pub fn convergence_envelope(
    params: &CurveDominanceParams,
    c: f64,
    t: u32,
    x: f64,
    n: usize,
) -> Result<f64> {
    if c < 0.0 {
        return Err(Error::invalid("envelope coefficient must be nonnegative"));
    }
    if !(0.0..=n as f64).contains(&x) {
        return Err(Error::invalid(format!("x must lie in [0, {n}], got {x}")));
    }
    let deviation = x.min(n as f64 - x).sqrt();
    Ok(x / n as f64 + c * deviation * (1.0 - params.decay()).powi(t as i32))
}

/// Square-root mixing envelope `x/n + sqrt(x) (1 - gap^2/8)^t` that the
/// chord inequality iterates to.
pub fn mixing_envelope(gap: f64, t: u32, x: f64, n: usize) -> f64 {
    x / n as f64 + x.sqrt() * (1.0 - gap * gap / 8.0).powi(t as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphFamily};

    fn cycle(n: usize) -> WeightedGraph {
        generate(&GraphFamily::Cycle { n }).unwrap()
    }

    fn complete(n: usize) -> WeightedGraph {
        generate(&GraphFamily::Complete { n }).unwrap()
    }

    #[test]
    fn curve_interpolation_examples() {
        let g = cycle(4);
        let p = MassVector::new(vec![0.4, 0.3, 0.2, 0.1]).unwrap();
        let c = curve_of(&g, &p).unwrap();
        assert!((c.eval(1.0) - 0.4).abs() < 1e-15);
        assert!((c.eval(2.0) - 0.7).abs() < 1e-15);
        assert!((c.eval(2.5) - 0.8).abs() < 1e-15);
        assert_eq!(c.eval(0.0), 0.0);
        assert_eq!(c.eval(-3.0), 0.0);
        assert!((c.eval(9.0) - 1.0).abs() < 1e-15);
        assert_eq!(c.max_concavity_violation(), 0.0);
    }

    #[test]
    fn uniform_curve_is_linear() {
        let g = complete(5);
        let c = curve_of(&g, &MassVector::uniform(5).unwrap()).unwrap();
        for x in [0.3, 1.0, 2.5, 4.9] {
            assert!((c.eval(x) - x / 5.0).abs() < 1e-12);
        }
        // all densities tie: one merged segment
        assert_eq!(c.breakpoints().0.len(), 2);
    }

    #[test]
    fn curve_after_one_step_on_c4() {
        let g = cycle(4);
        let p = walk_step(&g, &MassVector::indicator(4, 0).unwrap()).unwrap();
        let c = curve_of(&g, &p).unwrap();
        assert!((c.eval(1.0) - 0.5).abs() < 1e-15);
        assert!((c.eval(2.0) - 1.0).abs() < 1e-15);
        assert!((c.eval(3.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn curve_rejects_mass_on_zero_degree_vertices() {
        let g = WeightedGraph::from_edges(3, &[(0, 1, 1.0)]).unwrap();
        assert!(curve_of_values(&g, &[0.5, 0.5, 0.1]).is_err());
        let c = curve_of_values(&g, &[0.5, 0.5, 0.0]).unwrap();
        assert_eq!(c.total_width(), 2.0);
        assert!((c.eval(2.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn chord_slack_hand_examples() {
        let c4 = cycle(4);
        let chi = MassVector::indicator(4, 0).unwrap();
        let s = chord_slack(&c4, &chi, 1, Some(0.0)).unwrap();
        assert!((s - 0.5).abs() < 1e-12);

        let k4 = complete(4);
        let chi = MassVector::indicator(4, 0).unwrap();
        let s = chord_slack(&k4, &chi, 1, Some(2.0 / 3.0)).unwrap();
        assert!((s - 1.0 / 3.0).abs() < 1e-12);

        // uniform p: both sides equal x/n
        let u = MassVector::uniform(4).unwrap();
        let s = chord_slack(&c4, &u, 2, None).unwrap();
        assert!(s.abs() < 1e-12);

        assert!(chord_slack(&c4, &chi, 0, Some(0.5)).is_err());
        assert!(chord_slack(&c4, &chi, 3, Some(0.5)).is_err());
        assert!(chord_slack(&c4, &chi, 1, Some(1.5)).is_err());
    }

    #[test]
    fn dominance_params_derived_quantities() {
        let p = CurveDominanceParams::new(4.0, 0.25).unwrap();
        assert!((p.threshold() - 0.047619047619047616).abs() < 1e-15);
        assert!((p.high_coefficient() - 0.047619047619047616).abs() < 1e-15);
        assert!((p.low_coefficient() - 0.9523809523809523).abs() < 1e-15);
        assert!((p.low_coefficient() + p.high_coefficient() - 1.0).abs() < 1e-15);
        assert!((p.decay() - 1.0 / 3.0).abs() < 1e-15);
        assert!(CurveDominanceParams::new(1.0, 0.5).is_err());
        assert!(CurveDominanceParams::new(2.0, 1.0).is_err());
        assert!(CurveDominanceParams::new(2.0, 0.0).is_err());
    }

    #[test]
    fn dominance_slack_uniform_is_zero_in_the_linear_regime() {
        let g = complete(4);
        let u = MassVector::uniform(4).unwrap();
        // a x / b = 4 = n keeps both curve reads on the linear segment,
        // where the coefficients are calibrated to cancel exactly
        let params = CurveDominanceParams::new(1.5, 0.75).unwrap();
        let s = dominance_slack(&g, &u, 2, &params).unwrap();
        assert!(s.abs() < 1e-12);

        // once a x / b overshoots the total width the high read clamps at
        // full mass and the residual goes negative
        let clamped = CurveDominanceParams::new(4.0, 0.25).unwrap();
        let s = dominance_slack(&g, &u, 2, &clamped).unwrap();
        assert!((s + 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn envelope_examples() {
        let p = CurveDominanceParams::new(4.0, 0.25).unwrap();
        let e0 = convergence_envelope(&p, 1.0, 0, 1.0, 4).unwrap();
        assert!((e0 - 1.25).abs() < 1e-15);
        let e1 = convergence_envelope(&p, 1.0, 1, 1.0, 4).unwrap();
        assert!((e1 - (0.25 + 2.0 / 3.0)).abs() < 1e-15);
        // deviation term uses min(x, n-x)
        let near_full = convergence_envelope(&p, 1.0, 0, 3.0, 4).unwrap();
        assert!((near_full - 1.75).abs() < 1e-15);
        // b -> 1 kills progress
        let stale = CurveDominanceParams::new(2.0, 0.999_999_999).unwrap();
        assert!(stale.decay() < 1e-8);
        assert!(convergence_envelope(&p, -1.0, 0, 1.0, 4).is_err());
    }

    #[test]
    fn mixing_envelope_matches_formula() {
        let v = mixing_envelope(0.5, 3, 2.0, 8);
        let expect = 0.25 + 2.0f64.sqrt() * (1.0 - 0.25 / 8.0f64).powi(3);
        assert!((v - expect).abs() < 1e-15);
    }
}
