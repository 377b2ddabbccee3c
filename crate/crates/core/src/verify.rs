//! The check registry: every exhaustively checkable claim in the library,
//! run over the standard battery with a caller-supplied seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::battery::{standard_battery, BatteryGraph};
use crate::curve::{
    chord_slack, convergence_envelope, curve_of, dominance_slack, CurveDominanceParams,
};
use crate::error::Result;
use crate::esp::{gauge_exact, mp_identity_check};
use crate::gaps::{
    certified_pair, comb_gap, curve_hypothesis_check, graph_certified_pair, relation_check,
    vertex_profile,
};
use crate::graph::{expansion, for_each_subset, graph_power, VertexSet, WeightedGraph};
use crate::hypercube::{
    coordinate_cut_expansion, counterexample_report, level_monotonicity_check, weight_chain,
    ExplicitHypercube, HypercubeModel,
};
use crate::walks::{walk_step, MassVector};

/// Outcome of one registry check.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    /// Number of individual assertions the check evaluated.
    pub cases: usize,
    /// Worst raw violation seen (positive means the inequality was broken
    /// before the tolerance was applied).
    pub max_violation: f64,
    pub detail: String,
}

fn result(name: &str, pass: bool, cases: usize, max_violation: f64, detail: String) -> CheckResult {
    // `+ 0.0` flushes a negated zero slack back to plain 0.0 for the report
    let max_violation = if max_violation.is_finite() { max_violation + 0.0 } else { 0.0 };
    CheckResult { name: name.to_string(), pass, cases, max_violation, detail }
}

fn guard(name: &str, r: Result<CheckResult>) -> CheckResult {
    match r {
        Ok(c) => c,
        Err(e) => result(name, false, 0, 0.0, format!("internal error: {e}")),
    }
}

fn random_mass(n: usize, rng: &mut ChaCha8Rng) -> Result<MassVector> {
    loop {
        let raw: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        let total: f64 = raw.iter().sum();
        if total > 1e-12 {
            return MassVector::new(raw.into_iter().map(|v| v / total).collect());
        }
    }
}

/// Calls `f` on every nonempty subset of at most half the vertices (and
/// half the volume), as a `VertexSet` plus its incoming weight vector.
fn sweep_sets<F>(g: &WeightedGraph, mut f: F) -> Result<()>
where
    F: FnMut(&VertexSet, &[f64]) -> Result<()>,
{
    let mut failure = None;
    for_each_subset(g, g.n() / 2, g.volume() / 2.0, |view| {
        if failure.is_some() {
            return;
        }
        let out = VertexSet::new(g, view.members.iter().copied())
            .and_then(|s| f(&s, view.incoming));
        if let Err(e) = out {
            failure = Some(e);
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// Runs every registered check over the standard battery. Deterministic in
/// `seed`; internal errors surface as failed checks rather than panics.
pub fn run_verify(seed: u64) -> Vec<CheckResult> {
    let battery = match standard_battery(seed) {
        Ok(b) => b,
        Err(e) => {
            return vec![result(
                "battery",
                false,
                0,
                0.0,
                format!("battery construction failed: {e}"),
            )]
        }
    };
    let lazy: Vec<&BatteryGraph> = battery.iter().filter(|b| b.graph.is_lazy()).collect();
    vec![
        guard("l:comb_drop", check_comb_drop(&battery, seed)),
        guard("l:drop_by_upper_area", check_drop_by_upper_area(&battery, seed)),
        guard("l:upper_area_bound", check_upper_area_bound(&battery)),
        guard("t:cgap", check_cgap(&battery)),
        guard("c:MP", check_mp(&battery)),
        guard("l:relation", check_relation(&battery)),
        guard("c:power-chain", check_power_chain(&battery)),
        guard("l:vertex-profile", check_vertex_profile(&lazy)),
        guard("l:comb_drop_vertex", check_comb_drop_vertex(&lazy, seed)),
        guard("l:lovasz", check_lovasz(&lazy)),
        guard("t:vertex", check_vertex_gauge(&lazy)),
        guard("c:dimension", check_dimension()),
        guard("l:level", check_level()),
        guard("l:hamming-numeric", check_hamming_numeric()),
        guard("t:hypercube", check_hypercube(seed)),
    ]
}

/// Chord bound on the post-step curve, all battery graphs, singleton and
/// random mass vectors, every integral `x <= n/2`.
fn check_comb_drop(battery: &[BatteryGraph], seed: u64) -> Result<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1000));
    let mut cases = 0usize;
    let mut worst = f64::NEG_INFINITY;
    let mut random_count = 0usize;
    for b in battery {
        let n = b.graph.n();
        let gap = comb_gap(&b.graph)?.value;
        let mut masses: Vec<MassVector> = Vec::new();
        for v in 0..n {
            masses.push(MassVector::indicator(n, v)?);
        }
        for _ in 0..8 {
            masses.push(random_mass(n, &mut rng)?);
            random_count += 1;
        }
        for p in &masses {
            for x in 1..=n / 2 {
                let slack = chord_slack(&b.graph, p, x, Some(gap))?;
                worst = worst.max(-slack);
                cases += 1;
            }
        }
    }
    Ok(result(
        "l:comb_drop",
        worst <= 1e-9,
        cases,
        worst,
        format!(
            "{} graphs, {random_count} random mass vectors, min slack {:+.3e}",
            battery.len(),
            -worst + 0.0
        ),
    ))
}

/// Post-step mass on `S` is bounded by the averaged chord of the curve at
/// twice the upper area of `d_S` and its reflection.
fn check_drop_by_upper_area(battery: &[BatteryGraph], seed: u64) -> Result<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1001));
    let mut cases = 0usize;
    let mut worst = f64::NEG_INFINITY;
    for b in battery {
        let g = &b.graph;
        let mut masses = Vec::new();
        for _ in 0..3 {
            let p = random_mass(g.n(), &mut rng)?;
            let curve = curve_of(g, &p)?;
            masses.push((p, curve));
        }
        sweep_sets(g, |s, incoming| {
            let size = s.size() as f64;
            let upper: f64 = incoming.iter().map(|d| (d - 0.5).max(0.0)).sum();
            for (p, curve) in &masses {
                let lhs: f64 = (0..g.n()).map(|i| p.get(i) * incoming[i]).sum();
                let rhs = 0.5 * (curve.eval(2.0 * upper) + curve.eval(2.0 * (size - upper)));
                worst = worst.max(lhs - rhs);
                cases += 1;
            }
            Ok(())
        })?;
    }
    Ok(result(
        "l:drop_by_upper_area",
        worst <= 1e-9,
        cases,
        worst,
        format!("{cases} set/mass cases, min slack {:+.3e}", -worst + 0.0),
    ))
}

/// The upper area of `d_S` above half-degree is at most `(1 - gap) |S| / 2`.
fn check_upper_area_bound(battery: &[BatteryGraph]) -> Result<CheckResult> {
    let mut cases = 0usize;
    let mut worst = f64::NEG_INFINITY;
    for b in battery {
        let g = &b.graph;
        let gap = comb_gap(g)?.value;
        sweep_sets(g, |s, incoming| {
            let upper: f64 = incoming.iter().map(|d| (d - 0.5).max(0.0)).sum();
            worst = worst.max(upper - (1.0 - gap) * s.size() as f64 / 2.0);
            cases += 1;
            Ok(())
        })?;
    }
    Ok(result(
        "l:upper_area_bound",
        worst <= 1e-9,
        cases,
        worst,
        format!("{cases} sets, min slack {:+.3e}", -worst + 0.0),
    ))
}

/// The exact gauge of every set dominates `gap^2 / 8`.
fn check_cgap(battery: &[BatteryGraph]) -> Result<CheckResult> {
    let mut cases = 0usize;
    let mut worst = f64::NEG_INFINITY;
    for b in battery {
        let g = &b.graph;
        let gap = comb_gap(g)?.value;
        let floor = gap * gap / 8.0;
        sweep_sets(g, |s, _| {
            let psi = gauge_exact(g, s)?;
            worst = worst.max(floor - psi);
            cases += 1;
            Ok(())
        })?;
    }
    Ok(result(
        "t:cgap",
        worst <= 1e-9,
        cases,
        worst,
        format!("{cases} sets, min slack {:+.3e}", -worst + 0.0),
    ))
}

/// Truncated-mass identity on a 99-point threshold grid, every set.
fn check_mp(battery: &[BatteryGraph]) -> Result<CheckResult> {
    let mut cases = 0usize;
    let mut worst = 0.0f64;
    for b in battery {
        let g = &b.graph;
        sweep_sets(g, |s, _| {
            for k in 1..=99 {
                let t = k as f64 / 100.0;
                let (lhs, rhs) = mp_identity_check(g, s, t)?;
                worst = worst.max((lhs - rhs).abs());
                cases += 1;
            }
            Ok(())
        })?;
    }
    Ok(result(
        "c:MP",
        worst <= 1e-12,
        cases,
        worst,
        format!("{cases} identities, max |lhs - rhs| {:.3e}", worst),
    ))
}

/// Half-scale gap dominates half the small-set expansion.
fn check_relation(battery: &[BatteryGraph]) -> Result<CheckResult> {
    let mut cases = 0usize;
    let mut worst = f64::NEG_INFINITY;
    for b in battery {
        let n = b.graph.n();
        for delta in [0.5, 0.25] {
            if (delta / 2.0 * n as f64 + 1e-9).floor() < 1.0 {
                continue;
            }
            let (lhs, rhs) = relation_check(&b.graph, delta)?;
            worst = worst.max(rhs - lhs);
            cases += 1;
        }
    }
    Ok(result(
        "l:relation",
        worst <= 1e-9,
        cases,
        worst,
        format!("{cases} graph/scale pairs, min slack {:+.3e}", -worst + 0.0),
    ))
}

/// Chord and relation survive taking graph powers; the gap growth under
/// squaring is reported, not asserted.
fn check_power_chain(battery: &[BatteryGraph]) -> Result<CheckResult> {
    let mut cases = 0usize;
    let mut worst = f64::NEG_INFINITY;
    let mut ratio_lo = f64::INFINITY;
    let mut ratio_hi = f64::NEG_INFINITY;
    for b in battery {
        let n = b.graph.n();
        let base_gap = comb_gap(&b.graph)?.value;
        let mut square_gap = None;
        for s in [1u32, 2, 4] {
            let h = graph_power(&b.graph, s)?;
            if !h.is_unit_regular() {
                return Ok(result(
                    "c:power-chain",
                    false,
                    cases,
                    1.0,
                    format!("{}^{s} lost unit-regularity", b.name),
                ));
            }
            let gap_h = comb_gap(&h)?.value;
            if s == 2 {
                square_gap = Some(gap_h);
            }
            for v in 0..n {
                let p = MassVector::indicator(n, v)?;
                for x in 1..=n / 2 {
                    let slack = chord_slack(&h, &p, x, Some(gap_h))?;
                    worst = worst.max(-slack);
                    cases += 1;
                }
            }
            if (0.25 * n as f64 + 1e-9).floor() >= 1.0 {
                let (lhs, rhs) = relation_check(&h, 0.5)?;
                worst = worst.max(rhs - lhs);
                cases += 1;
            }
        }
        if base_gap > 1e-12 {
            let ratio = square_gap.unwrap() / base_gap;
            ratio_lo = ratio_lo.min(ratio);
            ratio_hi = ratio_hi.max(ratio);
        }
    }
    Ok(result(
        "c:power-chain",
        worst <= 1e-9,
        cases,
        worst,
        format!(
            "{cases} cases over powers 1/2/4, min slack {:+.3e}; squared-gap ratio in [{:.3}, {:.3}] where the base gap is positive",
            -worst + 0.0, ratio_lo, ratio_hi
        ),
    ))
}

/// The per-set pair `(1 + phi_v, 1 - phi/2)` certifies the incoming-weight
/// curve on every lazy graph.
fn check_vertex_profile(lazy: &[&BatteryGraph]) -> Result<CheckResult> {
    let mut cases = 0usize;
    let mut worst = f64::NEG_INFINITY;
    for b in lazy {
        let g = &b.graph;
        sweep_sets(g, |s, incoming| {
            let (a, bb) = certified_pair(g, s)?;
            let curve = crate::curve::curve_of_values(g, incoming)?;
            let vol = s.volume();
            worst = worst.max(curve.eval(a * vol) - bb * vol);
            cases += 1;
            Ok(())
        })?;
    }
    Ok(result(
        "l:vertex-profile",
        worst <= 1e-9,
        cases,
        worst,
        format!("{cases} sets on {} lazy graphs, min slack {:+.3e}", lazy.len(), -worst),
    ))
}

/// With the graph-level certified pair, the two-point dominance bound holds
/// for arbitrary mass vectors, and the upper area above the crossing
/// threshold obeys its budget.
fn check_comb_drop_vertex(lazy: &[&BatteryGraph], seed: u64) -> Result<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1002));
    let mut cases = 0usize;
    let mut worst_dom = f64::NEG_INFINITY;
    let mut worst_area = f64::NEG_INFINITY;
    for b in lazy {
        let g = &b.graph;
        let n = g.n();
        let (a, bb) = graph_certified_pair(g)?;
        let hyp = curve_hypothesis_check(g, a, bb)?;
        if !hyp.holds {
            return Ok(result(
                "l:comb_drop_vertex",
                false,
                cases,
                hyp.max_violation,
                format!("certified pair failed its own hypothesis on {}", b.name),
            ));
        }
        let params = CurveDominanceParams::new(a, bb)?;
        let mut masses: Vec<MassVector> = Vec::new();
        for v in 0..n {
            masses.push(MassVector::indicator(n, v)?);
        }
        for _ in 0..5 {
            masses.push(random_mass(n, &mut rng)?);
        }
        for p in &masses {
            for x in 1..=n / 2 {
                let slack = dominance_slack(g, p, x, &params)?;
                worst_dom = worst_dom.max(-slack);
                cases += 1;
            }
        }
        let t = params.threshold();
        let budget = params.b() * params.low_coefficient();
        sweep_sets(g, |s, incoming| {
            let upper: f64 = incoming.iter().map(|d| (d - t).max(0.0)).sum();
            worst_area = worst_area.max(upper - budget * s.size() as f64);
            cases += 1;
            Ok(())
        })?;
    }
    let worst = worst_dom.max(worst_area);
    Ok(result(
        "l:comb_drop_vertex",
        worst <= 1e-9,
        cases,
        worst,
        format!(
            "{} lazy graphs certified; dominance min slack {:+.3e}, area-budget min slack {:+.3e}",
            lazy.len(),
            -worst_dom + 0.0,
            -worst_area + 0.0
        ),
    ))
}

/// Singleton starts contract to uniform inside the square-root envelope
/// driven by the certified decay rate.
fn check_lovasz(lazy: &[&BatteryGraph]) -> Result<CheckResult> {
    let mut cases = 0usize;
    let mut worst = f64::NEG_INFINITY;
    for b in lazy {
        let g = &b.graph;
        let n = g.n();
        let (a, bb) = graph_certified_pair(g)?;
        let params = CurveDominanceParams::new(a, bb)?;
        for v in 0..n {
            let mut p = MassVector::indicator(n, v)?;
            for t in 1..=50u32 {
                p = walk_step(g, &p)?;
                let curve = curve_of(g, &p)?;
                for x in 1..=n {
                    let bound = convergence_envelope(&params, 1.0, t, x as f64, n)?;
                    worst = worst.max(curve.eval(x as f64) - bound);
                    cases += 1;
                }
            }
        }
    }
    Ok(result(
        "l:lovasz",
        worst <= 1e-9,
        cases,
        worst,
        format!("{cases} envelope evaluations over 50 steps, min slack {:+.3e}", -worst + 0.0),
    ))
}

/// The gauge dominates both the vertex-measure product over 18 and the
/// certified decay rate on lazy graphs.
fn check_vertex_gauge(lazy: &[&BatteryGraph]) -> Result<CheckResult> {
    let mut cases = 0usize;
    let mut worst_psi = f64::NEG_INFINITY;
    let mut worst_decay = f64::NEG_INFINITY;
    for b in lazy {
        let g = &b.graph;
        let (a, bb) = graph_certified_pair(g)?;
        let decay = if curve_hypothesis_check(g, a, bb)?.holds {
            Some(CurveDominanceParams::new(a, bb)?.decay())
        } else {
            None
        };
        sweep_sets(g, |s, _| {
            let psi = gauge_exact(g, s)?;
            let profile = vertex_profile(g, s)?;
            worst_psi = worst_psi.max(profile.psi_product / 18.0 - psi);
            cases += 1;
            if let Some(rate) = decay {
                worst_decay = worst_decay.max(rate - psi);
                cases += 1;
            }
            Ok(())
        })?;
    }
    let worst = worst_psi.max(worst_decay);
    Ok(result(
        "t:vertex",
        worst <= 1e-9,
        cases,
        worst,
        format!(
            "{cases} cases; product/18 min slack {:+.3e}, decay-rate min slack {:+.3e}",
            -worst_psi + 0.0, -worst_decay + 0.0
        ),
    ))
}

/// The coordinate cut's expansion is `eps (k-1)/k` independent of the
/// dimension, and matches the explicit cube on small instances.
fn check_dimension() -> Result<CheckResult> {
    let mut cases = 0usize;
    let mut worst = 0.0f64;
    let mut pinned = None;
    for k in [2u32, 4, 8] {
        for d in [1u32, 16, 128] {
            for eps in [0.1, 0.3] {
                let m = HypercubeModel::new(k, d, eps)?;
                let (phi, frac) = coordinate_cut_expansion(&m);
                let expected = eps * (k as f64 - 1.0) / k as f64;
                worst = worst.max((phi - expected).abs());
                worst = worst.max((frac - 1.0 / k as f64).abs());
                worst = worst.max(phi - eps);
                cases += 3;
                if k == 8 && (eps - 0.1).abs() < 1e-15 {
                    match pinned {
                        None => pinned = Some(phi),
                        Some(prev) => {
                            worst = worst.max((phi - prev as f64).abs());
                            cases += 1;
                        }
                    }
                }
            }
        }
    }
    for (k, d, eps) in [(2u32, 3u32, 0.1), (2, 3, 0.3), (3, 2, 0.3)] {
        let m = HypercubeModel::new(k, d, eps)?;
        let cube = ExplicitHypercube::new(&m)?;
        let g = cube.to_graph()?;
        let members = (0..cube.len()).filter(|&i| cube.digits(i)[0] == 0);
        let s = VertexSet::new(&g, members)?;
        let (phi, _) = coordinate_cut_expansion(&m);
        worst = worst.max((expansion(&g, &s)? - phi).abs());
        cases += 1;
    }
    Ok(result(
        "c:dimension",
        worst <= 1e-12,
        cases,
        worst,
        format!(
            "{cases} cases, max deviation {:.3e}; cut expansion at k=8, eps=0.1 is {:.6} for every dimension",
            worst,
            pinned.unwrap_or(f64::NAN)
        ),
    ))
}

/// Per-vertex in-ball weights match the class chain and decrease along
/// weight classes, for every radius of every small cube.
fn check_level() -> Result<CheckResult> {
    let mut cases = 0usize;
    let mut worst = 0.0f64;
    let mut monotone_ok = true;
    for (k, dmax) in [(2u32, 8u32), (3, 5)] {
        for d in 1..=dmax {
            for eps in [0.1, 0.3, 0.5] {
                let m = HypercubeModel::new(k, d, eps)?;
                for r in 0..=d as usize {
                    let lc = level_monotonicity_check(&m, r)?;
                    worst = worst.max(lc.max_projection_error);
                    if lc.witness.is_some() {
                        monotone_ok = false;
                    }
                    cases += 1;
                }
            }
        }
    }
    Ok(result(
        "l:level",
        monotone_ok && worst <= 1e-9,
        cases,
        worst,
        format!(
            "{cases} radius checks, max projection error {:.3e}, monotone everywhere: {monotone_ok}",
            worst
        ),
    ))
}

/// Frozen numerics for the noisy-hypercube family at `k = 8, eps = 0.1`.
fn check_hamming_numeric() -> Result<CheckResult> {
    let mut cases = 0usize;
    let mut worst = 0.0f64;
    let mut mins = Vec::new();
    let pins: [(u32, usize, f64); 3] = [
        (32, 22, 0.410_782_293_627_398_04),
        (64, 48, 0.444_568_226_934_209_3),
        (128, 102, 0.439_193_278_076_996_15),
    ];
    for (d, want_r, want_min) in pins {
        let m = HypercubeModel::new(8, d, 0.1)?;
        let report = counterexample_report(&m, 0.125, 0.01, None)?;
        let r = report.min_ball_radius.unwrap_or(usize::MAX);
        let e = report.min_ball_expansion.unwrap_or(f64::NAN);
        if r != want_r {
            return Ok(result(
                "l:hamming-numeric",
                false,
                cases,
                1.0,
                format!("d={d}: minimizing radius {r}, expected {want_r}"),
            ));
        }
        worst = worst.max((e - want_min).abs());
        worst = worst.max((report.coordinate_cut_expansion - 0.0875).abs());
        if report.separation_holds != Some(true) {
            return Ok(result(
                "l:hamming-numeric",
                false,
                cases,
                1.0,
                format!("d={d}: no separation between the small balls and the cut"),
            ));
        }
        cases += 3;
        mins.push(e);
    }
    let m = HypercubeModel::new(8, 128, 0.1)?;
    let kernel = weight_chain(&m)?;
    let mut nearest = (0usize, f64::INFINITY);
    for r in 0..=kernel.d() {
        let gap = (kernel.ball_fraction(r) - 0.125).abs();
        if gap < nearest.1 {
            nearest = (r, gap);
        }
    }
    let profile = crate::hypercube::ball_profile(&kernel, nearest.0)?;
    worst = worst.max((profile.size_fraction - 0.116_780_515_544_501_49).abs());
    worst = worst.max((profile.expansion - 0.282_321_856_601_401_4).abs());
    cases += 3;
    let radius_ok = nearest.0 == 107;
    Ok(result(
        "l:hamming-numeric",
        radius_ok && worst <= 1e-9,
        cases,
        worst,
        format!(
            "min in-cap expansions: d=32 {:.6}, d=64 {:.6}, d=128 {:.6} (not monotone in d); \
             ball nearest fraction 1/8 at d=128 has radius {} and expansion {:.6}",
            mins[0], mins[1], mins[2], nearest.0, profile.expansion
        ),
    ))
}

/// The cut-versus-balls contrast at `(8, 128, 0.1)`: the coordinate cut
/// stays under `eps` while every ball under the 1% size cap keeps
/// expansion above 0.43.
fn check_hypercube(_seed: u64) -> Result<CheckResult> {
    let m = HypercubeModel::new(8, 128, 0.1)?;
    let report = counterexample_report(&m, 0.125, 0.01, Some(0.43))?;
    let min = report.min_ball_expansion.unwrap_or(f64::NAN);
    let pinned = 0.439_193_278_076_996_15;
    let worst = (min - pinned).abs();
    let mut cases = 5usize;
    for (ok, label) in [
        (!report.vacuous, "non-vacuous"),
        (report.separation_holds == Some(true), "separation"),
        (report.threshold_met == Some(true), "threshold"),
        (report.cut_expansion_leq_eps, "cut <= eps"),
    ] {
        if !ok {
            return Ok(result(
                "t:hypercube",
                false,
                cases,
                worst.max(1.0),
                format!("report assertion failed: {label}"),
            ));
        }
    }
    cases += report.balls.len();
    Ok(result(
        "t:hypercube",
        worst <= 1e-9,
        cases,
        worst,
        format!(
            "cut expansion {:.6} <= eps; {} balls under cap 0.01, minimum expansion {:.17} at radius {}; \
             every small ball clears the 0.43 floor (a 0.9 floor would fail)",
            report.coordinate_cut_expansion,
            report.balls.len(),
            min,
            report.min_ball_radius.unwrap_or(usize::MAX)
        ),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_passes_and_is_deterministic() {
        let first = run_verify(7);
        assert_eq!(first.len(), 15);
        for c in &first {
            assert!(c.pass, "{} failed: {}", c.name, c.detail);
            assert!(c.cases > 0, "{} ran no cases", c.name);
        }
        let second = run_verify(7);
        for (a, b) in first.iter().zip(second.iter()) {
            assert_eq!(a.name, b.name);
            assert_eq!(a.pass, b.pass);
            assert_eq!(a.cases, b.cases);
            assert_eq!(a.max_violation.to_bits(), b.max_violation.to_bits());
            assert_eq!(a.detail, b.detail);
        }
    }

    #[test]
    fn registry_names_are_stable() {
        let names: Vec<String> = run_verify(1).into_iter().map(|c| c.name).collect();
        assert_eq!(
            names,
            [
                "l:comb_drop",
                "l:drop_by_upper_area",
                "l:upper_area_bound",
                "t:cgap",
                "c:MP",
                "l:relation",
                "c:power-chain",
                "l:vertex-profile",
                "l:comb_drop_vertex",
                "l:lovasz",
                "t:vertex",
                "c:dimension",
                "l:level",
                "l:hamming-numeric",
                "t:hypercube",
            ]
        );
    }
}
