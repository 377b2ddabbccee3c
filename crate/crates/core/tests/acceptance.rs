//! End-to-end acceptance suite. Each test covers one numbered criterion and
//! prints a single pass/fail line; tolerances are pinned inline.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spexlab_core::battery::{standard_battery, BatteryGraph};
use spexlab_core::curve::{chord_slack, curve_of, mixing_envelope};
use spexlab_core::esp::{
    esp_sample_step, esp_step_at, esp_transition_distribution, gauge_exact, gauge_monte_carlo,
    mp_identity_check, vb_esp_sample_step, vb_transition_law,
};
use spexlab_core::gaps::{comb_gap, relation_check, vertex_profile};
use spexlab_core::graph::{graph_power, VertexSet, WeightedGraph};
use spexlab_core::hypercube::{
    ball_profile, ball_step, ball_successor_law, coordinate_cut_expansion, counterexample_report,
    level_monotonicity_check, pair_weight, weight_chain, ExplicitHypercube, HypercubeModel,
};
use spexlab_core::walks::{mixing_time, MassVector, MixingOutcome};

const BATTERY_SEED: u64 = 100;

fn battery() -> Vec<BatteryGraph> {
    standard_battery(BATTERY_SEED).expect("battery builds")
}

fn random_mass(n: usize, rng: &mut ChaCha8Rng) -> MassVector {
    let raw: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() + 1e-9).collect();
    let total: f64 = raw.iter().sum();
    MassVector::new(raw.into_iter().map(|v| v / total).collect()).unwrap()
}

/// All nonempty vertex subsets with at most half the members.
fn half_subsets(g: &WeightedGraph) -> Vec<VertexSet> {
    let n = g.n();
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        if mask.count_ones() as usize > n / 2 {
            continue;
        }
        let members = (0..n).filter(|&v| mask >> v & 1 == 1);
        out.push(VertexSet::new(g, members).unwrap());
    }
    out
}

fn report(criterion: u32, pass: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed: {detail}");
}

#[test]
fn criterion_1_chord_bound_on_random_masses() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4201);
    let mut triples = 0usize;
    let mut min_slack = f64::INFINITY;
    for b in battery() {
        let n = b.graph.n();
        let gap = comb_gap(&b.graph).unwrap().value;
        let mut masses: Vec<MassVector> = (0..4).map(|_| random_mass(n, &mut rng)).collect();
        for v in 0..n {
            masses.push(MassVector::indicator(n, v).unwrap());
        }
        for p in &masses {
            for x in 1..=n / 2 {
                let slack = chord_slack(&b.graph, p, x, Some(gap)).unwrap();
                min_slack = min_slack.min(slack);
                triples += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = triples >= 200 && min_slack >= -1e-9 && secs < 10.0;
    report(
        1,
        pass,
        &format!("{triples} (graph, mass, x) triples, min slack {min_slack:+.3e}, {secs:.2}s"),
    );
}

#[test]
fn criterion_2_gauge_dominates_gap_measures() {
    let start = Instant::now();
    let mut sets = 0usize;
    let mut min_gap_slack = f64::INFINITY;
    let mut min_psi_slack = f64::INFINITY;
    for b in battery() {
        let g = &b.graph;
        let gap = comb_gap(g).unwrap().value;
        let floor = gap * gap / 8.0;
        for s in half_subsets(g) {
            let gauge = gauge_exact(g, &s).unwrap();
            min_gap_slack = min_gap_slack.min(gauge - floor);
            sets += 1;
            if g.is_lazy() {
                let profile = vertex_profile(g, &s).unwrap();
                min_psi_slack = min_psi_slack.min(gauge - profile.psi_product / 18.0);
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = min_gap_slack >= -1e-9 && min_psi_slack >= -1e-9 && secs < 60.0;
    report(
        2,
        pass,
        &format!(
            "{sets} sets; gauge vs gap^2/8 min slack {min_gap_slack:+.3e}, \
             vs product/18 on lazy graphs {min_psi_slack:+.3e}, {secs:.2}s"
        ),
    );
}

#[test]
fn criterion_3_truncated_mass_identity() {
    let mut cases = 0usize;
    let mut worst = 0.0f64;
    for b in battery() {
        let g = &b.graph;
        for s in half_subsets(g) {
            for k in 1..=99 {
                let (lhs, rhs) = mp_identity_check(g, &s, k as f64 / 100.0).unwrap();
                worst = worst.max((lhs - rhs).abs());
                cases += 1;
            }
        }
    }
    let pass = worst <= 1e-12;
    report(3, pass, &format!("{cases} grid identities, max |lhs - rhs| {worst:.3e}"));
}

fn wilson_hilferty_z(chi2: f64, df: f64) -> f64 {
    let t = (chi2 / df).powf(1.0 / 3.0);
    let mu = 1.0 - 2.0 / (9.0 * df);
    let sd = (2.0 / (9.0 * df)).sqrt();
    (t - mu) / sd
}

/// Chi-square statistic with cells pooled (smallest expected first) until
/// every pooled cell expects at least 5. `None` when pooling leaves a
/// single cell.
fn pooled_chi2(probs: &[f64], counts: &[u64], draws: u64) -> Option<(f64, f64)> {
    let mut order: Vec<usize> = (0..probs.len()).collect();
    order.sort_by(|&a, &b| probs[a].partial_cmp(&probs[b]).unwrap().then(a.cmp(&b)));
    let mut groups: Vec<(f64, f64)> = Vec::new(); // (expected, observed)
    let mut acc = (0.0f64, 0.0f64);
    for &i in &order {
        acc.0 += probs[i] * draws as f64;
        acc.1 += counts[i] as f64;
        if acc.0 >= 5.0 {
            groups.push(acc);
            acc = (0.0, 0.0);
        }
    }
    if acc.0 > 0.0 {
        match groups.last_mut() {
            Some(last) => {
                last.0 += acc.0;
                last.1 += acc.1;
            }
            None => groups.push(acc),
        }
    }
    if groups.len() < 2 {
        return None;
    }
    let chi2: f64 = groups.iter().map(|(e, o)| (o - e) * (o - e) / e).sum();
    Some((chi2, groups.len() as f64 - 1.0))
}

#[test]
fn criterion_4_sampler_frequencies_match_exact_laws() {
    const DRAWS: u64 = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(4204);
    let mut max_z = f64::NEG_INFINITY;
    let mut tested = 0usize;
    for b in battery() {
        let g = &b.graph;
        if g.n() > 8 {
            continue;
        }
        for s in half_subsets(g) {
            // plain sampler against the threshold-atom law
            let atoms = esp_transition_distribution(g, &s).unwrap();
            let probs: Vec<f64> = atoms.iter().map(|a| a.probability).collect();
            let index: BTreeMap<usize, usize> = atoms
                .iter()
                .enumerate()
                .map(|(i, a)| (a.successor.size(), i))
                .collect();
            let mut counts = vec![0u64; atoms.len()];
            for _ in 0..DRAWS {
                let (next, _) = esp_sample_step(g, &s, &mut rng).unwrap();
                counts[index[&next.size()]] += 1;
            }
            if let Some((chi2, df)) = pooled_chi2(&probs, &counts, DRAWS) {
                max_z = max_z.max(wilson_hilferty_z(chi2, df));
            }

            // volume-biased sampler with a uniform walker over the set
            let law = vb_transition_law(g, &s).unwrap();
            let probs: Vec<f64> = law.iter().map(|(_, p)| *p).collect();
            let index: BTreeMap<usize, usize> = law
                .iter()
                .enumerate()
                .map(|(i, (succ, _))| (succ.size(), i))
                .collect();
            let mut counts = vec![0u64; law.len()];
            for _ in 0..DRAWS {
                let walker = s.members()[rng.gen_range(0..s.size())];
                let (next, _, _) = vb_esp_sample_step(g, &s, walker, &mut rng).unwrap();
                counts[index[&next.size()]] += 1;
            }
            if let Some((chi2, df)) = pooled_chi2(&probs, &counts, DRAWS) {
                max_z = max_z.max(wilson_hilferty_z(chi2, df));
            }
            tested += 1;
        }
    }

    // Monte Carlo gauge against the exact value on 50 seeded pairs
    let bat = battery();
    let mut pick = ChaCha8Rng::seed_from_u64(4242);
    let mut mc_cases = 0usize;
    let mut max_sigma = 0.0f64;
    let mut i = 0usize;
    while mc_cases < 50 {
        let b = &bat[i % bat.len()];
        i += 1;
        let n = b.graph.n();
        let size = pick.gen_range(1..=n / 2);
        let mut members: Vec<usize> = (0..n).collect();
        for j in 0..size {
            let k = pick.gen_range(j..n);
            members.swap(j, k);
        }
        let s = VertexSet::new(&b.graph, members[..size].iter().copied()).unwrap();
        let exact = gauge_exact(&b.graph, &s).unwrap();
        let (mc, stderr) = gauge_monte_carlo(&b.graph, &s, 4000, 9000 + i as u64).unwrap();
        let stderr = stderr.unwrap();
        if stderr == 0.0 {
            assert!((mc - exact).abs() < 1e-15);
        } else {
            max_sigma = max_sigma.max((mc - exact).abs() / stderr);
        }
        mc_cases += 1;
    }
    let pass = max_z <= 4.0 && max_sigma <= 3.0;
    report(
        4,
        pass,
        &format!(
            "{tested} (graph, set) pairs x 2 samplers x {DRAWS} draws, max chi-square z {max_z:.2}; \
             {mc_cases} gauge estimates, max |error|/stderr {max_sigma:.2}"
        ),
    );
}

#[test]
fn criterion_5_relation_and_power_envelopes() {
    let mut min_rel_slack = f64::INFINITY;
    let mut min_env_slack = f64::INFINITY;
    let mut rel_cases = 0usize;
    let mut env_cases = 0usize;
    let mut ratio_notes = String::new();
    for b in battery() {
        let g = &b.graph;
        let n = g.n();
        if (0.25 * n as f64 + 1e-9).floor() >= 1.0 {
            let (lhs, rhs) = relation_check(g, 0.5).unwrap();
            min_rel_slack = min_rel_slack.min(lhs - rhs);
            rel_cases += 1;
        }
        let base_gap = comb_gap(g).unwrap().value;
        for s in [1u32, 2, 4] {
            let h = graph_power(g, s).unwrap();
            let gap = comb_gap(&h).unwrap().value;
            if s == 2 && base_gap > 1e-12 && (b.name == "dumbbell4" || b.name == "complete4") {
                ratio_notes.push_str(&format!(" {}^2/{}: {:.3};", b.name, b.name, gap / base_gap));
            }
            for v in 0..n {
                let mut p = MassVector::indicator(n, v).unwrap();
                for t in 1..=50u32 {
                    p = spexlab_core::walks::walk_step(&h, &p).unwrap();
                    let curve = curve_of(&h, &p).unwrap();
                    for x in 1..=n {
                        let bound = mixing_envelope(gap, t, x as f64, n);
                        min_env_slack = min_env_slack.min(bound + 1e-9 - curve.eval(x as f64));
                        env_cases += 1;
                    }
                }
            }
        }
    }
    let pass = min_rel_slack >= -1e-9 && min_env_slack >= 0.0;
    report(
        5,
        pass,
        &format!(
            "relation on {rel_cases} graphs min slack {min_rel_slack:+.3e}; \
             envelope over powers 1/2/4 on {env_cases} evaluations min slack {:+.3e}; \
             squared-gap growth (reported only):{ratio_notes}",
            min_env_slack - 1e-9
        ),
    );
}

#[test]
fn criterion_6_mixing_within_the_gap_bound() {
    let mut mixed = 0usize;
    let mut unmixed = 0usize;
    let mut worst_ratio = 0.0f64;
    let mut pass = true;
    let mut notes = String::new();
    for b in battery() {
        let g = &b.graph;
        if g.is_bipartite() {
            match mixing_time(g, 1000).unwrap() {
                MixingOutcome::Unmixed(_) => unmixed += 1,
                MixingOutcome::Mixed(steps) => {
                    pass = false;
                    notes.push_str(&format!(" {} mixed in {steps} despite bipartiteness;", b.name));
                }
            }
            continue;
        }
        let gap = comb_gap(g).unwrap().value;
        let bound = (8.0 * (4.0 * g.n() as f64).ln() / (gap * gap)).ceil() as usize;
        match mixing_time(g, bound).unwrap() {
            MixingOutcome::Mixed(steps) => {
                mixed += 1;
                worst_ratio = worst_ratio.max(steps as f64 / bound as f64);
            }
            MixingOutcome::Unmixed(_) => {
                pass = false;
                notes.push_str(&format!(" {} missed its bound {bound};", b.name));
            }
        }
    }
    report(
        6,
        pass,
        &format!(
            "{mixed} non-bipartite graphs mixed within ceil(8 ln(4n)/gap^2), \
             worst used fraction {worst_ratio:.3}; {unmixed} bipartite graphs reported unmixed;{notes}"
        ),
    );
}

#[test]
fn criterion_7_hypercube_contrast() {
    let start = Instant::now();
    let m = HypercubeModel::new(8, 128, 0.1).unwrap();
    let (cut_exp, cut_frac) = coordinate_cut_expansion(&m);
    let cut_ok = (cut_frac - 0.125).abs() < 1e-15
        && (cut_exp - 0.0875).abs() < 1e-15
        && cut_exp <= m.eps();

    // every ball under the 1% size cap must clear a 0.9 expansion floor
    let rep = counterexample_report(&m, 0.125, 0.01, Some(0.9)).unwrap();
    let floor_ok = rep.threshold_met == Some(true);
    let min_exp = rep.min_ball_expansion.unwrap();
    let min_r = rep.min_ball_radius.unwrap();

    let mut level_ok = true;
    for (k, dmax) in [(2u32, 8u32), (3, 5)] {
        for d in 1..=dmax {
            for eps in [0.1, 0.3, 0.5] {
                let m = HypercubeModel::new(k, d, eps).unwrap();
                for r in 0..=d as usize {
                    level_ok &= level_monotonicity_check(&m, r).unwrap().holds;
                }
            }
        }
    }

    // transition laws on the explicit (2, 3) cube vs the radius chain.  Ties
    // within a weight class can split by a last-ulp of rounding, shaving
    // vanishing-probability slivers off the ball atoms, so the comparison
    // buckets explicit atoms by whichever ball they reproduce and keeps a
    // residual bucket that must stay at rounding scale.
    let m23 = HypercubeModel::new(2, 3, 0.2).unwrap();
    let kernel = weight_chain(&m23).unwrap();
    let cube = ExplicitHypercube::new(&m23).unwrap();
    let g = cube.to_graph().unwrap();
    let balls: Vec<Vec<usize>> = (0..=3usize).map(|r| cube.ball(r)).collect();
    let radius_of = |members: &[usize]| -> Option<i64> {
        if members.is_empty() {
            return Some(-1);
        }
        balls.iter().position(|b| b[..] == *members).map(|r| r as i64)
    };
    let mut law_err = 0.0f64;
    for r in 0..=3usize {
        let s = VertexSet::new(&g, balls[r].clone()).unwrap();
        let law = ball_successor_law(&kernel, r).unwrap();

        let mut by_radius = vec![0.0f64; 5]; // index radius + 1, -1 = empty
        let mut residual = 0.0f64;
        for atom in esp_transition_distribution(&g, &s).unwrap() {
            match radius_of(atom.successor.members()) {
                Some(rad) => by_radius[(rad + 1) as usize] += atom.probability,
                None => residual += atom.probability,
            }
        }
        law_err = law_err.max(residual);
        for (rad, prob) in &law {
            let got = by_radius[(rad + 1) as usize];
            law_err = law_err.max((got - prob).abs());
            by_radius[(rad + 1) as usize] = 0.0;
        }
        law_err = law_err.max(by_radius.iter().fold(0.0f64, |a, p| a.max(*p)));

        if r < 3 {
            let frac_r = kernel.ball_fraction(r);
            let mut vb_by_radius = vec![0.0f64; 4];
            let mut vb_residual = 0.0f64;
            for (succ, p) in vb_transition_law(&g, &s).unwrap() {
                match radius_of(succ.members()) {
                    Some(rad) if rad >= 0 => vb_by_radius[rad as usize] += p,
                    _ => vb_residual += p,
                }
            }
            law_err = law_err.max(vb_residual);
            for (rad, prob) in law.iter().filter(|(rad, _)| *rad >= 0) {
                let want = prob * kernel.ball_fraction(*rad as usize) / frac_r;
                law_err = law_err.max((vb_by_radius[*rad as usize] - want).abs());
            }
        }
    }
    let law_ok = law_err <= 1e-12;

    // coupled trajectories: thresholding both representations on the same
    // uniforms must trace the same path, step for step
    let mut rng = ChaCha8Rng::seed_from_u64(4207);
    let mut coupled_steps = 0usize;
    let mut coupled_ok = true;
    'traj: for traj in 0..2000usize {
        let mut radius = traj % 3;
        let mut set = VertexSet::new(&g, balls[radius].clone()).unwrap();
        for _ in 0..12 {
            let u = 1.0 - rng.gen::<f64>();
            let next_set = esp_step_at(&g, &set, u).unwrap();
            let next_radius = ball_step(&kernel, radius, u).unwrap();
            let want: &[usize] = if next_radius < 0 { &[] } else { &balls[next_radius as usize] };
            if next_set.members() != want {
                coupled_ok = false;
                break 'traj;
            }
            coupled_steps += 1;
            if next_radius < 0 || next_radius == 3 {
                break; // absorbed at the empty set or the full cube
            }
            radius = next_radius as usize;
            set = next_set;
        }
    }

    let secs = start.elapsed().as_secs_f64();
    let pass = cut_ok && floor_ok && level_ok && law_ok && coupled_ok && secs < 30.0;
    report(
        7,
        pass,
        &format!(
            "coordinate cut ({cut_exp:.4}, fraction {cut_frac:.4}) exact: {cut_ok}; \
             every ball under cap 0.01 above 0.9: {floor_ok} (measured min {min_exp:.17} at radius {min_r}); \
             level checks: {level_ok}; ball laws vs explicit cube: max err {law_err:.2e}; \
             coupled trajectories agree: {coupled_ok} ({coupled_steps} steps); {secs:.2}s"
        ),
    );
}

#[test]
fn criterion_8_explicit_cubes_match_the_class_chain() {
    let mut models = 0usize;
    let mut weight_err = 0.0f64;
    let mut expansion_err = 0.0f64;
    for d in 1u32..=10 {
        for k in 2u32.. {
            if (k as u64).pow(d) > 729 {
                break;
            }
            for eps in [0.1, 0.5] {
                let m = HypercubeModel::new(k, d, eps).unwrap();
                let kernel = weight_chain(&m).unwrap();
                let cube = ExplicitHypercube::new(&m).unwrap();
                let n = cube.len();
                for r in 0..=d as usize {
                    let ball = cube.ball(r);
                    let mut inside_total = 0.0;
                    let mut in_ball = vec![false; n];
                    for &y in &ball {
                        in_ball[y] = true;
                    }
                    for x in 0..n {
                        let mut inside = 0.0;
                        for &y in &ball {
                            inside += pair_weight(&m, cube.digits(x), cube.digits(y)).unwrap();
                        }
                        let class = cube.weight_class(x);
                        weight_err = weight_err.max((inside - kernel.stay_weight(class, r)).abs());
                        if in_ball[x] {
                            inside_total += inside;
                        }
                    }
                    let explicit_expansion = 1.0 - inside_total / ball.len() as f64;
                    let chain_expansion = ball_profile(&kernel, r).unwrap().expansion;
                    expansion_err = expansion_err.max((explicit_expansion - chain_expansion).abs());
                }
                models += 1;
            }
        }
    }
    let pass = weight_err <= 1e-12 && expansion_err <= 1e-9;
    report(
        8,
        pass,
        &format!(
            "{models} models with at most 729 vertices; max in-ball weight error {weight_err:.2e}, \
             max ball expansion error {expansion_err:.2e}"
        ),
    );
}
