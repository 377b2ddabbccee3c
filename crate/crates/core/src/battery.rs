//! Standard suite of small unit-regular graphs used by the checks and the
//! regression tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{generate, lazify, GraphFamily, WeightedGraph};

/// A named graph in the standard suite.
#[derive(Clone, Debug)]
pub struct BatteryGraph {
    pub name: String,
    pub graph: WeightedGraph,
}

impl BatteryGraph {
    fn new(name: &str, graph: WeightedGraph) -> Self {
        BatteryGraph { name: name.to_string(), graph }
    }
}

/// Dense random symmetric weights rescaled to unit degrees.
///
/// Starts from symmetric uniform weights in `[0.1, 1.0)` with a zero
/// diagonal and runs the symmetric Sinkhorn iteration `x_i <- x_i / sqrt(s_i)`
/// with `s_i = x_i * sum_j w_ij x_j` until every degree is within `1e-13`
/// of one. The final edge weights are `x_i * x_j * w_ij`.
pub fn random_unit_regular(n: usize, seed: u64) -> Result<WeightedGraph> {
    if n < 2 {
        return Err(Error::invalid("random unit-regular graph needs n >= 2"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.1 + 0.9 * rng.gen::<f64>();
            w[i][j] = v;
            w[j][i] = v;
        }
    }
    let mut x = vec![1.0f64; n];
    let mut converged = false;
    for _ in 0..10_000 {
        let s: Vec<f64> = (0..n)
            .map(|i| x[i] * (0..n).map(|j| w[i][j] * x[j]).sum::<f64>())
            .collect();
        if s.iter().all(|si| (si - 1.0).abs() <= 1e-13) {
            converged = true;
            break;
        }
        for i in 0..n {
            x[i] /= s[i].sqrt();
        }
    }
    if !converged {
        return Err(Error::domain("degree rescaling did not converge"));
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            edges.push((i, j, x[i] * x[j] * w[i][j]));
        }
    }
    WeightedGraph::from_edges(n, &edges)
}

/// The standard graph suite: cycles, cliques, complete bipartite graphs,
/// self-looped paths, weighted dumbbells, lazy variants, two tiny explicit
/// Hamming cubes, and three random dense graphs seeded from `seed`.
pub fn standard_battery(seed: u64) -> Result<Vec<BatteryGraph>> {
    let mut out = Vec::new();
    for n in [3usize, 4, 5, 6, 8] {
        out.push(BatteryGraph::new(
            &format!("cycle{n}"),
            generate(&GraphFamily::Cycle { n })?,
        ));
    }
    for n in [2usize, 3, 4, 5] {
        out.push(BatteryGraph::new(
            &format!("complete{n}"),
            generate(&GraphFamily::Complete { n })?,
        ));
    }
    for half in [2usize, 3, 4] {
        out.push(BatteryGraph::new(
            &format!("bipartite{half}"),
            generate(&GraphFamily::CompleteBipartite { half })?,
        ));
    }
    for n in [4usize, 5] {
        out.push(BatteryGraph::new(
            &format!("path{n}"),
            generate(&GraphFamily::Path { n })?,
        ));
    }
    for clique in [3usize, 4] {
        out.push(BatteryGraph::new(
            &format!("dumbbell{clique}"),
            generate(&GraphFamily::Dumbbell { clique, bridge: 0.1 })?,
        ));
    }
    for base in ["cycle4", "cycle5", "complete4", "dumbbell4", "path5"] {
        let g = out
            .iter()
            .find(|b| b.name == base)
            .expect("base graph present")
            .graph
            .clone();
        out.push(BatteryGraph::new(&format!("lazy_{base}"), lazify(&g, 0.5)?));
    }
    out.push(BatteryGraph::new(
        "hc_2_3",
        generate(&GraphFamily::HypercubeExplicit { k: 2, dim: 3, eps: 0.2 })?,
    ));
    out.push(BatteryGraph::new(
        "hc_3_2",
        generate(&GraphFamily::HypercubeExplicit { k: 3, dim: 2, eps: 0.3 })?,
    ));
    for (i, n) in [6usize, 8, 10].into_iter().enumerate() {
        out.push(BatteryGraph::new(
            &format!("rand{n}"),
            random_unit_regular(n, seed + i as u64)?,
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn battery_graphs_are_unit_regular_and_connected() {
        let bat = standard_battery(100).unwrap();
        assert_eq!(bat.len(), 26);
        for b in &bat {
            assert!(b.graph.is_unit_regular(), "{} not unit-regular", b.name);
            assert!(b.graph.is_connected(), "{} not connected", b.name);
        }
        let names: BTreeSet<_> = bat.iter().map(|b| b.name.clone()).collect();
        assert_eq!(names.len(), 26);
    }

    #[test]
    fn lazy_flags_match_construction() {
        let bat = standard_battery(100).unwrap();
        for b in &bat {
            let expect = b.name.starts_with("lazy_")
                || b.name.starts_with("path")
                || b.name == "hc_2_3"
                || b.name == "hc_3_2";
            // paths only self-loop at the endpoints, so they are not lazy;
            // the tiny cubes keep most of their mass in place and are.
            let expect = if b.name.starts_with("path") { false } else { expect };
            assert_eq!(b.graph.is_lazy(), expect, "{}", b.name);
        }
    }

    #[test]
    fn random_graphs_are_deterministic_in_the_seed() {
        let a = random_unit_regular(8, 7).unwrap();
        let b = random_unit_regular(8, 7).unwrap();
        let c = random_unit_regular(8, 8).unwrap();
        assert_eq!(a.to_text(), b.to_text());
        assert_ne!(a.to_text(), c.to_text());
        assert!(a.is_unit_regular());
        assert!(!a.is_lazy());
    }

    #[test]
    fn random_rejects_tiny_n() {
        assert!(random_unit_regular(1, 0).is_err());
    }
}
