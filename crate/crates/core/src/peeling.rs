//! Randomized partitions of a hypergraph into gadgets.
//!
//! * Sunflower peel: visit the vertices in a uniformly random order; each
//!   vertex takes every still-present edge through it as the petals of its
//!   sunflower. Each edge is therefore consumed at its first-visited vertex.
//! * Nosegay peel: repeatedly pick a uniformly random remaining edge, take it
//!   together with every remaining edge meeting it as a nosegay, and delete
//!   those edges and the central edge's three vertices.
//!
//! Summing gadget log-weights over a trace bounds the per-qubit log of the
//! generic rank via the product bound for attached gadgets.

use std::collections::HashMap;
use std::io::Write;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::gadgets::GadgetSpec;
use crate::hypergraph::Hypergraph;
use crate::rng::stream_rng;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Sunflower,
    Nosegay,
}

/// State after one peeling step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeelStep {
    pub vertices_remaining: usize,
    pub edges_remaining: usize,
    pub gadget: GadgetSpec,
    /// Structure violations found in this gadget.
    pub anomalies: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeelTrace {
    pub algorithm: Algorithm,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub seed: u64,
    pub steps: Vec<PeelStep>,
    pub anomalies: usize,
}

impl PeelTrace {
    /// Total clauses covered by the recorded gadgets.
    pub fn edges_covered(&self) -> usize {
        self.steps.iter().map(|s| s.gadget.edge_count()).sum()
    }

    /// Writes the trace as CSV with header
    /// `step,vertices_remaining,edges_remaining,gadget,params,log_weight,anomaly`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(
            out,
            "step,vertices_remaining,edges_remaining,gadget,params,log_weight,anomaly"
        )?;
        let mut weights = WeightCache::default();
        for (i, s) in self.steps.iter().enumerate() {
            let (name, params) = match &s.gadget {
                GadgetSpec::Sunflower { d, .. } => ("sunflower", d.to_string()),
                GadgetSpec::Nosegay3 { a, b, c } => ("nosegay3", format!("{a};{b};{c}")),
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "peel traces hold sunflowers and nosegays, found {other:?}"
                    )))
                }
            };
            let w = weights.get(&s.gadget)?;
            let w = if w.is_finite() {
                w.to_string()
            } else {
                "-inf".to_string()
            };
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                i, s.vertices_remaining, s.edges_remaining, name, params, w, s.anomalies
            )?;
        }
        Ok(())
    }
}

#[derive(Default)]
struct WeightCache(HashMap<GadgetSpec, f64>);

impl WeightCache {
    fn get(&mut self, spec: &GadgetSpec) -> Result<f64> {
        if let Some(&w) = self.0.get(spec) {
            return Ok(w);
        }
        let w = spec.rank()?.log_weight().value();
        self.0.insert(spec.clone(), w);
        Ok(w)
    }
}

/// Sunflower partition along a uniformly random vertex order.
///
/// Pairs of edges in one sunflower that share a vertex besides the center
/// count as anomalies; the gadget still uses the formula for disjoint petals.
pub fn sunflower_peel(g: &Hypergraph, seed: u64) -> Result<PeelTrace> {
    let k = uniform_arity(g)?;
    let n = g.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut stream_rng(seed, 0));

    let incidence = g.incidence();
    let mut consumed = vec![false; g.m()];
    let mut edges_remaining = g.m();
    let mut steps = Vec::with_capacity(n);
    let mut total_anomalies = 0;
    let mut petals = Vec::new();
    for (i, &v) in order.iter().enumerate() {
        petals.clear();
        for &e in &incidence[v] {
            if !consumed[e] {
                consumed[e] = true;
                petals.push(e);
            }
        }
        let mut anomalies = 0;
        for (x, &e) in petals.iter().enumerate() {
            for &f in &petals[x + 1..] {
                let shared = g.edges()[e]
                    .vertices()
                    .iter()
                    .filter(|&&u| u != v && g.edges()[f].contains(u))
                    .count();
                if shared > 0 {
                    anomalies += 1;
                }
            }
        }
        edges_remaining -= petals.len();
        total_anomalies += anomalies;
        steps.push(PeelStep {
            vertices_remaining: n - i - 1,
            edges_remaining,
            gadget: GadgetSpec::Sunflower { d: petals.len(), k },
            anomalies,
        });
    }
    Ok(PeelTrace {
        algorithm: Algorithm::Sunflower,
        n,
        m: g.m(),
        k,
        seed,
        steps,
        anomalies: total_anomalies,
    })
}

/// Nosegay partition of a 3-uniform hypergraph.
///
/// An edge meeting the central edge in two or more vertices is counted once,
/// at its lowest-position center, and flagged as an anomaly. Vertices left
/// isolated at the end are not recorded: their factor 2 is already part of
/// the global `2^n`.
pub fn nosegay_peel(g: &Hypergraph, seed: u64) -> Result<PeelTrace> {
    let k = uniform_arity(g)?;
    if k != 3 {
        return Err(Error::Arity {
            expected: 3,
            found: k,
        });
    }
    let mut rng = stream_rng(seed, 0);
    let incidence = g.incidence();
    // Alive edges in a swap-remove pool, with each edge's slot.
    let mut pool: Vec<usize> = (0..g.m()).collect();
    let mut slot: Vec<usize> = (0..g.m()).collect();
    let mut vertices_remaining = g.n();
    let mut steps = Vec::new();
    let mut total_anomalies = 0;

    let remove = |e: usize, pool: &mut Vec<usize>, slot: &mut Vec<usize>| {
        let s = slot[e];
        let last = *pool.last().expect("edge is alive");
        pool.swap_remove(s);
        if last != e {
            slot[last] = s;
        }
        slot[e] = usize::MAX;
    };

    while !pool.is_empty() {
        let center = pool[rng.random_range(0..pool.len())];
        remove(center, &mut pool, &mut slot);
        let cv = g.edges()[center].vertices();
        let mut counts = [0usize; 3];
        let mut anomalies = 0;
        for (pos, &u) in cv.iter().enumerate() {
            for &f in &incidence[u] {
                if slot[f] == usize::MAX {
                    continue;
                }
                if cv.iter().filter(|&&w| g.edges()[f].contains(w)).count() >= 2 {
                    anomalies += 1;
                }
                counts[pos] += 1;
                remove(f, &mut pool, &mut slot);
            }
        }
        vertices_remaining -= 3;
        total_anomalies += anomalies;
        steps.push(PeelStep {
            vertices_remaining,
            edges_remaining: pool.len(),
            gadget: GadgetSpec::Nosegay3 {
                a: counts[0],
                b: counts[1],
                c: counts[2],
            },
            anomalies,
        });
    }
    Ok(PeelTrace {
        algorithm: Algorithm::Nosegay,
        n: g.n(),
        m: g.m(),
        k,
        seed,
        steps,
        anomalies: total_anomalies,
    })
}

fn uniform_arity(g: &Hypergraph) -> Result<usize> {
    match g.uniform_arity() {
        Some(k) => Ok(k),
        None if g.m() == 0 => Ok(3),
        None => {
            let k = g.edges()[0].arity();
            let bad = g
                .edges()
                .iter()
                .find(|e| e.arity() != k)
                .expect("mixed arity");
            Err(Error::Arity {
                expected: k,
                found: bad.arity(),
            })
        }
    }
}

/// Per-qubit log-rank bound `ln 2 + (1/n) sum_steps log_weight`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EmpiricalBound {
    /// Nats per qubit; negative infinity when some gadget has rank zero.
    pub value: f64,
    pub step_count: usize,
    pub anomalies: usize,
}

pub fn empirical_log_rank(trace: &PeelTrace) -> Result<EmpiricalBound> {
    if trace.n == 0 {
        return Err(Error::InvalidParameter(
            "trace of an empty vertex set".into(),
        ));
    }
    let mut cache = WeightCache::default();
    let mut sum = 0.0;
    for s in &trace.steps {
        sum += cache.get(&s.gadget)?;
    }
    Ok(EmpiricalBound {
        value: std::f64::consts::LN_2 + sum / trace.n as f64,
        step_count: trace.steps.len(),
        anomalies: trace.anomalies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::sunflower_graph;
    use crate::hypergraph::random_hypergraph;
    use proptest::prelude::*;

    #[test]
    fn single_edge_sunflower() {
        let g = Hypergraph::from_edges(3, [[0, 1, 2]]).unwrap();
        let t = sunflower_peel(&g, 5).unwrap();
        let mut degrees: Vec<usize> = t
            .steps
            .iter()
            .map(|s| match s.gadget {
                GadgetSpec::Sunflower { d, k: 3 } => d,
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(degrees[0], 1);
        degrees.sort();
        assert_eq!(degrees, vec![0, 0, 1]);
        let b = empirical_log_rank(&t).unwrap();
        assert!((b.value - 7f64.ln() / 3.0).abs() < 1e-12);
        assert!((b.value - 0.64864).abs() < 1e-5);
    }

    #[test]
    fn single_edge_nosegay() {
        let g = Hypergraph::from_edges(3, [[0, 1, 2]]).unwrap();
        let t = nosegay_peel(&g, 0).unwrap();
        assert_eq!(t.steps.len(), 1);
        assert_eq!(t.steps[0].gadget, GadgetSpec::Nosegay3 { a: 0, b: 0, c: 0 });
        assert_eq!(
            (t.steps[0].vertices_remaining, t.steps[0].edges_remaining),
            (0, 0)
        );
        let b = empirical_log_rank(&t).unwrap();
        assert!((b.value - 7f64.ln() / 3.0).abs() < 1e-12);
    }

    #[test]
    fn empty_graph_bound_is_ln2() {
        let g = Hypergraph::empty(10);
        for t in [sunflower_peel(&g, 0).unwrap(), nosegay_peel(&g, 0).unwrap()] {
            assert!((empirical_log_rank(&t).unwrap().value - std::f64::consts::LN_2).abs() < 1e-15);
        }
    }

    #[test]
    fn six_petal_sunflower_first_nosegay() {
        let g = sunflower_graph(6, 3).unwrap();
        for seed in 0..10 {
            let t = nosegay_peel(&g, seed).unwrap();
            let GadgetSpec::Nosegay3 { a, b, c } = t.steps[0].gadget else {
                unreachable!()
            };
            assert_eq!(a + b + c, 5);
            assert_eq!(t.steps.len(), 1);
        }
    }

    #[test]
    fn stuck_petals_are_flagged() {
        let g = Hypergraph::from_edges(4, [[0, 1, 2], [0, 1, 2], [0, 1, 3]]).unwrap();
        let t = sunflower_peel(&g, 1).unwrap();
        assert!(t.anomalies > 0);
        let t = nosegay_peel(&g, 1).unwrap();
        assert_eq!(t.anomalies, 2);
        assert_eq!(t.edges_covered(), 3);
    }

    #[test]
    fn arity_checks() {
        let mixed = Hypergraph::from_edges(4, vec![vec![0, 1, 2], vec![2, 3]]).unwrap();
        assert!(matches!(
            sunflower_peel(&mixed, 0),
            Err(Error::Arity { .. })
        ));
        let pairs = Hypergraph::from_edges(4, [[0, 1], [2, 3]]).unwrap();
        assert!(sunflower_peel(&pairs, 0).is_ok());
        assert!(matches!(
            nosegay_peel(&pairs, 0),
            Err(Error::Arity {
                expected: 3,
                found: 2
            })
        ));
    }

    #[test]
    fn csv_layout() {
        let g = Hypergraph::from_edges(6, [[0, 1, 2], [2, 3, 4]]).unwrap();
        let t = nosegay_peel(&g, 3).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "step,vertices_remaining,edges_remaining,gadget,params,log_weight,anomaly"
        );
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row[0], "0");
        assert_eq!(row[1], "3");
        assert_eq!(row[3], "nosegay3");
        assert_eq!(row[4].split(';').count(), 3);
        let w: f64 = row[5].parse().unwrap();
        assert!(w < 0.0);
    }

    proptest! {
        #[test]
        fn sunflower_conserves_edges(extra in 0usize..57, m in 0usize..120, k in 2usize..5, seed: u64) {
            let n = k + extra;
            let g = random_hypergraph(n, m, k, seed).unwrap();
            let t = sunflower_peel(&g, seed).unwrap();
            prop_assert_eq!(t.edges_covered(), m);
            prop_assert_eq!(t.steps.len(), n);
            prop_assert_eq!(t.steps.last().map(|s| s.edges_remaining), Some(0));
            prop_assert_eq!(&t, &sunflower_peel(&g, seed).unwrap());
            prop_assert!(empirical_log_rank(&t).unwrap().value <= std::f64::consts::LN_2);
        }

        #[test]
        fn nosegay_conserves_edges(n in 3usize..60, m in 0usize..120, seed: u64) {
            let g = random_hypergraph(n, m, 3, seed).unwrap();
            let t = nosegay_peel(&g, seed).unwrap();
            prop_assert_eq!(t.edges_covered(), m);
            let mut prev = (n, m);
            for s in &t.steps {
                prop_assert_eq!(s.vertices_remaining + 3, prev.0);
                prop_assert!(s.edges_remaining < prev.1);
                prev = (s.vertices_remaining, s.edges_remaining);
            }
            prop_assert_eq!(prev.1, 0);
            prop_assert_eq!(&t, &nosegay_peel(&g, seed).unwrap());
        }
    }
}
