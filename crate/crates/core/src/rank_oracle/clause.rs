use nalgebra::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::hypergraph::Hypergraph;
use crate::rng::stream_rng;
use crate::{Error, Result};

const NORM_TOLERANCE: f64 = 1e-12;

/// Unit vector forbidden by a clause of arity `k`, with `2^k` amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct ClauseVector {
    amplitudes: Vec<Complex<f64>>,
}

impl ClauseVector {
    /// Wraps `amplitudes`, which must have power-of-two length and unit norm.
    pub fn new(amplitudes: Vec<Complex<f64>>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "clause vectors need 2^k >= 2 amplitudes, got {len}"
            )));
        }
        let norm = norm(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidParameter(format!(
                "clause vector has norm {norm}"
            )));
        }
        Ok(Self { amplitudes })
    }

    /// Uniform on the unit sphere of `C^(2^k)`: normalized i.i.d. standard
    /// complex Gaussians.
    pub fn random<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidParameter(
                "clause arity must be at least 1".into(),
            ));
        }
        let mut amplitudes: Vec<Complex<f64>> = (0..1usize << k)
            .map(|_| Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = norm(&amplitudes);
        for a in &mut amplitudes {
            *a /= norm;
        }
        Ok(Self { amplitudes })
    }

    pub fn arity(&self) -> usize {
        self.amplitudes.len().trailing_zeros() as usize
    }

    pub fn amplitudes(&self) -> &[Complex<f64>] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amplitudes)
    }
}

fn norm(a: &[Complex<f64>]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Seeded convenience wrapper around [`ClauseVector::random`].
pub fn sample_clause_vector(k: usize, seed: u64) -> Result<ClauseVector> {
    ClauseVector::random(k, &mut stream_rng(seed, 0))
}

/// A hypergraph whose every edge carries a clause vector of matching arity.
#[derive(Clone, Debug, PartialEq)]
pub struct Formula {
    graph: Hypergraph,
    clauses: Vec<ClauseVector>,
}

impl Formula {
    pub fn new(graph: Hypergraph, clauses: Vec<ClauseVector>) -> Result<Self> {
        if clauses.len() != graph.m() {
            return Err(Error::InvalidParameter(format!(
                "{} clauses for {} edges",
                clauses.len(),
                graph.m()
            )));
        }
        for (e, c) in graph.edges().iter().zip(&clauses) {
            if e.arity() != c.arity() {
                return Err(Error::Arity {
                    expected: e.arity(),
                    found: c.arity(),
                });
            }
        }
        Ok(Self { graph, clauses })
    }

    /// Adorns every edge of `graph` with an independent uniform clause vector.
    pub fn random<R: Rng + ?Sized>(graph: Hypergraph, rng: &mut R) -> Self {
        let clauses = graph
            .edges()
            .iter()
            .map(|e| ClauseVector::random(e.arity(), rng).expect("edges have arity >= 2"))
            .collect();
        Self { graph, clauses }
    }

    pub fn graph(&self) -> &Hypergraph {
        &self.graph
    }

    pub fn clauses(&self) -> &[ClauseVector] {
        &self.clauses
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_norm_and_size() {
        for k in 1..6 {
            let v = sample_clause_vector(k, k as u64).unwrap();
            assert_eq!(v.amplitudes().len(), 1 << k);
            assert_eq!(v.arity(), k);
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }
        assert!(sample_clause_vector(0, 0).is_err());
    }

    #[test]
    fn first_amplitude_carries_a_quarter_of_the_weight() {
        // By symmetry of the sphere, each of the 4 amplitudes has mean weight 1/4.
        let mut rng = stream_rng(11, 0);
        let samples = 100_000;
        let mean = (0..samples)
            .map(|_| ClauseVector::random(2, &mut rng).unwrap().amplitudes()[0].norm_sqr())
            .sum::<f64>()
            / samples as f64;
        assert!((mean - 0.25).abs() < 0.01, "mean = {mean}");
    }

    #[test]
    fn new_validates() {
        let one = Complex::new(1.0, 0.0);
        let zero = Complex::new(0.0, 0.0);
        assert!(ClauseVector::new(vec![one, zero]).is_ok());
        assert!(ClauseVector::new(vec![one, one]).is_err());
        assert!(ClauseVector::new(vec![one, zero, zero]).is_err());
    }

    #[test]
    fn formula_checks_arity() {
        let g = Hypergraph::from_edges(3, [[0, 1, 2]]).unwrap();
        let c = sample_clause_vector(2, 0).unwrap();
        assert!(Formula::new(g.clone(), vec![c]).is_err());
        assert!(Formula::new(g, vec![]).is_err());
    }
}
