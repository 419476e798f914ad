use rand::Rng;

use super::DEFAULT_QUBIT_CAP;
use super::{check_cap, for_each_row_base, local_offsets, Backend, Confidence, RankResult};
use crate::hypergraph::Hypergraph;
use crate::rng::stream_rng;
use crate::{Error, Execution, Result};

/// 2^61 - 1, the largest prime below 2^61.
pub const DEFAULT_PRIME: u64 = (1 << 61) - 1;

const MIN_PRIME: u64 = 1 << 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FieldOptions {
    pub trials: usize,
    pub prime: u64,
    pub cap: usize,
    pub seed: u64,
}

impl Default for FieldOptions {
    fn default() -> Self {
        Self {
            trials: 2,
            prime: DEFAULT_PRIME,
            cap: DEFAULT_QUBIT_CAP,
            seed: 0,
        }
    }
}

/// Arithmetic modulo a prime below 2^63.
trait Modulus: Copy + Send + Sync {
    fn p(self) -> u64;
    fn mul(self, a: u64, b: u64) -> u64;

    #[inline]
    fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p() - b
        }
    }

    fn inv(self, a: u64) -> u64 {
        debug_assert!(a != 0);
        let (mut base, mut exp, mut acc) = (a, self.p() - 2, 1);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }
}

/// Reduction modulo 2^61 - 1 by folding the high bits.
#[derive(Clone, Copy, Debug)]
struct Mersenne61;

impl Modulus for Mersenne61 {
    #[inline]
    fn p(self) -> u64 {
        DEFAULT_PRIME
    }

    #[inline]
    fn mul(self, a: u64, b: u64) -> u64 {
        let z = a as u128 * b as u128;
        let s = (z as u64 & DEFAULT_PRIME) + (z >> 61) as u64;
        if s >= DEFAULT_PRIME {
            s - DEFAULT_PRIME
        } else {
            s
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct AnyPrime(u64);

impl Modulus for AnyPrime {
    #[inline]
    fn p(self) -> u64 {
        self.0
    }

    #[inline]
    fn mul(self, a: u64, b: u64) -> u64 {
        (a as u128 * b as u128 % self.0 as u128) as u64
    }
}

/// Incremental row space kept in reduced row echelon form.
///
/// Because every stored row is zero in every other pivot column, a new row is
/// reduced by subtracting `row[c] * P_c` for the pivot columns `c` in its
/// original support, which is cheap for the sparse constraint rows.
struct RowSpace<M> {
    field: M,
    cols: usize,
    pivot_row: Vec<Option<usize>>,
    rows: Vec<Vec<u64>>,
}

impl<M: Modulus> RowSpace<M> {
    fn new(field: M, cols: usize) -> Self {
        Self {
            field,
            cols,
            pivot_row: vec![None; cols],
            rows: Vec::new(),
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Inserts a row given by distinct `(column, value)` pairs.
    fn insert(&mut self, entries: &[(usize, u64)]) -> bool {
        let f = self.field;
        let mut dense = vec![0u64; self.cols];
        for &(c, v) in entries {
            dense[c] = v;
        }
        for &(c, v) in entries {
            if v == 0 {
                continue;
            }
            if let Some(r) = self.pivot_row[c] {
                for (d, &p) in dense.iter_mut().zip(&self.rows[r]) {
                    if p != 0 {
                        *d = f.sub(*d, f.mul(v, p));
                    }
                }
            }
        }
        let Some(lead) = dense.iter().position(|&x| x != 0) else {
            return false;
        };
        let scale = f.inv(dense[lead]);
        let support: Vec<usize> = (lead..self.cols).filter(|&j| dense[j] != 0).collect();
        for &j in &support {
            dense[j] = f.mul(dense[j], scale);
        }
        for row in &mut self.rows {
            let factor = row[lead];
            if factor == 0 {
                continue;
            }
            for &j in &support {
                row[j] = f.sub(row[j], f.mul(factor, dense[j]));
            }
        }
        self.pivot_row[lead] = Some(self.rows.len());
        self.rows.push(dense);
        true
    }
}

fn trial_rank<M: Modulus>(field: M, g: &Hypergraph, seed: u64, trial: u64) -> usize {
    let n = g.n();
    let cols = 1usize << n;
    let mut rng = stream_rng(seed, trial);
    let mut space = RowSpace::new(field, cols);
    let mut entries = Vec::new();
    for edge in g.edges() {
        let offsets = local_offsets(edge);
        let values: Vec<u64> = offsets
            .iter()
            .map(|_| rng.random_range(0..field.p()))
            .collect();
        for_each_row_base(n, edge, |base| {
            if space.rank() == cols {
                return;
            }
            entries.clear();
            entries.extend(
                offsets
                    .iter()
                    .zip(&values)
                    .map(|(&off, &v)| (base | off, v)),
            );
            space.insert(&entries);
        });
    }
    space.rank()
}

/// Generic rank of `g`: `2^n` minus the largest row rank of the constraint
/// matrix over `trials` uniform random evaluations in the prime field.
pub fn generic_rank_field(
    g: &Hypergraph,
    opts: &FieldOptions,
    exec: Execution,
) -> Result<RankResult> {
    check_cap(g.n(), opts.cap)?;
    if opts.trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    if opts.prime <= MIN_PRIME || opts.prime >= 1 << 63 {
        return Err(Error::PrimeTooSmall(opts.prime));
    }
    let ranks = exec.map(opts.trials, |t| {
        if opts.prime == DEFAULT_PRIME {
            trial_rank(Mersenne61, g, opts.seed, t as u64)
        } else {
            trial_rank(AnyPrime(opts.prime), g, opts.seed, t as u64)
        }
    });
    let best = *ranks.iter().max().expect("trials > 0");
    Ok(RankResult {
        rank: ((1usize << g.n()) - best) as u64,
        qubits: g.n(),
        backend: Backend::Field,
        confidence: Confidence::TrialAgreement {
            agreeing: ranks.iter().filter(|&&r| r == best).count(),
            trials: opts.trials,
        },
    })
}
