use nalgebra::{Complex, DMatrix};

use super::{
    check_cap, for_each_row_base, local_offsets, row_count, Backend, Confidence, RankResult,
};
use super::{Formula, DEFAULT_QUBIT_CAP};
use crate::hypergraph::Hypergraph;
use crate::rng::stream_rng;
use crate::{Error, Execution, Result};

/// Singular-value gap below which the numerical rank is reported unstable.
pub const MIN_GAP_RATIO: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FloatOptions {
    /// Singular values below `tolerance * sigma_max` count as zero.
    pub tolerance: f64,
    pub cap: usize,
}

impl Default for FloatOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-9,
            cap: DEFAULT_QUBIT_CAP,
        }
    }
}

/// Dimension of the satisfying subspace of `f`, from the singular values of
/// its constraint matrix.
pub fn generic_rank_float(f: &Formula, opts: &FloatOptions) -> Result<RankResult> {
    let g = f.graph();
    let n = g.n();
    check_cap(n, opts.cap)?;
    if !(opts.tolerance > 0.0 && opts.tolerance < 1e-3) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must lie in (0, 1e-3), got {}",
            opts.tolerance
        )));
    }
    let cols = 1usize << n;
    let rows = row_count(g);
    if rows == 0 {
        return Ok(RankResult {
            rank: cols as u64,
            qubits: n,
            backend: Backend::Float,
            confidence: Confidence::GapRatio { ratio: None },
        });
    }

    let mut a = DMatrix::<Complex<f64>>::zeros(rows, cols);
    let mut row = 0;
    for (edge, clause) in g.edges().iter().zip(f.clauses()) {
        let offsets = local_offsets(edge);
        let conj: Vec<_> = clause.amplitudes().iter().map(|z| z.conj()).collect();
        for_each_row_base(n, edge, |base| {
            for (off, &v) in offsets.iter().zip(&conj) {
                a[(row, base | off)] = v;
            }
            row += 1;
        });
    }

    let mut sigma: Vec<f64> = a.singular_values().iter().copied().collect();
    sigma.sort_by(|x, y| y.total_cmp(x));
    let cutoff = opts.tolerance * sigma[0];
    let kept = sigma.iter().take_while(|&&s| s > cutoff).count();
    let ratio = sigma.get(kept).map(|&dropped| sigma[kept - 1] / dropped);
    let rank = (cols - kept) as u64;
    if let Some(r) = ratio {
        if r < MIN_GAP_RATIO {
            return Err(Error::UnstableRank { gap_ratio: r, rank });
        }
    }
    Ok(RankResult {
        rank,
        qubits: n,
        backend: Backend::Float,
        confidence: Confidence::GapRatio { ratio },
    })
}

/// Minimum float rank over `samples` independent random adornments of `g`.
///
/// Accidental degeneracy can only raise the rank, so the minimum is the
/// generic rank unless every sample is degenerate. Any unstable sample makes
/// the whole call fail.
pub fn generic_rank_float_sampled(
    g: &Hypergraph,
    samples: usize,
    seed: u64,
    opts: &FloatOptions,
    exec: Execution,
) -> Result<RankResult> {
    if samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    check_cap(g.n(), opts.cap)?;
    let results = exec.try_map(samples, |i| {
        let f = Formula::random(g.clone(), &mut stream_rng(seed, i as u64));
        generic_rank_float(&f, opts)
    })?;
    Ok(results
        .into_iter()
        .min_by_key(|r| r.rank)
        .expect("samples > 0"))
}
