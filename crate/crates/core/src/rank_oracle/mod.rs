//! Generic rank of the satisfying subspace.
//!
//! A clause on the sorted qubits `q_0 < .. < q_{k-1}` forbids a vector `v` in
//! the `2^k`-dimensional local space. A state `psi` on `n` qubits satisfies it
//! iff, for every assignment `y` of the other `n - k` qubits,
//! `sum_x conj(v_x) psi[merge(x, y)] = 0`. Each clause therefore contributes
//! `2^(n-k)` rows to a constraint matrix with `2^n` columns, and the
//! satisfying subspace is its null space.
//!
//! Basis convention: bit `j` of a global basis index is qubit (vertex) `j`,
//! least significant first. Bit `i` of a local index `x` is the clause's
//! `i`-th smallest vertex, so `merge(x, y)` scatters bit `i` of `x` to bit
//! `q_i` and fills every other position from `y`.
//!
//! Two backends compute the rank:
//!
//! * [`generic_rank_float`] takes a concrete [`Formula`] with random complex
//!   clause vectors and counts singular values of the constraint matrix.
//! * [`generic_rank_field`] only needs the [`Hypergraph`]: it fills clause
//!   entries with uniform elements of a large prime field and eliminates
//!   exactly. The maximum rank over trials is the generic rank except with
//!   probability at most `deg / p` per trial.
//!
//! Conjugating amplitudes is a bijection on generic vectors, so the field
//! backend uses its random entries directly.

mod clause;
mod field;
mod float;

pub use clause::{sample_clause_vector, ClauseVector, Formula};
pub use field::{generic_rank_field, FieldOptions, DEFAULT_PRIME};
pub use float::{generic_rank_float, generic_rank_float_sampled, FloatOptions};

use serde::Serialize;

use crate::hypergraph::{Edge, Hypergraph};
use crate::{Error, Result};

/// Largest qubit count accepted without `force`.
pub const DEFAULT_QUBIT_CAP: usize = 13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Float,
    Field,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Confidence {
    /// Smallest kept over largest discarded singular value; `None` when no
    /// singular value was discarded.
    GapRatio { ratio: Option<f64> },
    /// Number of field trials that reached the maximum row rank.
    TrialAgreement { agreeing: usize, trials: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RankResult {
    /// Dimension of the satisfying subspace.
    pub rank: u64,
    pub qubits: usize,
    pub backend: Backend,
    pub confidence: Confidence,
}

pub(crate) fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap || n >= usize::BITS as usize - 1 {
        return Err(Error::TooManyQubits { n, cap });
    }
    Ok(())
}

/// Global column offsets `merge(x, 0)` for every local index `x`.
pub(crate) fn local_offsets(edge: &Edge) -> Vec<usize> {
    let q = edge.vertices();
    (0..1usize << q.len())
        .map(|x| {
            q.iter()
                .enumerate()
                .filter(|(i, _)| x >> i & 1 == 1)
                .fold(0, |acc, (_, &v)| acc | 1 << v)
        })
        .collect()
}

/// Calls `f(base)` for each of the `2^(n-k)` assignments of the qubits
/// outside `edge`; row `base` has its entries at `base + offsets[x]`.
pub(crate) fn for_each_row_base(n: usize, edge: &Edge, mut f: impl FnMut(usize)) {
    let mask = edge.mask();
    let free = !mask & ((1usize << n) - 1);
    // Enumerate the submasks of `free` in increasing order.
    let mut y = 0usize;
    loop {
        f(y);
        if y == free {
            break;
        }
        y = (y.wrapping_sub(free)) & free;
    }
}

/// Number of constraint rows of `g`.
pub(crate) fn row_count(g: &Hypergraph) -> usize {
    g.edges()
        .iter()
        .map(|e| 1usize << (g.n() - e.arity()))
        .sum()
}
