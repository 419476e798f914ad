//! Closed-form generic ranks of small hypergraph gadgets.
//!
//! Every rank is computed in exact integer arithmetic. Formulas that contain
//! a negative power of some base are evaluated as `bracket * base^e` with the
//! division checked for exactness; a remainder means a transcription error and
//! panics.
//!
//! The gadget families:
//!
//! * `(d, k)`-sunflower: `d` edges of arity `k` sharing one center vertex.
//! * `(a, b, c)`-nosegay: a central 3-edge whose vertices carry `a`, `b`, `c`
//!   hanging 3-edges.
//! * `[a, b, c]`-nosegay: the same with hanging 2-edges (mixed arity).
//! * `d`-nosegay: a central `k`-edge whose `i`-th vertex carries `d_i` hanging
//!   `k`-edges. Its formula is the rank for separable clause vectors in general
//!   position, which upper-bounds the generic rank.
//! * connected two-qubit-clause multigraphs, classified by vertex and edge count.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::hypergraph::{components, Hypergraph};
use crate::union_find::UnionFind;
use crate::{Error, Result};

/// Largest qubit count for the hypercube component count.
pub const HYPERCUBE_QUBIT_CAP: usize = 22;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GadgetSpec {
    Sunflower {
        d: usize,
        k: usize,
    },
    Nosegay3 {
        a: usize,
        b: usize,
        c: usize,
    },
    NosegayHang {
        a: usize,
        b: usize,
        c: usize,
    },
    NosegayK {
        dvec: Vec<usize>,
        k: usize,
    },
    K2Component {
        vertex_count: usize,
        edge_count: usize,
        max_edge_multiplicity: usize,
    },
}

impl GadgetSpec {
    pub fn rank(&self) -> Result<GadgetRank> {
        match *self {
            GadgetSpec::Sunflower { d, k } => sunflower_rank(d, k),
            GadgetSpec::Nosegay3 { a, b, c } => Ok(nosegay3_rank(a, b, c)),
            GadgetSpec::NosegayHang { a, b, c } => Ok(nosegay_hang_rank(a, b, c)),
            GadgetSpec::NosegayK { ref dvec, k } => nosegay_k_rank(dvec, k),
            GadgetSpec::K2Component {
                vertex_count,
                edge_count,
                ..
            } => Ok(GadgetRank {
                rank: k2_component_rank(vertex_count, edge_count)?,
                vertex_count,
            }),
        }
    }

    /// Number of clauses in the gadget.
    pub fn edge_count(&self) -> usize {
        match *self {
            GadgetSpec::Sunflower { d, .. } => d,
            GadgetSpec::Nosegay3 { a, b, c } | GadgetSpec::NosegayHang { a, b, c } => 1 + a + b + c,
            GadgetSpec::NosegayK { ref dvec, .. } => 1 + dvec.iter().sum::<usize>(),
            GadgetSpec::K2Component { edge_count, .. } => edge_count,
        }
    }

    /// A concrete hypergraph realizing the gadget.
    pub fn graph(&self) -> Result<Hypergraph> {
        match *self {
            GadgetSpec::Sunflower { d, k } => sunflower_graph(d, k),
            GadgetSpec::Nosegay3 { a, b, c } => Ok(nosegay3_graph(a, b, c)),
            GadgetSpec::NosegayHang { a, b, c } => Ok(nosegay_hang_graph(a, b, c)),
            GadgetSpec::NosegayK { ref dvec, k } => nosegay_k_graph(dvec, k),
            GadgetSpec::K2Component { .. } => Err(Error::InvalidParameter(
                "a vertex and edge count does not determine a multigraph".into(),
            )),
        }
    }
}

/// Generic rank of a gadget together with its qubit count `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GadgetRank {
    #[serde(serialize_with = "decimal")]
    pub rank: BigUint,
    pub vertex_count: usize,
}

fn decimal<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_str_radix(10))
}

impl GadgetRank {
    /// `ln(rank) - t ln 2`, the log of the gadget's factor in the product bound.
    pub fn log_weight(&self) -> LogWeight {
        match ln_biguint(&self.rank) {
            Some(ln) => LogWeight::Finite(ln - self.vertex_count as f64 * std::f64::consts::LN_2),
            None => LogWeight::ZeroRank,
        }
    }
}

/// Log-weight of a gadget; a zero rank has weight negative infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LogWeight {
    Finite(f64),
    ZeroRank,
}

impl LogWeight {
    pub fn value(self) -> f64 {
        match self {
            LogWeight::Finite(x) => x,
            LogWeight::ZeroRank => f64::NEG_INFINITY,
        }
    }
}

impl Serialize for LogWeight {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            LogWeight::Finite(x) => s.serialize_f64(x),
            LogWeight::ZeroRank => s.serialize_str("-inf"),
        }
    }
}

/// Natural logarithm of a big integer, `None` for zero.
pub fn ln_biguint(x: &BigUint) -> Option<f64> {
    if x.is_zero() {
        return None;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return Some(x.to_f64().expect("finite below 2^1000").ln());
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit mantissa");
    Some(top.ln() + shift as f64 * std::f64::consts::LN_2)
}

/// `ln(rank) - t ln 2` for the gadget.
pub fn gadget_log_weight(spec: &GadgetSpec) -> Result<LogWeight> {
    Ok(spec.rank()?.log_weight())
}

fn pow(base: u64, exp: u64) -> BigUint {
    num_traits::pow(BigUint::from(base), exp as usize)
}

/// `bracket * base^exp`, asserting exactness when `exp < 0`.
fn scaled(bracket: BigUint, base: u64, exp: i64) -> BigUint {
    if exp >= 0 {
        return bracket * pow(base, exp as u64);
    }
    let div = pow(base, exp.unsigned_abs());
    let (q, r) = (&bracket / &div, &bracket % &div);
    assert!(
        r.is_zero(),
        "gadget formula is not integral: {bracket} / {div}"
    );
    q
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn check_arity(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "arity must be at least 2, got {k}"
        )));
    }
    if k > 62 {
        return Err(Error::InvalidParameter(format!("arity {k} is too large")));
    }
    Ok(())
}

/// `S(d, k) = 2 (2^(k-1) - 1)^d (d / (2^k - 2) + 1)`, evaluated as
/// `M^(d-1) (d + 2M)` with `M = 2^(k-1) - 1`.
pub fn sunflower_rank(d: usize, k: usize) -> Result<GadgetRank> {
    check_arity(k)?;
    let m = (1u64 << (k - 1)) - 1;
    let rank = if d == 0 {
        BigUint::from(2u32)
    } else {
        pow(m, d as u64 - 1) * (d as u64 + 2 * m)
    };
    Ok(GadgetRank {
        rank,
        vertex_count: 1 + d * (k - 1),
    })
}

/// `R_(a,b,c) = 3^(a+b+c-3) [(a+6)(b+6)(c+6) - (a+3)(b+3)(c+3)]`.
pub fn nosegay3_rank(a: usize, b: usize, c: usize) -> GadgetRank {
    let (a, b, c) = (a as u64, b as u64, c as u64);
    let bracket = BigUint::from((a + 6) * (b + 6) * (c + 6) - (a + 3) * (b + 3) * (c + 3));
    GadgetRank {
        rank: scaled(bracket, 3, (a + b + c) as i64 - 3),
        vertex_count: (3 + 2 * (a + b + c)) as usize,
    }
}

/// `R_[a,b,c] = (a+2)(b+2)(c+2) - (a+1)(b+1)(c+1)`.
pub fn nosegay_hang_rank(a: usize, b: usize, c: usize) -> GadgetRank {
    let (a, b, c) = (a as u64, b as u64, c as u64);
    GadgetRank {
        rank: BigUint::from((a + 2) * (b + 2) * (c + 2) - (a + 1) * (b + 1) * (c + 1)),
        vertex_count: (3 + a + b + c) as usize,
    }
}

/// `R_(a,b,c)` as the sum over active hanging triangles:
/// `sum 2^(a+b+c-p-q-r) C(a,p) C(b,q) C(c,r) R_[p,q,r]`.
pub fn nosegay3_via_binomial(a: usize, b: usize, c: usize) -> GadgetRank {
    let mut total = BigUint::zero();
    for p in 0..=a {
        for q in 0..=b {
            for r in 0..=c {
                let inactive = (a - p) + (b - q) + (c - r);
                total += pow(2, inactive as u64)
                    * binomial(a as u64, p as u64)
                    * binomial(b as u64, q as u64)
                    * binomial(c as u64, r as u64)
                    * nosegay_hang_rank(p, q, r).rank;
            }
        }
    }
    GadgetRank {
        rank: total,
        vertex_count: 3 + 2 * (a + b + c),
    }
}

/// `N(d) = prod_i M^(d_i - 1) [prod_i (d_i + 2M) - prod_i (d_i + M)]` with
/// `M = 2^(k-1) - 1`.
pub fn nosegay_k_rank(dvec: &[usize], k: usize) -> Result<GadgetRank> {
    check_arity(k)?;
    if dvec.len() != k {
        return Err(Error::InvalidParameter(format!(
            "degree vector has {} entries for arity {k}",
            dvec.len()
        )));
    }
    let m = (1u64 << (k - 1)) - 1;
    let full: BigUint = dvec
        .iter()
        .map(|&d| BigUint::from(d as u64 + 2 * m))
        .product();
    let partial: BigUint = dvec.iter().map(|&d| BigUint::from(d as u64 + m)).product();
    let hanging: usize = dvec.iter().sum();
    Ok(GadgetRank {
        rank: scaled(full - partial, m, hanging as i64 - k as i64),
        vertex_count: k + hanging * (k - 1),
    })
}

/// Generic rank of a connected multigraph of two-qubit clauses.
///
/// Trees give `n + 1`, unicyclic graphs (a cycle, or a tree with one doubled
/// edge) give 2, and anything denser on three or more vertices gives 0. On two
/// vertices, `m` generic vectors in the 4-dimensional two-qubit space leave a
/// `max(4 - m, 0)`-dimensional complement.
pub fn k2_component_rank(vertex_count: usize, edge_count: usize) -> Result<BigUint> {
    let (n, m) = (vertex_count, edge_count);
    if n == 0 || m + 1 < n {
        return Err(Error::InvalidParameter(format!(
            "no connected multigraph has {n} vertices and {m} edges"
        )));
    }
    let rank = match n {
        1 if m > 0 => {
            return Err(Error::InvalidParameter(
                "a single vertex cannot carry edges".into(),
            ))
        }
        2 => 4usize.saturating_sub(m),
        _ if m + 1 == n => n + 1,
        _ if m == n => 2,
        _ => 0,
    };
    Ok(BigUint::from(rank))
}

/// Generic rank of a multigraph of two-qubit clauses: the product of its
/// component ranks.
pub fn k2_rank(g: &Hypergraph) -> Result<BigUint> {
    let mut total = BigUint::one();
    for comp in components(g)? {
        let r = k2_component_rank(comp.vertex_count, comp.edge_count)?;
        if r.is_zero() {
            return Ok(r);
        }
        total *= r;
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountMode {
    /// Union-find over the `2^n` basis states of the canonical stoquastic
    /// instance.
    Hypercube,
    /// Diagonals parallel to `(1, 1, 1)` in the box of Hamming-weight triples.
    CubeDiagonals,
}

/// Number of satisfying states of the canonical `[a, b, c]`-nosegay instance.
///
/// The central clause forbids `|000> - |111>` on qubits 0, 1, 2 and each
/// hanging edge forbids the singlet. Two basis states are joined when a
/// projector has the off-diagonal element 1/2 between them: they differ by
/// `000 <-> 111` on the central qubits, or by `01 <-> 10` on a hanging edge.
/// Each component contributes one satisfying state.
pub fn stoquastic_component_count(a: usize, b: usize, c: usize, mode: CountMode) -> Result<u64> {
    match mode {
        CountMode::Hypercube => hypercube_components(a, b, c),
        CountMode::CubeDiagonals => Ok(cube_diagonals(a + 1, b + 1, c + 1)),
    }
}

fn hypercube_components(a: usize, b: usize, c: usize) -> Result<u64> {
    let n = 3 + a + b + c;
    if n > HYPERCUBE_QUBIT_CAP {
        return Err(Error::TooManyQubits {
            n,
            cap: HYPERCUBE_QUBIT_CAP,
        });
    }
    // Leaves of center 0 come first, then those of center 1, then center 2.
    let mut hanging = Vec::with_capacity(a + b + c);
    let mut leaf = 3;
    for (center, count) in [a, b, c].into_iter().enumerate() {
        for _ in 0..count {
            hanging.push((1usize << center) | (1 << leaf));
            leaf += 1;
        }
    }
    let mut uf = UnionFind::new(1 << n);
    for x in 0..1usize << n {
        if x & 0b111 == 0 {
            uf.union(x, x | 0b111);
        }
        for &pair in &hanging {
            // Join only from the state with the center bit set, once per pair.
            if x & pair != 0 && x & pair != pair && x & pair & 0b111 != 0 {
                uf.union(x, x ^ pair);
            }
        }
    }
    Ok(uf.count() as u64)
}

/// Lattice points of `[0,na] x [0,nb] x [0,nc]` whose predecessor along
/// `(1,1,1)` leaves the box: one per diagonal.
fn cube_diagonals(na: usize, nb: usize, nc: usize) -> u64 {
    let mut count = 0;
    for x in 0..=na {
        for y in 0..=nb {
            for z in 0..=nc {
                if x == 0 || y == 0 || z == 0 {
                    count += 1;
                }
            }
        }
    }
    count
}

/// Center 0; petal `j` holds vertices `1 + j(k-1) .. 1 + (j+1)(k-1)`.
pub fn sunflower_graph(d: usize, k: usize) -> Result<Hypergraph> {
    check_arity(k)?;
    let mut g = Hypergraph::empty(1 + d * (k - 1));
    for j in 0..d {
        let mut e = vec![0];
        e.extend(1 + j * (k - 1)..1 + (j + 1) * (k - 1));
        g.push_edge(e)?;
    }
    Ok(g)
}

/// Central edge on vertices `0..k`; hanging edges follow center by center.
pub fn nosegay_k_graph(dvec: &[usize], k: usize) -> Result<Hypergraph> {
    check_arity(k)?;
    if dvec.len() != k {
        return Err(Error::InvalidParameter(format!(
            "degree vector has {} entries for arity {k}",
            dvec.len()
        )));
    }
    let n = k + dvec.iter().sum::<usize>() * (k - 1);
    let mut g = Hypergraph::empty(n);
    g.push_edge((0..k).collect::<Vec<_>>())?;
    let mut next = k;
    for (center, &d) in dvec.iter().enumerate() {
        for _ in 0..d {
            let mut e = vec![center];
            e.extend(next..next + k - 1);
            next += k - 1;
            g.push_edge(e)?;
        }
    }
    Ok(g)
}

pub fn nosegay3_graph(a: usize, b: usize, c: usize) -> Hypergraph {
    nosegay_k_graph(&[a, b, c], 3).expect("valid arity")
}

/// Central 3-edge on `0, 1, 2` with hanging 2-edges to fresh leaves.
pub fn nosegay_hang_graph(a: usize, b: usize, c: usize) -> Hypergraph {
    let mut g = Hypergraph::empty(3 + a + b + c);
    g.push_edge([0, 1, 2]).expect("valid edge");
    let mut leaf = 3;
    for (center, count) in [a, b, c].into_iter().enumerate() {
        for _ in 0..count {
            g.push_edge([center, leaf]).expect("valid edge");
            leaf += 1;
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn sunflower_examples() {
        let r = sunflower_rank(1, 3).unwrap();
        assert_eq!((r.rank, r.vertex_count), (big(7), 3));
        let r = sunflower_rank(0, 3).unwrap();
        assert_eq!((r.rank, r.vertex_count), (big(2), 1));
        assert_eq!(sunflower_rank(6, 3).unwrap().rank, big(2916));
        assert_eq!(sunflower_rank(2, 3).unwrap().rank, big(24));
        assert!(sunflower_rank(1, 1).is_err());
    }

    #[test]
    fn sunflower_beyond_64_bits() {
        let r = sunflower_rank(100, 3).unwrap();
        assert_eq!(r.rank, pow(3, 99) * 106u32);
        let ln = ln_biguint(&r.rank).unwrap();
        assert!((ln - (99.0 * 3f64.ln() + 106f64.ln())).abs() < 1e-9);
    }

    #[test]
    fn nosegay3_examples() {
        assert_eq!(nosegay3_rank(0, 0, 0).rank, big(7));
        assert_eq!(nosegay3_rank(1, 2, 3).rank, big(10368));
        assert_eq!(nosegay3_rank(1, 0, 0).rank, big(24));
        assert_eq!(nosegay3_rank(1, 2, 3).vertex_count, 15);
    }

    #[test]
    fn nosegay_hang_examples() {
        assert_eq!(nosegay_hang_rank(0, 0, 0).rank, big(7));
        assert_eq!(nosegay_hang_rank(1, 1, 1).rank, big(19));
        assert_eq!(nosegay_hang_rank(1, 2, 3).rank, big(36));
        assert_eq!(nosegay_hang_rank(1, 2, 3).vertex_count, 9);
    }

    #[test]
    fn binomial_sum_examples() {
        assert_eq!(nosegay3_via_binomial(0, 0, 0).rank, big(7));
        assert_eq!(nosegay3_via_binomial(1, 2, 3), nosegay3_rank(1, 2, 3));
        assert_eq!(nosegay3_via_binomial(4, 4, 4), nosegay3_rank(4, 4, 4));
    }

    #[test]
    fn nosegay_k_examples() {
        for k in 2..8 {
            let r = nosegay_k_rank(&vec![0; k], k).unwrap();
            assert_eq!(r.rank, big((1 << k) - 1));
            assert_eq!(r.vertex_count, k);
        }
        assert_eq!(nosegay_k_rank(&[1, 1, 1], 3).unwrap().rank, big(279));
        assert_eq!(nosegay3_rank(1, 1, 1).rank, big(279));
        assert_eq!(nosegay_k_rank(&[1, 0, 0, 0], 4).unwrap().rank, big(112));
        assert_eq!(sunflower_rank(2, 4).unwrap().rank, big(112));
        assert!(nosegay_k_rank(&[1, 0], 3).is_err());
    }

    fn k2(n: usize, edges: &[[usize; 2]]) -> BigUint {
        k2_rank(&Hypergraph::from_edges(n, edges.iter().copied()).unwrap()).unwrap()
    }

    #[test]
    fn k2_examples() {
        assert_eq!(k2(3, &[[0, 1], [1, 2]]), big(4));
        assert_eq!(k2(3, &[[0, 1], [1, 2], [0, 2]]), big(2));
        assert_eq!(k2(4, &[[0, 1], [2, 3]]), big(9));
        assert_eq!(k2(2, &[[0, 1]; 3]), big(1));
        assert_eq!(k2(2, &[[0, 1]; 5]), big(0));
        assert_eq!(k2(3, &[[0, 1], [0, 1], [1, 2]]), big(2));
        assert_eq!(k2(4, &[[0, 1], [1, 2], [2, 0], [2, 3], [3, 1]]), big(0));
        assert_eq!(k2(1, &[]), big(2));
        let hyper = Hypergraph::from_edges(3, [[0, 1, 2]]).unwrap();
        assert!(k2_rank(&hyper).is_err());
    }

    #[test]
    fn stoquastic_examples() {
        use CountMode::*;
        assert_eq!(stoquastic_component_count(0, 0, 0, Hypercube).unwrap(), 7);
        assert_eq!(stoquastic_component_count(1, 1, 1, Hypercube).unwrap(), 19);
        assert_eq!(stoquastic_component_count(2, 3, 1, Hypercube).unwrap(), 36);
        assert_eq!(
            stoquastic_component_count(2, 3, 1, CubeDiagonals).unwrap(),
            36
        );
        assert!(stoquastic_component_count(10, 10, 0, Hypercube).is_err());
    }

    #[test]
    fn log_weights() {
        let w = gadget_log_weight(&GadgetSpec::Sunflower { d: 1, k: 3 })
            .unwrap()
            .value();
        assert!((w - (7.0f64 / 8.0).ln()).abs() < 1e-15);
        assert!((w + 0.13353).abs() < 1e-5);
        for k in 2..6 {
            let w = gadget_log_weight(&GadgetSpec::Sunflower { d: 0, k })
                .unwrap()
                .value();
            assert!(w.abs() < 1e-15);
        }
        let n = gadget_log_weight(&GadgetSpec::Nosegay3 { a: 0, b: 0, c: 0 }).unwrap();
        assert_eq!(n, LogWeight::Finite(w_sunflower_1_3()));
        let zero = GadgetSpec::K2Component {
            vertex_count: 3,
            edge_count: 5,
            max_edge_multiplicity: 1,
        };
        assert_eq!(gadget_log_weight(&zero).unwrap(), LogWeight::ZeroRank);
        assert_eq!(LogWeight::ZeroRank.value(), f64::NEG_INFINITY);
    }

    fn w_sunflower_1_3() -> f64 {
        gadget_log_weight(&GadgetSpec::Sunflower { d: 1, k: 3 })
            .unwrap()
            .value()
    }

    #[test]
    fn builders_have_the_advertised_shape() {
        let g = sunflower_graph(6, 3).unwrap();
        assert_eq!((g.n(), g.m()), (13, 6));
        assert!(g.edges().iter().all(|e| e.contains(0)));
        let g = nosegay3_graph(1, 2, 3);
        assert_eq!((g.n(), g.m()), (15, 7));
        let g = nosegay_hang_graph(1, 2, 3);
        assert_eq!((g.n(), g.m()), (9, 7));
        assert_eq!(g.uniform_arity(), None);
        let spec = GadgetSpec::NosegayK {
            dvec: vec![2, 0, 1, 1],
            k: 4,
        };
        let g = spec.graph().unwrap();
        assert_eq!(g.n(), spec.rank().unwrap().vertex_count);
        assert_eq!(g.m(), spec.edge_count());
    }

    proptest! {
        #[test]
        fn sunflower_matches_active_petal_sum(d in 0usize..21, k in 2usize..7) {
            let inactive = (1u64 << (k - 1)) - 2;
            let sum: BigUint = (0..=d)
                .map(|a| binomial(d as u64, a as u64) * (a as u64 + 2) * pow(inactive, (d - a) as u64))
                .sum();
            prop_assert_eq!(sunflower_rank(d, k).unwrap().rank, sum);
        }

        #[test]
        fn nosegay3_is_symmetric(a in 0usize..12, b in 0usize..12, c in 0usize..12) {
            let r = nosegay3_rank(a, b, c);
            prop_assert_eq!(&r, &nosegay3_rank(b, c, a));
            prop_assert_eq!(&r, &nosegay3_rank(c, b, a));
        }

        #[test]
        fn log_weight_is_nonpositive(d in 0usize..200, k in 2usize..9) {
            let w = sunflower_rank(d, k).unwrap().log_weight().value();
            prop_assert!(w <= 1e-12);
        }
    }
}
