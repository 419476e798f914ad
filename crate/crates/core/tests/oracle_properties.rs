use num_complex::Complex;
use qsat_core::gadgets::{nosegay_k_graph, nosegay_k_rank};
use qsat_core::rank_oracle::{
    generic_rank_field, generic_rank_float, generic_rank_float_sampled, FieldOptions, FloatOptions,
};
use qsat_core::rng::stream_rng;
use qsat_core::{ClauseVector, Execution, Formula, Hypergraph};
use rand::Rng;

fn field(g: &Hypergraph) -> u64 {
    let opts = FieldOptions {
        trials: 3,
        seed: 3,
        ..Default::default()
    };
    generic_rank_field(g, &opts, Execution::default())
        .unwrap()
        .rank
}

fn random_graph(rng: &mut impl Rng, n: usize, m: usize) -> Hypergraph {
    let mut g = Hypergraph::empty(n);
    for _ in 0..m {
        let k = rng.random_range(2..=3.min(n));
        let mut e = Vec::new();
        while e.len() < k {
            let v = rng.random_range(0..n);
            if !e.contains(&v) {
                e.push(v);
            }
        }
        g.push_edge(e).unwrap();
    }
    g
}

#[test]
fn adding_an_edge_never_raises_the_rank() {
    let mut rng = stream_rng(1, 0);
    for _ in 0..40 {
        let n = rng.random_range(3..=7);
        let m = rng.random_range(0..=n);
        let g = random_graph(&mut rng, n, m);
        let extra = random_graph(&mut rng, n, 1);
        let mut bigger = g.clone();
        bigger
            .push_edge(extra.edges()[0].vertices().to_vec())
            .unwrap();
        assert!(field(&bigger) <= field(&g), "{g} + {extra}");
    }
}

#[test]
fn disjoint_union_multiplies_ranks() {
    let mut rng = stream_rng(2, 0);
    for _ in 0..15 {
        let (n1, n2) = (rng.random_range(2..=5), rng.random_range(2..=4));
        let (m1, m2) = (rng.random_range(0..=n1), rng.random_range(0..=n2));
        let g = random_graph(&mut rng, n1, m1);
        let h = random_graph(&mut rng, n2, m2);
        assert_eq!(field(&g.disjoint_union(&h)), field(&g) * field(&h));
    }
}

#[test]
fn float_and_field_agree_on_small_instances() {
    let mut rng = stream_rng(3, 0);
    for i in 0..20 {
        let n = rng.random_range(2..=6);
        let m = rng.random_range(1..=n + 1);
        let g = random_graph(&mut rng, n, m);
        let float =
            generic_rank_float_sampled(&g, 3, i, &FloatOptions::default(), Execution::default())
                .unwrap()
                .rank;
        assert_eq!(float, field(&g), "{g}");
    }
}

#[test]
fn sequential_and_parallel_results_match() {
    let mut rng = stream_rng(4, 0);
    let g = random_graph(&mut rng, 7, 5);
    let opts = FieldOptions {
        trials: 4,
        seed: 9,
        ..Default::default()
    };
    let seq = generic_rank_field(&g, &opts, Execution::Sequential).unwrap();
    let par = generic_rank_field(&g, &opts, Execution::Parallel).unwrap();
    assert_eq!(seq, par);
    let fo = FloatOptions::default();
    let seq = generic_rank_float_sampled(&g, 3, 5, &fo, Execution::Sequential).unwrap();
    let par = generic_rank_float_sampled(&g, 3, 5, &fo, Execution::Parallel).unwrap();
    assert_eq!(seq, par);
}

fn basis_clause(index: usize) -> ClauseVector {
    let mut amps = vec![Complex::new(0.0, 0.0); 4];
    amps[index] = Complex::new(1.0, 0.0);
    ClauseVector::new(amps).unwrap()
}

#[test]
fn local_bits_follow_sorted_vertex_order() {
    // On edge {1, 2}, local index 1 sets vertex 1 and clears vertex 2,
    // forbidding global states {2, 3}. Local index 0 on edge {0, 1} forbids
    // {0, 4}. Disjoint sets leave rank 4; reading local bits in the opposite
    // order would forbid {4, 5} on the second edge and leave rank 5.
    let g = Hypergraph::from_edges(3, [[0, 1], [1, 2]]).unwrap();
    let f = Formula::new(g, vec![basis_clause(0), basis_clause(1)]).unwrap();
    assert_eq!(
        generic_rank_float(&f, &FloatOptions::default())
            .unwrap()
            .rank,
        4
    );
}

#[test]
fn nosegay_k_formula_compared_with_oracle() {
    // The formula is only claimed as an upper bound; record how it compares.
    for (dvec, k) in [
        (vec![0, 0, 0, 0], 4),
        (vec![1, 0, 0, 0], 4),
        (vec![1, 1, 0, 0], 4),
    ] {
        let g = nosegay_k_graph(&dvec, k).unwrap();
        let formula = nosegay_k_rank(&dvec, k).unwrap().rank;
        let oracle = field(&g);
        println!("N({dvec:?}, {k}) = {formula}, oracle {oracle}");
        assert!(
            formula >= oracle.into(),
            "N({dvec:?}, {k}) = {formula} is below the oracle {oracle}"
        );
    }
}
