use qsat_core::analysis::{nosegay_mu, nosegay_nu0, sunflower_degree_density};
use qsat_core::hypergraph::random_hypergraph;
use qsat_core::peeling::{empirical_log_rank, nosegay_peel, sunflower_peel, PeelTrace};
use qsat_core::GadgetSpec;

fn check_nosegay_invariants(trace: &PeelTrace) {
    assert_eq!(trace.edges_covered(), trace.m);
    let mut prev_edges = trace.m;
    for (i, s) in trace.steps.iter().enumerate() {
        assert_eq!(s.vertices_remaining, trace.n - 3 * (i + 1));
        assert!(s.edges_remaining < prev_edges);
        prev_edges = s.edges_remaining;
    }
    assert_eq!(prev_edges, 0);
}

#[test]
fn nosegay_peel_tracks_the_fluid_limit() {
    let (n, alpha) = (20_000, 3.594);
    let g = random_hypergraph(n, (alpha * n as f64) as usize, 3, 8).unwrap();
    let trace = nosegay_peel(&g, 8).unwrap();
    check_nosegay_invariants(&trace);
    let worst = trace
        .steps
        .iter()
        .map(|s| {
            let nu = s.vertices_remaining as f64 / n as f64;
            (s.edges_remaining as f64 / n as f64 - nosegay_mu(alpha, nu).max(0.0)).abs()
        })
        .fold(0.0, f64::max);
    assert!(worst < 0.02, "sup deviation {worst}");
    let end = trace.steps.last().unwrap().vertices_remaining as f64 / n as f64;
    assert!((end - nosegay_nu0(alpha)).abs() < 0.02, "stopped at {end}");
}

#[test]
fn sunflower_degrees_follow_the_density() {
    let (n, alpha) = (20_000, 3.894);
    let g = random_hypergraph(n, (alpha * n as f64) as usize, 3, 9).unwrap();
    let trace = sunflower_peel(&g, 9).unwrap();
    assert_eq!(trace.steps.len(), n);
    assert_eq!(trace.edges_covered(), g.m());
    let mut hist = [0usize; 12];
    for s in &trace.steps {
        let GadgetSpec::Sunflower { d, k } = s.gadget else {
            panic!("unexpected gadget")
        };
        assert_eq!(k, 3);
        hist[d.min(11)] += 1;
    }
    for (d, &count) in hist.iter().enumerate().take(11) {
        let freq = count as f64 / n as f64;
        let a = sunflower_degree_density(d, alpha, 3);
        assert!((freq - a).abs() < 0.02, "d={d}: {freq} vs {a}");
    }
}

#[test]
fn anomalies_stay_sparse() {
    let n = 100_000;
    let cap = 10.0 * (n as f64).ln();
    for alpha in [3.594, 4.0] {
        for seed in 0..10 {
            let g = random_hypergraph(n, (alpha * n as f64) as usize, 3, seed).unwrap();
            let ns = nosegay_peel(&g, seed).unwrap();
            let sf = sunflower_peel(&g, seed).unwrap();
            assert!(
                (ns.anomalies as f64) <= cap,
                "nosegay alpha={alpha} seed={seed}: {}",
                ns.anomalies
            );
            assert!(
                (sf.anomalies as f64) <= cap,
                "sunflower alpha={alpha} seed={seed}: {}",
                sf.anomalies
            );
        }
    }
}

#[test]
fn empirical_bound_never_exceeds_ln2() {
    for seed in 0..10 {
        let g = random_hypergraph(2000, 500 * seed as usize, 3, seed).unwrap();
        for trace in [
            sunflower_peel(&g, seed).unwrap(),
            nosegay_peel(&g, seed).unwrap(),
        ] {
            let b = empirical_log_rank(&trace).unwrap();
            assert!(b.value <= std::f64::consts::LN_2 + 1e-15);
            assert_eq!(b.step_count, trace.steps.len());
        }
    }
}

#[test]
fn trace_csv_lists_every_step() {
    let g = random_hypergraph(300, 600, 3, 4).unwrap();
    let trace = nosegay_peel(&g, 4).unwrap();
    let mut buf = Vec::new();
    trace.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("step,vertices_remaining,edges_remaining,gadget,params,log_weight,anomaly")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), trace.steps.len());
    let first: Vec<&str> = rows[0].split(',').collect();
    assert_eq!(first.len(), 7);
    assert_eq!(first[3], "nosegay3");
    assert_eq!(first[4].split(';').count(), 3);
}

#[test]
fn peels_are_deterministic_per_seed() {
    let g = random_hypergraph(5000, 15000, 3, 1).unwrap();
    assert_eq!(nosegay_peel(&g, 3).unwrap(), nosegay_peel(&g, 3).unwrap());
    assert_eq!(
        sunflower_peel(&g, 3).unwrap(),
        sunflower_peel(&g, 3).unwrap()
    );
    assert_ne!(
        sunflower_peel(&g, 3).unwrap(),
        sunflower_peel(&g, 4).unwrap()
    );
}
