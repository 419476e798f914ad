//! `verify gadgets`: every closed form against the field rank oracle.

use qsat_core::gadgets::{k2_rank, nosegay_hang_graph};
use qsat_core::hypergraph::components;
use qsat_core::rank_oracle::{generic_rank_field, FieldOptions, DEFAULT_QUBIT_CAP};
use qsat_core::{Execution, GadgetSpec, Hypergraph};
use serde::Serialize;
use serde_json::{json, Value};

use crate::Failure;

#[derive(Serialize)]
struct Check {
    gadget: Value,
    qubits: usize,
    formula: String,
    oracle: String,
    agree: bool,
}

/// Triples of non-negative integers with sum at most `total`.
fn triples(total: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for a in 0..=total {
        for b in 0..=total - a {
            for c in 0..=total - a - b {
                out.push((a, b, c));
            }
        }
    }
    out
}

/// Connected multigraphs on `n` vertices with `m` edges, one per multiset of
/// vertex pairs.
fn connected_multigraphs(n: usize, m: usize) -> Vec<Hypergraph> {
    fn extend(
        pairs: &[[usize; 2]],
        from: usize,
        left: usize,
        n: usize,
        chosen: &mut Vec<[usize; 2]>,
        out: &mut Vec<Hypergraph>,
    ) {
        if left == 0 {
            let g = Hypergraph::from_edges(n, chosen.iter().copied()).expect("valid pairs");
            if components(&g).map(|c| c.len() == 1).unwrap_or(false) {
                out.push(g);
            }
            return;
        }
        for i in from..pairs.len() {
            chosen.push(pairs[i]);
            extend(pairs, i, left - 1, n, chosen, out);
            chosen.pop();
        }
    }
    let pairs: Vec<[usize; 2]> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| [u, v]))
        .collect();
    let mut out = Vec::new();
    extend(&pairs, 0, m, n, &mut Vec::new(), &mut out);
    out
}

pub fn gadgets(max_size: usize, seed: u64, exec: Execution) -> Result<Value, Failure> {
    let opts = FieldOptions {
        trials: 3,
        seed,
        ..Default::default()
    };
    let mut checks = Vec::new();
    let mut skipped = 0;
    let mut run = |label: Value, formula: String, g: &Hypergraph| -> Result<(), Failure> {
        if g.n() > DEFAULT_QUBIT_CAP {
            skipped += 1;
            return Ok(());
        }
        let oracle = generic_rank_field(g, &opts, exec)?.rank.to_string();
        checks.push(Check {
            gadget: label,
            qubits: g.n(),
            agree: formula == oracle,
            formula,
            oracle,
        });
        Ok(())
    };

    let mut specs = Vec::new();
    for k in [3, 4] {
        for d in 0..=max_size {
            specs.push(GadgetSpec::Sunflower { d, k });
        }
    }
    for (a, b, c) in triples(max_size) {
        specs.push(GadgetSpec::Nosegay3 { a, b, c });
        specs.push(GadgetSpec::NosegayHang { a, b, c });
    }
    for spec in specs {
        let g = match &spec {
            GadgetSpec::NosegayHang { a, b, c } => nosegay_hang_graph(*a, *b, *c),
            other => other.graph()?,
        };
        let formula = spec.rank()?.rank.to_string();
        run(
            serde_json::to_value(&spec).expect("serializable"),
            formula,
            &g,
        )?;
    }
    for n in 1..=4 {
        for m in 0..=(max_size + 2).min(5) {
            for g in connected_multigraphs(n, m) {
                let formula = k2_rank(&g)?.to_string();
                let edges: Vec<&[usize]> = g.edges().iter().map(|e| e.vertices()).collect();
                run(
                    json!({ "family": "k2", "n": n, "edges": edges }),
                    formula,
                    &g,
                )?;
            }
        }
    }

    let all_agree = checks.iter().all(|c| c.agree);
    Ok(json!({
        "params": { "max_size": max_size, "seed": seed, "trials": opts.trials, "qubit_cap": DEFAULT_QUBIT_CAP },
        "result": {
            "all_agree": all_agree,
            "checked": checks.len(),
            "skipped": skipped,
            "disagreements": checks.iter().filter(|c| !c.agree).collect::<Vec<_>>(),
            "checks": checks,
        },
    }))
}
