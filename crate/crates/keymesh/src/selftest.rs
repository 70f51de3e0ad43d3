//! Quick battery of exact checks, run by the `selftest` subcommand.

use keymesh_core::analysis::{c_pound, c_star};
use keymesh_core::attack::{analytic_p_compromised_tau, f_of_q, optimal_q};
use keymesh_core::formulas::{p_q_exact, rho_brute_force, rho_distribution, rho_u};
use keymesh_core::generators::{geometric_graph, geometric_graph_brute_force, key_graph, key_graph_brute_force};
use keymesh_core::geometry::place_nodes;
use keymesh_core::keys::assign_keys;
use keymesh_core::stats::Proportion;
use keymesh_core::{GeoParams, RegionKind, RngStream, SchemeParams};

use crate::csv::Table;
use crate::edgelist::{read_edge_list, write_edge_list};

pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, f: impl FnOnce() -> Result<(), String>) -> Check {
    match f() {
        Ok(()) => Check { name, passed: true, detail: String::new() },
        Err(detail) => Check { name, passed: false, detail },
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn scheme(n: usize, k: usize, p: usize, q: usize) -> Result<SchemeParams, String> {
    SchemeParams::new(n, k, p, q).map_err(|e| e.to_string())
}

pub fn run_selftest() -> Vec<Check> {
    vec![
        check("rho_enumeration", || {
            for p in 1..=10 {
                for k in 1..=4usize.min(p) {
                    let s = scheme(2, k, p, 1)?;
                    for u in 0..=k {
                        let fast = rho_u(&s, u).map_err(|e| e.to_string())?;
                        let brute = rho_brute_force(&s, u).map_err(|e| e.to_string())?;
                        ensure((fast - brute).abs() <= 1e-12, || format!("K={k} P={p} u={u}: {fast} vs {brute}"))?;
                    }
                }
            }
            Ok(())
        }),
        check("rho_normalized", || {
            for k in [1usize, 7, 20, 64] {
                for p in [k, 2 * k, 1000, 100_000] {
                    let total: f64 = rho_distribution(&scheme(2, k, p, 1)?).iter().sum();
                    ensure((total - 1.0).abs() <= 1e-12, || format!("K={k} P={p}: {total}"))?;
                }
            }
            Ok(())
        }),
        check("key_setup_example", || {
            let v = p_q_exact(&scheme(2, 2, 4, 1)?);
            ensure((v - 5.0 / 6.0).abs() < 1e-15, || format!("p_1(2,4) = {v}"))
        }),
        check("compromise_example", || {
            let v = analytic_p_compromised_tau(&scheme(2, 2, 4, 1)?, 2).map_err(|e| e.to_string())?;
            ensure((v - 13.0 / 30.0).abs() < 1e-12, || format!("got {v}"))
        }),
        check("optimal_overlap", || {
            for m in 1..=60usize {
                for k in 1..=60usize {
                    let f: Vec<f64> = (1..=k).map(|q| f_of_q(q, m, k)).collect();
                    let best = f.iter().copied().fold(f64::INFINITY, f64::min);
                    let argmin: Vec<usize> = (1..=k).filter(|&q| f[q - 1] <= best * (1.0 + 1e-9)).collect();
                    let got = optimal_q(m, k);
                    ensure(got == argmin, || format!("m={m} K={k}: {got:?} vs {argmin:?}"))?;
                }
            }
            Ok(())
        }),
        check("key_graph_index", || {
            for (seed, (k, p, q)) in [(4usize, 40usize, 1usize), (8, 60, 2), (12, 50, 3)].into_iter().enumerate() {
                let a = assign_keys(&scheme(150, k, p, q)?, &RngStream::new(seed as u64, 0));
                ensure(key_graph(&a, q) == key_graph_brute_force(&a, q), || format!("K={k} P={p} q={q}"))?;
            }
            Ok(())
        }),
        check("geometric_grid", || {
            for region in [RegionKind::UnitTorus, RegionKind::UnitSquare] {
                for r in [0.02, 0.1, 0.45] {
                    let geo = GeoParams::disk(region, r).map_err(|e| e.to_string())?;
                    let pl = place_nodes(300, &geo, &RngStream::new(3, 0)).map_err(|e| e.to_string())?;
                    ensure(geometric_graph(&pl, r) == geometric_graph_brute_force(&pl, r), || {
                        format!("{} r={r}", region.name())
                    })?;
                }
            }
            Ok(())
        }),
        check("threshold_reduction", || {
            for (n, k, p) in [(100usize, 5usize, 70usize), (5000, 40, 50_000), (22026, 1000, 7_389_056)] {
                let a = c_pound(n, k, p, 1.0, 1).map_err(|e| e.to_string())?;
                let b = c_star(n, k, p).map_err(|e| e.to_string())?;
                ensure(a == b, || format!("{a} vs {b}"))?;
            }
            Ok(())
        }),
        check("edge_list_round_trip", || {
            let a = assign_keys(&scheme(80, 5, 40, 1)?, &RngStream::new(1, 0));
            let g = key_graph(&a, 1);
            let mut buf = Vec::new();
            write_edge_list(&g, &mut buf).map_err(|e| e.to_string())?;
            let back = read_edge_list(&buf[..]).map_err(|e| e.to_string())?;
            ensure(back == g, || "graph changed".into())
        }),
        check("wilson_reference", || {
            let (lo, hi) = Proportion::new(3, 10).wilson95();
            ensure((lo - 0.107_791_267).abs() < 1e-6 && (hi - 0.603_221_853).abs() < 1e-6, || format!("({lo}, {hi})"))
        }),
    ]
}

pub fn selftest_table(checks: &[Check]) -> Table {
    let mut t = Table::new(&["check", "status", "detail"]);
    for c in checks {
        let detail = c.detail.replace(',', ";");
        t.push(vec![c.name.into(), (if c.passed { "pass" } else { "fail" }).into(), detail.as_str().into()]);
    }
    t
}
