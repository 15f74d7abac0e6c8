//! The four batch commands: solve, verify, classical, ndim.
//!
//! Exit codes: 0 success, 1 verification/solver failure, 2 config error
//! (enforced by main).

use std::fs;
use std::path::Path;

use serde_json::json;

use virial::classical::{classical_virial_residual, quantum_classical_gap, ClassicalOrbit};
use virial::error::Result;
use virial::expectations::expect_power;
use virial::potentials::PotentialKind;
use virial::radial::{solve_auto, DimensionConfig, Eigenstate};
use virial::relations::{
    coulomb_kramer_chain, general_residual, linear_chain, oscillator_odd_chain,
    oscillator_v_chain, power_law_relation, special_case_residual, PowerLawCase, ProbeFunction,
    RelationReport, SpecialCase,
};

use crate::config::RunConfig;

const SOLVER_TOL: f64 = 1e-10;

fn report_meta(cfg: &RunConfig) -> serde_json::Value {
    json!({
        "timestamp": chrono::Utc::now().to_rfc3339(),
        "config": cfg.to_canonical(),
    })
}

fn solve_states(cfg: &RunConfig) -> Vec<((u32, u32), Result<Eigenstate>)> {
    let potential = match cfg.potential() {
        Ok(p) => p,
        Err(e) => return cfg.states.iter().map(|&s| (s, Err(e.clone()))).collect(),
    };
    cfg.states
        .iter()
        .map(|&(n, l)| {
            let dim = match DimensionConfig::new(cfg.n_dim, l) {
                Ok(d) => d,
                Err(e) => return ((n, l), Err(e)),
            };
            ((n, l), solve_auto(&potential, dim, n, cfg.grid_h, SOLVER_TOL))
        })
        .collect()
}

/// Solve the configured states and write eigenstate CSV/JSON files.
pub fn cmd_solve(cfg: &RunConfig, out: &Path) -> std::io::Result<i32> {
    let states_dir = out.join("states");
    fs::create_dir_all(&states_dir)?;
    let mut failures = 0;
    let mut rows = Vec::new();
    println!("{:>4} {:>4} {:>16} {:>14}", "n", "l", "eps", "C2");
    for ((n, l), solved) in solve_states(cfg) {
        match solved {
            Ok(state) => {
                println!("{:>4} {:>4} {:>16.10} {:>14.8}", n, l, state.eps, state.c2);
                let stem = format!("state_N{}_l{}_n{}", cfg.n_dim, l, n);
                state.write_csv_path(&states_dir.join(format!("{stem}.csv")))?;
                fs::write(
                    states_dir.join(format!("{stem}.json")),
                    serde_json::to_string_pretty(&state.metadata_json())?.as_bytes(),
                )?;
                rows.push(state.metadata_json());
            }
            Err(e) => {
                println!("{:>4} {:>4}  ERROR: {e}", n, l);
                rows.push(json!({"n": n, "l": l, "error": e.to_string()}));
                failures += 1;
            }
        }
    }
    fs::write(
        states_dir.join("index.json"),
        serde_json::to_string_pretty(&json!({"meta": report_meta(cfg), "states": rows}))?,
    )?;
    Ok(if failures > 0 { 1 } else { 0 })
}

fn probe_set(cfg: &RunConfig, l: u32) -> Vec<f64> {
    let mut probes = cfg.probes.clone();
    if cfg.auto_probes {
        probes.extend_from_slice(&[0.0, 1.0, 2.0, 3.0, (2 * l + 2) as f64]);
        if l >= 1 {
            probes.push(-2.0 * l as f64);
        }
    }
    probes.sort_by(f64::total_cmp);
    probes.dedup();
    probes
}

fn chain_reports(state: &Eigenstate, potential_kind: &PotentialKind) -> Vec<Result<RelationReport>> {
    let mut out = Vec::new();
    match potential_kind {
        PotentialKind::PowerLaw { amplitude, exponent }
            if *amplitude == 1.0 && *exponent == 2.0 =>
        {
            let chain = oscillator_v_chain(state.eps, state.l1(), 3);
            for (k, want) in chain.iter().enumerate().skip(1) {
                let id = format!("chain v^{k} (oscillator)");
                let got = expect_power(state, 2.0 * k as f64)
                    .map(|m| m.value / 2f64.powi(k as i32));
                out.push(got.map(|g| RelationReport::compare(id, *want, g, state)));
            }
            out.push(oscillator_odd_chain(state, 5).and_then(|chain| {
                let (power, want) = *chain.last().expect("chain is non-empty");
                let got = expect_power(state, power as f64)?.value;
                Ok(RelationReport::compare(
                    format!("chain rho^{power} (oscillator odd)"),
                    want,
                    got,
                    state,
                ))
            }));
        }
        PotentialKind::PowerLaw { amplitude, exponent }
            if *amplitude == 1.0 && *exponent == 1.0 && state.l1() == 0 =>
        {
            let chain = linear_chain(state.eps, 4);
            for (j, want) in chain.iter().enumerate().skip(1) {
                let id = format!("chain v^{j} (linear)");
                let got =
                    expect_power(state, j as f64).map(|m| m.value / 2f64.powi(j as i32));
                out.push(got.map(|g| RelationReport::compare(id, *want, g, state)));
            }
        }
        PotentialKind::Coulomb { strength } if *strength == 1.0 => {
            out.push(coulomb_kramer_chain(state.eps, state.l1(), 4).and_then(|chain| {
                let (power, want) = *chain.last().expect("chain is non-empty");
                let got = expect_power(state, power as f64)?.value;
                Ok(RelationReport::compare(
                    format!("chain rho^{power} (kramer)"),
                    want,
                    got,
                    state,
                ))
            }));
        }
        _ => {}
    }
    out
}

fn write_relation_outputs(
    cfg: &RunConfig,
    out: &Path,
    reports: &[RelationReport],
    errors: &[serde_json::Value],
) -> std::io::Result<()> {
    let reports_dir = out.join("reports");
    fs::create_dir_all(&reports_dir)?;
    let mut entries: Vec<serde_json::Value> =
        reports.iter().map(|r| serde_json::to_value(r).unwrap()).collect();
    entries.extend_from_slice(errors);
    fs::write(
        reports_dir.join("relations.json"),
        serde_json::to_string_pretty(&json!({"meta": report_meta(cfg), "reports": entries}))?,
    )?;
    let mut csv = String::from("relation_id,n,l,N,lhs,rhs,residual\n");
    for r in reports {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.relation_id, r.n, r.l1, r.n_dim, r.lhs, r.rhs, r.residual
        ));
    }
    fs::write(reports_dir.join("relations.csv"), csv)?;
    Ok(())
}

/// Run the selected relation families over the configured states; exit 0 only
/// when every relative residual is within tolerance.
pub fn cmd_verify(cfg: &RunConfig, out: &Path) -> std::io::Result<i32> {
    let mut reports: Vec<RelationReport> = Vec::new();
    let mut errors: Vec<serde_json::Value> = Vec::new();
    let record = |res: Result<RelationReport>, id: &str, n: u32, l: u32,
                      reports: &mut Vec<RelationReport>,
                      errors: &mut Vec<serde_json::Value>| {
        match res {
            Ok(rep) => reports.push(rep),
            Err(e) => errors.push(json!({
                "relation_id": id, "n": n, "l": l, "error": e.to_string(),
            })),
        }
    };

    for ((n, l), solved) in solve_states(cfg) {
        let state = match solved {
            Ok(s) => s,
            Err(e) => {
                errors.push(json!({"relation_id": "solve", "n": n, "l": l, "error": e.to_string()}));
                continue;
            }
        };
        if cfg.relations.iter().any(|r| r == "general") {
            for j in probe_set(cfg, l) {
                let id = format!("general f=rho^{j}");
                let res = general_residual(&state, &ProbeFunction::power(j));
                record(res, &id, n, l, &mut reports, &mut errors);
            }
        }
        if cfg.n_dim == 3 && cfg.relations.iter().any(|r| r == "special") {
            let mut cases = vec![
                SpecialCase::J0,
                SpecialCase::J1Virial,
                SpecialCase::J2,
                SpecialCase::J3,
                SpecialCase::J2L2,
            ];
            if l >= 1 {
                cases.push(SpecialCase::JNeg2L);
            }
            for case in cases {
                let id = format!("{case:?}");
                let res = special_case_residual(&state, case);
                record(res, &id, n, l, &mut reports, &mut errors);
            }
        }
        let is_power_law = matches!(state.potential.kind, PotentialKind::PowerLaw { .. });
        if cfg.n_dim == 3 && is_power_law && cfg.relations.iter().any(|r| r == "power_law") {
            let m = match state.potential.kind {
                PotentialKind::PowerLaw { exponent, .. } => exponent,
                _ => unreachable!(),
            };
            let mut cases = vec![PowerLawCase::J1, PowerLawCase::J2L2];
            if l == 0 && m > 0.0 {
                cases.push(PowerLawCase::J0L0);
            }
            if l >= 1 {
                cases.push(PowerLawCase::J0L);
                cases.push(PowerLawCase::JNeg2L);
            }
            if (l as f64) > m / 4.0 {
                cases.push(PowerLawCase::JHalfNegM);
            }
            for case in cases {
                let id = format!("{case:?}");
                let res = power_law_relation(&state, case);
                record(res, &id, n, l, &mut reports, &mut errors);
            }
        }
        if cfg.n_dim == 3 && cfg.relations.iter().any(|r| r == "chains") {
            for res in chain_reports(&state, &state.potential.kind.clone()) {
                record(res, "chain", n, l, &mut reports, &mut errors);
            }
        }
    }

    reports.sort_by(|a, b| {
        (a.relation_id.as_str(), a.n, a.l1).cmp(&(b.relation_id.as_str(), b.n, b.l1))
    });
    write_relation_outputs(cfg, out, &reports, &errors)?;

    let worst = reports
        .iter()
        .max_by(|a, b| a.relative_residual.total_cmp(&b.relative_residual));
    let mut code = 0;
    if let Some(w) = worst {
        println!(
            "{} relations checked; worst |relative residual| = {:.3e} ({} at n={}, l={})",
            reports.len(),
            w.relative_residual,
            w.relation_id,
            w.n,
            w.l1
        );
        if w.relative_residual > cfg.tol {
            println!("FAIL: tolerance {} exceeded by {}", cfg.tol, w.relation_id);
            code = 1;
        }
    }
    if !errors.is_empty() {
        println!("{} relation(s) could not be evaluated:", errors.len());
        for e in &errors {
            println!("  {} : {}", e["relation_id"], e["error"]);
        }
        code = 1;
    }
    Ok(code)
}

/// Verify the N-dimensional relation on the configured states.
pub fn cmd_ndim(cfg: &RunConfig, out: &Path) -> std::io::Result<i32> {
    let mut reports = Vec::new();
    let mut errors = Vec::new();
    for ((n, l), solved) in solve_states(cfg) {
        let state = match solved {
            Ok(s) => s,
            Err(e) => {
                errors.push(json!({"relation_id": "solve", "n": n, "l": l, "error": e.to_string()}));
                continue;
            }
        };
        for j in probe_set(cfg, l) {
            match virial::relations::ndim_residual(&state, &ProbeFunction::power(j)) {
                Ok(rep) => reports.push(rep),
                Err(e) => errors.push(json!({
                    "relation_id": format!("ndim f=rho^{j}"),
                    "n": n, "l": l, "error": e.to_string(),
                })),
            }
        }
    }
    reports.sort_by(|a, b| {
        (a.relation_id.as_str(), a.n, a.l1).cmp(&(b.relation_id.as_str(), b.n, b.l1))
    });
    write_relation_outputs(cfg, out, &reports, &errors)?;
    let worst_over = reports.iter().any(|r| r.relative_residual > cfg.tol);
    Ok(if worst_over || !errors.is_empty() { 1 } else { 0 })
}

/// Classical orbit summary, time averages, virial residuals, and the
/// quantum-classical gap when states are configured.
pub fn cmd_classical(cfg: &RunConfig, out: &Path) -> std::io::Result<i32> {
    let reports_dir = out.join("reports");
    fs::create_dir_all(&reports_dir)?;
    let mut body = json!({"meta": report_meta(cfg)});
    let mut code = 0;

    let potential = match cfg.potential() {
        Ok(p) => p,
        Err(e) => {
            body["error"] = json!(e.to_string());
            fs::write(
                reports_dir.join("classical.json"),
                serde_json::to_string_pretty(&body)?,
            )?;
            return Ok(1);
        }
    };

    if let Some((e, l2)) = cfg.orbit {
        match ClassicalOrbit::new(&potential, e, l2) {
            Ok(orbit) => {
                let mut entry = orbit.summary_json();
                let t_avg = virial::classical::period_average(&orbit, |r| {
                    orbit.radial_kinetic(r)
                        + if l2 > 0.0 { l2 / (2.0 * r * r) } else { 0.0 }
                });
                let v_avg = virial::classical::period_average(&orbit, |r| potential.value(r));
                match (t_avg, v_avg) {
                    (Ok(t), Ok(v)) => {
                        entry["averages"] = json!({"T": t, "V": v});
                    }
                    (Err(err), _) | (_, Err(err)) => {
                        entry["error"] = json!(err.to_string());
                        code = 1;
                    }
                }
                let mut residuals = Vec::new();
                for &f in &cfg.classical_probes {
                    match classical_virial_residual(&orbit, &ProbeFunction::power(f as f64)) {
                        Ok(rep) => {
                            if rep.relative_residual > cfg.tol {
                                code = 1;
                            }
                            residuals.push(serde_json::to_value(&rep).unwrap());
                        }
                        Err(err) => {
                            residuals.push(json!({"f": f, "error": err.to_string()}));
                            code = 1;
                        }
                    }
                }
                entry["virial_residuals"] = json!(residuals);
                body["orbit"] = entry;
            }
            Err(err) => {
                body["orbit"] = json!({"E": e, "l2": l2, "error": err.to_string()});
                code = 1;
            }
        }
    }

    if !cfg.states.is_empty() {
        let mut gaps = Vec::new();
        for ((n, l), solved) in solve_states(cfg) {
            let row = match solved.and_then(|state| {
                let ll = (l * (l + 1)) as f64;
                let orbit = ClassicalOrbit::new(&potential, state.eps, ll)?;
                let probe = ProbeFunction::power(cfg.gap_probe as f64);
                let gap = quantum_classical_gap(&state, &orbit, &probe)?;
                Ok((state.eps, gap))
            }) {
                Ok((eps, gap)) => {
                    if gap.identity_residual.abs() > cfg.tol {
                        code = 1;
                    }
                    json!({
                        "n": n, "l": l, "eps": eps, "f": format!("rho^{}", cfg.gap_probe),
                        "gap": serde_json::to_value(&gap).unwrap(),
                    })
                }
                Err(err) => {
                    code = 1;
                    json!({"n": n, "l": l, "error": err.to_string()})
                }
            };
            gaps.push(row);
        }
        body["gap_analysis"] = json!(gaps);
    }

    fs::write(
        reports_dir.join("classical.json"),
        serde_json::to_string_pretty(&body)?,
    )?;
    Ok(code)
}
