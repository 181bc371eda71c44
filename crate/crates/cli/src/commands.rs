use log::{debug, info, warn};
use netequil::demos;
use netequil::keyplayer::{impact_measure, katz_centrality, Centrality, KeyPlayerError};
use netequil::matgraph::MatrixError;
use netequil::oracle::{enumerate_equilibria, multiplicity_rate, OracleError, ShockSampler};
use netequil::solver::{
    classify, multiplicity_probe, solve_algorithm1, solve_auto, solve_banach, solve_tarski,
    uniqueness_certificate, Direction, ProbeResult, SolveError,
};
use netequil::{Network, SolveReport};
use serde_json::json;

use crate::document::NetworkDocument;
use crate::output::{num, opt_num, vector_text, Report};
use crate::{CliError, Command, CsvVector, MethodArg, SamplerArg, SolveArgs};

fn matrix_err(e: &MatrixError) -> CliError {
    match e {
        MatrixError::Singular { .. } | MatrixError::NoConvergence(_) => CliError::Solver(e.to_string()),
        _ => CliError::Precondition(e.to_string()),
    }
}

fn solve_err(e: SolveError) -> CliError {
    match &e {
        SolveError::NotContracting(_)
        | SolveError::MaxIterations(_)
        | SolveError::NoEquilibriumFound { .. }
        | SolveError::ResidualTooLarge(_)
        | SolveError::UnhandledSingularity => CliError::Solver(e.to_string()),
        SolveError::Matrix(m) => matrix_err(m),
        SolveError::NotMonotone | SolveError::NoLattice | SolveError::PreconditionViolated(_) => {
            CliError::Precondition(e.to_string())
        }
    }
}

fn oracle_err(e: OracleError) -> CliError {
    CliError::Precondition(e.to_string())
}

fn keyplayer_err(e: KeyPlayerError) -> CliError {
    match &e {
        KeyPlayerError::NotConvergent(_) | KeyPlayerError::Singular => CliError::Solver(e.to_string()),
        KeyPlayerError::NotStable(_) => CliError::Precondition(e.to_string()),
        KeyPlayerError::Matrix(m) => matrix_err(m),
    }
}

fn load(file: &std::path::Path) -> Result<Network, CliError> {
    let net = NetworkDocument::load(file)?.network()?;
    info!("loaded {} with {} agents", file.display(), net.n());
    Ok(net)
}

pub fn solve(net: &Network, args: &SolveArgs) -> Result<SolveReport, CliError> {
    let x0 = match &args.x0 {
        Some(x0) if x0.0.len() != net.n() => {
            return Err(CliError::Usage(format!("--x0 needs {} values", net.n())))
        }
        Some(x0) => x0.0.clone(),
        None => vec![0.0; net.n()],
    };
    let (tol, kmax) = (args.tol, args.max_iter);
    let report = match args.method {
        MethodArg::Banach => solve_banach(net, &x0, tol, kmax),
        MethodArg::TarskiAbove => solve_tarski(net, Direction::Above, tol, kmax),
        MethodArg::TarskiBelow => solve_tarski(net, Direction::Below, tol, kmax),
        MethodArg::Algorithm1 => solve_algorithm1(net, tol),
        MethodArg::Auto => {
            debug!("auto: contracting = {}", classify(net).contracting);
            solve_auto(net, Some(&x0), tol, kmax)
        }
    };
    let report = report.map_err(solve_err)?;
    if report.candidate {
        warn!("result is only a candidate greatest equilibrium");
    }
    Ok(report)
}

fn solve_report(r: &SolveReport) -> Report {
    let mut text = format!(
        "method: {}\niterations: {}\nresidual: {}\n",
        serde_json::to_value(r.method).unwrap().as_str().unwrap(),
        r.iterations,
        num(r.residual)
    );
    if let Some(g) = r.outer_guesses {
        text.push_str(&format!("outer guesses: {g}\n"));
    }
    if let Some(b) = r.error_bound {
        text.push_str(&format!("error bound: {}\n", num(b)));
    }
    text.push_str(&format!("certificate: {}\n", certificate_name(&r.certificate)));
    if r.candidate {
        text.push_str("candidate: true\n");
    }
    text.push_str("equilibrium:\n");
    text.push_str(&vector_text("x", &r.x));
    Report {
        json: serde_json::to_value(r).unwrap(),
        header: vec!["agent", "x"],
        rows: r.x.iter().enumerate().map(|(i, x)| vec![i.to_string(), num(*x)]).collect(),
        text,
    }
}

fn certificate_name(c: &netequil::Certificate) -> String {
    serde_json::to_value(c).unwrap()["kind"].as_str().unwrap().to_string()
}

fn classify_report(net: &Network) -> Report {
    let c = classify(net);
    let cert = uniqueness_certificate(net);
    let fields = [
        ("contracting", c.contracting.to_string()),
        ("modulus", opt_num(c.modulus)),
        ("noncontracting", c.noncontracting.to_string()),
        ("spectral_radius", opt_num(c.spectral_radius)),
        ("certificate", certificate_name(&cert)),
    ];
    let text = fields.iter().map(|(k, v)| format!("{k}: {v}\n")).collect();
    Report {
        json: json!({ "classification": c, "certificate": cert }),
        header: vec!["field", "value"],
        rows: fields.iter().map(|(k, v)| vec![k.to_string(), v.clone()]).collect(),
        text,
    }
}

fn probe_report(x: &[f64], probe: &ProbeResult) -> Report {
    let mut text = String::from("equilibrium:\n");
    text.push_str(&vector_text("x", x));
    let rows = match probe {
        ProbeResult::Unique => {
            text.push_str("probe: unique\n");
            x.iter().enumerate().map(|(i, v)| vec![i.to_string(), num(*v), String::new(), String::new()]).collect()
        }
        ProbeResult::Multiple(c) => {
            let (a, b) = c.endpoints(x);
            text.push_str(&format!(
                "probe: multiple\nblock: {:?}\nt range: [{}, {}]\naffected: {:?}\nwitness residual: {}\n",
                c.scc,
                num(c.t_range.0),
                num(c.t_range.1),
                c.affected,
                num(c.witness_residual)
            ));
            text.push_str("direction:\n");
            text.push_str(&vector_text("e", &c.direction));
            text.push_str("segment ends:\n");
            text.push_str(&vector_text("start", &a));
            text.push_str(&vector_text("end", &b));
            (0..x.len())
                .map(|i| vec![i.to_string(), num(x[i]), num(c.direction[i]), num(c.witness[i])])
                .collect()
        }
    };
    Report {
        json: json!({ "x": x, "probe": probe }),
        header: vec!["agent", "x", "direction", "witness"],
        rows,
        text,
    }
}

fn enumerate_report(set: &netequil::oracle::EquilibriumSet) -> Report {
    let mut rows = Vec::new();
    let mut text = format!(
        "{} isolated equilibria, {} families\n",
        set.points.len(),
        set.families.len()
    );
    let push = |rows: &mut Vec<Vec<String>>, kind: &str, k: usize, v: &[f64]| {
        for (i, x) in v.iter().enumerate() {
            rows.push(vec![kind.to_string(), k.to_string(), i.to_string(), num(*x)]);
        }
    };
    for (k, p) in set.points.iter().enumerate() {
        push(&mut rows, "point", k, p);
        text.push_str(&format!("point {k}:\n{}", vector_text("x", p)));
    }
    for (k, f) in set.families.iter().enumerate() {
        push(&mut rows, "family_base", k, &f.base);
        text.push_str(&format!("family {k}:\n{}", vector_text("base", &f.base)));
        for d in &f.basis {
            push(&mut rows, "family_direction", k, d);
            text.push_str(&vector_text("direction", d));
        }
        if let Some((a, b)) = f.endpoints() {
            push(&mut rows, "family_start", k, &a);
            push(&mut rows, "family_end", k, &b);
            text.push_str(&vector_text("start", &a));
            text.push_str(&vector_text("end", &b));
        }
    }
    Report {
        json: serde_json::to_value(set).unwrap(),
        header: vec!["kind", "index", "agent", "value"],
        rows,
        text,
    }
}

fn keyplayer_report(net: &Network, x: &[f64], alpha: Option<f64>) -> Result<Report, CliError> {
    let impact = impact_measure(net, x).map_err(keyplayer_err)?;
    let katz = match alpha {
        Some(a) => Some((
            katz_centrality(net.w(), a, Centrality::Hub).map_err(keyplayer_err)?,
            katz_centrality(net.w(), a, Centrality::Authority).map_err(keyplayer_err)?,
        )),
        None => None,
    };
    let mut text = format!(
        "key player: {}\nstability certified: {}\n",
        impact.key_player, impact.stability_certified
    );
    if !impact.at_breakpoint.is_empty() {
        text.push_str(&format!("at breakpoint: {:?}\n", impact.at_breakpoint));
    }
    text.push_str(&vector_text("x", x));
    text.push_str(&vector_text("sigma", &impact.sigma));
    let rows = (0..x.len())
        .map(|i| {
            let (h, a) = katz
                .as_ref()
                .map(|(h, a)| (num(h[i]), num(a[i])))
                .unwrap_or_default();
            vec![i.to_string(), num(x[i]), num(impact.sigma[i]), num(impact.derivatives[i]), h, a]
        })
        .collect();
    let mut json = json!({ "x": x, "impact": impact });
    if let Some((h, a)) = &katz {
        text.push_str(&vector_text("hub", h));
        text.push_str(&vector_text("authority", a));
        json["katz"] = json!({ "alpha": alpha, "hub": h, "authority": a });
    }
    Ok(Report {
        json,
        header: vec!["agent", "x", "sigma", "derivative", "hub", "authority"],
        rows,
        text,
    })
}

fn rate(net: &Network, sampler: SamplerArg, trials: usize, seed: u64, support: &[CsvVector]) -> Result<Report, CliError> {
    let n = net.n();
    let support: Vec<Vec<f64>> = support.iter().map(|v| v.0.clone()).collect();
    if support.iter().any(|p| p.len() != n) {
        return Err(CliError::Usage(format!("--support vectors need {n} values")));
    }
    let sampler = match sampler {
        SamplerArg::Continuous => match support.as_slice() {
            [] => ShockSampler::ContinuousUniform {
                lower: net.shock().iter().map(|e| e - 1.0).collect(),
                upper: net.shock().iter().map(|e| e + 1.0).collect(),
            },
            [lo, hi] => ShockSampler::ContinuousUniform { lower: lo.clone(), upper: hi.clone() },
            _ => return Err(CliError::Usage("continuous sampling takes zero or two --support vectors".into())),
        },
        SamplerArg::Discrete if support.is_empty() => {
            return Err(CliError::Usage("discrete sampling needs at least one --support vector".into()))
        }
        SamplerArg::Discrete => ShockSampler::DiscreteUniform { points: support },
    };
    let r = multiplicity_rate(net, &sampler, trials, seed).map_err(oracle_err)?;
    let fields = [
        ("rate", num(r)),
        ("trials", trials.to_string()),
        ("seed", seed.to_string()),
    ];
    Ok(Report {
        json: json!({ "rate": r, "trials": trials, "seed": seed, "sampler": sampler }),
        header: vec!["field", "value"],
        rows: fields.iter().map(|(k, v)| vec![k.to_string(), v.clone()]).collect(),
        text: fields.iter().map(|(k, v)| format!("{k}: {v}\n")).collect(),
    })
}

fn demo(name: &str) -> Result<Report, CliError> {
    let d = demos::demo(name).ok_or_else(|| CliError::Usage(format!("unknown demo {name}")))?;
    let args = SolveArgs { method: MethodArg::Auto, tol: 1e-12, max_iter: 10_000_000, x0: None };
    let r = solve(&d.network, &args)?;
    let mut report = solve_report(&r);
    let mut json = json!({ "demo": name, "report": report.json });
    report.text = format!("demo: {name}\n{}", report.text);
    if let Some(expected) = &d.expected {
        let err = r.x.iter().zip(expected).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        json["expected"] = json!(expected);
        json["max_deviation"] = json!(err);
        report.text.push_str(&format!("max deviation from reference: {}\n", num(err)));
        report.header.push("expected");
        for (row, e) in report.rows.iter_mut().zip(expected) {
            row.push(num(*e));
        }
    } else {
        report.header.push("expected");
        report.rows.iter_mut().for_each(|row| row.push(String::new()));
    }
    if d.network.is_bounded_identity() {
        if let Ok(p) = multiplicity_probe(&d.network, &r.x, 1e-9) {
            report.text.push_str(match p {
                ProbeResult::Unique => "probe: unique\n",
                ProbeResult::Multiple(_) => "probe: multiple\n",
            });
            json["probe"] = json!(p);
        }
    }
    let set = enumerate_equilibria(&d.network, 1e-9).map_err(oracle_err)?;
    report.text.push_str(&format!(
        "all equilibria: {} isolated, {} families\n",
        set.points.len(),
        set.families.len()
    ));
    for p in &set.points {
        report.text.push_str(&format!("  {:?}\n", p));
    }
    for f in &set.families {
        if let Some((a, b)) = f.endpoints() {
            report.text.push_str(&format!("  segment {:?} to {:?}\n", a, b));
        }
    }
    json["equilibria"] = json!(set);
    report.json = json;
    Ok(report)
}

pub fn execute(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Classify { file } => Ok(classify_report(&load(file)?)),
        Command::Solve { file, args } => Ok(solve_report(&solve(&load(file)?, args)?)),
        Command::Probe { file, tol } => {
            let net = load(file)?;
            let args = SolveArgs { method: MethodArg::Auto, tol: tol * 1e-3, max_iter: 10_000_000, x0: None };
            let x = solve(&net, &args)?.x;
            let p = multiplicity_probe(&net, &x, *tol).map_err(solve_err)?;
            Ok(probe_report(&x, &p))
        }
        Command::Enumerate { file, tol } => {
            let set = enumerate_equilibria(&load(file)?, *tol).map_err(oracle_err)?;
            Ok(enumerate_report(&set))
        }
        Command::Keyplayer { file, alpha } => {
            let net = load(file)?;
            let args = SolveArgs { method: MethodArg::Auto, tol: 1e-12, max_iter: 10_000_000, x0: None };
            let x = solve(&net, &args)?.x;
            keyplayer_report(&net, &x, *alpha)
        }
        Command::Rate { file, sampler, trials, seed, support } => {
            rate(&load(file)?, *sampler, *trials, *seed, support)
        }
        Command::Demo { name } => demo(name),
        Command::Export { name } => {
            let d = demos::demo(name).ok_or_else(|| CliError::Usage(format!("unknown demo {name}")))?;
            let doc = NetworkDocument::from_network(&d.network);
            let text = doc.to_json() + "\n";
            Ok(Report {
                json: serde_json::to_value(&doc).unwrap(),
                header: vec!["document"],
                rows: vec![vec![text.clone()]],
                text,
            })
        }
    }
}
