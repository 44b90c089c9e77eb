use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::json;

use thickcurve::curvature::{curvature_profile, default_window, verify_lemma1_with};
use thickcurve::document::{self, write_csv, to_json_pretty, Report, TOOL_VERSION};
use thickcurve::extremal::{
    check_theorem2_with, check_theorem3_with, classify_points, decompose_structure, reconstruct, relax_ropelength,
    KappaClass, RelaxOptions,
};
use thickcurve::fixtures::generate_fixture;
use thickcurve::planner::{
    discrete_shortest_oracle, plan, verify_prop2_containment, verify_theorem1_structure, OracleMode, OracleOptions,
    PlanOptions, SeedConfig,
};
use thickcurve::thickness::{analyze, semicontinuity_probe, CriticalOptions, ThicknessOptions};
use thickcurve::{BoundaryData, Curve, CurveDocument};

use crate::{BoundaryArgs, Cli, Command};

pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    fn from_pass(pass: bool) -> Self {
        if pass {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

pub fn parse_key_value(s: &str) -> std::result::Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got `{s}`"))?;
    let v: f64 = v.trim().parse().map_err(|e| format!("parameter `{k}`: {e}"))?;
    Ok((k.trim().to_string(), v))
}

fn parse_vector(name: &str, s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .with_context(|| format!("--{name}: expected comma-separated numbers, got `{s}`"))
}

fn boundary(args: &BoundaryArgs) -> Result<BoundaryData> {
    Ok(BoundaryData::new(
        parse_vector("p", &args.p)?,
        parse_vector("q", &args.q)?,
        parse_vector("v", &args.v)?,
        parse_vector("w", &args.w)?,
        args.lambda,
    )?)
}

fn boundary_inputs(args: &BoundaryArgs) -> BTreeMap<String, String> {
    BTreeMap::from([
        ("p".to_string(), args.p.clone()),
        ("q".to_string(), args.q.clone()),
        ("v".to_string(), args.v.clone()),
        ("w".to_string(), args.w.clone()),
        ("lambda".to_string(), args.lambda.to_string()),
    ])
}

fn read_curve(cli: &Cli, path: &Path) -> Result<Curve> {
    let doc = CurveDocument::read(path, !cli.open).with_context(|| format!("reading {}", path.display()))?;
    doc.to_curve().with_context(|| format!("in {}", path.display()))
}

fn curve_inputs(path: &Path) -> BTreeMap<String, String> {
    BTreeMap::from([("curve".to_string(), path.display().to_string())])
}

fn adaptive_tol(tol: Option<f64>, curve: &Curve) -> f64 {
    tol.unwrap_or(10.0 / curve.len() as f64)
}

fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn write_curve(path: &Path, curve: &Curve) -> Result<()> {
    write_text(Some(path), &CurveDocument::from_curve(curve).to_json_string())
}

fn csv_file(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<()> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    write_csv(BufWriter::new(f), header, rows)?;
    Ok(())
}

struct Emitter<'a> {
    cli: &'a Cli,
    command: &'a str,
    inputs: BTreeMap<String, String>,
    tolerances: BTreeMap<String, f64>,
}

impl Emitter<'_> {
    fn tol(mut self, name: &str, value: f64) -> Self {
        self.tolerances.insert(name.to_string(), value);
        self
    }

    fn emit<R: Serialize, W: Serialize>(self, results: &R, witnesses: &W) -> Result<()> {
        let report = Report {
            tool_version: TOOL_VERSION,
            command: self.command,
            inputs: self.inputs,
            seed: self.cli.seed,
            results,
            witnesses,
            tolerances: self.tolerances,
        };
        write_text(self.cli.out.as_deref(), &to_json_pretty(&report))
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    if let Some(n) = cli.threads {
        if n == 0 {
            bail!("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let emitter = |command: &'static str, inputs: BTreeMap<String, String>| Emitter {
        cli,
        command,
        inputs,
        tolerances: BTreeMap::new(),
    };
    match &cli.command {
        Command::Thickness { curve, csv } => {
            let c = read_curve(cli, curve)?;
            let a = analyze(&c, &ThicknessOptions::default())?;
            if let Some(p) = csv {
                csv_file(p, &["sample", "s", "kappa", "f_g"], a.per_sample_rows(&c))?;
            }
            emitter("thickness", curve_inputs(curve))
                .tol("agreement", a.report.agreement_tol)
                .emit(&a.report, &a.report.witnesses)?;
            Ok(Outcome::Pass)
        }
        Command::Curvature {
            curve,
            window,
            lambda,
            tol,
            csv,
        } => {
            let c = read_curve(cli, curve)?;
            let h = window.unwrap_or_else(|| default_window(&c));
            let prof = curvature_profile(&c, h)?;
            if let Some(p) = csv {
                let rows = (0..c.len()).map(|i| vec![i as f64, c.cum_arclength()[i], prof.kappa[i]]);
                csv_file(p, &["sample", "s", "kappa"], rows)?;
            }
            let tol = adaptive_tol(*tol, &c);
            let bound = lambda.map(|l| verify_lemma1_with(&c, &prof, l, tol));
            let results = json!({
                "samples": c.len(),
                "length": c.length(),
                "window": prof.window,
                "sup_kappa": prof.sup_kappa,
                "f_k": prof.f_k,
                "bound": bound,
            });
            let witnesses = json!({
                "sup_kappa_sample": prof.argmax,
                "pairwise_alpha_pair": bound.as_ref().and_then(|b| b.pairwise_alpha_pair),
            });
            emitter("curvature", curve_inputs(curve)).tol("bound", tol).emit(&results, &witnesses)?;
            Ok(Outcome::from_pass(bound.is_none_or(|b| b.all_pass())))
        }
        Command::Mdc {
            curve,
            grid_step,
            exclusion,
            csv,
        } => {
            let c = read_curve(cli, curve)?;
            let opts = ThicknessOptions {
                critical: CriticalOptions {
                    grid_step: *grid_step,
                    exclusion: *exclusion,
                    ..CriticalOptions::default()
                },
                ..ThicknessOptions::default()
            };
            let a = analyze(&c, &opts)?;
            if let Some(p) = csv {
                let rows = a
                    .mdc
                    .pairs
                    .iter()
                    .map(|q| vec![q.s, q.t, q.chord, q.residual_s, q.residual_t]);
                csv_file(p, &["s", "t", "chord", "residual_s", "residual_t"], rows)?;
            }
            #[derive(Serialize)]
            struct MdcResults {
                #[serde(serialize_with = "document::ser_f64")]
                mdc: f64,
                pairs: usize,
                exclusion: Option<f64>,
            }
            let results = MdcResults {
                mdc: a.mdc.value,
                pairs: a.mdc.pairs.len(),
                exclusion: *exclusion,
            };
            emitter("mdc", curve_inputs(curve))
                .tol("orthogonality", opts.critical.tol)
                .emit(&results, &a.mdc.witness)?;
            Ok(Outcome::Pass)
        }
        Command::Classify { curve, tol, csv } => {
            let c = read_curve(cli, curve)?;
            let tol = adaptive_tol(*tol, &c);
            let a = analyze(&c, &ThicknessOptions::default())?;
            let pc = classify_points(&c, &a, tol);
            if let Some(p) = csv {
                let rows = (0..c.len()).map(|i| {
                    let class = match pc.labels[i] {
                        KappaClass::Zero => 0.0,
                        KappaClass::Maximal => 1.0,
                        KappaClass::Between => 2.0,
                    };
                    vec![i as f64, a.profile.kappa[i], class, if pc.critical[i] { 1.0 } else { 0.0 }]
                });
                csv_file(p, &["sample", "kappa", "class", "critical"], rows)?;
            }
            let results = json!({
                "samples": c.len(),
                "zero": pc.count(KappaClass::Zero),
                "maximal": pc.count(KappaClass::Maximal),
                "between": pc.count(KappaClass::Between),
                "critical": pc.critical_count(),
                "classes": pc,
            });
            emitter("classify", curve_inputs(curve))
                .tol("classification", tol)
                .emit(&results, &a.mdc.witness)?;
            Ok(Outcome::Pass)
        }
        Command::Decompose {
            curve,
            tol,
            reconstruct: rec,
        } => {
            let c = read_curve(cli, curve)?;
            let tol = adaptive_tol(*tol, &c);
            let a = analyze(&c, &ThicknessOptions::default())?;
            let s = decompose_structure(&c, &a, tol);
            if let Some(p) = rec {
                write_curve(p, &reconstruct(&c, &s)?)?;
            }
            emitter("decompose", curve_inputs(curve))
                .tol("structure", tol)
                .emit(&s, &a.mdc.witness)?;
            Ok(Outcome::Pass)
        }
        Command::CheckThm2 { curve, tol } => {
            let c = read_curve(cli, curve)?;
            let tol = adaptive_tol(*tol, &c);
            let a = analyze(&c, &ThicknessOptions::default())?;
            let v = check_theorem2_with(&c, &a, tol);
            let failing: Vec<usize> = v.segments.iter().filter(|s| !s.pass).map(|s| s.run).collect();
            emitter("check-thm2", curve_inputs(curve))
                .tol("check", tol)
                .tol("structure", v.structure_tol)
                .emit(&v, &json!({ "mdc_pair": a.mdc.witness, "failing_segment_runs": failing }))?;
            Ok(Outcome::from_pass(v.pass))
        }
        Command::CheckThm3 { curve, tol } => {
            let c = read_curve(cli, curve)?;
            let tol = adaptive_tol(*tol, &c);
            let a = analyze(&c, &ThicknessOptions::default())?;
            let v = check_theorem3_with(&a, tol);
            emitter("check-thm3", curve_inputs(curve))
                .tol("check", tol)
                .emit(&v, &json!({ "mdc_pair": a.mdc.witness, "r_o_pair": a.ball.witness }))?;
            Ok(Outcome::from_pass(v.pass))
        }
        Command::ClcPlan {
            boundary: args,
            oracle,
            curve_out,
            samples,
        } => {
            let b = boundary(args)?;
            let opts = PlanOptions {
                seeds: SeedConfig {
                    seed: cli.seed,
                    ..SeedConfig::default()
                },
                oracle: oracle.then_some(OracleOptions {
                    seed: cli.seed,
                    ..OracleOptions::default()
                }),
            };
            let p = plan(&b, &opts)?;
            if let (Some(path), Some(best)) = (curve_out, p.best()) {
                write_curve(path, &best.sample(*samples)?)?;
            }
            let checks: Vec<_> = p.candidates.iter().map(|c| c.check(&b)).collect();
            let results = json!({
                "regime": p.regime,
                "best_length": p.best().map(|c| c.length),
                "best_word": p.best().map(|c| c.word.clone()),
                "candidates": p.candidates,
                "oracle_length": p.oracle.as_ref().map(|o| o.length),
                "routed_to_oracle": p.routed_to_oracle,
            });
            emitter("clc-plan", boundary_inputs(args))
                .emit(&results, &json!({ "candidate_checks": checks }))?;
            Ok(Outcome::Pass)
        }
        Command::ClcVerify { curve, lambda, tol } => {
            let c = read_curve(cli, curve)?;
            let structure = verify_theorem1_structure(&c, *lambda, *tol);
            let containment = verify_prop2_containment(&c, *lambda, *tol).ok();
            let pass = structure.pass && containment.as_ref().is_none_or(|r| r.pass());
            let witnesses = json!({ "containment_worst_pair": containment.as_ref().and_then(|r| r.worst_pair) });
            let results = json!({ "structure": structure, "containment": containment, "pass": pass });
            emitter("clc-verify", curve_inputs(curve))
                .tol("structure", *tol)
                .emit(&results, &witnesses)?;
            Ok(Outcome::from_pass(pass))
        }
        Command::Oracle {
            boundary: args,
            segments,
            restarts,
            iters,
            start_only,
            curve_out,
        } => {
            let b = boundary(args)?;
            let opts = OracleOptions {
                segments: *segments,
                restarts: *restarts,
                seed: cli.seed,
                iters: *iters,
                mode: if *start_only { OracleMode::StartOnly } else { OracleMode::Both },
            };
            let o = discrete_shortest_oracle(&b, &opts)?;
            if let Some(path) = curve_out {
                write_curve(path, &o.curve()?)?;
            }
            let witnesses = json!({ "saturated_fraction": o.saturated_fraction(0.05) });
            emitter("oracle", boundary_inputs(args)).emit(&o, &witnesses)?;
            Ok(Outcome::Pass)
        }
        Command::Relax {
            curve,
            cap,
            steps,
            r_o_tol,
            min_r_o,
            trace,
            curve_out,
        } => {
            let c = read_curve(cli, curve)?;
            let mut opts = RelaxOptions::new(*cap, *steps, cli.seed);
            opts.r_o_tol = *r_o_tol;
            opts.min_r_o = *min_r_o;
            let out = relax_ropelength(&c, &opts)?;
            if let Some(p) = trace {
                let rows = out.trace.iter().map(|r| {
                    vec![r.step as f64, r.length, r.r_o, r.ropelength, if r.accepted { 1.0 } else { 0.0 }]
                });
                csv_file(p, &["step", "length", "r_o", "ropelength", "accepted"], rows)?;
            }
            if let Some(p) = curve_out {
                write_curve(p, &out.curve)?;
            }
            let last = out.trace.last().copied();
            let results = json!({
                "steps": steps,
                "accepted": out.accepted,
                "initial_ropelength": out.initial_ropelength(),
                "final_ropelength": out.final_ropelength(),
                "final": last,
            });
            let mut inputs = curve_inputs(curve);
            inputs.insert("cap".into(), cap.to_string());
            emitter("relax", inputs)
                .tol("r_o", *r_o_tol)
                .tol("cap_slack", 10.0 / c.len() as f64)
                .emit(&results, &json!({}))?;
            Ok(Outcome::Pass)
        }
        Command::Generate { kind, params } => {
            let params: BTreeMap<String, f64> = params.iter().cloned().collect();
            let doc = generate_fixture(kind, &params)?;
            write_text(cli.out.as_deref(), &doc.to_json_string())?;
            Ok(Outcome::Pass)
        }
        Command::Semicontinuity {
            curves,
            tail_start,
            tol,
        } => {
            let cs = curves.iter().map(|p| read_curve(cli, p)).collect::<Result<Vec<_>>>()?;
            let r = semicontinuity_probe(&cs, *tail_start, *tol)?;
            let inputs = curves
                .iter()
                .enumerate()
                .map(|(i, p)| (format!("curve{i:03}"), p.display().to_string()))
                .collect();
            emitter("semicontinuity", inputs).tol("bound", *tol).emit(&r, &json!({}))?;
            Ok(Outcome::from_pass(r.r_o_bound_holds && r.mdc_bound_holds))
        }
    }
}
