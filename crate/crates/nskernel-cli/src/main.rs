//! Command-line front end: build and persist kernel models, evaluate
//! kernels, metrics and curvatures, run extremal reports and the numerical
//! experiments, and emit CSV/JSON artifacts.

mod config;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use nalgebra::DMatrix;

use config::{to_point, MapDoc, RunConfig};
use nskernel::error::Error;
use nskernel::experiments::{
    asymptotics_sweep, completeness_probe, evaluator_for, ramadanov_run, EvalBackend,
};
use nskernel::extremal::{extremal_identity_report, minimum_integral, MinIntegralKind};
use nskernel::geometry::{pinchuk_normalize, scaling_frame, Biholo};
use nskernel::kernel::{build_model_with, kernel_eval, selberg_constant};
use nskernel::metric::{
    metric_tensor, ricci_from_data, sectional_from_data, KernelEvaluator, SeriesEvaluator,
};
use nskernel::{CPoint, KernelModel, Result, C64};
use output::{config_hash, fmt_f64, ArtifactWriter, Certificate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Command {
    Build,
    Kernel,
    Metric,
    Curvature,
    Extremal,
    Transform,
    Pinchuk,
    Asymptotics,
    Ramadanov,
    Completeness,
    Selberg,
}

#[derive(Parser, Debug)]
#[command(name = "nskernel", about = "Weighted kernels and their invariant metrics on model domains")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory for artifacts.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Force single-threaded execution.
    #[arg(long, default_value_t = false)]
    serial: bool,
    /// Model file to load when present, and to write after a build.
    #[arg(long)]
    model: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum LogLevel {
    Quiet,
    Info,
    Debug,
}

fn log_level() -> LogLevel {
    match std::env::var("NSKERNEL_LOG").as_deref() {
        Ok("quiet") => LogLevel::Quiet,
        Ok("debug") => LogLevel::Debug,
        _ => LogLevel::Info,
    }
}

macro_rules! info {
    ($($t:tt)*) => {
        if log_level() >= LogLevel::Info { eprintln!($($t)*); }
    };
}

macro_rules! debug {
    ($($t:tt)*) => {
        if log_level() >= LogLevel::Debug { eprintln!($($t)*); }
    };
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let threads = if cli.serial { 1 } else { cli.threads };
    if threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }

    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

/// Exit status 1 for contract/schema violations, 2 for numerical failures.
fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Domain(_)
        | Error::OutsideDomain(_)
        | Error::Ambiguity(_)
        | Error::Unsupported(_)
        | Error::Contract(_)
        | Error::Containment(_)
        | Error::Format(_)
        | Error::Io(_) => 1,
        Error::Quadrature { .. }
        | Error::Degeneracy(_)
        | Error::Infeasible(_)
        | Error::CayleyPole
        | Error::Uncertified(_)
        | Error::NotStronglyPseudoconvex(_) => 2,
    }
}

fn load_config(path: &Path) -> Result<(RunConfig, String)> {
    let text = std::fs::read_to_string(path)?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        Error::Format(format!("config schema error at `{}`: {}", e.path(), e.inner()))
    })?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::Format(format!("config parse error: {e}")))?;
    Ok((cfg, config_hash(&value)))
}

/// Load the model from `--model` when the file exists, otherwise build it
/// from the config (and persist it when `--model` was given).
fn resolve_model(cli: &Cli, cfg: &RunConfig) -> Result<KernelModel> {
    if let Some(path) = &cli.model {
        if path.exists() {
            debug!("loading model from {}", path.display());
            return KernelModel::load_from(path);
        }
    }
    info!(
        "building model: domain={:?} d={} N={}",
        cfg.domain, cfg.d, cfg.truncation
    );
    let model = build_model_with(&cfg.domain, cfg.d, cfg.truncation, cfg.tol, cfg.r_eval, None)?;
    if let Some(path) = &cli.model {
        model.save_to(path)?;
        info!("model written to {}", path.display());
    }
    Ok(model)
}

fn certificate_of(model: &KernelModel) -> Certificate {
    Certificate {
        truncation: model.truncation(),
        r_eval: model.r_eval(),
        tail_bound: model.tail_bound(),
    }
}

fn point_cols(z: &[C64]) -> String {
    z.iter()
        .flat_map(|c| [fmt_f64(c.re), fmt_f64(c.im)])
        .collect::<Vec<_>>()
        .join(",")
}

fn point_header(n: usize) -> String {
    (0..n)
        .flat_map(|i| [format!("z{}_re", i + 1), format!("z{}_im", i + 1)])
        .collect::<Vec<_>>()
        .join(",")
}

fn missing(block: &str) -> Error {
    Error::Contract(format!("config is missing the `{block}` block"))
}

fn run(cli: &Cli) -> Result<()> {
    let (cfg, hash) = load_config(&cli.config)?;
    let mut writer = ArtifactWriter::new(&cli.out, hash)?;

    match cli.command {
        Command::Build => {
            let model = resolve_model(cli, &cfg)?;
            writer.set_certificate(certificate_of(&model));
            let path = if cli.model.is_some() {
                cli.model.clone().unwrap()
            } else {
                let p = cli.out.join("model.nsk");
                model.save_to(&p)?;
                p
            };
            writer.json(
                "build.json",
                &serde_json::json!({
                    "model_path": path.display().to_string(),
                    "moments": model.indices().len(),
                    "tail_bound": model.tail_bound(),
                }),
            )?;
        }
        Command::Kernel => {
            let block = cfg.kernel.as_ref().ok_or_else(|| missing("kernel"))?;
            let model = resolve_model(cli, &cfg)?;
            writer.set_certificate(certificate_of(&model));
            let n = model.domain().dim();
            let mut rows = Vec::new();
            for pt in &block.points {
                let z = to_point(pt);
                let v = kernel_eval(&model, &z, &z);
                rows.push(format!(
                    "{},{},{},{}",
                    point_cols(&z),
                    fmt_f64(v.value.re),
                    fmt_f64(v.value.im),
                    v.certified
                ));
            }
            writer.csv(
                "kernel.csv",
                &format!("{},K_re,K_im,certified", point_header(n)),
                &rows,
            )?;
        }
        Command::Metric | Command::Curvature => {
            let block = match cli.command {
                Command::Metric => cfg.metric.as_ref().ok_or_else(|| missing("metric"))?,
                _ => cfg.curvature.as_ref().ok_or_else(|| missing("curvature"))?,
            };
            let model = resolve_model(cli, &cfg)?;
            writer.set_certificate(certificate_of(&model));
            let ev = SeriesEvaluator::new(&model);
            let n = model.domain().dim();
            let v = to_point(&block.vector);
            let mut rows = Vec::new();
            for pt in &block.points {
                let z = to_point(pt);
                let mpd = metric_tensor(&ev, &z)?;
                let beta = mpd.det_g * ev.kernel_diag(&z)?.powf(-1.0 / (cfg.d as f64 + 1.0));
                let r = sectional_from_data(&mpd, &v)?;
                let ric = ricci_from_data(&mpd, &v)?;
                let mut cols = vec![point_cols(&z)];
                for i in 0..n {
                    for j in 0..n {
                        cols.push(fmt_f64(mpd.g[(i, j)].re));
                        cols.push(fmt_f64(mpd.g[(i, j)].im));
                    }
                }
                cols.push(fmt_f64(mpd.det_g));
                cols.push(fmt_f64(beta));
                cols.push(fmt_f64(r));
                cols.push(fmt_f64(ric));
                rows.push(cols.join(","));
            }
            let mut header = vec![point_header(n)];
            for i in 0..n {
                for j in 0..n {
                    header.push(format!("g_{}{}_re", i + 1, j + 1));
                    header.push(format!("g_{}{}_im", i + 1, j + 1));
                }
            }
            header.push("det_G".into());
            header.push("beta".into());
            header.push("R_v".into());
            header.push("Ric_v".into());
            let name = if cli.command == Command::Metric { "metric.csv" } else { "curvature.csv" };
            writer.csv(name, &header.join(","), &rows)?;
        }
        Command::Extremal => {
            let block = cfg.extremal.as_ref().ok_or_else(|| missing("extremal"))?;
            let model = resolve_model(cli, &cfg)?;
            writer.set_certificate(certificate_of(&model));
            let p = to_point(&block.p);
            let v = to_point(&block.v);
            let report = extremal_identity_report(&model, &p, &v)?;
            writer.json("extremal.json", &report)?;
            // Per-kind documents with the minimizer residuals and drift.
            let n = model.domain().dim();
            let mut kinds = vec![MinIntegralKind::I0, MinIntegralKind::I1, MinIntegralKind::I2];
            for k in 1..=n {
                kinds.push(MinIntegralKind::Lambda(k));
            }
            kinds.push(MinIntegralKind::I);
            kinds.push(MinIntegralKind::M);
            let docs: Vec<serde_json::Value> = kinds
                .iter()
                .map(|&kind| -> Result<serde_json::Value> {
                    let r = minimum_integral(&model, kind, &p, &v)?;
                    Ok(serde_json::json!({
                        "kind": kind.label(),
                        "p": block.p,
                        "v": block.v,
                        "value": r.value,
                        "residuals": r.residuals,
                        "N": r.n_used,
                        "drift": r.drift,
                    }))
                })
                .collect::<Result<Vec<_>>>()?;
            writer.json("minimum_integrals.json", &serde_json::json!({ "results": docs }))?;
        }
        Command::Transform => {
            let block = cfg.transform.as_ref().ok_or_else(|| missing("transform"))?;
            let n = cfg.domain.dim();
            let map = build_map(&block.map, n)?;
            // Source side from the series model so the rule is checked
            // against an independently assembled kernel; destination side
            // exact where a closed form exists.
            let model = resolve_model(cli, &cfg)?;
            writer.set_certificate(certificate_of(&model));
            let src = SeriesEvaluator::new(&model);
            let dst = evaluator_for(&block.dst_domain, cfg.d, cfg.truncation)?;
            let mut rows = Vec::new();
            for (pair, vec_doc) in block.points.iter().zip(&block.vectors) {
                if pair.len() != 2 {
                    return Err(Error::Contract("transform points must be (z, w) pairs".into()));
                }
                let z = to_point(&pair[0]);
                let w = to_point(&pair[1]);
                let v = to_point(vec_doc);
                let kr = nskernel::geometry::transform_kernel_residual(&map, &src, &dst, &z, &w)?;
                let mr = nskernel::geometry::transform_metric_residual(&map, &src, &dst, &z, &v)?;
                rows.push(serde_json::json!({
                    "z": pair[0], "w": pair[1], "v": vec_doc,
                    "kernel_residual": kr,
                    "metric_residual": mr,
                }));
            }
            writer.json("transform.json", &serde_json::json!({ "residuals": rows }))?;
        }
        Command::Pinchuk => {
            let block = cfg.pinchuk.as_ref().ok_or_else(|| missing("pinchuk"))?;
            let zeta = to_point(&block.zeta);
            let pm = pinchuk_normalize(&cfg.domain, &zeta)?;
            let mut doc = serde_json::json!({
                "zeta": block.zeta,
                "gradient_norm": pm.gradient_norm,
                "levi_eigenvalues": pm.levi_eigenvalues,
                "q_residual": pm.q_residual,
                "h_residual": pm.h_residual,
                "pre_unitary": matrix_doc(&pm.pre_unitary),
                "p_matrix": matrix_doc(&pm.p_matrix),
                "a1": matrix_doc(&pm.a1),
                "b1": matrix_doc(&pm.b1),
                "lambda": matrix_doc(&pm.lambda),
                "u_matrix": matrix_doc(&pm.u_matrix),
            });
            if !block.deltas.is_empty() {
                let frames: Vec<serde_json::Value> = block
                    .deltas
                    .iter()
                    .map(|&delta| -> Result<serde_json::Value> {
                        let sf = scaling_frame(&cfg.domain, &zeta, delta)?;
                        let dev = sf.sup_deviation_from_limit(&cfg.domain, 1.0)?;
                        Ok(serde_json::json!({
                            "delta": sf.delta,
                            "eta": sf.eta,
                            "eta_over_delta": sf.eta / sf.delta,
                            "sup_deviation_r1": dev,
                            "s_matrix": matrix_doc(&sf.s_matrix),
                        }))
                    })
                    .collect::<Result<Vec<_>>>()?;
                doc.as_object_mut()
                    .unwrap()
                    .insert("scaling_frames".into(), serde_json::Value::Array(frames));
            }
            writer.json("pinchuk.json", &doc)?;
        }
        Command::Asymptotics => {
            let block = cfg.asymptotics.as_ref().ok_or_else(|| missing("asymptotics"))?;
            let p0 = to_point(&block.p0);
            let v = to_point(&block.v);
            let verdict = match block.backend.as_str() {
                "exact" => asymptotics_sweep(
                    &cfg.domain,
                    EvalBackend::Exact { d: cfg.d },
                    &p0,
                    &v,
                    &block.deltas,
                    block.tolerance,
                )?,
                "series" => {
                    let model = resolve_model(cli, &cfg)?;
                    writer.set_certificate(certificate_of(&model));
                    asymptotics_sweep(
                        &cfg.domain,
                        EvalBackend::Series(&model),
                        &p0,
                        &v,
                        &block.deltas,
                        block.tolerance,
                    )?
                }
                other => {
                    return Err(Error::Contract(format!(
                        "unknown asymptotics backend `{other}` (use \"exact\" or \"series\")"
                    )))
                }
            };
            let mut rows = Vec::new();
            for r in &verdict.rows {
                let mut cols = vec![fmt_f64(r.delta)];
                cols.extend(r.qty.iter().map(|&q| fmt_f64(q)));
                cols.push(r.certified.to_string());
                rows.push(cols.join(","));
            }
            writer.csv("asymptotics.csv", "delta,a,b,c,d,e,f,g,certified", &rows)?;
            for (idx, tag) in ['a', 'b', 'c', 'd', 'e', 'f', 'g'].iter().enumerate() {
                let rows: Vec<String> = verdict
                    .rows
                    .iter()
                    .map(|r| format!("{},{}", fmt_f64(r.delta), fmt_f64(r.qty[idx])))
                    .collect();
                writer.csv(&format!("plot_{tag}.csv"), "delta,quantity", &rows)?;
            }
            writer.json("asymptotics_verdict.json", &verdict)?;
            for v in &verdict.verdicts {
                info!(
                    "tag {}: extrapolated {:.9e} target {:.9e} rel {:.3e} {}",
                    v.tag,
                    v.extrapolated,
                    v.target,
                    v.rel_error,
                    if v.pass { "pass" } else { "FAIL" }
                );
            }
        }
        Command::Ramadanov => {
            let block = cfg.ramadanov.as_ref().ok_or_else(|| missing("ramadanov"))?;
            let grid: Vec<CPoint> = block.grid.iter().map(|p| to_point(p)).collect();
            let report = ramadanov_run(
                &block.family,
                &cfg.domain,
                cfg.d,
                &grid,
                cfg.truncation,
                block.boundary_samples,
            )?;
            let rows: Vec<String> = report
                .rows
                .iter()
                .map(|r| {
                    let sup = r.sup_diff.map(fmt_f64).unwrap_or_default();
                    format!("{},{},{},{sup}", r.j, fmt_f64(r.eps), r.grid_inside)
                })
                .collect();
            writer.csv("ramadanov.csv", "j,eps,grid_inside,sup_diff", &rows)?;
            writer.json("ramadanov.json", &report)?;
            info!(
                "ramadanov: monotone={} final sup diff {:.6e}",
                report.monotone_decreasing, report.final_sup_diff
            );
        }
        Command::Completeness => {
            let block = cfg.completeness.as_ref().ok_or_else(|| missing("completeness"))?;
            let p0 = to_point(&block.p0);
            let ev = evaluator_for(&cfg.domain, cfg.d, cfg.truncation)?;
            let report = completeness_probe(&ev, &p0, &block.s_values)?;
            let rows: Vec<String> = report
                .rows
                .iter()
                .map(|r| format!("{},{}", fmt_f64(r.s), fmt_f64(r.length)))
                .collect();
            writer.csv("completeness.csv", "s,length", &rows)?;
            writer.json("completeness.json", &report)?;
        }
        Command::Selberg => {
            let block = cfg.selberg.as_ref().ok_or_else(|| missing("selberg"))?;
            let mut rows = Vec::new();
            for w_doc in &block.w {
                let w = to_point(w_doc);
                let c = selberg_constant(&cfg.domain, block.s, &w)?;
                println!("{c}");
                rows.push(serde_json::json!({ "w": w_doc, "c": c }));
            }
            writer.json(
                "selberg.json",
                &serde_json::json!({ "s": block.s, "values": rows }),
            )?;
        }
    }

    for path in writer.written() {
        info!("wrote {}", path.display());
    }
    Ok(())
}

fn build_map(doc: &MapDoc, n: usize) -> Result<Biholo> {
    Ok(match doc {
        MapDoc::Linear { matrix } => {
            if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
                return Err(Error::Contract("linear map matrix must be n x n".into()));
            }
            let a = DMatrix::from_fn(n, n, |i, j| C64::new(matrix[i][j].0, matrix[i][j].1));
            Biholo::linear(a)
        }
        MapDoc::Translation { offset } => {
            Biholo::translation(offset.iter().map(|&(re, im)| C64::new(re, im)).collect())
        }
        MapDoc::Cayley => Biholo::cayley(n),
    })
}

fn matrix_doc(m: &DMatrix<C64>) -> Vec<Vec<(f64, f64)>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| (m[(i, j)].re, m[(i, j)].im)).collect())
        .collect()
}
