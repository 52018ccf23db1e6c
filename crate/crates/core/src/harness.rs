//! End-to-end execution: run configurations, records, sweeps, and the
//! runtime validation suite behind the CLI.

use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{sample_collocation, NodeDistribution};
use crate::network::{init_params, param_count, InitScheme, ShallowNetParams};
use crate::optimizer::{lm_step, train_with_observer, LmConfig, StopReason, TrainReport};
use crate::problems::{
    evaluate_errors, evaluate_fit_errors, pde_loss_terms, pde_residuals, pde_residuals_of_exact,
    preset, ErrorReport, FitModel, PdeModel, Preset, PresetName, PresetTask,
};

/// Seeds for the three independent random streams of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seeds {
    pub init: u64,
    pub sample: u64,
    pub test: u64,
}

impl Seeds {
    pub fn from_base(base: u64) -> Self {
        Self { init: base, sample: base.wrapping_add(1), test: base.wrapping_add(2) }
    }
}

/// Shipped default seeds, fixed per preset so documented results are
/// reproducible.
pub fn default_seeds(name: PresetName) -> Seeds {
    let base = match name {
        PresetName::Fit1d => 11,
        PresetName::Ex1 => 7,
        PresetName::Ex2 => 7,
        PresetName::Ex3 => 7,
        PresetName::Ex4 => 7,
        PresetName::Ex5 => 7,
    };
    Seeds::from_base(base)
}

fn default_error_stride() -> usize {
    10
}

/// A single experiment configuration. Unset fields fall back to the
/// preset's shipped defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub preset: PresetName,
    #[serde(default)]
    pub neurons: Option<usize>,
    #[serde(default)]
    pub dist: Option<NodeDistribution>,
    #[serde(default)]
    pub seeds: Option<Seeds>,
    #[serde(default)]
    pub max_iters: Option<usize>,
    #[serde(default)]
    pub loss_tol: Option<f64>,
    #[serde(default)]
    pub mu0: Option<f64>,
    /// Evaluate the testing-error history every this many iterations.
    #[serde(default = "default_error_stride")]
    pub error_stride: usize,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(preset: PresetName) -> Self {
        Self {
            preset,
            neurons: None,
            dist: None,
            seeds: None,
            max_iters: None,
            loss_tol: None,
            mu0: None,
            error_stride: default_error_stride(),
            out_dir: None,
        }
    }

    fn resolve(&self) -> (Preset, usize, NodeDistribution, Seeds, LmConfig) {
        let pre = preset(self.preset);
        let neurons = self.neurons.unwrap_or(pre.default_neurons);
        let dist = self.dist.unwrap_or(pre.default_dist);
        let seeds = self.seeds.unwrap_or_else(|| default_seeds(self.preset));
        let mut lm = LmConfig {
            loss_tol: self.loss_tol.unwrap_or(pre.loss_tol),
            max_iters: self.max_iters.unwrap_or(pre.default_max_iters),
            ..Default::default()
        };
        if let Some(mu0) = self.mu0 {
            lm.mu0 = mu0;
        }
        (pre, neurons, dist, seeds, lm)
    }
}

/// Summary of a training run kept in the record (full parameter vector
/// is checkpointed separately).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrainSummary {
    pub iterations: usize,
    pub final_loss: f64,
    pub stop_reason: StopReason,
}

/// Full provenance of one run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub config: RunConfig,
    pub neurons: usize,
    pub param_count: usize,
    pub dist: NodeDistribution,
    pub seeds: Seeds,
    pub train: TrainSummary,
    pub errors: Option<ErrorReport>,
    pub failure: Option<String>,
    pub duration_secs: f64,
    pub version: String,
}

impl RunRecord {
    pub fn succeeded(&self) -> bool {
        self.failure.is_none() && self.train.stop_reason != StopReason::NonFinite
    }
}

/// Testing-error history row sampled during training.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ErrorSample {
    pub iteration: usize,
    pub l_inf: f64,
    pub l2: f64,
}

/// Everything a run produces.
pub struct RunOutput {
    pub record: RunRecord,
    pub report: TrainReport,
    pub params: ShallowNetParams,
    pub error_history: Vec<ErrorSample>,
    pub points_csv: String,
}

/// Execute one configuration end to end: sample, initialize, train,
/// evaluate `N_test = 100·M` testing errors, and (optionally) write the
/// output files.
pub fn run(config: &RunConfig) -> Result<RunOutput> {
    let started = Instant::now();
    let (pre, neurons, dist, seeds, lm) = config.resolve();
    let d = pre.dim;
    let p0 = init_params(d, neurons, seeds.init, InitScheme::Uniform)?.flatten();
    let n_test = 100 * pre.counts.0;

    let mut error_history = Vec::new();
    let (report, errors, points_csv) = match &pre.task {
        PresetTask::Fit { .. } => {
            let dataset = pre.fit_dataset(pre.counts.0, seeds.sample)?;
            let model = FitModel::new(&dataset, d, neurons);
            let stride = config.error_stride.max(1);
            let task = pre.task.clone();
            let mut observer = |iter: usize, p: &DVector<f64>| {
                if iter % stride == 0 {
                    if let Ok(params) = ShallowNetParams::unflatten(d, neurons, p) {
                        if let Ok(e) = evaluate_fit_errors(&params, &task, n_test, seeds.test) {
                            error_history.push(ErrorSample {
                                iteration: iter,
                                l_inf: e.l_inf,
                                l2: e.l2,
                            });
                        }
                    }
                }
            };
            let report = train_with_observer(&model, &p0, &lm, &mut observer)?;
            let params = ShallowNetParams::unflatten(d, neurons, &DVector::from_column_slice(
                &report.final_params,
            ))?;
            let errors = evaluate_fit_errors(&params, &pre.task, n_test, seeds.test)?;
            let mut csv = String::from("role,x1,z,target\n");
            for (pt, t) in &dataset {
                csv.push_str(&format!("interior,{},{},{t}\n", pt.x[0], pt.z));
            }
            (report, errors, csv)
        }
        PresetTask::Pde { problem } => {
            let (m, m_b, m_g) = pre.counts;
            let colloc = sample_collocation(&problem.geom, m, m_b, m_g, dist, seeds.sample)?;
            colloc.validate(&problem.geom)?;
            let model = PdeModel::new(problem, &colloc, neurons);
            let stride = config.error_stride.max(1);
            let mut observer = |iter: usize, p: &DVector<f64>| {
                if iter % stride == 0 {
                    if let Ok(params) = ShallowNetParams::unflatten(d, neurons, p) {
                        if let Ok(e) = evaluate_errors(&params, problem, n_test, seeds.test) {
                            error_history.push(ErrorSample {
                                iteration: iter,
                                l_inf: e.l_inf,
                                l2: e.l2,
                            });
                        }
                    }
                }
            };
            let report = train_with_observer(&model, &p0, &lm, &mut observer)?;
            let params = ShallowNetParams::unflatten(d, neurons, &DVector::from_column_slice(
                &report.final_params,
            ))?;
            let errors = evaluate_errors(&params, problem, n_test, seeds.test)?;
            (report, errors, colloc.to_csv())
        }
    };

    let params = ShallowNetParams::unflatten(
        d,
        neurons,
        &DVector::from_column_slice(&report.final_params),
    )?;
    let failure = match report.stop_reason {
        StopReason::NonFinite => Some("training aborted on non-finite loss".to_string()),
        _ => None,
    };
    let record = RunRecord {
        config: config.clone(),
        neurons,
        param_count: param_count(d, neurons),
        dist,
        seeds,
        train: TrainSummary {
            iterations: report.iterations,
            final_loss: report.final_loss(),
            stop_reason: report.stop_reason,
        },
        errors: Some(errors),
        failure,
        duration_secs: started.elapsed().as_secs_f64(),
        version: env!("CARGO_PKG_VERSION").to_string(),
    };

    let output = RunOutput {
        record,
        report,
        params,
        error_history,
        points_csv,
    };
    if let Some(dir) = &config.out_dir {
        write_run_outputs(dir, &output)?;
    }
    Ok(output)
}

fn error_history_csv(history: &[ErrorSample]) -> String {
    let mut out = String::from("iteration,l_inf,l2\n");
    for s in history {
        out.push_str(&format!("{},{:e},{:e}\n", s.iteration, s.l_inf, s.l2));
    }
    out
}

/// Write record.json, checkpoint.json, loss_history.csv,
/// error_history.csv, and points.csv. Files are written atomically via a
/// temporary name in the same directory.
pub fn write_run_outputs(dir: &Path, output: &RunOutput) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let atomic_write = |name: &str, contents: &str| -> Result<()> {
        let tmp = dir.join(format!(".{name}.tmp"));
        std::fs::write(&tmp, contents)?;
        std::fs::rename(&tmp, dir.join(name))?;
        Ok(())
    };
    atomic_write("record.json", &serde_json::to_string_pretty(&output.record)?)?;
    atomic_write(
        "checkpoint.json",
        &serde_json::to_string(&output.params.to_record(InitScheme::Uniform))?,
    )?;
    atomic_write("loss_history.csv", &output.report.loss_history_csv())?;
    atomic_write("error_history.csv", &error_history_csv(&output.error_history))?;
    atomic_write("points.csv", &output.points_csv)?;
    Ok(())
}

/// One row of a sweep table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub preset: String,
    pub neurons: usize,
    pub param_count: usize,
    pub dist: String,
    pub l_inf: Option<f64>,
    pub l2: Option<f64>,
    pub rel_l2: Option<f64>,
    pub final_loss: Option<f64>,
    pub iterations: Option<usize>,
    pub seconds: f64,
    pub status: String,
}

/// Run every configuration, collecting per-row results; individual
/// failures are recorded and the sweep continues.
pub fn sweep(configs: &[RunConfig]) -> Result<Vec<SweepRow>> {
    if configs.is_empty() {
        return Err(Error::InvalidArgument("sweep needs at least one config".into()));
    }
    let mut rows = Vec::with_capacity(configs.len());
    for config in configs {
        let started = Instant::now();
        let (pre, neurons, dist, _, _) = config.resolve();
        match run(config) {
            Ok(out) => {
                let e = out.record.errors;
                rows.push(SweepRow {
                    preset: pre.name.as_str().to_string(),
                    neurons,
                    param_count: out.record.param_count,
                    dist: format!("{dist:?}").to_lowercase(),
                    l_inf: e.map(|e| e.l_inf),
                    l2: e.map(|e| e.l2),
                    rel_l2: e.map(|e| e.rel_l2),
                    final_loss: Some(out.record.train.final_loss),
                    iterations: Some(out.record.train.iterations),
                    seconds: out.record.duration_secs,
                    status: if out.record.succeeded() {
                        "ok".into()
                    } else {
                        out.record.failure.clone().unwrap_or_else(|| "failed".into())
                    },
                });
            }
            Err(err) => rows.push(SweepRow {
                preset: pre.name.as_str().to_string(),
                neurons,
                param_count: param_count(pre.dim, neurons),
                dist: format!("{dist:?}").to_lowercase(),
                l_inf: None,
                l2: None,
                rel_l2: None,
                final_loss: None,
                iterations: None,
                seconds: started.elapsed().as_secs_f64(),
                status: err.to_string(),
            }),
        }
    }
    Ok(rows)
}

/// CSV table mirroring the sweep rows.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out =
        String::from("preset,N,N_p,distribution,l_inf,l2,rel_l2,final_loss,iterations,seconds,status\n");
    let opt = |v: Option<f64>| v.map(|v| format!("{v:e}")).unwrap_or_default();
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{:.3},{}\n",
            r.preset,
            r.neurons,
            r.param_count,
            r.dist,
            opt(r.l_inf),
            opt(r.l2),
            opt(r.rel_l2),
            opt(r.final_loss),
            r.iterations.map(|i| i.to_string()).unwrap_or_default(),
            r.seconds,
            r.status,
        ));
    }
    out
}

/// Outcome of one runtime validation check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, result: std::result::Result<String, String>) -> CheckResult {
    match result {
        Ok(detail) => CheckResult { name: name.into(), passed: true, detail },
        Err(detail) => CheckResult { name: name.into(), passed: false, detail },
    }
}

/// Fast invariant/oracle suite runnable from the CLI (`dcsnn validate`):
/// parameter counts, derivative spot checks, the SVD step against a dense
/// normal-equations solve, manufactured-solution consistency, the loss
/// decomposition identity, and collocation-set invariants on every
/// preset.
pub fn validate() -> Vec<CheckResult> {
    let mut results = Vec::new();

    results.push(check("parameter-count identity", {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut bad = None;
        for _ in 0..20 {
            let d = rng.gen_range(1..=8);
            let n = rng.gen_range(1..=64);
            let len = init_params(d, n, 2, InitScheme::Uniform)
                .map(|p| p.flatten().len())
                .unwrap_or(0);
            if len != (d + 3) * n + 1 {
                bad = Some(format!("d={d}, N={n} gave length {len}"));
            }
        }
        bad.map_or(Ok("20 random (d, N) pairs".into()), Err)
    }));

    results.push(check("svd step vs normal equations", {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut worst: f64 = 0.0;
        for _ in 0..10 {
            let j = DMatrix::from_fn(8, 5, |_, _| rng.gen_range(-1.0..=1.0));
            let r = DVector::from_fn(8, |_, _| rng.gen_range(-1.0..=1.0));
            let mu = 0.37;
            let step = lm_step(&j, &r, mu).unwrap();
            let lhs = j.tr_mul(&j) + DMatrix::identity(5, 5) * mu;
            let oracle = lhs.lu().solve(&j.tr_mul(&r)).unwrap();
            worst = worst.max((&step - &oracle).norm() / oracle.norm());
        }
        if worst < 1e-10 {
            Ok(format!("max relative deviation {worst:e}"))
        } else {
            Err(format!("relative deviation {worst:e} exceeds 1e-10"))
        }
    }));

    for name in PresetName::ALL {
        let pre = preset(name);
        let Some(problem) = pre.problem() else { continue };
        let label = pre.name.as_str();

        results.push(check(&format!("{label}: collocation invariants"), {
            let (m, m_b, m_g) = pre.counts;
            sample_collocation(&problem.geom, m, m_b, m_g, pre.default_dist, 21)
                .and_then(|c| c.validate(&problem.geom))
                .map(|_| "labels, boundary residuals, unit outward normals".into())
                .map_err(|e| e.to_string())
        }));

        results.push(check(&format!("{label}: manufactured residual zero"), {
            let (m, m_b, m_g) = pre.counts;
            sample_collocation(&problem.geom, m, m_b, m_g, NodeDistribution::Random, 3)
                .and_then(|c| pde_residuals_of_exact(problem, &c))
                .map_err(|e| e.to_string())
                .and_then(|r| {
                    let max = r.amax();
                    if max < 1e-10 {
                        Ok(format!("max residual {max:e}"))
                    } else {
                        Err(format!("max residual {max:e} exceeds 1e-10"))
                    }
                })
        }));

        results.push(check(&format!("{label}: loss decomposition identity"), {
            (|| -> std::result::Result<String, String> {
                let colloc =
                    sample_collocation(&problem.geom, 16, 8, 8, NodeDistribution::Random, 4)
                        .map_err(|e| e.to_string())?;
                let params =
                    init_params(pre.dim, 6, 11, InitScheme::Uniform).map_err(|e| e.to_string())?;
                let r = pde_residuals(&params, problem, &colloc).map_err(|e| e.to_string())?;
                let total: f64 = pde_loss_terms(&params, problem, &colloc)
                    .map_err(|e| e.to_string())?
                    .iter()
                    .sum();
                let rel = (r.norm_squared() - total).abs() / total.abs().max(f64::MIN_POSITIVE);
                if rel < 1e-12 {
                    Ok(format!("relative gap {rel:e}"))
                } else {
                    Err(format!("relative gap {rel:e} exceeds 1e-12"))
                }
            })()
        }));
    }

    results
}
