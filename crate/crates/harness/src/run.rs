//! Running a suite: estimate every sequence at every stage, check the
//! assertions, and write the artifacts.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use mstar_core::estimator::{mstar_mc_batch, pstar_batch, sample_seed, ExtensionParams};
use mstar_core::logic::Theory;
use mstar_core::sequences::{generate, SequenceDef};
use serde::Serialize;

use crate::config::{ExperimentConfig, SuiteKind};
use crate::output::{write_csv, write_jsonl, PStarRecord, Record};
use crate::plot::{emit_plots, Chart, Series};
use crate::trend::{Outcome, Point};
use crate::RunError;

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub outcomes: Vec<Outcome>,
    #[serde(skip)]
    pub artifacts: Vec<PathBuf>,
}

impl SuiteReport {
    /// One `PASS`/`FAIL` line per outcome.
    pub fn lines(&self) -> Vec<String> {
        self.outcomes.iter().map(|o| format!("{} {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail)).collect()
    }
}

/// Estimates every sequence of the suite at every stage, in
/// `(sequence, stage)` order.
pub fn evaluate_sequences(
    cfg: &ExperimentConfig,
    ids: &[String],
    progress: &mut dyn FnMut(&str),
) -> Result<Vec<Record>, RunError> {
    let defs = ids.iter().map(|id| SequenceDef::lookup(id)).collect::<Result<Vec<_>, _>>()?;
    let theory = Theory::empty();
    let mut per_stage = Vec::new();
    for stage in cfg.stages()? {
        let phis = defs.iter().map(|d| generate(d, stage.n)).collect::<Result<Vec<_>, _>>()?;
        let seed = sample_seed(cfg.suite.seed, stage.n);
        let estimates = mstar_mc_batch(&phis, &stage, &theory, cfg.suite.samples, seed)?;
        progress(&format!("stage n={} ({} machines): {} sequences", stage.n, stage.machines(), ids.len()));
        per_stage.push((stage.n, estimates));
    }
    let mut records = Vec::with_capacity(ids.len() * per_stage.len());
    for (i, id) in ids.iter().enumerate() {
        for (n, estimates) in &per_stage {
            records.push(Record::new(id, *n, &estimates[i]));
        }
    }
    Ok(records)
}

fn trajectory(records: &[Record], id: &str) -> Vec<Point> {
    records.iter().filter(|r| r.seq_id == id).map(|r| Point { n: r.n, value: r.value, ci: r.ci }).collect()
}

/// Runs a config of either kind, writing artifacts under `out_dir`.
pub fn run(cfg: &ExperimentConfig, out_dir: &Path, progress: &mut dyn FnMut(&str)) -> Result<SuiteReport, RunError> {
    match cfg.suite.kind {
        SuiteKind::Trend => run_suite(cfg, out_dir, progress),
        SuiteKind::Crosscheck => run_crosscheck(cfg, out_dir, progress),
    }
}

pub fn run_suite(cfg: &ExperimentConfig, out_dir: &Path, progress: &mut dyn FnMut(&str)) -> Result<SuiteReport, RunError> {
    let ids = cfg.sequence_ids();
    let records = evaluate_sequences(cfg, &ids, progress)?;
    let mut outcomes = Vec::new();
    let mut charts = Vec::new();
    for a in cfg.trend_assertions()? {
        let members: Vec<Vec<Point>> = a.sequences.iter().map(|id| trajectory(&records, id)).collect();
        let outcome = a.evaluate(&members);
        let mut series: Vec<Series> =
            a.sequences.iter().zip(&members).map(|(id, pts)| Series { label: id.clone(), points: pts.clone() }).collect();
        if a.sequences.len() > 1 {
            series.push(Series { label: "combined".into(), points: outcome.series.clone() });
        }
        let title = format!("{} [{}]", a.name, if outcome.passed { "pass" } else { "fail" });
        charts.push((a.name.clone(), Chart { title, series, target: a.target(), reference: None }));
        outcomes.push(outcome);
    }
    let report = finish(cfg, out_dir, outcomes, charts, &records)?;
    Ok(report)
}

pub fn run_crosscheck(cfg: &ExperimentConfig, out_dir: &Path, progress: &mut dyn FnMut(&str)) -> Result<SuiteReport, RunError> {
    let x = cfg.crosscheck.as_ref().ok_or_else(|| RunError::Usage("crosscheck needs a [crosscheck] section".into()))?;
    let defs = x.sentences.iter().map(|s| SequenceDef::lookup(&format!("constant:{s}"))).collect::<Result<Vec<_>, _>>()?;
    let mut ids: Vec<String> = defs.iter().map(|d| d.id.clone()).collect();
    for id in cfg.sequence_ids() {
        if !ids.contains(&id) {
            ids.push(id);
        }
    }
    let records = evaluate_sequences(cfg, &ids, progress)?;

    let phis = defs.iter().map(|d| generate(d, 0)).collect::<Result<Vec<_>, _>>()?;
    let params =
        ExtensionParams { rounds: x.rounds, machine_budget: x.machine_budget, atom_window: x.atom_window, axiom_count: 0 };
    let pstar = pstar_batch(&phis, x.pstar_seed, x.pstar_samples, &Theory::empty(), &params)?;
    progress(&format!("truncated limit: {} sentences, {} samples", phis.len(), x.pstar_samples));

    let mut outcomes = Vec::new();
    let mut charts = Vec::new();
    let mut pstar_rows = Vec::new();
    for ((def, text), p) in defs.iter().zip(&x.sentences).zip(&pstar) {
        let series = trajectory(&records, &def.id);
        let (pv, pc) = (p.estimate.value(), p.estimate.ci_halfwidth);
        let tail: Vec<&Point> = series.iter().rev().take(x.window).collect();
        let mut worst = 0.0f64;
        let mut passed = !tail.is_empty();
        for m in &tail {
            let diff = (m.value - pv).abs();
            worst = worst.max(diff);
            passed &= diff <= x.tol + m.ci + pc;
        }
        let last = series.last().copied().unwrap_or(Point { n: 0, value: f64::NAN, ci: 0.0 });
        let detail = format!(
            "M* {:.4} ± {:.4} at n={}, P* {pv:.4} ± {pc:.4} ({} undecided), largest |diff| {worst:.4}, tol {} + CIs",
            last.value, last.ci, last.n, p.undecided, x.tol
        );
        let name = format!("crosscheck {text}");
        let title = format!("{name} [{}]", if passed { "pass" } else { "fail" });
        charts.push((
            format!("crosscheck_{}", outcomes.len()),
            Chart {
                title,
                series: vec![Series { label: "M*".into(), points: series.clone() }],
                target: None,
                reference: Some((pv, pc)),
            },
        ));
        outcomes.push(Outcome { name, passed, statistic: worst, detail, series });
        pstar_rows.push(PStarRecord {
            sentence: text.clone(),
            value: pv,
            ci: pc,
            samples: p.estimate.samples,
            seed: p.estimate.seed,
            undecided: p.undecided,
        });
    }
    let mut report = finish(cfg, out_dir, outcomes, charts, &records)?;
    let csv = out_dir.join("pstar.csv");
    let jsonl = out_dir.join("pstar.jsonl");
    write_csv(&csv, &pstar_rows)?;
    write_jsonl(&jsonl, &pstar_rows)?;
    report.artifacts.extend([csv, jsonl]);
    Ok(report)
}

fn finish(
    cfg: &ExperimentConfig,
    out_dir: &Path,
    outcomes: Vec<Outcome>,
    charts: Vec<(String, Chart)>,
    records: &[Record],
) -> Result<SuiteReport, RunError> {
    std::fs::create_dir_all(out_dir)?;
    let mut artifacts = Vec::new();
    let csv = out_dir.join("trajectories.csv");
    let jsonl = out_dir.join("trajectories.jsonl");
    write_csv(&csv, records)?;
    write_jsonl(&jsonl, records)?;
    artifacts.extend([csv, jsonl]);
    artifacts.extend(emit_plots(&out_dir.join("plots"), &charts)?);

    let passed = !outcomes.is_empty() && outcomes.iter().all(|o| o.passed);
    let report = SuiteReport { suite: cfg.suite.id.clone(), passed, outcomes, artifacts: Vec::new() };
    let mut text = String::new();
    let _ = writeln!(text, "suite {} ({} samples per estimate, seed {})", cfg.suite.id, cfg.suite.samples, cfg.suite.seed);
    for line in report.lines() {
        let _ = writeln!(text, "{line}");
    }
    let _ = writeln!(text, "{}", if passed { "suite passed" } else { "suite failed" });
    let txt = out_dir.join("report.txt");
    std::fs::write(&txt, text)?;
    let resolved = out_dir.join("config.resolved.toml");
    std::fs::write(&resolved, toml::to_string(cfg).map_err(|e| RunError::Usage(e.to_string()))?)?;
    let mut report = report;
    report.artifacts.extend(artifacts);
    report.artifacts.extend([txt, resolved]);
    Ok(report)
}
