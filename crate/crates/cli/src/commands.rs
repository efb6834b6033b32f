use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use pagraph::dag::{dag_trial, DagTrialRow};
use pagraph::degree::degree_law_table;
use pagraph::entropy::{
    constant_a, exact_entropy, mc_entropy, rederived_linear_coefficient, stated_linear_coefficient,
    structural_entropy_estimate, EntropyEstimate, EntropyRecord,
};
use pagraph::model::{encode_graph, generate, WeightMode};
use pagraph::rng::{trial_seed, STREAM_VERSION};
use pagraph::stats::{MeanEstimate, RateEstimate};
use pagraph::symmetry::{symmetry_rate, symmetry_trial, RateMethod, SymmetryRecord, Verdict, Witness};
use pagraph::verify::{run_verification, VERIFY_MAX_N};

use crate::args::*;
use crate::output::{check_writable, resolve, CliError, CliResult, Sink, TrialWriter};

/// Tolerance for the constant `A(m)` reported next to entropy results.
const A_TOL: f64 = 1e-6;
/// Trials computed between two checkpoint flushes.
const BATCH: u64 = 64;

pub struct Ctx {
    pub out_dir: Option<PathBuf>,
}

impl Ctx {
    fn sink(&self, output: &OutputArgs) -> CliResult<Sink> {
        match &output.output {
            None => Ok(Sink::Stdout),
            Some(p) => {
                let p = resolve(self.out_dir.as_deref(), p);
                check_writable(&p)?;
                Ok(Sink::File(p))
            }
        }
    }
}

fn pick_format(given: Option<Format>, allowed: &[Format], command: &str) -> CliResult<Format> {
    match given {
        None => Ok(allowed[0]),
        Some(f) if allowed.contains(&f) => Ok(f),
        Some(f) => Err(CliError::usage(format!(
            "format `{}` is not available for `{command}` (use {})",
            f.name(),
            allowed.iter().map(|f| f.name()).collect::<Vec<_>>().join(" or ")
        ))),
    }
}

fn check_model(model: &ModelArgs) -> CliResult<()> {
    if model.m == 0 {
        return Err(CliError::usage("-m must be at least 1"));
    }
    if model.n == 0 {
        return Err(CliError::usage("-n must be at least 1"));
    }
    Ok(())
}

fn check_trials(trials: usize, min: usize) -> CliResult<()> {
    if trials < min {
        return Err(CliError::usage(format!("--trials must be at least {min}")));
    }
    Ok(())
}

fn mode_code(mode: Mode) -> String {
    WeightMode::from(mode).code().to_string()
}

fn pretty(value: &impl Serialize) -> CliResult<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(std::io::Error::from)?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn csv_bytes<R: Serialize>(header: Option<&[&str]>, rows: impl IntoIterator<Item = R>) -> CliResult<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    if let Some(h) = header {
        w.write_record(h).map_err(csv_err)?;
    }
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.into_error()))
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(std::io::Error::other(e))
}

fn csv_line<R: Serialize>(row: R) -> CliResult<String> {
    let bytes = csv_bytes(None, [row])?;
    Ok(String::from_utf8_lossy(&bytes).trim_end().to_string())
}

pub fn generate_cmd(ctx: &Ctx, a: &GenerateArgs) -> CliResult<u8> {
    check_model(&a.model)?;
    let format = pick_format(a.output.format, &[Format::Pag, Format::Json], "generate")?;
    let sink = ctx.sink(&a.output)?;
    let g = generate(a.model.m, a.model.n, a.seed, a.model.mode.into())?;
    let bytes = match format {
        Format::Pag => encode_graph(&g).into_bytes(),
        _ => pretty(&json!({
            "m": g.m(),
            "n": g.n(),
            "mode": mode_code(a.model.mode),
            "seed": a.seed,
            "stream": STREAM_VERSION,
            "choices": g.steps().map(|(_, s)| s.to_vec()).collect::<Vec<_>>(),
        }))?,
    };
    sink.emit(&bytes)?;
    sink.summary(&format!(
        "generated PA({}; {}) mode={} seed={} ({} edges)",
        g.m(),
        g.n(),
        mode_code(a.model.mode),
        a.seed,
        u64::from(g.m()) * u64::from(g.n())
    ));
    Ok(0)
}

pub fn degrees_cmd(ctx: &Ctx, a: &DegreesArgs) -> CliResult<u8> {
    check_model(&a.model)?;
    check_trials(a.trials, 2)?;
    if a.d_max < a.model.m {
        return Err(CliError::usage("--d-max must be at least -m"));
    }
    let format = pick_format(a.output.format, &[Format::Csv, Format::Json], "degrees")?;
    let sink = ctx.sink(&a.output)?;
    let rows = degree_law_table(a.model.m, a.model.n, a.d_max, a.trials, a.seed, a.model.mode.into())?;
    let bytes = match format {
        Format::Csv => csv_bytes(
            Some(&["t", "d", "empirical_mean", "empirical_stderr", "theory", "ratio"]),
            &rows,
        )?,
        _ => pretty(&rows)?,
    };
    sink.emit(&bytes)?;
    let worst = rows
        .iter()
        .map(|r| (r.empirical_mean - r.theory).abs())
        .fold(0.0, f64::max);
    sink.summary(&format!(
        "degree law m={} n={} trials={}: {} rows, largest |mean - theory| = {worst:.3}",
        a.model.m,
        a.model.n,
        a.trials,
        rows.len()
    ));
    Ok(0)
}

/// Per-trial driver shared by `symmetry` and `dag`: computes trials in
/// parallel batches and hands each batch, in index order, to one writer.
fn stream_trials<R: Send>(
    trials: u64,
    start: u64,
    writer: &mut TrialWriter,
    compute: impl Fn(u64) -> CliResult<R> + Sync,
    render: impl Fn(&R) -> CliResult<String>,
    mut tally: impl FnMut(&R),
) -> CliResult<()> {
    let mut next = start;
    while next < trials {
        let end = (next + BATCH).min(trials);
        let batch: Vec<CliResult<R>> = (next..end).into_par_iter().map(&compute).collect();
        let mut lines = Vec::with_capacity(batch.len());
        for r in batch {
            let r = r?;
            lines.push(render(&r)?);
            tally(&r);
        }
        writer.write_lines(&lines)?;
        next = end;
    }
    Ok(())
}

/// Opens the per-trial output: stdout, a fresh file, or an existing file to
/// continue. Returns the writer and the lines already present (header
/// excluded), after checking the header.
fn open_trials(sink: &Sink, resume: bool, header: Option<&str>) -> CliResult<(TrialWriter, Vec<String>)> {
    match sink {
        Sink::Stdout => {
            let mut w = TrialWriter::stdout();
            if let Some(h) = header {
                w.write_lines(&[h.to_string()])?;
            }
            Ok((w, Vec::new()))
        }
        Sink::File(p) if resume && p.exists() => {
            let (mut w, mut lines) = TrialWriter::resume(p)?;
            if let Some(h) = header {
                if lines.is_empty() {
                    w.write_lines(&[h.to_string()])?;
                } else if lines[0] != h {
                    return Err(resume_err(p, "header does not match this command"));
                } else {
                    lines.remove(0);
                }
            }
            Ok((w, lines))
        }
        Sink::File(p) => {
            let mut w = TrialWriter::create(p)?;
            if let Some(h) = header {
                w.write_lines(&[h.to_string()])?;
            }
            Ok((w, Vec::new()))
        }
    }
}

fn resume_err(path: &Path, reason: impl Into<String>) -> CliError {
    CliError::Resume {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

fn sink_path(sink: &Sink) -> &Path {
    match sink {
        Sink::File(p) => p,
        Sink::Stdout => Path::new("-"),
    }
}

const SYMMETRY_CSV_HEADER: &str = "m,n,seed,method,aut_order,verdict,k_used,witness,elapsed_ms";

fn method_name(m: RateMethod) -> &'static str {
    match m {
        RateMethod::Exact => "exact",
        RateMethod::Certificate => "certificate",
    }
}

fn witness_text(w: &Option<Witness>) -> String {
    match w {
        None => String::new(),
        Some(Witness::SharedChoices { t1, t2 }) => format!("shared_choices:{t1}:{t2}"),
        Some(Witness::SharedDegree { s, other }) => format!("shared_degree:{s}:{other}"),
    }
}

fn symmetry_csv_row(r: &SymmetryRecord) -> CliResult<String> {
    let verdict = match r.verdict {
        Some(Verdict::CertifiedAsymmetric) => "certified_asymmetric",
        Some(Verdict::Unknown) => "unknown",
        None => "",
    };
    csv_line((
        r.m,
        r.n,
        r.seed,
        method_name(r.method),
        r.aut_order.as_deref().unwrap_or(""),
        verdict,
        r.k_used,
        witness_text(&r.witness),
        r.elapsed_ms,
    ))
}

/// Recovers whether a previously written trial line was a hit.
fn symmetry_line_hit(line: &str, format: Format, method: RateMethod, expect: (u32, u32, u64)) -> Option<bool> {
    match format {
        Format::Csv => {
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 9 || cols[0] != expect.0.to_string() || cols[1] != expect.1.to_string() {
                return None;
            }
            if cols[2] != expect.2.to_string() || cols[3] != method_name(method) {
                return None;
            }
            Some(match method {
                RateMethod::Exact => cols[4] != "1",
                RateMethod::Certificate => cols[5] != "certified_asymmetric",
            })
        }
        _ => {
            let r: SymmetryRecord = serde_json::from_str(line).ok()?;
            ((r.m, r.n, r.seed) == expect && r.method == method).then(|| r.is_hit())
        }
    }
}

pub fn symmetry_cmd(ctx: &Ctx, a: &SymmetryArgs) -> CliResult<u8> {
    check_model(&a.model)?;
    check_trials(a.trials, 1)?;
    let format = pick_format(a.output.format, &[Format::Json, Format::Csv], "symmetry")?;
    let sink = ctx.sink(&a.output)?;
    let method = match a.method {
        SymmetryMethod::Exact => RateMethod::Exact,
        SymmetryMethod::Certificate => RateMethod::Certificate,
    };
    let (m, n, seed, mode) = (a.model.m, a.model.n, a.seed, WeightMode::from(a.model.mode));
    // fail on bad parameters before any file is touched
    symmetry_trial(m, n.min(2), seed, 0, mode, method)?;

    let header = (format == Format::Csv).then_some(SYMMETRY_CSV_HEADER);
    let (mut writer, done) = open_trials(&sink, a.resume, header)?;
    if done.len() > a.trials {
        return Err(resume_err(sink_path(&sink), "file holds more trials than requested"));
    }
    let mut hits = 0usize;
    for (i, line) in done.iter().enumerate() {
        match symmetry_line_hit(line, format, method, (m, n, trial_seed(seed, i as u64))) {
            Some(h) => hits += usize::from(h),
            None => {
                return Err(resume_err(
                    sink_path(&sink),
                    format!("trial {i} does not match this run"),
                ))
            }
        }
    }
    let timing = a.timing;
    stream_trials(
        a.trials as u64,
        done.len() as u64,
        &mut writer,
        |i| {
            let start = Instant::now();
            let mut r = symmetry_trial(m, n, seed, i, mode, method)?;
            if timing {
                r.elapsed_ms = Some(start.elapsed().as_millis() as u64);
            }
            Ok(r)
        },
        |r| match format {
            Format::Csv => symmetry_csv_row(r),
            _ => serde_json::to_string(r).map_err(|e| CliError::Io(e.into())),
        },
        |r| hits += usize::from(r.is_hit()),
    )?;
    let est = RateEstimate::new(hits, a.trials);
    let what = match method {
        RateMethod::Exact => "P(|Aut| > 1)",
        RateMethod::Certificate => "P(not certified)",
    };
    sink.summary(&format!(
        "m={m} n={n} trials={}: {what} = {:.4} +/- {:.4} ({hits} hits)",
        a.trials, est.rate, est.stderr
    ));
    Ok(0)
}

const DAG_CSV_HEADER: &str = "n,m,seed,level_max,size_1,size_2,size_3,size_4,size_5,X,Y,gamma_log_lb";

fn dag_csv_row(r: &DagTrialRow) -> CliResult<String> {
    let s = r.sizes_head;
    csv_line((
        r.n,
        r.m,
        r.seed,
        r.level_max,
        s[0],
        s[1],
        s[2],
        s[3],
        s[4],
        r.x,
        r.y,
        r.gamma_log_lb,
    ))
}

fn dag_line_x(line: &str, format: Format, expect: (u32, u32, u64)) -> Option<u64> {
    match format {
        Format::Csv => {
            let cols: Vec<&str> = line.split(',').collect();
            let ok = cols.len() == 12
                && cols[0] == expect.1.to_string()
                && cols[1] == expect.0.to_string()
                && cols[2] == expect.2.to_string();
            if ok {
                cols[9].parse().ok()
            } else {
                None
            }
        }
        _ => {
            let r: DagTrialRow = serde_json::from_str(line).ok()?;
            ((r.m, r.n, r.seed) == expect).then_some(r.x)
        }
    }
}

pub fn dag_cmd(ctx: &Ctx, a: &DagArgs) -> CliResult<u8> {
    check_model(&a.model)?;
    check_trials(a.trials, 1)?;
    if !(0.0..=1.0).contains(&a.eps) {
        return Err(CliError::usage("--eps must lie in [0, 1]"));
    }
    if a.k == 0 {
        return Err(CliError::usage("--k must be at least 1"));
    }
    let format = pick_format(a.output.format, &[Format::Csv, Format::Json], "dag")?;
    let sink = ctx.sink(&a.output)?;
    let (m, n, seed, mode) = (a.model.m, a.model.n, a.seed, WeightMode::from(a.model.mode));
    let header = (format == Format::Csv).then_some(DAG_CSV_HEADER);
    let (mut writer, done) = open_trials(&sink, a.resume, header)?;
    if done.len() > a.trials {
        return Err(resume_err(sink_path(&sink), "file holds more trials than requested"));
    }
    let mut xs = Vec::with_capacity(a.trials);
    for (i, line) in done.iter().enumerate() {
        match dag_line_x(line, format, (m, n, trial_seed(seed, i as u64))) {
            Some(x) => xs.push(x as f64),
            None => {
                return Err(resume_err(
                    sink_path(&sink),
                    format!("trial {i} does not match this run"),
                ))
            }
        }
    }
    let (eps, k) = (a.eps, a.k);
    stream_trials(
        a.trials as u64,
        done.len() as u64,
        &mut writer,
        |i| Ok(dag_trial(m, n, seed, i, eps, k, mode)?),
        |r| match format {
            Format::Csv => dag_csv_row(r),
            _ => serde_json::to_string(r).map_err(|e| CliError::Io(e.into())),
        },
        |r| xs.push(r.x as f64),
    )?;
    let x = MeanEstimate::from_samples(&xs);
    sink.summary(&format!(
        "m={m} n={n} trials={} eps={eps} k={k}: mean X = {:.3} +/- {:.3}",
        a.trials, x.mean, x.stderr
    ));
    Ok(0)
}

fn with_bits(record: &EntropyRecord, bits: bool) -> CliResult<Value> {
    let mut v = serde_json::to_value(record).map_err(|e| CliError::Io(e.into()))?;
    if bits {
        let obj = v.as_object_mut().expect("record is an object");
        obj.insert("value_bits".into(), json!(record.value_nats / std::f64::consts::LN_2));
        obj.insert("stderr_bits".into(), json!(record.stderr / std::f64::consts::LN_2));
    }
    Ok(v)
}

pub fn entropy_cmd(ctx: &Ctx, a: &EntropyArgs) -> CliResult<u8> {
    check_model(&a.model)?;
    for (flag, v) in [("--samples", a.samples), ("--bracket", a.bracket)] {
        if matches!(v, Some(s) if s < 2) {
            return Err(CliError::usage(format!("{flag} must be at least 2")));
        }
    }
    let format = if a.json { Some(Format::Json) } else { a.output.format };
    pick_format(format, &[Format::Json], "entropy")?;
    let json_out = a.json || a.output.output.is_some() || a.output.format.is_some();
    let sink = ctx.sink(&a.output)?;
    let (m, n, mode) = (a.model.m, a.model.n, WeightMode::from(a.model.mode));
    let unit = if a.bits { std::f64::consts::LN_2 } else { 1.0 };
    let unit_name = if a.bits { "bits" } else { "nats" };

    if let Some(samples) = a.bracket {
        let b = structural_entropy_estimate(m, n, samples, a.seed, mode)?;
        let mut v = json!({
            "m": m,
            "n": n,
            "samples": samples,
            "lower_nats": b.lower,
            "upper_nats": b.upper,
            "midpoint_nats": b.midpoint(),
            "width_nats": b.width(),
            "components": b.components,
        });
        if a.bits {
            let obj = v.as_object_mut().expect("object");
            obj.insert("lower_bits".into(), json!(b.lower / unit));
            obj.insert("upper_bits".into(), json!(b.upper / unit));
        }
        if json_out {
            sink.emit(&pretty(&v)?)?;
        }
        let line = format!(
            "H(S(G)) for m={m} n={n} lies in [{:.4}, {:.4}] {unit_name} ({samples} samples)",
            b.lower / unit,
            b.upper / unit
        );
        if json_out {
            sink.summary(&line);
        } else {
            println!("{line}");
        }
        return Ok(0);
    }

    let estimate: EntropyEstimate = if a.exact {
        exact_entropy(m, n, mode)?
    } else if let Some(samples) = a.samples {
        mc_entropy(m, n, samples, a.seed, mode)?
    } else {
        EntropyEstimate::asymptotic(m, n)
    };
    let enclosure = constant_a(m, A_TOL)?;
    let record = EntropyRecord::new(m, n, &estimate, &enclosure);
    let line = format!(
        "H(G) for m={m} n={n} = {:.6} +/- {:.6} {unit_name} ({}, A({m}) = {:.7})",
        record.value_nats / unit,
        record.stderr / unit,
        serde_json::to_value(record.method)
            .map_err(|e| CliError::Io(e.into()))?
            .as_str()
            .unwrap_or("?"),
        record.constant_a
    );
    if json_out {
        sink.emit(&pretty(&with_bits(&record, a.bits)?)?)?;
        sink.summary(&line);
    } else {
        println!("{line}");
    }
    Ok(0)
}

pub fn verify_cmd(ctx: &Ctx, a: &VerifyArgs) -> CliResult<u8> {
    if a.max_n == 0 || a.max_n > VERIFY_MAX_N {
        return Err(CliError::usage(format!("--max-n must lie in 1..={VERIFY_MAX_N}")));
    }
    pick_format(a.output.format, &[Format::Json], "verify")?;
    let sink = match &a.output.output {
        Some(_) => Some(ctx.sink(&a.output)?),
        None => None,
    };
    let report = run_verification(a.max_n)?;
    for s in &report.suites {
        let status = if s.passed() { "ok" } else { "FAILED" };
        println!("{status:>6}  {} ({} cases, {} failures)", s.name, s.cases, s.failures);
        if let Some(f) = &s.first_failure {
            println!("        first failure: {f}");
        }
    }
    if let Some(sink) = sink {
        sink.emit(&pretty(&report)?)?;
    }
    Ok(if report.passed() { 0 } else { 1 })
}

pub fn report_cmd(ctx: &Ctx, a: &ReportArgs) -> CliResult<u8> {
    check_model(&a.model)?;
    check_trials(a.trials, 2)?;
    pick_format(a.output.format, &[Format::Json], "report")?;
    let sink = ctx.sink(&a.output)?;
    let (m, n, seed, mode) = (a.model.m, a.model.n, a.seed, WeightMode::from(a.model.mode));

    let exact = symmetry_rate(m, n, a.trials, seed, mode, RateMethod::Exact)?;
    let cert = symmetry_rate(m, n, a.trials, seed, mode, RateMethod::Certificate)?;
    let h = mc_entropy(m, n, a.trials, seed, mode)?;
    let enclosure = constant_a(m, A_TOL)?;
    let bracket = structural_entropy_estimate(m, n, a.trials, seed, mode)?;
    let d_max = 20.max(m);
    let degrees = degree_law_table(m, n, d_max, a.trials, seed, mode)?;
    let dag: Vec<DagTrialRow> = (0..a.trials as u64)
        .into_par_iter()
        .map(|i| dag_trial(m, n, seed, i, 0.5, 2, mode))
        .collect::<Result<_, _>>()?;
    let level_max = MeanEstimate::from_samples(&dag.iter().map(|r| f64::from(r.level_max)).collect::<Vec<_>>());
    let x = MeanEstimate::from_samples(&dag.iter().map(|r| r.x as f64).collect::<Vec<_>>());

    let v = json!({
        "m": m,
        "n": n,
        "trials": a.trials,
        "seed": seed,
        "mode": mode_code(a.model.mode),
        "stream": STREAM_VERSION,
        "symmetry": { "exact": exact, "certificate": cert },
        "entropy": {
            "monte_carlo": EntropyRecord::new(m, n, &h, &enclosure),
            "asymptotic_nats": EntropyEstimate::asymptotic(m, n).value,
            "stated_linear_coefficient": stated_linear_coefficient(m),
            "rederived_linear_coefficient": rederived_linear_coefficient(m),
            "structural_bracket": {
                "lower_nats": bracket.lower,
                "upper_nats": bracket.upper,
                "components": bracket.components,
            },
        },
        "degrees": degrees,
        "levels": { "eps": 0.5, "k": 2, "mean_x": x, "mean_level_max": level_max },
    });
    sink.emit(&pretty(&v)?)?;
    sink.summary(&format!(
        "report m={m} n={n} trials={}: P(|Aut|>1) = {:.3}, H(G) = {:.3} nats, bracket [{:.3}, {:.3}]",
        a.trials, exact.rate, h.value, bracket.lower, bracket.upper
    ));
    Ok(0)
}
