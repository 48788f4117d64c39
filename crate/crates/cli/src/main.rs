//! Command-line harness for compound LDGM/LDPC code experiments:
//! construction and serialization, exact coset quantization, Monte Carlo
//! Wyner-Ziv / Gelfand-Pinsker batches, and the exponent / enumerator /
//! rate-region curves, all emitted as CSV.
//!
//! Every run is a pure function of the resolved configuration: identical
//! config and seed produce byte-identical output files regardless of the
//! parallelism level.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use ldgm_ldpc::analysis;
use ldgm_ldpc::codec::{CosetCodec, CosetConstraint, DEFAULT_CAP_LOG2};
use ldgm_ldpc::ensembles::{CompoundCode, DegreeParams, LdgmModel, LdpcModel};
use ldgm_ldpc::gf2::BinaryVector;
use ldgm_ldpc::protocols::{batch_to_csv, run_gp_batch, run_wz_batch, ChannelSpec, DecoderKind};

#[derive(Parser)]
#[command(
    name = "ldgm-ldpc",
    about = "Compound LDGM/LDPC codes: construction, coset coding, Wyner-Ziv and Gelfand-Pinsker experiments, exponent and rate curves",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a compound code and serialize it to the text format
    Construct(Opts),
    /// Print the rate table of a constructed or loaded code
    Rates(Opts),
    /// Quantize a source word onto the H1-constrained codebook
    Quantize(Opts),
    /// Monte Carlo Wyner-Ziv trials (CSV of trial records plus summary)
    WzRun(Opts),
    /// Monte Carlo Gelfand-Pinsker trials (CSV plus summary)
    GpRun(Opts),
    /// Error-exponent curves F(v) and its two terms
    Exponent(Opts),
    /// Finite-m and asymptotic weight-enumerator curves
    Enumerator(Opts),
    /// Wyner-Ziv and information-embedding rate curves with envelopes
    RateCurves(Opts),
    /// Check every module precondition; violations are printed one per line
    Validate(Opts),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DecoderArg {
    Ml,
    Threshold,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LdpcModelArg {
    Socket,
    Layered,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LdgmModelArg {
    WithReplacement,
    WithoutReplacement,
}

/// Flags shared by every subcommand; any flag overrides the matching
/// config-file field.
#[derive(Args)]
struct Opts {
    /// JSON config file; flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// Load a serialized code instead of constructing one
    #[arg(long)]
    code: Option<PathBuf>,
    /// Output path (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Base seed: code construction uses it directly, trial i uses base_seed + i
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    k1: Option<usize>,
    #[arg(long)]
    k2: Option<usize>,
    #[arg(long)]
    gamma_t: Option<u32>,
    /// LDPC variable degree; 0 selects "no lower code" in analysis modes
    #[arg(long)]
    gamma_v: Option<u32>,
    #[arg(long)]
    gamma_c: Option<u32>,
    /// Channel flip probability
    #[arg(long)]
    p: Option<f64>,
    /// Side-information noise (defaults to p)
    #[arg(long)]
    delta: Option<f64>,
    /// Design distortion D (defaults to the code's design value h^-1(1 - r1))
    #[arg(long)]
    d: Option<f64>,
    /// Embedding weight budget w (defaults to h^-1(1 - r_com))
    #[arg(long)]
    w: Option<f64>,
    /// Top rate R(G) for exponent mode (defaults to m/n when dims given)
    #[arg(long)]
    rg: Option<f64>,
    #[arg(long)]
    grid_step: Option<f64>,
    #[arg(long, value_enum)]
    decoder: Option<DecoderArg>,
    /// log2 of the candidate cap for coset searches
    #[arg(long)]
    cap: Option<u32>,
    #[arg(long)]
    resample_limit: Option<usize>,
    #[arg(long, value_enum)]
    ldpc_model: Option<LdpcModelArg>,
    #[arg(long, value_enum)]
    ldgm_model: Option<LdgmModelArg>,
    /// Bit-string file ("0101...") used as the quantize source
    #[arg(long)]
    input: Option<PathBuf>,
}

/// The JSON config schema. All fields are optional; flags win.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    mode: Option<String>,
    n: Option<usize>,
    m: Option<usize>,
    k1: Option<usize>,
    k2: Option<usize>,
    gamma_t: Option<u32>,
    gamma_v: Option<u32>,
    gamma_c: Option<u32>,
    p: Option<f64>,
    delta: Option<f64>,
    d: Option<f64>,
    w: Option<f64>,
    rg: Option<f64>,
    trials: Option<usize>,
    base_seed: Option<u64>,
    out: Option<PathBuf>,
    grid_step: Option<f64>,
    decoder: Option<String>,
    cap_log2: Option<u32>,
    resample_limit: Option<usize>,
    ldpc_model: Option<String>,
    ldgm_model: Option<String>,
    code: Option<PathBuf>,
    input: Option<PathBuf>,
}

/// Fully resolved experiment configuration (flags over config over
/// defaults).
#[derive(Debug, Clone)]
struct Resolved {
    n: Option<usize>,
    m: Option<usize>,
    k1: Option<usize>,
    k2: Option<usize>,
    gamma_t: u32,
    gamma_v: Option<u32>,
    gamma_c: Option<u32>,
    p: f64,
    delta: Option<f64>,
    d: Option<f64>,
    w: Option<f64>,
    rg: Option<f64>,
    trials: usize,
    base_seed: u64,
    out: Option<PathBuf>,
    grid_step: f64,
    decoder: DecoderKind,
    cap_log2: u32,
    resample_limit: usize,
    ldpc_model: LdpcModel,
    ldgm_model: LdgmModel,
    code_path: Option<PathBuf>,
    input: Option<PathBuf>,
}

fn resolve(opts: &Opts, expected_mode: Option<&str>) -> Result<Resolved> {
    let file: FileConfig = match &opts.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            serde_json::from_str(&text)
                .with_context(|| format!("parsing config {}", path.display()))?
        }
        None => FileConfig::default(),
    };
    if let (Some(expected), Some(mode)) = (expected_mode, file.mode.as_deref()) {
        if expected != mode {
            bail!("config mode \"{mode}\" does not match the {expected} subcommand");
        }
    }
    let decoder = match (&opts.decoder, file.decoder.as_deref()) {
        (Some(DecoderArg::Ml), _) => DecoderKind::Ml,
        (Some(DecoderArg::Threshold), _) => DecoderKind::Threshold,
        (None, Some("ml")) | (None, None) => DecoderKind::Ml,
        (None, Some("threshold")) => DecoderKind::Threshold,
        (None, Some(other)) => bail!("unknown decoder \"{other}\" (use ml or threshold)"),
    };
    let ldpc_model = match (&opts.ldpc_model, file.ldpc_model.as_deref()) {
        (Some(LdpcModelArg::Socket), _) => LdpcModel::SocketPermutation,
        (Some(LdpcModelArg::Layered), _) => LdpcModel::GallagerLayered,
        (None, Some("socket")) | (None, None) => LdpcModel::SocketPermutation,
        (None, Some("layered")) => LdpcModel::GallagerLayered,
        (None, Some(other)) => bail!("unknown ldpc_model \"{other}\" (use socket or layered)"),
    };
    let ldgm_model = match (&opts.ldgm_model, file.ldgm_model.as_deref()) {
        (Some(LdgmModelArg::WithReplacement), _) => LdgmModel::WithReplacement,
        (Some(LdgmModelArg::WithoutReplacement), _) => LdgmModel::WithoutReplacement,
        (None, Some("with_replacement")) | (None, None) => LdgmModel::WithReplacement,
        (None, Some("without_replacement")) => LdgmModel::WithoutReplacement,
        (None, Some(other)) => {
            bail!("unknown ldgm_model \"{other}\" (use with_replacement or without_replacement)")
        }
    };
    Ok(Resolved {
        n: opts.n.or(file.n),
        m: opts.m.or(file.m),
        k1: opts.k1.or(file.k1),
        k2: opts.k2.or(file.k2),
        gamma_t: opts.gamma_t.or(file.gamma_t).unwrap_or(4),
        gamma_v: opts.gamma_v.or(file.gamma_v),
        gamma_c: opts.gamma_c.or(file.gamma_c),
        p: opts.p.or(file.p).unwrap_or(0.1),
        delta: opts.delta.or(file.delta),
        d: opts.d.or(file.d),
        w: opts.w.or(file.w),
        rg: opts.rg.or(file.rg),
        trials: opts.trials.or(file.trials).unwrap_or(100),
        base_seed: opts.seed.or(file.base_seed).unwrap_or(0),
        out: opts.out.clone().or(file.out),
        grid_step: opts.grid_step.or(file.grid_step).unwrap_or(1e-3),
        decoder,
        cap_log2: opts.cap.or(file.cap_log2).unwrap_or(DEFAULT_CAP_LOG2),
        resample_limit: opts.resample_limit.or(file.resample_limit).unwrap_or(16),
        ldpc_model,
        ldgm_model,
        code_path: opts.code.clone().or(file.code),
        input: opts.input.clone().or(file.input),
    })
}

impl Resolved {
    fn dims(&self) -> Result<(usize, usize, usize, usize)> {
        match (self.n, self.m, self.k1, self.k2) {
            (Some(n), Some(m), Some(k1), Some(k2)) => Ok((n, m, k1, k2)),
            _ => bail!("code dimensions required: --n --m --k1 --k2 (or config fields)"),
        }
    }

    fn degrees(&self) -> Result<DegreeParams> {
        let (Some(gv), Some(gc)) = (self.gamma_v, self.gamma_c) else {
            bail!("LDPC degrees required: --gamma-v --gamma-c (or config fields)");
        };
        Ok(DegreeParams::new(self.gamma_t, gv, gc)?)
    }

    /// Loads the code from `--code` or constructs it from the parameters.
    fn obtain_code(&self) -> Result<CompoundCode> {
        if let Some(path) = &self.code_path {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading code {}", path.display()))?;
            return Ok(CompoundCode::from_text(&text)?);
        }
        let (n, m, k1, k2) = self.dims()?;
        Ok(CompoundCode::build_with_models(
            n,
            m,
            k1,
            k2,
            self.degrees()?,
            self.base_seed,
            self.resample_limit,
            self.ldgm_model,
            self.ldpc_model,
        )?)
    }

    /// Channel spec with design-value defaults: D solves h(D) = 1 - r1,
    /// w solves h(w) = 1 - r_com.
    fn channel_spec(&self, code: &CompoundCode) -> Result<ChannelSpec> {
        let rates = code.rates();
        let design = |rate: f64| -> Result<f64> {
            let target = (1.0 - rate).clamp(0.0, 1.0);
            Ok(analysis::inverse_binary_entropy(target)?)
        };
        let d = match self.d {
            Some(d) => d,
            None => design(rates.r1)?,
        };
        let w = match self.w {
            Some(w) => w,
            None => design(rates.r_com)?,
        };
        let delta = self.delta.unwrap_or(self.p);
        Ok(ChannelSpec::with_delta(self.p, delta, d, w)?)
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, content).with_context(|| format!("writing {}", path.display()))?;
        }
        None => print!("{content}"),
    }
    Ok(())
}

fn read_bit_file(path: &Path, expected_len: usize) -> Result<BinaryVector> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading input {}", path.display()))?;
    let trimmed: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let v: BinaryVector = trimmed
        .parse()
        .map_err(|_| anyhow::anyhow!("input must be a 0/1 string"))?;
    if v.len() != expected_len {
        bail!(
            "input has {} bits, code expects n = {expected_len}",
            v.len()
        );
    }
    Ok(v)
}

fn cmd_construct(cfg: &Resolved) -> Result<()> {
    let code = cfg.obtain_code()?;
    emit(&cfg.out, &code.to_text())
}

fn cmd_rates(cfg: &Resolved) -> Result<()> {
    let code = cfg.obtain_code()?;
    let r = code.rates();
    let mut out = String::from("r_g,r_h,r_com,r1,r2,r_trans,effective_r_com\n");
    writeln!(
        out,
        "{},{},{},{},{},{},{}",
        r.r_g, r.r_h, r.r_com, r.r1, r.r2, r.r_trans, r.effective_r_com
    )?;
    emit(&cfg.out, &out)
}

fn cmd_quantize(cfg: &Resolved) -> Result<()> {
    let code = cfg.obtain_code()?;
    let codec = CosetCodec::new(&code).with_cap_log2(cfg.cap_log2);
    let s = match &cfg.input {
        Some(path) => read_bit_file(path, code.n())?,
        None => BinaryVector::random_from_seed(code.n(), cfg.base_seed),
    };
    let constraint = CosetConstraint::h1_zero(code.k1());
    let (z_hat, distortion) = codec.quantize(&s, &constraint)?;
    let mut out = String::from("field,value\n");
    writeln!(out, "n,{}", code.n())?;
    writeln!(out, "m,{}", code.m())?;
    writeln!(out, "source,{s}")?;
    writeln!(out, "z,{z_hat}")?;
    writeln!(out, "reconstruction,{}", code.encode_top(&z_hat))?;
    writeln!(out, "distortion,{distortion}")?;
    writeln!(
        out,
        "distortion_fraction,{}",
        distortion as f64 / code.n() as f64
    )?;
    writeln!(out, "syndrome,{}", code.h2().right_mul(&z_hat)?)?;
    emit(&cfg.out, &out)
}

fn cmd_wz_run(cfg: &Resolved) -> Result<()> {
    let code = cfg.obtain_code()?;
    let codec = CosetCodec::new(&code).with_cap_log2(cfg.cap_log2);
    let spec = cfg.channel_spec(&code)?;
    let records = run_wz_batch(&codec, &spec, cfg.decoder, cfg.base_seed, cfg.trials)?;
    emit(&cfg.out, &batch_to_csv(&records))
}

fn cmd_gp_run(cfg: &Resolved) -> Result<()> {
    let code = cfg.obtain_code()?;
    let codec = CosetCodec::new(&code).with_cap_log2(cfg.cap_log2);
    let spec = cfg.channel_spec(&code)?;
    let records = run_gp_batch(&codec, &spec, cfg.decoder, cfg.base_seed, cfg.trials)?;
    emit(&cfg.out, &batch_to_csv(&records))
}

/// Exponent-mode parameters: r_g explicit or m/n; gamma_v = 0 (or absent
/// together with gamma_c) selects the LDGM-only enumerator A = h.
fn exponent_params(cfg: &Resolved) -> Result<(f64, u32, u32)> {
    let r_g = match (cfg.rg, cfg.n, cfg.m) {
        (Some(rg), _, _) => rg,
        (None, Some(n), Some(m)) => m as f64 / n as f64,
        _ => bail!("exponent mode needs --rg (or --n and --m)"),
    };
    let (gv, gc) = match (cfg.gamma_v, cfg.gamma_c) {
        (Some(0), _) | (None, None) => (0, 0),
        (Some(gv), Some(gc)) => (gv, gc),
        _ => bail!("--gamma-v and --gamma-c must be given together"),
    };
    Ok((r_g, gv, gc))
}

fn cmd_exponent(cfg: &Resolved) -> Result<()> {
    let (r_g, gv, gc) = exponent_params(cfg)?;
    let curves = analysis::exponent_curves(r_g, cfg.gamma_t, gv, gc, cfg.p, cfg.grid_step)?;
    let report = analysis::check_channel_condition(r_g, cfg.gamma_t, gv, gc, cfg.p, cfg.grid_step)?;
    let mut out = String::from("v,value,label\n");
    for curve in &curves {
        curve.write_csv_rows(&mut out);
    }
    eprintln!(
        "condition satisfied: {} (max F = {} at v = {})",
        report.satisfied, report.worst_value, report.worst_v
    );
    emit(&cfg.out, &out)
}

fn cmd_enumerator(cfg: &Resolved) -> Result<()> {
    let Some(m) = cfg.m else {
        bail!("enumerator mode needs --m");
    };
    let (Some(gv), Some(gc)) = (cfg.gamma_v, cfg.gamma_c) else {
        bail!("enumerator mode needs --gamma-v and --gamma-c");
    };
    let finite = analysis::finite_enumerator_values(m, gv, gc, m)?;
    let mut out = String::from("v,value,label\n");
    for (l, value) in finite.iter().enumerate() {
        writeln!(out, "{},{},finite_m{}", l as f64 / m as f64, value, m)?;
    }
    for v in analysis::v_grid(cfg.grid_step) {
        let a = analysis::asymptotic_weight_enumerator(gv, gc, v)?;
        writeln!(out, "{v},{a},asymptotic")?;
    }
    emit(&cfg.out, &out)
}

fn cmd_rate_curves(cfg: &Resolved) -> Result<()> {
    let grid = analysis::v_grid(cfg.grid_step);
    let mut out = String::from("v,value,label\n");
    for &d in &grid {
        writeln!(out, "{d},{},wz_raw", analysis::wz_rate_raw(cfg.p, d)?)?;
    }
    for pt in analysis::wz_rate_curve(cfg.p, &grid)? {
        writeln!(out, "{},{},wz_envelope", pt.x, pt.rate)?;
    }
    let mut ie_grid = vec![0.0];
    ie_grid.extend_from_slice(&grid);
    for &w in &ie_grid {
        writeln!(out, "{w},{},ie_raw", analysis::ie_capacity_raw(cfg.p, w)?)?;
    }
    for pt in analysis::ie_capacity_curve(cfg.p, &ie_grid)? {
        writeln!(out, "{},{},ie_envelope", pt.x, pt.rate)?;
    }
    emit(&cfg.out, &out)
}

/// Collects every precondition violation as data; an empty list means the
/// configuration satisfies all module preconditions.
fn collect_violations(cfg: &Resolved) -> Vec<String> {
    let mut violations = Vec::new();
    if cfg.trials < 1 {
        violations.push("trials must be at least 1".to_string());
    }
    if !(cfg.grid_step > 0.0 && cfg.grid_step <= 0.5) {
        violations.push(format!("grid_step {} outside (0, 1/2]", cfg.grid_step));
    }
    for (name, value) in [
        ("p", Some(cfg.p)),
        ("delta", cfg.delta),
        ("D", cfg.d),
        ("w", cfg.w),
    ] {
        if let Some(v) = value {
            if !(0.0..0.5).contains(&v) {
                violations.push(format!("{name} = {v} outside [0, 1/2)"));
            }
        }
    }
    if cfg.gamma_t < 1 {
        violations.push("gamma_t must be at least 1".to_string());
    }
    if let (Some(gv), Some(gc)) = (cfg.gamma_v, cfg.gamma_c) {
        if gv >= 1 {
            if gc == 0 || gc % 2 != 0 {
                violations.push(format!("gamma_c = {gc} must be positive and even"));
            }
            if gv >= gc && gc > 0 {
                violations.push(format!(
                    "gamma_v = {gv} must be smaller than gamma_c = {gc}"
                ));
            }
        }
        if let (Some(m), Some(k1), Some(k2)) = (cfg.m, cfg.k1, cfg.k2) {
            if m * gv as usize != (k1 + k2) * gc as usize {
                violations.push(format!(
                    "socket mismatch: m*gamma_v = {m}*{gv} must equal (k1+k2)*gamma_c = {}*{gc}",
                    k1 + k2
                ));
            }
            if cfg.ldpc_model == LdpcModel::GallagerLayered && gc > 0 && m % gc as usize != 0 {
                violations.push(format!(
                    "layered model needs gamma_c = {gc} to divide m = {m}"
                ));
            }
        }
    }
    if let (Some(m), Some(k1)) = (cfg.m, cfg.k1) {
        if m.saturating_sub(k1) > cfg.cap_log2 as usize {
            violations.push(format!(
                "SearchSpaceTooLarge: m - k1 = {} free bits exceed the 2^{} candidate cap",
                m - k1,
                cfg.cap_log2
            ));
        }
    }
    violations
}

fn cmd_validate(cfg: &Resolved) -> Result<()> {
    let violations = collect_violations(cfg);
    let mut out = String::new();
    for v in &violations {
        writeln!(out, "{v}")?;
    }
    emit(&cfg.out, &out)?;
    if violations.is_empty() {
        eprintln!("ok");
        Ok(())
    } else {
        eprintln!("{} violation(s)", violations.len());
        std::process::exit(1);
    }
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Construct(o) => cmd_construct(&resolve(o, Some("construct"))?),
        Command::Rates(o) => cmd_rates(&resolve(o, None)?),
        Command::Quantize(o) => cmd_quantize(&resolve(o, None)?),
        Command::WzRun(o) => cmd_wz_run(&resolve(o, Some("wz"))?),
        Command::GpRun(o) => cmd_gp_run(&resolve(o, Some("gp"))?),
        Command::Exponent(o) => cmd_exponent(&resolve(o, Some("exponent"))?),
        Command::Enumerator(o) => cmd_enumerator(&resolve(o, Some("enumerator"))?),
        Command::RateCurves(o) => cmd_rate_curves(&resolve(o, Some("rates"))?),
        Command::Validate(o) => cmd_validate(&resolve(o, None)?),
    }
}
