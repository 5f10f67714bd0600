//! Command implementations behind the `zeroerr` binary.
//!
//! Channels, boxes and protocols are given either as JSON files or as named
//! families: `nm:3`, `mm:3`, `identity:4` for channels; `pm:3`, `extremal:4,2`,
//! `pr`, `rtilde:3`, `cglmp`, `cglmp-quantum`, `i3322-table`, `i3322-quantum`,
//! `trivial`, `uniform:2,2,3,3` for boxes; `nm-protocol:3`, `mm-protocol:3`
//! for protocols. A `^n` suffix takes the n-fold tensor power, e.g. `nm:2^2`.

use std::path::Path;
use std::str::FromStr;

use serde_json::json;
use thiserror::Error;

use crate::behaviors::{
    degenerate_box, extremal_box, pr_box, rtilde_box, Behavior, BehaviorError, Scenario,
};
use crate::channels::{m_channel, n_channel, Channel, ChannelError};
use crate::graphs::{capacity_of_graph, confusability_graph, GraphError};
use crate::io::{
    behavior_csv, channel_csv, quantum_from_json, read_behavior, read_channel, read_file, render,
    write_behavior, write_channel, write_file, AnyBehavior, AnyChannel, IoError, Number, SuccessRecord,
};
use crate::protocols::{
    best_unassisted_success, exact_success, exhaustive_assisted_search, monte_carlo_success,
    theorem2_protocol, theorem3_protocol, AssistedProtocol, MessagePrior, ProtocolError,
};
use crate::quantum::{
    behavior_from_quantum, i3322_table, make_cglmp_behavior, make_cglmp_model, make_i3322_model, QuantumError,
};
use crate::scalar::{format_sig, Rational, Scalar};
use crate::verify::verify_paper;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error("check failed")]
    CheckFailed,
}

impl CliError {
    /// 1 for failed checks, 2 for bad arguments or incompatible inputs,
    /// 3 for unreadable, unwritable or malformed files.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::CheckFailed => 1,
            CliError::Usage(_) => 2,
            CliError::Io(e) => match e {
                IoError::Io { .. } | IoError::Json(_) | IoError::Csv(_) | IoError::Format(_) => 3,
                _ => 2,
            },
        }
    }
}

macro_rules! usage_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Usage(e.to_string())
            }
        }
    )*};
}

usage_from!(ChannelError, BehaviorError, ProtocolError, GraphError, QuantumError);

/// Rendering switches shared by every command.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OutputOptions {
    /// Decimal output with 12 significant digits instead of `num/den`.
    pub float: bool,
    pub json: bool,
    pub csv: bool,
}

/// What a command produced: text for stdout and optional notes for stderr.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CommandOutput {
    pub stdout: String,
    pub stderr: String,
    /// False when a check ran and failed; the binary then exits with 1.
    pub ok: bool,
}

impl CommandOutput {
    fn text(stdout: String) -> Self {
        CommandOutput { stdout, stderr: String::new(), ok: true }
    }

    fn note(mut self, s: impl AsRef<str>) -> Self {
        self.stderr.push_str(s.as_ref());
        self.stderr.push('\n');
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Nm,
    Mm,
    Identity,
    Custom,
}

impl FromStr for Family {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.to_ascii_lowercase().as_str() {
            "nm" => Ok(Family::Nm),
            "mm" => Ok(Family::Mm),
            "identity" => Ok(Family::Identity),
            "custom" => Ok(Family::Custom),
            _ => Err(CliError::Usage(format!("unknown channel family `{s}` (Nm, Mm, identity, custom)"))),
        }
    }
}

pub const MAX_FAMILY_M: usize = 64;
pub const MAX_IDENTITY: usize = 256;

fn check_m(m: Option<usize>, min: usize, max: usize) -> Result<usize, CliError> {
    let m = m.ok_or_else(|| CliError::Usage("--m is required for this family".into()))?;
    if m < min || m > max {
        return Err(CliError::Usage(format!("m must lie in {min}..={max}, got {m}")));
    }
    Ok(m)
}

pub fn build_channel(family: Family, m: Option<usize>, from: Option<&Path>) -> Result<AnyChannel, CliError> {
    Ok(match family {
        Family::Nm => AnyChannel::Rational(n_channel(check_m(m, 2, MAX_FAMILY_M)?)?),
        Family::Mm => AnyChannel::Rational(m_channel(check_m(m, 2, MAX_FAMILY_M)?)?),
        Family::Identity => AnyChannel::Rational(Channel::identity(check_m(m, 1, MAX_IDENTITY)?)),
        Family::Custom => {
            let path = from.ok_or_else(|| CliError::Usage("custom channels need --from FILE".into()))?;
            read_channel(&read_file(path)?)?
        }
    })
}

/// Existing paths, and anything with a path separator or a `.json` suffix,
/// are read as files so that a missing file is an I/O error.
fn looks_like_file(spec: &str) -> bool {
    Path::new(spec).exists() || spec.contains(std::path::MAIN_SEPARATOR) || spec.ends_with(".json")
}

/// Splits `name:args^power`.
fn split_spec(spec: &str) -> Result<(String, Vec<usize>, u32), CliError> {
    let bad = || CliError::Usage(format!("cannot parse `{spec}`"));
    let (body, power) = match spec.split_once('^') {
        Some((b, p)) => (b, p.parse::<u32>().map_err(|_| bad())?),
        None => (spec, 1),
    };
    if power == 0 || power > 4 {
        return Err(CliError::Usage(format!("tensor power must lie in 1..=4, got {power}")));
    }
    let (name, args) = match body.split_once(':') {
        Some((n, a)) => (n, a.split(',').map(|v| v.trim().parse::<usize>().map_err(|_| bad())).collect::<Result<_, _>>()?),
        None => (body, Vec::new()),
    };
    Ok((name.to_ascii_lowercase(), args, power))
}

fn arg(args: &[usize], i: usize, what: &str) -> Result<usize, CliError> {
    args.get(i).copied().ok_or_else(|| CliError::Usage(format!("missing {what}")))
}

fn power<T: Clone>(x: T, n: u32, mul: impl Fn(&T, &T) -> T) -> T {
    (1..n).fold(x.clone(), |acc, _| mul(&acc, &x))
}

/// A channel from a file or a family name.
pub fn resolve_channel(spec: &str) -> Result<AnyChannel, CliError> {
    if looks_like_file(spec) {
        return Ok(read_channel(&read_file(Path::new(spec))?)?);
    }
    let (name, args, n) = split_spec(spec)?;
    let family = match name.as_str() {
        "nm" => Family::Nm,
        "mm" => Family::Mm,
        "identity" => Family::Identity,
        _ => return Err(CliError::Usage(format!("`{spec}` is neither a file nor a channel family"))),
    };
    let AnyChannel::Rational(c) = build_channel(family, Some(arg(&args, 0, "size")?), None)? else {
        unreachable!("named families are exact")
    };
    let too_big = |k: usize, max: usize| k.checked_pow(n).is_none_or(|v| v > max);
    if too_big(c.input_count(), 4096) || too_big(c.output_count(), 1 << 16) {
        return Err(CliError::Usage(format!("tensor power of `{spec}` is too large")));
    }
    Ok(AnyChannel::Rational(power(c, n, |a, b| a.tensor(b))))
}

/// A box from a file or a family name.
pub fn resolve_box(spec: &str) -> Result<AnyBehavior, CliError> {
    if looks_like_file(spec) {
        return Ok(read_behavior(&read_file(Path::new(spec))?)?);
    }
    let (name, args, n) = split_spec(spec)?;
    if let Some(v) = args.iter().find(|&&v| v > MAX_FAMILY_M) {
        return Err(CliError::Usage(format!("box parameter {v} exceeds {MAX_FAMILY_M}")));
    }
    let b = match name.as_str() {
        "pm" => AnyBehavior::Rational(extremal_box(arg(&args, 0, "m")?, arg(&args, 0, "m")?)?),
        "extremal" => AnyBehavior::Rational(extremal_box(arg(&args, 0, "m")?, arg(&args, 1, "k")?)?),
        "pr" => AnyBehavior::Rational(pr_box()),
        "rtilde" => AnyBehavior::Rational(rtilde_box(arg(&args, 0, "m")?)?),
        "trivial" => AnyBehavior::Rational(degenerate_box()),
        "uniform" => {
            let s = Scenario::new(arg(&args, 0, "x")?, arg(&args, 1, "y")?, arg(&args, 2, "a")?, arg(&args, 3, "b")?)?;
            AnyBehavior::Rational(Behavior::uniform(s))
        }
        "i3322-table" => AnyBehavior::Rational(i3322_table()),
        "cglmp" => AnyBehavior::Float(make_cglmp_behavior()),
        "i3322-quantum" => AnyBehavior::Float(behavior_from_quantum(&make_i3322_model())?),
        "cglmp-quantum" => AnyBehavior::Float(behavior_from_quantum(&make_cglmp_model())?),
        _ => return Err(CliError::Usage(format!("`{spec}` is neither a file nor a box family"))),
    };
    if b.scenario().len().checked_pow(n).is_none_or(|v| v > 1 << 20) {
        return Err(CliError::Usage(format!("tensor power of `{spec}` is too large")));
    }
    Ok(match b {
        AnyBehavior::Rational(b) => AnyBehavior::Rational(power(b, n, |a, b| a.tensor(b))),
        AnyBehavior::Float(b) => AnyBehavior::Float(power(b, n, |a, b| a.tensor(b))),
    })
}

/// A protocol from a file or a builder name.
pub fn resolve_protocol(spec: &str) -> Result<AssistedProtocol, CliError> {
    if looks_like_file(spec) {
        let text = read_file(Path::new(spec))?;
        return Ok(serde_json::from_str(&text).map_err(IoError::from)?);
    }
    let (name, args, n) = split_spec(spec)?;
    let p = match name.as_str() {
        "nm-protocol" => theorem2_protocol(arg(&args, 0, "m")?)?,
        "mm-protocol" => theorem3_protocol(arg(&args, 0, "m")?)?,
        _ => return Err(CliError::Usage(format!("`{spec}` is neither a file nor a protocol builder"))),
    };
    Ok(power(p, n, |a, b| a.product(b)))
}

fn emit(out: Option<&Path>, contents: String, summary: String) -> Result<CommandOutput, CliError> {
    match out {
        Some(path) => {
            write_file(path, &contents)?;
            Ok(CommandOutput::text(summary))
        }
        None => Ok(CommandOutput::text(contents).note(summary.trim_end())),
    }
}

pub fn cmd_channel(
    family: Family,
    m: Option<usize>,
    from: Option<&Path>,
    out: Option<&Path>,
    opts: OutputOptions,
) -> Result<CommandOutput, CliError> {
    let channel = build_channel(family, m, from)?;
    let (contents, inputs, outputs) = match &channel {
        AnyChannel::Rational(c) => (channel_text(c, opts)?, c.input_count(), c.output_count()),
        AnyChannel::Float(c) => (channel_text(c, opts)?, c.input_count(), c.output_count()),
    };
    emit(out, contents, format!("inputs: {inputs}\noutputs: {outputs}\n"))
}

fn channel_text<T: Scalar>(c: &Channel<T>, opts: OutputOptions) -> Result<String, CliError> {
    Ok(if opts.csv { channel_csv(c, opts.float)? } else { write_channel(c) + "\n" })
}

fn behavior_text<T: Scalar>(b: &Behavior<T>, opts: OutputOptions) -> Result<String, CliError> {
    Ok(if opts.csv { behavior_csv(b, opts.float)? } else { write_behavior(b) + "\n" })
}

/// Writes a named or file-backed box, or one computed from a quantum model.
pub fn cmd_behavior(
    spec: Option<&str>,
    quantum: Option<&Path>,
    out: Option<&Path>,
    opts: OutputOptions,
) -> Result<CommandOutput, CliError> {
    let b = match (spec, quantum) {
        (Some(s), None) => resolve_box(s)?,
        (None, Some(path)) => {
            let json = serde_json::from_str(&read_file(path)?).map_err(IoError::from)?;
            AnyBehavior::Float(behavior_from_quantum(&quantum_from_json(&json)?)?)
        }
        _ => return Err(CliError::Usage("give either a box or --quantum FILE".into())),
    };
    let (contents, ns, dev) = match &b {
        AnyBehavior::Rational(b) => (behavior_text(b, opts)?, b.is_no_signaling(0.0).0, 0.0),
        AnyBehavior::Float(b) => {
            let (ns, dev) = b.is_no_signaling(1e-9);
            (behavior_text(b, opts)?, ns, dev)
        }
    };
    let s = b.scenario();
    let summary = format!(
        "scenario: x={} y={} a={} b={}\nmode: {}\nno-signaling: {ns} (max marginal deviation {})\n",
        s.x_card,
        s.y_card,
        s.a_card,
        s.b_card,
        b.mode(),
        format_sig(dev, 3)
    );
    emit(out, contents, summary)
}

pub fn cmd_capacity(channel: &str, opts: OutputOptions) -> Result<CommandOutput, CliError> {
    let c = resolve_channel(channel)?;
    let g = match &c {
        AnyChannel::Rational(c) => confusability_graph(c),
        AnyChannel::Float(c) => confusability_graph(c),
    };
    let r = capacity_of_graph(&g)?;
    let bits = match r.exact_bits {
        Some(b) if !opts.float => b.to_string(),
        _ => format_sig(r.bits, 12),
    };
    let stdout = if opts.json {
        serde_json::to_string_pretty(&r).map_err(IoError::from)? + "\n"
    } else {
        format!(
            "vertices: {}\nalpha: {}\ncapacity_bits: {bits}\ncomplete: {}\n",
            r.vertices, r.alpha, r.complete
        )
    };
    Ok(CommandOutput::text(stdout))
}

pub fn cmd_graph(channel: &str, dimacs: bool, out: Option<&Path>) -> Result<CommandOutput, CliError> {
    let c = resolve_channel(channel)?;
    let g = match &c {
        AnyChannel::Rational(c) => confusability_graph(c),
        AnyChannel::Float(c) => confusability_graph(c),
    };
    let contents = if dimacs {
        g.to_dimacs()
    } else {
        serde_json::to_string_pretty(&g.to_json()).map_err(IoError::from)? + "\n"
    };
    emit(out, contents, format!("vertices: {}\nedges: {}\n", g.vertex_count(), g.edge_count()))
}

/// How `cmd_success` evaluates a protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Evaluation {
    Exact,
    MonteCarlo { trials: u64, seed: u64 },
}

/// Rational inputs stay exact; if either side is float both run in float.
enum Pair {
    Rational(Channel<Rational>, Behavior<Rational>),
    Float(Channel<f64>, Behavior<f64>),
}

fn pair(c: AnyChannel, b: AnyBehavior) -> (Pair, bool) {
    match (c, b) {
        (AnyChannel::Rational(c), AnyBehavior::Rational(b)) => (Pair::Rational(c, b), false),
        (AnyChannel::Float(c), AnyBehavior::Float(b)) => (Pair::Float(c, b), false),
        (c, b) => (Pair::Float(c.to_float(), b.to_float()), true),
    }
}

pub fn cmd_success(
    channel: &str,
    boxb: &str,
    protocol: &str,
    eval: Evaluation,
    opts: OutputOptions,
) -> Result<CommandOutput, CliError> {
    let p = resolve_protocol(protocol)?;
    let (pair, promoted) = pair(resolve_channel(channel)?, resolve_box(boxb)?);
    let k = p.messages();
    let mut out = match eval {
        Evaluation::Exact => {
            let record = match &pair {
                Pair::Rational(c, b) => SuccessRecord::of(&exact_success(c, b, &p, &MessagePrior::uniform(k))?, opts.float),
                Pair::Float(c, b) => SuccessRecord::of(&exact_success(c, b, &p, &MessagePrior::uniform(k))?, opts.float),
            };
            let stdout = if opts.json {
                serde_json::to_string_pretty(&record).map_err(IoError::from)? + "\n"
            } else {
                let s = match &record.success {
                    Number::Text(s) => s.clone(),
                    Number::Float(f) => format_sig(*f, 12),
                };
                format!(
                    "success: {s}\nzero_error: {}\nmode: {}\nbranches: {} ({} failing)\n",
                    record.zero_error, record.mode, record.branches, record.failing_branches
                )
            };
            CommandOutput::text(stdout)
        }
        Evaluation::MonteCarlo { trials, seed } => {
            let est = match &pair {
                Pair::Rational(c, b) => monte_carlo_success(c, b, &p, &MessagePrior::uniform(k), trials, seed)?,
                Pair::Float(c, b) => monte_carlo_success(c, b, &p, &MessagePrior::uniform(k), trials, seed)?,
            };
            let stdout = if opts.json {
                serde_json::to_string_pretty(&json!({
                    "estimate": est.estimate,
                    "std_error": est.std_error,
                    "trials": est.trials,
                    "successes": est.successes,
                    "seed": seed,
                    "zero_error": serde_json::Value::Null,
                }))
                .map_err(IoError::from)?
                    + "\n"
            } else {
                format!(
                    "success: {} +/- {}\ntrials: {}\nsuccesses: {}\nseed: {seed}\n",
                    format_sig(est.estimate, 12),
                    format_sig(est.std_error, 12),
                    est.trials,
                    est.successes
                )
            };
            CommandOutput::text(stdout)
        }
    };
    if promoted {
        out = out.note("note: mixed exact and float inputs, evaluating in float mode");
    }
    Ok(out)
}

pub fn cmd_search_classical(channel: &str, messages: usize, opts: OutputOptions) -> Result<CommandOutput, CliError> {
    let c = resolve_channel(channel)?;
    let prior_len = messages.max(1);
    let (success, encoder, decoder, examined) = match &c {
        AnyChannel::Rational(c) => {
            let o = best_unassisted_success(c, messages, &MessagePrior::uniform(prior_len))?;
            (render(&o.success, opts.float), o.encoder, o.decoder, o.encoders_examined)
        }
        AnyChannel::Float(c) => {
            let o = best_unassisted_success(c, messages, &MessagePrior::uniform(prior_len))?;
            (render(&o.success, opts.float), o.encoder, o.decoder, o.encoders_examined)
        }
    };
    let stdout = if opts.json {
        serde_json::to_string_pretty(&json!({
            "success": success,
            "mode": c.mode(),
            "encoder": encoder,
            "decoder": decoder,
            "encoders_examined": examined,
        }))
        .map_err(IoError::from)?
            + "\n"
    } else {
        format!("success: {success}\nencoder: {encoder:?}\nencoders_examined: {examined}\n")
    };
    Ok(CommandOutput::text(stdout))
}

pub fn cmd_search_assisted(
    channel: &str,
    boxb: &str,
    messages: usize,
    out: Option<&Path>,
    opts: OutputOptions,
) -> Result<CommandOutput, CliError> {
    let (c, b) = match (resolve_channel(channel)?, resolve_box(boxb)?) {
        (AnyChannel::Rational(c), AnyBehavior::Rational(b)) => (c, b),
        _ => return Err(CliError::Usage("the exhaustive search needs exact channel and box".into())),
    };
    let o = exhaustive_assisted_search(&c, &b, messages)?;
    if let (Some(path), Some(p)) = (out, &o.protocol) {
        write_file(path, &(serde_json::to_string_pretty(p).map_err(IoError::from)? + "\n"))?;
    }
    let stdout = if opts.json {
        serde_json::to_string_pretty(&json!({
            "found": o.found(),
            "protocol": o.protocol,
            "encoders_examined": o.encoders_examined.to_string(),
            "evaluations": o.evaluations.to_string(),
        }))
        .map_err(IoError::from)?
            + "\n"
    } else {
        format!(
            "result: {}\nencoders_examined: {}\nevaluations: {}\n",
            if o.found() { "found" } else { "NONE" },
            o.encoders_examined,
            o.evaluations
        )
    };
    Ok(CommandOutput::text(stdout))
}

pub fn cmd_verify_paper(slow: bool, opts: OutputOptions) -> Result<CommandOutput, CliError> {
    let report = verify_paper(slow);
    let stdout = if opts.json {
        serde_json::to_string_pretty(&report).map_err(IoError::from)? + "\n"
    } else {
        report.to_table()
    };
    Ok(CommandOutput { stdout, stderr: String::new(), ok: report.all_pass() })
}
