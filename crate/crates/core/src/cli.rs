//! Command-line front end: argument and config parsing, dispatch, and
//! CSV/JSON output.
//!
//! Exit statuses: 0 success, 1 I/O failure, 2 usage or validation error,
//! 3 numerical failure (e.g. no sudden death inside the bracket).

use std::collections::HashMap;
use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::error::Error;
use crate::model::ModelParams;
use crate::quantifiers::{self, QuantifierRecord};
use crate::sweep::{
    self, SweepResult, SweepSpec, SweepVariable, DEFAULT_CROSSING_TOL, DEFAULT_STEPS,
};

/// Frozen CSV header for point and sweep records.
pub const RECORD_HEADER: &str =
    "variable,omega,delta_a,delta_b,coulomb,temperature,p1,p2,p3,p4,c_total,c_local,c_correlated,concurrence";
pub const SUDDEN_DEATH_HEADER: &str = "omega,delta_a,delta_b,coulomb,t_lo,t_hi,tol,t_c";
pub const CROSSING_HEADER: &str = "omega,delta_a,delta_b,v_lo,v_hi,tol,v_c,gap";

/// Default bisection tolerance for `tc`.
pub const DEFAULT_SUDDEN_DEATH_TOL: f64 = 1e-4;

/// Environment variable capping sweep parallelism.
pub const THREADS_ENV: &str = "DQD_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Point(ModelParams),
    Sweep(SweepSpec),
    SuddenDeath {
        base: ModelParams,
        t_lo: f64,
        t_hi: f64,
        tol: f64,
    },
    Crossing {
        base: ModelParams,
        v_lo: f64,
        v_hi: f64,
        tol: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub format: Format,
    /// `None` writes to standard output.
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// `--help` or `--version`; not a failure.
    Info(String),
    Usage(String),
    Io(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Info(_) => 0,
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Info(m) | CliError::Usage(m) | CliError::Io(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_validation() {
            CliError::Usage(e.to_string())
        } else {
            CliError::Numerical(e.to_string())
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "dqd",
    version,
    about = "Thermal coherence and entanglement of two coupled double quantum dots"
)]
struct Cli {
    #[command(subcommand)]
    command: CommandArgs,
}

#[derive(Subcommand, Debug)]
enum CommandArgs {
    /// Evaluate a single parameter point
    Point {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Sweep one parameter over a uniform grid
    Sweep {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        io: IoArgs,
        /// Swept parameter: temp, coulomb, tunneling or omega
        #[arg(long = "var")]
        var: Option<String>,
        /// First grid value
        #[arg(long = "from", allow_negative_numbers = true)]
        from: Option<f64>,
        /// Last grid value
        #[arg(long = "to", allow_negative_numbers = true)]
        to: Option<f64>,
        /// Number of grid points, endpoints included [default: 201]
        #[arg(long)]
        steps: Option<usize>,
        /// Sweep delta_a and delta_b together
        #[arg(long = "tie-deltas")]
        tie_deltas: bool,
    },
    /// Locate the entanglement sudden-death temperature
    Tc {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        io: IoArgs,
        #[arg(long = "t-lo", allow_negative_numbers = true)]
        t_lo: Option<f64>,
        #[arg(long = "t-hi", allow_negative_numbers = true)]
        t_hi: Option<f64>,
        /// Bracket width at which bisection stops [default: 1e-4]
        #[arg(long, allow_negative_numbers = true)]
        tol: Option<f64>,
    },
    /// Locate the level crossing in the Coulomb coupling
    Crossing {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        io: IoArgs,
        #[arg(long = "v-lo", allow_negative_numbers = true)]
        v_lo: Option<f64>,
        #[arg(long = "v-hi", allow_negative_numbers = true)]
        v_hi: Option<f64>,
        /// Golden-section tolerance [default: 1e-6]
        #[arg(long, allow_negative_numbers = true)]
        tol: Option<f64>,
    },
}

#[derive(Args, Debug)]
struct ParamArgs {
    /// Transition frequency of the stimulus
    #[arg(long, allow_negative_numbers = true)]
    omega: Option<f64>,
    /// Tunneling strength of double dot A
    #[arg(long = "delta-a", allow_negative_numbers = true)]
    delta_a: Option<f64>,
    /// Tunneling strength of double dot B
    #[arg(long = "delta-b", allow_negative_numbers = true)]
    delta_b: Option<f64>,
    /// Coulomb coupling V
    #[arg(long, allow_negative_numbers = true)]
    coulomb: Option<f64>,
    /// Temperature (k_B = 1)
    #[arg(long = "temp", allow_negative_numbers = true)]
    temp: Option<f64>,
}

#[derive(Args, Debug)]
struct IoArgs {
    /// Output format [default: csv]
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output file [default: standard output]
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// `key = value` file supplying defaults for any flag
    #[arg(long)]
    config: Option<PathBuf>,
}

const CONFIG_KEYS: &[&str] = &[
    "omega",
    "delta-a",
    "delta-b",
    "coulomb",
    "temp",
    "format",
    "output",
    "var",
    "from",
    "to",
    "steps",
    "tie-deltas",
    "t-lo",
    "t-hi",
    "v-lo",
    "v-hi",
    "tol",
];

/// Parsed `key = value` config file. Keys use the long flag names; `_` and
/// `-` are interchangeable.
#[derive(Debug, Default)]
struct ConfigFile {
    values: HashMap<String, String>,
}

impl ConfigFile {
    fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|m| CliError::Usage(format!("{}: {m}", path.display())))
    }

    fn parse(text: &str) -> Result<Self, String> {
        let mut values = HashMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected `key = value`", n + 1))?;
            let key = key.trim().replace('_', "-");
            if !CONFIG_KEYS.contains(&key.as_str()) {
                return Err(format!("line {}: unknown key `{key}`", n + 1));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Self { values })
    }

    fn f64(&self, flag: Option<f64>, key: &str) -> Result<Option<f64>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        self.values
            .get(key)
            .map(|s| {
                s.parse::<f64>().map_err(|_| {
                    CliError::Usage(format!("config value for `{key}` is not a number: `{s}`"))
                })
            })
            .transpose()
    }

    fn str(&self, flag: Option<String>, key: &str) -> Option<String> {
        flag.or_else(|| self.values.get(key).cloned())
    }
}

fn required(value: Option<f64>, key: &str) -> Result<f64, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("missing required value --{key}")))
}

struct PartialParams {
    omega: Option<f64>,
    delta_a: Option<f64>,
    delta_b: Option<f64>,
    coulomb: Option<f64>,
    temp: Option<f64>,
}

impl PartialParams {
    fn resolve(args: ParamArgs, file: &ConfigFile) -> Result<Self, CliError> {
        Ok(Self {
            omega: file.f64(args.omega, "omega")?,
            delta_a: file.f64(args.delta_a, "delta-a")?,
            delta_b: file.f64(args.delta_b, "delta-b")?,
            coulomb: file.f64(args.coulomb, "coulomb")?,
            temp: file.f64(args.temp, "temp")?,
        })
    }

    /// Fills absent fields from `fill` (for parameters a command does not
    /// use) and errors on any other gap.
    fn complete(&self, fill: [Option<f64>; 5]) -> Result<ModelParams, CliError> {
        let keys = ["omega", "delta-a", "delta-b", "coulomb", "temp"];
        let given = [
            self.omega,
            self.delta_a,
            self.delta_b,
            self.coulomb,
            self.temp,
        ];
        let mut v = [0.0; 5];
        for i in 0..5 {
            v[i] = required(given[i].or(fill[i]), keys[i])?;
        }
        Ok(ModelParams {
            omega: v[0],
            delta_a: v[1],
            delta_b: v[2],
            coulomb: v[3],
            temperature: v[4],
        })
    }
}

fn resolve_io(io: IoArgs) -> Result<(ConfigFile, Format, Option<PathBuf>), CliError> {
    let file = match &io.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let format = match io.format {
        Some(f) => f,
        None => match file.values.get("format") {
            Some(s) => Format::from_str(s, true).map_err(|_| {
                CliError::Usage(format!(
                    "config value for `format` must be csv or json, got `{s}`"
                ))
            })?,
            None => Format::Csv,
        },
    };
    let output = io
        .output
        .or_else(|| file.values.get("output").map(PathBuf::from));
    Ok((file, format, output))
}

/// Parses `argv` (including the program name) into a validated
/// [`RunConfig`]. Flags override values from `--config`.
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| {
        use clap::error::ErrorKind;
        match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CliError::Info(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    })?;

    let (command, format, output) = match cli.command {
        CommandArgs::Point { params, io } => {
            let (file, format, output) = resolve_io(io)?;
            let p = PartialParams::resolve(params, &file)?.complete([None; 5])?;
            p.validate()?;
            (Command::Point(p), format, output)
        }
        CommandArgs::Sweep {
            params,
            io,
            var,
            from,
            to,
            steps,
            tie_deltas,
        } => {
            let (file, format, output) = resolve_io(io)?;
            let variable: SweepVariable = file
                .str(var, "var")
                .ok_or_else(|| CliError::Usage("missing required value --var".into()))?
                .parse()
                .map_err(CliError::Usage)?;
            let start = required(file.f64(from, "from")?, "from")?;
            let stop = required(file.f64(to, "to")?, "to")?;
            let steps = match steps {
                Some(s) => s,
                None => match file.values.get("steps") {
                    Some(s) => s.parse().map_err(|_| {
                        CliError::Usage(format!(
                            "config value for `steps` is not an integer: `{s}`"
                        ))
                    })?,
                    None => DEFAULT_STEPS,
                },
            };
            let tie_deltas =
                tie_deltas || file.values.get("tie-deltas").is_some_and(|s| s == "true");

            // the swept parameter needs no base value
            let mut fill = [None; 5];
            match variable {
                SweepVariable::Omega => fill[0] = Some(start),
                SweepVariable::Tunneling => {
                    fill[1] = Some(start);
                    if tie_deltas {
                        fill[2] = Some(start);
                    }
                }
                SweepVariable::Coulomb => fill[3] = Some(start),
                SweepVariable::Temperature => fill[4] = Some(start),
            }
            let base = PartialParams::resolve(params, &file)?.complete(fill)?;
            let spec = SweepSpec {
                variable,
                start,
                stop,
                steps,
                base,
                tie_deltas,
            };
            spec.validate()?;
            (Command::Sweep(spec), format, output)
        }
        CommandArgs::Tc {
            params,
            io,
            t_lo,
            t_hi,
            tol,
        } => {
            let (file, format, output) = resolve_io(io)?;
            let t_lo = required(file.f64(t_lo, "t-lo")?, "t-lo")?;
            let t_hi = required(file.f64(t_hi, "t-hi")?, "t-hi")?;
            let tol = file.f64(tol, "tol")?.unwrap_or(DEFAULT_SUDDEN_DEATH_TOL);
            let base = PartialParams::resolve(params, &file)?.complete([
                None,
                None,
                None,
                None,
                Some(t_lo),
            ])?;
            base.validate()?;
            check_bracket("t-lo", t_lo, "t-hi", t_hi, tol)?;
            (
                Command::SuddenDeath {
                    base,
                    t_lo,
                    t_hi,
                    tol,
                },
                format,
                output,
            )
        }
        CommandArgs::Crossing {
            params,
            io,
            v_lo,
            v_hi,
            tol,
        } => {
            let (file, format, output) = resolve_io(io)?;
            let v_lo = required(file.f64(v_lo, "v-lo")?, "v-lo")?;
            let v_hi = required(file.f64(v_hi, "v-hi")?, "v-hi")?;
            let tol = file.f64(tol, "tol")?.unwrap_or(DEFAULT_CROSSING_TOL);
            let base = PartialParams::resolve(params, &file)?.complete([
                None,
                None,
                None,
                Some(v_lo),
                Some(1.0),
            ])?;
            base.validate()?;
            check_bracket("v-lo", v_lo, "v-hi", v_hi, tol)?;
            (
                Command::Crossing {
                    base,
                    v_lo,
                    v_hi,
                    tol,
                },
                format,
                output,
            )
        }
    };
    Ok(RunConfig {
        command,
        format,
        output,
    })
}

fn check_bracket(lo_name: &str, lo: f64, hi_name: &str, hi: f64, tol: f64) -> Result<(), CliError> {
    if !(lo.is_finite() && hi.is_finite() && lo >= 0.0 && lo < hi) {
        return Err(CliError::Usage(format!(
            "--{lo_name} {lo} and --{hi_name} {hi} must satisfy 0 <= {lo_name} < {hi_name}"
        )));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CliError::Usage(format!(
            "--tol must be positive, got {tol}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuddenDeathReport {
    pub base: ModelParams,
    pub t_lo: f64,
    pub t_hi: f64,
    pub tol: f64,
    pub t_c: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossingReport {
    pub base: ModelParams,
    pub v_lo: f64,
    pub v_hi: f64,
    pub tol: f64,
    pub v_c: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Point(QuantifierRecord),
    Sweep(SweepResult),
    SuddenDeath(SuddenDeathReport),
    Crossing(CrossingReport),
}

/// Runs the computation for `config`. `threads` caps sweep parallelism.
pub fn execute(config: &RunConfig, threads: Option<usize>) -> Result<Output, CliError> {
    Ok(match &config.command {
        Command::Point(p) => Output::Point(quantifiers::evaluate_point(p)?),
        Command::Sweep(spec) => {
            let result = match threads {
                Some(n) => rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| CliError::Io(format!("cannot start worker threads: {e}")))?
                    .install(|| sweep::run_sweep(spec)),
                None => sweep::run_sweep(spec),
            }?;
            Output::Sweep(result)
        }
        Command::SuddenDeath {
            base,
            t_lo,
            t_hi,
            tol,
        } => Output::SuddenDeath(SuddenDeathReport {
            base: *base,
            t_lo: *t_lo,
            t_hi: *t_hi,
            tol: *tol,
            t_c: sweep::find_sudden_death(base, *t_lo, *t_hi, *tol)?,
        }),
        Command::Crossing {
            base,
            v_lo,
            v_hi,
            tol,
        } => {
            let c = sweep::find_level_crossing(base, *v_lo, *v_hi, *tol)?;
            Output::Crossing(CrossingReport {
                base: *base,
                v_lo: *v_lo,
                v_hi: *v_hi,
                tol: *tol,
                v_c: c.coulomb,
                gap: c.gap,
            })
        }
    })
}

/// 17 significant digits: enough to round-trip any `f64`.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

struct Sig17(f64);

impl Serialize for Sig17 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let raw = RawValue::from_string(format_f64(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

#[derive(Serialize)]
struct RecordJson<'a> {
    variable: &'a str,
    omega: Sig17,
    delta_a: Sig17,
    delta_b: Sig17,
    coulomb: Sig17,
    temperature: Sig17,
    p1: Sig17,
    p2: Sig17,
    p3: Sig17,
    p4: Sig17,
    c_total: Sig17,
    c_local: Sig17,
    c_correlated: Sig17,
    concurrence: Sig17,
}

impl<'a> RecordJson<'a> {
    fn new(variable: &'a str, r: &QuantifierRecord) -> Self {
        let p = &r.params;
        Self {
            variable,
            omega: Sig17(p.omega),
            delta_a: Sig17(p.delta_a),
            delta_b: Sig17(p.delta_b),
            coulomb: Sig17(p.coulomb),
            temperature: Sig17(p.temperature),
            p1: Sig17(r.populations[0]),
            p2: Sig17(r.populations[1]),
            p3: Sig17(r.populations[2]),
            p4: Sig17(r.populations[3]),
            c_total: Sig17(r.c_total),
            c_local: Sig17(r.c_local),
            c_correlated: Sig17(r.c_correlated),
            concurrence: Sig17(r.concurrence),
        }
    }

    fn csv_row(&self) -> String {
        let nums = [
            &self.omega,
            &self.delta_a,
            &self.delta_b,
            &self.coulomb,
            &self.temperature,
            &self.p1,
            &self.p2,
            &self.p3,
            &self.p4,
            &self.c_total,
            &self.c_local,
            &self.c_correlated,
            &self.concurrence,
        ];
        let mut row = self.variable.to_string();
        for x in nums {
            row.push(',');
            row.push_str(&format_f64(x.0));
        }
        row
    }
}

#[derive(Serialize)]
struct SuddenDeathJson {
    omega: Sig17,
    delta_a: Sig17,
    delta_b: Sig17,
    coulomb: Sig17,
    t_lo: Sig17,
    t_hi: Sig17,
    tol: Sig17,
    t_c: Sig17,
}

#[derive(Serialize)]
struct CrossingJson {
    omega: Sig17,
    delta_a: Sig17,
    delta_b: Sig17,
    v_lo: Sig17,
    v_hi: Sig17,
    tol: Sig17,
    v_c: Sig17,
    gap: Sig17,
}

/// Name written in the `variable` column of a single-point record.
pub const POINT_VARIABLE: &str = "point";

fn csv_line(values: &[f64]) -> String {
    values
        .iter()
        .map(|&x| format_f64(x))
        .collect::<Vec<_>>()
        .join(",")
}

/// Writes `output` to `sink`. Lines end in `\n`; CSV starts with a header.
pub fn emit_records(output: &Output, format: Format, sink: &mut dyn Write) -> io::Result<()> {
    match (output, format) {
        (Output::Point(r), Format::Csv) => {
            writeln!(sink, "{RECORD_HEADER}")?;
            writeln!(sink, "{}", RecordJson::new(POINT_VARIABLE, r).csv_row())?;
        }
        (Output::Point(r), Format::Json) => {
            serde_json::to_writer(&mut *sink, &RecordJson::new(POINT_VARIABLE, r))?;
            writeln!(sink)?;
        }
        (Output::Sweep(s), Format::Csv) => {
            writeln!(sink, "{RECORD_HEADER}")?;
            let name = s.spec.variable.name();
            for r in &s.records {
                writeln!(sink, "{}", RecordJson::new(name, r).csv_row())?;
            }
        }
        (Output::Sweep(s), Format::Json) => {
            let name = s.spec.variable.name();
            writeln!(sink, "[")?;
            for (i, r) in s.records.iter().enumerate() {
                serde_json::to_writer(&mut *sink, &RecordJson::new(name, r))?;
                writeln!(sink, "{}", if i + 1 < s.records.len() { "," } else { "" })?;
            }
            writeln!(sink, "]")?;
        }
        (Output::SuddenDeath(t), Format::Csv) => {
            let b = &t.base;
            writeln!(sink, "{SUDDEN_DEATH_HEADER}")?;
            writeln!(
                sink,
                "{}",
                csv_line(&[b.omega, b.delta_a, b.delta_b, b.coulomb, t.t_lo, t.t_hi, t.tol, t.t_c])
            )?;
        }
        (Output::SuddenDeath(t), Format::Json) => {
            let b = &t.base;
            let j = SuddenDeathJson {
                omega: Sig17(b.omega),
                delta_a: Sig17(b.delta_a),
                delta_b: Sig17(b.delta_b),
                coulomb: Sig17(b.coulomb),
                t_lo: Sig17(t.t_lo),
                t_hi: Sig17(t.t_hi),
                tol: Sig17(t.tol),
                t_c: Sig17(t.t_c),
            };
            serde_json::to_writer(&mut *sink, &j)?;
            writeln!(sink)?;
        }
        (Output::Crossing(c), Format::Csv) => {
            let b = &c.base;
            writeln!(sink, "{CROSSING_HEADER}")?;
            writeln!(
                sink,
                "{}",
                csv_line(&[b.omega, b.delta_a, b.delta_b, c.v_lo, c.v_hi, c.tol, c.v_c, c.gap])
            )?;
        }
        (Output::Crossing(c), Format::Json) => {
            let b = &c.base;
            let j = CrossingJson {
                omega: Sig17(b.omega),
                delta_a: Sig17(b.delta_a),
                delta_b: Sig17(b.delta_b),
                v_lo: Sig17(c.v_lo),
                v_hi: Sig17(c.v_hi),
                tol: Sig17(c.tol),
                v_c: Sig17(c.v_c),
                gap: Sig17(c.gap),
            };
            serde_json::to_writer(&mut *sink, &j)?;
            writeln!(sink)?;
        }
    }
    sink.flush()
}

fn threads_from_env(value: Option<String>) -> Result<Option<usize>, CliError> {
    match value {
        None => Ok(None),
        Some(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!(
                "{THREADS_ENV} must be a positive integer, got `{s}`"
            ))),
        },
    }
}

/// Full CLI run: parse, compute, write. Returns the process exit status.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match try_run(argv, stdout) {
        Ok(()) => 0,
        Err(CliError::Info(text)) => {
            let _ = write!(stdout, "{text}");
            0
        }
        Err(e) => {
            let msg = e.message().trim_end();
            let _ = if msg.starts_with("error:") {
                writeln!(stderr, "{msg}")
            } else {
                writeln!(stderr, "error: {msg}")
            };
            e.exit_code()
        }
    }
}

fn try_run<I, T>(argv: I, stdout: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = parse_args(argv)?;
    let threads = threads_from_env(std::env::var(THREADS_ENV).ok())?;
    let output = execute(&config, threads)?;
    match &config.output {
        Some(path) => {
            let file = fs::File::create(path)
                .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
            let mut w = io::BufWriter::new(file);
            emit_records(&output, config.format, &mut w)
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
        }
        None => match emit_records(&output, config.format, stdout) {
            // downstream reader closed early, e.g. `| head`
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
            r => r.map_err(|e| CliError::Io(format!("cannot write to standard output: {e}"))),
        },
    }
}
