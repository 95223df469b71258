//! Command-line front end: `simulate`, `verify`, `sweep` and `parse`.
//!
//! [`run`] takes the argument vector and two sinks so the whole tool can be
//! driven from tests without spawning a process.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use qdcavity::format::sig9;
use qdcavity::spin::fmt_complex;
use qdcavity::{
    closed_form_efficiency, closed_form_fidelity, closed_form_fidelity_squared, dephasing_factor, execute_traced,
    fidelity_breakdown, ideal_limit_report, ideal_output, parse_netlist, sweep, verify_random_inputs,
    verify_truth_table, AxisSpec, DephasingParams, Error, GateKind, Netlist, Pair, PointParams, ScatteringConvention,
    Spins, SweepGrid, SweepInput, CSV_HEADER,
};

/// Exit status for a successful run.
pub const EXIT_OK: i32 = 0;
/// Verification failed, or a netlist or simulation error occurred.
pub const EXIT_FAILURE: i32 = 1;
/// The command line could not be understood.
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "qdcavity", version, about = "Quantum-dot cavity gate simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a gate or netlist once and print every detector outcome.
    Simulate(SimulateArgs),
    /// Check a gate's truth table and random superpositions.
    Verify(VerifyArgs),
    /// Evaluate fidelity and efficiency over a coupling / leakage grid as CSV.
    Sweep(SweepArgs),
    /// Parse and validate a netlist file.
    Parse(ParseArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Convention {
    /// diag(-|r0|, |rh|, |rh|, -|r0|)
    Signed,
    /// diag(r0, rh, rh, r0) with complex coefficients
    Complex,
}

impl From<Convention> for ScatteringConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Signed => ScatteringConvention::SignedModuli,
            Convention::Complex => ScatteringConvention::FullComplex,
        }
    }
}

#[derive(Args, Debug)]
struct PointArgs {
    /// Lossless resonant cavity (r0 = -1, rh = 1).
    #[arg(long, conflicts_with_all = ["g", "ks", "r0", "rh"])]
    ideal: bool,
    /// Coupling g/(κ+κs).
    #[arg(long)]
    g: Option<String>,
    /// Side leakage κs/κ.
    #[arg(long, requires = "g")]
    ks: Option<String>,
    /// Dot decay γ/κ.
    #[arg(long, default_value_t = 0.1)]
    gamma: f64,
    /// Detuning (ω − ωc)/κ, with ωX = ωc.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    detuning: f64,
    /// |r0| used directly instead of cavity parameters.
    #[arg(long, requires = "rh", conflicts_with = "g")]
    r0: Option<f64>,
    /// |rh| used directly instead of cavity parameters.
    #[arg(long, requires = "r0", conflicts_with = "g")]
    rh: Option<f64>,
    #[arg(long, value_enum, default_value_t = Convention::Signed)]
    convention: Convention,
}

#[derive(Args, Debug)]
struct DephasingArgs {
    /// Photon-spin interaction time.
    #[arg(long, requires = "t2")]
    tau: Option<f64>,
    /// Spin coherence time.
    #[arg(long, requires = "tau")]
    t2: Option<f64>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// Built-in gate; with --netlist it names the reference gate for fidelities.
    #[arg(long, value_parser = parse_gate, required_unless_present = "netlist")]
    gate: Option<GateKind>,
    #[arg(long)]
    netlist: Option<PathBuf>,
    #[command(flatten)]
    point: PointArgs,
    /// Bitstring (0 = up, 1 = down), `uniform`, or comma-separated complex amplitudes.
    #[arg(long, default_value = "uniform")]
    input: String,
    /// Print the hybrid state at every checkpoint.
    #[arg(long)]
    trace: bool,
    #[command(flatten)]
    dephasing: DephasingArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_parser = parse_gate)]
    gate: GateKind,
    #[command(flatten)]
    point: PointArgs,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Number of random superposition inputs checked after the basis.
    #[arg(long, default_value_t = 100)]
    random: usize,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, value_parser = parse_gate, value_delimiter = ',', default_value = "cnot,toffoli,fredkin")]
    gates: Vec<GateKind>,
    /// g/(κ+κs) as `min:max:steps` or a single value.
    #[arg(long, default_value = "0:2.4:31")]
    g: String,
    /// κs/κ as `min:max:steps` or a single value.
    #[arg(long, default_value = "0:1.3:27")]
    ks: String,
    #[arg(long, default_value_t = 0.1)]
    gamma: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    detuning: f64,
    #[arg(long, default_value = "uniform")]
    input: String,
    #[arg(long, value_enum, default_value_t = Convention::Signed)]
    convention: Convention,
    #[command(flatten)]
    dephasing: DephasingArgs,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ParseArgs {
    /// Netlist file.
    #[arg(value_name = "PATH", required_unless_present = "netlist")]
    path: Option<PathBuf>,
    #[arg(long, conflicts_with = "path")]
    netlist: Option<PathBuf>,
    /// Print the canonical serialization after validating.
    #[arg(long)]
    canonical: bool,
}

fn parse_gate(s: &str) -> Result<GateKind, String> {
    s.parse()
}

/// A failure carrying the exit status it maps to.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    fn failed(message: impl Into<String>) -> Self {
        Self { code: EXIT_FAILURE, message: message.into() }
    }
}

type CliResult<T> = Result<T, Failure>;

/// Parse `argv` (program name first) and run the selected subcommand.
/// Reports go to `out`, diagnostics and warnings to `err`.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", text);
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", text);
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::Simulate(a) => simulate(a, out, err),
        Command::Verify(a) => verify(a, out),
        Command::Sweep(a) => run_sweep(a, out, err),
        Command::Parse(a) => parse_check(a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Spin state from a bitstring (`0` = ↑, `1` = ↓, spin 0 first), the
/// keyword `uniform`, or `2^n` comma-separated complex amplitudes.
///
/// Amplitude lists are normalized; the second value is a warning when the
/// given norm was off by more than 1e-6.
pub fn parse_input_spec(spec: &str, spin_count: usize) -> Result<(Spins, Option<String>), Error> {
    let spec = spec.trim();
    let dim = 1usize << spin_count;
    if spec.eq_ignore_ascii_case("uniform") {
        return Ok((Spins::uniform(spin_count), None));
    }
    if !spec.is_empty() && !spec.contains(',') && spec.chars().all(|ch| ch == '0' || ch == '1') {
        if spec.len() != spin_count {
            return Err(Error::WrongLength { expected: spin_count, found: spec.len() });
        }
        let index = usize::from_str_radix(spec, 2).map_err(|e| Error::BadInputSpec(e.to_string()))?;
        return Ok((Spins::basis(spin_count, index), None));
    }
    let amps = spec
        .split(',')
        .map(|tok| {
            let tok = tok.trim();
            tok.parse::<Complex64>()
                .map_err(|_| Error::BadInputSpec(format!("'{}' is not a complex number", tok)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if amps.len() != dim {
        return Err(Error::WrongLength { expected: dim, found: amps.len() });
    }
    if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
        return Err(Error::BadInputSpec("amplitudes must be finite".into()));
    }
    let state = Spins::new(spin_count, amps)?;
    let norm = state.norm_sqr().sqrt();
    let normalized = state.normalized().ok_or_else(|| Error::BadInputSpec("all amplitudes are zero".into()))?;
    let warning =
        ((norm - 1.0).abs() > 1e-6).then(|| format!("input norm is {}; amplitudes were normalized", sig9(norm)));
    Ok((normalized, warning))
}

/// `min:max:steps` with inclusive endpoints, or a single value.
pub fn parse_axis(spec: &str) -> Result<AxisSpec<f64>, Error> {
    let bad = || Error::BadInputSpec(format!("'{}' is not a number or min:max:steps range", spec));
    let parts: Vec<&str> = spec.split(':').map(str::trim).collect();
    let axis = match parts.as_slice() {
        [x] => AxisSpec::single(x.parse().map_err(|_| bad())?),
        [lo, hi, n] => AxisSpec {
            min: lo.parse().map_err(|_| bad())?,
            max: hi.parse().map_err(|_| bad())?,
            steps: n.parse().map_err(|_| bad())?,
        },
        _ => return Err(bad()),
    };
    axis.validate()?;
    Ok(axis)
}

fn scalar_arg(name: &str, spec: &str) -> CliResult<f64> {
    let axis = parse_axis(spec).map_err(|e| Failure::usage(format!("--{}: {}", name, e)))?;
    if axis.steps != 1 {
        return Err(Failure::usage(format!("--{} takes a single value here, not a range", name)));
    }
    Ok(axis.min)
}

struct Point {
    params: Option<PointParams<f64>>,
    pair: Pair,
    convention: ScatteringConvention,
}

impl Point {
    fn describe(&self) -> String {
        let (m0, mh) = self.pair.moduli();
        let source = match &self.params {
            Some(p) => format!(
                "g/(κ+κs)={} κs/κ={} γ/κ={} detuning={}  ",
                sig9(p.g_ratio),
                sig9(p.ks_ratio),
                sig9(p.gamma_ratio),
                sig9(p.detuning)
            ),
            None => String::new(),
        };
        format!(
            "{}r0={} rh={} |r0|={} |rh|={} convention={}",
            source,
            fmt_complex(self.pair.r0),
            fmt_complex(self.pair.rh),
            sig9(m0),
            sig9(mh),
            match self.convention {
                ScatteringConvention::SignedModuli => "signed",
                ScatteringConvention::FullComplex => "complex",
            }
        )
    }
}

fn resolve_point(a: &PointArgs) -> CliResult<Point> {
    let convention = a.convention.into();
    if a.ideal {
        return Ok(Point { params: None, pair: Pair::ideal(), convention });
    }
    if let (Some(m0), Some(mh)) = (a.r0, a.rh) {
        for (name, m) in [("r0", m0), ("rh", mh)] {
            if !(0.0..=1.0).contains(&m) {
                return Err(Failure::usage(format!("--{} must lie in [0, 1], got {}", name, m)));
            }
        }
        return Ok(Point { params: None, pair: Pair::from_moduli(m0, mh), convention });
    }
    let Some(g) = &a.g else {
        return Err(Failure::usage("cavity parameters missing: give --ideal, --g [--ks], or --r0 and --rh"));
    };
    let params = PointParams {
        g_ratio: scalar_arg("g", g)?,
        ks_ratio: a.ks.as_deref().map(|k| scalar_arg("ks", k)).transpose()?.unwrap_or(0.0),
        gamma_ratio: a.gamma,
        detuning: a.detuning,
    };
    let pair = params.pair().map_err(|e| Failure::usage(e.to_string()))?;
    Ok(Point { params: Some(params), pair, convention })
}

fn resolve_dephasing(a: &DephasingArgs) -> CliResult<Option<DephasingParams<f64>>> {
    match (a.tau, a.t2) {
        (Some(tau), Some(t2)) => DephasingParams::new(tau, t2).map(Some).map_err(|e| Failure::usage(e.to_string())),
        _ => Ok(None),
    }
}

fn read_netlist(path: &Path) -> CliResult<Netlist> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {}", path.display(), e)))?;
    parse_netlist(&text).map_err(|e| Failure::failed(format!("{}: {}", path.display(), e)))
}

fn io(e: std::io::Error) -> Failure {
    Failure::failed(format!("write failed: {}", e))
}

fn simulate(a: SimulateArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    let point = resolve_point(&a.point)?;
    let dephasing = resolve_dephasing(&a.dephasing)?;
    let (netlist, source) = match (&a.netlist, a.gate) {
        (Some(path), _) => (read_netlist(path)?, path.display().to_string()),
        (None, Some(kind)) => (qdcavity::builtin_netlist(kind), kind.to_string()),
        (None, None) => return Err(Failure::usage("give --gate or --netlist")),
    };
    if let Some(kind) = a.gate {
        if kind.spin_count() != netlist.spin_count {
            return Err(Failure::usage(format!(
                "{} acts on {} spins but the netlist declares {}",
                kind,
                kind.spin_count(),
                netlist.spin_count
            )));
        }
    }
    let (input, warning) =
        parse_input_spec(&a.input, netlist.spin_count).map_err(|e| Failure::usage(format!("--input: {}", e)))?;
    if let Some(w) = warning {
        writeln!(err, "warning: {}", w).map_err(io)?;
    }

    let effective = point.pair.with_convention(point.convention);
    let (dist, trace) =
        execute_traced(&netlist, &effective, &input).map_err(|e| Failure::failed(e.to_string()))?;

    writeln!(out, "circuit: {}", source).map_err(io)?;
    writeln!(out, "cavity: {}", point.describe()).map_err(io)?;
    writeln!(out, "input: {}", input).map_err(io)?;
    if a.trace {
        for (name, state) in &trace.checkpoints {
            writeln!(out, "@{}: {}", name, state).map_err(io)?;
        }
        writeln!(out, "before detection: {}", trace.final_state).map_err(io)?;
    }
    for o in &dist.outcomes {
        let ff = netlist.feedforward_for(&o.label).unwrap_or(&[]);
        let ops = if ff.is_empty() {
            "none".to_string()
        } else {
            ff.iter().map(|(k, op)| format!("{}:{}", k, op.token())).collect::<Vec<_>>().join(" ")
        };
        writeln!(out, "outcome {}  p={}  correction={}  state={}", o.label, sig9(o.probability), ops, o.state)
            .map_err(io)?;
    }
    writeln!(out, "detection probability: {}", sig9(dist.total_probability())).map_err(io)?;

    if let Some(kind) = a.gate {
        let factor = dephasing.as_ref().map(dephasing_factor).unwrap_or(1.0);
        if let Some(d) = &dephasing {
            writeln!(
                out,
                "dephasing: tau={} T2={} factor={} (applied to every fidelity below)",
                sig9(d.tau),
                sig9(d.t2),
                sig9(factor)
            )
            .map_err(io)?;
        }
        writeln!(out, "ideal output: {}", ideal_output(kind, &input)).map_err(io)?;
        if dist.is_empty() {
            writeln!(out, "fidelity: undefined (no photon detected)").map_err(io)?;
        } else {
            let b = fidelity_breakdown(&netlist, kind, &effective, &input).map_err(|e| Failure::failed(e.to_string()))?;
            for (label, _, f) in &b.per_outcome {
                writeln!(out, "fidelity {}: {}", label, sig9(f * factor)).map_err(io)?;
            }
            writeln!(out, "fidelity conditioned: {}", sig9(b.conditioned * factor)).map_err(io)?;
            writeln!(out, "fidelity unconditioned: {}", sig9(b.unconditioned * factor)).map_err(io)?;
            writeln!(out, "fidelity photon-inclusive: {}", sig9(b.photon_inclusive * factor)).map_err(io)?;
        }
        let (m0, mh) = point.pair.moduli();
        writeln!(out, "closed-form fidelity (printed): {}", sig9(closed_form_fidelity(kind, m0, mh) * factor))
            .map_err(io)?;
        writeln!(
            out,
            "closed-form fidelity (squared numerator): {}",
            sig9(closed_form_fidelity_squared(kind, m0, mh) * factor)
        )
        .map_err(io)?;
        writeln!(out, "efficiency: {}", sig9(trace.final_state.norm_sqr())).map_err(io)?;
        writeln!(out, "closed-form efficiency: {}", sig9(closed_form_efficiency(kind, m0, mh))).map_err(io)?;
    }
    Ok(EXIT_OK)
}

fn verify(a: VerifyArgs, out: &mut dyn Write) -> CliResult<i32> {
    let point = resolve_point(&a.point)?;
    if a.tol.is_nan() || a.tol < 0.0 {
        return Err(Failure::usage("--tol must be non-negative"));
    }
    let pair = point.pair.with_convention(point.convention);
    writeln!(out, "cavity: {}", point.describe()).map_err(io)?;
    let table = verify_truth_table(a.gate, &pair, a.tol);
    writeln!(out, "{}", table).map_err(io)?;
    let mut pass = table.pass;
    if a.random > 0 {
        let r = verify_random_inputs(a.gate, &pair, a.tol, a.random, a.seed);
        writeln!(
            out,
            "random inputs: {} samples (seed {})  worst overlap={}  {}",
            r.samples,
            a.seed,
            sig9(r.worst_overlap),
            if r.pass { "PASS" } else { "FAIL" }
        )
        .map_err(io)?;
        pass &= r.pass;
    }
    writeln!(out, "verdict: {}", if pass { "PASS" } else { "FAIL" }).map_err(io)?;
    Ok(if pass { EXIT_OK } else { EXIT_FAILURE })
}

fn run_sweep(a: SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    let grid = SweepGrid {
        g: parse_axis(&a.g).map_err(|e| Failure::usage(format!("--g: {}", e)))?,
        ks: parse_axis(&a.ks).map_err(|e| Failure::usage(format!("--ks: {}", e)))?,
        gamma: a.gamma,
        detuning: a.detuning,
        gates: a.gates.clone(),
        convention: a.convention.into(),
    };
    grid.validate().map_err(|e| Failure::usage(e.to_string()))?;
    let dephasing = resolve_dephasing(&a.dephasing)?;
    let input = if a.input.trim().eq_ignore_ascii_case("uniform") {
        SweepInput::Uniform
    } else {
        let n = grid.gates[0].spin_count();
        if grid.gates.iter().any(|g| g.spin_count() != n) {
            return Err(Failure::usage("--input other than 'uniform' needs gates of equal spin count"));
        }
        let (state, warning) = parse_input_spec(&a.input, n).map_err(|e| Failure::usage(format!("--input: {}", e)))?;
        if let Some(w) = warning {
            writeln!(err, "warning: {}", w).map_err(io)?;
        }
        SweepInput::State(state)
    };

    let rows = sweep(&grid, &input, dephasing.as_ref()).map_err(|e| Failure::failed(e.to_string()))?;

    let sink: Box<dyn Write + '_> = match &a.out {
        Some(path) => Box::new(
            fs::File::create(path).map_err(|e| Failure::usage(format!("{}: {}", path.display(), e)))?,
        ),
        None => Box::new(&mut *out),
    };
    let mut w = csv::Writer::from_writer(sink);
    let csv_err = |e: csv::Error| Failure::failed(format!("CSV write failed: {}", e));
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in &rows {
        w.write_record(r.csv_record()).map_err(csv_err)?;
    }
    w.flush().map_err(io)?;
    drop(w);

    writeln!(err, "closed-form check at |r0| = |rh| = 1:").map_err(io)?;
    for c in ideal_limit_report::<f64>().map_err(|e| Failure::failed(e.to_string()))? {
        writeln!(err, "  {}", c).map_err(io)?;
    }
    if let Some(path) = &a.out {
        writeln!(err, "wrote {} rows to {}", rows.len(), path.display()).map_err(io)?;
    }
    Ok(EXIT_OK)
}

fn parse_check(a: ParseArgs, out: &mut dyn Write) -> CliResult<i32> {
    let path = a.path.or(a.netlist).ok_or_else(|| Failure::usage("no netlist given"))?;
    let netlist = read_netlist(&path)?;
    if a.canonical {
        write!(out, "{}", netlist).map_err(io)?;
        return Ok(EXIT_OK);
    }
    let checkpoints: Vec<&str> = netlist.checkpoint_names().collect();
    writeln!(
        out,
        "{}: ok ({} spins, {} elements, {} detectors, checkpoints: {})",
        path.display(),
        netlist.spin_count,
        netlist.steps.len(),
        netlist.detectors.len(),
        if checkpoints.is_empty() { "none".to_string() } else { checkpoints.join(", ") }
    )
    .map_err(io)?;
    Ok(EXIT_OK)
}
