//! `retphase` — phases and entanglement for retarded branch interactions.
//!
//! Subcommands: `phase` (phase table for every spin configuration),
//! `entangle` (evolve a spin state and quantify entanglement), `sweep`
//! (vary one scenario parameter and tabulate all three models), `validate`
//! (built-in invariant suite). Exit codes: 0 success, 2 schema or input
//! error, 3 numerical failure.

mod scenario_file;
mod units;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use retphase_core::action::{phase_table, wrap_to_pi};
use retphase_core::entanglement::{entanglement_report, SpinState};
use retphase_core::validation::{run_all, ValidationOptions};
use retphase_core::ActionModel;

use scenario_file::{LoadedScenario, ScenarioFile};

/// Errors carrying the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Malformed scenario, units, flags or files: exit 2.
    Schema(String),
    /// Solver or quadrature failure: exit 3.
    Numerical(String),
}

impl CliError {
    fn schema(msg: String) -> Self {
        CliError::Schema(msg)
    }

    fn from_core(e: retphase_core::Error) -> Self {
        use retphase_core::Error::*;
        match e {
            InvalidInput(_) => CliError::Schema(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Schema(m) => write!(f, "error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical error: {m}"),
        }
    }
}

#[derive(Parser)]
#[command(name = "retphase", version, about = "On-shell phases and mediated entanglement for retarded interactions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file (JSON).
    file: PathBuf,
    /// Interaction model override: exact | slow_motion | instantaneous.
    #[arg(long)]
    model: Option<String>,
    /// Quadrature tolerance override (radians).
    #[arg(long)]
    tol: Option<f64>,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the phase table over all spin configurations.
    Phase {
        #[command(flatten)]
        run: RunArgs,
        /// Output format.
        #[arg(long, default_value = "json", value_parser = ["json", "csv"])]
        format: String,
    },
    /// Evolve a spin state and report entanglement measures.
    Entangle {
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated complex amplitudes like "0.5,0.5,0.5,0.5" or
        /// "1,0,0,1i"; normalized automatically. Defaults to uniform.
        #[arg(long)]
        amplitudes: Option<String>,
    },
    /// Sweep one scenario parameter; writes CSV rows for all three models.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// Dotted path of the swept numeric field, e.g. builder.params.duration.
        #[arg(long)]
        param: String,
        /// Range "lo:hi" in the same units the field uses in the file.
        #[arg(long)]
        range: String,
        /// Number of evenly spaced values (1 = just "lo").
        #[arg(long)]
        steps: usize,
    },
    /// Run the built-in invariant suite and report per-check status.
    Validate {
        /// Scale every tolerance and bound (0.1 = ten times tighter).
        #[arg(long, default_value_t = 1.0)]
        tol_scale: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Phase { run, format } => cmd_phase(&run, &format),
        Command::Entangle { run, amplitudes } => cmd_entangle(&run, amplitudes.as_deref()),
        Command::Sweep { run, param, range, steps } => cmd_sweep(&run, &param, &range, steps),
        Command::Validate { tol_scale } => cmd_validate(tol_scale),
    }
}

fn parse_model(text: Option<&str>) -> Result<Option<ActionModel>, CliError> {
    text.map(|t| t.parse::<ActionModel>().map_err(CliError::from_core))
        .transpose()
}

fn read_scenario(run: &RunArgs) -> Result<(ScenarioFile, LoadedScenario), CliError> {
    let text = std::fs::read_to_string(&run.file)
        .map_err(|e| CliError::schema(format!("{}: {e}", run.file.display())))?;
    let file = ScenarioFile::parse(&text)?;
    let loaded = file.load(parse_model(run.model.as_deref())?, run.tol)?;
    Ok((file, loaded))
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::schema(format!("{}: {e}", path.display()))),
    }
}

#[derive(Serialize)]
struct PhaseEntryOut {
    sigma: String,
    phase: f64,
    quad_error: f64,
}

#[derive(Serialize)]
struct PhaseOut {
    command: &'static str,
    model: ActionModel,
    scenario_digest: String,
    tolerance: f64,
    entries: Vec<PhaseEntryOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta_phi: Option<f64>,
}

fn phase_output(loaded: &LoadedScenario) -> Result<PhaseOut, CliError> {
    let table = phase_table(&loaded.scenario, loaded.model, loaded.tolerance)
        .map_err(CliError::from_core)?;
    let n = table.n_particles;
    let entries = table
        .entries
        .iter()
        .enumerate()
        .map(|(i, e)| PhaseEntryOut {
            sigma: retphase_core::SpinConfiguration::from_index(i, n).label(),
            phase: e.phase,
            quad_error: e.quad_error,
        })
        .collect();
    Ok(PhaseOut {
        command: "phase",
        model: table.model,
        scenario_digest: table.scenario_digest.clone(),
        tolerance: loaded.tolerance,
        entries,
        delta_phi: table.delta_phi().ok(),
    })
}

fn cmd_phase(run: &RunArgs, format: &str) -> Result<(), CliError> {
    let (_, loaded) = read_scenario(run)?;
    let out = phase_output(&loaded)?;
    let content = match format {
        "csv" => {
            let mut s = String::from("sigma,phase,quad_error,model,scenario_digest\n");
            for e in &out.entries {
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    e.sigma, e.phase, e.quad_error, out.model, out.scenario_digest
                ));
            }
            s
        }
        _ => to_json(&out)?,
    };
    write_output(&run.out, &content)
}

#[derive(Serialize)]
struct EntangleOut {
    command: &'static str,
    model: ActionModel,
    scenario_digest: String,
    tolerance: f64,
    negativity: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    concurrence: Option<f64>,
    is_separable_by_phase_additivity: bool,
    phase_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta_phi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta_phi_mod_2pi: Option<f64>,
}

fn cmd_entangle(run: &RunArgs, amplitudes: Option<&str>) -> Result<(), CliError> {
    let (_, loaded) = read_scenario(run)?;
    let table = phase_table(&loaded.scenario, loaded.model, loaded.tolerance)
        .map_err(CliError::from_core)?;
    let n = loaded.scenario.n_particles();
    let state = match amplitudes {
        None => SpinState::uniform(n),
        Some(text) => {
            let amps = parse_amplitudes(text)?;
            if amps.len() != 1 << n {
                return Err(CliError::schema(format!(
                    "--amplitudes: expected {} values for {} particles, got {}",
                    1 << n,
                    n,
                    amps.len()
                )));
            }
            SpinState::normalized(amps).map_err(CliError::from_core)?
        }
    };
    // additive below ten quadrature errors means no entanglement beyond noise
    let additivity_tol = 10.0 * loaded.tolerance;
    let report = entanglement_report(&state, &table, additivity_tol).map_err(CliError::from_core)?;
    let out = EntangleOut {
        command: "entangle",
        model: table.model,
        scenario_digest: table.scenario_digest.clone(),
        tolerance: loaded.tolerance,
        negativity: report.negativity,
        concurrence: report.concurrence,
        is_separable_by_phase_additivity: report.is_separable_by_phase_additivity,
        phase_residual: report.phase_residual,
        delta_phi: table.delta_phi().ok(),
        delta_phi_mod_2pi: table.delta_phi().ok().map(wrap_to_pi),
    };
    write_output(&run.out, &to_json(&out)?)
}

fn cmd_sweep(run: &RunArgs, param: &str, range: &str, steps: usize) -> Result<(), CliError> {
    if steps == 0 {
        return Err(CliError::schema("--steps: must be at least 1".into()));
    }
    let (lo, hi) = parse_range(range)?;
    let text = std::fs::read_to_string(&run.file)
        .map_err(|e| CliError::schema(format!("{}: {e}", run.file.display())))?;
    let base: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::schema(format!("scenario file: {e}")))?;

    let mut csv = String::from("param,phi_uu,phi_ud,phi_du,phi_dd,delta_phi,negativity,model\n");
    for k in 0..steps {
        let value = if steps == 1 {
            lo
        } else {
            lo + (hi - lo) * k as f64 / (steps - 1) as f64
        };
        let mut doc = base.clone();
        set_path(&mut doc, param, value)?;
        let file: ScenarioFile = serde_json::from_value(doc)
            .map_err(|e| CliError::schema(format!("scenario file after sweep substitution: {e}")))?;
        let loaded = file.load(parse_model(run.model.as_deref())?, run.tol)?;
        if loaded.scenario.n_particles() != 2 {
            return Err(CliError::schema(
                "sweep output columns assume a two-particle scenario".into(),
            ));
        }
        for model in ActionModel::all() {
            let table = phase_table(&loaded.scenario, model, loaded.tolerance)
                .map_err(CliError::from_core)?;
            let report =
                entanglement_report(&SpinState::uniform(2), &table, 10.0 * loaded.tolerance)
                    .map_err(CliError::from_core)?;
            let p = table.phases();
            csv.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                value,
                p[0],
                p[1],
                p[2],
                p[3],
                table.delta_phi().map_err(CliError::from_core)?,
                report.negativity,
                model
            ));
        }
    }
    write_output(&run.out, &csv)
}

fn cmd_validate(tol_scale: f64) -> Result<(), CliError> {
    if !(tol_scale > 0.0) {
        return Err(CliError::schema(format!("--tol-scale: must be positive, got {tol_scale}")));
    }
    let results = run_all(&ValidationOptions { tol_scale, bilinear_fault: None });
    let mut all_ok = true;
    for r in &results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!("{status} {} — {}", r.name, r.detail);
        all_ok &= r.passed;
    }
    if all_ok {
        println!("all {} checks passed", results.len());
        Ok(())
    } else {
        Err(CliError::Numerical("validation checks failed".into()))
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| CliError::schema(format!("serialization: {e}")))
}

fn parse_range(text: &str) -> Result<(f64, f64), CliError> {
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| CliError::schema(format!("--range: expected \"lo:hi\", got '{text}'")))?;
    let lo: f64 = lo
        .trim()
        .parse()
        .map_err(|_| CliError::schema(format!("--range: '{lo}' is not a number")))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .map_err(|_| CliError::schema(format!("--range: '{hi}' is not a number")))?;
    Ok((lo, hi))
}

/// Replaces the numeric leaf at a dotted path; an object leaf with a "value"
/// key (a unit-tagged quantity) has its "value" replaced instead.
fn set_path(doc: &mut serde_json::Value, path: &str, value: f64) -> Result<(), CliError> {
    let mut node = doc;
    for token in path.split('.') {
        node = match node {
            serde_json::Value::Object(map) => map.get_mut(token).ok_or_else(|| {
                CliError::schema(format!("--param: no field '{token}' along '{path}'"))
            })?,
            serde_json::Value::Array(items) => {
                let idx: usize = token.parse().map_err(|_| {
                    CliError::schema(format!("--param: '{token}' is not an array index in '{path}'"))
                })?;
                items.get_mut(idx).ok_or_else(|| {
                    CliError::schema(format!("--param: index {idx} out of bounds in '{path}'"))
                })?
            }
            _ => {
                return Err(CliError::schema(format!(
                    "--param: '{token}' cannot be reached inside a scalar in '{path}'"
                )))
            }
        };
    }
    let number = serde_json::Number::from_f64(value)
        .ok_or_else(|| CliError::schema(format!("--param: value {value} is not representable")))?;
    match node {
        serde_json::Value::Object(map) if map.contains_key("value") => {
            map.insert("value".into(), serde_json::Value::Number(number));
        }
        serde_json::Value::Number(_) => {
            *node = serde_json::Value::Number(number);
        }
        _ => {
            return Err(CliError::schema(format!(
                "--param: '{path}' does not point at a number or a {{value, unit}} object"
            )))
        }
    }
    Ok(())
}

/// Parses comma-separated complex amplitudes: each token is `a`, `bi`, or
/// `a+bi` / `a-bi` (also accepts `j`).
fn parse_amplitudes(text: &str) -> Result<Vec<Complex64>, CliError> {
    text.split(',')
        .map(|tok| {
            parse_complex(tok.trim())
                .ok_or_else(|| CliError::schema(format!("--amplitudes: cannot parse '{tok}'")))
        })
        .collect()
}

fn parse_complex(tok: &str) -> Option<Complex64> {
    if tok.is_empty() {
        return None;
    }
    let t = tok.replace('j', "i");
    if let Ok(re) = t.parse::<f64>() {
        return Some(Complex64::new(re, 0.0));
    }
    if let Some(im_text) = t.strip_suffix('i') {
        // pure imaginary, including bare "i" and "-i"
        let im_text = if im_text.is_empty() || im_text == "+" || im_text == "-" {
            format!("{im_text}1")
        } else {
            im_text.to_string()
        };
        if let Ok(im) = im_text.parse::<f64>() {
            return Some(Complex64::new(0.0, im));
        }
        // a+bi: split at the last +/- that is not an exponent sign
        let bytes = im_text.as_bytes();
        for split in (1..im_text.len()).rev() {
            let ch = bytes[split] as char;
            if (ch == '+' || ch == '-') && bytes[split - 1] as char != 'e' && bytes[split - 1] as char != 'E' {
                let re: f64 = im_text[..split].parse().ok()?;
                let im_part = &im_text[split..];
                let im: f64 = if im_part == "+" || im_part == "-" {
                    format!("{im_part}1").parse().ok()?
                } else {
                    im_part.parse().ok()?
                };
                return Some(Complex64::new(re, im));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_amplitude_forms() {
        assert_eq!(parse_complex("0.5"), Some(Complex64::new(0.5, 0.0)));
        assert_eq!(parse_complex("-2e-3"), Some(Complex64::new(-2e-3, 0.0)));
        assert_eq!(parse_complex("i"), Some(Complex64::new(0.0, 1.0)));
        assert_eq!(parse_complex("-i"), Some(Complex64::new(0.0, -1.0)));
        assert_eq!(parse_complex("0.5i"), Some(Complex64::new(0.0, 0.5)));
        assert_eq!(parse_complex("1+2i"), Some(Complex64::new(1.0, 2.0)));
        assert_eq!(parse_complex("1-0.5i"), Some(Complex64::new(1.0, -0.5)));
        assert_eq!(parse_complex("1e-2+3e-4i"), Some(Complex64::new(1e-2, 3e-4)));
        assert_eq!(parse_complex("2j"), Some(Complex64::new(0.0, 2.0)));
        assert_eq!(parse_complex(""), None);
        assert_eq!(parse_complex("abc"), None);
    }

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("1:2").unwrap(), (1.0, 2.0));
        assert_eq!(parse_range(" -1e-3 : 4.5 ").unwrap(), (-1e-3, 4.5));
        assert!(parse_range("1").is_err());
        assert!(parse_range("a:b").is_err());
    }

    #[test]
    fn set_path_replaces_numbers_and_quantity_values() {
        let mut doc: serde_json::Value = serde_json::from_str(
            r#"{"a": {"b": [{"c": 1.0}, {"c": {"value": 2.0, "unit": "ns"}}]}}"#,
        )
        .unwrap();
        set_path(&mut doc, "a.b.0.c", 5.0).unwrap();
        set_path(&mut doc, "a.b.1.c", 7.0).unwrap();
        assert_eq!(doc["a"]["b"][0]["c"], 5.0);
        assert_eq!(doc["a"]["b"][1]["c"]["value"], 7.0);
        assert_eq!(doc["a"]["b"][1]["c"]["unit"], "ns");
        assert!(set_path(&mut doc, "a.nope", 1.0).is_err());
        assert!(set_path(&mut doc, "a.b.9.c", 1.0).is_err());
    }
}
