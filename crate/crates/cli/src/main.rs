//! Command-line front end: model definition via flags or a TOML config,
//! parameter sweeps, and CSV/JSON emission for plotting and regression
//! tests. Output is deterministic: identical configuration yields
//! byte-identical files.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use leedecay::poles::{find_pole, two_pole_closed};
use leedecay::reduction::{cascade, effective_2x2, two_pole_reduce, CascadeSummary};
use leedecay::spectral::{FormFactor, LeeModel};
use leedecay::survival::{
    amplitude_oracle, amplitude_spectral, rabi_survival, two_pole_series, ExactAmplitude, Method,
    SurvivalSeries,
};
use leedecay::zeno::{
    continuous_asymptote, continuous_rate, effective_rate_pulsed, free_width, zeno_report,
};

#[derive(Parser)]
#[command(
    name = "leedecay",
    about = "Survival dynamics of a discrete state decaying into a continuum",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Survival probability P(t) by one or more methods
    Survival(RunArgs),
    /// Pulsed-measurement sweep: gamma_eff(tau), regimes, transition times
    Zeno(RunArgs),
    /// Decay pole data (position, width, residue, Z)
    Poles(RunArgs),
    /// Continuous-measurement sweep: gamma_eff(Gamma) with its asymptote
    Continuous(RunArgs),
    /// Effective two-pole reduction and cascade equivalent
    Reduce(RunArgs),
    /// Emit the data files behind the standard figure set
    Figures(FigArgs),
}

#[derive(Args, Clone, Default)]
struct RunArgs {
    /// One of: lorentzian, flat, dirac, tabulated
    #[arg(long = "form-factor")]
    form_factor: Option<String>,
    /// Coupling strength (lorentzian, dirac)
    #[arg(long)]
    lambda: Option<f64>,
    /// Lorentzian bandwidth
    #[arg(long = "Lambda")]
    big_lambda: Option<f64>,
    /// Flat-band decay rate
    #[arg(long)]
    gamma: Option<f64>,
    /// Discrete-state energy (default 0)
    #[arg(long = "omega-a")]
    omega_a: Option<f64>,
    /// Dirac level position (default 0)
    #[arg(long)]
    omega0: Option<f64>,
    /// CSV file with header `omega,g2` for a tabulated density
    #[arg(long)]
    table: Option<PathBuf>,
    /// Time grid: `lin:a:b:n`, `log:a:b:n`, or comma-separated values
    #[arg(long = "t-grid")]
    t_grid: Option<String>,
    /// Measurement-interval grid, same syntax
    #[arg(long = "tau-grid")]
    tau_grid: Option<String>,
    /// Continuous measurement strength grid, same syntax
    #[arg(long = "Gamma-grid")]
    gamma_grid: Option<String>,
    /// Comma-separated methods: two-pole, spectral, oracle, ww, rabi
    #[arg(long)]
    method: Option<String>,
    /// Output file (stdout when omitted); zeno also writes `<out>.json`
    #[arg(long)]
    out: Option<PathBuf>,
    /// TOML config file; explicit flags take precedence over its values
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct FigArgs {
    /// Output directory for fig1.csv … fig5.csv
    #[arg(long, default_value = "figures")]
    out: PathBuf,
}

/// TOML mirror of the model/run flags; any flag given on the command line
/// overrides the corresponding file value.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    form_factor: Option<String>,
    lambda: Option<f64>,
    #[serde(rename = "Lambda")]
    big_lambda: Option<f64>,
    gamma: Option<f64>,
    omega_a: Option<f64>,
    omega0: Option<f64>,
    table: Option<PathBuf>,
    t_grid: Option<String>,
    tau_grid: Option<String>,
    #[serde(rename = "Gamma_grid")]
    gamma_grid: Option<String>,
    method: Option<String>,
    out: Option<PathBuf>,
}

/// Fully resolved run configuration.
struct RunConfig {
    model: LeeModel,
    t_grid: Option<Vec<f64>>,
    tau_grid: Option<Vec<f64>>,
    gamma_grid: Option<Vec<f64>>,
    methods: Option<Vec<String>>,
    out: Option<PathBuf>,
}

fn merge(args: RunArgs) -> Result<RunConfig, String> {
    let file: FileConfig = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
            toml::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))?
        }
        None => FileConfig::default(),
    };
    let form_factor = args
        .form_factor
        .or(file.form_factor)
        .ok_or("missing --form-factor (lorentzian|flat|dirac|tabulated)")?;
    let lambda = args.lambda.or(file.lambda);
    let big_lambda = args.big_lambda.or(file.big_lambda);
    let gamma = args.gamma.or(file.gamma);
    let omega_a = args.omega_a.or(file.omega_a).unwrap_or(0.0);
    let omega0 = args.omega0.or(file.omega0).unwrap_or(0.0);
    let table = args.table.or(file.table);

    let ff = match form_factor.as_str() {
        "lorentzian" => FormFactor::lorentzian(
            lambda.ok_or("lorentzian needs --lambda")?,
            big_lambda.unwrap_or(1.0),
        ),
        "flat" => FormFactor::flat_band(gamma.ok_or("flat band needs --gamma")?),
        "dirac" => FormFactor::dirac(lambda.ok_or("dirac needs --lambda")?, omega0),
        "tabulated" => {
            let path = table.ok_or("tabulated needs --table <csv>")?;
            let text = fs::read_to_string(&path)
                .map_err(|e| format!("cannot read table {}: {e}", path.display()))?;
            FormFactor::from_csv(&text)
        }
        other => return Err(format!("unknown form factor `{other}`")),
    }
    .map_err(|e| e.to_string())?;
    let model = LeeModel::new(omega_a, ff).map_err(|e| e.to_string())?;

    let parse_opt = |s: Option<String>, name: &str| -> Result<Option<Vec<f64>>, String> {
        s.map(|g| parse_grid(&g).map_err(|e| format!("bad {name} `{g}`: {e}")))
            .transpose()
    };
    Ok(RunConfig {
        model,
        t_grid: parse_opt(args.t_grid.or(file.t_grid), "--t-grid")?,
        tau_grid: parse_opt(args.tau_grid.or(file.tau_grid), "--tau-grid")?,
        gamma_grid: parse_opt(args.gamma_grid.or(file.gamma_grid), "--Gamma-grid")?,
        methods: args
            .method
            .or(file.method)
            .map(|m| m.split(',').map(|s| s.trim().to_string()).collect()),
        out: args.out.or(file.out),
    })
}

/// `lin:a:b:n`, `log:a:b:n`, or a comma list; must be non-empty and
/// strictly increasing.
fn parse_grid(spec: &str) -> Result<Vec<f64>, String> {
    let values: Vec<f64> = if let Some(rest) = spec.strip_prefix("lin:") {
        let (a, b, n) = parse_range(rest)?;
        (0..n)
            .map(|i| a + (b - a) * i as f64 / (n - 1).max(1) as f64)
            .collect()
    } else if let Some(rest) = spec.strip_prefix("log:") {
        let (a, b, n) = parse_range(rest)?;
        if a <= 0.0 || b <= 0.0 {
            return Err("log grid needs positive endpoints".into());
        }
        (0..n)
            .map(|i| a * (b / a).powf(i as f64 / (n - 1).max(1) as f64))
            .collect()
    } else {
        spec.split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|e| e.to_string()))
            .collect::<Result<Vec<f64>, String>>()?
    };
    if values.is_empty() {
        return Err("empty grid".into());
    }
    if values.windows(2).any(|w| !(w[1] > w[0])) {
        return Err("grid must be strictly increasing".into());
    }
    Ok(values)
}

fn parse_range(rest: &str) -> Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = rest.split(':').collect();
    if parts.len() != 3 {
        return Err("expected a:b:n".into());
    }
    let a: f64 = parts[0].parse().map_err(|e| format!("{e}"))?;
    let b: f64 = parts[1].parse().map_err(|e| format!("{e}"))?;
    let n: usize = parts[2].parse().map_err(|e| format!("{e}"))?;
    if n < 2 || !(b > a) {
        return Err("need n >= 2 and b > a".into());
    }
    Ok((a, b, n))
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => {
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    fs::create_dir_all(parent).map_err(|e| e.to_string())?;
                }
            }
            fs::write(path, content).map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => {
            print!("{content}");
            std::io::stdout().flush().map_err(|e| e.to_string())
        }
    }
}

/// Default time grid: logarithmic through the short-time region, then
/// linear through the exponential era.
fn default_t_grid(model: &LeeModel) -> Vec<f64> {
    let horizon = free_width(model).map(|g| 10.0 / g).unwrap_or(50.0).min(1e4);
    let mut grid = vec![0.0];
    for i in 0..100 {
        grid.push(1e-3 * (1.0_f64 / 1e-3).powf(i as f64 / 99.0));
    }
    let start = *grid.last().unwrap();
    for i in 1..=400 {
        grid.push(start + (horizon - start) * i as f64 / 400.0);
    }
    grid
}

fn cmd_survival(cfg: &RunConfig) -> Result<(), Vec<String>> {
    let times = cfg.t_grid.clone().unwrap_or_else(|| default_t_grid(&cfg.model));
    let default_method = match &cfg.model.form_factor {
        FormFactor::Lorentzian { .. } => "two-pole",
        _ => "spectral",
    };
    let methods: Vec<String> = cfg
        .methods
        .clone()
        .unwrap_or_else(|| vec![default_method.to_string()]);

    let mut failures = Vec::new();
    let mut buf = Vec::new();
    let mut first = true;
    for method in &methods {
        match run_survival_method(&cfg.model, method, &times) {
            Ok(series) => {
                series.write_csv(&mut buf, first).map_err(|e| vec![e.to_string()])?;
                first = false;
            }
            Err(e) => failures.push(format!("survival method `{method}`: {e}")),
        }
    }
    if !first {
        let content = String::from_utf8(buf).expect("CSV is UTF-8");
        write_output(&cfg.out, &content).map_err(|e| vec![e])?;
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(failures)
    }
}

fn run_survival_method(
    model: &LeeModel,
    method: &str,
    times: &[f64],
) -> Result<SurvivalSeries, String> {
    match method {
        "two-pole" => match &model.form_factor {
            FormFactor::Lorentzian { coupling, bandwidth } => {
                let p = two_pole_closed(*coupling, *bandwidth, model.omega_a);
                Ok(two_pole_series(&p, times))
            }
            _ => Err("two-pole needs a lorentzian form factor".into()),
        },
        "spectral" => amplitude_spectral(model, times).map_err(|e| e.to_string()),
        "oracle" => {
            let n = if matches!(model.form_factor, FormFactor::Dirac { .. }) { 1 } else { 2000 };
            amplitude_oracle(model, n, times).map_err(|e| e.to_string())
        }
        "ww" => {
            let ww = leedecay::weisskopf_wigner(model).map_err(|e| e.to_string())?;
            let amplitude: Vec<Complex64> = times.iter().map(|&t| ww.amplitude(t)).collect();
            Ok(SurvivalSeries {
                times: times.to_vec(),
                amplitude,
                method: Method::WeisskopfWigner,
            })
        }
        "rabi" => match &model.form_factor {
            FormFactor::Dirac { coupling, location } if *location == 0.0 => {
                let amplitude: Vec<Complex64> = times
                    .iter()
                    .map(|&t| rabi_survival(*coupling, model.omega_a, t).amplitude)
                    .collect();
                Ok(SurvivalSeries { times: times.to_vec(), amplitude, method: Method::Rabi })
            }
            _ => Err("rabi needs a dirac form factor at omega0 = 0".into()),
        },
        other => Err(format!(
            "unknown method `{other}` (expected two-pole, spectral, oracle, ww, or rabi)"
        )),
    }
}

fn cmd_zeno(cfg: &RunConfig) -> Result<(), Vec<String>> {
    let taus = match &cfg.tau_grid {
        Some(g) => g.clone(),
        None => {
            let gamma = free_width(&cfg.model).map_err(|e| vec![e.to_string()])?;
            parse_grid(&format!("log:1e-4:{}:200", 8.0 / gamma)).expect("valid default grid")
        }
    };
    let report = zeno_report(&cfg.model, &taus).map_err(|e| vec![e.to_string()])?;
    let mut buf = Vec::new();
    report.write_csv(&mut buf, true).map_err(|e| vec![e.to_string()])?;
    let csv = String::from_utf8(buf).expect("CSV is UTF-8");
    let json =
        serde_json::to_string_pretty(&report.summary).map_err(|e| vec![e.to_string()])? + "\n";
    match &cfg.out {
        Some(path) => {
            write_output(&cfg.out, &csv).map_err(|e| vec![e])?;
            let json_path = path.with_extension("json");
            fs::write(&json_path, json)
                .map_err(|e| vec![format!("cannot write {}: {e}", json_path.display())])?;
        }
        None => {
            print!("{csv}{json}");
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct PoleReport {
    re_e_pole: f64,
    im_e_pole: f64,
    shift: f64,
    width: f64,
    re_residue: f64,
    im_residue: f64,
    #[serde(rename = "Z")]
    z: f64,
    gamma_golden_rule: Option<f64>,
    closed_form: Option<ClosedForm>,
}

#[derive(Serialize)]
struct ClosedForm {
    re_e1: f64,
    im_e1: f64,
    re_e2: f64,
    im_e2: f64,
    upsilon_sq: f64,
}

fn cmd_poles(cfg: &RunConfig) -> Result<(), Vec<String>> {
    let p = find_pole(&cfg.model).map_err(|e| vec![e.to_string()])?;
    let closed_form = match &cfg.model.form_factor {
        FormFactor::Lorentzian { coupling, bandwidth } => {
            let c = two_pole_closed(*coupling, *bandwidth, cfg.model.omega_a);
            Some(ClosedForm {
                re_e1: c.e1.re,
                im_e1: c.e1.im,
                re_e2: c.e2.re,
                im_e2: c.e2.im,
                upsilon_sq: c.upsilon_sq,
            })
        }
        _ => None,
    };
    let report = PoleReport {
        re_e_pole: p.e_pole.re,
        im_e_pole: p.e_pole.im,
        shift: p.shift,
        width: p.width,
        re_residue: p.residue.re,
        im_residue: p.residue.im,
        z: p.z,
        gamma_golden_rule: cfg.model.golden_rule().ok(),
        closed_form,
    };
    let json = serde_json::to_string_pretty(&report).map_err(|e| vec![e.to_string()])? + "\n";
    write_output(&cfg.out, &json).map_err(|e| vec![e])
}

fn cmd_continuous(cfg: &RunConfig) -> Result<(), Vec<String>> {
    let strengths = match &cfg.gamma_grid {
        Some(g) => g.clone(),
        None => parse_grid("log:1e-2:1e3:121").expect("valid default grid"),
    };
    let mut failures = Vec::new();
    let mut out = String::from("Gamma,gamma_eff,asymptote\n");
    for &strength in &strengths {
        match continuous_rate(&cfg.model, strength) {
            Ok(c) => {
                let asym = continuous_asymptote(&cfg.model, strength)
                    .map_err(|e| vec![e.to_string()])?;
                out.push_str(&format!(
                    "{:.16e},{:.16e},{:.16e}\n",
                    strength, c.gamma_eff, asym
                ));
            }
            Err(e) => failures.push(format!("continuous at Gamma = {strength}: {e}")),
        }
    }
    write_output(&cfg.out, &out).map_err(|e| vec![e])?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(failures)
    }
}

#[derive(Serialize)]
struct ReduceReport {
    two_pole: leedecay::TwoPoleReduction,
    cascade: CascadeSummary,
    effective_2x2: Option<Effective2x2Report>,
}

#[derive(Serialize)]
struct Effective2x2Report {
    re_e1: f64,
    im_e1: f64,
    re_e2: f64,
    im_e2: f64,
}

fn cmd_reduce(cfg: &RunConfig) -> Result<(), Vec<String>> {
    let two_pole = two_pole_reduce(&cfg.model).map_err(|e| vec![e.to_string()])?;
    let c = cascade(&cfg.model).map_err(|e| vec![e.to_string()])?;
    // fixed off-axis sample ring for the serialized Sigma_b values
    let samples: Vec<Complex64> = (0..8)
        .map(|k| {
            let angle = std::f64::consts::PI * (2.0 * k as f64 + 1.0) / 8.0;
            2.0 * Complex64::new(angle.cos(), angle.sin())
        })
        .collect();
    let cascade_summary = c.summary(&samples).map_err(|e| vec![e.to_string()])?;
    let effective = match &cfg.model.form_factor {
        FormFactor::Lorentzian { coupling, bandwidth } => {
            let m = effective_2x2(*coupling, *bandwidth, cfg.model.omega_a);
            Some(Effective2x2Report {
                re_e1: m.e1.re,
                im_e1: m.e1.im,
                re_e2: m.e2.re,
                im_e2: m.e2.im,
            })
        }
        _ => None,
    };
    let report =
        ReduceReport { two_pole, cascade: cascade_summary, effective_2x2: effective };
    let json = serde_json::to_string_pretty(&report).map_err(|e| vec![e.to_string()])? + "\n";
    write_output(&cfg.out, &json).map_err(|e| vec![e])
}

fn cmd_figures(args: &FigArgs) -> Result<(), Vec<String>> {
    fs::create_dir_all(&args.out).map_err(|e| vec![e.to_string()])?;
    let write = |name: &str, content: String| -> Result<(), Vec<String>> {
        let path: &Path = args.out.as_ref();
        fs::write(path.join(name), content)
            .map_err(|e| vec![format!("cannot write {name}: {e}")])
    };

    let model = LeeModel::new(1.0, FormFactor::lorentzian(0.1, 1.0).unwrap()).unwrap();
    let p = two_pole_closed(0.1, 1.0, 1.0);
    let tz = model.zeno_time().unwrap();

    // fig1: short-time survival against the quadratic law
    let mut fig1 = String::from("t,P,P_quadratic\n");
    for i in 0..=600 {
        let t = 6.0 * i as f64 / 600.0;
        let prob = leedecay::amplitude_two_pole(&p, t).norm_sqr();
        fig1.push_str(&format!(
            "{:.16e},{:.16e},{:.16e}\n",
            t,
            prob,
            1.0 - t * t / (tz * tz)
        ));
    }
    write("fig1.csv", fig1)?;

    // fig2: full decay era with the single-pole and asymptotic overlays
    let gamma = p.width;
    let mut fig2 = String::from("t,P,P_ww,P_asymptotic\n");
    for i in 0..=800 {
        let t = 10.0 / gamma * i as f64 / 800.0;
        let prob = leedecay::amplitude_two_pole(&p, t).norm_sqr();
        let ww = (-gamma * t).exp();
        let asym = p.z * (-gamma * t).exp();
        fig2.push_str(&format!("{:.16e},{:.16e},{:.16e},{:.16e}\n", t, prob, ww, asym));
    }
    write("fig2.csv", fig2)?;

    // fig3: P(tau) against the free exponential, whose intersections are the
    // transition times
    let m4 = LeeModel::new(4.0, FormFactor::lorentzian(0.1, 1.0).unwrap()).unwrap();
    let p4 = two_pole_closed(0.1, 1.0, 4.0);
    let g4 = p4.width;
    let exact4 = ExactAmplitude::for_model(&m4, 8.0 / g4).map_err(|e| vec![e.to_string()])?;
    let mut fig3 = String::from("tau,P,exp_free\n");
    for i in 0..=800 {
        let tau = 8.0 / g4 * (i as f64 + 1.0) / 801.0;
        fig3.push_str(&format!(
            "{:.16e},{:.16e},{:.16e}\n",
            tau,
            exact4.probability(tau),
            (-g4 * tau).exp()
        ));
    }
    write("fig3.csv", fig3)?;

    // fig4: pulsed effective rate over tau for a family of omega_a/Lambda
    // ratios at fixed coupling
    let mut fig4 = String::from("ratio,tau,gamma_eff,gamma\n");
    for &ratio in &[0.2, 1.0, 2.0, 4.0, 10.0] {
        let m = LeeModel::new(ratio, FormFactor::lorentzian(0.1, 1.0).unwrap()).unwrap();
        let gamma = free_width(&m).unwrap();
        let exact = ExactAmplitude::for_model(&m, 8.0 / gamma).map_err(|e| vec![e.to_string()])?;
        for i in 0..=200 {
            let tau = 1e-2 * (8.0 / gamma / 1e-2_f64).powf(i as f64 / 200.0);
            match effective_rate_pulsed(&exact, tau) {
                Ok(g) => fig4.push_str(&format!(
                    "{:.16e},{:.16e},{:.16e},{:.16e}\n",
                    ratio, tau, g, gamma
                )),
                Err(_) => continue,
            }
        }
    }
    write("fig4.csv", fig4)?;

    // fig5: continuous effective rate and its strong-measurement asymptote
    let mut fig5 = String::from("Gamma,gamma_eff,asymptote\n");
    for i in 0..=200 {
        let strength = 1e-2 * (1e3 / 1e-2_f64).powf(i as f64 / 200.0);
        let c = continuous_rate(&model, strength).map_err(|e| vec![e.to_string()])?;
        let a = continuous_asymptote(&model, strength).map_err(|e| vec![e.to_string()])?;
        fig5.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", strength, c.gamma_eff, a));
    }
    write("fig5.csv", fig5)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = |args: RunArgs, f: fn(&RunConfig) -> Result<(), Vec<String>>| match merge(args) {
        Ok(cfg) => f(&cfg),
        Err(e) => Err(vec![e]),
    };
    let result = match cli.command {
        Command::Figures(args) => cmd_figures(&args),
        Command::Survival(args) => run(args, cmd_survival),
        Command::Zeno(args) => run(args, cmd_zeno),
        Command::Poles(args) => run(args, cmd_poles),
        Command::Continuous(args) => run(args, cmd_continuous),
        Command::Reduce(args) => run(args, cmd_reduce),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failures) => {
            for f in failures {
                eprintln!("error: {f}");
            }
            ExitCode::FAILURE
        }
    }
}
