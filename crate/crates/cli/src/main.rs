use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fresnel_channel::analysis::{
    compute_trace, estimate_los_average, field_map, threshold_crossings, threshold_delay, ChannelTrace,
    CrossingOptions, Direction, Grid, LosReference, Motion, TraceOptions,
};
use fresnel_channel::exec::Exec;
use fresnel_channel::experiments::{num, run_experiment, ExperimentConfig, Table};
use fresnel_channel::scenario::{load_scenario_file, Scenario};
use fresnel_channel::Error;

#[derive(Parser)]
#[command(name = "fchan", version, about = "Fresnel-diffraction multipath channel simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the channel along the scenario path.
    Run(Common),
    /// Normalized field magnitude over a rectangular grid.
    Map {
        #[command(flatten)]
        common: Common,
        /// x0,x1,y0,y1,res in meters.
        #[arg(long, value_parser = parse_grid)]
        grid: Grid,
        /// Map a single component (0 = direct) instead of the total.
        #[arg(long)]
        component: Option<usize>,
    },
    /// Threshold crossings and delays between carriers.
    Analyze {
        #[command(flatten)]
        common: Common,
        /// Threshold as a fraction of the LoS average; defaults to 0.7 falling and 0.3 rising.
        #[arg(long)]
        level: Option<f64>,
    },
    /// Run a named experiment.
    Sweep {
        name: String,
        #[command(flatten)]
        out: OutArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of seeded trials per cell.
        #[arg(long)]
        trials: Option<usize>,
        /// Number of path samples.
        #[arg(long)]
        samples: Option<usize>,
        #[command(flatten)]
        exec: ExecArgs,
    },
}

#[derive(Args)]
struct OutArgs {
    /// Output directory.
    #[arg(long, env = "FCHAN_OUT", default_value = "fchan-out")]
    out: PathBuf,
}

#[derive(Args)]
struct ExecArgs {
    /// Evaluate on one thread.
    #[arg(long)]
    sequential: bool,
}

impl ExecArgs {
    fn exec(&self) -> Exec {
        if self.sequential {
            Exec::Sequential
        } else {
            Exec::Parallel
        }
    }
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    scenario: PathBuf,
    #[command(flatten)]
    out: OutArgs,
    /// Replaces the scenario's seed.
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    exec: ExecArgs,
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match v.as_slice() {
        [x0, x1, y0, y1, res] => Ok(Grid {
            x0: *x0,
            x1: *x1,
            y0: *y0,
            y1: *y1,
            res: *res,
        }),
        _ => Err("expected x0,x1,y0,y1,res".into()),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn dispatch(cmd: Command) -> Result<(), Error> {
    match cmd {
        Command::Run(c) => cmd_run(&c),
        Command::Map {
            common,
            grid,
            component,
        } => cmd_map(&common, &grid, component),
        Command::Analyze { common, level } => cmd_analyze(&common, level),
        Command::Sweep {
            name,
            out,
            seed,
            trials,
            samples,
            exec,
        } => {
            let cfg = ExperimentConfig {
                seed,
                exec: exec.exec(),
                trials,
                samples,
            };
            let output = run_experiment(&name, &cfg)?;
            let dir = output.write(&out.out)?;
            println!("{}", dir.display());
            Ok(())
        }
    }
}

fn load(c: &Common) -> Result<Scenario, Error> {
    let loaded = load_scenario_file(&c.scenario)?;
    for w in &loaded.warnings {
        log::warn!("{w}");
    }
    let mut s = loaded.scenario;
    if let Some(seed) = c.seed {
        s.seed = seed;
    }
    Ok(s)
}

fn stem(c: &Common) -> String {
    c.scenario
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scenario".into())
}

fn create_dir(dir: &Path) -> Result<(), Error> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))
}

/// LoS average used for normalization; falls back to the path maximum when
/// the path never has a clear first Fresnel zone.
fn reference(trace: &ChannelTrace, fi: usize) -> Result<(f64, LosReference), Error> {
    match estimate_los_average(trace, fi, LosReference::FresnelClear) {
        Ok(r) => Ok((r, LosReference::FresnelClear)),
        Err(Error::NoLosReference) => {
            log::warn!(
                "no LoS stretch at {} Hz; normalizing to the path maximum",
                trace.frequencies[fi].spec.center
            );
            Ok((
                estimate_los_average(trace, fi, LosReference::Maximum)?,
                LosReference::Maximum,
            ))
        }
        Err(e) => Err(e),
    }
}

fn cmd_run(c: &Common) -> Result<(), Error> {
    let s = load(c)?;
    let trace = compute_trace(
        &s,
        TraceOptions {
            keep_parts: true,
            exec: c.exec.exec(),
        },
    )?;
    let m = s.expanded_reflectors().len() + 1;
    let mut header: Vec<String> = [
        "x_m",
        "y_m",
        "f_hz",
        "h_re",
        "h_im",
        "h_abs",
        "h_abs_norm",
        "band_power",
    ]
    .iter()
    .map(|h| h.to_string())
    .collect();
    for k in 0..m {
        header.extend([format!("m{k}_re"), format!("m{k}_im"), format!("m{k}_aoa_deg")]);
    }
    let mut table = Table {
        header,
        rows: Vec::new(),
    };
    for (fi, ft) in trace.frequencies.iter().enumerate() {
        let (r, _) = reference(&trace, fi)?;
        let comp = trace.compensated(fi)?;
        let parts = ft.parts.as_ref().expect("parts requested");
        for (i, p) in trace.points.iter().enumerate() {
            let h = ft.totals[i];
            let power = ft.band_power.as_ref().map_or(h.norm_sqr(), |b| b[i]);
            let mut row = vec![
                num(p.x),
                num(p.y),
                num(ft.spec.center),
                num(h.re),
                num(h.im),
                num(h.norm()),
                num(comp[i] / r),
                num(power),
            ];
            for part in &parts[i] {
                row.extend([num(part.value.re), num(part.value.im), num(part.aoa_deg)]);
            }
            table.push(row);
        }
    }
    create_dir(&c.out.out)?;
    let path = c.out.out.join(format!("{}.csv", stem(c)));
    table.write_csv(&path)?;
    println!("{}", path.display());
    Ok(())
}

fn cmd_map(c: &Common, grid: &Grid, component: Option<usize>) -> Result<(), Error> {
    use std::io::Write;
    let s = load(c)?;
    let reflectors = s.expanded_reflectors();
    create_dir(&c.out.out)?;
    for f in &s.frequencies {
        let map = field_map(
            &s.transmitter,
            &reflectors,
            &s.antenna,
            f.center,
            grid,
            component,
            c.exec.exec(),
        )?;
        let path = c.out.out.join(format!("{}_map_{}.csv", stem(c), num(f.center)));
        let io = |e: std::io::Error| Error::Io(format!("{}: {e}", path.display()));
        let mut file = std::io::BufWriter::new(std::fs::File::create(&path).map_err(io)?);
        writeln!(file, "# h_abs_norm = |h| / ({})", map.reference).map_err(io)?;
        let mut w = csv::Writer::from_writer(file);
        w.write_record(["x_m", "y_m", "h_abs_norm"])?;
        for (iy, y) in map.ys.iter().enumerate() {
            for (ix, x) in map.xs.iter().enumerate() {
                w.write_record([num(*x), num(*y), num(map.values[iy * map.xs.len() + ix])])?;
            }
        }
        w.flush()?;
        println!("{}", path.display());
    }
    Ok(())
}

fn cmd_analyze(c: &Common, level: Option<f64>) -> Result<(), Error> {
    if let Some(l) = level {
        if !(l > 0.0 && l < 1.0) {
            return Err(Error::validation("level", "must be in (0, 1)"));
        }
        if (l - 0.5).abs() < 1e-12 {
            eprintln!("warning: the 50% point of edge diffraction does not depend on frequency; delays at this level carry no lead");
        }
    }
    let s = load(c)?;
    let trace = compute_trace(
        &s,
        TraceOptions {
            keep_parts: false,
            exec: c.exec.exec(),
        },
    )?;
    let options = [
        CrossingOptions::new(level.unwrap_or(0.7), Direction::Falling, Motion::Reverse),
        CrossingOptions::new(level.unwrap_or(0.3), Direction::Rising, Motion::Forward),
    ];
    let mut events = Table::new(&["f_hz", "position_m", "direction", "level"]);
    let mut refs = Vec::new();
    for fi in 0..trace.frequencies.len() {
        let (r, mode) = reference(&trace, fi)?;
        refs.push(mode);
        for o in &options {
            for e in threshold_crossings(&trace, fi, r, o)? {
                events.push(vec![
                    num(e.frequency),
                    num(e.position),
                    e.direction.as_str().into(),
                    num(e.level),
                ]);
            }
        }
    }
    let mut order: Vec<usize> = (0..trace.frequencies.len()).collect();
    order.sort_by(|a, b| {
        trace.frequencies[*a]
            .spec
            .center
            .total_cmp(&trace.frequencies[*b].spec.center)
    });
    let mut delays = Table::new(&["f_low", "f_high", "direction", "level", "delay_m"]);
    for (k, &lo) in order.iter().enumerate() {
        for &hi in &order[k + 1..] {
            for o in &options {
                let mode = if refs[lo] == refs[hi] {
                    refs[lo]
                } else {
                    LosReference::Maximum
                };
                let d = match threshold_delay(&trace, lo, hi, mode, o) {
                    Ok(d) => num(d),
                    Err(Error::NoCrossing(f)) => {
                        log::warn!("no {} crossing at {f} Hz", o.direction.as_str());
                        String::new()
                    }
                    Err(e) => return Err(e),
                };
                delays.push(vec![
                    num(trace.frequencies[lo].spec.center),
                    num(trace.frequencies[hi].spec.center),
                    o.direction.as_str().into(),
                    num(o.level),
                    d,
                ]);
            }
        }
    }
    create_dir(&c.out.out)?;
    events.write_csv(&c.out.out.join("events.csv"))?;
    delays.write_csv(&c.out.out.join("delays.csv"))?;
    println!("{}", c.out.out.display());
    Ok(())
}
