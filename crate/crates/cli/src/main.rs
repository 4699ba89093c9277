use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lieform::experiments::{fit_convergence_slope, group_by_scheme, Scenario};
use lieform::{read_errors_csv, run_scenario, Error, ErrorRecord, SchemeKind};

#[derive(Parser, Debug)]
#[command(name = "lieform", version, about = "Lie advection of discrete forms on periodic grids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a named scenario and write errors.csv, field dumps and images.
    Run {
        /// square-translate, rudman-vortex, convergence-smooth-constant,
        /// convergence-smooth-vortex, convergence-discontinuous, scalar-0form,
        /// volume-2form-equivalence
        scenario: Scenario,
        /// Grid resolutions, e.g. 16,32,64.
        #[arg(long, value_delimiter = ',')]
        res: Option<Vec<usize>>,
        /// Time step at the first resolution; scaled with h at the others.
        #[arg(long)]
        dt: Option<f64>,
        /// Steps at the first resolution (per leg for vortex scenarios).
        #[arg(long)]
        steps: Option<usize>,
        /// Schemes to run: upwind, weno5, weno7.
        #[arg(long, value_delimiter = ',')]
        scheme: Option<Vec<SchemeKind>>,
        /// Output directory [default: out/<scenario>].
        #[arg(long)]
        out: Option<PathBuf>,
        /// Constant velocity VX,VY for the non-vortex scenarios.
        #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true)]
        velocity: Option<Vec<f64>>,
        /// Write runtime_ms as 0 so repeated runs give identical files.
        #[arg(long)]
        no_timing: bool,
        /// Also dump the field every N steps.
        #[arg(long)]
        dump_every: Option<usize>,
        /// Skip the PGM images.
        #[arg(long)]
        no_images: bool,
    },
    /// Fit convergence slopes to an errors.csv table.
    Slope { csv: PathBuf },
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Courant { .. } | Error::NonFinite(_) => 3,
        Error::Io { .. } | Error::Parse { .. } => 4,
        _ => 2,
    }
}

fn print_table(records: &[ErrorRecord]) {
    println!("{:>10}  {:>7}  {:>12}  {:>12}  {:>11}", "resolution", "scheme", "l1", "l2", "runtime_ms");
    for r in records {
        println!(
            "{:>10}  {:>7}  {:>12.5e}  {:>12.5e}  {:>11.1}",
            r.resolution, r.scheme, r.l1, r.l2, r.runtime_ms
        );
    }
}

fn print_slopes(records: &[ErrorRecord], strict: bool) -> Result<(), Error> {
    for (scheme, recs) in group_by_scheme(records) {
        match fit_convergence_slope(&recs) {
            Ok(fit) => println!("{scheme}: L1 slope {}, L2 slope {}", fit.l1, fit.l2),
            Err(e) if strict => return Err(e),
            Err(_) => {}
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run {
            scenario,
            res,
            dt,
            steps,
            scheme,
            out,
            velocity,
            no_timing,
            dump_every,
            no_images,
        } => {
            let mut params = scenario.defaults();
            if let Some(res) = res {
                params.resolutions = res;
            }
            if let Some(schemes) = scheme {
                params.schemes = schemes;
            }
            if dt.is_some() {
                params.dt = dt;
            }
            if steps.is_some() {
                params.steps = steps;
            }
            if let Some(v) = velocity {
                let [vx, vy] = v[..] else {
                    return Err(Error::Config(format!("--velocity takes VX,VY, got {} values", v.len())));
                };
                params.velocity = Some((vx, vy));
            }
            params.record_timing = !no_timing;
            if dump_every.is_some() {
                params.dump_every = dump_every;
            }
            params.images &= !no_images;

            let out = out.unwrap_or_else(|| PathBuf::from("out").join(scenario.name()));
            let records = run_scenario(scenario, &params, &out)?;
            print_table(&records);
            print_slopes(&records, false)?;
            println!("wrote {}", out.join("errors.csv").display());
            Ok(())
        }
        Command::Slope { csv } => {
            let records = read_errors_csv(&csv)?;
            print_table(&records);
            print_slopes(&records, true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lieform: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
