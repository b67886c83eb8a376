mod args;
mod commands;
mod format;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser as _;

use args::{Cli, Command};
use commands::{GenerateParams, ResonanceSource};

fn pair_of(v: &[usize]) -> (usize, usize) {
    (v[0], v[1])
}

fn run(cli: Cli) -> commands::CmdResult {
    match cli.command {
        Command::Impedance {
            input,
            freq,
            pair,
            out,
            tol,
        } => commands::impedance(&input.netlist, &freq, pair_of(&pair.pair), out.format, &tol),
        Command::Sweep {
            input,
            pair,
            range,
            linear,
            format,
            tol,
        } => commands::sweep(
            &input.netlist,
            pair_of(&pair.pair),
            &range,
            linear,
            format,
            &tol,
        ),
        Command::Resonances {
            netlist,
            grid,
            inductance,
            capacitance,
            range,
            no_refine,
            out,
            tol,
        } => {
            let source = ResonanceSource {
                netlist: netlist.as_deref(),
                grid,
                inductance,
                capacitance,
            };
            commands::resonances(&source, &range, !no_refine, out.format, &tol)
        }
        Command::Generate {
            shape,
            z,
            inductance,
            capacitance,
            toroidal,
            seed,
            extra,
        } => {
            let params = GenerateParams {
                z,
                inductance,
                capacitance,
                toroidal,
                seed,
                extra,
            };
            commands::generate(&shape, &params)
        }
        Command::Check {
            input,
            freq,
            pair,
            out,
            tol,
        } => commands::check(
            &input.netlist,
            &freq,
            pair.as_deref().map(pair_of),
            out.format,
            &tol,
        ),
    }
}

fn main() -> ExitCode {
    // Exit code 2 means "resonant", so usage errors must not use clap's default of 2.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(report) => {
            let mut stdout = std::io::stdout().lock();
            // A closed pipe (e.g. `| head`) is not worth a panic.
            let _ = stdout.write_all(report.stdout.as_bytes());
            let _ = stdout.flush();
            ExitCode::from(report.exit)
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
