use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use todakit::cli::{render_text, run_session, Options, Report};

/// Runs a session file of stable-module-category computations.
#[derive(Parser)]
#[command(name = "todakit", version)]
struct Args {
    /// session file
    session: PathBuf,
    /// print one JSON document instead of tables
    #[arg(long)]
    json: bool,
    /// cap on enumerated fillers per bracket
    #[arg(long, default_value_t = todakit::toda::DEFAULT_CAP)]
    max_enumerate: usize,
    /// seed for `propcheck`
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn print(r: &Report, json: bool) {
    if json {
        println!("{}", serde_json::to_string_pretty(r).expect("report serializes"));
    } else {
        print!("{}", render_text(r));
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let src = match std::fs::read_to_string(&args.session) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("cannot read {}: {e}", args.session.display());
            return ExitCode::from(2);
        }
    };
    let opts = Options { max_enumerate: args.max_enumerate, seed: args.seed };
    match run_session(&src, &opts) {
        Ok(r) => {
            print(&r, args.json);
            ExitCode::SUCCESS
        }
        Err(f) => {
            if let Some(r) = &f.partial {
                print(r, args.json);
            }
            eprintln!("{}", f.error);
            ExitCode::from(f.error.exit_code() as u8)
        }
    }
}
