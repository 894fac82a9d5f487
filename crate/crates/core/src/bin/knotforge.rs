use clap::Parser;
use knotforge::cli::{render_text, run, Cli};

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", out.report.to_json());
            } else {
                print!(
                    "{}",
                    render_text(&out.report.command, &out.report.result, &out.report.diagnostics)
                );
            }
            std::process::exit(out.exit_code);
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
