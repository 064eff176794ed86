use std::io::Write;

use clap::Parser;
use qsym::cli::{run, RunConfig, EXIT_FAILURE, EXIT_OK};

fn main() {
    let config = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            std::process::exit(if e.use_stderr() { EXIT_FAILURE } else { EXIT_OK });
        }
    };
    let out = run(&config);
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.report.as_bytes());
    let _ = stdout.flush();
    std::process::exit(out.code);
}
