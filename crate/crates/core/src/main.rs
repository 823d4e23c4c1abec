use clap::Parser;

use qeq_core::cli::{run, Cli};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter("QEQ_LOG")).init();
    let out = run(Cli::parse());
    print!("{}", out.report);
    std::process::exit(out.code);
}
