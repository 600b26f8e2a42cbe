use std::io;

use guillotine_toolkit::cli::run_cli;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("PACKINGSOLVER_LOG", "off")).init();
    let code = run_cli(std::env::args_os(), &mut io::stdout(), &mut io::stderr());
    std::process::exit(code);
}
