use std::io;

use guillotine_toolkit::bench::run_bench;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("PACKINGSOLVER_LOG", "off")).init();
    let code = run_bench(std::env::args_os(), &mut io::stdout(), &mut io::stderr());
    std::process::exit(code);
}
