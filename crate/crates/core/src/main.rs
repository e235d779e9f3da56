use clap::Parser;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = gls_core::cli::Args::parse();
    std::process::exit(gls_core::cli::execute(&args));
}
