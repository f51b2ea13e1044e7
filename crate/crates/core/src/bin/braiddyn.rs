fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("BRAIDDYN_LOG", "warn")).init();
    std::process::exit(braiddyn::cli::run(std::env::args_os()));
}
