fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter("HOPES_LOG")).init();
    std::process::exit(hopes::cli::run(std::env::args_os()));
}
