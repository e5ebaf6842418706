fn main() {
    std::process::exit(objprior_cli::run_with_args(std::env::args_os()));
}
