fn main() {
    std::process::exit(infobs::cli::run_cli(std::env::args_os()));
}
