fn main() {
    std::process::exit(kreiss_lab::cli::run_cli(std::env::args_os()));
}
