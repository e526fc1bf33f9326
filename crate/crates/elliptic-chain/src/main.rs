fn main() {
    std::process::exit(elliptic_chain::cli::run(std::env::args_os()));
}
