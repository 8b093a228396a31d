fn main() {
    std::process::exit(ssblab::cli::main_with_args(std::env::args().collect()));
}
