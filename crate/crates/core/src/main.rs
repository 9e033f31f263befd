fn main() {
    rankdiff::cli::init_logging();
    std::process::exit(rankdiff::cli::run_from_args(std::env::args_os()));
}
