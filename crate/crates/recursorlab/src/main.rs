fn main() {
    std::process::exit(recursorlab::cli::run_main());
}
