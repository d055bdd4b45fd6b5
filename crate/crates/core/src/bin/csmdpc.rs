fn main() {
    std::process::exit(csmdpc::cli::run(std::env::args_os()));
}
