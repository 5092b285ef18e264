fn main() {
    std::process::exit(ttutv::cli::run(std::env::args_os()));
}
