fn main() {
    std::process::exit(foldpower::cli::run(std::env::args_os()));
}
