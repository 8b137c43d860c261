fn main() {
    std::process::exit(arcmilnor::cli::run(std::env::args_os()));
}
