fn main() {
    std::process::exit(dowling_cli::run(std::env::args_os()));
}
