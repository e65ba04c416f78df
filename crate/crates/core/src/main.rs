fn main() {
    std::process::exit(wilson_racah::cli::run(std::env::args_os()));
}
