fn main() {
    std::process::exit(skewmm_cli::run(std::env::args_os()));
}
