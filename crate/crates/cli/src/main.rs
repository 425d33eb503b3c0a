fn main() {
    std::process::exit(coarse_cli::cli::main_with(std::env::args_os()));
}
