fn main() {
    std::process::exit(golden_core::cli::main_with_args(std::env::args_os()));
}
