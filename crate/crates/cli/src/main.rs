fn main() {
    std::process::exit(onebit_cli::main_with_args(std::env::args_os()));
}
