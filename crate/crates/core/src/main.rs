fn main() {
    std::process::exit(entropy_collapse::cli::main_with_args(std::env::args_os()));
}
