fn main() {
    std::process::exit(nonarch::cli::main_with_args(std::env::args_os()));
}
