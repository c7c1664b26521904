fn main() {
    std::process::exit(crossfield::cli::main_with_args(std::env::args_os()));
}
