fn main() {
    std::process::exit(ccexp::cli::main_with_args(std::env::args_os()));
}
