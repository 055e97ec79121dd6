fn main() {
    std::process::exit(btfloquet::cli::main_with_args(std::env::args_os()));
}
