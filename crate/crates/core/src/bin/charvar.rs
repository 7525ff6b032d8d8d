fn main() {
    std::process::exit(charvar::cli::main_with_args(std::env::args_os()));
}
