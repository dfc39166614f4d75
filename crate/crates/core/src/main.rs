fn main() {
    std::process::exit(qgauss::cli::main_with_args(std::env::args_os()));
}
