fn main() {
    std::process::exit(padic_littlewood::cli::main_with_args(std::env::args_os()));
}
