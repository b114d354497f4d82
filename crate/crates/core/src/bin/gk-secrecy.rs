fn main() {
    std::process::exit(gk_secrecy::cli::main_with_args(std::env::args_os()));
}
