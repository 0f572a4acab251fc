fn main() {
    std::process::exit(scs_core::cli::main_with_args(std::env::args_os()));
}
