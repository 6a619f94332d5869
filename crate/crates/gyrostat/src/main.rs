fn main() {
    std::process::exit(gyrostat::cli::main_with_args(std::env::args_os()));
}
