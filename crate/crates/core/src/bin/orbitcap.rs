fn main() {
    std::process::exit(orbit_capture::cli::main_with_args(std::env::args_os()));
}
