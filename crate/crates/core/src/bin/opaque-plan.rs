fn main() {
    std::process::exit(opaque_plan::cli::main_with(std::env::args_os()));
}
