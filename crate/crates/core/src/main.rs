fn main() {
    std::process::exit(esdkit::cli::main_with_args(std::env::args_os()));
}
