fn main() {
    std::process::exit(gmic::cli::run_from(std::env::args_os()));
}
