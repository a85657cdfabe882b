fn main() {
    std::process::exit(pc2pm::cli::run_from(std::env::args_os()));
}
