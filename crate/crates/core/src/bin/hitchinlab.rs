fn main() {
    std::process::exit(hitchinlab::cli::run(std::env::args_os()));
}
