fn main() {
    std::process::exit(graphshare::cli::run(std::env::args_os()));
}
