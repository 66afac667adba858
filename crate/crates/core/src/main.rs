fn main() {
    std::process::exit(qhankel::cli::run(std::env::args_os()));
}
