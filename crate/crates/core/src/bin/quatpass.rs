fn main() {
    std::process::exit(quatpass::cli::run(std::env::args_os()));
}
