fn main() {
    std::process::exit(vecpart_cli::run(std::env::args_os()));
}
