fn main() {
    std::process::exit(balpoint_cli::run(std::env::args_os()));
}
