fn main() {
    std::process::exit(hvd_cli::run(std::env::args_os()));
}
