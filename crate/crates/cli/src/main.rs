fn main() {
    std::process::exit(aereg_cli::run(std::env::args_os()));
}
