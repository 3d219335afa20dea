fn main() {
    std::process::exit(fastrg::cli::cli_main(std::env::args_os()));
}
