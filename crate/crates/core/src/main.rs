fn main() {
    std::process::exit(mecgrid::io::cli_main(std::env::args_os()));
}
