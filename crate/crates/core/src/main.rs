fn main() {
    std::process::exit(msalg::cli::run(std::env::args_os()));
}
