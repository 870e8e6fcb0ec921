fn main() {
    std::process::exit(inner_fourier::cli::run(std::env::args_os()));
}
