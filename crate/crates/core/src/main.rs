fn main() {
    std::process::exit(xcorr::cli::main_with_args(std::env::args_os()));
}
