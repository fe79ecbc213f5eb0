fn main() {
    std::process::exit(odpc::cli::run(std::env::args_os()));
}
