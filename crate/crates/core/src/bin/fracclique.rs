fn main() {
    std::process::exit(fracclique::cli::run(std::env::args_os()));
}
