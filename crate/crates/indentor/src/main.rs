fn main() {
    let code = indentor::cli::run(std::env::args().collect());
    std::process::exit(code);
}
