fn main() {
    std::process::exit(symdiag::cli::run());
}
