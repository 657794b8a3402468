fn main() {
    std::process::exit(pnta::cli::run());
}
