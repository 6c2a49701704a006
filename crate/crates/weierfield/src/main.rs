fn main() {
    std::process::exit(weierfield::cli::run());
}
