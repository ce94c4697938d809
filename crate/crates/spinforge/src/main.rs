fn main() {
    std::process::exit(spinforge::cli::run());
}
