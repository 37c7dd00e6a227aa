fn main() {
    std::process::exit(rydkick::cli::run());
}
