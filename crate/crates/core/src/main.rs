fn main() {
    std::process::exit(apoints_core::cli::run());
}
