fn main() {
    std::process::exit(gfq_core::cli::run());
}
