fn main() {
    std::process::exit(quiverhorn::cli::run())
}
