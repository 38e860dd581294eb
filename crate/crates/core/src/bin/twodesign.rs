fn main() {
    std::process::exit(twodesign::cli::main());
}
