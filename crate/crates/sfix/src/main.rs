fn main() {
    std::process::exit(sfix::cli::main());
}
