fn main() {
    std::process::exit(revkano::cli::main());
}
