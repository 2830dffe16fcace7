fn main() {
    std::process::exit(sepool::cli::main());
}
