fn main() {
    std::process::exit(pendinv::cli::main());
}
