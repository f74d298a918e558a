fn main() {
    std::process::exit(frey::cli::main());
}
