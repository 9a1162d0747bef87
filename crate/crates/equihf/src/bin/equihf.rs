fn main() {
    std::process::exit(equihf::cli::main());
}
