fn main() {
    std::process::exit(levinson::cli::main());
}
