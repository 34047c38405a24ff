fn main() {
    std::process::exit(dsconcat::cli::main());
}
