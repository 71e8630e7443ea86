fn main() {
    std::process::exit(clear_eval::cli::main());
}
