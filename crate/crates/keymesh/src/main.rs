fn main() {
    std::process::exit(keymesh::cli::run(std::env::args_os()));
}
