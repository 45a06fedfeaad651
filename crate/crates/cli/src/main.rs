fn main() {
    std::process::exit(elastica::cli::main_with(std::env::args_os()));
}
