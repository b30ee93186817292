fn main() {
    std::process::exit(sumgraph::cli::run(std::env::args_os()));
}
