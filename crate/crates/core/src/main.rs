fn main() {
    std::process::exit(expent::cli::run(std::env::args_os()));
}
