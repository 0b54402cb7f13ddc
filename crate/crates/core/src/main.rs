fn main() {
    std::process::exit(circle_cs::cli::run(std::env::args_os()));
}
