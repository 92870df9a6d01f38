fn main() {
    std::process::exit(stoqforge_cli::run(std::env::args_os()));
}
