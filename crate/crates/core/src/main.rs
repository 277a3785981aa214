fn main() {
    std::process::exit(nuinarch::cli::run(std::env::args_os()));
}
