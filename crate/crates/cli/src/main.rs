fn main() {
    std::process::exit(cheb::run(std::env::args_os()));
}
