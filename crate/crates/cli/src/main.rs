fn main() {
    std::process::exit(lieconj::app::run(std::env::args_os()));
}
