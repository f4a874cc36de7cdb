fn main() {
    std::process::exit(dmnn::cli::run(std::env::args_os()));
}
