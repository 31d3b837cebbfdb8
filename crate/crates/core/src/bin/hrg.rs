fn main() {
    std::process::exit(hypercontact::cli::run(std::env::args_os()));
}
