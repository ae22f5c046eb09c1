fn main() {
    std::process::exit(argstruct::cli::run(std::env::args_os()));
}
