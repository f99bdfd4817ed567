fn main() {
    std::process::exit(tdlab::appshell::cli::run(std::env::args_os()));
}
