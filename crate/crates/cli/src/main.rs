fn main() {
    std::process::exit(dspg_cli::run(std::env::args_os()));
}
