fn main() {
    std::process::exit(kgsynth::cli::run(std::env::args_os()));
}
