fn main() {
    std::process::exit(gpt_kit::cli::main_with_args(std::env::args_os()));
}
