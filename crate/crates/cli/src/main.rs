fn main() {
    let outcome = quartic_cli::run(std::env::args_os());
    std::process::exit(outcome.code);
}
