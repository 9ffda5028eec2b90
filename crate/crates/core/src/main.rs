fn main() {
    std::process::exit(hilbfrob::cli::main_with_args(std::env::args()));
}
