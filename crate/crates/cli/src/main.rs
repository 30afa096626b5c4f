fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(seqcomplex_cli::run(&argv));
}
