fn main() {
    std::process::exit(qso3::cli::main());
}
