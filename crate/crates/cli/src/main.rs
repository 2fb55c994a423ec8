fn main() {
    eprintln!("fusionforge: not wired up yet");
    std::process::exit(2);
}
