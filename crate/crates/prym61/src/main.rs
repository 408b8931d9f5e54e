fn main() {
    eprintln!("pipeline CLI not wired up yet");
    std::process::exit(2);
}
