fn main() { std::process::exit(whitehead::cli::run(std::env::args().skip(1))); }
