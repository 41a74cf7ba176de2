fn main() { std::process::exit(hierkit::cli::run_main()); }
