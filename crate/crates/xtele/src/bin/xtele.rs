use std::process::exit;

fn main() {
    exit(xtele::cli::run());
}
