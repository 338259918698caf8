fn main() {
    let args: Vec<String> = std::env::args().collect();
    let (code, out) = trackcalc::cli::run(&args);
    if code == 1 {
        eprint!("{out}");
    } else {
        print!("{out}");
    }
    std::process::exit(code);
}
