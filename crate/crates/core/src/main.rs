fn main() {
    let (code, output) = macap::cli::run_from_args(std::env::args_os());
    if code == 0 {
        print!("{output}");
    } else {
        eprint!("{output}");
    }
    std::process::exit(code);
}
