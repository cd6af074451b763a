fn main() {
    let out = singcalc_cli::run_germlab(std::env::args_os());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    std::process::exit(out.code);
}
