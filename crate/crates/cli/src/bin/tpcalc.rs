fn main() {
    let out = singcalc_cli::run_tpcalc(std::env::args_os());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    std::process::exit(out.code);
}
