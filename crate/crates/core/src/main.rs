fn main() {
    let (code, output) = gshift::cli::run(std::env::args_os());
    print!("{output}");
    std::process::exit(code);
}
