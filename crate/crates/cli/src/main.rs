fn main() {
    let argv: Vec<std::ffi::OsString> = std::env::args_os().collect();
    let code = duopoly_cli::run(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
