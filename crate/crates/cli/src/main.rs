fn main() {
    let code = regen_boot::run_cli(std::env::args_os());
    std::process::exit(code);
}
