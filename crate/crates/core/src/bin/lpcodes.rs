fn main() {
    std::process::exit(lpcodes::cli::cmd_dispatch(std::env::args_os()));
}
