fn main() {
    std::process::exit(swim_mobility::config_io::cli::cli_run(std::env::args_os()));
}
