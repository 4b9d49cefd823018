fn main() {
    env_logger::init();
    std::process::exit(ptlrt::cli::main_with_io());
}
