fn main() {
    std::process::exit(rcgeom::cli::run(std::env::args_os()));
}
