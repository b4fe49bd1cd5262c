fn main() {
    std::process::exit(cmsdisc::cli::run(std::env::args_os()));
}
