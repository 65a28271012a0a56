fn main() {
    std::process::exit(mzv_verify::run(std::env::args_os()));
}
