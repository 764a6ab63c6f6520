fn main() {
    std::process::exit(omegasurf::cli::main());
}
