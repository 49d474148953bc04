fn main() {
    std::process::exit(qldpc::cli::main());
}
