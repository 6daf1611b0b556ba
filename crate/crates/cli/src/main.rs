fn main() -> std::process::ExitCode {
    hypercensus_cli::main()
}
