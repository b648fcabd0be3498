fn main() -> std::process::ExitCode {
    covertree::cli::main()
}
