fn main() -> std::process::ExitCode {
    darboux_core::cli::main()
}
