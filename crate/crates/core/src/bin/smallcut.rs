fn main() -> std::process::ExitCode {
    smallcut::cli::main()
}
