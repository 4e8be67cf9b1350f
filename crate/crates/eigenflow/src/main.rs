fn main() -> std::process::ExitCode {
    eigenflow::cli::main()
}
