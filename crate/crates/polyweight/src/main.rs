fn main() -> std::process::ExitCode {
    polyweight::cli::main()
}
