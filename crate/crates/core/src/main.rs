use std::process::ExitCode;

fn main() -> ExitCode {
    contlattice::cli::main_entry()
}
