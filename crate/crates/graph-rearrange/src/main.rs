use std::process::ExitCode;

fn main() -> ExitCode {
    graph_rearrange::cli::run(std::env::args().skip(1))
}
