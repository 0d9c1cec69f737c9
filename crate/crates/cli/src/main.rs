use std::process::ExitCode;

fn main() -> ExitCode {
    let code = kdvexp_cli::cli_main(std::env::args_os(), &mut std::io::stderr());
    ExitCode::from(code as u8)
}
