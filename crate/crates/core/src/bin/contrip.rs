use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let env_config = std::env::var_os(contrip::cli::CONFIG_ENV);
    let code = contrip::cli::run(
        std::env::args_os(),
        env_config,
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    ExitCode::from(code as u8)
}
