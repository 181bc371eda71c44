use std::io::Write;
use std::process::ExitCode;

use env_logger::Env;

fn main() -> ExitCode {
    env_logger::Builder::from_env(Env::new().filter_or("NETEQUIL_LOG", "warn"))
        .format_timestamp(None)
        .target(env_logger::Target::Stderr)
        .init();
    match netequil_cli::run(std::env::args_os()) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            log::debug!("exiting with code {}", e.exit_code());
            eprintln!("error: {}", e.message().trim_end());
            ExitCode::from(e.exit_code())
        }
    }
}
