use clap::Parser;
use landau_gk_cli::error::exit;

fn main() {
    let cli = match landau_gk_cli::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Usage errors are validation errors; exit code 2 is reserved for failed checks.
            std::process::exit(if e.use_stderr() {
                exit::VALIDATION
            } else {
                exit::SUCCESS
            });
        }
    };
    std::process::exit(landau_gk_cli::run(&cli));
}
