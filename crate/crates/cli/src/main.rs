use clap::error::ErrorKind;
use clap::Parser;
use diffnev_cli::commands::{run, Cli, Outcome};

fn main() {
    let out = match Cli::try_parse() {
        Ok(cli) => run(&cli),
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return;
        }
        Err(e) => Outcome::usage(e.to_string().trim_end().to_string()),
    };
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    std::process::exit(out.code);
}
