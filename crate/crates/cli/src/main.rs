use clap::Parser;
use freeholder::{exit_code, output::json_string, run, Cli};

fn main() {
    let cli = Cli::parse();
    let result = run(&cli);
    match &result {
        Ok(o) => println!("{}", json_string(&o.report)),
        Err(e) => eprintln!("error: {e}"),
    }
    std::process::exit(exit_code(&result));
}
