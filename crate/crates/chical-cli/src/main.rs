use chical_cli::{run, CliError};

fn main() {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    match run(&argv) {
        Ok(report) => {
            print!("{}", report.render());
            std::process::exit(report.exit_code());
        }
        Err(CliError::Help(text)) => {
            println!("{text}");
            std::process::exit(0);
        }
        Err(CliError::Usage(text)) => {
            eprintln!("{text}");
            std::process::exit(2);
        }
    }
}
