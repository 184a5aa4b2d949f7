use clap::Parser;
use logical_entropy::cli::{error_json, run, Cli};

fn main() {
    let mut argv: Vec<String> = std::env::args().skip(1).collect();
    argv.insert(0, "qle".into());
    let cli = Cli::parse();
    let code = match run(&cli, argv.clone()) {
        Ok(out) => {
            println!("{}", out.report.to_json());
            for w in &out.report.warnings {
                eprintln!("warning: {w}");
            }
            out.code
        }
        Err(f) => {
            println!("{}", error_json(&argv, &f));
            eprintln!("error: {}", f.message);
            f.code
        }
    };
    std::process::exit(code);
}
