use std::io::{self, IsTerminal};
use std::process::ExitCode;

use clap::Parser;
use nonarch_cli::{Cli, Command, Session, SessionConfig, EXIT_ERROR};

fn env_default(config: &mut SessionConfig) -> Result<(), String> {
    for key in ["field", "cutoff", "terms", "format", "seed"] {
        if let Ok(value) = std::env::var(format!("NONARCH_{}", key.to_ascii_uppercase())) {
            config.set(key, &value).map_err(|e| format!("NONARCH_{}: {e}", key.to_ascii_uppercase()))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // Precedence: flags, then NONARCH_* variables, then built-in defaults.
    let mut config = SessionConfig::default();
    let config = env_default(&mut config).and_then(|_| cli.overrides.apply(&config));
    let config = match config {
        Ok(c) => c,
        Err(e) => {
            eprintln!("nonarch: {e}");
            return ExitCode::from(EXIT_ERROR as u8);
        }
    };
    let mut session = Session::new(config);
    let code = if let Some(path) = &cli.script {
        match std::fs::File::open(path) {
            Ok(f) => run_lines(&mut session, io::BufReader::new(f), false),
            Err(e) => {
                eprintln!("nonarch: {}: {e}", path.display());
                EXIT_ERROR
            }
        }
    } else {
        match &cli.command {
            None | Some(Command::Repl) => {
                let stdin = io::stdin();
                let prompt = stdin.is_terminal();
                run_lines(&mut session, stdin.lock(), prompt)
            }
            Some(cmd) => {
                let doc = session.run(cmd);
                println!("{}", doc.render(session.config.format));
                doc.code
            }
        }
    };
    ExitCode::from(code as u8)
}

fn run_lines<R: io::BufRead>(session: &mut Session, input: R, prompt: bool) -> i32 {
    match session.run_lines(input, &mut io::stdout().lock(), prompt) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("nonarch: {e}");
            EXIT_ERROR
        }
    }
}
