use std::io::IsTerminal;

fn main() {
    let color =
        std::env::var("DOXA_COLOR").map_or(true, |v| v != "0") && std::io::stdout().is_terminal();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let mut io = doxa_cli::Io {
        out: &mut out,
        err: &mut err,
        color,
    };
    let code = doxa_cli::run(std::env::args_os(), &mut io);
    std::process::exit(code);
}
