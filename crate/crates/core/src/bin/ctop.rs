use std::io::Write;

fn main() {
    let (code, out) = ctop::cli::run_command(std::env::args_os().skip(1));
    let mut stream: Box<dyn Write> = if code == 2 {
        Box::new(std::io::stderr())
    } else {
        Box::new(std::io::stdout())
    };
    let _ = stream.write_all(out.as_bytes());
    std::process::exit(code);
}
