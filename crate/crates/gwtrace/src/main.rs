use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, out) = gwtrace::run(std::env::args_os());
    let mut stream: Box<dyn Write> = if code == 0 {
        Box::new(std::io::stdout())
    } else {
        Box::new(std::io::stderr())
    };
    let _ = stream.write_all(out.as_bytes());
    ExitCode::from(code as u8)
}
