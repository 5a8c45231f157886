use std::io;

fn main() {
    let status = evoshare::run(std::env::args_os(), &mut io::stdout(), &mut io::stderr());
    std::process::exit(status);
}
