use std::io::Write;

fn main() {
    let cap = std::env::var("QMAP_ENUM_CAP").ok();
    let out = qmap_cli::run(std::env::args_os(), cap.as_deref());
    std::io::stdout().write_all(out.stdout.as_bytes()).expect("stdout");
    std::io::stderr().write_all(out.stderr.as_bytes()).expect("stderr");
    std::process::exit(out.code);
}
