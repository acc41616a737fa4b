use std::io::Write;

fn main() {
    let env_tol = std::env::var(e3atlas_cli::TOL_ENV).ok();
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    let code = e3atlas_cli::run(std::env::args_os(), env_tol.as_deref(), &mut out, &mut err);
    let _ = out.flush();
    std::process::exit(code);
}
