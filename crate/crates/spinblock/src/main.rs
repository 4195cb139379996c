use std::io::Write;

fn main() {
    #[cfg(feature = "parallel")]
    if let Some(n) = std::env::var("SPINBLOCK_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        // a second initialisation only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let out = spinblock::cli::run(std::env::args_os());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    std::process::exit(out.code);
}
