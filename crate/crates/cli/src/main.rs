use clap::Parser;
use hopf_noise_cli::{exit_code, workers_from_env, Cli};

fn run(cli: &Cli) -> anyhow::Result<()> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers_from_env()? {
        pool = pool.num_threads(n);
    }
    pool.build()?.install(|| cli.run())
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(err) = run(&cli) {
        eprintln!("error: {err:#}");
        std::process::exit(exit_code(&err));
    }
}
