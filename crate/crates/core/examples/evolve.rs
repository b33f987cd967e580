//! Runs the variant A search from (1,1,1,1,1,6) for a handful of seeds.
//!
//! ```text
//! cargo run --release --example evolve -- [p_mu] [t_max] [seeds]
//! ```

use std::time::Instant;

use hstar::analysis::{fitness, Phi4Mode};
use hstar::evolution::{default_seed_vector, run_ga, GaConfig, Population};

fn main() -> hstar::Result<()> {
    let mut args = std::env::args().skip(1);
    let p_mu: f64 = args.next().map_or(0.5, |s| s.parse().expect("p_mu"));
    let t_max: u64 = args.next().map_or(500, |s| s.parse().expect("t_max"));
    let seeds: u64 = args.next().map_or(3, |s| s.parse().expect("seeds"));

    for seed in 0..seeds {
        let cfg = GaConfig {
            p_mu,
            t_max,
            rng_seed: seed,
            ..GaConfig::default()
        };
        let start = Instant::now();
        let initial = Population::from_genomes([default_seed_vector()], Phi4Mode::Corrected);
        let out = run_ga(&cfg, initial)?;
        let secs = start.elapsed().as_secs_f64();
        match out.generation_found {
            Some(t) => {
                println!(
                    "seed {seed}: {} solution(s) at generation {t} ({secs:.1}s)",
                    out.solutions.len()
                );
                for s in &out.solutions {
                    println!("  {s}  [{}]", fitness(s)?.total);
                }
            }
            None => println!("seed {seed}: no solution within {t_max} generations ({secs:.1}s)"),
        }
    }
    Ok(())
}
