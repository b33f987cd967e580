//! Walks the solution subgraph outward from the spike (1^14, 12, 0^13).
//!
//! ```text
//! cargo run --release --example expand -- [limit]
//! ```

use hstar::explore::{expand_solutions, spike_vector, SolutionSet};

fn main() -> hstar::Result<()> {
    let limit: usize = std::env::args()
        .nth(1)
        .map_or(100, |s| s.parse().expect("limit"));
    let seed = SolutionSet::from_vectors([spike_vector(14, 12)?])?;
    let out = expand_solutions(&seed, limit);
    for h in out.vectors().iter().take(10) {
        println!("{h}");
    }
    if out.len() > 10 {
        println!("... {} more", out.len() - 10);
    }
    if let Some((ones, zeros)) = out.shape_bounds() {
        println!(
            "{} solutions, all with >= {ones} leading ones and >= {zeros} trailing zeros",
            out.len()
        );
    }
    Ok(())
}
