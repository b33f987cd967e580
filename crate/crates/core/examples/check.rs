//! Fitness components and the inequality families for a few vectors.

use hstar::analysis::{check_conditions, fitness, fitness_with, Phi4Mode};
use hstar::evolution::in_search_space;
use hstar::explore::spike_vector;
use hstar::transforms::HStarVector;

fn main() -> hstar::Result<()> {
    let mut vectors: Vec<HStarVector> = ["1,1,1,1,1,6", "1,3,1", "1,2,3,4,0", "1,10,1,0"]
        .iter()
        .map(|s| s.parse())
        .collect::<hstar::Result<_>>()?;
    vectors.push(spike_vector(14, 12)?);

    for h in &vectors {
        println!("({h})");
        println!("  {}", fitness(h)?);
        println!(
            "  literal phi4: {}",
            fitness_with(h, Phi4Mode::Literal)?.total
        );
        for c in check_conditions(h)? {
            let verdict = match (c.applicable, c.passed) {
                (false, _) => "n/a".to_string(),
                (true, true) => "ok".to_string(),
                (true, false) => format!("fails at {:?} by {}", c.failing_indices, c.violation),
            };
            println!("  {}: {verdict}", c.describe());
        }
        println!("  in search space: {}", in_search_space(h));
    }
    Ok(())
}
