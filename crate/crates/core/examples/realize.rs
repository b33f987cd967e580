//! Builds the simplices behind the closed-form h*-vectors and checks small
//! ones by counting lattice points.

use hstar::realize::{build_simplex, count_hstar_oracle, pqrk_hstar, reeve_hstar};

fn main() -> hstar::Result<()> {
    for (q, r, k) in [
        (3, None, 2),
        (1, Some(1), 2),
        (2, Some(3), 2),
        (1, Some(1), 3),
    ] {
        let spec = build_simplex(q, r, k)?;
        let closed = match r {
            Some(r) => pqrk_hstar(q, r, k)?,
            None => reeve_hstar(q, k)?,
        };
        let counted = count_hstar_oracle(&spec)?;
        println!(
            "q={q} r={r:?} k={k}: dim {}  closed form ({closed})  counted ({counted})  {}",
            spec.dimension,
            if closed == counted { "agree" } else { "DIFFER" }
        );
        for v in &spec.vertices {
            println!("    {v:?}");
        }
    }

    let big = pqrk_hstar(13, 1, 13)?;
    println!("P(13,1,13): ({big})");
    Ok(())
}
