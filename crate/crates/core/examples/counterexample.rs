//! Two lattice simplices with unimodal h*-vectors whose product has a
//! non-unimodal h*-vector.

use hstar::realize::{verify_counterexample, PqrkParams};

fn main() -> hstar::Result<()> {
    let cases = [
        (PqrkParams::new(13, 1, 13)?, PqrkParams::new(8, 1, 14)?),
        (PqrkParams::new(11, 1, 14)?, PqrkParams::new(11, 1, 14)?),
    ];
    for (a, b) in cases {
        let report = verify_counterexample(a, b)?;
        println!("{report}\n");
    }
    Ok(())
}
