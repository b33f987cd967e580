//! h*-vectors of Cartesian products, from the h*-vectors of the factors.
//!
//! ```text
//! cargo run --example product -- 1,1,1,1,1,6 1,3,1
//! ```

use hstar::analysis::{is_unimodal, strict_dips};
use hstar::transforms::{pi_product, HStarVector};

fn main() -> hstar::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (h, g): (HStarVector, HStarVector) = match args.as_slice() {
        [a, b] => (a.parse()?, b.parse()?),
        _ => ("1,1,1,1,1,6".parse()?, "1,1,1,1,1,6".parse()?),
    };
    let p = pi_product(&h, &g);
    println!("({h}) x ({g})");
    println!("  = ({p})");
    println!(
        "  unimodal: {}  dips: {:?}",
        is_unimodal(&p),
        strict_dips(&p)
    );

    // A square and a segment give a cube.
    let square: HStarVector = "1,1,0".parse()?;
    let segment: HStarVector = "1,0".parse()?;
    println!("square x segment = ({})", pi_product(&square, &segment));
    Ok(())
}
