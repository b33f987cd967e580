//! Ehrhart coefficients of the unit cube and the standard simplex, mapped to
//! h*-vectors and back.

use hstar::transforms::{
    e_transform, w_transform, w_transform_by_values, EhrhartVector, HStarVector,
};
use num_rational::BigRational;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn main() -> hstar::Result<()> {
    // (t + 1)^3
    let cube = EhrhartVector::new(vec![rat(1, 1), rat(3, 1), rat(3, 1), rat(1, 1)])?;
    // C(t + 3, 3)
    let simplex = EhrhartVector::new(vec![rat(1, 1), rat(11, 6), rat(1, 1), rat(1, 6)])?;

    for (name, c) in [("cube", &cube), ("simplex", &simplex)] {
        let h = w_transform(c);
        assert_eq!(h, w_transform_by_values(c));
        let shown: Vec<String> = h.iter().map(|x| x.to_string()).collect();
        println!(
            "{name:8} ehr coefficients {:?} -> h* ({})",
            c.entries()
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>(),
            shown.join(",")
        );
    }

    let h: HStarVector = "1,1,1,1,1,6".parse()?;
    let c = e_transform(&h);
    let back = w_transform(&c);
    let shown: Vec<String> = c.entries().iter().map(|x| x.to_string()).collect();
    println!("E({h}) = ({})", shown.join(", "));
    println!(
        "W(E({h})) = ({})",
        back.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",")
    );
    Ok(())
}
