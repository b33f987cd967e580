//! Spike vectors (1^k, m, 0^(k-1)) whose self-product is not unimodal, and
//! the first mixed pair.
//!
//! ```text
//! cargo run --release --example grid_search -- [k_max] [m_max]
//! ```

use hstar::explore::{grid_search_diagonal, grid_search_pairs_in};

fn main() {
    let mut args = std::env::args().skip(1);
    let k_max: usize = args.next().map_or(20, |s| s.parse().expect("k_max"));
    let m_max: u64 = args.next().map_or(100, |s| s.parse().expect("m_max"));

    let hits = grid_search_diagonal(k_max, m_max);
    println!(
        "{} diagonal hits with k <= {k_max}, m <= {m_max}",
        hits.len()
    );
    for k in 2..=k_max {
        let ms: Vec<u64> = hits.iter().filter(|s| s.k == k).map(|s| s.m).collect();
        if !ms.is_empty() {
            println!("  k = {k:2}: m in {ms:?}");
        }
    }

    let pairs = grid_search_pairs_in(13, 14.min(k_max), 30);
    if let Some(dim) = pairs.iter().map(|p| p.dimension()).min() {
        println!("pairs of lowest dimension {dim} with k, k' in 13..=14, m <= 30:");
        for p in pairs.iter().filter(|p| p.dimension() == dim) {
            println!(
                "  (k={}, m={}) x (k={}, m={})",
                p.first.k, p.first.m, p.second.k, p.second.m
            );
        }
    }
}
