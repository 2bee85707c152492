//! Unstable removals for a C*-stabiliser read off its normal weights.

use gitcoh::kirwan::{rank1_normal_removal, rank1_terms};
use gitcoh::TruncatedSeries;

fn main() -> anyhow::Result<()> {
    let tables: [(&str, &[(i64, u32)]); 2] = [
        (
            "delta",
            &[(6, 1), (4, 3), (0, 3), (-3, 2), (-2, 6), (-1, 6)],
        ),
        ("alpha", &[(-3, 7), (0, 5), (3, 4), (6, 4)]),
    ];
    for (name, weights) in tables {
        println!("{name}:");
        for t in rank1_terms(weights) {
            println!(
                "  weight {:>2} x{}: codimension {}",
                t.weight, t.multiplicity, t.codim
            );
        }
        let removal = rank1_normal_removal(weights, &TruncatedSeries::one(40), 40)?;
        println!("  removal mod t^41: {removal}");
    }
    Ok(())
}
