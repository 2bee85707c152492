//! Equivariant Poincaré series of semistable loci for small form spaces.

use gitcoh::kirwan::{equivariant_ss_series, equivariant_ss_series_multi, CodimMode};

fn main() -> anyhow::Result<()> {
    for (n, d) in [(2, 4), (2, 6), (3, 3)] {
        println!(
            "SL({n}) on degree {d}: {}",
            equivariant_ss_series(n, d, 20, CodimMode::RootCount)?
        );
    }
    for n in [4, 5, 6] {
        let s = equivariant_ss_series(n, 3, 20, CodimMode::Paper)?;
        println!(
            "SL({n}) on cubics, pinned strata: {:?}",
            s.even_ints().unwrap_or_default()
        );
    }
    let e = equivariant_ss_series_multi(2, &[8, 12], 18)?;
    println!("SL(2) on O(8) + O(12): {e}");
    Ok(())
}
