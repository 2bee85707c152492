//! From the blow-down of the moduli space to the Baily-Borel
//! compactification: one projective-bundle step, then semismall points.

use gitcoh::kirwan::{decomp_pbundle, decomp_semismall, DecompKind, DecompStep, Direction};
use gitcoh::series::duality_complete;
use gitcoh::TruncatedSeries;

fn main() -> anyhow::Result<()> {
    let n = 20;
    let mhat = TruncatedSeries::from_even_ints(&[1, 3, 8, 17, 29, 44, 61, 78, 99, 121, 151], n);
    let pe_half = TruncatedSeries::from_even_ints(&[1, 1, 2, 2, 3, 3, 4, 4, 5, 5], 18);
    let pe = duality_complete(&pe_half, 18)?;
    let step = DecompStep {
        kind: DecompKind::Pbundle,
        z_series: &pe.with_order(n) - &TruncatedSeries::one(n),
        codim_c: 4,
        fiber_dim_m: 2,
        ambient_dim_n: 20,
    };
    let mut s = decomp_pbundle(Direction::Inverse, &mhat, &step, n)?;
    println!("after the bundle: {s}");
    for m in [1, 1, 2, 2] {
        let point = DecompStep {
            kind: DecompKind::Semismall,
            z_series: TruncatedSeries::one(n),
            codim_c: 0,
            fiber_dim_m: m,
            ambient_dim_n: 20,
        };
        s = decomp_semismall(&s, &point, n)?;
    }
    println!("Baily-Borel:      {}", duality_complete(&s, 20)?);
    Ok(())
}
