//! A blow-down term: base series times the shifted, duality-completed fibre.

use gitcoh::kirwan::{complete_fiber, ic_blowdown, BlowdownStep};
use gitcoh::series::invariant_torus_series;
use gitcoh::TruncatedSeries;

fn main() -> anyhow::Result<()> {
    let d = 19;
    let fiber = complete_fiber(&invariant_torus_series(6, d), d)?;
    println!("fibre: {fiber}");
    let step = BlowdownStep {
        name: "xi".into(),
        base_series: TruncatedSeries::one(40),
        fiber_series: fiber.with_order(40),
        fiber_quotient_complex_dim: d,
    };
    println!("B:     {}", ic_blowdown(&step, 40)?);
    Ok(())
}
