//! Torus weights of cubic monomials and the supports a weight vector cuts out.

use gitcoh::weights::{
    dim_g, dim_x, enumerate_monomials, pairing_supports, parabolic_dim, WeightVector,
};
use gitcoh::Rational;

fn main() -> anyhow::Result<()> {
    let table = enumerate_monomials(4, 3);
    println!(
        "{} cubic monomials in 4 variables, dim X = {}, dim G = {}",
        table.len(),
        dim_x(4, 3),
        dim_g(4)
    );
    for (e, w) in table.entries.iter().take(5) {
        let coords: Vec<String> = w.coords.iter().map(Rational::to_string).collect();
        println!("  {e:<10} ({})", coords.join(", "));
    }

    // beta for the cubics not involving x3
    let beta = WeightVector::new(
        [1, 1, 1, -3]
            .iter()
            .map(|&k| Rational::new(k.into(), 4.into()))
            .collect(),
    );
    let s = pairing_supports(&table, &beta)?;
    println!(
        "beta = (1,1,1,-3)/4: |Z| = {}, |Y| = {}, n(beta) = {}, dim P = {}",
        s.z_support.len(),
        s.y_support.len(),
        s.n_beta,
        parabolic_dim(&beta)?
    );
    println!("Z = {}", table.names(&s.z_support).join(" "));
    Ok(())
}
