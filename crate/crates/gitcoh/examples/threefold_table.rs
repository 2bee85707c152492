//! The printed list of index vectors for cubic threefolds, checked row by row
//! with the hull certificate and the torus test.

use gitcoh::strata::{
    generic_torus_semistable, index_vector_for, nearest_point_hull, threefold_table,
};
use gitcoh::weights::{chamber_sort, enumerate_monomials, weight_of, WeightVector};

fn main() -> anyhow::Result<()> {
    let table = enumerate_monomials(5, 3);
    for row in threefold_table() {
        let weights: Vec<WeightVector> = row.support.iter().map(weight_of).collect();
        let hull = nearest_point_hull(&weights);
        assert!(hull.verify(&weights));
        let (beta, _) = chamber_sort(&hull.point);
        let iv = index_vector_for(&table, &beta)?;
        let torus = generic_torus_semistable(&weights);
        println!(
            "row {} {:<24} |support| = {:>2}  |Z| = {:>2}  nonempty = {:<5}  generic point torus-unstable = {:<5}  printed as contributing = {}",
            row.row,
            row.printed_beta,
            row.support.len(),
            iv.z_support.len(),
            iv.nonempty_ss,
            !torus.is_semistable(),
            row.contributes
        );
    }
    Ok(())
}
