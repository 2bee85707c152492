//! Index vectors of SL(4) acting on cubic surfaces, with both codimensions.

use gitcoh::strata::{index_set_search, stratum_codim, CodimMode, SearchOptions};

fn main() -> anyhow::Result<()> {
    let opts = SearchOptions {
        symmetry: true,
        parallel: true,
    };
    let report = index_set_search(4, 3, None, CodimMode::RootCount, opts)?;
    println!(
        "{} candidates, {} index vectors",
        report.candidates,
        report.index_vectors.len()
    );
    for iv in &report.index_vectors {
        let pinned = iv
            .codim_override
            .as_ref()
            .map_or("-".to_string(), |o| o.codim.to_string());
        println!(
            "codim {:>2} (pinned {pinned:>2})  |Z| = {:>2}  nonempty = {}",
            stratum_codim(iv, 4, 3)?,
            iv.z_support.len(),
            iv.nonempty_ss
        );
    }

    let paper = index_set_search(4, 3, Some(10), CodimMode::Paper, opts)?;
    println!("\npinned strata only:\n{}", paper.to_text());
    Ok(())
}
