//! Parse, evaluate and verify a shipped worksheet.

use gitcoh::worksheet::{evaluate_worksheet, parse_worksheet, serialize_worksheet};

fn main() -> anyhow::Result<()> {
    let name = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "sextics_crosscheck.ws".into());
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("assets")
        .join(name);
    let ws = parse_worksheet(&std::fs::read_to_string(&path)?)?;
    println!("{} steps: {:?}", ws.steps.len(), ws.kind_counts());
    assert_eq!(parse_worksheet(&serialize_worksheet(&ws))?, ws);

    let report = evaluate_worksheet(&ws)?;
    print!("{}", report.to_text());
    Ok(())
}
