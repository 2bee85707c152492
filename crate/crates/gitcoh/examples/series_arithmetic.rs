//! Truncated power series: rational expansions, arithmetic, parsing and JSON.

use gitcoh::series::{classifying_series, expand_rational, finite_geometric, GroupDescriptor};
use gitcoh::worksheet::expr::eval_str;
use gitcoh::TruncatedSeries;

fn main() -> anyhow::Result<()> {
    // (1 + t^2 + t^10 + t^12) / ((1 - t^4)(1 - t^6))
    let mut num = vec![0; 13];
    for k in [0, 2, 10, 12] {
        num[k] = 1;
    }
    let plane = expand_rational(&num, &[(4, 1), (6, 1)], 20)?;
    println!("expansion:      {plane}");

    let bsl3 = classifying_series(&GroupDescriptor::sl(3), 20);
    let geom = finite_geometric(2, 10, 20)?;
    println!("P(BSL3):        {bsl3}");
    println!("(t^2+..+t^10) P(BSL3): {}", &geom * &bsl3);

    // the same expression through the worksheet parser
    let parsed = eval_str("(1+t^2+t^10+t^12)/(1-t^4)(1-t^6)", 20).map_err(anyhow::Error::msg)?;
    assert_eq!(parsed, plane);

    let json = serde_json::to_string(&plane)?;
    println!("json:           {json}");
    let back: TruncatedSeries = serde_json::from_str(&json)?;
    let text: TruncatedSeries = plane.to_string().parse()?;
    assert_eq!(back, plane);
    assert_eq!(text, plane);
    Ok(())
}
