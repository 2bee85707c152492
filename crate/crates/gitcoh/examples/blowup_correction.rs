//! One Kirwan blowup correction: the point with stabiliser SL(3).

use gitcoh::kirwan::{blowup_correction, BlowupStep};
use gitcoh::series::{classifying_series, GroupDescriptor};
use gitcoh::worksheet::expr::eval_str;

fn main() -> anyhow::Result<()> {
    let n = 20;
    let series = |s: &str| eval_str(s, n).map_err(anyhow::Error::msg);
    let step = BlowupStep {
        name: "omega".into(),
        d_r: 27,
        center_series: classifying_series(&GroupDescriptor::sl(3), n),
        removal_terms: vec![
            (10, series("(1-t^8)/(1-t^2)^3")?),
            (25, series("(1-t^6)/(1-t^2)(1-t^4)(1-t^6)")?),
        ],
    };
    let a = blowup_correction(&step, n)?;
    let closed = series("t^2/(1-t^2)(1-t^4)(1-t^6) - t^20/(1-t^2)^3")?;
    println!("A = {a}");
    println!("agrees with the closed form: {}", a == closed);
    Ok(())
}
