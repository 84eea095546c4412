//! The country research model on the illustrative country table.

use std::path::PathBuf;

use bibops::analytics::{
    bifurcation_report, filter_active_countries, predict_research, predict_scientists,
    usage_power_law, CultureConstants, ACTIVE_USAGE_THRESHOLD,
};
use bibops::corpus::load_countries;

fn main() -> bibops::Result<()> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/corpus/countries.csv");
    let all = load_countries(&path)?;
    let active = filter_active_countries(&all, ACTIVE_USAGE_THRESHOLD);
    println!(
        "{} of {} countries at or above {ACTIVE_USAGE_THRESHOLD} uses",
        active.len(),
        all.len()
    );

    let fit = usage_power_law(&active)?;
    println!(
        "usage/pop ~ (gdp/pop)^{:.2}  (rms {:.2} in ln units)",
        fit.exponent, fit.residual_rms
    );

    let k = CultureConstants::default();
    println!("\niso  culture   members  predicted  research/1e3");
    for r in &active {
        let s = predict_scientists(r, &k);
        println!(
            "{}   {:9} {:7}  {:9.0}  {:12.1}",
            r.iso,
            r.culture.label(),
            r.iau_members,
            s,
            predict_research(r, s) / 1e3
        );
    }

    let report = bifurcation_report(&active, &k);
    println!("\nmembers vs gdp/k:");
    for (culture, c) in &report.by_culture {
        println!(
            "  {:9} above {:2}  on {:2}  below {:2}",
            culture.label(),
            c.above,
            c.on_line,
            c.below
        );
    }
    Ok(())
}
