//! Research time saved, in 2000-hour FTE years, from yearly access counts.

use std::path::PathBuf;

use bibops::analytics::{
    load_access_counts, readership_ratio, utility_report, Format, UtilityTable,
    NON_ELECTRONIC_READS_BASELINE,
};
use bibops::corpus::AccessType;

fn main() -> bibops::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/usage_2002.csv")
        });
    let counts = load_access_counts(&path)?;
    let report = utility_report(&counts, &UtilityTable::default());
    print!("{}", report.to_table().render(Format::Text));
    println!("exact total: {} FTE years", report.exact_total());

    let full: u64 = [AccessType::E, AccessType::F, AccessType::G]
        .iter()
        .filter_map(|t| counts.get(t))
        .sum();
    let ratio = readership_ratio(full, NON_ELECTRONIC_READS_BASELINE)?;
    println!("{full} full-text reads, {ratio:.2}x the non-electronic baseline");
    Ok(())
}
