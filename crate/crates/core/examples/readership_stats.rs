//! Monthly unique reads, heavy users and per-country usage from a read log.

use std::path::PathBuf;

use bibops::analytics::{country_usage, unique_reads, user_month_stats, YearMonth};
use bibops::corpus::{load_documents, load_read_log, load_user_countries};

fn main() -> bibops::Result<()> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/corpus");
    let corpus = load_documents(&dir.join("documents.jsonl"))?;
    let log = load_read_log(&dir.join("reads.csv"), &corpus)?;

    for m in 7..=12 {
        let month = YearMonth::new(2002, m).unwrap();
        let stats = user_month_stats(&log, month, 4);
        println!(
            "{month}: {:3} unique reads, {:2} readers, {} heavy (share {:.2})",
            unique_reads(&log, month),
            stats.per_user.len(),
            stats.heavy_users,
            stats.heavy_share
        );
    }

    let users = load_user_countries(&dir.join("user_countries.csv"))?;
    println!("\nusage by country (log entries, estimated requests):");
    for (iso, u) in country_usage(&log, &users) {
        println!("  {iso}  {:3}  {:5.1}", u.raw, u.adjusted);
    }
    Ok(())
}
