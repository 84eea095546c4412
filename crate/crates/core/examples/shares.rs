//! Reads against citations and papers for the twelve-country share table.

use std::path::PathBuf;

use bibops::analytics::{compare_shares, load_shares, Format};

fn main() -> bibops::Result<()> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/shares.csv");
    let cmp = compare_shares(&load_shares(&path)?);
    print!("{}", cmp.to_table().render(Format::Text));
    Ok(())
}
