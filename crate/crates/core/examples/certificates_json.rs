//! Run claims through the library and print their certificates as JSON.
//!
//! `cargo run --example certificates_json -- 'case_*'`

use std::collections::BTreeMap;

use ballquot::claims::{select, verify_all, Bounds};

fn main() -> ballquot::Result<()> {
    let pattern = std::env::args().nth(1).unwrap_or_else(|| "cminred_table".into());
    let ids = select(&[pattern])?;
    let bounds = Bounds { samples: 20, ..Bounds::default() };
    for cert in verify_all(&ids, &bounds, 0, &BTreeMap::new()) {
        println!("{}", serde_json::to_string_pretty(&cert?).expect("serialisable"));
    }
    Ok(())
}
