//! Orders r whose crude Reid-Tai bound stays below 1, against the tabulated set.

use ballquot::reidtai::{enumerate_exceptional_orders, tabulated_exceptional_orders};

fn main() {
    let limit = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100_000);
    let found = enumerate_exceptional_orders(limit);
    let table = tabulated_exceptional_orders();
    println!("enumerated up to {limit}: {found:?}");
    println!("tabulated: {:?}", table.iter().collect::<Vec<_>>());
    let extra: Vec<_> = found.iter().filter(|r| !table.contains(r)).collect();
    let missing: Vec<_> = table.iter().filter(|r| !found.contains(r)).collect();
    println!("enumerated but not tabulated: {extra:?}");
    println!("tabulated but not enumerated: {missing:?}");
}
