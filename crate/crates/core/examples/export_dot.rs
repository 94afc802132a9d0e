//! Writes the model, twin system and product of the factory fixture as DOT
//! files into a directory (default: the system temp dir).
//!
//! cargo run --example export_dot -- out/

use std::path::PathBuf;

use opaque_plan::buchi::translate;
use opaque_plan::ltl::parse;
use opaque_plan::model::Wts;
use opaque_plan::synthesis::{build_product, build_twin};

fn main() {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    let t = Wts::load(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/factory.json"
    ))
    .unwrap();
    let nba = translate(&parse("GF P1 && GF P2").unwrap());
    let twin = build_twin(&t);
    let product = build_product(&twin, &nba);
    assert!(product.within_size_bounds());

    for (name, dot, n) in [
        ("wts", t.to_dot(), t.len()),
        ("nba", nba.to_dot(), nba.num_states),
        ("twin", twin.to_dot(), twin.len()),
        ("product", product.to_dot(), product.len()),
    ] {
        let path = dir.join(format!("factory_{name}.dot"));
        std::fs::write(&path, dot).unwrap();
        println!("{name:8} {n:4} states -> {}", path.display());
    }
}
