//! Writes the sample CLI inputs under `data/` (or the directory given as
//! the first argument) from the built-in fixtures.

use std::fs;
use std::path::{Path, PathBuf};

use charvar::fixtures;
use charvar::invariants::InvariantPolynomial;
use charvar::words::Presentation;
use serde_json::json;

fn write(dir: &Path, name: &str, value: &impl serde::Serialize) -> charvar::Result<()> {
    let path = dir.join(name);
    fs::write(&path, serde_json::to_string_pretty(value)? + "\n")?;
    println!("wrote {}", path.display());
    Ok(())
}

fn main() -> charvar::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("data"));
    fs::create_dir_all(&dir)?;

    write(&dir, "torus.json", &Presentation::torus())?;
    let mut torus = fixtures::torus_diagonal().to_json();
    torus.presentation = None;
    write(&dir, "torus_diagonal.json", &torus)?;
    write(&dir, "genus2_sl2.json", &fixtures::genus2_irreducible(5).to_json())?;
    write(&dir, "genus2_family.json", &fixtures::genus2_family(3)?.to_json())?;
    write(&dir, "trace_form.json", &InvariantPolynomial::TraceForm)?;
    write(&dir, "killing.json", &InvariantPolynomial::Killing)?;

    // sl(2) coordinates are (E12, E21, H)
    let h = [[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]];
    let zero = [[0.0, 0.0]; 3];
    write(
        &dir,
        "torus_cocycles.json",
        &json!({ "cocycles": [{ "a": h, "b": zero }, { "a": zero, "b": h }] }),
    )?;
    write(
        &dir,
        "torus_swap.json",
        &json!({ "name": "swap", "endomorphism": { "a": "b", "b": "a" }, "expected_ratio": -1.0 }),
    )?;
    write(
        &dir,
        "torus_shear.json",
        &json!({ "name": "shear", "endomorphism": { "a": "a b" }, "expected_ratio": 1.0 }),
    )?;
    Ok(())
}
