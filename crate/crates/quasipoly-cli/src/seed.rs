//! Regenerates the golden input corpus used by the integration tests.

use std::fs;
use std::path::Path;

use serde_json::json;

use crate::CliError;

pub fn seed_corpus(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", dir.display())))?;
    let files = [
        (
            // One equation whose count is 2n+5 on even n and n+3 on odd n.
            "smitheg.json",
            json!({
                "matrix": [["n^2+2n", "2n+4"]],
                "rhs": ["2n^3+8n^2+8n"],
            }),
        ),
        (
            // The 2x3 system counted by the second-region closed form.
            "intro23.json",
            json!({
                "matrix": [["2n+1", "3n+1", "n^2"], ["2", "3", "n+1"]],
                "rhs": ["3n^3+1", "3n^2+n-1"],
            }),
        ),
        (
            // Single equation driving the carry-range example.
            "carry.json",
            json!({
                "matrix": [["2", "n+1", "n^2"]],
                "rhs": ["4n^2+3n-5"],
            }),
        ),
        (
            // Triangle x >= 0, y >= 0, 2x + y <= n + 1.
            "polygon.json",
            json!({
                "rows": [["1", "0"], ["0", "1"], ["-2", "-1"]],
                "rhs": ["0", "0", "-n-1"],
            }),
        ),
        (
            // Matrix whose generalized Smith form splits by parity.
            "snfmat.json",
            json!({
                "matrix": [["2", "3n+2"], ["n", "n^3+2n"]],
            }),
        ),
        (
            // Segment from the origin to n^2/(2n+1).
            "interval.json",
            json!({
                "vertices": [["0"], ["n^2/(2n+1)"]],
            }),
        ),
    ];
    for (name, value) in files {
        let path = dir.join(name);
        let text = serde_json::to_string_pretty(&value).expect("serializable");
        fs::write(&path, text + "\n")
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
