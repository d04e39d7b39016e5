//! Instance file format: JSON with optional leading `#` comment lines.
//!
//! The document is an object with `students` and `colleges` arrays:
//!
//! ```json
//! {
//!   "students": [{ "id": 0, "background": "arts", "prefs": [1, 0] }],
//!   "colleges": [{
//!     "id": 0, "quota": 2, "lambda": 0.0, "specialization": "arts",
//!     "ranked_sets": [[0, 1], [0]]
//!   }]
//! }
//! ```
//!
//! Ids are dense and zero-based. `prefs` lists acceptable colleges, most
//! preferred first. `ranked_sets` lists admissible student sets, rank 1
//! first; member order inside a set is irrelevant. Writers may prepend
//! comment lines starting with `#` (the generator records its config
//! there); readers skip them.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{validate_instance, College, Instance, Student};

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    students: Vec<Student>,
    colleges: Vec<College>,
}

/// Serializes an instance to the canonical pretty JSON form. Equal
/// instances always produce byte-identical text.
pub fn instance_to_json(inst: &Instance) -> String {
    let file = InstanceFile {
        students: inst.students().to_vec(),
        colleges: inst.colleges().to_vec(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("instance serialization cannot fail");
    text.push('\n');
    text
}

/// Parses an instance document, skipping leading `#` comment lines, and
/// validates it.
pub fn instance_from_json(text: &str) -> Result<Instance> {
    let body_start = text
        .lines()
        .scan(0usize, |offset, line| {
            let here = *offset;
            *offset += line.len() + 1;
            Some((here, line))
        })
        .find(|(_, line)| !line.trim_start().starts_with('#') && !line.trim().is_empty())
        .map(|(offset, _)| offset)
        .unwrap_or(text.len());
    let file: InstanceFile =
        serde_json::from_str(&text[body_start..]).map_err(|e| Error::Parse(e.to_string()))?;
    let inst = Instance::new(file.students, file.colleges);
    let violations = validate_instance(&inst);
    if !violations.is_empty() {
        let listed: Vec<String> = violations.iter().take(5).map(|v| v.to_string()).collect();
        return Err(Error::InvalidInstance(listed.join("; ")));
    }
    Ok(inst)
}

/// Writes an instance file, prefixing each `header` line with `# `.
pub fn save_instance(path: &Path, inst: &Instance, header: &[String]) -> Result<()> {
    let mut text = String::new();
    for line in header {
        text.push_str("# ");
        text.push_str(line);
        text.push('\n');
    }
    text.push_str(&instance_to_json(inst));
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn load_instance(path: &Path) -> Result<Instance> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    instance_from_json(&text)
}
