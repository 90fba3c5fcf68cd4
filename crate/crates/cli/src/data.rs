//! Bundled example data and external data-directory loading.
//!
//! The bundled set covers the shapes every check in this crate runs on:
//! the rank-2 quivers of types A2, B2 (weights 1,2), G2 (weights 1,3) and
//! the Kronecker quiver, plus the rank-3 path quiver A3.  A data directory
//! passed on the command line can override any of these, or add new names,
//! by dropping `<name>.json` files in the quiver schema next to them.

use std::collections::BTreeMap;
use std::path::Path;

use qtetra_core::cartan::ValuedQuiver;

use crate::json::QuiverJson;

/// Names of the quivers shipped with the binary, in listing order.
pub fn bundled_names() -> &'static [&'static str] {
    &["a2", "a3", "b2", "g2", "kronecker"]
}

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// One bundled quiver by name.
pub fn bundled_quiver(name: &str) -> Result<ValuedQuiver, String> {
    match name {
        "a2" => ValuedQuiver::new(labels(&["1", "2"]), vec![1, 1], &[(0, 1, 1)]),
        "a3" => ValuedQuiver::new(labels(&["1", "2", "3"]), vec![1, 1, 1], &[(0, 1, 1), (1, 2, 1)]),
        "b2" => ValuedQuiver::new(labels(&["1", "2"]), vec![1, 2], &[(0, 1, 1)]),
        "g2" => ValuedQuiver::new(labels(&["1", "2"]), vec![1, 3], &[(0, 1, 1)]),
        "kronecker" => ValuedQuiver::new(labels(&["1", "2"]), vec![1, 1], &[(0, 1, 2)]),
        _ => Err(format!(
            "unknown quiver '{name}' (available: {})",
            bundled_names().join(", ")
        )),
    }
}

/// The doubled source-adapted word of a quiver: the smallest-index
/// topological order of the vertices, listed twice.  Every acyclic quiver
/// has one, and it is the word the seed and character constructions expect.
pub fn adapted_word(quiver: &ValuedQuiver) -> Vec<usize> {
    let n = quiver.rank();
    let mut used = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let next = (0..n)
            .find(|&i| {
                !used[i]
                    && (0..n).all(|j| used[j] || j == i || quiver.arrow_mult(j, i) == 0)
            })
            .expect("valued quivers are acyclic");
        used[next] = true;
        order.push(next);
    }
    let mut word = order.clone();
    word.extend_from_slice(&order);
    word
}

/// The named quivers available to a run: the bundled set, possibly
/// overridden from a directory.
#[derive(Debug)]
pub struct DataSet {
    quivers: BTreeMap<String, ValuedQuiver>,
}

impl DataSet {
    /// The bundled examples only.
    pub fn bundled() -> DataSet {
        let mut quivers = BTreeMap::new();
        for name in bundled_names() {
            let quiver = bundled_quiver(name).expect("bundled data is valid");
            quivers.insert(name.to_string(), quiver);
        }
        DataSet { quivers }
    }

    /// The bundled examples with every `<name>.json` file in `dir` (when
    /// given) parsed as a quiver and stored under its file stem,
    /// replacing a bundled quiver of the same name.
    pub fn with_overrides(dir: Option<&Path>) -> Result<DataSet, String> {
        let mut data = DataSet::bundled();
        let Some(dir) = dir else {
            return Ok(data);
        };
        let entries = std::fs::read_dir(dir)
            .map_err(|e| format!("cannot read data directory {}: {e}", dir.display()))?;
        let mut paths = Vec::new();
        for entry in entries {
            let entry = entry.map_err(|e| format!("cannot list {}: {e}", dir.display()))?;
            let path = entry.path();
            if path.extension().map_or(false, |ext| ext == "json") {
                paths.push(path);
            }
        }
        paths.sort();
        for path in paths {
            let name = path
                .file_stem()
                .and_then(|s| s.to_str())
                .ok_or_else(|| format!("data file {} has no usable name", path.display()))?
                .to_string();
            let text = std::fs::read_to_string(&path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let parsed: QuiverJson = serde_json::from_str(&text)
                .map_err(|e| format!("{} is not a quiver document: {e}", path.display()))?;
            let quiver = parsed
                .to_quiver()
                .map_err(|e| format!("{}: {e}", path.display()))?;
            data.quivers.insert(name, quiver);
        }
        Ok(data)
    }

    pub fn names(&self) -> Vec<&str> {
        self.quivers.keys().map(|s| s.as_str()).collect()
    }

    pub fn get(&self, name: &str) -> Result<&ValuedQuiver, String> {
        self.quivers.get(name).ok_or_else(|| {
            format!(
                "unknown quiver '{name}' (available: {})",
                self.names().join(", ")
            )
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_quivers_have_the_advertised_shapes() {
        let data = DataSet::bundled();
        assert_eq!(data.names(), vec!["a2", "a3", "b2", "g2", "kronecker"]);

        let a2 = data.get("a2").unwrap();
        assert_eq!(a2.rank(), 2);
        assert_eq!(a2.weights(), &[1, 1]);
        assert_eq!(a2.arrow_mult(0, 1), 1);

        let b2 = data.get("b2").unwrap();
        assert_eq!(b2.weights(), &[1, 2]);
        assert_eq!(b2.cartan().entry(0, 1), -2);
        assert_eq!(b2.cartan().entry(1, 0), -1);

        let g2 = data.get("g2").unwrap();
        assert_eq!(g2.cartan().entry(0, 1), -3);

        let kron = data.get("kronecker").unwrap();
        assert_eq!(kron.arrow_mult(0, 1), 2);
        assert_eq!(kron.b(0, 1), 2);

        assert!(data.get("e8").unwrap_err().contains("available"));
        assert!(bundled_quiver("e8").is_err());
    }

    #[test]
    fn adapted_words_are_doubled_topological_orders() {
        let data = DataSet::bundled();
        assert_eq!(adapted_word(data.get("a2").unwrap()), vec![0, 1, 0, 1]);
        assert_eq!(adapted_word(data.get("b2").unwrap()), vec![0, 1, 0, 1]);
        assert_eq!(adapted_word(data.get("kronecker").unwrap()), vec![0, 1, 0, 1]);
        assert_eq!(adapted_word(data.get("a3").unwrap()), vec![0, 1, 2, 0, 1, 2]);

        // An order that is forced by the arrows rather than by index.
        let reversed = ValuedQuiver::new(
            vec!["1".into(), "2".into()],
            vec![1, 1],
            &[(1, 0, 1)],
        )
        .unwrap();
        assert_eq!(adapted_word(&reversed), vec![1, 0, 1, 0]);
    }

    #[test]
    fn data_directories_override_and_extend_the_bundled_set() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(
            dir.path().join("a2.json"),
            r#"{"labels": ["1", "2"], "weights": [1, 1], "arrows": [[0, 1, 2]]}"#,
        )
        .unwrap();
        std::fs::write(
            dir.path().join("c2.json"),
            r#"{"labels": ["1", "2"], "weights": [2, 1], "arrows": [[0, 1, 1]]}"#,
        )
        .unwrap();
        std::fs::write(dir.path().join("notes.txt"), "ignored").unwrap();

        let data = DataSet::with_overrides(Some(dir.path())).unwrap();
        assert_eq!(data.names(), vec!["a2", "a3", "b2", "c2", "g2", "kronecker"]);
        assert_eq!(data.get("a2").unwrap().arrow_mult(0, 1), 2);
        assert_eq!(data.get("c2").unwrap().weights(), &[2, 1]);

        // Bad documents are reported with their path.
        std::fs::write(dir.path().join("bad.json"), "{").unwrap();
        let err = DataSet::with_overrides(Some(dir.path())).unwrap_err();
        assert!(err.contains("bad.json"));

        let missing = DataSet::with_overrides(Some(&dir.path().join("nope")));
        assert!(missing.is_err());
    }
}
