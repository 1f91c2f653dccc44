use serde::{Deserialize, Serialize};

use super::{Poset, PosetError};

/// On-disk form: `{"elements": [..], "covers": [[lo, hi], ..]}`.
///
/// The element order in the file is the canonical element order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetFile {
    pub elements: Vec<String>,
    #[serde(default)]
    pub covers: Vec<(String, String)>,
}

impl PosetFile {
    pub fn to_poset(&self) -> Result<Poset, PosetError> {
        Poset::from_covers(&self.elements, &self.covers)
    }
}

impl Poset {
    /// The Hasse diagram in file form.
    pub fn to_file(&self) -> PosetFile {
        PosetFile {
            elements: self.names().to_vec(),
            covers: self
                .covers()
                .into_iter()
                .map(|(i, j)| (self.name(i).to_string(), self.name(j).to_string()))
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Poset, PosetError> {
        let file: PosetFile = serde_json::from_str(text).map_err(|e| PosetError::Json(e.to_string()))?;
        file.to_poset()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("poset file serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_and_writes() {
        let p = Poset::from_json(r#"{"elements":["a","b"],"covers":[["a","b"]]}"#).unwrap();
        assert_eq!(p.depth(), 1);
        let back = Poset::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn transitive_edges_are_dropped_on_export() {
        let p = Poset::from_covers(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("a", "c")]).unwrap();
        assert_eq!(p.to_file().covers.len(), 2);
    }

    #[test]
    fn malformed_json() {
        assert!(matches!(Poset::from_json("{"), Err(PosetError::Json(_))));
        assert!(matches!(
            Poset::from_json(r#"{"elements":["a"],"covers":[["a","b"]]}"#),
            Err(PosetError::UnknownElement(_))
        ));
    }
}
