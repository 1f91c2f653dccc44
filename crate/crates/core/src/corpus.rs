//! The bundled test corpus: a few small complexes and all small posets.

use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::poset::{enumerate_posets, Poset, PosetError};
use crate::simplicial::ComplexError;
use crate::RationalComplex;

const BUNDLED: &[(&str, &str)] = &[
    ("square", include_str!("../corpus/complexes/square.json")),
    ("simplex0", include_str!("../corpus/complexes/simplex0.json")),
    ("simplex1", include_str!("../corpus/complexes/simplex1.json")),
    ("simplex2", include_str!("../corpus/complexes/simplex2.json")),
    ("simplex3", include_str!("../corpus/complexes/simplex3.json")),
    ("simplex4", include_str!("../corpus/complexes/simplex4.json")),
    ("tetra_boundary", include_str!("../corpus/complexes/tetra_boundary.json")),
];

/// Largest poset size in the bundled corpus.
pub const MAX_CORPUS_POSET: usize = 5;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Complex { path: String, source: ComplexError },
    #[error("{path}: {source}")]
    Poset { path: String, source: PosetError },
}

#[derive(Clone, Debug)]
pub struct NamedComplex {
    pub name: String,
    pub complex: RationalComplex,
}

/// The bundled complexes, in a fixed order.
pub fn complexes() -> Vec<NamedComplex> {
    BUNDLED
        .iter()
        .map(|(name, text)| NamedComplex {
            name: name.to_string(),
            complex: RationalComplex::from_json(text).expect("bundled complex parses"),
        })
        .collect()
}

pub fn complex(name: &str) -> Option<RationalComplex> {
    complexes().into_iter().find(|c| c.name == name).map(|c| c.complex)
}

/// The standard `d`-simplex: the origin and the first `d` basis vectors.
pub fn simplex(d: usize) -> Option<RationalComplex> {
    complex(&format!("simplex{d}"))
}

/// One poset per isomorphism class with `1..=max` elements.
pub fn posets(max: usize) -> Vec<Poset> {
    (1..=max).flat_map(|n| enumerate_posets(n, n)).collect()
}

/// Complexes from `dir/complexes/*.json` (or `dir/*.json` when there is no
/// `complexes` subdirectory), sorted by file name.
pub fn load_complexes(dir: &Path) -> Result<Vec<NamedComplex>, CorpusError> {
    let sub = dir.join("complexes");
    let dir = if sub.is_dir() { sub } else { dir.to_path_buf() };
    json_files(&dir)?
        .into_iter()
        .map(|path| {
            let shown = path.display().to_string();
            let text = fs::read_to_string(&path)
                .map_err(|source| CorpusError::Io { path: shown.clone(), source })?;
            let complex = RationalComplex::from_json(&text)
                .map_err(|source| CorpusError::Complex { path: shown, source })?;
            let name = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            Ok(NamedComplex { name, complex })
        })
        .collect()
}

/// Posets from `dir/posets/*.json`; empty when that directory is absent.
pub fn load_posets(dir: &Path) -> Result<Vec<Poset>, CorpusError> {
    let dir = dir.join("posets");
    if !dir.is_dir() {
        return Ok(Vec::new());
    }
    json_files(&dir)?
        .into_iter()
        .map(|path| {
            let shown = path.display().to_string();
            let text = fs::read_to_string(&path)
                .map_err(|source| CorpusError::Io { path: shown.clone(), source })?;
            Poset::from_json(&text).map_err(|source| CorpusError::Poset { path: shown, source })
        })
        .collect()
}

fn json_files(dir: &Path) -> Result<Vec<std::path::PathBuf>, CorpusError> {
    let entries =
        fs::read_dir(dir).map_err(|source| CorpusError::Io { path: dir.display().to_string(), source })?;
    let mut out: Vec<_> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    out.sort();
    Ok(out)
}
