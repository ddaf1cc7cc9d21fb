//! JSON file formats. Output structs list fields in the order they are written.

use std::fs;
use std::path::{Path, PathBuf};

use cubulate_core::{validate_complex_with, CubeComplex, Error, MedianCheck, Pocset, ValidateOptions, Wallspace};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::Failure;

#[derive(Debug, Serialize, Deserialize)]
pub struct ComplexFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comments: Option<String>,
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
}

impl ComplexFile {
    pub fn of(x: &CubeComplex) -> Self {
        let edges = x.edge_names().into_iter().map(|(a, b)| [a, b]).collect();
        ComplexFile { name: None, comments: None, vertices: x.names().to_vec(), edges }
    }
}

#[derive(Debug, Deserialize)]
pub struct PocsetFile {
    pub elements: Vec<String>,
    pub pairs: Vec<[String; 2]>,
    #[serde(default)]
    pub order: Vec<[String; 2]>,
}

#[derive(Debug, Deserialize)]
pub struct WallEntry {
    pub plus: Vec<String>,
    pub minus: Vec<String>,
}

#[derive(Debug, Deserialize)]
pub struct WallFile {
    pub points: Vec<String>,
    pub walls: Vec<WallEntry>,
}

#[derive(Debug, Deserialize)]
pub struct SwitchFile {
    /// Path of the complex file, relative to the switch file.
    pub complex: PathBuf,
    pub switches: Vec<[String; 2]>,
    pub n: u32,
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

pub fn median_check(sample: Option<usize>) -> MedianCheck {
    match sample {
        Some(triples) => MedianCheck::Sampled { triples, seed: 0 },
        None => MedianCheck::Exhaustive,
    }
}

pub fn load_complex(path: &Path, sample: Option<usize>) -> Result<CubeComplex, Failure> {
    let file: ComplexFile = read_json(path)?;
    let edges: Vec<(String, String)> = file.edges.into_iter().map(|[a, b]| (a, b)).collect();
    let options = ValidateOptions { median_check: median_check(sample) };
    validate_complex_with(&file.vertices, &edges, options).map_err(|e| match e {
        // A file that does not even describe a simple graph is malformed input.
        Error::Empty | Error::DuplicateVertex(_) | Error::UnknownVertex(_) | Error::NotSimple(_) => {
            Failure::Input(format!("{}: {e}", path.display()))
        }
        e => Failure::Domain(e),
    })
}

pub fn load_pocset(path: &Path) -> Result<Pocset, Failure> {
    let file: PocsetFile = read_json(path)?;
    let mut listed: Vec<&String> = file.elements.iter().collect();
    let mut paired: Vec<&String> = file.pairs.iter().flatten().collect();
    listed.sort();
    paired.sort();
    if listed != paired {
        return Err(Failure::Input(format!("{}: pairs must list every element exactly once", path.display())));
    }
    let pairs: Vec<(&str, &str)> = file.pairs.iter().map(|[a, b]| (a.as_str(), b.as_str())).collect();
    let order: Vec<(&str, &str)> = file.order.iter().map(|[a, b]| (a.as_str(), b.as_str())).collect();
    Ok(Pocset::from_labels(&pairs, &order)?)
}

pub fn load_walls(path: &Path) -> Result<Wallspace, Failure> {
    let file: WallFile = read_json(path)?;
    let walls: Vec<(Vec<String>, Vec<String>)> = file.walls.into_iter().map(|w| (w.plus, w.minus)).collect();
    Ok(Wallspace::new(&file.points, &walls)?)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}

/// Writes to `path`, or to standard output when absent.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
