//! File formats for spaces, distance vectors, and gap reports.
//!
//! Three on-disk shapes are accepted, routed by extension: a `.csv` file is
//! a bare square distance matrix, anything else is JSON holding either
//! `{"labels"?, "matrix"}` or the condensed `{"n", "rho"}`. Failures are
//! split into two layers so callers can exit differently on each: trouble
//! reading or decoding the file, versus well-formed syntax describing an
//! invalid metric (shape, symmetry, positivity, triangles).

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config_space::DistVector;
use crate::error::Error;
use crate::pairs::pair_count;
use crate::solver::GapWitness;
use crate::space::{FiniteMetricSpace, DEFAULT_TOLERANCE};

/// Why a file failed to load.
#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {message}")]
    Parse { path: String, message: String },
    /// The file decoded fine but describes an invalid object.
    #[error(transparent)]
    Metric(#[from] Error),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    #[serde(default)]
    labels: Option<Vec<String>>,
    matrix: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CondensedFile {
    n: usize,
    rho: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SpaceFile {
    Matrix(MatrixFile),
    Condensed(CondensedFile),
}

fn read(path: &Path) -> Result<String, LoadError> {
    fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn is_csv(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn parse_json(path: &Path, text: &str) -> Result<SpaceFile, LoadError> {
    serde_json::from_str(text).map_err(|e| LoadError::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn parse_csv(path: &Path, text: &str) -> Result<Vec<Vec<f64>>, LoadError> {
    let parse_err = |message: String| LoadError::Parse {
        path: path.display().to_string(),
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (lineno, record) in reader.records().enumerate() {
        let record = record.map_err(|e| parse_err(e.to_string()))?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let row = record
            .iter()
            .map(|field| {
                field.parse::<f64>().map_err(|e| {
                    parse_err(format!("line {}: bad number {field:?}: {e}", lineno + 1))
                })
            })
            .collect::<Result<Vec<f64>, LoadError>>()?;
        rows.push(row);
    }
    Ok(rows)
}

/// Loads a finite metric space, fully validated.
pub fn load_space(path: impl AsRef<Path>) -> Result<FiniteMetricSpace, LoadError> {
    let path = path.as_ref();
    let text = read(path)?;
    if is_csv(path) {
        let matrix = parse_csv(path, &text)?;
        return Ok(FiniteMetricSpace::from_matrix(&matrix)?);
    }
    match parse_json(path, &text)? {
        SpaceFile::Matrix(m) => {
            let space = FiniteMetricSpace::from_matrix(&m.matrix)?;
            Ok(match m.labels {
                Some(labels) => space.with_labels(labels)?,
                None => space,
            })
        }
        SpaceFile::Condensed(c) => Ok(FiniteMetricSpace::from_condensed(c.n, c.rho)?),
    }
}

/// Loads a distance vector from the same formats as [`load_space`], but
/// without requiring the triangle inequality — classification of boundary
/// and exterior points is exactly what the vector tools are for. Shape,
/// symmetry, the zero diagonal, and positivity are still enforced.
pub fn load_dist_vector(path: impl AsRef<Path>) -> Result<DistVector, LoadError> {
    let path = path.as_ref();
    let text = read(path)?;
    if is_csv(path) {
        let matrix = parse_csv(path, &text)?;
        return Ok(vector_from_matrix(&matrix)?);
    }
    match parse_json(path, &text)? {
        SpaceFile::Matrix(m) => Ok(vector_from_matrix(&m.matrix)?),
        SpaceFile::Condensed(c) => Ok(DistVector::new(c.n, c.rho)?),
    }
}

fn vector_from_matrix(matrix: &[Vec<f64>]) -> Result<DistVector, Error> {
    let n = matrix.len();
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    for (i, row) in matrix.iter().enumerate() {
        if row.len() != n {
            return Err(Error::NotSquare { rows: n, cols: row.len(), row: i });
        }
        for (j, &d) in row.iter().enumerate() {
            if !d.is_finite() {
                return Err(Error::NotFinite(i, j));
            }
        }
    }
    for (i, row) in matrix.iter().enumerate() {
        if row[i].abs() > DEFAULT_TOLERANCE {
            return Err(Error::NonzeroDiagonal(i));
        }
    }
    let mut rho = Vec::with_capacity(pair_count(n));
    for i in 0..n {
        for j in i + 1..n {
            if (matrix[i][j] - matrix[j][i]).abs() > DEFAULT_TOLERANCE {
                return Err(Error::AsymmetricEntry(i, j));
            }
            rho.push(matrix[i][j]);
        }
    }
    DistVector::new(n, rho)
}

/// Condensed serialization of one space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceRecord {
    pub n: usize,
    pub rho: Vec<f64>,
}

impl From<&FiniteMetricSpace> for SpaceRecord {
    fn from(space: &FiniteMetricSpace) -> Self {
        Self { n: space.len(), rho: space.rho().to_vec() }
    }
}

impl SpaceRecord {
    pub fn to_space(&self) -> Result<FiniteMetricSpace, Error> {
        FiniteMetricSpace::from_condensed(self.n, self.rho.clone())
    }
}

/// On-disk form of a bijection gap: both spaces in condensed form, the two
/// distances at full precision, and the optimal correspondence as a pair
/// list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub x: SpaceRecord,
    pub y: SpaceRecord,
    pub exact: f64,
    pub bijective: f64,
    pub gap: f64,
    pub trial: u64,
    pub correspondence: Vec<(usize, usize)>,
}

impl From<&GapWitness> for WitnessRecord {
    fn from(w: &GapWitness) -> Self {
        Self {
            x: SpaceRecord::from(&w.x),
            y: SpaceRecord::from(&w.y),
            exact: w.exact,
            bijective: w.bijective,
            gap: w.bijective - w.exact,
            trial: w.trial,
            correspondence: w.correspondence.clone(),
        }
    }
}

/// Writes a witness as pretty JSON. `serde_json` prints floats in shortest
/// round-trip form, so nothing is lost.
pub fn save_witness(path: impl AsRef<Path>, witness: &GapWitness) -> Result<(), LoadError> {
    let path = path.as_ref();
    let record = WitnessRecord::from(witness);
    let json = serde_json::to_string_pretty(&record).expect("plain data serializes");
    fs::write(path, json).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_witness(path: impl AsRef<Path>) -> Result<WitnessRecord, LoadError> {
    let path = path.as_ref();
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| LoadError::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{bijection_gap_search, gh_exact};

    fn write(dir: &tempfile::TempDir, name: &str, contents: &str) -> std::path::PathBuf {
        let path = dir.path().join(name);
        fs::write(&path, contents).unwrap();
        path
    }

    #[test]
    fn loads_all_three_formats() {
        let dir = tempfile::tempdir().unwrap();
        let matrix = write(
            &dir,
            "m.json",
            r#"{"labels": ["a", "b", "c"], "matrix": [[0,1,2],[1,0,2.5],[2,2.5,0]]}"#,
        );
        let condensed = write(&dir, "c.json", r#"{"n": 3, "rho": [1, 2, 2.5]}"#);
        let csv = write(&dir, "m.csv", "0, 1, 2\n1, 0, 2.5\n2, 2.5, 0\n");

        let a = load_space(&matrix).unwrap();
        let b = load_space(&condensed).unwrap();
        let c = load_space(&csv).unwrap();
        assert_eq!(a.rho(), b.rho());
        assert_eq!(a.rho(), c.rho());
        assert_eq!(a.labels(), Some(&["a".to_string(), "b".into(), "c".into()][..]));
        assert_eq!(b.labels(), None);
    }

    #[test]
    fn separates_the_failure_layers() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(
            load_space(dir.path().join("absent.json")),
            Err(LoadError::Io { .. })
        ));

        let garbled = write(&dir, "g.json", "{\"n\": 3, \"rho\": [1, 2");
        assert!(matches!(load_space(&garbled), Err(LoadError::Parse { .. })));

        let bad_field = write(&dir, "f.csv", "0, one\nnope, 0\n");
        assert!(matches!(load_space(&bad_field), Err(LoadError::Parse { .. })));

        let broken_triangle = write(&dir, "t.json", r#"{"n": 3, "rho": [1, 1, 3]}"#);
        assert!(matches!(
            load_space(&broken_triangle),
            Err(LoadError::Metric(Error::TriangleViolation(1, 0, 2)))
        ));

        let ragged = write(&dir, "r.csv", "0, 1\n1, 0, 2\n");
        assert!(matches!(
            load_space(&ragged),
            Err(LoadError::Metric(Error::NotSquare { .. }))
        ));
    }

    #[test]
    fn vector_loader_skips_the_triangle_requirement() {
        let dir = tempfile::tempdir().unwrap();
        let outside = write(&dir, "o.json", r#"{"n": 3, "rho": [1, 1, 3]}"#);
        assert!(load_space(&outside).is_err());
        let rho = load_dist_vector(&outside).unwrap();
        assert_eq!(rho.coords(), &[1.0, 1.0, 3.0]);
        assert!(!rho.in_cone(0.0));

        let asymmetric = write(&dir, "a.csv", "0, 1, 2\n1.5, 0, 2.5\n2, 2.5, 0\n");
        assert!(matches!(
            load_dist_vector(&asymmetric),
            Err(LoadError::Metric(Error::AsymmetricEntry(0, 1)))
        ));

        let negative = write(&dir, "n.json", r#"{"n": 3, "rho": [1, -1, 3]}"#);
        assert!(matches!(
            load_dist_vector(&negative),
            Err(LoadError::Metric(Error::NonpositiveCoordinate(1)))
        ));
    }

    #[test]
    fn witness_files_round_trip_at_full_precision() {
        let witness = bijection_gap_search(4, 200_000, 7, (0.5, 1.5))
            .unwrap()
            .expect("this seed finds a gap");
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.json");
        save_witness(&path, &witness).unwrap();
        let record = read_witness(&path).unwrap();
        assert_eq!(record.exact, witness.exact);
        assert_eq!(record.bijective, witness.bijective);
        assert_eq!(record.x.rho, witness.x.rho());
        assert_eq!(record.correspondence, witness.correspondence);

        // The reloaded spaces reproduce the recorded distance exactly.
        let x = record.x.to_space().unwrap();
        let y = record.y.to_space().unwrap();
        assert_eq!(gh_exact(&x, &y).0, record.exact);
    }
}
