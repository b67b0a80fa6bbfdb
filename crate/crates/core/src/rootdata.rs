//! Weight tables for quaternionic irreps and a cache-first client for
//! L-function root numbers.
//!
//! A weight table assigns a sign in `{-1, +1}` to each quaternionic
//! (indicator `-1`) irrep of a group; the functor keeps exactly the irreps
//! with weight `-1`.  Tables load from JSON in either a structured shape
//! with provenance or as a bare label-to-sign map.
//!
//! Root numbers can be pulled from the LMFDB Artin-representation API, but
//! the client is cache-first and works fully offline: a fetch first looks
//! for `<cache-dir>/<label>.json` and touches the network only when that
//! file is absent and the crate was built with the `online` feature.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{parse_json, read_to_string, Error, Result};
use crate::group::FiniteGroup;
use crate::repr::Catalog;

/// Where a weight value came from.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct ProvenanceEntry {
    /// Free-form origin tag, e.g. `bundled`, `user`, `lmfdb`.
    pub source: String,
    /// Optional human hint for the number field the value belongs to.
    pub field_hint: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum WeightFile {
    Structured {
        group: String,
        weights: BTreeMap<String, i64>,
        #[serde(default)]
        provenance: BTreeMap<String, ProvenanceEntry>,
    },
    Bare(BTreeMap<String, i64>),
}

/// Validated sign assignment for the quaternionic irreps of one group.
#[derive(Debug, Clone, Default)]
pub struct WeightTable {
    weights: BTreeMap<String, i8>,
    provenance: BTreeMap<String, ProvenanceEntry>,
}

impl WeightTable {
    /// Load and validate a table for `group` with irreps from `catalog`.
    ///
    /// Rejects labels that are not in the catalog, labels whose irrep does
    /// not have indicator `-1`, and sign values outside `{-1, +1}`.
    pub fn load(path: &Path, group: &FiniteGroup, catalog: &Catalog) -> Result<Self> {
        let text = read_to_string(path)?;
        let file: WeightFile = parse_json(path, &text)?;
        let (declared_group, weights, provenance) = match file {
            WeightFile::Structured {
                group,
                weights,
                provenance,
            } => (Some(group), weights, provenance),
            WeightFile::Bare(weights) => (None, weights, BTreeMap::new()),
        };
        if let Some(name) = declared_group {
            if name != group.name() {
                return Err(Error::InvalidWeights(format!(
                    "{}: table is for group {name}, expected {}",
                    path.display(),
                    group.name()
                )));
            }
        }
        Self::from_map(weights, provenance, group, catalog).map_err(|e| match e {
            Error::InvalidWeights(msg) => {
                Error::InvalidWeights(format!("{}: {msg}", path.display()))
            }
            other => other,
        })
    }

    pub fn from_map(
        weights: BTreeMap<String, i64>,
        provenance: BTreeMap<String, ProvenanceEntry>,
        group: &FiniteGroup,
        catalog: &Catalog,
    ) -> Result<Self> {
        let mut table = BTreeMap::new();
        for (label, value) in weights {
            let irrep = catalog.get(&label).ok_or_else(|| {
                Error::InvalidWeights(format!(
                    "label {label} does not name an irrep of {}",
                    group.name()
                ))
            })?;
            let fs = irrep.frobenius_schur(group)?;
            if fs != -1 {
                return Err(Error::InvalidWeights(format!(
                    "label {label} has indicator {fs}; weights are defined only for indicator -1 irreps"
                )));
            }
            if value != -1 && value != 1 {
                return Err(Error::InvalidWeights(format!(
                    "label {label} carries weight {value}, expected -1 or +1"
                )));
            }
            table.insert(label, value as i8);
        }
        Ok(WeightTable {
            weights: table,
            provenance,
        })
    }

    pub fn get(&self, label: &str) -> Option<i8> {
        self.weights.get(label).copied()
    }

    pub fn provenance(&self, label: &str) -> Option<&ProvenanceEntry> {
        self.provenance.get(label)
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.weights.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn entries(&self) -> &BTreeMap<String, i8> {
        &self.weights
    }
}

/// One cached root-number datum.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RootNumberRecord {
    /// The L-function / Artin representation label the value belongs to.
    pub label: String,
    /// Group the datum is intended for, when known.
    pub group_id: Option<String>,
    /// Irrep the datum is intended for, when known.
    pub irrep_label: Option<String>,
    /// The root number; only the values -1 and +1 are representable here.
    pub w: i8,
    /// Origin tag, e.g. `lmfdb` or `user`.
    pub provenance: String,
    pub field_hint: Option<String>,
}

impl RootNumberRecord {
    fn validate(&self) -> Result<()> {
        if self.label.is_empty() {
            return Err(Error::RootNumber("record has an empty label".into()));
        }
        if self.w != -1 && self.w != 1 {
            return Err(Error::RootNumber(format!(
                "record {} carries w = {}, expected -1 or +1",
                self.label, self.w
            )));
        }
        Ok(())
    }
}

/// Check a label is safe to use as a cache file name: nonempty, made of
/// `[A-Za-z0-9._-]`, and not starting with `.` or `-`.
fn validated_label(label: &str) -> Result<&str> {
    let ok_chars = label
        .chars()
        .all(|c| c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-'));
    if label.is_empty() || !ok_chars || label.starts_with('.') || label.starts_with('-') {
        return Err(Error::RootNumber(format!(
            "label {label:?} is not a valid cache key"
        )));
    }
    Ok(label)
}

/// Path of the cache file a label maps to.
pub fn cache_path(cache_dir: &Path, label: &str) -> Result<PathBuf> {
    Ok(cache_dir.join(format!("{}.json", validated_label(label)?)))
}

/// Write a record into the cache atomically (temp file + rename), creating
/// the directory if needed.  Bytes are compact JSON with fields in a fixed
/// order, so repeated stores of the same record are byte-identical.
pub fn store_record(record: &RootNumberRecord, cache_dir: &Path) -> Result<PathBuf> {
    record.validate()?;
    let path = cache_path(cache_dir, &record.label)?;
    std::fs::create_dir_all(cache_dir).map_err(|e| Error::Io {
        path: cache_dir.to_path_buf(),
        source: e,
    })?;
    let bytes = serde_json::to_vec(record).expect("record serialization cannot fail");
    let tmp = cache_dir.join(format!(".{}.tmp", validated_label(&record.label)?));
    std::fs::write(&tmp, &bytes).map_err(|e| Error::Io {
        path: tmp.clone(),
        source: e,
    })?;
    std::fs::rename(&tmp, &path).map_err(|e| Error::Io {
        path: path.clone(),
        source: e,
    })?;
    Ok(path)
}

/// Read a record straight from a cache file.
pub fn load_record(path: &Path) -> Result<RootNumberRecord> {
    let text = read_to_string(path)?;
    let record: RootNumberRecord = parse_json(path, &text)?;
    record.validate()?;
    Ok(record)
}

/// Cache-first root-number lookup.
///
/// Returns the cached record when present.  On a cache miss the behaviour
/// depends on how the crate was built: with the `online` feature the LMFDB
/// API is queried once and the result cached; without it the call fails
/// with an error naming the file that would satisfy the lookup.
pub fn lmfdb_fetch(label: &str, cache_dir: &Path) -> Result<RootNumberRecord> {
    let path = cache_path(cache_dir, label)?;
    if path.exists() {
        let record = load_record(&path)?;
        if record.label != label {
            return Err(Error::RootNumber(format!(
                "cache file {} holds label {}, expected {label}",
                path.display(),
                record.label
            )));
        }
        return Ok(record);
    }
    fetch_uncached(label, cache_dir, &path)
}

#[cfg(not(feature = "online"))]
fn fetch_uncached(label: &str, _cache_dir: &Path, path: &Path) -> Result<RootNumberRecord> {
    Err(Error::Offline(format!(
        "no cached root number for {label}; place a record at {} or rebuild with the `online` feature",
        path.display()
    )))
}

#[cfg(feature = "online")]
fn fetch_uncached(label: &str, cache_dir: &Path, _path: &Path) -> Result<RootNumberRecord> {
    let url = format!(
        "https://www.lmfdb.org/api/artin_reps/?Baselabel={label}&_format=json"
    );
    let body: serde_json::Value = reqwest::blocking::get(&url)
        .and_then(|r| r.error_for_status())
        .and_then(|r| r.json())
        .map_err(|e| Error::RootNumber(format!("query for {label} failed: {e}")))?;
    let rows = body
        .get("data")
        .and_then(|d| d.as_array())
        .ok_or_else(|| Error::RootNumber(format!("malformed response for {label}")))?;
    let row = rows
        .first()
        .ok_or_else(|| Error::RootNumber(format!("no entry found for {label}")))?;
    let sign = row
        .get("Sign")
        .or_else(|| {
            row.get("GaloisConjugates")
                .and_then(|g| g.as_array())
                .and_then(|g| g.first())
                .and_then(|g| g.get("Sign"))
        })
        .and_then(|s| s.as_f64())
        .ok_or_else(|| Error::RootNumber(format!("no sign recorded for {label}")))?;
    let w = if sign == 1.0 {
        1
    } else if sign == -1.0 {
        -1
    } else {
        return Err(Error::RootNumber(format!(
            "sign {sign} for {label} is not -1 or +1"
        )));
    };
    let record = RootNumberRecord {
        label: label.to_string(),
        group_id: None,
        irrep_label: None,
        w,
        provenance: "lmfdb".to_string(),
        field_hint: None,
    };
    store_record(&record, cache_dir)?;
    Ok(record)
}
