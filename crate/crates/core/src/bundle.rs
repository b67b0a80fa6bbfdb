//! Self-contained JSON bundles of a built functor instance.
//!
//! A bundle stores the inputs (group table, irrep matrices, weights) next
//! to everything derived from them (forms, stars, the subgroup lattice and
//! all fixed spaces), so a verify run on a bundle needs no other files.
//! Loading only parses; [`Bundle::reconstruct`] re-validates the inputs and
//! re-verifies every derived invariant, so corrupted derived data is caught
//! as a verification failure rather than silently trusted.

use std::collections::BTreeMap;
use std::path::Path;

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{parse_json, read_to_string, Error, Result};
use crate::functor::{FunctorInstance, SpaceBlock, StructuredSpace};
use crate::group::{FiniteGroup, Subgroup};
use crate::linalg::CMat;
use crate::repr::{Catalog, IrrepModel};
use crate::rootdata::{ProvenanceEntry, WeightTable};
use crate::symplectic::SymplecticIrrep;

pub const BUNDLE_SCHEMA_VERSION: u32 = 1;

/// `[re, im]` entries, row by row.
type MatRows = Vec<Vec<[f64; 2]>>;

fn encode_mat(m: &CMat) -> MatRows {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[[i, j]].re, m[[i, j]].im]).collect())
        .collect()
}

fn decode_mat(rows: &MatRows, what: &str, nrows: usize, ncols: usize) -> Result<CMat> {
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::InvalidBundle(format!(
            "{what}: expected a {nrows}x{ncols} matrix"
        )));
    }
    Ok(Array2::from_shape_fn((nrows, ncols), |(i, j)| {
        Complex64::new(rows[i][j][0], rows[i][j][1])
    }))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct GroupData {
    name: String,
    identity: usize,
    element_names: Vec<String>,
    table: Vec<Vec<usize>>,
    generators: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct IrrepData {
    label: String,
    degree: usize,
    matrices: Vec<MatRows>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SymplecticData {
    label: String,
    form: MatRows,
    star: MatRows,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct BlockData {
    label: String,
    dim: usize,
    col_offset: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SpaceData {
    dim: usize,
    basis: MatRows,
    form: MatRows,
    star: MatRows,
    blocks: Vec<BlockData>,
}

/// Serializable image of a [`FunctorInstance`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Bundle {
    pub schema_version: u32,
    tolerance: f64,
    group: GroupData,
    catalog: Vec<IrrepData>,
    weights: BTreeMap<String, i8>,
    provenance: BTreeMap<String, ProvenanceEntry>,
    symplectic: Vec<SymplecticData>,
    selected: Vec<String>,
    lattice: Vec<Vec<usize>>,
    spaces: Vec<SpaceData>,
}

impl Bundle {
    pub fn from_instance(f: &FunctorInstance) -> Self {
        let group = f.group();
        Bundle {
            schema_version: BUNDLE_SCHEMA_VERSION,
            tolerance: f.tolerance(),
            group: GroupData {
                name: group.name().to_string(),
                identity: group.identity(),
                element_names: group.element_names().to_vec(),
                table: group.table().to_vec(),
                generators: group.generators().to_vec(),
            },
            catalog: f
                .catalog()
                .iter()
                .map(|ir| IrrepData {
                    label: ir.label().to_string(),
                    degree: ir.degree(),
                    matrices: ir.matrices().iter().map(encode_mat).collect(),
                })
                .collect(),
            weights: f.weights().entries().clone(),
            provenance: f
                .weights()
                .labels()
                .filter_map(|l| {
                    f.weights()
                        .provenance(l)
                        .map(|p| (l.to_string(), p.clone()))
                })
                .collect(),
            symplectic: f
                .symplectic_irreps()
                .iter()
                .map(|sy| SymplecticData {
                    label: sy.label().to_string(),
                    form: encode_mat(sy.form()),
                    star: encode_mat(sy.star()),
                })
                .collect(),
            selected: f.selected_labels().to_vec(),
            lattice: f.lattice().iter().map(|s| s.members().to_vec()).collect(),
            spaces: f
                .lattice()
                .iter()
                .enumerate()
                .map(|(i, _)| {
                    let sp = f.space(i);
                    SpaceData {
                        dim: sp.dim(),
                        basis: encode_mat(sp.basis()),
                        form: encode_mat(sp.form()),
                        star: encode_mat(sp.star()),
                        blocks: sp
                            .blocks()
                            .iter()
                            .map(|b| BlockData {
                                label: b.label.clone(),
                                dim: b.dim,
                                col_offset: b.col_offset,
                            })
                            .collect(),
                    }
                })
                .collect(),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string(self).expect("bundle serialization cannot fail");
        std::fs::write(path, text).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        })
    }

    /// Parse a bundle file.  This does not validate the mathematics; use
    /// [`Bundle::reconstruct`] for that.
    pub fn load(path: &Path) -> Result<Self> {
        let text = read_to_string(path)?;
        let bundle: Bundle = parse_json(path, &text)?;
        if bundle.schema_version != BUNDLE_SCHEMA_VERSION {
            return Err(Error::InvalidBundle(format!(
                "{}: schema version {} is not supported (expected {BUNDLE_SCHEMA_VERSION})",
                path.display(),
                bundle.schema_version
            )));
        }
        Ok(bundle)
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn group_name(&self) -> &str {
        &self.group.name
    }

    /// Rebuild a verified [`FunctorInstance`].  Input data (group, irreps,
    /// weights) is validated as if freshly loaded; derived data (forms,
    /// stars, spaces, lattice) is re-verified against the inputs, so any
    /// corruption surfaces as an error naming the violated invariant.
    pub fn reconstruct(&self, tolerance: Option<f64>) -> Result<FunctorInstance> {
        let tol = tolerance.unwrap_or(self.tolerance);
        let group = FiniteGroup::from_parts(
            self.group.name.clone(),
            self.group.identity,
            self.group.element_names.clone(),
            self.group.table.clone(),
            self.group.generators.clone(),
        )?;
        let mut irreps = Vec::new();
        for ir in &self.catalog {
            if ir.matrices.len() != group.order() {
                return Err(Error::InvalidBundle(format!(
                    "irrep {}: {} matrices for group of order {}",
                    ir.label,
                    ir.matrices.len(),
                    group.order()
                )));
            }
            let mats = ir
                .matrices
                .iter()
                .enumerate()
                .map(|(g, rows)| {
                    decode_mat(rows, &format!("irrep {} element {g}", ir.label), ir.degree, ir.degree)
                })
                .collect::<Result<Vec<_>>>()?;
            irreps.push(IrrepModel::from_parts(
                ir.label.clone(),
                group.name().to_string(),
                mats,
                &group,
            )?);
        }
        let catalog = Catalog::from_irreps(irreps, &group)?;
        let weights = WeightTable::from_map(
            self.weights.iter().map(|(k, &v)| (k.clone(), v as i64)).collect(),
            self.provenance.clone(),
            &group,
            &catalog,
        )?;
        let symplectic = self
            .symplectic
            .iter()
            .map(|sy| {
                let irrep = catalog.get(&sy.label).ok_or_else(|| {
                    Error::InvalidBundle(format!(
                        "form/star stored for unknown irrep {}",
                        sy.label
                    ))
                })?;
                let d = irrep.degree();
                let form = decode_mat(&sy.form, &format!("form of {}", sy.label), d, d)?;
                let star = decode_mat(&sy.star, &format!("star of {}", sy.label), d, d)?;
                SymplecticIrrep::from_stored(&group, irrep, form, star, tol)
            })
            .collect::<Result<Vec<_>>>()?;
        let lattice = self
            .lattice
            .iter()
            .map(|members| Subgroup::new(&group, members))
            .collect::<Result<Vec<_>>>()?;
        let ambient_dim: usize = self
            .selected
            .iter()
            .map(|l| catalog.get(l).map(|ir| ir.degree()).unwrap_or(0))
            .sum();
        let spaces = self
            .spaces
            .iter()
            .map(|sp| {
                Ok(StructuredSpace {
                    dim: sp.dim,
                    basis: decode_mat(&sp.basis, "space basis", ambient_dim, sp.dim)?,
                    form: decode_mat(&sp.form, "space form", sp.dim, sp.dim)?,
                    star: decode_mat(&sp.star, "space star", sp.dim, sp.dim)?,
                    blocks: sp
                        .blocks
                        .iter()
                        .map(|b| SpaceBlock {
                            label: b.label.clone(),
                            dim: b.dim,
                            col_offset: b.col_offset,
                        })
                        .collect(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        FunctorInstance::from_stored_parts(
            group,
            catalog,
            weights,
            symplectic,
            self.selected.clone(),
            lattice,
            spaces,
            tol,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functor::build_functor;
    use crate::linalg::residual;
    use crate::testsupport::{q8, q8_catalog};
    use crate::DEFAULT_TOLERANCE;

    fn q8_instance() -> FunctorInstance {
        let g = q8();
        let cat = q8_catalog(&g);
        let weights = WeightTable::from_map(
            BTreeMap::from([("q8.2a".to_string(), -1i64)]),
            BTreeMap::new(),
            &g,
            &cat,
        )
        .unwrap();
        build_functor(g, cat, weights, DEFAULT_TOLERANCE).unwrap()
    }

    #[test]
    fn roundtrip_preserves_everything() {
        let f = q8_instance();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("q8.bundle.json");
        Bundle::from_instance(&f).save(&path).unwrap();
        let loaded = Bundle::load(&path).unwrap();
        let g = loaded.reconstruct(None).unwrap();
        assert_eq!(g.lattice().len(), f.lattice().len());
        for i in 0..f.lattice().len() {
            assert_eq!(g.space(i).dim(), f.space(i).dim());
            assert!(residual(g.space(i).basis(), f.space(i).basis()) < 1e-15);
            assert!(residual(g.space(i).star(), f.space(i).star()) < 1e-15);
        }
        assert_eq!(g.selected_labels(), f.selected_labels());
    }

    #[test]
    fn corrupted_star_is_a_verification_error() {
        let f = q8_instance();
        let mut b = Bundle::from_instance(&f);
        // scale one stored star entry so *^2 = -1 fails
        b.symplectic[0].star[0][1][0] *= 1.5;
        b.symplectic[0].star[0][1][1] *= 1.5;
        let err = b.reconstruct(None).unwrap_err();
        assert!(matches!(err, Error::Verification(_)));
        assert!(!err.is_input_error());
    }

    #[test]
    fn corrupted_space_star_is_a_verification_error() {
        let f = q8_instance();
        let mut b = Bundle::from_instance(&f);
        // find the 2-dimensional space and corrupt its restricted star
        let idx = b.spaces.iter().position(|s| s.dim == 2).unwrap();
        b.spaces[idx].star[0][0][0] += 0.25;
        let err = b.reconstruct(None).unwrap_err();
        assert!(matches!(err, Error::Verification(_)));
    }

    #[test]
    fn truncated_lattice_is_an_input_error() {
        let f = q8_instance();
        let mut b = Bundle::from_instance(&f);
        b.lattice.pop();
        b.spaces.pop();
        let err = b.reconstruct(None).unwrap_err();
        assert!(matches!(err, Error::InvalidBundle(_)));
        assert!(err.is_input_error());
    }

    #[test]
    fn unsupported_schema_version_is_rejected() {
        let f = q8_instance();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.bundle.json");
        let mut b = Bundle::from_instance(&f);
        b.schema_version = 99;
        b.save(&path).unwrap();
        assert!(matches!(
            Bundle::load(&path),
            Err(Error::InvalidBundle(_))
        ));
    }

    #[test]
    fn missing_file_is_an_io_error() {
        let err = Bundle::load(Path::new("/nonexistent/bundle.json")).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
        assert!(err.is_input_error());
    }
}
