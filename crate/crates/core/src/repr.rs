//! Irreducible complex representations given as explicit matrices, their
//! characters, and catalog-level sanity checks.

use std::collections::BTreeSet;
use std::path::Path;

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{parse_json, read_to_string, Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::linalg::{eye, residual, CMat, C64};

/// Tolerance for structural checks on loaded matrices (homomorphism,
/// identity image).  Deliberately looser than machine epsilon so hand-edited
/// data at ~12 significant digits still loads, but far below anything that
/// could mask a wrong entry.
const MODEL_TOL: f64 = 1e-9;

/// Characters of an irrep are algebraic integers; class functions computed
/// from them are compared at this tolerance before rounding.
const CHARACTER_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Serialize, Deserialize)]
struct IrrepFile {
    label: String,
    group: String,
    degree: usize,
    /// `matrices[g][row][col] = [re, im]`.
    matrices: Vec<Vec<Vec<[f64; 2]>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ManifestFile {
    group: String,
    irreps: Vec<String>,
}

/// One irreducible representation: a label plus a matrix for every group
/// element, validated as a homomorphism with irreducible character.
#[derive(Debug, Clone)]
pub struct IrrepModel {
    label: String,
    group: String,
    degree: usize,
    matrices: Vec<CMat>,
}

impl IrrepModel {
    pub fn load(path: &Path, group: &FiniteGroup) -> Result<Self> {
        let text = read_to_string(path)?;
        let file: IrrepFile = parse_json(path, &text)?;
        let matrices = file
            .matrices
            .iter()
            .enumerate()
            .map(|(g, rows)| decode_matrix(&file.label, g, file.degree, rows))
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(file.label, file.group, matrices, group).map_err(|e| match e {
            Error::InvalidIrrep(msg) => Error::InvalidIrrep(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn from_parts(
        label: String,
        group_name: String,
        matrices: Vec<CMat>,
        group: &FiniteGroup,
    ) -> Result<Self> {
        if group_name != group.name() {
            return Err(Error::InvalidIrrep(format!(
                "irrep {label} declares group {group_name}, expected {}",
                group.name()
            )));
        }
        if matrices.len() != group.order() {
            return Err(Error::InvalidIrrep(format!(
                "irrep {label}: {} matrices for group of order {}",
                matrices.len(),
                group.order()
            )));
        }
        let degree = matrices[0].nrows();
        if degree == 0 {
            return Err(Error::InvalidIrrep(format!("irrep {label}: degree 0")));
        }
        for (g, m) in matrices.iter().enumerate() {
            if m.dim() != (degree, degree) {
                return Err(Error::InvalidIrrep(format!(
                    "irrep {label}: matrix {g} has shape {:?}, expected {degree}x{degree}",
                    m.dim()
                )));
            }
        }
        let id_res = residual(&matrices[group.identity()], &eye(degree));
        if id_res > MODEL_TOL {
            return Err(Error::InvalidIrrep(format!(
                "irrep {label}: identity element maps to a non-identity matrix (residual {id_res:.3e})"
            )));
        }
        for a in 0..group.order() {
            for b in 0..group.order() {
                let prod = matrices[a].dot(&matrices[b]);
                let hom_res = residual(&prod, &matrices[group.mul(a, b)]);
                if hom_res > MODEL_TOL {
                    return Err(Error::InvalidIrrep(format!(
                        "irrep {label}: multiplicativity fails at ({a}, {b}) with residual {hom_res:.3e}"
                    )));
                }
            }
        }
        let model = IrrepModel {
            label,
            group: group_name,
            degree,
            matrices,
        };
        let norm = character_inner(group, &model.character(), &model.character());
        if (norm.re - 1.0).abs() > CHARACTER_TOL || norm.im.abs() > CHARACTER_TOL {
            return Err(Error::InvalidIrrep(format!(
                "irrep {}: character self-pairing {norm} differs from 1, so the model is reducible or corrupt",
                model.label
            )));
        }
        Ok(model)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn group_name(&self) -> &str {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn matrix(&self, g: usize) -> &CMat {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[CMat] {
        &self.matrices
    }

    /// Trace of each matrix, indexed by element.
    pub fn character(&self) -> Vec<C64> {
        self.matrices
            .iter()
            .map(|m| (0..self.degree).map(|i| m[[i, i]]).sum())
            .collect()
    }

    /// `(1/|G|) sum_g chi(g^2)`, rounded to an integer in {-1, 0, +1}.
    /// A value of -1 certifies a quaternionic (symplectic) irrep.
    pub fn frobenius_schur(&self, group: &FiniteGroup) -> Result<i8> {
        let chi = self.character();
        let mut acc = C64::new(0.0, 0.0);
        for g in 0..group.order() {
            acc += chi[group.mul(g, g)];
        }
        acc /= group.order() as f64;
        let rounded = acc.re.round();
        if (acc.re - rounded).abs() > CHARACTER_TOL
            || acc.im.abs() > CHARACTER_TOL
            || rounded.abs() > 1.0
        {
            return Err(Error::InvalidIrrep(format!(
                "irrep {}: indicator {acc} is not an integer in [-1, 1]",
                self.label
            )));
        }
        Ok(rounded as i8)
    }

    /// Elements whose matrix is the identity, detected via the character.
    pub fn kernel_members(&self, group: &FiniteGroup) -> Vec<usize> {
        let chi = self.character();
        let d = self.degree as f64;
        (0..group.order())
            .filter(|&g| (chi[g] - C64::new(d, 0.0)).norm() < CHARACTER_TOL)
            .collect()
    }

    /// Whether every element of `sub` acts as the identity.
    pub fn kernel_contains(&self, group: &FiniteGroup, sub: &Subgroup) -> bool {
        let kernel: BTreeSet<usize> = self.kernel_members(group).into_iter().collect();
        sub.members().iter().all(|g| kernel.contains(g))
    }
}

fn decode_matrix(label: &str, g: usize, degree: usize, rows: &[Vec<[f64; 2]>]) -> Result<CMat> {
    if rows.len() != degree || rows.iter().any(|r| r.len() != degree) {
        return Err(Error::InvalidIrrep(format!(
            "irrep {label}: matrix {g} is not {degree}x{degree}"
        )));
    }
    Ok(Array2::from_shape_fn((degree, degree), |(i, j)| {
        Complex64::new(rows[i][j][0], rows[i][j][1])
    }))
}

/// `(1/|G|) sum_g a(g) conj(b(g))`.
pub fn character_inner(group: &FiniteGroup, a: &[C64], b: &[C64]) -> C64 {
    let sum: C64 = (0..group.order()).map(|g| a[g] * b[g].conj()).sum();
    sum / group.order() as f64
}

/// A complete list of the irreducible representations of one group.
#[derive(Debug, Clone)]
pub struct Catalog {
    irreps: Vec<IrrepModel>,
}

impl Catalog {
    /// Load every irrep named in `<dir>/manifest.json` and certify the list
    /// is complete and pairwise non-isomorphic.
    pub fn load_dir(dir: &Path, group: &FiniteGroup) -> Result<Self> {
        let manifest_path = dir.join("manifest.json");
        let text = read_to_string(&manifest_path)?;
        let manifest: ManifestFile = parse_json(&manifest_path, &text)?;
        if manifest.group != group.name() {
            return Err(Error::InvalidIrrep(format!(
                "{}: manifest is for group {}, expected {}",
                manifest_path.display(),
                manifest.group,
                group.name()
            )));
        }
        let irreps = manifest
            .irreps
            .iter()
            .map(|f| IrrepModel::load(&dir.join(f), group))
            .collect::<Result<Vec<_>>>()?;
        Self::from_irreps(irreps, group)
    }

    pub fn from_irreps(irreps: Vec<IrrepModel>, group: &FiniteGroup) -> Result<Self> {
        let mut labels = BTreeSet::new();
        for ir in &irreps {
            if !labels.insert(ir.label().to_string()) {
                return Err(Error::InvalidIrrep(format!(
                    "duplicate irrep label {}",
                    ir.label()
                )));
            }
            if ir.group_name() != group.name() {
                return Err(Error::InvalidIrrep(format!(
                    "irrep {} belongs to group {}, expected {}",
                    ir.label(),
                    ir.group_name(),
                    group.name()
                )));
            }
        }
        let sq: usize = irreps.iter().map(|ir| ir.degree() * ir.degree()).sum();
        if sq != group.order() {
            return Err(Error::InvalidIrrep(format!(
                "catalog for {}: squared degrees sum to {sq}, expected {}",
                group.name(),
                group.order()
            )));
        }
        let chars: Vec<Vec<C64>> = irreps.iter().map(|ir| ir.character()).collect();
        for i in 0..irreps.len() {
            for j in (i + 1)..irreps.len() {
                let ip = character_inner(group, &chars[i], &chars[j]);
                if ip.norm() > CHARACTER_TOL {
                    return Err(Error::InvalidIrrep(format!(
                        "irreps {} and {} have character pairing {ip}, expected 0",
                        irreps[i].label(),
                        irreps[j].label()
                    )));
                }
            }
        }
        Ok(Catalog { irreps })
    }

    pub fn len(&self) -> usize {
        self.irreps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreps.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &IrrepModel> {
        self.irreps.iter()
    }

    pub fn get(&self, label: &str) -> Option<&IrrepModel> {
        self.irreps.iter().find(|ir| ir.label() == label)
    }

    pub fn labels(&self) -> Vec<String> {
        self.irreps.iter().map(|ir| ir.label().to_string()).collect()
    }

    /// `sum_pi indicator(pi) * deg(pi)`.  For any finite group this equals
    /// the number of square roots of the identity, which callers verify
    /// against the table directly.
    pub fn indicator_degree_sum(&self, group: &FiniteGroup) -> Result<i64> {
        let mut acc = 0i64;
        for ir in &self.irreps {
            acc += ir.frobenius_schur(group)? as i64 * ir.degree() as i64;
        }
        Ok(acc)
    }
}

/// Projector onto the isotypic component of `character` (an irreducible
/// character of degree `degree`) inside the representation `rep`, where
/// `rep[g]` is the matrix of element `g`.
pub fn isotypic_projector(
    group: &FiniteGroup,
    character: &[C64],
    degree: usize,
    rep: &[CMat],
) -> CMat {
    let n = rep[0].nrows();
    let mut acc = CMat::zeros((n, n));
    for g in 0..group.order() {
        let coeff = character[g].conj();
        acc.zip_mut_with(&rep[g], |a, &b| *a += coeff * b);
    }
    let s = C64::new(degree as f64 / group.order() as f64, 0.0);
    acc.mapv_into(|z| z * s)
}

/// Projector `(1/|H|) sum_{h in H} rep[h]` onto the `sub`-fixed vectors of
/// `rep`.
pub fn fixed_projector(group: &FiniteGroup, sub: &Subgroup, rep: &[CMat]) -> CMat {
    let _ = group;
    let n = rep[0].nrows();
    let mut acc = CMat::zeros((n, n));
    for &h in sub.members() {
        acc.zip_mut_with(&rep[h], |a, &b| *a += b);
    }
    let s = C64::new(1.0 / sub.order() as f64, 0.0);
    acc.mapv_into(|z| z * s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c4() -> FiniteGroup {
        let table: Vec<Vec<usize>> = (0..4)
            .map(|a| (0..4).map(|b| (a + b) % 4).collect())
            .collect();
        FiniteGroup::from_parts(
            "c4".into(),
            0,
            (0..4).map(|k| format!("g{k}")).collect(),
            table,
            vec![1],
        )
        .unwrap()
    }

    fn scalar_irrep(group: &FiniteGroup, label: &str, values: &[Complex64]) -> IrrepModel {
        let mats = values
            .iter()
            .map(|&v| CMat::from_shape_fn((1, 1), |_| v))
            .collect();
        IrrepModel::from_parts(label.into(), group.name().into(), mats, group).unwrap()
    }

    fn c4_catalog(group: &FiniteGroup) -> Catalog {
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        let irreps = vec![
            scalar_irrep(group, "triv", &[one, one, one, one]),
            scalar_irrep(group, "i", &[one, i, -one, -i]),
            scalar_irrep(group, "sign", &[one, -one, one, -one]),
            scalar_irrep(group, "mi", &[one, -i, -one, i]),
        ];
        Catalog::from_irreps(irreps, group).unwrap()
    }

    #[test]
    fn rejects_non_homomorphism() {
        let g = c4();
        let one = Complex64::new(1.0, 0.0);
        let mats: Vec<CMat> = [one, one, -one, one]
            .iter()
            .map(|&v| CMat::from_shape_fn((1, 1), |_| v))
            .collect();
        let err = IrrepModel::from_parts("bad".into(), "c4".into(), mats, &g).unwrap_err();
        assert!(matches!(err, Error::InvalidIrrep(_)));
    }

    #[test]
    fn indicator_values_for_c4() {
        let g = c4();
        let cat = c4_catalog(&g);
        // real characters give +1, the two faithful ones pair up with 0
        assert_eq!(cat.get("triv").unwrap().frobenius_schur(&g).unwrap(), 1);
        assert_eq!(cat.get("sign").unwrap().frobenius_schur(&g).unwrap(), 1);
        assert_eq!(cat.get("i").unwrap().frobenius_schur(&g).unwrap(), 0);
        assert_eq!(cat.get("mi").unwrap().frobenius_schur(&g).unwrap(), 0);
        // 1 + 1 + 0 + 0 matches the two square roots of identity in C4
        assert_eq!(cat.indicator_degree_sum(&g).unwrap(), 2);
        assert_eq!(g.square_root_count_of_identity(), 2);
    }

    #[test]
    fn catalog_rejects_incomplete_list() {
        let g = c4();
        let one = Complex64::new(1.0, 0.0);
        let only_triv = vec![scalar_irrep(&g, "triv", &[one, one, one, one])];
        assert!(matches!(
            Catalog::from_irreps(only_triv, &g),
            Err(Error::InvalidIrrep(_))
        ));
    }

    #[test]
    fn catalog_rejects_duplicate_character() {
        let g = c4();
        let one = Complex64::new(1.0, 0.0);
        let irreps = vec![
            scalar_irrep(&g, "a", &[one, one, one, one]),
            scalar_irrep(&g, "b", &[one, one, one, one]),
            scalar_irrep(&g, "c", &[one, -one, one, -one]),
            scalar_irrep(&g, "d", &[one, -one, one, -one]),
        ];
        assert!(matches!(
            Catalog::from_irreps(irreps, &g),
            Err(Error::InvalidIrrep(_))
        ));
    }

    #[test]
    fn kernel_detection() {
        let g = c4();
        let cat = c4_catalog(&g);
        assert_eq!(cat.get("sign").unwrap().kernel_members(&g), vec![0, 2]);
        assert_eq!(cat.get("i").unwrap().kernel_members(&g), vec![0]);
        let half = Subgroup::new(&g, &[0, 2]).unwrap();
        assert!(cat.get("sign").unwrap().kernel_contains(&g, &half));
        assert!(!cat.get("i").unwrap().kernel_contains(&g, &half));
    }

    #[test]
    fn isotypic_projectors_resolve_regular_representation() {
        let g = c4();
        let cat = c4_catalog(&g);
        // left regular representation: rho(a)[b, c] = 1 iff b = a * c
        let rep: Vec<CMat> = (0..4)
            .map(|a| {
                CMat::from_shape_fn((4, 4), |(r, c)| {
                    if r == g.mul(a, c) {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
            })
            .collect();
        let mut total = CMat::zeros((4, 4));
        for ir in cat.iter() {
            let p = isotypic_projector(&g, &ir.character(), ir.degree(), &rep);
            // idempotent of rank = degree (each irrep appears deg times)
            assert!(residual(&p.dot(&p), &p) < 1e-12);
            assert_eq!(crate::linalg::rank(&p, 1e-8), 1);
            total += &p;
        }
        assert!(residual(&total, &eye(4)) < 1e-12);
    }

    #[test]
    fn fixed_projector_of_regular_rep() {
        let g = c4();
        let rep: Vec<CMat> = (0..4)
            .map(|a| {
                CMat::from_shape_fn((4, 4), |(r, c)| {
                    if r == g.mul(a, c) {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
            })
            .collect();
        let half = Subgroup::new(&g, &[0, 2]).unwrap();
        let p = fixed_projector(&g, &half, &rep);
        assert!(residual(&p.dot(&p), &p) < 1e-12);
        assert_eq!(crate::linalg::rank(&p, 1e-8), 2);
    }
}
