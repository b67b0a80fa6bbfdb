//! The functor from the subgroup lattice (fields of a fixed finite Galois
//! model) to symplectic vector spaces with star operators.
//!
//! Fix a finite group `G` with a complete irrep catalog и a weight table.
//! The ambient space is the orthogonal direct sum of the quaternionic
//! (indicator `-1`) irreps whose weight is `-1`, carrying the block-diagonal
//! `G`-action, alternating form and star.  Objects of the source category
//! are the subgroups `H` of `G` — standing for the fixed fields of a Galois
//! correspondence — and the functor sends `H` to the `H`-fixed subspace with
//! the restricted form and star.  A morphism from the field of `H` to the
//! field of `H'` is a coset `sigma H` with `sigma^{-1} H' sigma` contained
//! in `H`; the functor acts on it by `rho(sigma)`.
//!
//! Everything the construction promises (restricted forms nondegenerate,
//! fixed spaces star-stable, morphisms landing in the right subspace) is
//! re-checked numerically while building; a failure aborts with a
//! verification error rather than producing a silently wrong instance.

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup, SUBGROUP_ENUMERATION_BOUND};
use crate::linalg::{
    conj, dagger, eye, max_abs, min_max_singular_ratio, nullspace, orthonormalize_pivoted,
    rank, residual, scale, solve, transpose, CMat, C64,
};
use crate::repr::{fixed_projector, Catalog};
use crate::rootdata::WeightTable;
use crate::symplectic::SymplecticIrrep;
use crate::{NONDEGENERACY_RATIO, RANK_REL_TOL};

/// Position and size of one irrep block inside the ambient space.
#[derive(Debug, Clone)]
pub struct AmbientBlock {
    pub label: String,
    pub offset: usize,
    pub degree: usize,
}

/// The direct sum of the selected quaternionic irreps with its
/// block-diagonal group action, alternating form and star operator.
#[derive(Debug, Clone)]
pub struct AmbientSpace {
    pub(crate) dim: usize,
    pub(crate) rep: Vec<CMat>,
    pub(crate) form: CMat,
    pub(crate) star: CMat,
    pub(crate) blocks: Vec<AmbientBlock>,
}

impl AmbientSpace {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rep(&self, g: usize) -> &CMat {
        &self.rep[g]
    }

    pub fn form(&self) -> &CMat {
        &self.form
    }

    pub fn star(&self) -> &CMat {
        &self.star
    }

    pub fn blocks(&self) -> &[AmbientBlock] {
        &self.blocks
    }
}

/// Contribution of one selected irrep block to a fixed subspace.
#[derive(Debug, Clone)]
pub struct SpaceBlock {
    pub label: String,
    /// Dimension of the `H`-fixed part of this block.
    pub dim: usize,
    /// First column of this block's vectors in the space basis.
    pub col_offset: usize,
}

/// The value of the functor at one subgroup: the fixed subspace with its
/// restricted symplectic form and star operator, in an orthonormal basis.
#[derive(Debug, Clone)]
pub struct StructuredSpace {
    pub(crate) dim: usize,
    /// `ambient_dim x dim`, orthonormal columns spanning the fixed subspace,
    /// each supported in a single irrep block.
    pub(crate) basis: CMat,
    /// `basis^T S basis` — the restricted alternating form.
    pub(crate) form: CMat,
    /// Matrix of the restricted star: `*v = star * conj(v)` in basis
    /// coordinates.
    pub(crate) star: CMat,
    pub(crate) blocks: Vec<SpaceBlock>,
}

impl StructuredSpace {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    pub fn form(&self) -> &CMat {
        &self.form
    }

    pub fn star(&self) -> &CMat {
        &self.star
    }

    pub fn blocks(&self) -> &[SpaceBlock] {
        &self.blocks
    }

    /// Dimension split by irrep block, as `(label, dim)` pairs.
    pub fn dimension_breakdown(&self) -> Vec<(String, usize)> {
        self.blocks
            .iter()
            .map(|b| (b.label.clone(), b.dim))
            .collect()
    }
}

/// A morphism of the source category: the embedding of the field of
/// `lattice[src]` into the field of `lattice[tgt]` given by the coset of
/// `rep`.  `rep` is always the canonical (smallest) element of its coset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldEmbedding {
    pub src: usize,
    pub tgt: usize,
    pub rep: usize,
}

/// One object of the source category together with its image space.
#[derive(Debug, Clone, Copy)]
pub struct FieldObject<'a> {
    pub index: usize,
    pub subgroup: &'a Subgroup,
    pub space: &'a StructuredSpace,
}

/// Per-irrep summary row for reporting.
#[derive(Debug, Clone)]
pub struct SymplecticSummary {
    pub label: String,
    pub degree: usize,
    pub weight: Option<i8>,
    pub selected: bool,
}

/// A fully constructed functor instance: group, catalog, weights, the
/// ambient sum of selected quaternionic irreps, and the value of the
/// functor at every subgroup.
#[derive(Debug, Clone)]
pub struct FunctorInstance {
    pub(crate) group: FiniteGroup,
    pub(crate) catalog: Catalog,
    pub(crate) weights: WeightTable,
    /// Form and star for every indicator `-1` irrep, selected or not.
    pub(crate) symplectic: Vec<SymplecticIrrep>,
    /// Labels of the selected irreps (indicator `-1` and weight `-1`), in
    /// catalog order.
    pub(crate) selected: Vec<String>,
    pub(crate) ambient: AmbientSpace,
    pub(crate) lattice: Vec<Subgroup>,
    pub(crate) spaces: Vec<StructuredSpace>,
    pub(crate) tolerance: f64,
}

/// Build the functor for one group from its catalog and weight table.
///
/// Every indicator `-1` irrep must carry a weight; the ones with weight `-1`
/// are selected into the ambient space.  The subgroup lattice is enumerated
/// completely and the fixed space of every subgroup is constructed and
/// checked.
pub fn build_functor(
    group: FiniteGroup,
    catalog: Catalog,
    weights: WeightTable,
    tolerance: f64,
) -> Result<FunctorInstance> {
    let mut symplectic = Vec::new();
    let mut selected = Vec::new();
    for irrep in catalog.iter() {
        if irrep.frobenius_schur(&group)? != -1 {
            continue;
        }
        let weight = weights.get(irrep.label()).ok_or_else(|| {
            Error::InvalidWeights(format!(
                "no weight recorded for quaternionic irrep {}; every indicator -1 irrep needs one",
                irrep.label()
            ))
        })?;
        symplectic.push(SymplecticIrrep::build(&group, irrep, tolerance)?);
        if weight == -1 {
            selected.push(irrep.label().to_string());
        }
    }
    let ambient = build_ambient(&group, &catalog, &symplectic, &selected);
    let lattice = group.all_subgroups(SUBGROUP_ENUMERATION_BOUND)?;
    let spaces = lattice
        .iter()
        .map(|sub| build_space(&group, &catalog, &ambient, sub, tolerance))
        .collect::<Result<Vec<_>>>()?;
    Ok(FunctorInstance {
        group,
        catalog,
        weights,
        symplectic,
        selected,
        ambient,
        lattice,
        spaces,
        tolerance,
    })
}

fn build_ambient(
    group: &FiniteGroup,
    catalog: &Catalog,
    symplectic: &[SymplecticIrrep],
    selected: &[String],
) -> AmbientSpace {
    let mut blocks = Vec::new();
    let mut dim = 0;
    for label in selected {
        let degree = catalog.get(label).expect("selected label is in catalog").degree();
        blocks.push(AmbientBlock {
            label: label.clone(),
            offset: dim,
            degree,
        });
        dim += degree;
    }
    let mut form = CMat::zeros((dim, dim));
    let mut star = CMat::zeros((dim, dim));
    for block in &blocks {
        let sy = symplectic
            .iter()
            .find(|s| s.label() == block.label)
            .expect("selected irrep has symplectic data");
        for i in 0..block.degree {
            for j in 0..block.degree {
                form[[block.offset + i, block.offset + j]] = sy.form()[[i, j]];
                star[[block.offset + i, block.offset + j]] = sy.star()[[i, j]];
            }
        }
    }
    let rep = (0..group.order())
        .map(|g| {
            let mut m = CMat::zeros((dim, dim));
            for block in &blocks {
                let rho = catalog
                    .get(&block.label)
                    .expect("selected label is in catalog")
                    .matrix(g);
                for i in 0..block.degree {
                    for j in 0..block.degree {
                        m[[block.offset + i, block.offset + j]] = rho[[i, j]];
                    }
                }
            }
            m
        })
        .collect();
    AmbientSpace {
        dim,
        rep,
        form,
        star,
        blocks,
    }
}

fn build_space(
    group: &FiniteGroup,
    catalog: &Catalog,
    ambient: &AmbientSpace,
    sub: &Subgroup,
    tol: f64,
) -> Result<StructuredSpace> {
    // Assemble the fixed-space basis block by block so every basis vector
    // lives in a single irrep block and the restricted form and star stay
    // block-diagonal.
    let mut space_blocks = Vec::new();
    let mut columns: Vec<(usize, CMat)> = Vec::new(); // (ambient row offset, block basis)
    let mut dim = 0;
    for block in &ambient.blocks {
        let irrep = catalog.get(&block.label).expect("selected label is in catalog");
        let proj = fixed_projector(group, sub, irrep.matrices());
        let block_rank = rank(&proj, RANK_REL_TOL);
        // Independent count: the multiplicity of the trivial character of
        // the subgroup in the restricted irrep.
        let chi = irrep.character();
        let avg: C64 = sub.members().iter().map(|&h| chi[h]).sum::<C64>()
            / C64::new(sub.order() as f64, 0.0);
        let expected = avg.re.round();
        if (avg.re - expected).abs() > 1e-6 || avg.im.abs() > 1e-6 || expected < 0.0 {
            return Err(Error::Verification(format!(
                "irrep {}: trivial multiplicity over a subgroup is not a nonnegative integer ({avg})",
                block.label
            )));
        }
        if expected as usize != block_rank {
            return Err(Error::Verification(format!(
                "irrep {}: fixed-space rank {block_rank} disagrees with character count {expected}",
                block.label
            )));
        }
        let basis = orthonormalize_pivoted(&proj, block_rank);
        space_blocks.push(SpaceBlock {
            label: block.label.clone(),
            dim: block_rank,
            col_offset: dim,
        });
        columns.push((block.offset, basis));
        dim += block_rank;
    }
    let mut basis = CMat::zeros((ambient.dim, dim));
    let mut col = 0;
    for (row_offset, block_basis) in &columns {
        for j in 0..block_basis.ncols() {
            for i in 0..block_basis.nrows() {
                basis[[row_offset + i, col]] = block_basis[[i, j]];
            }
            col += 1;
        }
    }
    // Fixed property: rho(h) B = B for every h in the subgroup.
    for &h in sub.members() {
        let moved = ambient.rep[h].dot(&basis);
        let res = residual(&moved, &basis);
        if res > tol {
            return Err(Error::Verification(format!(
                "fixed-space basis moves under element {h} (residual {res:.3e})"
            )));
        }
    }
    let form = transpose(&basis).dot(&ambient.form).dot(&basis);
    let star = dagger(&basis).dot(&ambient.star).dot(&conj(&basis));
    if dim > 0 {
        // The fixed space must be star-stable; equivalently the ambient star
        // of a basis vector stays in the span.
        let stab_res = residual(&basis.dot(&star), &ambient.star.dot(&conj(&basis)));
        if stab_res > tol {
            return Err(Error::Verification(format!(
                "fixed space is not star-stable (residual {stab_res:.3e})"
            )));
        }
        let sq = star.dot(&conj(&star));
        let sq_res = residual(&sq, &scale(&eye(dim), C64::new(-1.0, 0.0)));
        if sq_res > tol {
            return Err(Error::Verification(format!(
                "restricted star does not square to -1 (residual {sq_res:.3e})"
            )));
        }
        let ratio = min_max_singular_ratio(&form);
        if ratio < NONDEGENERACY_RATIO {
            return Err(Error::Verification(format!(
                "restricted form is degenerate (singular-value ratio {ratio:.3e})"
            )));
        }
    }
    Ok(StructuredSpace {
        dim,
        basis,
        form,
        star,
        blocks: space_blocks,
    })
}

/// Re-verify a stored space against its subgroup: orthonormal basis of the
/// right rank, fixed under the subgroup, with matching restricted form and a
/// consistent, stable star.
fn verify_space_against(
    catalog: &Catalog,
    ambient: &AmbientSpace,
    sub: &Subgroup,
    space: &StructuredSpace,
    tol: f64,
) -> Result<()> {
    let dim = space.dim;
    if space.basis.dim() != (ambient.dim, dim)
        || space.form.dim() != (dim, dim)
        || space.star.dim() != (dim, dim)
    {
        return Err(Error::InvalidBundle(format!(
            "stored space has inconsistent shapes (dim {dim}, basis {:?})",
            space.basis.dim()
        )));
    }
    let block_sum: usize = space.blocks.iter().map(|b| b.dim).sum();
    if block_sum != dim {
        return Err(Error::InvalidBundle(format!(
            "stored space blocks sum to {block_sum}, expected {dim}"
        )));
    }
    // Expected dimension from characters, independent of the stored basis.
    let mut expected = 0usize;
    for block in &ambient.blocks {
        let chi = catalog
            .get(&block.label)
            .ok_or_else(|| {
                Error::InvalidBundle(format!("stored block label {} is not selected", block.label))
            })?
            .character();
        let avg: C64 = sub.members().iter().map(|&h| chi[h]).sum::<C64>()
            / C64::new(sub.order() as f64, 0.0);
        expected += avg.re.round() as usize;
    }
    if expected != dim {
        return Err(Error::Verification(format!(
            "stored space has dimension {dim}, character count gives {expected}"
        )));
    }
    if dim == 0 {
        return Ok(());
    }
    let ortho = residual(&dagger(&space.basis).dot(&space.basis), &eye(dim));
    if ortho > tol {
        return Err(Error::Verification(format!(
            "stored basis is not orthonormal (residual {ortho:.3e})"
        )));
    }
    for &h in sub.members() {
        let res = residual(&ambient.rep[h].dot(&space.basis), &space.basis);
        if res > tol {
            return Err(Error::Verification(format!(
                "stored basis is not fixed by element {h} (residual {res:.3e})"
            )));
        }
    }
    let form = transpose(&space.basis).dot(&ambient.form).dot(&space.basis);
    let form_res = residual(&form, &space.form);
    if form_res > tol {
        return Err(Error::Verification(format!(
            "stored form disagrees with the restricted ambient form (residual {form_res:.3e})"
        )));
    }
    let stab_res = residual(
        &space.basis.dot(&space.star),
        &ambient.star.dot(&conj(&space.basis)),
    );
    if stab_res > tol {
        return Err(Error::Verification(format!(
            "stored star disagrees with the ambient star on the fixed space (residual {stab_res:.3e})"
        )));
    }
    let sq = space.star.dot(&conj(&space.star));
    let sq_res = residual(&sq, &scale(&eye(dim), C64::new(-1.0, 0.0)));
    if sq_res > tol {
        return Err(Error::Verification(format!(
            "stored star does not square to -1 (residual {sq_res:.3e})"
        )));
    }
    let ratio = min_max_singular_ratio(&space.form);
    if ratio < NONDEGENERACY_RATIO {
        return Err(Error::Verification(format!(
            "stored form is degenerate (singular-value ratio {ratio:.3e})"
        )));
    }
    Ok(())
}

impl FunctorInstance {
    /// Reassemble an instance from stored parts, re-verifying every derived
    /// invariant: symplectic data already checked by the caller, lattice
    /// completeness, and all space axioms.  Structural mismatches are input
    /// errors; failed mathematical invariants are verification errors.
    #[allow(clippy::too_many_arguments)]
    pub fn from_stored_parts(
        group: FiniteGroup,
        catalog: Catalog,
        weights: WeightTable,
        symplectic: Vec<SymplecticIrrep>,
        selected: Vec<String>,
        lattice: Vec<Subgroup>,
        spaces: Vec<StructuredSpace>,
        tolerance: f64,
    ) -> Result<Self> {
        let mut expected_selected = Vec::new();
        for irrep in catalog.iter() {
            if irrep.frobenius_schur(&group)? != -1 {
                continue;
            }
            let weight = weights.get(irrep.label()).ok_or_else(|| {
                Error::InvalidWeights(format!(
                    "no weight recorded for quaternionic irrep {}",
                    irrep.label()
                ))
            })?;
            if !symplectic.iter().any(|s| s.label() == irrep.label()) {
                return Err(Error::InvalidBundle(format!(
                    "no stored form/star for quaternionic irrep {}",
                    irrep.label()
                )));
            }
            if weight == -1 {
                expected_selected.push(irrep.label().to_string());
            }
        }
        if selected != expected_selected {
            return Err(Error::InvalidBundle(format!(
                "stored selection {selected:?} disagrees with weights ({expected_selected:?})"
            )));
        }
        let ambient = build_ambient(&group, &catalog, &symplectic, &selected);
        let fresh_lattice = group.all_subgroups(SUBGROUP_ENUMERATION_BOUND)?;
        if lattice.len() != fresh_lattice.len()
            || lattice.iter().zip(fresh_lattice.iter()).any(|(a, b)| a != b)
        {
            return Err(Error::InvalidBundle(
                "stored subgroup lattice does not match the group's lattice".into(),
            ));
        }
        if spaces.len() != lattice.len() {
            return Err(Error::InvalidBundle(format!(
                "{} stored spaces for {} subgroups",
                spaces.len(),
                lattice.len()
            )));
        }
        for (sub, space) in lattice.iter().zip(spaces.iter()) {
            verify_space_against(&catalog, &ambient, sub, space, tolerance)?;
        }
        Ok(FunctorInstance {
            group,
            catalog,
            weights,
            symplectic,
            selected,
            ambient,
            lattice,
            spaces,
            tolerance,
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn catalog(&self) -> &Catalog {
        &self.catalog
    }

    pub fn weights(&self) -> &WeightTable {
        &self.weights
    }

    pub fn ambient(&self) -> &AmbientSpace {
        &self.ambient
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn selected_labels(&self) -> &[String] {
        &self.selected
    }

    pub fn symplectic_irreps(&self) -> &[SymplecticIrrep] {
        &self.symplectic
    }

    pub fn lattice(&self) -> &[Subgroup] {
        &self.lattice
    }

    pub fn space(&self, index: usize) -> &StructuredSpace {
        &self.spaces[index]
    }

    pub fn subgroup(&self, index: usize) -> &Subgroup {
        &self.lattice[index]
    }

    pub fn object(&self, index: usize) -> FieldObject<'_> {
        FieldObject {
            index,
            subgroup: &self.lattice[index],
            space: &self.spaces[index],
        }
    }

    pub fn objects(&self) -> impl Iterator<Item = FieldObject<'_>> {
        (0..self.lattice.len()).map(|i| self.object(i))
    }

    pub fn subgroup_index(&self, sub: &Subgroup) -> Option<usize> {
        self.lattice.iter().position(|s| s == sub)
    }

    /// Index of the object for the whole group (the base field).
    pub fn base_index(&self) -> usize {
        self.subgroup_index(&Subgroup::full(&self.group))
            .expect("the full group is in the lattice")
    }

    /// Index of the object for the trivial subgroup (the top field).
    pub fn top_index(&self) -> usize {
        self.subgroup_index(&Subgroup::trivial(&self.group))
            .expect("the trivial subgroup is in the lattice")
    }

    /// Degree of the field of `index` over the base field: the index of its
    /// subgroup in the whole group.
    pub fn field_degree(&self, index: usize) -> usize {
        self.lattice[index].index_in_group(&self.group)
    }

    pub fn summaries(&self) -> Vec<SymplecticSummary> {
        self.symplectic
            .iter()
            .map(|sy| SymplecticSummary {
                label: sy.label().to_string(),
                degree: sy.degree(),
                weight: self.weights.get(sy.label()),
                selected: self.selected.iter().any(|l| l == sy.label()),
            })
            .collect()
    }

    /// The embedding of fields given by `sigma`, validated and with `sigma`
    /// replaced by the canonical representative of its coset.
    pub fn embedding(&self, src: usize, tgt: usize, sigma: usize) -> Result<FieldEmbedding> {
        let h_src = &self.lattice[src];
        let h_tgt = &self.lattice[tgt];
        if sigma >= self.group.order() {
            return Err(Error::InvalidSubgroup(format!(
                "element index {sigma} out of range for group {}",
                self.group.name()
            )));
        }
        let sigma_inv = self.group.inverse(sigma);
        let conjugated = h_tgt.conjugate_by(&self.group, sigma_inv);
        if !conjugated.is_subgroup_of(h_src) {
            return Err(Error::InvalidSubgroup(format!(
                "element {} does not embed field of subgroup {:?} into field of subgroup {:?}",
                self.group.element_name(sigma),
                h_src.members(),
                h_tgt.members()
            )));
        }
        Ok(FieldEmbedding {
            src,
            tgt,
            rep: h_src.canonical_coset_rep(&self.group, sigma),
        })
    }

    pub fn identity_embedding(&self, index: usize) -> FieldEmbedding {
        self.embedding(index, index, self.group.identity())
            .expect("the identity always embeds a field into itself")
    }

    /// All embeddings from `src`'s field to `tgt`'s field, one per coset.
    pub fn embeddings_between(&self, src: usize, tgt: usize) -> Vec<FieldEmbedding> {
        let h_src = &self.lattice[src];
        h_src
            .left_coset_reps(&self.group)
            .into_iter()
            .filter_map(|rep| self.embedding(src, tgt, rep).ok())
            .collect()
    }

    /// Every morphism of the source category.
    pub fn all_embeddings(&self) -> Vec<FieldEmbedding> {
        let n = self.lattice.len();
        let mut out = Vec::new();
        for src in 0..n {
            for tgt in 0..n {
                out.extend(self.embeddings_between(src, tgt));
            }
        }
        out
    }

    /// Compose two embeddings (`second` after `first`).
    pub fn compose(&self, second: &FieldEmbedding, first: &FieldEmbedding) -> Result<FieldEmbedding> {
        if first.tgt != second.src {
            return Err(Error::InvalidSubgroup(
                "embeddings do not compose: target of the first is not the source of the second"
                    .into(),
            ));
        }
        self.embedding(
            first.src,
            second.tgt,
            self.group.mul(second.rep, first.rep),
        )
    }

    /// Matrix of the functor on an embedding, mapping source-space
    /// coordinates to target-space coordinates.  Checks that the image
    /// really lies in the target space.
    pub fn morphism_matrix(&self, e: &FieldEmbedding) -> Result<CMat> {
        let src = &self.spaces[e.src];
        let tgt = &self.spaces[e.tgt];
        let rho = &self.ambient.rep[e.rep];
        let moved = rho.dot(&src.basis);
        let m = dagger(&tgt.basis).dot(&moved);
        let escape = residual(&tgt.basis.dot(&m), &moved);
        if escape > self.tolerance * max_abs(&moved).max(1.0) {
            return Err(Error::Verification(format!(
                "embedding image escapes the target space (residual {escape:.3e})"
            )));
        }
        Ok(m)
    }

    /// Adjoint of the functor matrix with respect to the two alternating
    /// forms: the unique `N` with `(M v) cup w = v cup (N w)`.
    pub fn adjoint_matrix(&self, e: &FieldEmbedding) -> Result<CMat> {
        let m = self.morphism_matrix(e)?;
        self.adjoint_of(&m, e.src, e.tgt)
    }

    /// Adjoint of an arbitrary matrix mapping `src` coordinates to `tgt`
    /// coordinates.
    pub fn adjoint_of(&self, m: &CMat, src: usize, tgt: usize) -> Result<CMat> {
        let f_src = &self.spaces[src].form;
        let f_tgt = &self.spaces[tgt].form;
        let rhs = transpose(m).dot(f_tgt);
        solve(f_src, &rhs)
    }

    /// Relative degree `[L : K]` of an embedding: the index of the target
    /// subgroup in the conjugated source subgroup.
    pub fn relative_degree(&self, e: &FieldEmbedding) -> usize {
        self.lattice[e.src].order() / self.lattice[e.tgt].order()
    }

    /// Whether the target field is Galois over the image of the source
    /// field: the target subgroup is normal in the conjugated source
    /// subgroup.
    pub fn is_galois(&self, e: &FieldEmbedding) -> bool {
        let stab = self.lattice[e.src].conjugate_by(&self.group, e.rep);
        self.lattice[e.tgt].is_normal_within(&self.group, &stab)
    }

    /// For a Galois embedding, the automorphisms of the target field fixing
    /// the image of the source field, as embeddings of the target into
    /// itself.
    pub fn galois_conjugates(&self, e: &FieldEmbedding) -> Result<Vec<FieldEmbedding>> {
        let stab = self.lattice[e.src].conjugate_by(&self.group, e.rep);
        if !self.lattice[e.tgt].is_normal_within(&self.group, &stab) {
            return Err(Error::InvalidSubgroup(
                "target field is not Galois over the image of the source field".into(),
            ));
        }
        self.lattice[e.tgt]
            .left_coset_reps_within(&self.group, &stab)
            .into_iter()
            .map(|tau| self.embedding(e.tgt, e.tgt, tau))
            .collect()
    }

    /// `(1/[L:K]) sum_tau V(tau)` over the Galois conjugates of a nested
    /// Galois pair, as an operator on the target space.  Requires the target
    /// subgroup to be normal in the source subgroup.
    pub fn galois_average(&self, src: usize, tgt: usize) -> Result<CMat> {
        let h_src = &self.lattice[src];
        let h_tgt = &self.lattice[tgt];
        if !h_tgt.is_subgroup_of(h_src) {
            return Err(Error::InvalidSubgroup(
                "fields are not nested: target subgroup is not contained in the source subgroup"
                    .into(),
            ));
        }
        let inclusion = self.embedding(src, tgt, self.group.identity())?;
        let conjugates = self.galois_conjugates(&inclusion)?;
        let dim = self.spaces[tgt].dim;
        let mut acc = CMat::zeros((dim, dim));
        for tau in &conjugates {
            acc += &self.morphism_matrix(tau)?;
        }
        let n = conjugates.len() as f64;
        Ok(acc.mapv_into(|z| z / n))
    }

    /// The unscaled trace pairing on the space of `index`: the restricted
    /// form multiplied by the degree of the field over the base field.
    pub fn trace_form(&self, index: usize) -> CMat {
        scale(
            &self.spaces[index].form,
            C64::new(self.field_degree(index) as f64, 0.0),
        )
    }

    /// Covariant map on an embedding (same as the functor matrix).
    pub fn pushforward(&self, e: &FieldEmbedding) -> Result<CMat> {
        self.morphism_matrix(e)
    }

    /// Contravariant map on an embedding: `[L:K]` times the adjoint.
    pub fn pullback(&self, e: &FieldEmbedding) -> Result<CMat> {
        let adj = self.adjoint_matrix(e)?;
        Ok(scale(&adj, C64::new(self.relative_degree(e) as f64, 0.0)))
    }

    /// The action of the whole group on the space of `index`; defined only
    /// when the subgroup is normal, so every element maps the space to
    /// itself.
    pub fn induced_action(&self, index: usize) -> Result<Vec<CMat>> {
        if !self.lattice[index].is_normal(&self.group) {
            return Err(Error::InvalidSubgroup(
                "group does not act on this space: its subgroup is not normal".into(),
            ));
        }
        (0..self.group.order())
            .map(|g| self.morphism_matrix(&self.embedding(index, index, g)?))
            .collect()
    }

    /// Dimension of the commutant of the group action on the ambient space:
    /// the space of matrices commuting with every `rho(g)`.  Equals the
    /// number of distinct irrep blocks.
    pub fn commutant_dimension(&self) -> usize {
        let d = self.ambient.dim;
        if d == 0 {
            return 0;
        }
        let gens: Vec<usize> = if self.group.generators().is_empty() {
            vec![self.group.identity()]
        } else {
            self.group.generators().to_vec()
        };
        // Row-major vectorisation of rho X - X rho = 0:
        // rows (i,j), columns (k,l), entry rho[i,k] delta[j,l] - delta[i,k] rho[l,j].
        let mut constraint = CMat::zeros((gens.len() * d * d, d * d));
        for (gi, &g) in gens.iter().enumerate() {
            let rho = &self.ambient.rep[g];
            for i in 0..d {
                for j in 0..d {
                    let row = gi * d * d + i * d + j;
                    for k in 0..d {
                        constraint[[row, k * d + j]] += rho[[i, k]];
                        constraint[[row, i * d + k]] -= rho[[k, j]];
                    }
                }
            }
        }
        nullspace(&constraint, RANK_REL_TOL).ncols()
    }

    /// The natural transformation that scales each selected irrep block by
    /// the given sign, evaluated on the space of `index`.
    pub fn sign_transformation(&self, index: usize, signs: &[i8]) -> CMat {
        assert_eq!(signs.len(), self.selected.len());
        let space = &self.spaces[index];
        let mut m = CMat::zeros((space.dim, space.dim));
        for (block, &sign) in space.blocks.iter().zip(signs.iter()) {
            for c in block.col_offset..block.col_offset + block.dim {
                m[[c, c]] = C64::new(sign as f64, 0.0);
            }
        }
        m
    }

    /// All sign vectors indexing candidate natural automorphisms, one per
    /// map from the selected irreps to `{-1, +1}`.
    pub fn sign_vectors(&self) -> Vec<Vec<i8>> {
        let n = self.selected.len();
        (0..(1u32 << n))
            .map(|mask| {
                (0..n)
                    .map(|i| if mask >> i & 1 == 1 { -1 } else { 1 })
                    .collect()
            })
            .collect()
    }
}
