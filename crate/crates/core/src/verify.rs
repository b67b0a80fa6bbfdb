//! Verification suites: every law the construction promises, checked
//! numerically over every instance the lattice provides, folded into
//! structured reports.
//!
//! Suites:
//! * `integrity` (always run): catalog completeness, indicator bookkeeping,
//!   ambient form/star axioms, and the stored-space axioms.
//! * `functor`: identity, coset-representative independence, composition,
//!   form/star compatibility, one-sided inverse of the adjoint, Galois
//!   averages, dimension formulas, and isotypic decompositions.
//! * `scaling`: the degree-scaling laws tying pushforward, pullback and the
//!   trace pairing together, on matrices and on seeded probe vectors.
//! * `multiplicity`: occurring irrep blocks have multiplicity one,
//!   nondegenerate restricted pairing, and quaternionic selection.
//! * `automorphisms`: the sign transformations per selected irrep are
//!   natural automorphisms, there are exactly `2^#selected` of them, and the
//!   ambient commutant has dimension `#selected`.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::functor::{FieldEmbedding, FunctorInstance};
use crate::linalg::{conj, eye, residual, scale, transpose, CMat, C64};
use crate::report::{Check, CheckBuilder, Report};
use crate::repr::isotypic_projector;
use crate::seeded::Lcg;
use crate::{NONDEGENERACY_RATIO, PROBE_VECTORS, RANK_REL_TOL};

/// Which verification suite to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Functor,
    Scaling,
    Multiplicity,
    Automorphisms,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Functor => "functor",
            Suite::Scaling => "scaling",
            Suite::Multiplicity => "multiplicity",
            Suite::Automorphisms => "automorphisms",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "functor" => Ok(Suite::Functor),
            "scaling" => Ok(Suite::Scaling),
            "multiplicity" => Ok(Suite::Multiplicity),
            "automorphisms" => Ok(Suite::Automorphisms),
            "all" => Ok(Suite::All),
            other => Err(Error::Config(format!(
                "unknown suite {other:?}; expected functor, scaling, multiplicity, automorphisms or all"
            ))),
        }
    }
}

/// Residual recorded when a computation that should be impossible to fail
/// fails anyway; far above any threshold and still representable in JSON.
const FAILURE_RESIDUAL: f64 = 1e300;

/// Run the requested suite (integrity checks always included first).
pub fn run(f: &FunctorInstance, suite: Suite, tol: f64) -> Result<Vec<Report>> {
    let mut reports = vec![integrity_report(f, tol)?];
    match suite {
        Suite::Functor => reports.push(functor_report(f, tol)?),
        Suite::Scaling => reports.push(scaling_report(f, tol)?),
        Suite::Multiplicity => reports.push(multiplicity_report(f, tol)?),
        Suite::Automorphisms => reports.push(automorphisms_report(f, tol)?),
        Suite::All => {
            reports.push(functor_report(f, tol)?);
            reports.push(scaling_report(f, tol)?);
            reports.push(multiplicity_report(f, tol)?);
            reports.push(automorphisms_report(f, tol)?);
        }
    }
    Ok(reports)
}

fn observe_mats(b: &mut CheckBuilder, x: &CMat, y: &CMat) {
    if x.is_empty() && y.is_empty() {
        b.observe_vacuous();
    } else {
        b.observe(residual(x, y));
    }
}

/// Catalog bookkeeping and ambient-space axioms.
pub fn integrity_report(f: &FunctorInstance, tol: f64) -> Result<Report> {
    let group = f.group();
    let catalog = f.catalog();
    let mut report = Report::new("integrity", group.name(), tol);

    let mut complete = CheckBuilder::new(
        "integrity.catalog-complete",
        "sum of squared degrees = |G|",
        &format!("{} irreps of {}", catalog.len(), group.name()),
        0.5,
    );
    let sq: usize = catalog.iter().map(|ir| ir.degree() * ir.degree()).sum();
    complete.observe((sq as f64 - group.order() as f64).abs());
    report.push(complete.finish());

    let mut ortho = CheckBuilder::new(
        "integrity.characters-orthonormal",
        "<chi_i, chi_j> = delta_ij",
        "all catalog pairs",
        1e-6,
    );
    let chars: Vec<Vec<C64>> = catalog.iter().map(|ir| ir.character()).collect();
    for i in 0..chars.len() {
        for j in i..chars.len() {
            let ip = crate::repr::character_inner(group, &chars[i], &chars[j]);
            let expected = if i == j { 1.0 } else { 0.0 };
            ortho.observe((ip - C64::new(expected, 0.0)).norm());
        }
    }
    report.push(ortho.finish());

    let mut fs_sum = CheckBuilder::new(
        "integrity.indicator-sum",
        "sum_pi indicator(pi) deg(pi) = #{g : g^2 = e}",
        group.name(),
        0.5,
    );
    let lhs = catalog.indicator_degree_sum(group)?;
    let rhs = group.square_root_count_of_identity() as i64;
    fs_sum.observe((lhs - rhs).abs() as f64);
    report.push(fs_sum.finish());

    let ambient = f.ambient();
    let mut alt = CheckBuilder::new(
        "integrity.form-alternating",
        "S^T = -S",
        "ambient form",
        tol,
    );
    observe_mats(
        &mut alt,
        &transpose(ambient.form()),
        &scale(ambient.form(), C64::new(-1.0, 0.0)),
    );
    report.push(alt.finish());

    let mut inv = CheckBuilder::new(
        "integrity.form-invariant",
        "rho(g)^T S rho(g) = S",
        "all group elements",
        tol,
    );
    for g in 0..group.order() {
        let rho = ambient.rep(g);
        observe_mats(&mut inv, &transpose(rho).dot(ambient.form()).dot(rho), ambient.form());
    }
    report.push(inv.finish());

    let d = ambient.dim();
    let mut star_sq = CheckBuilder::new(
        "integrity.star-squared",
        "A conj(A) = -1",
        "ambient star",
        tol,
    );
    observe_mats(
        &mut star_sq,
        &ambient.star().dot(&conj(ambient.star())),
        &scale(&eye(d), C64::new(-1.0, 0.0)),
    );
    report.push(star_sq.finish());

    let mut star_eq = CheckBuilder::new(
        "integrity.star-equivariant",
        "A conj(rho(g)) = rho(g) A",
        "all group elements",
        tol,
    );
    for g in 0..group.order() {
        let rho = ambient.rep(g);
        observe_mats(
            &mut star_eq,
            &ambient.star().dot(&conj(rho)),
            &rho.dot(ambient.star()),
        );
    }
    report.push(star_eq.finish());

    let mut conj_pair = CheckBuilder::new(
        "integrity.pairing-conjugation",
        "conj(v cup w) = (*v) cup (*w)",
        "ambient form and star",
        tol,
    );
    observe_mats(
        &mut conj_pair,
        &transpose(ambient.star()).dot(ambient.form()).dot(ambient.star()),
        &conj(ambient.form()),
    );
    report.push(conj_pair.finish());

    let mut positive = CheckBuilder::new(
        "integrity.scalar-product-positive",
        "<v, v> = v cup (*v) > 0",
        &format!("{PROBE_VECTORS} seeded probe vectors"),
        tol,
    );
    if d == 0 {
        positive.observe_vacuous();
    } else {
        let h = ambient.form().dot(ambient.star());
        let mut lcg = Lcg::new(crate::seeded::DEFAULT_SEED);
        for _ in 0..PROBE_VECTORS {
            let v = lcg.complex_vector(d);
            let hv = h.dot(&v.mapv(|z| z.conj()));
            let norm: C64 = v.iter().zip(hv.iter()).map(|(a, b)| a * b).sum();
            if norm.re <= 0.0 {
                positive.observe(1.0);
            } else {
                positive.observe(norm.im.abs());
            }
        }
    }
    report.push(positive.finish());

    let mut spaces_ok = CheckBuilder::new(
        "integrity.space-axioms",
        "bases orthonormal and fixed; forms and stars restrict consistently",
        &format!("{} subgroups", f.lattice().len()),
        tol,
    );
    for (idx, sub) in f.lattice().iter().enumerate() {
        let sp = f.space(idx);
        if sp.dim() == 0 {
            spaces_ok.observe_vacuous();
            continue;
        }
        let b = sp.basis();
        spaces_ok.observe(residual(
            &crate::linalg::dagger(b).dot(b),
            &eye(sp.dim()),
        ));
        for &h in sub.members() {
            spaces_ok.observe(residual(&ambient.rep(h).dot(b), b));
        }
        spaces_ok.observe(residual(
            &transpose(b).dot(ambient.form()).dot(b),
            sp.form(),
        ));
        spaces_ok.observe(residual(
            &b.dot(sp.star()),
            &ambient.star().dot(&conj(b)),
        ));
        spaces_ok.observe(residual(
            &sp.star().dot(&conj(sp.star())),
            &scale(&eye(sp.dim()), C64::new(-1.0, 0.0)),
        ));
    }
    report.push(spaces_ok.finish());

    Ok(report)
}

/// Embeddings indexed by (src, tgt) for composition sweeps.
fn embeddings_by_pair(f: &FunctorInstance) -> Vec<Vec<Vec<FieldEmbedding>>> {
    let n = f.lattice().len();
    (0..n)
        .map(|src| (0..n).map(|tgt| f.embeddings_between(src, tgt)).collect())
        .collect()
}

fn morphism_or_failure(f: &FunctorInstance, e: &FieldEmbedding, b: &mut CheckBuilder) -> Option<CMat> {
    match f.morphism_matrix(e) {
        Ok(m) => Some(m),
        Err(_) => {
            b.observe(FAILURE_RESIDUAL);
            None
        }
    }
}

/// Functor laws: identity, representative independence, composition,
/// structure preservation, adjoint section, Galois averages, dimensions and
/// decompositions.
pub fn functor_report(f: &FunctorInstance, tol: f64) -> Result<Report> {
    let group = f.group();
    let mut report = Report::new("functor", group.name(), tol);
    let n = f.lattice().len();
    let by_pair = embeddings_by_pair(f);
    let all: Vec<FieldEmbedding> = by_pair.iter().flatten().flatten().copied().collect();

    let mut identity = CheckBuilder::new(
        "functor.identity",
        "V(id) = id",
        &format!("{n} objects"),
        tol,
    );
    for idx in 0..n {
        let e = f.identity_embedding(idx);
        if let Some(m) = morphism_or_failure(f, &e, &mut identity) {
            observe_mats(&mut identity, &m, &eye(f.space(idx).dim()));
        }
    }
    report.push(identity.finish());

    let mut rep_free = CheckBuilder::new(
        "functor.representative",
        "V(sigma h) = V(sigma) for h in the source subgroup",
        &format!("{} embeddings, all coset members", all.len()),
        tol,
    );
    for e in &all {
        let Some(m) = morphism_or_failure(f, e, &mut rep_free) else {
            continue;
        };
        let tgt_basis = f.space(e.tgt).basis();
        let src_basis = f.space(e.src).basis();
        for &h in f.subgroup(e.src).members() {
            let sigma = group.mul(e.rep, h);
            let moved = f.ambient().rep(sigma).dot(src_basis);
            let m2 = crate::linalg::dagger(tgt_basis).dot(&moved);
            observe_mats(&mut rep_free, &m2, &m);
        }
    }
    report.push(rep_free.finish());

    let mut target = CheckBuilder::new(
        "functor.target",
        "rho(sigma) maps the source space into the target space",
        &format!("{} embeddings", all.len()),
        tol,
    );
    for e in &all {
        let src_basis = f.space(e.src).basis();
        let tgt_basis = f.space(e.tgt).basis();
        let moved = f.ambient().rep(e.rep).dot(src_basis);
        if moved.is_empty() {
            target.observe_vacuous();
            continue;
        }
        let m = crate::linalg::dagger(tgt_basis).dot(&moved);
        target.observe(residual(&tgt_basis.dot(&m), &moved));
    }
    report.push(target.finish());

    let mut compose = CheckBuilder::new(
        "functor.compose",
        "V(beta . alpha) = V(beta) V(alpha)",
        "all composable pairs",
        tol,
    );
    for k in 0..n {
        for (l, from_l) in by_pair.iter().enumerate() {
            if by_pair[k][l].is_empty() {
                continue;
            }
            for into_m in from_l {
                for e2 in into_m {
                    let m2 = f.morphism_matrix(e2).unwrap_or_else(|_| {
                        CMat::zeros((f.space(e2.tgt).dim(), f.space(e2.src).dim()))
                    });
                    for e1 in &by_pair[k][l] {
                        let (Ok(m1), Ok(comp)) = (f.morphism_matrix(e1), f.compose(e2, e1))
                        else {
                            compose.observe(FAILURE_RESIDUAL);
                            continue;
                        };
                        let Some(mc) = morphism_or_failure(f, &comp, &mut compose) else {
                            continue;
                        };
                        observe_mats(&mut compose, &mc, &m2.dot(&m1));
                    }
                }
            }
        }
    }
    report.push(compose.finish());

    let mut form_pres = CheckBuilder::new(
        "functor.form",
        "V(alpha)^T cup V(alpha) = cup",
        &format!("{} embeddings", all.len()),
        tol,
    );
    let mut star_comm = CheckBuilder::new(
        "functor.star",
        "V(alpha) * = * V(alpha)",
        &format!("{} embeddings", all.len()),
        tol,
    );
    let mut section = CheckBuilder::new(
        "functor.section",
        "adjoint(V(alpha)) V(alpha) = id",
        &format!("{} embeddings", all.len()),
        tol,
    );
    for e in &all {
        let Some(m) = morphism_or_failure(f, e, &mut form_pres) else {
            continue;
        };
        let f_src = f.space(e.src).form();
        let f_tgt = f.space(e.tgt).form();
        observe_mats(&mut form_pres, &transpose(&m).dot(f_tgt).dot(&m), f_src);
        let a_src = f.space(e.src).star();
        let a_tgt = f.space(e.tgt).star();
        observe_mats(&mut star_comm, &m.dot(a_src), &a_tgt.dot(&conj(&m)));
        match f.adjoint_of(&m, e.src, e.tgt) {
            Ok(adj) => observe_mats(&mut section, &adj.dot(&m), &eye(f.space(e.src).dim())),
            Err(_) => section.observe(FAILURE_RESIDUAL),
        }
    }
    report.push(form_pres.finish());
    report.push(star_comm.finish());
    report.push(section.finish());

    let mut galois = CheckBuilder::new(
        "functor.galois-average",
        "V(alpha) adjoint(V(alpha)) = (1/[L:K]) sum over Gal conjugates of V(tau)",
        "all Galois embeddings",
        tol,
    );
    let mut iso_inv = CheckBuilder::new(
        "functor.isomorphism-inverse",
        "adjoint(V(alpha)) = V(alpha)^{-1} for isomorphisms",
        "all degree-1 embeddings",
        tol,
    );
    for e in &all {
        if f.is_galois(e) {
            match (|| -> Result<(CMat, CMat)> {
                let m = f.morphism_matrix(e)?;
                let adj = f.adjoint_of(&m, e.src, e.tgt)?;
                let lhs = m.dot(&adj);
                let conjugates = f.galois_conjugates(e)?;
                let dim = f.space(e.tgt).dim();
                let mut sum = CMat::zeros((dim, dim));
                for tau in &conjugates {
                    sum += &f.morphism_matrix(tau)?;
                }
                let scale_factor = C64::new(1.0 / conjugates.len() as f64, 0.0);
                Ok((lhs, scale(&sum, scale_factor)))
            })() {
                Ok((lhs, rhs)) => observe_mats(&mut galois, &lhs, &rhs),
                Err(_) => galois.observe(FAILURE_RESIDUAL),
            }
        }
        if f.relative_degree(e) == 1 {
            match (|| -> Result<(CMat, usize)> {
                let m = f.morphism_matrix(e)?;
                let adj = f.adjoint_of(&m, e.src, e.tgt)?;
                Ok((m.dot(&adj), f.space(e.tgt).dim()))
            })() {
                Ok((prod, dim)) => observe_mats(&mut iso_inv, &prod, &eye(dim)),
                Err(_) => iso_inv.observe(FAILURE_RESIDUAL),
            }
        }
    }
    report.push(galois.finish());
    report.push(iso_inv.finish());

    let mut dims = CheckBuilder::new(
        "functor.dimension",
        "dim V_K = sum over selected pi of the trivial multiplicity of pi restricted to H_K",
        &format!("{n} subgroups"),
        0.5,
    );
    for (idx, sub) in f.lattice().iter().enumerate() {
        let mut expected = 0.0;
        for label in f.selected_labels() {
            let chi = f.catalog().get(label).expect("selected is in catalog").character();
            let avg: C64 = sub.members().iter().map(|&h| chi[h]).sum::<C64>()
                / C64::new(sub.order() as f64, 0.0);
            expected += avg.re;
        }
        dims.observe((f.space(idx).dim() as f64 - expected).abs());
    }
    report.push(dims.finish());

    let mut monotone = CheckBuilder::new(
        "functor.monotone",
        "nested fields have nested dimensions: K in L implies dim V_K <= dim V_L",
        "all nested subgroup pairs",
        0.5,
    );
    for k in 0..n {
        for l in 0..n {
            if f.subgroup(l).is_subgroup_of(f.subgroup(k)) {
                monotone.observe_exact(f.space(k).dim() <= f.space(l).dim());
            }
        }
    }
    report.push(monotone.finish());

    let mut decomp = CheckBuilder::new(
        "functor.decomposition",
        "for normal H: the pi-isotypic part of V_K has dimension deg(pi) when pi is selected and trivial on H, else 0",
        "all normal subgroups x all irreps",
        0.5,
    );
    for (idx, sub) in f.lattice().iter().enumerate() {
        if !sub.is_normal(group) {
            continue;
        }
        let action = match f.induced_action(idx) {
            Ok(a) => a,
            Err(_) => {
                decomp.observe(FAILURE_RESIDUAL);
                continue;
            }
        };
        for irrep in f.catalog().iter() {
            if f.space(idx).dim() == 0 {
                decomp.observe_vacuous();
                continue;
            }
            let p = isotypic_projector(group, &irrep.character(), irrep.degree(), &action);
            let rank = crate::linalg::rank(&p, RANK_REL_TOL);
            let selected = f.selected_labels().iter().any(|l| l == irrep.label());
            let expected = if selected && irrep.kernel_contains(group, sub) {
                irrep.degree()
            } else {
                0
            };
            decomp.observe((rank as f64 - expected as f64).abs());
        }
    }
    report.push(decomp.finish());

    Ok(report)
}

/// Degree-scaling laws for the unscaled trace pairing, the pushforward and
/// the pullback, checked on matrices and on seeded probe vectors.
pub fn scaling_report(f: &FunctorInstance, tol: f64) -> Result<Report> {
    let group = f.group();
    let mut report = Report::new("scaling", group.name(), tol);
    let all = f.all_embeddings();
    let mut lcg = Lcg::new(crate::seeded::DEFAULT_SEED);

    let mut section_degree = CheckBuilder::new(
        "scaling.section-degree",
        "pullback(alpha) pushforward(alpha) = [L:K] id",
        &format!("{} embeddings; matrices and {PROBE_VECTORS} probes", all.len()),
        tol,
    );
    let mut galois_sum = CheckBuilder::new(
        "scaling.galois-sum",
        "pushforward(alpha) pullback(alpha) = sum over Gal conjugates of pushforward(tau)",
        "all Galois embeddings",
        tol,
    );
    let mut star_push = CheckBuilder::new(
        "scaling.star-pushforward",
        "pushforward(alpha) * = * pushforward(alpha)",
        &format!("{} embeddings", all.len()),
        tol,
    );
    let mut adjoint_bilinear = CheckBuilder::new(
        "scaling.adjoint-pairing",
        "pushforward(h) cup_tr h' = h cup_tr pullback(h'), also for < , >",
        &format!("{} embeddings; matrices and {PROBE_VECTORS} probes", all.len()),
        tol,
    );
    let mut isometry_degree = CheckBuilder::new(
        "scaling.isometry-degree",
        "pushforward(h1) cup_tr pushforward(h2) = [L:K] (h1 cup_tr h2), also for < , >",
        &format!("{} embeddings", all.len()),
        tol,
    );

    for e in &all {
        let dim_src = f.space(e.src).dim();
        let dim_tgt = f.space(e.tgt).dim();
        let r = f.relative_degree(e) as f64;
        let (push, pull) = match (f.pushforward(e), f.pullback(e)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => {
                section_degree.observe(FAILURE_RESIDUAL);
                continue;
            }
        };
        let tr_src = f.trace_form(e.src);
        let tr_tgt = f.trace_form(e.tgt);
        let sp_src = tr_src.dot(f.space(e.src).star());
        let sp_tgt = tr_tgt.dot(f.space(e.tgt).star());

        // 1) pullback . pushforward = [L:K] id
        observe_mats(
            &mut section_degree,
            &pull.dot(&push),
            &scale(&eye(dim_src), C64::new(r, 0.0)),
        );

        // 2) Galois case: pushforward . pullback = sum of conjugates
        if f.is_galois(e) {
            match (|| -> Result<CMat> {
                let mut sum = CMat::zeros((dim_tgt, dim_tgt));
                for tau in &f.galois_conjugates(e)? {
                    sum += &f.morphism_matrix(tau)?;
                }
                Ok(sum)
            })() {
                Ok(sum) => observe_mats(&mut galois_sum, &push.dot(&pull), &sum),
                Err(_) => galois_sum.observe(FAILURE_RESIDUAL),
            }
        }

        // 5a) pushforward commutes with the stars
        observe_mats(
            &mut star_push,
            &push.dot(f.space(e.src).star()),
            &f.space(e.tgt).star().dot(&conj(&push)),
        );

        // 5b) adjointness for cup_tr and for the scalar products
        observe_mats(
            &mut adjoint_bilinear,
            &transpose(&push).dot(&tr_tgt),
            &tr_src.dot(&pull),
        );
        observe_mats(
            &mut adjoint_bilinear,
            &transpose(&push).dot(&sp_tgt),
            &sp_src.dot(&conj(&pull)),
        );

        // 5c) pushforward scales the pairings by the relative degree
        observe_mats(
            &mut isometry_degree,
            &transpose(&push).dot(&tr_tgt).dot(&push),
            &scale(&tr_src, C64::new(r, 0.0)),
        );
        observe_mats(
            &mut isometry_degree,
            &transpose(&push).dot(&sp_tgt).dot(&conj(&push)),
            &scale(&sp_src, C64::new(r, 0.0)),
        );

        // probe vectors for the vector-level statements
        if dim_src > 0 && dim_tgt > 0 {
            for _ in 0..PROBE_VECTORS {
                let h = lcg.complex_vector(dim_src);
                let hp = lcg.complex_vector(dim_tgt);
                // 1) on vectors
                let lhs = pull.dot(&push.dot(&h));
                let diff = &lhs - &h.mapv(|z| z * r);
                section_degree.observe(diff.iter().map(|z| z.norm()).fold(0.0, f64::max));
                // 5b) bilinear pairing on vectors
                let l1 = crate::linalg::bilinear(&push.dot(&h), &tr_tgt, &hp);
                let r1 = crate::linalg::bilinear(&h, &tr_src, &pull.dot(&hp));
                adjoint_bilinear.observe((l1 - r1).norm());
                // 5b) scalar product on vectors
                let l2 = crate::linalg::bilinear(&push.dot(&h), &sp_tgt, &hp.mapv(|z| z.conj()));
                let r2 = crate::linalg::bilinear(
                    &h,
                    &sp_src,
                    &pull.dot(&hp).mapv(|z| z.conj()),
                );
                adjoint_bilinear.observe((l2 - r2).norm());
            }
        }
    }
    report.push(section_degree.finish());
    report.push(galois_sum.finish());
    report.push(star_push.finish());
    report.push(adjoint_bilinear.finish());
    report.push(isometry_degree.finish());
    Ok(report)
}

/// Multiplicity-one, nondegeneracy of restricted pairings, and quaternionic
/// selection of every occurring irrep block.
pub fn multiplicity_report(f: &FunctorInstance, tol: f64) -> Result<Report> {
    let group = f.group();
    let mut report = Report::new("multiplicity", group.name(), tol);

    let mut mult_one = CheckBuilder::new(
        "multiplicity.one",
        "for normal H each occurring block has dimension deg(pi)",
        "all normal subgroups x selected irreps",
        0.5,
    );
    let mut nondeg = CheckBuilder::new(
        "multiplicity.nondegenerate",
        "cup_tr restricted to each occurring block is nondegenerate",
        &format!("singular-value ratio > {NONDEGENERACY_RATIO:.0e}"),
        0.5,
    );
    let mut selection = CheckBuilder::new(
        "multiplicity.symplectic-selection",
        "every occurring pi has indicator -1 and weight -1",
        "all occurring blocks",
        0.5,
    );

    for (idx, sub) in f.lattice().iter().enumerate() {
        let sp = f.space(idx);
        let normal = sub.is_normal(group);
        for block in sp.blocks() {
            if block.dim == 0 {
                continue;
            }
            if normal {
                let deg = f
                    .catalog()
                    .get(&block.label)
                    .expect("block label is in catalog")
                    .degree();
                mult_one.observe((block.dim as f64 - deg as f64).abs());
            }
            let range = block.col_offset..block.col_offset + block.dim;
            let sub_form = f
                .trace_form(idx)
                .slice(ndarray::s![range.clone(), range.clone()])
                .to_owned();
            let ratio = crate::linalg::min_max_singular_ratio(&sub_form);
            nondeg.observe_exact(ratio > NONDEGENERACY_RATIO);
            let irrep = f.catalog().get(&block.label).expect("block label is in catalog");
            let fs_ok = irrep.frobenius_schur(group)? == -1;
            let w_ok = f.weights().get(&block.label) == Some(-1);
            selection.observe_exact(fs_ok && w_ok);
        }
    }
    if f.selected_labels().is_empty() {
        mult_one.observe_vacuous();
        nondeg.observe_vacuous();
        selection.observe_vacuous();
    }
    report.push(mult_one.finish());
    report.push(nondeg.finish());
    report.push(selection.finish());
    Ok(report)
}

/// The natural sign automorphisms and the commutant dimension.
pub fn automorphisms_report(f: &FunctorInstance, tol: f64) -> Result<Report> {
    let group = f.group();
    let mut report = Report::new("automorphisms", group.name(), tol);
    let all = f.all_embeddings();
    let sign_vectors = f.sign_vectors();
    let n = f.lattice().len();

    let mut natural = CheckBuilder::new(
        "automorphisms.natural",
        "each sign transformation preserves cup and * and commutes with every V(alpha)",
        &format!("{} sign vectors x {} embeddings", sign_vectors.len(), all.len()),
        tol,
    );
    let mut valid = 0usize;
    for signs in &sign_vectors {
        let mut worst = 0.0f64;
        let mut any_content = false;
        for idx in 0..n {
            let sp = f.space(idx);
            if sp.dim() == 0 {
                continue;
            }
            any_content = true;
            let eta = f.sign_transformation(idx, signs);
            let form_res = residual(&transpose(&eta).dot(sp.form()).dot(&eta), sp.form());
            let star_res = residual(&eta.dot(sp.star()), &sp.star().dot(&conj(&eta)));
            worst = worst.max(form_res).max(star_res);
            natural.observe(form_res);
            natural.observe(star_res);
        }
        for e in &all {
            if f.space(e.src).dim() == 0 && f.space(e.tgt).dim() == 0 {
                continue;
            }
            any_content = true;
            let m = match f.morphism_matrix(e) {
                Ok(m) => m,
                Err(_) => {
                    natural.observe(FAILURE_RESIDUAL);
                    continue;
                }
            };
            let eta_src = f.sign_transformation(e.src, signs);
            let eta_tgt = f.sign_transformation(e.tgt, signs);
            let res = residual(&eta_tgt.dot(&m), &m.dot(&eta_src));
            worst = worst.max(res);
            natural.observe(res);
        }
        if !any_content {
            natural.observe_vacuous();
        }
        if worst < tol {
            valid += 1;
        }
    }
    report.push(natural.finish());

    let mut count = CheckBuilder::new(
        "automorphisms.count",
        "the natural sign automorphisms number exactly 2^#selected",
        &format!("{} selected irreps", f.selected_labels().len()),
        0.5,
    );
    count.observe((valid as f64 - sign_vectors.len() as f64).abs());
    report.push(count.finish());

    let mut distinct = CheckBuilder::new(
        "automorphisms.distinct",
        "distinct sign vectors act differently on the top space",
        "all sign-vector pairs",
        0.5,
    );
    let top = f.top_index();
    if f.space(top).dim() == 0 {
        distinct.observe_vacuous();
    } else {
        for i in 0..sign_vectors.len() {
            for j in (i + 1)..sign_vectors.len() {
                let a = f.sign_transformation(top, &sign_vectors[i]);
                let b = f.sign_transformation(top, &sign_vectors[j]);
                distinct.observe_exact(residual(&a, &b) > 0.5);
            }
        }
    }
    report.push(distinct.finish());

    let mut commutant = CheckBuilder::new(
        "automorphisms.commutant",
        "dim of the ambient commutant = number of selected irreps",
        group.name(),
        0.5,
    );
    commutant.observe(
        (f.commutant_dimension() as f64 - f.selected_labels().len() as f64).abs(),
    );
    report.push(commutant.finish());

    Ok(report)
}

/// Convenience wrapper: `true` when every check in every report passed.
pub fn all_pass(reports: &[Report]) -> bool {
    reports.iter().all(|r| r.all_pass())
}

/// Collect all failed checks across reports.
pub fn failures(reports: &[Report]) -> Vec<&Check> {
    reports.iter().flat_map(|r| r.failed()).collect()
}
