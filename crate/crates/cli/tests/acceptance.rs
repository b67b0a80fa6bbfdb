//! Acceptance gate: one test per shipped claim, each printing a single
//! PASS line (visible with `cargo test --test acceptance -- --nocapture`).
//! Every tolerance and runtime bound is asserted here, end to end.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use vsharp::functor::{build_functor, FunctorInstance};
use vsharp::group::FiniteGroup;
use vsharp::linalg::{residual, CMat, C64};
use vsharp::repr::Catalog;
use vsharp::rootdata::{lmfdb_fetch, WeightTable};
use vsharp::symplectic::{invariant_alternating_form, star_operator_with_product, InitialProduct};
use vsharp::verify;
use vsharp::{DEFAULT_TOLERANCE, NONDEGENERACY_RATIO};

const ALL_SLUGS: [&str; 7] = ["c2", "c4", "s3", "d4", "q8", "q12", "c2q8"];
const ZERO_SLUGS: [&str; 4] = ["c2", "c4", "s3", "d4"];

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn load_group(slug: &str) -> FiniteGroup {
    FiniteGroup::load(&data_dir().join(format!("groups/{slug}.json"))).unwrap()
}

fn load_catalog(slug: &str, group: &FiniteGroup) -> Catalog {
    Catalog::load_dir(&data_dir().join("irreps").join(slug), group).unwrap()
}

fn build(slug: &str) -> FunctorInstance {
    let group = load_group(slug);
    let catalog = load_catalog(slug, &group);
    let weights = WeightTable::load(
        &data_dir().join(format!("weights/{slug}.json")),
        &group,
        &catalog,
    )
    .unwrap();
    build_functor(group, catalog, weights, DEFAULT_TOLERANCE).unwrap()
}

fn vsharp_cmd() -> Command {
    Command::new(env!("CARGO_BIN_EXE_vsharp"))
}

fn assert_all_residuals_below(reports: &[vsharp::report::Report], bound: f64, what: &str) {
    for report in reports {
        assert!(
            report.all_pass(),
            "{what}: suite {} failed\n{}",
            report.suite,
            report.render_text()
        );
        for check in &report.checks {
            assert!(
                check.residual < bound,
                "{what}: {} residual {:.3e} >= {bound:.1e}",
                check.id,
                check.residual
            );
        }
    }
}

/// Criterion 1: the order-8 quaternion model end to end through the binary.
/// Ambient dimension 2, the full field gets a 2-dimensional space, all five
/// proper subfields get zero, and `verify --suite all` exits 0 with every
/// residual below 1e-9.  Total runtime under 1 second.
#[test]
fn criterion_1_quaternion_end_to_end() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let bundle = dir.path().join("q8.bundle.json");

    let out = vsharp_cmd()
        .args(["build", "--output", "json"])
        .arg("--group")
        .arg(data_dir().join("groups/q8.json"))
        .arg("--irreps")
        .arg(data_dir().join("irreps/q8"))
        .arg("--weights")
        .arg(data_dir().join("weights/q8.json"))
        .arg("--bundle")
        .arg(&bundle)
        .output()
        .unwrap();
    assert!(out.status.success(), "build failed: {}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["ambient_dim"], 2);
    let subgroups = doc["subgroups"].as_array().unwrap();
    assert_eq!(subgroups.len(), 6);
    let mut dims: Vec<u64> = subgroups
        .iter()
        .map(|s| s["dim"].as_u64().unwrap())
        .collect();
    dims.sort_unstable();
    assert_eq!(dims, [0, 0, 0, 0, 0, 2]);
    // the 2-dimensional space belongs to the trivial subgroup (the full field)
    let top = subgroups.iter().find(|s| s["dim"] == 2).unwrap();
    assert_eq!(top["order"], 1);
    assert_eq!(top["field_degree"], 8);

    let out = vsharp_cmd()
        .args(["verify", "--suite", "all", "--output", "json", "--bundle"])
        .arg(&bundle)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "verify exited {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["all_pass"], serde_json::json!(true));
    let mut checks = 0;
    for report in doc["reports"].as_array().unwrap() {
        for check in report["checks"].as_array().unwrap() {
            let residual = check["residual"].as_f64().unwrap();
            assert!(
                residual < 1e-9,
                "check {} residual {residual:.3e}",
                check["id"]
            );
            checks += 1;
        }
    }
    assert!(checks >= 30, "expected a full sweep, got {checks} checks");

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!("ACCEPTANCE 1 quaternion end-to-end (dims 2/0, verify all, <1s): PASS");
}

/// Criterion 2: the star operator is independent of the initial scalar
/// product for every quaternionic irrep of the three quaternionic groups,
/// and for the quaternion 2-dimensional model it equals the hand-derived
/// matrix -J.  Runtime under 1 second.
#[test]
fn criterion_2_star_uniqueness() {
    let start = Instant::now();
    let mut checked = 0;
    for slug in ["q8", "q12", "c2q8"] {
        let group = load_group(slug);
        let catalog = load_catalog(slug, &group);
        for irrep in catalog.iter() {
            if irrep.frobenius_schur(&group).unwrap() != -1 {
                continue;
            }
            let form = invariant_alternating_form(&group, irrep).unwrap();
            let star_a = star_operator_with_product(
                &group,
                irrep,
                &form,
                InitialProduct::Standard,
                DEFAULT_TOLERANCE,
            )
            .unwrap();
            let star_b = star_operator_with_product(
                &group,
                irrep,
                &form,
                InitialProduct::SeededPerturbation { seed: 2024 },
                DEFAULT_TOLERANCE,
            )
            .unwrap();
            let diff = residual(&star_a, &star_b);
            assert!(diff < 1e-9, "{}: stars differ by {diff:.3e}", irrep.label());
            checked += 1;
        }
    }
    assert_eq!(checked, 4, "expected four quaternionic irreps in the corpus");

    // hand oracle: for the quaternion irrep with form J the star is -J
    let group = load_group("q8");
    let catalog = load_catalog("q8", &group);
    let spin = catalog.get("Q8.2a").unwrap();
    let form = invariant_alternating_form(&group, spin).unwrap();
    let j = CMat::from_shape_vec(
        (2, 2),
        vec![
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(-1.0, 0.0),
            C64::new(0.0, 0.0),
        ],
    )
    .unwrap();
    assert!(residual(&form, &j) < 1e-12, "normalized form must be J");
    let star = star_operator_with_product(
        &group,
        spin,
        &form,
        InitialProduct::Standard,
        DEFAULT_TOLERANCE,
    )
    .unwrap();
    let minus_j = vsharp::linalg::scale(&j, C64::new(-1.0, 0.0));
    assert!(residual(&star, &minus_j) < 1e-9, "star must equal -J");

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!("ACCEPTANCE 2 star uniqueness across initial products, -J oracle (<1s): PASS");
}

/// Criterion 3: the functor identity suite (section identity and Galois
/// average, plus composition/coset sweeps) over all seven groups, every
/// subgroup pair, every valid embedding and every coset representative;
/// the four orthogonal-type groups produce the zero functor, decided by
/// exact integer indicators.  Runtime under 10 seconds.
#[test]
fn criterion_3_functor_identity_suite() {
    let start = Instant::now();
    for slug in ALL_SLUGS {
        let f = build(slug);
        let reports = verify::run(&f, verify::Suite::Functor, DEFAULT_TOLERANCE).unwrap();
        assert_all_residuals_below(&reports, 1e-9, slug);
    }
    for slug in ZERO_SLUGS {
        let group = load_group(slug);
        let catalog = load_catalog(slug, &group);
        for irrep in catalog.iter() {
            assert_ne!(
                irrep.frobenius_schur(&group).unwrap(),
                -1,
                "{slug} must have no quaternionic irrep"
            );
        }
        let f = build(slug);
        assert!(f.selected_labels().is_empty());
        assert_eq!(f.ambient().dim(), 0);
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    println!("ACCEPTANCE 3 functor identity suite over 7 groups, zero-functor controls (<10s): PASS");
}

/// Criterion 4: the natural sign automorphisms number 2 for the quaternion
/// model, 4 for the doubled model, 1 for zero functors, and the ambient
/// commutant dimension is 1 / 2 / 0.  Runtime under 5 seconds.
#[test]
fn criterion_4_automorphism_counts() {
    let start = Instant::now();
    let expectations = [
        ("q8", 2usize, 1usize),
        ("c2q8", 4, 2),
        ("s3", 1, 0),
        ("d4", 1, 0),
        ("c4", 1, 0),
    ];
    for (slug, autos, commutant) in expectations {
        let f = build(slug);
        assert_eq!(f.sign_vectors().len(), autos, "{slug} automorphism count");
        assert_eq!(
            f.commutant_dimension(),
            commutant,
            "{slug} commutant dimension"
        );
        let reports = verify::run(&f, verify::Suite::Automorphisms, DEFAULT_TOLERANCE).unwrap();
        for report in &reports {
            assert!(report.all_pass(), "{slug}:\n{}", report.render_text());
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    println!("ACCEPTANCE 4 automorphism groups 2/4/1 and commutant 1/2/0 (<5s): PASS");
}

/// Criterion 5: the degree-scaling laws (section degree, Galois sum, star
/// pushforward, adjoint pairing for both pairings, and the [L:K]-scaling of
/// both pairings) hold on basis vectors and 100 seeded probe vectors within
/// 1e-9 on every instance.
#[test]
fn criterion_5_scaling_laws() {
    for slug in ALL_SLUGS {
        let f = build(slug);
        let reports = verify::run(&f, verify::Suite::Scaling, DEFAULT_TOLERANCE).unwrap();
        assert_all_residuals_below(&reports, 1e-9, slug);
        let scaling = reports.iter().find(|r| r.suite == "scaling").unwrap();
        let ids: Vec<&str> = scaling.checks.iter().map(|c| c.id.as_str()).collect();
        for required in [
            "scaling.section-degree",
            "scaling.galois-sum",
            "scaling.star-pushforward",
            "scaling.adjoint-pairing",
            "scaling.isometry-degree",
        ] {
            assert!(ids.contains(&required), "{slug} missing {required}");
        }
    }
    println!("ACCEPTANCE 5 degree-scaling laws on basis + 100 seeded vectors: PASS");
}

/// Criterion 6: multiplicity one (occurring blocks have exactly the irrep
/// degree), nondegenerate restricted trace pairing (singular-value ratio
/// above 1e-6), and quaternionic selection (indicator -1 and weight -1) for
/// every occurring irrep, on every instance.
#[test]
fn criterion_6_multiplicity_structure() {
    for slug in ALL_SLUGS {
        let f = build(slug);
        let reports = verify::run(&f, verify::Suite::Multiplicity, DEFAULT_TOLERANCE).unwrap();
        for report in &reports {
            assert!(report.all_pass(), "{slug}:\n{}", report.render_text());
        }
    }
    // direct recomputation on the three nonzero instances
    for slug in ["q8", "q12", "c2q8"] {
        let f = build(slug);
        for idx in 0..f.lattice().len() {
            let space = f.space(idx);
            for block in space.blocks() {
                if block.dim == 0 {
                    continue;
                }
                let irrep = f.catalog().get(&block.label).unwrap();
                assert_eq!(block.dim, irrep.degree(), "{slug} S{idx} {}", block.label);
                let range = block.col_offset..block.col_offset + block.dim;
                let tr = f.trace_form(idx);
                let sub = tr.slice(ndarray::s![range.clone(), range]).to_owned();
                let ratio = vsharp::linalg::min_max_singular_ratio(&sub);
                assert!(
                    ratio > NONDEGENERACY_RATIO,
                    "{slug} S{idx} {} ratio {ratio:.3e}",
                    block.label
                );
                assert_eq!(irrep.frobenius_schur(f.group()).unwrap(), -1);
                assert_eq!(f.weights().get(&block.label), Some(-1));
            }
        }
    }
    println!("ACCEPTANCE 6 multiplicity one, nondegenerate restriction, quaternionic selection: PASS");
}

/// Criterion 7: for every bundled group the indicator-degree sum equals the
/// number of square roots of the identity, counted directly off the Cayley
/// table — an exact integer identity.
#[test]
fn criterion_7_indicator_degree_oracle() {
    for slug in ALL_SLUGS {
        let group = load_group(slug);
        let catalog = load_catalog(slug, &group);
        let squares = (0..group.order())
            .filter(|&g| group.mul(g, g) == group.identity())
            .count() as i64;
        let sum = catalog.indicator_degree_sum(&group).unwrap();
        assert_eq!(sum, squares, "{slug}: {sum} != {squares}");
    }
    println!("ACCEPTANCE 7 indicator-degree sum equals square-root count on all 7 groups: PASS");
}

/// Criterion 8: weight-table validation accepts the bundled quaternion
/// table and rejects a table naming an orthogonal irrep; the root-number
/// cache round-trips a bundled fixture byte-identically with no network.
#[test]
fn criterion_8_root_data_offline() {
    let group = load_group("q8");
    let catalog = load_catalog("q8", &group);
    WeightTable::load(&data_dir().join("weights/q8.json"), &group, &catalog)
        .expect("bundled table must validate");

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"group":"Q8","weights":{"Q8.1a":-1},"provenance":{}}"#,
    )
    .unwrap();
    let err = WeightTable::load(&bad, &group, &catalog).unwrap_err();
    assert!(err.is_input_error(), "orthogonal label must be an input error");

    // cache round trip on the bundled fixture, offline
    let fixtures = data_dir().join("lmfdb-fixtures");
    let label = "test.2.8t5.a";
    let path = vsharp::rootdata::cache_path(&fixtures, label).unwrap();
    let before = std::fs::read(&path).unwrap();
    let first = lmfdb_fetch(label, &fixtures).unwrap();
    let second = lmfdb_fetch(label, &fixtures).unwrap();
    let after = std::fs::read(&path).unwrap();
    assert_eq!(first, second);
    assert_eq!(first.w, -1);
    assert_eq!(first.irrep_label.as_deref(), Some("Q8.2a"));
    assert_eq!(before, after, "cache file must be byte-identical");
    println!("ACCEPTANCE 8 weight validation + offline cache round trip: PASS");
}
