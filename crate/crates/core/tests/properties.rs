//! Property-based invariants: the numerical kernel (SVD, nullspace, solve)
//! on random complex matrices, and closure/coset laws on random subsets of a
//! bundled group.

use std::path::PathBuf;
use std::sync::OnceLock;

use proptest::prelude::*;

use vsharp::group::{FiniteGroup, Subgroup};
use vsharp::linalg::{dagger, eye, max_abs, nullspace, rank, residual, solve, svd_right, CMat, C64};
use vsharp::seeded::Lcg;

fn q12() -> &'static FiniteGroup {
    static GROUP: OnceLock<FiniteGroup> = OnceLock::new();
    GROUP.get_or_init(|| {
        let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/groups/q12.json");
        FiniteGroup::load(&path).unwrap()
    })
}

fn matrix_strategy(max_dim: usize) -> impl Strategy<Value = CMat> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(rows, cols)| {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), rows * cols).prop_map(
            move |entries| {
                CMat::from_shape_fn((rows, cols), |(i, j)| {
                    let (re, im) = entries[i * cols + j];
                    C64::new(re, im)
                })
            },
        )
    })
}

proptest! {
    #[test]
    fn closure_of_any_subset_is_a_subgroup(seed in prop::collection::vec(0usize..12, 0..5)) {
        let group = q12();
        let members = group.closure(&seed);
        prop_assert!(Subgroup::new(group, &members).is_ok());
    }

    #[test]
    fn accepted_subsets_equal_their_closure(mask in 0u32..(1 << 12)) {
        let group = q12();
        let members: Vec<usize> = (0..12).filter(|&g| mask & (1 << g) != 0).collect();
        if let Ok(sub) = Subgroup::new(group, &members) {
            let mut closed = group.closure(&members);
            closed.sort_unstable();
            prop_assert_eq!(sub.members().to_vec(), closed);
        }
    }

    #[test]
    fn canonical_coset_representatives_are_stable(mask in 0u32..(1 << 12), g in 0usize..12) {
        let group = q12();
        let members: Vec<usize> = (0..12).filter(|&x| mask & (1 << x) != 0).collect();
        if let Ok(sub) = Subgroup::new(group, &members) {
            let rep = sub.canonical_coset_rep(group, g);
            // the representative lies in g's coset and is a fixed point
            let in_coset = sub.members().iter().any(|&h| group.mul(g, h) == rep);
            prop_assert!(in_coset);
            prop_assert_eq!(sub.canonical_coset_rep(group, rep), rep);
            prop_assert!(rep <= g);
        }
    }

    #[test]
    fn rank_and_nullity_partition_the_columns(a in matrix_strategy(5)) {
        let r = rank(&a, 1e-10);
        let n = nullspace(&a, 1e-10);
        prop_assert_eq!(r + n.ncols(), a.ncols());
        if n.ncols() > 0 {
            let image = a.dot(&n);
            prop_assert!(max_abs(&image) < 1e-8 * max_abs(&a).max(1.0));
            // nullspace columns are orthonormal
            prop_assert!(residual(&dagger(&n).dot(&n), &eye(n.ncols())) < 1e-9);
        }
    }

    #[test]
    fn singular_values_are_sorted_and_realized(a in matrix_strategy(5)) {
        let (values, v) = svd_right(&a);
        for w in values.windows(2) {
            prop_assert!(w[0] >= w[1] - 1e-12);
        }
        for (k, &s) in values.iter().enumerate() {
            prop_assert!(s >= -1e-12);
            let av = a.dot(&v.column(k).to_owned());
            let norm = av.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            prop_assert!((norm - s).abs() < 1e-8 * (1.0 + s));
        }
    }

    #[test]
    fn solve_reconstructs_diagonally_dominant_systems(
        b in matrix_strategy(4),
        rhs_cols in 1usize..3,
    ) {
        let n = b.nrows();
        let square = CMat::from_shape_fn((n, n), |(i, j)| {
            let base = if i < b.nrows() && j < b.ncols() { b[[i, j]] } else { C64::new(0.0, 0.0) };
            if i == j { base + C64::new(n as f64 + 1.0, 0.0) } else { base }
        });
        let mut lcg = Lcg::new(7);
        let rhs = CMat::from_shape_fn((n, rhs_cols), |_| lcg.next_complex());
        let x = solve(&square, &rhs).unwrap();
        prop_assert!(residual(&square.dot(&x), &rhs) < 1e-9);
    }

    #[test]
    fn seeded_streams_are_reproducible(seed in 0u64..1_000_000) {
        let mut a = Lcg::new(seed);
        let mut b = Lcg::new(seed);
        for _ in 0..16 {
            let (x, y) = (a.next_complex(), b.next_complex());
            prop_assert_eq!(x, y);
            prop_assert!(x.re >= -1.0 && x.re < 1.0 && x.im >= -1.0 && x.im < 1.0);
        }
    }
}
