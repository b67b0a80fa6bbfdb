//! Shared fixtures for unit tests: the quaternion group and its spin irrep,
//! built inline so module tests do not depend on files on disk.

use num_complex::Complex64;

use crate::group::FiniteGroup;
use crate::linalg::{eye, scale, CMat, C64};
use crate::repr::IrrepModel;

/// Quaternion units 1,-1,i,-i,j,-j,k,-k with the usual multiplication.
pub(crate) fn q8() -> FiniteGroup {
    let units = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"];
    // (sign, axis) with axis 0=1, 1=i, 2=j, 3=k
    let split = |e: usize| -> (i32, usize) {
        let sign = if e.is_multiple_of(2) { 1 } else { -1 };
        (sign, e / 2)
    };
    let fuse = |sign: i32, axis: usize| -> usize { axis * 2 + usize::from(sign < 0) };
    let axis_mul = |a: usize, b: usize| -> (i32, usize) {
        match (a, b) {
            (0, x) => (1, x),
            (x, 0) => (1, x),
            (x, y) if x == y => (-1, 0),
            (1, 2) => (1, 3),
            (2, 3) => (1, 1),
            (3, 1) => (1, 2),
            (2, 1) => (-1, 3),
            (3, 2) => (-1, 1),
            (1, 3) => (-1, 2),
            _ => unreachable!(),
        }
    };
    let table: Vec<Vec<usize>> = (0..8)
        .map(|a| {
            (0..8)
                .map(|b| {
                    let (sa, xa) = split(a);
                    let (sb, xb) = split(b);
                    let (sp, xp) = axis_mul(xa, xb);
                    fuse(sa * sb * sp, xp)
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_parts(
        "q8".into(),
        0,
        units.iter().map(|s| s.to_string()).collect(),
        table,
        vec![2, 4],
    )
    .unwrap()
}

/// The 2-dimensional irrep of the quaternion group in 2x2 unitaries.
pub(crate) fn q8_spin(group: &FiniteGroup) -> IrrepModel {
    let i = C64::new(0.0, 1.0);
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let m =
        |a: C64, b: C64, c: C64, d: C64| CMat::from_shape_vec((2, 2), vec![a, b, c, d]).unwrap();
    let rho_i = m(i, zero, zero, -i);
    let rho_j = m(zero, one, -one, zero);
    let rho_k = m(zero, i, i, zero);
    let e = eye(2);
    let mats = vec![
        e.clone(),
        scale(&e, -one),
        rho_i.clone(),
        scale(&rho_i, -one),
        rho_j.clone(),
        scale(&rho_j, -one),
        rho_k.clone(),
        scale(&rho_k, -one),
    ];
    IrrepModel::from_parts("q8.2a".into(), group.name().into(), mats, group).unwrap()
}

/// The quaternion group's full catalog: four sign characters plus the spin
/// irrep.
pub(crate) fn q8_catalog(group: &FiniteGroup) -> crate::repr::Catalog {
    let one = Complex64::new(1.0, 0.0);
    let scalar = |label: &str, values: [f64; 8]| {
        let mats = values
            .iter()
            .map(|&v| CMat::from_shape_fn((1, 1), |_| one * v))
            .collect();
        IrrepModel::from_parts(label.into(), group.name().into(), mats, group).unwrap()
    };
    crate::repr::Catalog::from_irreps(
        vec![
            scalar("q8.1a", [1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0]),
            scalar("q8.1b", [1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0, -1.0]),
            scalar("q8.1c", [1.0, 1.0, -1.0, -1.0, 1.0, 1.0, -1.0, -1.0]),
            scalar("q8.1d", [1.0, 1.0, -1.0, -1.0, -1.0, -1.0, 1.0, 1.0]),
            q8_spin(group),
        ],
        group,
    )
    .unwrap()
}
