//! Shared helpers for the integration tests.
#![allow(dead_code)]

use algid::{ElementClass, GroupParams, UtElement};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const OFFICIAL: [GroupParams; 3] = [GroupParams::UT32, GroupParams::UT40, GroupParams::UT64];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniformly random element (each cell uniform in `[0, p)`).
pub fn random(rng: &mut impl Rng, params: GroupParams) -> UtElement {
    let p = params.p();
    let cells = std::array::from_fn(|_| rng.gen_range(0..p));
    UtElement::from_cells(params, cells).unwrap()
}

/// Random element of the given class. Cell order is
/// `[e12, e13, e14, e23, e24, e34]`.
pub fn random_of(rng: &mut impl Rng, params: GroupParams, class: ElementClass) -> UtElement {
    let p = params.p();
    let cells = match class {
        ElementClass::Identity => [0; 6],
        ElementClass::Center => [0, 0, rng.gen_range(1..p), 0, 0, 0],
        ElementClass::Hybrid => loop {
            let c = [0, rng.gen_range(0..p), rng.gen_range(0..p), rng.gen_range(0..p), rng.gen_range(0..p), 0];
            if c[1] != 0 || c[3] != 0 || c[4] != 0 {
                break c;
            }
        },
        ElementClass::Ordered => loop {
            let c: [u64; 6] = std::array::from_fn(|_| rng.gen_range(0..p));
            if c[0] != 0 || c[5] != 0 {
                break c;
            }
        },
    };
    let e = UtElement::from_cells(params, cells).unwrap();
    assert_eq!(e.classify(), class);
    e
}

/// Random element of the Abelian subgroup (`e12 = e34 = 0`).
pub fn random_commuting(rng: &mut impl Rng, params: GroupParams) -> UtElement {
    let p = params.p();
    let cells = [0, rng.gen_range(0..p), rng.gen_range(0..p), rng.gen_range(0..p), rng.gen_range(0..p), 0];
    UtElement::from_cells(params, cells).unwrap()
}

type Matrix = [[u128; 4]; 4];

/// The element as an explicit 4×4 upper unitriangular matrix.
pub fn matrix(e: &UtElement) -> Matrix {
    let c = e.cells().map(u128::from);
    [
        [1, c[0], c[1], c[2]],
        [0, 1, c[3], c[4]],
        [0, 0, 1, c[5]],
        [0, 0, 0, 1],
    ]
}

/// Textbook matrix product modulo `p`.
#[allow(clippy::needless_range_loop)]
pub fn matrix_mul(a: &Matrix, b: &Matrix, p: u64) -> Matrix {
    let p = p as u128;
    let mut c = [[0u128; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut acc = 0u128;
            for k in 0..4 {
                acc = (acc + (a[i][k] % p) * (b[k][j] % p) % p) % p;
            }
            c[i][j] = acc;
        }
    }
    c
}

#[allow(clippy::needless_range_loop)]
pub fn from_matrix(params: GroupParams, m: &Matrix) -> UtElement {
    for i in 0..4 {
        assert_eq!(m[i][i], 1);
        for j in 0..i {
            assert_eq!(m[i][j], 0);
        }
    }
    let cells = [m[0][1], m[0][2], m[0][3], m[1][2], m[1][3], m[2][3]].map(|x| x as u64);
    UtElement::from_cells(params, cells).unwrap()
}

pub fn product(params: GroupParams, items: &[UtElement]) -> UtElement {
    UtElement::product(params, items).unwrap()
}

pub fn element(params: GroupParams) -> impl proptest::strategy::Strategy<Value = UtElement> {
    use proptest::prelude::*;
    prop::array::uniform6(0..params.p()).prop_map(move |c| UtElement::from_cells(params, c).unwrap())
}

pub fn commuting_element(params: GroupParams) -> impl proptest::strategy::Strategy<Value = UtElement> {
    use proptest::prelude::*;
    prop::array::uniform4(0..params.p())
        .prop_map(move |[a, b, c, d]| UtElement::from_cells(params, [0, a, b, c, d, 0]).unwrap())
}

/// Any official version, or the test group at p = 5.
pub fn any_params() -> impl proptest::strategy::Strategy<Value = GroupParams> {
    use proptest::prelude::*;
    prop_oneof![
        Just(GroupParams::UT32),
        Just(GroupParams::UT40),
        Just(GroupParams::UT64),
        Just(GroupParams::test(5).unwrap()),
        Just(GroupParams::test(65521).unwrap()),
    ]
}
