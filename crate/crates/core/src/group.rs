//! Exact arithmetic in the group UT(4, p) of 4×4 upper unitriangular
//! matrices over the prime field of order `p`.
//!
//! An element is stored as its six above-diagonal cells
//!
//! ```text
//! | 1  e12 e13 e14 |
//! | 0   1  e23 e24 |
//! | 0   0   1  e34 |
//! | 0   0   0   1  |
//! ```
//!
//! and ranked into `[0, p^6)` by the mixed-radix map
//! `e34·p^5 + e12·p^4 + e24·p^3 + e23·p^2 + e13·p + e14`, which places the
//! center (only `e14` set) below `p` and the Abelian subgroup
//! (`e12 = e34 = 0`) below `p^4`.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The three published identifier versions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Version {
    Ut32,
    Ut40,
    Ut64,
}

impl Version {
    pub const ALL: [Version; 3] = [Version::Ut32, Version::Ut40, Version::Ut64];

    pub fn name(self) -> &'static str {
        match self {
            Version::Ut32 => "ut32.4",
            Version::Ut40 => "ut40.4",
            Version::Ut64 => "ut64.4",
        }
    }

    /// Largest prime below `2^L`.
    pub fn prime(self) -> u64 {
        match self {
            Version::Ut32 => (1u64 << 32) - 5,
            Version::Ut40 => (1u64 << 40) - 87,
            Version::Ut64 => u64::MAX - 58,
        }
    }

    pub fn digest_len(self) -> usize {
        match self {
            Version::Ut32 => 32,
            Version::Ut40 => 40,
            Version::Ut64 => 64,
        }
    }

    pub fn params(self) -> GroupParams {
        GroupParams {
            p: self.prime(),
            version: Some(self),
        }
    }
}

impl std::str::FromStr for Version {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ut32.4" => Ok(Version::Ut32),
            "ut40.4" => Ok(Version::Ut40),
            "ut64.4" => Ok(Version::Ut64),
            other => Err(Error::InvalidParams(format!("unknown version `{other}`"))),
        }
    }
}

/// Version descriptor of a group: the prime modulus and, for official
/// versions, the digest length.
///
/// Test groups use small primes (`5 <= p < 2^16`) so that every algebraic
/// claim can be checked by exhaustive enumeration. They have no digest
/// format.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupParams {
    p: u64,
    version: Option<Version>,
}

impl GroupParams {
    pub const UT32: GroupParams = GroupParams {
        p: (1u64 << 32) - 5,
        version: Some(Version::Ut32),
    };
    pub const UT40: GroupParams = GroupParams {
        p: (1u64 << 40) - 87,
        version: Some(Version::Ut40),
    };
    pub const UT64: GroupParams = GroupParams {
        p: u64::MAX - 58,
        version: Some(Version::Ut64),
    };

    pub fn test(p: u64) -> Result<Self> {
        if !(5..1 << 16).contains(&p) {
            return Err(Error::InvalidParams(format!(
                "test prime {p} outside [5, 65536)"
            )));
        }
        if !is_small_prime(p) {
            return Err(Error::InvalidParams(format!("{p} is not prime")));
        }
        Ok(GroupParams { p, version: None })
    }

    /// Parses `ut32.4`, `ut40.4`, `ut64.4` or `test:<p>`.
    pub fn from_name(name: &str) -> Result<Self> {
        if let Some(p) = name.strip_prefix("test:") {
            let p = p
                .parse()
                .map_err(|_| Error::InvalidParams(format!("bad test prime `{p}`")))?;
            return GroupParams::test(p);
        }
        Ok(name.parse::<Version>()?.params())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn version(&self) -> Option<Version> {
        self.version
    }

    pub fn digest_len(&self) -> Option<usize> {
        self.version.map(Version::digest_len)
    }

    pub fn name(&self) -> String {
        match self.version {
            Some(v) => v.name().to_owned(),
            None => format!("test:{}", self.p),
        }
    }

    /// `p^k` as an exact integer.
    pub fn p_pow(&self, k: u32) -> BigUint {
        BigUint::from(self.p).pow(k)
    }

    /// Group order `p^6`.
    pub fn order(&self) -> BigUint {
        self.p_pow(6)
    }

    #[inline]
    fn add(&self, a: u64, b: u64) -> u64 {
        let (s, carry) = a.overflowing_add(b);
        if carry || s >= self.p {
            s.wrapping_sub(self.p)
        } else {
            s
        }
    }

    #[inline]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a.wrapping_sub(b).wrapping_add(self.p)
        }
    }

    #[inline]
    fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        if self.p <= u32::MAX as u64 {
            a * b % self.p
        } else {
            ((a as u128 * b as u128) % self.p as u128) as u64
        }
    }
}

impl fmt::Display for GroupParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn is_small_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Interval class of an element's rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ElementClass {
    /// Rank 0.
    Identity,
    /// Rank in `[1, p)`: the center, commutes with everything.
    Center,
    /// Rank in `[p, p^4)`: the Abelian subgroup minus the center.
    Hybrid,
    /// Rank in `[p^4, p^6)`: order-sensitive elements.
    Ordered,
}

impl ElementClass {
    pub fn name(self) -> &'static str {
        match self {
            ElementClass::Identity => "identity",
            ElementClass::Center => "center",
            ElementClass::Hybrid => "hybrid",
            ElementClass::Ordered => "ordered",
        }
    }

    /// True for every class inside the Abelian subgroup (rank < p^4).
    pub fn is_commuting(self) -> bool {
        self != ElementClass::Ordered
    }
}

impl fmt::Display for ElementClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

// Cell indices inside `UtElement::cells`.
const E12: usize = 0;
const E13: usize = 1;
const E14: usize = 2;
const E23: usize = 3;
const E24: usize = 4;
const E34: usize = 5;

/// Cell order of the rank digits, least significant first.
const RANK_DIGITS: [usize; 6] = [E14, E13, E23, E24, E12, E34];

/// One identifier: an element of UT(4, p).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct UtElement {
    cells: [u64; 6],
    params: GroupParams,
}

impl UtElement {
    pub fn identity(params: GroupParams) -> Self {
        UtElement {
            cells: [0; 6],
            params,
        }
    }

    /// Builds an element from `[e12, e13, e14, e23, e24, e34]`.
    pub fn from_cells(params: GroupParams, cells: [u64; 6]) -> Result<Self> {
        if let Some(&bad) = cells.iter().find(|&&c| c >= params.p) {
            return Err(Error::CoordinateOutOfRange(bad));
        }
        Ok(UtElement { cells, params })
    }

    pub fn from_rank(params: GroupParams, rank: &BigUint) -> Result<Self> {
        if rank >= &params.order() {
            return Err(Error::RankOutOfRange(rank.to_string()));
        }
        let p = BigUint::from(params.p);
        let mut rest = rank.clone();
        let mut cells = [0u64; 6];
        for cell in RANK_DIGITS {
            let (q, r) = rest.div_rem(&p);
            cells[cell] = r.to_u64().expect("digit below p");
            rest = q;
        }
        Ok(UtElement { cells, params })
    }

    pub fn from_rank_u64(params: GroupParams, rank: u64) -> Result<Self> {
        Self::from_rank(params, &BigUint::from(rank))
    }

    pub fn rank(&self) -> BigUint {
        let p = BigUint::from(self.params.p);
        RANK_DIGITS
            .iter()
            .rev()
            .fold(BigUint::zero(), |acc, &cell| acc * &p + self.cells[cell])
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    /// `[e12, e13, e14, e23, e24, e34]`.
    pub fn cells(&self) -> [u64; 6] {
        self.cells
    }

    pub fn e12(&self) -> u64 {
        self.cells[E12]
    }
    pub fn e13(&self) -> u64 {
        self.cells[E13]
    }
    pub fn e14(&self) -> u64 {
        self.cells[E14]
    }
    pub fn e23(&self) -> u64 {
        self.cells[E23]
    }
    pub fn e24(&self) -> u64 {
        self.cells[E24]
    }
    pub fn e34(&self) -> u64 {
        self.cells[E34]
    }

    pub fn is_identity(&self) -> bool {
        self.cells == [0; 6]
    }

    pub fn classify(&self) -> ElementClass {
        let c = &self.cells;
        if self.is_identity() {
            ElementClass::Identity
        } else if c[E12] == 0 && c[E13] == 0 && c[E23] == 0 && c[E24] == 0 && c[E34] == 0 {
            ElementClass::Center
        } else if c[E12] == 0 && c[E34] == 0 {
            ElementClass::Hybrid
        } else {
            ElementClass::Ordered
        }
    }

    fn check_same(&self, other: &UtElement) -> Result<()> {
        if self.params != other.params {
            return Err(Error::VersionMismatch(
                self.params.name(),
                other.params.name(),
            ));
        }
        Ok(())
    }

    /// Matrix product `self · other` modulo `p`.
    pub fn multiply(&self, other: &UtElement) -> Result<UtElement> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(other))
    }

    #[inline]
    pub(crate) fn mul_unchecked(&self, b: &UtElement) -> UtElement {
        let f = &self.params;
        let a = &self.cells;
        let b = &b.cells;
        let e12 = f.add(a[E12], b[E12]);
        let e23 = f.add(a[E23], b[E23]);
        let e34 = f.add(a[E34], b[E34]);
        let e13 = f.add(f.add(a[E13], f.mul(a[E12], b[E23])), b[E13]);
        let e24 = f.add(f.add(a[E24], f.mul(a[E23], b[E34])), b[E24]);
        let e14 = f.add(
            f.add(a[E14], f.mul(a[E12], b[E24])),
            f.add(f.mul(a[E13], b[E34]), b[E14]),
        );
        UtElement {
            cells: [e12, e13, e14, e23, e24, e34],
            params: self.params,
        }
    }

    /// Closed-form inverse.
    pub fn inverse(&self) -> UtElement {
        let f = &self.params;
        let a = &self.cells;
        let e12 = f.neg(a[E12]);
        let e23 = f.neg(a[E23]);
        let e34 = f.neg(a[E34]);
        let e13 = f.sub(f.mul(a[E12], a[E23]), a[E13]);
        let e24 = f.sub(f.mul(a[E23], a[E34]), a[E24]);
        // -a14 + a12·a24 + a13·a34 - a12·a23·a34
        let e14 = f.sub(
            f.add(f.mul(a[E12], a[E24]), f.mul(a[E13], a[E34])),
            f.add(a[E14], f.mul(f.mul(a[E12], a[E23]), a[E34])),
        );
        UtElement {
            cells: [e12, e13, e14, e23, e24, e34],
            params: self.params,
        }
    }

    /// `self^n` by square-and-multiply.
    pub fn pow(&self, n: &BigUint) -> UtElement {
        let mut acc = UtElement::identity(self.params);
        for i in (0..n.bits()).rev() {
            acc = acc.mul_unchecked(&acc);
            if n.bit(i) {
                acc = acc.mul_unchecked(self);
            }
        }
        acc
    }

    pub fn pow_u64(&self, n: u64) -> UtElement {
        self.pow(&BigUint::from(n))
    }

    pub fn commutes(&self, other: &UtElement) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.commutes_unchecked(other))
    }

    #[inline]
    pub(crate) fn commutes_unchecked(&self, other: &UtElement) -> bool {
        self.mul_unchecked(other) == other.mul_unchecked(self)
    }

    /// Swaps cells `e12` and `e23`. Maps the Abelian subgroup onto the
    /// non-commutative subgroup `e23 = e34 = 0`; its own inverse.
    pub fn lift(&self) -> UtElement {
        let mut cells = self.cells;
        cells.swap(E12, E23);
        UtElement {
            cells,
            params: self.params,
        }
    }

    pub fn unlift(&self) -> UtElement {
        self.lift()
    }

    /// Smallest `n >= 1` with `self^n = identity`.
    ///
    /// Every non-trivial element of UT(4, p) has order `p` once `p >= 5`;
    /// official versions return it directly, test groups count it.
    pub fn order(&self) -> BigUint {
        if self.is_identity() {
            return BigUint::one();
        }
        if self.params.version.is_some() {
            return BigUint::from(self.params.p);
        }
        let mut acc = *self;
        let mut n = 1u64;
        while !acc.is_identity() {
            acc = acc.mul_unchecked(self);
            n += 1;
        }
        BigUint::from(n)
    }

    /// Left-to-right product. Empty input gives the identity.
    pub fn product<'a, I>(params: GroupParams, elements: I) -> Result<UtElement>
    where
        I: IntoIterator<Item = &'a UtElement>,
    {
        elements
            .into_iter()
            .try_fold(UtElement::identity(params), |acc, e| acc.multiply(e))
    }
}

impl Mul for UtElement {
    type Output = UtElement;

    /// Panics when the operands come from different versions; use
    /// [`UtElement::multiply`] for a fallible product.
    fn mul(self, rhs: UtElement) -> UtElement {
        self.multiply(&rhs).expect("multiplying elements of different versions")
    }
}

impl Mul<&UtElement> for &UtElement {
    type Output = UtElement;

    fn mul(self, rhs: &UtElement) -> UtElement {
        self.multiply(rhs).expect("multiplying elements of different versions")
    }
}

impl fmt::Debug for UtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UtElement[{}](rank {})", self.params, self.rank())
    }
}
