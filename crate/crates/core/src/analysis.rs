//! Robustness figures of candidate identifier groups.
//!
//! Probabilities and gaps are kept as exact ratios of big integers and only
//! converted to `f64` for display; a gap such as `1 − p^6/2^240` would
//! vanish under naive floating-point subtraction.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::group::{GroupParams, UtElement, Version};

/// An exact rational `num / den` with `den > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ratio {
    pub num: BigInt,
    pub den: BigUint,
}

impl Ratio {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigUint>) -> Self {
        let den = den.into();
        assert!(!den.is_zero(), "zero denominator");
        Ratio {
            num: num.into(),
            den,
        }
    }

    pub fn to_f64(&self) -> f64 {
        let (sign, mag) = (self.num.sign(), self.num.magnitude());
        if mag.is_zero() {
            return 0.0;
        }
        // Scale so the integer quotient carries ~64 significant bits.
        let shift = self.den.bits() as i64 - mag.bits() as i64 + 64;
        let q = if shift >= 0 {
            (mag << shift as u64) / &self.den
        } else {
            mag / (&self.den << (-shift) as u64)
        };
        let v = q.to_f64().expect("finite quotient") * 2f64.powi(-shift as i32);
        if sign == Sign::Minus {
            -v
        } else {
            v
        }
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.3e}", self.to_f64())
    }
}

/// Commuting probability of UT(4, p): `(2p³ + p² − 2p) / p⁶`.
pub fn commuting_probability_ut(p: u64) -> Ratio {
    let p = BigUint::from(p);
    let classes = BigUint::from(2u32) * p.pow(3) + p.pow(2) - BigUint::from(2u32) * &p;
    Ratio::new(classes, p.pow(6))
}

/// Compatibility gap `1 − order·2^(−β)`; negative when the group does not
/// fit in `β` bits.
pub fn compatibility_gap(order: &BigUint, beta: u32) -> Ratio {
    let space = BigUint::one() << beta;
    Ratio::new(BigInt::from(space.clone()) - BigInt::from(order.clone()), space)
}

/// `C(l+1, 3)`: explicit and implicit operations in an expression of
/// length `l`.
pub fn operations_in_expression(l: u64) -> BigUint {
    let n = BigUint::from(l) + 1u32;
    if n < BigUint::from(3u32) {
        return BigUint::zero();
    }
    &n * (&n - 1u32) * (&n - 2u32) / 6u32
}

/// Probability that a random expression of length `l` is ambiguous:
/// `min(1, P_c·C(l+1, 3))`.
pub fn ambiguity_probability(pc: f64, l: u64) -> f64 {
    let ops = operations_in_expression(l).to_f64().unwrap_or(f64::INFINITY);
    (pc * ops).min(1.0)
}

/// Expected number of random expressions of length `l` sampled before the
/// first ambiguous one: `log_{1−P_m} 0.5`. Infinite when `P_m = 0`, and 1
/// when `P_m = 1`.
pub fn expected_expressions(pc: f64, l: u64) -> f64 {
    let pm = ambiguity_probability(pc, l);
    if pm <= 0.0 {
        f64::INFINITY
    } else if pm >= 1.0 {
        1.0
    } else {
        0.5f64.ln() / (-pm).ln_1p()
    }
}

/// Number of uniformly random `bits`-bit hashes after which a collision is
/// more likely than not, from `P_n ≈ 1 − exp((n − n²) / 2^(bits+1))`.
pub fn birthday_bound(bits: u32) -> f64 {
    let threshold = 2f64.powi(bits as i32 + 1) * std::f64::consts::LN_2;
    ((1.0 + (1.0 + 4.0 * threshold).sqrt()) / 2.0).ceil()
}

/// Probability that two random `bits`-bit hashes coincide.
pub fn pair_collision_probability(bits: u32) -> f64 {
    2f64.powi(-(bits as i32))
}

/// A finite group family from the comparison table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupFamily {
    Symmetric(u32),
    Alternating(u32),
    /// Dihedral group of order `2n`.
    Dihedral(BigUint),
    GeneralLinear { n: u32, q: u64 },
    SpecialLinear { n: u32, q: u64 },
    /// Direct product of iterated wreath products `W_{k,p}`.
    WreathProduct(Vec<(u32, u64)>),
    Ut4(u64),
}

fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

fn general_linear_order(n: u32, q: u64) -> BigUint {
    let q = BigUint::from(q);
    let qn = q.pow(n);
    (0..n).fold(BigUint::one(), |acc, i| acc * (&qn - q.pow(i)))
}

impl GroupFamily {
    pub fn order(&self) -> BigUint {
        match self {
            GroupFamily::Symmetric(n) => factorial(*n),
            GroupFamily::Alternating(n) => factorial(*n) / 2u32,
            GroupFamily::Dihedral(n) => n * 2u32,
            GroupFamily::GeneralLinear { n, q } => general_linear_order(*n, *q),
            GroupFamily::SpecialLinear { n, q } => general_linear_order(*n, *q) / (q - 1),
            GroupFamily::WreathProduct(factors) => {
                factors.iter().fold(BigUint::one(), |acc, &(k, p)| {
                    // |W_{k,p}| = p^((p^k − 1)/(p − 1))
                    let exponent = (p.pow(k) - 1) / (p - 1);
                    acc * BigUint::from(p).pow(exponent as u32)
                })
            }
            GroupFamily::Ut4(p) => BigUint::from(*p).pow(6),
        }
    }

    /// Minimum order of a non-trivial element, where known.
    pub fn min_element_order(&self) -> u64 {
        match self {
            GroupFamily::Ut4(p) => *p,
            GroupFamily::WreathProduct(factors) => {
                factors.iter().map(|&(_, p)| p).min().unwrap_or(1)
            }
            _ => 2,
        }
    }

    pub fn label(&self) -> String {
        match self {
            GroupFamily::Symmetric(n) => format!("S_{n}"),
            GroupFamily::Alternating(n) => format!("A_{n}"),
            GroupFamily::Dihedral(n) => {
                let order = n * 2u32;
                if order.count_ones() == 1 {
                    format!("D_{{2^{}}}", order.bits() - 1)
                } else {
                    format!("D_{order}")
                }
            }
            GroupFamily::GeneralLinear { n, q } => format!("GL({n},{q})"),
            GroupFamily::SpecialLinear { n, q } => format!("SL({n},{q})"),
            GroupFamily::WreathProduct(factors) => factors
                .iter()
                .map(|(k, p)| format!("W_{{{k},{p}}}"))
                .collect::<Vec<_>>()
                .join("×"),
            GroupFamily::Ut4(p) => match Version::ALL.iter().find(|v| v.prime() == *p) {
                Some(v) => format!("UT(4,{})", v.name()),
                None => format!("UT(4,{p})"),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table1Row {
    pub family: GroupFamily,
    pub order: BigUint,
    pub beta: u32,
    pub gap: Ratio,
    /// Only reported for the UT rows.
    pub commuting_probability: Option<Ratio>,
    pub min_element_order: u64,
}

/// Order-derived columns of the comparison of candidate groups. Every row
/// uses `beta` bits except UT(4, 2^40−87), which is always measured against
/// its 240-bit digest space.
pub fn table1_report(beta: u32) -> Vec<Table1Row> {
    let families = vec![
        (GroupFamily::Symmetric(46), beta),
        (GroupFamily::Alternating(46), beta),
        (GroupFamily::Dihedral(BigUint::one() << 191u32), beta),
        (GroupFamily::GeneralLinear { n: 3, q: 2_642_239 }, beta),
        (GroupFamily::GeneralLinear { n: 4, q: 4093 }, beta),
        (GroupFamily::SpecialLinear { n: 3, q: 16_777_213 }, beta),
        (GroupFamily::SpecialLinear { n: 4, q: 7129 }, beta),
        (GroupFamily::WreathProduct(vec![(2, 7), (2, 13), (2, 23)]), beta),
        (GroupFamily::Ut4(Version::Ut32.prime()), beta),
        (GroupFamily::Ut4(Version::Ut40.prime()), 240),
    ];
    families
        .into_iter()
        .map(|(family, beta)| {
            let order = family.order();
            let commuting_probability = match family {
                GroupFamily::Ut4(p) => Some(commuting_probability_ut(p)),
                _ => None,
            };
            Table1Row {
                gap: compatibility_gap(&order, beta),
                min_element_order: family.min_element_order(),
                family,
                order,
                beta,
                commuting_probability,
            }
        })
        .collect()
}

fn fmt_sci(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.is_infinite() {
        "unbounded".into()
    } else {
        format!("{v:.3e}")
    }
}

pub fn render_table1_text(rows: &[Table1Row]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<28} {:>5} {:>12} {:>12} {:>22}",
        "group", "beta", "gap", "P_c", "min order"
    );
    for row in rows {
        let _ = writeln!(
            out,
            "{:<28} {:>5} {:>12} {:>12} {:>22}",
            row.family.label(),
            row.beta,
            fmt_sci(row.gap.to_f64()),
            row.commuting_probability
                .as_ref()
                .map_or("n/a".into(), |r| fmt_sci(r.to_f64())),
            row.min_element_order
        );
    }
    out
}

pub fn render_table1_tsv(rows: &[Table1Row]) -> String {
    let mut out = String::from("group\torder\tbeta\tgap\tcommuting_probability\tmin_order\n");
    for row in rows {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{:e}\t{}\t{}",
            row.family.label(),
            row.order,
            row.beta,
            row.gap.to_f64(),
            row.commuting_probability
                .as_ref()
                .map_or("n/a".into(), |r| format!("{:e}", r.to_f64())),
            row.min_element_order
        );
    }
    out
}

/// Ambiguity figures at one expression length.
#[derive(Clone, Debug, PartialEq)]
pub struct LengthFigures {
    pub length: u64,
    pub ambiguity_probability: f64,
    pub expected_expressions: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RobustnessReport {
    pub version: Version,
    pub commuting_probability: Ratio,
    pub beta: u32,
    pub gap: Ratio,
    pub min_element_order: u64,
    pub lengths: Vec<LengthFigures>,
}

pub fn robustness_report(version: Version, beta: Option<u32>, lengths: &[u64]) -> RobustnessReport {
    let params = version.params();
    let beta = beta.unwrap_or(6 * version.digest_len() as u32);
    let pc = commuting_probability_ut(params.p());
    let pc_f = pc.to_f64();
    RobustnessReport {
        version,
        beta,
        gap: compatibility_gap(&params.order(), beta),
        min_element_order: params.p(),
        lengths: lengths
            .iter()
            .map(|&length| LengthFigures {
                length,
                ambiguity_probability: ambiguity_probability(pc_f, length),
                expected_expressions: expected_expressions(pc_f, length),
            })
            .collect(),
        commuting_probability: pc,
    }
}

impl RobustnessReport {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "version            {}", self.version.name());
        let _ = writeln!(out, "P_c                {}", fmt_sci(self.commuting_probability.to_f64()));
        let _ = writeln!(out, "gap (beta={:<3})     {}", self.beta, fmt_sci(self.gap.to_f64()));
        let _ = writeln!(out, "min element order  {}", self.min_element_order);
        for l in &self.lengths {
            let _ = writeln!(
                out,
                "length {:<11} P_m {}  expressions before ambiguity {}",
                l.length,
                fmt_sci(l.ambiguity_probability),
                fmt_sci(l.expected_expressions)
            );
        }
        out
    }

    pub fn render_tsv(&self) -> String {
        let mut out = String::from("key\tvalue\n");
        let _ = writeln!(out, "version\t{}", self.version.name());
        let _ = writeln!(out, "commuting_probability\t{:e}", self.commuting_probability.to_f64());
        let _ = writeln!(out, "beta\t{}", self.beta);
        let _ = writeln!(out, "gap\t{:e}", self.gap.to_f64());
        let _ = writeln!(out, "min_element_order\t{}", self.min_element_order);
        for l in &self.lengths {
            let _ = writeln!(out, "ambiguity_probability[{}]\t{:e}", l.length, l.ambiguity_probability);
            let _ = writeln!(out, "expected_expressions[{}]\t{:e}", l.length, l.expected_expressions);
        }
        out
    }
}

/// Exhaustive facts about a small group UT(4, p).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub p: u64,
    /// Element order → number of elements with that order.
    pub order_histogram: BTreeMap<u64, u64>,
    /// Number of ordered pairs `(a, b)` with `ab = ba`, i.e. `Σ_a |C(a)|`.
    pub commuting_pairs: u128,
}

pub const MAX_CENSUS_PRIME: u64 = 13;

/// Rank of a 3×5 matrix over F_p by Gaussian elimination.
#[allow(clippy::needless_range_loop)]
fn rank_mod_p(mut m: [[u64; 5]; 3], p: u64) -> u32 {
    let inv = |a: u64| {
        // Fermat inverse; p is a small prime.
        let (mut base, mut e, mut acc) = (a % p, p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc
    };
    let mut rank = 0;
    for col in 0..5 {
        let Some(pivot) = (rank..3).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let scale = inv(m[rank][col]);
        for c in 0..5 {
            m[rank][c] = m[rank][c] * scale % p;
        }
        for r in 0..3 {
            if r != rank && m[r][col] != 0 {
                let factor = m[r][col];
                for c in 0..5 {
                    m[r][c] = (m[r][c] + p * p - factor * m[rank][c]) % p;
                }
            }
        }
        rank += 1;
        if rank == 3 {
            break;
        }
    }
    rank as u32
}

/// `|C(a)|`: `ab = ba` is linear in `b`'s cells `(b12, b13, b23, b24, b34)`
/// (three equations) and leaves `b14` free.
fn centralizer_size(a: &UtElement) -> u128 {
    let p = a.params().p();
    let neg = |x: u64| (p - x) % p;
    let m = [
        // a12·b23 − a23·b12
        [neg(a.e23()), 0, a.e12(), 0, 0],
        // a23·b34 − a34·b23
        [0, 0, neg(a.e34()), 0, a.e23()],
        // a12·b24 + a13·b34 − a24·b12 − a34·b13
        [neg(a.e24()), neg(a.e34()), 0, a.e12(), a.e13()],
    ];
    (p as u128).pow(6 - rank_mod_p(m, p))
}

/// Enumerates all `p^6` elements of UT(4, p) for `p <= 13`: element orders
/// by repeated multiplication, commuting pairs by solving each centralizer.
pub fn empirical_census(p: u64) -> Result<Census> {
    if p > MAX_CENSUS_PRIME {
        return Err(Error::RefusedSize(p));
    }
    let params = GroupParams::test(p)?;
    let mut order_histogram = BTreeMap::new();
    let mut commuting_pairs = 0u128;
    for rank in 0..p.pow(6) {
        let a = UtElement::from_rank_u64(params, rank)?;
        let mut acc = a;
        let mut order = 1;
        while !acc.is_identity() {
            acc = acc.mul_unchecked(&a);
            order += 1;
        }
        *order_histogram.entry(order).or_insert(0) += 1;
        commuting_pairs += centralizer_size(&a);
    }
    Ok(Census {
        p,
        order_histogram,
        commuting_pairs,
    })
}
