//! Textual digests.
//!
//! A digest is `L` characters over a 64-symbol URI-safe alphabet, written
//! little-endian (most significant digit on the right). The position of the
//! `_` placeholder marks the element class:
//!
//! | class    | layout                                                     |
//! |----------|------------------------------------------------------------|
//! | identity | `0` × L                                                    |
//! | center   | hex `h0`, `_`, hex `h1..h(L/4-1)`, `_`, `0` padding         |
//! | hybrid   | two base-64 digits of `v mod 4096`, `_`, L−3 hex digits of `v / 4096` |
//! | ordered  | L base-64 digits of the rank                               |
//!
//! Hexadecimal text is valid base-64 text, so legacy hexdigests can be
//! imported as either commuting or ordered elements.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::gen;
use crate::group::{ElementClass, GroupParams, UtElement};

pub const ALPHABET: &[u8; 64] =
    b"0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ-.";
pub const PLACEHOLDER: u8 = b'_';

/// Number of leading `-` in removal identifiers.
const REMOVAL_PREFIX: usize = 20;

/// Frame length used for key conversion in test groups, which have no
/// digest length of their own.
const TEST_KEY_FRAME_LEN: usize = 40;

/// Digit value of `c` in the 64-symbol alphabet.
pub fn digit_value(c: u8) -> Option<u8> {
    match c {
        b'0'..=b'9' => Some(c - b'0'),
        b'a'..=b'z' => Some(c - b'a' + 10),
        b'A'..=b'Z' => Some(c - b'A' + 36),
        b'-' => Some(62),
        b'.' => Some(63),
        _ => None,
    }
}

fn digit_in_base(c: u8, base: u8) -> Option<u8> {
    digit_value(c).filter(|&d| d < base)
}

/// `n` little-endian digits of `v`, or `None` when `v` needs more.
fn digits_le(v: &BigUint, base: u32, n: usize) -> Option<Vec<u8>> {
    let mut digits = if v.is_zero() {
        Vec::new()
    } else {
        v.to_radix_le(base)
    };
    if digits.len() > n {
        return None;
    }
    digits.resize(n, 0);
    Some(digits)
}

fn render(digits: &[u8]) -> impl Iterator<Item = char> + '_ {
    digits.iter().map(|&d| ALPHABET[d as usize] as char)
}

/// Canonical textual identifier of an element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Digest(String);

impl Digest {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Digest {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

fn digest_len(params: GroupParams) -> Result<usize> {
    params
        .digest_len()
        .ok_or_else(|| Error::NoDigestSupport(params.name()))
}

pub fn encode(a: &UtElement) -> Result<Digest> {
    let params = a.params();
    let len = digest_len(params)?;
    let rank = a.rank();
    let mut text = String::with_capacity(len);
    match a.classify() {
        ElementClass::Identity => text.extend(std::iter::repeat_n('0', len)),
        ElementClass::Center => {
            let h = digits_le(&rank, 16, len / 4).expect("center rank below p");
            text.extend(render(&h[..1]));
            text.push('_');
            text.extend(render(&h[1..]));
            text.push('_');
            let pad = len - text.len();
            text.extend(std::iter::repeat_n('0', pad));
        }
        ElementClass::Hybrid => {
            let q = (&rank % 4096u32).to_u32().expect("below 4096");
            text.extend(render(&[(q % 64) as u8, (q / 64) as u8]));
            text.push('_');
            let h = digits_le(&(rank >> 12u32), 16, len - 3).expect("hybrid rank below p^4");
            text.extend(render(&h));
        }
        ElementClass::Ordered => {
            let d = digits_le(&rank, 64, len).expect("rank below p^6 fits L base-64 digits");
            text.extend(render(&d));
        }
    }
    debug_assert_eq!(text.len(), len);
    Ok(Digest(text))
}

fn non_canonical(text: &str, why: impl fmt::Display) -> Error {
    Error::NonCanonical(format!("{text:?}: {why}"))
}

fn parse_region(text: &str, bytes: &[u8], offset: usize, base: u8) -> Result<Vec<u8>> {
    bytes
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            digit_in_base(c, base).ok_or_else(|| {
                non_canonical(
                    text,
                    format_args!(
                        "symbol {:?} at {} is not a base-{base} digit",
                        c as char,
                        offset + i
                    ),
                )
            })
        })
        .collect()
}

/// Parses a canonical digest. Every element has exactly one accepted text.
pub fn decode(text: &str, params: GroupParams) -> Result<UtElement> {
    let len = digest_len(params)?;
    let bytes = text.as_bytes();
    if bytes.len() != len {
        return Err(non_canonical(
            text,
            format_args!("expected {len} characters, got {}", text.chars().count()),
        ));
    }
    let holes: Vec<usize> = bytes
        .iter()
        .enumerate()
        .filter(|(_, &c)| c == PLACEHOLDER)
        .map(|(i, _)| i)
        .collect();
    let p = BigUint::from(params.p());
    let p4 = params.p_pow(4);
    let (rank, class) = if holes.is_empty() {
        let d = parse_region(text, bytes, 0, 64)?;
        let v = BigUint::from_radix_le(&d, 64).expect("digits below 64");
        if !v.is_zero() && v < p4 {
            return Err(non_canonical(text, "commuting rank in ordered layout"));
        }
        if v >= params.order() {
            return Err(non_canonical(text, "rank not below p^6"));
        }
        (v, None)
    } else if holes == [1, len / 4 + 1] {
        let h0 = parse_region(text, &bytes[..1], 0, 16)?;
        let rest = parse_region(text, &bytes[2..len / 4 + 1], 2, 16)?;
        if bytes[len / 4 + 2..].iter().any(|&c| c != b'0') {
            return Err(non_canonical(text, "center padding must be '0'"));
        }
        let digits: Vec<u8> = h0.into_iter().chain(rest).collect();
        let v = BigUint::from_radix_le(&digits, 16).expect("hex digits");
        if v.is_zero() || v >= p {
            return Err(non_canonical(text, "center layout rank outside [1, p)"));
        }
        (v, Some(ElementClass::Center))
    } else if holes == [2] {
        let q = parse_region(text, &bytes[..2], 0, 64)?;
        let h = parse_region(text, &bytes[3..], 3, 16)?;
        let high = BigUint::from_radix_le(&h, 16).expect("hex digits");
        let v = (high << 12u32) + (q[0] as u32 + 64 * q[1] as u32);
        if v < p || v >= p4 {
            return Err(non_canonical(text, "hybrid layout rank outside [p, p^4)"));
        }
        (v, Some(ElementClass::Hybrid))
    } else {
        return Err(non_canonical(text, "placeholder in unexpected position"));
    };
    let element = UtElement::from_rank(params, &rank)?;
    debug_assert!(class.is_none_or(|c| c == element.classify()));
    Ok(element)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LegacyBase {
    Hex,
    Base62,
}

impl LegacyBase {
    pub fn radix(self) -> u8 {
        match self {
            LegacyBase::Hex => 16,
            LegacyBase::Base62 => 62,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImportMode {
    /// Rank `p^4 + v`: an order-sensitive element.
    Ordered,
    /// Rank `v mod p^4`: a member of the Abelian subgroup.
    Commuting,
}

/// Imports a legacy base-16 or base-62 identifier.
pub fn import_legacy(
    text: &str,
    base: LegacyBase,
    mode: ImportMode,
    params: GroupParams,
) -> Result<UtElement> {
    let len = digest_len(params)?;
    if text.is_empty() {
        return Err(Error::EmptyInput);
    }
    if text.len() > len {
        return Err(Error::TooLong {
            len: text.len(),
            max: len,
        });
    }
    let digits = text
        .bytes()
        .enumerate()
        .map(|(position, c)| {
            digit_in_base(c, base.radix()).ok_or(Error::InvalidSymbol {
                symbol: c as char,
                position,
            })
        })
        .collect::<Result<Vec<u8>>>()?;
    let v = BigUint::from_radix_le(&digits, base.radix() as u32).expect("validated digits");
    let p4 = params.p_pow(4);
    let rank = match mode {
        ImportMode::Commuting => v % p4,
        ImportMode::Ordered => p4 + v,
    };
    UtElement::from_rank(params, &rank)
}

/// Reserved identifiers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reserved {
    /// `ρ`, the anchor of the multi-output factorization.
    Rho,
    /// `θ_i`, the `i`-th successor of `ρ`, `0 <= i <= 62`.
    Theta(usize),
    /// Removal of the value at a 1-based tuple position.
    RemovalIndex(u64),
    /// Removal of the value stored under a map key.
    RemovalName(String),
}

pub const MAX_THETA: usize = 62;

impl Reserved {
    fn removal_token(&self) -> Option<String> {
        match self {
            Reserved::RemovalIndex(i) => Some(i.to_string()),
            Reserved::RemovalName(n) => Some(n.clone()),
            _ => None,
        }
    }

    fn validate(&self, len: usize) -> Result<()> {
        match self {
            Reserved::Rho => Ok(()),
            Reserved::Theta(i) if *i > MAX_THETA => Err(Error::ThetaExhausted(*i)),
            Reserved::Theta(_) => Ok(()),
            Reserved::RemovalIndex(0) => Err(Error::InvalidToken("removal index 0".into())),
            Reserved::RemovalIndex(i) => {
                let n = i.to_string().len();
                if n > len - REMOVAL_PREFIX {
                    return Err(Error::InvalidToken(format!("removal index {i} too long")));
                }
                Ok(())
            }
            Reserved::RemovalName(name) => {
                let ok = !name.is_empty()
                    && name.len() < len - REMOVAL_PREFIX
                    && name.bytes().all(|c| c.is_ascii_alphanumeric());
                if ok {
                    Ok(())
                } else {
                    Err(Error::InvalidToken(format!("removal name {name:?}")))
                }
            }
        }
    }
}

/// Digest text of a reserved identifier for an official version.
pub fn reserved_digest(kind: &Reserved, params: GroupParams) -> Result<Digest> {
    let len = digest_len(params)?;
    kind.validate(len)?;
    let text = match kind {
        Reserved::Rho => "-".repeat(len - 1) + "0",
        Reserved::Theta(i) => "-".repeat(len - 1) + &(ALPHABET[i + 1] as char).to_string(),
        _ => {
            let token = kind.removal_token().expect("removal kind");
            format!(
                "{}{}{}",
                "-".repeat(REMOVAL_PREFIX),
                ".".repeat(len - REMOVAL_PREFIX - token.len()),
                token
            )
        }
    };
    Ok(Digest(text))
}

/// The element of a reserved identifier.
///
/// Test groups have no digests; there `ρ` has rank `p^4`, `θ_i` rank
/// `p^4 + 1 + i`, and removal identifiers are function elements generated
/// from the bytes `removal:<token>`.
pub fn reserved(kind: &Reserved, params: GroupParams) -> Result<UtElement> {
    if params.digest_len().is_some() {
        let digest = reserved_digest(kind, params)?;
        return decode(digest.as_str(), params);
    }
    kind.validate(TEST_KEY_FRAME_LEN)?;
    let p4 = params.p_pow(4);
    match kind {
        Reserved::Rho => UtElement::from_rank(params, &p4),
        Reserved::Theta(i) => UtElement::from_rank(params, &(p4 + 1u32 + *i)),
        _ => {
            let token = kind.removal_token().expect("removal kind");
            Ok(gen::gen_function_element(
                format!("removal:{token}").as_bytes(),
                params,
            ))
        }
    }
}

pub fn max_key_len(frame_len: usize) -> usize {
    2 + (frame_len - 3) / 2
}

/// The hybrid-layout character frame a map key is converted to.
pub fn key_frame(key: &str, frame_len: usize) -> Result<String> {
    let max = max_key_len(frame_len);
    if key.is_empty() || key.len() > max || !key.bytes().all(|c| c.is_ascii_alphanumeric()) {
        return Err(Error::InvalidToken(format!(
            "key {key:?} must be 1..={max} ASCII alphanumerics"
        )));
    }
    let mut frame = String::with_capacity(frame_len);
    if key.len() == 1 {
        frame.push_str(key);
        frame.push('-');
    } else {
        frame.push_str(&key[..2]);
        for b in key[2..].bytes() {
            frame.push_str(&format!("{b:02x}"));
        }
    }
    frame.insert(2, '_');
    let pad = frame_len - frame.len();
    frame.extend(std::iter::repeat_n('0', pad));
    Ok(frame)
}

/// Identifier of a map key. Always lands in the hybrid interval so the key
/// survives lifting as a non-central element.
pub fn key_element(key: &str, params: GroupParams) -> Result<UtElement> {
    let frame_len = params.digest_len().unwrap_or(TEST_KEY_FRAME_LEN);
    let frame = key_frame(key, frame_len)?;
    let bytes = frame.as_bytes();
    let low: u32 = bytes[..2]
        .iter()
        .rev()
        .fold(0, |acc, &c| acc * 64 + digit_value(c).expect("frame symbol") as u32);
    let hex: Vec<u8> = bytes[3..]
        .iter()
        .map(|&c| digit_in_base(c, 16).expect("frame hex"))
        .collect();
    let raw = (BigUint::from_radix_le(&hex, 16).expect("hex digits") << 12u32) + low;
    let p = BigUint::from(params.p());
    let span = params.p_pow(4) - &p;
    UtElement::from_rank(params, &(p + raw % span))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    const UT40: GroupParams = GroupParams::UT40;

    fn el(rank: &BigUint) -> UtElement {
        UtElement::from_rank(UT40, rank).unwrap()
    }

    #[test]
    fn alphabet_indices() {
        for (i, &c) in ALPHABET.iter().enumerate() {
            assert_eq!(digit_value(c), Some(i as u8));
        }
        assert_eq!(digit_value(b'-'), Some(62));
        assert_eq!(digit_value(b'.'), Some(63));
        assert_eq!(digit_value(b'_'), None);
    }

    #[test]
    fn encode_examples() {
        assert_eq!(
            encode(&UtElement::identity(UT40)).unwrap().as_str(),
            "0".repeat(40)
        );
        assert_eq!(
            encode(&el(&BigUint::one())).unwrap().as_str(),
            format!("1_000000000_{}", "0".repeat(28))
        );
        let p = BigUint::from(UT40.p());
        assert_eq!(
            encode(&el(&p)).unwrap().as_str(),
            format!("F-_fffffff{}", "0".repeat(30))
        );
    }

    #[test]
    fn decode_errors() {
        let zeros = "0".repeat(40);
        assert!(decode(&zeros, UT40).unwrap().is_identity());
        let mut bad_hex = format!("F-_fffffff{}", "0".repeat(30));
        bad_hex.replace_range(5..6, "z");
        assert!(matches!(decode(&bad_hex, UT40), Err(Error::NonCanonical(_))));
        let five = format!("5{}", "0".repeat(39));
        assert!(matches!(decode(&five, UT40), Err(Error::NonCanonical(_))));
        assert!(matches!(decode("abc", UT40), Err(Error::NonCanonical(_))));
        let stray = format!("000_{}", "0".repeat(36));
        assert!(matches!(decode(&stray, UT40), Err(Error::NonCanonical(_))));
        // center layout with nonzero padding
        let pad = format!("1_000000000_{}1", "0".repeat(27));
        assert!(matches!(decode(&pad, UT40), Err(Error::NonCanonical(_))));
        // center layout holding zero
        let zero_center = format!("0_000000000_{}", "0".repeat(28));
        assert!(matches!(decode(&zero_center, UT40), Err(Error::NonCanonical(_))));
        // hybrid layout holding a center rank
        let low_hybrid = format!("10_{}", "0".repeat(37));
        assert!(matches!(decode(&low_hybrid, UT40), Err(Error::NonCanonical(_))));
        // ordered layout above p^6
        assert!(matches!(decode(&".".repeat(40), UT40), Err(Error::NonCanonical(_))));
        assert!(matches!(
            decode(&zeros, GroupParams::test(5).unwrap()),
            Err(Error::NoDigestSupport(_))
        ));
    }

    #[test]
    fn import_examples() {
        let p4 = UT40.p_pow(4);
        let f40 = "f".repeat(40);
        let all = (BigUint::one() << 160u32) - 1u32;
        let e = import_legacy(&f40, LegacyBase::Hex, ImportMode::Ordered, UT40).unwrap();
        assert_eq!(e.rank(), &p4 + &all);
        let e = import_legacy(&"0".repeat(40), LegacyBase::Hex, ImportMode::Ordered, UT40).unwrap();
        assert_eq!(e.rank(), p4);
        assert!(matches!(
            import_legacy("", LegacyBase::Hex, ImportMode::Ordered, UT40),
            Err(Error::EmptyInput)
        ));
        assert!(matches!(
            import_legacy("0g", LegacyBase::Hex, ImportMode::Ordered, UT40),
            Err(Error::InvalidSymbol { position: 1, .. })
        ));
        assert!(matches!(
            import_legacy("Z-", LegacyBase::Base62, ImportMode::Ordered, UT40),
            Err(Error::InvalidSymbol { position: 1, .. })
        ));
        assert!(matches!(
            import_legacy(&"0".repeat(41), LegacyBase::Hex, ImportMode::Ordered, UT40),
            Err(Error::TooLong { .. })
        ));
    }

    #[test]
    fn reserved_examples() {
        let rho = reserved_digest(&Reserved::Rho, UT40).unwrap();
        assert_eq!(rho.as_str(), "---------------------------------------0");
        let d2 = reserved_digest(&Reserved::RemovalIndex(2), UT40).unwrap();
        assert_eq!(d2.as_str(), format!("{}{}2", "-".repeat(20), ".".repeat(19)));
        let t0 = reserved_digest(&Reserved::Theta(0), UT40).unwrap();
        assert_eq!(t0.as_str(), format!("{}1", "-".repeat(39)));
        let t0 = reserved(&Reserved::Theta(0), UT40).unwrap();
        assert!(t0.rank() >= UT40.p_pow(4));
        assert!(matches!(
            reserved(&Reserved::Theta(63), UT40),
            Err(Error::ThetaExhausted(63))
        ));
        assert!(reserved(&Reserved::RemovalName("a".repeat(19)), UT40).is_ok());
        assert!(reserved(&Reserved::RemovalName("a".repeat(20)), UT40).is_err());
        assert!(reserved(&Reserved::RemovalName("a_b".into()), UT40).is_err());
        assert!(reserved(&Reserved::RemovalIndex(0), UT40).is_err());
    }

    #[test]
    fn reserved_elements_are_ordered_and_distinct() {
        for params in [GroupParams::UT32, GroupParams::UT40, GroupParams::UT64] {
            let mut seen = std::collections::HashSet::new();
            let mut kinds = vec![Reserved::Rho];
            kinds.extend((0..=MAX_THETA).map(Reserved::Theta));
            kinds.extend([1, 2, 9, 10, 99_999].map(Reserved::RemovalIndex));
            kinds.extend(["x", "name", "Z9"].map(|n| Reserved::RemovalName(n.into())));
            for k in kinds {
                let e = reserved(&k, params).unwrap();
                assert_eq!(e.classify(), ElementClass::Ordered, "{k:?} {params}");
                assert!(seen.insert(e.rank()), "duplicate {k:?}");
            }
        }
        let t = GroupParams::test(5).unwrap();
        assert_eq!(reserved(&Reserved::Rho, t).unwrap().rank(), BigUint::from(625u32));
        assert_eq!(
            reserved(&Reserved::Theta(3), t).unwrap().rank(),
            BigUint::from(629u32)
        );
        assert_eq!(
            reserved(&Reserved::RemovalIndex(2), t).unwrap().classify(),
            ElementClass::Ordered
        );
    }

    #[test]
    fn key_frames() {
        assert_eq!(key_frame("x", 40).unwrap(), format!("x-_{}", "0".repeat(37)));
        assert_eq!(key_frame("name", 40).unwrap(), format!("na_6d65{}", "0".repeat(33)));
        assert_eq!(key_frame("ab", 40).unwrap(), format!("ab_{}", "0".repeat(37)));
        assert_eq!(max_key_len(40), 20);
        assert!(key_frame(&"k".repeat(20), 40).is_ok());
        assert!(key_frame(&"k".repeat(21), 40).is_err());
        assert!(key_frame("", 40).is_err());
        assert!(key_frame("a-b", 40).is_err());
    }

    #[test]
    fn key_elements_are_hybrid() {
        for params in [GroupParams::UT32, GroupParams::UT40, GroupParams::UT64] {
            for key in ["a", "x", "name", "ab", "Zz09", "abcdefghijklmnop"] {
                let e = key_element(key, params).unwrap();
                assert_eq!(e.classify(), ElementClass::Hybrid, "{key} {params}");
            }
        }
        let a = key_element("a", GroupParams::test(5).unwrap()).unwrap();
        assert_eq!(a.classify(), ElementClass::Hybrid);
    }

    #[test]
    fn key_element_matches_frame_value() {
        // "x-_000…": low digits x=33, '-'=62, nothing above; raw = 33 + 64·62.
        let raw = 33u64 + 64 * 62;
        let e = key_element("x", UT40).unwrap();
        assert_eq!(e.rank(), BigUint::from(UT40.p() + raw));
    }
}
