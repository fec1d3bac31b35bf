//! Original elements generated from content with BLAKE3.

use num_bigint::BigUint;

use crate::group::{GroupParams, UtElement};

/// Truncated BLAKE3 hash of some content, read as a little-endian integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContentHash {
    bytes: Vec<u8>,
    value: BigUint,
}

impl ContentHash {
    /// Number of value bits kept for a group: `6·bits(p) − 1`
    /// (239 for ut40.4).
    pub fn bit_len(params: GroupParams) -> u64 {
        6 * (64 - params.p().leading_zeros() as u64) - 1
    }

    pub fn new(content: &[u8], params: GroupParams) -> Self {
        let bits = Self::bit_len(params);
        let mut bytes = vec![0u8; bits.div_ceil(8) as usize];
        blake3::Hasher::new()
            .update(content)
            .finalize_xof()
            .fill(&mut bytes);
        Self::from_truncated(bytes, bits)
    }

    fn from_truncated(bytes: Vec<u8>, bits: u64) -> Self {
        let mut value = BigUint::from_bytes_le(&bytes);
        let extra = bytes.len() as u64 * 8 - bits;
        for b in 0..extra {
            value.set_bit(bits + b, false);
        }
        ContentHash { bytes, value }
    }

    /// The truncated hash bytes, before clearing the excess high bits.
    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }
}

/// Value element: hash value reduced modulo `p^4`, so it always commutes
/// with other value elements.
pub fn gen_value_element(content: &[u8], params: GroupParams) -> UtElement {
    value_from_hash(&ContentHash::new(content, params), params)
}

/// Function element: always ordered (rank `>= p^4`).
pub fn gen_function_element(content: &[u8], params: GroupParams) -> UtElement {
    function_from_value(ContentHash::new(content, params).value(), params)
}

fn value_from_hash(hash: &ContentHash, params: GroupParams) -> UtElement {
    UtElement::from_rank(params, &(hash.value() % params.p_pow(4))).expect("rank below p^4")
}

/// Maps a hash value to an ordered element: values at or above `p^4` are
/// used as-is, lower ones are shifted up by `p^4`.
///
/// Test groups first reduce modulo `p^6`, since their hash width can exceed
/// the group order.
pub(crate) fn function_from_value(value: &BigUint, params: GroupParams) -> UtElement {
    let p4 = params.p_pow(4);
    let v = if params.version().is_some() {
        value.clone()
    } else {
        value % params.order()
    };
    let rank = if v < p4 { v + p4 } else { v };
    UtElement::from_rank(params, &rank).expect("hash value below p^6")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::ElementClass;
    use num_traits::One;

    #[test]
    fn widths() {
        assert_eq!(ContentHash::bit_len(GroupParams::UT40), 239);
        assert_eq!(ContentHash::bit_len(GroupParams::UT32), 191);
        assert_eq!(ContentHash::bit_len(GroupParams::UT64), 383);
        assert_eq!(ContentHash::new(b"", GroupParams::UT40).bytes().len(), 30);
        assert_eq!(ContentHash::new(b"", GroupParams::UT64).bytes().len(), 48);
        for params in [GroupParams::UT32, GroupParams::UT40, GroupParams::UT64] {
            // 2^(6·bits(p) − 1) < p^6: every hash value is a valid rank.
            let bound = BigUint::one() << ContentHash::bit_len(params);
            assert!(bound < params.order());
        }
    }

    #[test]
    fn top_bit_cleared() {
        for i in 0u32..200 {
            let h = ContentHash::new(&i.to_le_bytes(), GroupParams::UT40);
            assert!(h.value().bits() <= 239);
            let mut expected = h.bytes().to_vec();
            expected[29] &= 0x7f;
            assert_eq!(h.value(), &BigUint::from_bytes_le(&expected));
        }
    }

    #[test]
    fn empty_content_golden() {
        // BLAKE3("") = af1349b9f5f9a1a6a0404dea36dcc9499bcb25c9adc112b7cc9a93cae41f3262
        let h = ContentHash::new(b"", GroupParams::UT40);
        assert_eq!(
            h.bytes(),
            &[
                0xaf, 0x13, 0x49, 0xb9, 0xf5, 0xf9, 0xa1, 0xa6, 0xa0, 0x40, 0x4d, 0xea, 0x36,
                0xdc, 0xc9, 0x49, 0x9b, 0xcb, 0x25, 0xc9, 0xad, 0xc1, 0x12, 0xb7, 0xcc, 0x9a,
                0x93, 0xca, 0xe4, 0x1f
            ]
        );
    }

    #[test]
    fn function_nudge_seam() {
        let params = GroupParams::UT40;
        let p4 = params.p_pow(4);
        let low = BigUint::from(123_456u32);
        assert_eq!(function_from_value(&low, params).rank(), &low + &p4);
        let high = &p4 + 7u32;
        assert_eq!(function_from_value(&high, params).rank(), high);
    }

    #[test]
    fn classes() {
        for i in 0u32..500 {
            let c = i.to_be_bytes();
            assert!(gen_value_element(&c, GroupParams::UT40).classify().is_commuting());
            assert_eq!(
                gen_function_element(&c, GroupParams::UT40).classify(),
                ElementClass::Ordered
            );
        }
        let t = GroupParams::test(5).unwrap();
        assert_eq!(gen_function_element(b"f", t).classify(), ElementClass::Ordered);
        assert!(gen_value_element(b"x", t).classify().is_commuting());
    }
}
