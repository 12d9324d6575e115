//! Phone number ⇄ community address mapping.
//!
//! A ten-digit number is split into five two-digit groups. The first group is
//! the trunk prefix shared by every number in the plan and is dropped; the
//! second group is offset by 128 to form the first octet and the remaining
//! three groups become the other octets verbatim:
//!
//! ```text
//! 07 73 03 14 70  ->  (128+73).3.14.70  =  201.3.14.70
//! ```

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

const FIRST_OCTET_OFFSET: u8 = 128;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AddressError {
    #[error("invalid phone number {number:?}: {reason}")]
    InvalidNumber { number: String, reason: String },
    #[error("{0} is not a community address: {1}")]
    NotCommunityAddress(String, &'static str),
}

fn invalid(number: &str, reason: impl Into<String>) -> AddressError {
    AddressError::InvalidNumber {
        number: number.to_owned(),
        reason: reason.into(),
    }
}

/// Numbering plan: the two-digit trunk group common to every number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AddressPlan {
    prefix: [u8; 2],
}

impl Default for AddressPlan {
    fn default() -> Self {
        AddressPlan { prefix: *b"07" }
    }
}

impl AddressPlan {
    pub fn new(prefix: &str) -> Result<Self, AddressError> {
        match prefix.as_bytes() {
            [a, b] if a.is_ascii_digit() && b.is_ascii_digit() => {
                Ok(AddressPlan { prefix: [*a, *b] })
            }
            _ => Err(invalid(
                prefix,
                "common prefix must be exactly two decimal digits",
            )),
        }
    }

    pub fn prefix(&self) -> &str {
        std::str::from_utf8(&self.prefix).expect("ascii digits")
    }

    pub fn parse_number(&self, s: &str) -> Result<PhoneNumber, AddressError> {
        let bytes = s.as_bytes();
        if bytes.len() != 10 {
            return Err(invalid(
                s,
                format!("expected 10 digits, got {} characters", s.chars().count()),
            ));
        }
        if let Some(c) = s.chars().find(|c| !c.is_ascii_digit()) {
            return Err(invalid(s, format!("non-digit character {c:?}")));
        }
        if bytes[..2] != self.prefix {
            return Err(invalid(
                s,
                format!("first group must be the common prefix {:?}", self.prefix()),
            ));
        }
        let mut digits = [0u8; 10];
        digits.copy_from_slice(bytes);
        Ok(PhoneNumber { digits })
    }

    pub fn encode(&self, number: &PhoneNumber) -> Result<CommunityAddress, AddressError> {
        if number.digits[..2] != self.prefix {
            return Err(invalid(
                number.as_str(),
                format!("not in plan with prefix {:?}", self.prefix()),
            ));
        }
        let group = |i: usize| (number.digits[i] - b'0') * 10 + (number.digits[i + 1] - b'0');
        Ok(CommunityAddress([
            FIRST_OCTET_OFFSET + group(2),
            group(4),
            group(6),
            group(8),
        ]))
    }

    pub fn decode(&self, addr: CommunityAddress) -> Result<PhoneNumber, AddressError> {
        addr.validate()?;
        let [a, b, c, d] = addr.0;
        let mut digits = [0u8; 10];
        digits[..2].copy_from_slice(&self.prefix);
        for (i, v) in [a - FIRST_OCTET_OFFSET, b, c, d].into_iter().enumerate() {
            digits[2 + 2 * i] = b'0' + v / 10;
            digits[3 + 2 * i] = b'0' + v % 10;
        }
        Ok(PhoneNumber { digits })
    }

    /// Parses and encodes in one step.
    pub fn address_of(&self, number: &str) -> Result<CommunityAddress, AddressError> {
        self.encode(&self.parse_number(number)?)
    }
}

/// A validated ten-digit mobile number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PhoneNumber {
    digits: [u8; 10],
}

impl PhoneNumber {
    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.digits).expect("ascii digits")
    }
}

impl FromStr for PhoneNumber {
    type Err = AddressError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AddressPlan::default().parse_number(s)
    }
}

impl fmt::Display for PhoneNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Four-octet node identity. Every node in the simulator is named by one.
///
/// Construction through [`CommunityAddress::new`] accepts any octets so that
/// wire decoding can carry arbitrary values; [`CommunityAddress::validate`]
/// checks the numbering-plan ranges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CommunityAddress([u8; 4]);

impl CommunityAddress {
    pub const fn new(octets: [u8; 4]) -> Self {
        CommunityAddress(octets)
    }

    pub const fn octets(&self) -> [u8; 4] {
        self.0
    }

    pub fn validate(&self) -> Result<(), AddressError> {
        let [a, b, c, d] = self.0;
        if !(FIRST_OCTET_OFFSET..=FIRST_OCTET_OFFSET + 99).contains(&a) {
            return Err(AddressError::NotCommunityAddress(
                self.to_string(),
                "first octet outside 128..=227",
            ));
        }
        if b > 99 || c > 99 || d > 99 {
            return Err(AddressError::NotCommunityAddress(
                self.to_string(),
                "trailing octets must be 0..=99",
            ));
        }
        Ok(())
    }
}

impl fmt::Display for CommunityAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "{a}.{b}.{c}.{d}")
    }
}

impl FromStr for CommunityAddress {
    type Err = AddressError;

    /// Parses dotted-quad notation. Range checks are left to `validate`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || {
            AddressError::NotCommunityAddress(s.to_owned(), "expected four dot-separated octets")
        };
        let mut octets = [0u8; 4];
        let mut parts = s.split('.');
        for o in octets.iter_mut() {
            let p = parts.next().ok_or_else(bad)?;
            if p.is_empty() || p.len() > 3 || !p.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            *o = p.parse().map_err(|_| bad())?;
        }
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(CommunityAddress(octets))
    }
}

pub fn encode(number: &PhoneNumber) -> Result<CommunityAddress, AddressError> {
    AddressPlan::default().encode(number)
}

pub fn decode(addr: CommunityAddress) -> Result<PhoneNumber, AddressError> {
    AddressPlan::default().decode(addr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Independent oracle: slice the string into its two-digit groups.
    fn oracle(number: &str) -> String {
        let g: Vec<u32> = (0..5)
            .map(|i| number[2 * i..2 * i + 2].parse().unwrap())
            .collect();
        format!("{}.{}.{}.{}", 128 + g[1], g[2], g[3], g[4])
    }

    #[test]
    fn worked_example() {
        let n: PhoneNumber = "0773031470".parse().unwrap();
        let a = encode(&n).unwrap();
        assert_eq!(a, CommunityAddress::new([201, 3, 14, 70]));
        assert_eq!(a.to_string(), "201.3.14.70");
        assert_eq!(decode(a).unwrap().as_str(), "0773031470");
    }

    #[test]
    fn zero_groups() {
        let a = encode(&"0700000000".parse().unwrap()).unwrap();
        assert_eq!(a.to_string(), "128.0.0.0");
        assert_eq!(decode(a).unwrap().as_str(), "0700000000");
    }

    #[test]
    fn derived_example_matches_oracle() {
        let a = encode(&"0712345678".parse().unwrap()).unwrap();
        assert_eq!(a.to_string(), "140.34.56.78");
        assert_eq!(oracle("0712345678"), "140.34.56.78");
    }

    #[test]
    fn rejects_malformed_numbers() {
        for bad in [
            "077303147",
            "07730314700",
            "07730a1470",
            "0873031470",
            "",
            "+773031470",
        ] {
            assert!(
                matches!(
                    bad.parse::<PhoneNumber>(),
                    Err(AddressError::InvalidNumber { .. })
                ),
                "{bad}"
            );
        }
    }

    #[test]
    fn rejects_non_community_addresses() {
        for octets in [
            [127, 0, 0, 0],
            [228, 0, 0, 0],
            [201, 100, 0, 0],
            [201, 0, 0, 255],
        ] {
            assert!(matches!(
                decode(CommunityAddress::new(octets)),
                Err(AddressError::NotCommunityAddress(..))
            ));
        }
    }

    #[test]
    fn configurable_prefix() {
        let plan = AddressPlan::new("08").unwrap();
        let a = plan.address_of("0873031470").unwrap();
        assert_eq!(a.to_string(), "201.3.14.70");
        assert_eq!(plan.decode(a).unwrap().as_str(), "0873031470");
        assert!(plan.parse_number("0773031470").is_err());
        assert!(AddressPlan::new("7").is_err());
    }

    #[test]
    fn dotted_quad_parsing() {
        assert_eq!(
            "201.3.14.70".parse::<CommunityAddress>().unwrap().octets(),
            [201, 3, 14, 70]
        );
        for bad in [
            "201.3.14",
            "201.3.14.70.1",
            "a.b.c.d",
            "256.0.0.0",
            "1..2.3",
            "",
        ] {
            assert!(bad.parse::<CommunityAddress>().is_err(), "{bad}");
        }
    }

    proptest! {
        #[test]
        fn encode_matches_oracle_and_round_trips(rest in 0u32..100_000_000) {
            let s = format!("07{rest:08}");
            let n: PhoneNumber = s.parse().unwrap();
            let a = encode(&n).unwrap();
            prop_assert!(a.validate().is_ok());
            prop_assert_eq!(a.to_string(), oracle(&s));
            prop_assert_eq!(decode(a).unwrap(), n);
        }

        #[test]
        fn decode_round_trips(a in 128u8..=227, b in 0u8..=99, c in 0u8..=99, d in 0u8..=99) {
            let addr = CommunityAddress::new([a, b, c, d]);
            let n = decode(addr).unwrap();
            prop_assert_eq!(encode(&n).unwrap(), addr);
        }
    }
}
