//! String identifier newtypes shared across the crate.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

macro_rules! string_id {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(String);

        impl $name {
            pub fn new(id: impl Into<String>) -> Self {
                Self(id.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self(s.to_owned())
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                Self(s)
            }
        }
    };
}

string_id!(
    /// Publication identifier.
    PubId
);
string_id!(
    /// Professor identifier.
    ProfessorId
);
string_id!(
    /// University identifier.
    UniversityId
);
string_id!(
    /// Fine-grained research field (scientific disciplinary sector).
    SdsCode
);
string_id!(
    /// Discipline grouping of SDS codes.
    UdaCode
);
string_id!(
    /// Journal subject category.
    CategoryCode
);
string_id!(
    /// Academic rank, the key into the salary table.
    AcademicRank
);

/// Compares identifiers so that embedded digit runs order numerically:
/// `UNIV_2 < UNIV_10`. Falls back to plain byte order on equal keys.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let mut ai = a.as_bytes();
    let mut bi = b.as_bytes();
    loop {
        match (ai.first(), bi.first()) {
            (None, None) => return a.cmp(b),
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) if x.is_ascii_digit() && y.is_ascii_digit() => {
                let an = ai.iter().take_while(|c| c.is_ascii_digit()).count();
                let bn = bi.iter().take_while(|c| c.is_ascii_digit()).count();
                let (ad, ar) = ai.split_at(an);
                let (bd, br) = bi.split_at(bn);
                let ad = trim_zeros(ad);
                let bd = trim_zeros(bd);
                let ord = ad.len().cmp(&bd.len()).then_with(|| ad.cmp(bd));
                if ord != Ordering::Equal {
                    return ord;
                }
                ai = ar;
                bi = br;
            }
            (Some(x), Some(y)) => {
                if x != y {
                    return x.cmp(y);
                }
                ai = &ai[1..];
                bi = &bi[1..];
            }
        }
    }
}

fn trim_zeros(digits: &[u8]) -> &[u8] {
    let nz = digits.iter().take_while(|&&c| c == b'0').count();
    &digits[nz..]
}
