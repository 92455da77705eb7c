//! Scalar abstraction for tree counts and ranks.
//!
//! Every counting routine in this crate is generic over [`Counter`], so the
//! same code runs on `u64`/`u128` (fast, overflows past roughly n = 35) and
//! on [`num_bigint::BigUint`] (exact for any n). The crate-root aliases pick
//! `BigUint` as the default.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{FromPrimitive, NumAssignRef, NumRef, ToPrimitive};

/// Unsigned integer scalar used for counts and ranks.
///
/// The bound set is what the table recurrences and the rank arithmetic
/// actually use: ring ops (also against references, so `BigUint` values are
/// not cloned on every addition), Euclidean division with divisibility
/// tests, total order, and conversions from machine integers.
pub trait Counter:
    Integer + NumRef + NumAssignRef + Clone + FromPrimitive + ToPrimitive + Send + Sync + fmt::Debug + fmt::Display
{
}

impl<T> Counter for T where
    T: Integer
        + NumRef
        + NumAssignRef
        + Clone
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + fmt::Debug
        + fmt::Display
{
}

/// Big-endian magnitude serialization, used by the table cache format and by
/// rejection sampling. The encoding is minimal: no leading zero bytes, and
/// zero itself is the empty byte string.
pub trait MagnitudeBytes: Sized {
    fn to_magnitude_bytes(&self) -> Vec<u8>;
    /// Inverse of [`to_magnitude_bytes`](Self::to_magnitude_bytes); returns
    /// `None` if the value does not fit in `Self`.
    fn from_magnitude_bytes(bytes: &[u8]) -> Option<Self>;
}

impl MagnitudeBytes for BigUint {
    fn to_magnitude_bytes(&self) -> Vec<u8> {
        if num_traits::Zero::is_zero(self) {
            Vec::new()
        } else {
            self.to_bytes_be()
        }
    }

    fn from_magnitude_bytes(bytes: &[u8]) -> Option<Self> {
        Some(BigUint::from_bytes_be(bytes))
    }
}

macro_rules! magnitude_for_primitive {
    ($($t:ty),*) => {$(
        impl MagnitudeBytes for $t {
            fn to_magnitude_bytes(&self) -> Vec<u8> {
                let all = self.to_be_bytes();
                let skip = all.iter().take_while(|&&b| b == 0).count();
                all[skip..].to_vec()
            }

            fn from_magnitude_bytes(bytes: &[u8]) -> Option<Self> {
                let skip = bytes.iter().take_while(|&&b| b == 0).count();
                let bytes = &bytes[skip..];
                let width = std::mem::size_of::<$t>();
                if bytes.len() > width {
                    return None;
                }
                let mut all = [0u8; std::mem::size_of::<$t>()];
                all[width - bytes.len()..].copy_from_slice(bytes);
                Some(<$t>::from_be_bytes(all))
            }
        }
    )*};
}

magnitude_for_primitive!(u32, u64, u128);
