//! Exact integers in JSON.
//!
//! `serde_json` is built with `arbitrary_precision`, so a [`Number`] keeps
//! its decimal text and integers of any size survive a round trip.

use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::Number;

pub(crate) fn big_number<T: ToString>(n: &T) -> Number {
    Number::from_str(&n.to_string()).expect("integer text is a JSON number")
}

pub(crate) fn number_to_bigint(n: &Number) -> Result<BigInt, String> {
    BigInt::from_str(&n.to_string()).map_err(|_| format!("`{n}` is not an integer"))
}
