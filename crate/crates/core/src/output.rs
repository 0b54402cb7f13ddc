//! Number formatting shared by the CSV and JSON writers.

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// 17 significant digits in scientific notation; `-0` prints as `0`.
pub(crate) fn sig17(x: f64) -> String {
    format!("{:.16e}", x + 0.0)
}

/// An `f64` that serializes to JSON with 17 significant digits (`null` when
/// not finite). Only meaningful with `serde_json`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Sig17(pub f64);

impl Serialize for Sig17 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(sig17(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

pub(crate) fn sig17_vec(xs: &[f64]) -> Vec<Sig17> {
    xs.iter().copied().map(Sig17).collect()
}
