//! JSON helpers for extended-real values.
//!
//! Plain JSON has no literal for IEEE infinities, which appear here as honest
//! values (the upper critical exponent is unbounded for nu >= nu_star).  These
//! adapters serialize finite values as numbers and infinities as the strings
//! `"inf"` / `"-inf"`, and accept either form on input.

use serde::de::{self, Deserializer, Unexpected, Visitor};
use serde::ser::Serializer;
use std::fmt;

/// Serialize an `f64`, mapping infinities to `"inf"` / `"-inf"` strings.
pub fn serialize<S: Serializer>(value: &f64, serializer: S) -> Result<S::Ok, S::Error> {
    if value.is_finite() {
        serializer.serialize_f64(*value)
    } else if *value > 0.0 {
        serializer.serialize_str("inf")
    } else if *value < 0.0 {
        serializer.serialize_str("-inf")
    } else {
        Err(serde::ser::Error::custom("cannot serialize NaN"))
    }
}

/// Deserialize an `f64` that may be a number or an `"inf"` / `"-inf"` string.
pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<f64, D::Error> {
    struct ExtRealVisitor;

    impl<'de> Visitor<'de> for ExtRealVisitor {
        type Value = f64;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("a number or the string \"inf\" / \"-inf\"")
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> Result<f64, E> {
            Ok(v)
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<f64, E> {
            match v {
                "inf" | "+inf" | "Infinity" => Ok(f64::INFINITY),
                "-inf" | "-Infinity" => Ok(f64::NEG_INFINITY),
                _ => v
                    .parse()
                    .map_err(|_| E::invalid_value(Unexpected::Str(v), &self)),
            }
        }
    }

    deserializer.deserialize_any(ExtRealVisitor)
}

/// Adapter for `Option<f64>` fields that may hold infinities.
pub mod option {
    use serde::de::Deserializer;
    use serde::ser::Serializer;
    use serde::Deserialize;

    /// Serialize `None` as null and `Some` through the extended-real rules.
    pub fn serialize<S: Serializer>(value: &Option<f64>, serializer: S) -> Result<S::Ok, S::Error> {
        match value {
            Some(v) => super::serialize(v, serializer),
            None => serializer.serialize_none(),
        }
    }

    /// Deserialize null to `None`, anything else via the extended-real rules.
    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<Option<f64>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "super")] f64);
        let opt: Option<Wrap> = Option::deserialize(deserializer)?;
        Ok(opt.map(|w| w.0))
    }
}

#[cfg(test)]
mod tests {
    use serde::{Deserialize, Serialize};

    #[derive(Serialize, Deserialize)]
    struct Holder {
        #[serde(with = "super")]
        value: f64,
    }

    #[derive(Serialize, Deserialize)]
    struct OptHolder {
        #[serde(with = "super::option", default)]
        value: Option<f64>,
    }

    #[test]
    fn optional_infinity_round_trips() {
        let json = serde_json::to_string(&OptHolder {
            value: Some(f64::INFINITY),
        })
        .unwrap();
        assert_eq!(json, "{\"value\":\"inf\"}");
        let back: OptHolder = serde_json::from_str(&json).unwrap();
        assert_eq!(back.value, Some(f64::INFINITY));
        let none: OptHolder = serde_json::from_str("{\"value\":null}").unwrap();
        assert_eq!(none.value, None);
    }

    #[test]
    fn finite_values_round_trip_as_numbers() {
        let json = serde_json::to_string(&Holder { value: 2.5 }).unwrap();
        assert_eq!(json, "{\"value\":2.5}");
        let back: Holder = serde_json::from_str(&json).unwrap();
        assert_eq!(back.value, 2.5);
    }

    #[test]
    fn infinity_round_trips_as_string() {
        let json = serde_json::to_string(&Holder {
            value: f64::INFINITY,
        })
        .unwrap();
        assert_eq!(json, "{\"value\":\"inf\"}");
        let back: Holder = serde_json::from_str(&json).unwrap();
        assert!(back.value.is_infinite() && back.value > 0.0);
        let neg: Holder = serde_json::from_str("{\"value\":\"-inf\"}").unwrap();
        assert!(neg.value.is_infinite() && neg.value < 0.0);
    }
}
