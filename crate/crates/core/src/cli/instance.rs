//! JSON instance files.
//!
//! ```json
//! {
//!   "cells": [{"measure": 1, "p": 1, "q": 1}, {"measure": 1, "p": 1, "q": "inf"}],
//!   "sequences": {"f": [[1, 0], [0, 1]]}
//! }
//! ```
//!
//! `"inf"` is the only spelling of an infinite exponent. Every sequence is a
//! list over `nu` of rows over cells. An optional `"exponent_lower_bound"`
//! tightens the default requirement `p, q > 0` to `p, q >= bound`.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::mixed::FunctionSequence;
use crate::space::{ExponentPair, Partition};
use crate::xreal::Exponent;

/// A nonnegative number that may be `+inf`, written as `"inf"` in files.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtNumber(pub f64);

impl Serialize for ExtNumber {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0 == f64::INFINITY {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for ExtNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct ExtVisitor;

        impl Visitor<'_> for ExtVisitor {
            type Value = ExtNumber;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or the string \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<ExtNumber, E> {
                Ok(ExtNumber(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<ExtNumber, E> {
                Ok(ExtNumber(v as f64))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<ExtNumber, E> {
                Ok(ExtNumber(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<ExtNumber, E> {
                if v == "inf" {
                    Ok(ExtNumber(f64::INFINITY))
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }

        d.deserialize_any(ExtVisitor)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellSpec {
    pub measure: f64,
    pub p: ExtNumber,
    pub q: ExtNumber,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent_lower_bound: Option<f64>,
    pub cells: Vec<CellSpec>,
    pub sequences: BTreeMap<String, Vec<Vec<f64>>>,
}

/// A validated instance file.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedInstance {
    pub partition: Partition,
    pub exponents: ExponentPair,
    pub sequences: BTreeMap<String, FunctionSequence>,
}

impl LoadedInstance {
    pub fn sequence(&self, name: &str) -> Option<&FunctionSequence> {
        self.sequences.get(name)
    }
}

impl InstanceFile {
    pub fn parse(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance files always serialize")
    }

    /// Checks every file invariant and builds the library types.
    pub fn validate(&self) -> Result<LoadedInstance, String> {
        let measures = self.cells.iter().map(|c| c.measure).collect();
        let partition = Partition::new(measures).map_err(|e| e.to_string())?;
        let bound = self.exponent_lower_bound;
        if let Some(b) = bound {
            if !(b.is_finite() && b > 0.0) {
                return Err(format!(
                    "exponent_lower_bound must be finite and positive, got {b}"
                ));
            }
        }
        let exponent = |cell: usize, name: &str, v: ExtNumber| -> Result<Exponent, String> {
            let e = Exponent::new(v.0).map_err(|e| format!("cell {cell}, {name}: {e}"))?;
            match bound {
                Some(b) if e.value() < b => Err(format!(
                    "cell {cell}, {name} = {e} is below the declared bound {b}"
                )),
                _ => Ok(e),
            }
        };
        let mut p = Vec::with_capacity(self.cells.len());
        let mut q = Vec::with_capacity(self.cells.len());
        for (i, c) in self.cells.iter().enumerate() {
            p.push(exponent(i, "p", c.p)?);
            q.push(exponent(i, "q", c.q)?);
        }
        let exponents = ExponentPair::new(p, q).map_err(|e| e.to_string())?;

        let mut sequences = BTreeMap::new();
        for (name, rows) in &self.sequences {
            for (nu, row) in rows.iter().enumerate() {
                if row.len() != partition.len() {
                    return Err(format!(
                        "sequence {name:?}, term {nu}: {} values for {} cells",
                        row.len(),
                        partition.len()
                    ));
                }
            }
            let seq =
                FunctionSequence::from_rows(rows).map_err(|e| format!("sequence {name:?}: {e}"))?;
            sequences.insert(name.clone(), seq);
        }
        Ok(LoadedInstance {
            partition,
            exponents,
            sequences,
        })
    }

    pub fn from_parts<'a>(
        partition: &Partition,
        exponents: &ExponentPair,
        sequences: impl IntoIterator<Item = (&'a str, &'a FunctionSequence)>,
    ) -> Self {
        let cells = partition
            .measures()
            .iter()
            .zip(exponents.p().iter().zip(exponents.q()))
            .map(|(&measure, (p, q))| CellSpec {
                measure,
                p: ExtNumber(p.value()),
                q: ExtNumber(q.value()),
            })
            .collect();
        let sequences = sequences
            .into_iter()
            .map(|(name, seq)| {
                let rows = seq.terms().iter().map(|t| t.values().to_vec()).collect();
                (name.to_string(), rows)
            })
            .collect();
        InstanceFile {
            exponent_lower_bound: None,
            cells,
            sequences,
        }
    }
}
