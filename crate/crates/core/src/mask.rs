use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A subset of the non-class columns of a dataset, one bit per feature in
/// column order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FeatureMask {
    bits: Vec<bool>,
}

impl FeatureMask {
    pub fn empty(width: usize) -> Self {
        FeatureMask {
            bits: vec![false; width],
        }
    }

    pub fn full(width: usize) -> Self {
        FeatureMask {
            bits: vec![true; width],
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        FeatureMask { bits }
    }

    pub fn from_indices(width: usize, indices: &[usize]) -> Self {
        let mut mask = Self::empty(width);
        for &i in indices {
            mask.bits[i] = true;
        }
        mask
    }

    /// Parses a string of `0`/`1` characters.
    pub fn parse(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::config(format!("invalid mask character `{other}`"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::from_bits)
    }

    pub fn width(&self) -> usize {
        self.bits.len()
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|b| *b)
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.bits[i] = value;
    }

    /// Copy with bit `i` inverted.
    pub fn flipped(&self, i: usize) -> Self {
        let mut out = self.clone();
        out.bits[i] = !out.bits[i];
        out
    }

    pub fn with(&self, i: usize, value: bool) -> Self {
        let mut out = self.clone();
        out.bits[i] = value;
        out
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Indices of the set bits, ascending.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, b)| b.then_some(i))
    }

    pub fn is_subset_of(&self, other: &FeatureMask) -> bool {
        self.width() == other.width()
            && self
                .bits
                .iter()
                .zip(&other.bits)
                .all(|(a, b)| !*a || *b)
    }

    pub fn check_width(&self, expected: usize) -> Result<()> {
        if self.width() != expected {
            return Err(Error::MaskWidth {
                expected,
                found: self.width(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for FeatureMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            f.write_str(if *b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for FeatureMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FeatureMask({self})")
    }
}

impl Serialize for FeatureMask {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.bits.iter().map(|b| u8::from(*b)))
    }
}

impl<'de> Deserialize<'de> for FeatureMask {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = Vec::<u8>::deserialize(deserializer)?;
        raw.into_iter()
            .map(|v| match v {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(serde::de::Error::custom(format!(
                    "mask entries must be 0 or 1, got {other}"
                ))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(FeatureMask::from_bits)
    }
}
