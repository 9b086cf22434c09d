use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Binary class label: 1 is a positive case, 0 a negative one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Label {
    Negative,
    Positive,
}

impl Label {
    pub const ALL: [Label; 2] = [Label::Positive, Label::Negative];

    pub fn from_u8(v: u8) -> Option<Label> {
        match v {
            0 => Some(Label::Negative),
            1 => Some(Label::Positive),
            _ => None,
        }
    }

    pub fn as_u8(self) -> u8 {
        match self {
            Label::Negative => 0,
            Label::Positive => 1,
        }
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.as_u8())
    }

    /// Short name used in artifact file names.
    pub fn slug(self) -> &'static str {
        match self {
            Label::Negative => "negative",
            Label::Positive => "positive",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u8())
    }
}

/// A fixed-order feature vector for one sample.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub sample_id: usize,
    pub label: Label,
    pub values: Vec<f64>,
}

impl FeatureVector {
    pub fn new(sample_id: usize, label: Label, values: Vec<f64>) -> Self {
        FeatureVector {
            sample_id,
            label,
            values,
        }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn check_finite(&self) -> Result<()> {
        match self.values.iter().position(|v| !v.is_finite()) {
            Some(index) => Err(Error::NonFinite {
                sample_id: self.sample_id,
                index,
                value: self.values[index],
            }),
            None => Ok(()),
        }
    }
}
