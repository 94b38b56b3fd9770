use crate::error::{Error, Result};

/// Ordered named outputs of one extractor. Each entry carries its own
/// outcome so that one failing output does not take down its siblings.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NamedValues {
    entries: Vec<(String, Result<f64>)>,
}

impl NamedValues {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: impl Into<String>, value: Result<f64>) {
        self.entries.push((name.into(), value));
    }

    pub fn get(&self, name: &str) -> Option<&Result<f64>> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    /// The value of `name`, or the error stored for it.
    ///
    /// Panics if the extractor never produced `name`.
    pub fn value(&self, name: &str) -> Result<f64> {
        self.get(name)
            .unwrap_or_else(|| panic!("no output named `{name}`"))
            .clone()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(n, _)| n.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Result<f64>)> {
        self.entries.iter().map(|(n, v)| (n.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub(crate) fn require_len(x: &[f64], needed: usize) -> Result<()> {
    if x.len() < needed {
        Err(Error::TooShort {
            needed,
            got: x.len(),
        })
    } else {
        Ok(())
    }
}

pub(crate) fn require_finite(x: &[f64]) -> Result<()> {
    if x.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NotFinite)
    }
}

pub(crate) fn require_varying(x: &[f64]) -> Result<()> {
    if x.windows(2).all(|w| w[0] == w[1]) {
        Err(Error::DegenerateInput("constant series"))
    } else {
        Ok(())
    }
}

/// Length, finiteness and non-constancy checks shared by most extractors.
pub(crate) fn require_usable(x: &[f64], needed: usize) -> Result<()> {
    require_len(x, needed)?;
    require_finite(x)?;
    require_varying(x)
}
