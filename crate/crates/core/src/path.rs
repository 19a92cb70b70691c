use crate::error::{domain, Error, Result};

/// Process values on a uniform time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SamplePath {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl SamplePath {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::Shape(format!(
                "{} times but {} values",
                times.len(),
                values.len()
            )));
        }
        Ok(Self { times, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `i·T/G` for `i = 0..=G`.
pub fn uniform_grid(horizon: f64, intervals: usize) -> Result<Vec<f64>> {
    if !(horizon > 0.0) {
        return domain(format!("horizon must be positive, got {horizon}"));
    }
    if intervals == 0 {
        return domain("output grid needs at least one interval");
    }
    Ok((0..=intervals)
        .map(|i| horizon * i as f64 / intervals as f64)
        .collect())
}
