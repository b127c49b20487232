//! Inclusive evaluation grids written as `start:stop:count`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, count: usize) -> crate::Result<Self> {
        if !start.is_finite() || !stop.is_finite() {
            return Err(Error::domain(format!("grid bounds must be finite, got {start}:{stop}")));
        }
        if count > 1 && !(stop > start) {
            return Err(Error::domain(format!("grid needs start < stop, got {start}:{stop}")));
        }
        Ok(Grid { start, stop, count })
    }

    /// `count` evenly spaced points including both endpoints.
    pub fn points(&self) -> Vec<f64> {
        match self.count {
            0 => Vec::new(),
            1 => vec![self.start],
            n => {
                let step = (self.stop - self.start) / (n - 1) as f64;
                (0..n)
                    .map(|i| if i + 1 == n { self.stop } else { self.start + i as f64 * step })
                    .collect()
            }
        }
    }
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, count] = parts.as_slice() else {
            return Err(Error::domain(format!("grid must look like start:stop:count, got {s:?}")));
        };
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::domain(format!("bad grid bound {t:?}")))
        };
        let count = count
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::domain(format!("bad grid count {count:?}")))?;
        Grid::new(num(start)?, num(stop)?, count)
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.count)
    }
}
