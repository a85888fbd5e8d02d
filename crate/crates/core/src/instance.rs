//! Instance representation and JSON I/O.
//!
//! All coordinates are integers under a per-file power-of-two `scale`: a
//! length of one "unit" equals `scale` coordinate steps. Every predicate in
//! this crate compares integers, so geometry is exact; there is no rounding
//! anywhere.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact coordinate in instance scale units.
pub type Coord = i64;

pub const FORMAT_VERSION: u32 = 1;

/// Points on a line plus closed intervals `[left, right]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance1d {
    /// Power of two; one unit of length = `scale` coordinate steps.
    pub scale: Coord,
    /// Strictly increasing.
    pub points: Vec<Coord>,
    /// `left < right` for every entry.
    pub intervals: Vec<(Coord, Coord)>,
}

/// Points in the plane plus, for the discrete variant, centers of axis-parallel
/// unit squares (side length = `scale`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance2d {
    pub scale: Coord,
    /// Pairwise distinct.
    pub points: Vec<(Coord, Coord)>,
    /// `None` means the continuous variant: squares may be centered anywhere.
    pub squares: Option<Vec<(Coord, Coord)>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    OneD(Instance1d),
    TwoD(Instance2d),
}

/// Non-fatal observations made while validating an instance file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Warning {
    /// Some coordinate value is shared between points and/or interval
    /// endpoints. Containment stays exact (closed semantics), but boundary
    /// choices become observable.
    CoordinateTies,
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Warning::CoordinateTies => write!(
                f,
                "coordinate ties detected; closed-containment boundary semantics apply"
            ),
        }
    }
}

fn is_power_of_two(v: Coord) -> bool {
    v > 0 && (v & (v - 1)) == 0
}

impl Instance1d {
    pub fn new(scale: Coord, points: Vec<Coord>, intervals: Vec<(Coord, Coord)>) -> Result<Self> {
        let inst = Instance1d {
            scale,
            points,
            intervals,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<Vec<Warning>> {
        if !is_power_of_two(self.scale) {
            return Err(Error::Input(format!(
                "scale must be a positive power of two, got {}",
                self.scale
            )));
        }
        if self.points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Input(
                "points must be strictly increasing".to_string(),
            ));
        }
        for (i, &(l, r)) in self.intervals.iter().enumerate() {
            if l >= r {
                return Err(Error::Input(format!(
                    "interval {i} has left {l} >= right {r}"
                )));
            }
        }
        let mut coords: Vec<Coord> = self.points.clone();
        for &(l, r) in &self.intervals {
            coords.push(l);
            coords.push(r);
        }
        coords.sort_unstable();
        let mut warnings = Vec::new();
        if coords.windows(2).any(|w| w[0] == w[1]) {
            warnings.push(Warning::CoordinateTies);
        }
        Ok(warnings)
    }

    /// All intervals have length exactly one unit.
    pub fn is_unit(&self) -> bool {
        self.intervals.iter().all(|&(l, r)| r - l == self.scale)
    }
}

impl Instance2d {
    pub fn new(
        scale: Coord,
        points: Vec<(Coord, Coord)>,
        squares: Option<Vec<(Coord, Coord)>>,
    ) -> Result<Self> {
        let inst = Instance2d {
            scale,
            points,
            squares,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<Vec<Warning>> {
        if !is_power_of_two(self.scale) {
            return Err(Error::Input(format!(
                "scale must be a positive power of two, got {}",
                self.scale
            )));
        }
        let mut pts = self.points.clone();
        pts.sort_unstable();
        if pts.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Input("points must be pairwise distinct".to_string()));
        }
        if let Some(squares) = &self.squares {
            if squares.is_empty() {
                return Err(Error::Input(
                    "discrete instance must list at least one square".to_string(),
                ));
            }
        }
        Ok(Vec::new())
    }
}

// Serde-facing schema. `dim` selects which fields are meaningful.
#[derive(Serialize, Deserialize)]
struct RawInstance {
    #[serde(default)]
    format: Option<u32>,
    scale: Coord,
    dim: u8,
    points: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    intervals: Option<Vec<(Coord, Coord)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    squares: Option<Vec<(Coord, Coord)>>,
}

impl Instance {
    pub fn from_json(text: &str) -> Result<(Instance, Vec<Warning>)> {
        let raw: RawInstance =
            serde_json::from_str(text).map_err(|e| Error::Input(format!("instance JSON: {e}")))?;
        if let Some(f) = raw.format {
            if f != FORMAT_VERSION {
                return Err(Error::Input(format!(
                    "unsupported format version {f} (expected {FORMAT_VERSION})"
                )));
            }
        }
        match raw.dim {
            1 => {
                let points: Vec<Coord> = serde_json::from_value(raw.points)
                    .map_err(|e| Error::Input(format!("1D points: {e}")))?;
                let intervals = raw.intervals.unwrap_or_default();
                let inst = Instance1d {
                    scale: raw.scale,
                    points,
                    intervals,
                };
                let warnings = inst.validate()?;
                Ok((Instance::OneD(inst), warnings))
            }
            2 => {
                let points: Vec<(Coord, Coord)> = serde_json::from_value(raw.points)
                    .map_err(|e| Error::Input(format!("2D points: {e}")))?;
                let inst = Instance2d {
                    scale: raw.scale,
                    points,
                    squares: raw.squares,
                };
                let warnings = inst.validate()?;
                Ok((Instance::TwoD(inst), warnings))
            }
            d => Err(Error::Input(format!("dim must be 1 or 2, got {d}"))),
        }
    }

    pub fn to_json(&self) -> String {
        let raw = match self {
            Instance::OneD(inst) => RawInstance {
                format: Some(FORMAT_VERSION),
                scale: inst.scale,
                dim: 1,
                points: serde_json::to_value(&inst.points).unwrap(),
                intervals: Some(inst.intervals.clone()),
                squares: None,
            },
            Instance::TwoD(inst) => RawInstance {
                format: Some(FORMAT_VERSION),
                scale: inst.scale,
                dim: 2,
                points: serde_json::to_value(&inst.points).unwrap(),
                intervals: None,
                squares: inst.squares.clone(),
            },
        };
        serde_json::to_string_pretty(&raw).unwrap()
    }

    pub fn n_points(&self) -> usize {
        match self {
            Instance::OneD(i) => i.points.len(),
            Instance::TwoD(i) => i.points.len(),
        }
    }

    pub fn n_objects(&self) -> usize {
        match self {
            Instance::OneD(i) => i.intervals.len(),
            Instance::TwoD(i) => i.squares.as_ref().map_or(0, |s| s.len()),
        }
    }
}
