//! Continuous instrument values to discrete readings.
//!
//! The bucket edges below are configuration data chosen for this library,
//! not certified values. Only the first two nose-up bands are fixed by the
//! source material. A value on an edge falls into the bucket nearer the
//! neutral reading (for airspeed, the lower one).

use num_traits::Float;
use serde::Serialize;
use thiserror::Error;

use super::vocab::Reading;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Axis {
    /// Pitch attitude in degrees, nose up positive.
    Vertical,
    /// Bank angle in degrees, left negative.
    Horizontal,
    /// Indicated airspeed as a fraction of cruise speed.
    Airspeed,
    /// Vertical speed in feet per minute, standing in for flight phase.
    Altitude,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiscretizeError {
    #[error("{value} is outside the {axis:?} range [{min}, {max}]")]
    OutOfRange {
        axis: Axis,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error("value is not finite")]
    NotFinite,
}

/// Ordered bands: each `(upper, reading)` covers `(previous upper, upper]`.
pub struct BucketTable {
    pub axis: Axis,
    pub min: f64,
    pub max: f64,
    /// Bands in ascending order of their upper edge.
    pub bands: &'static [(f64, Reading)],
}

use Reading::*;

pub const VERTICAL_UP: BucketTable = BucketTable {
    axis: Axis::Vertical,
    min: -90.0,
    max: 90.0,
    bands: &[(0.0, VertLevel), (10.0, VertUp1), (20.0, VertUp2), (30.0, VertUp3), (90.0, VertUp4)],
};

pub const VERTICAL_DOWN: [(f64, Reading); 5] =
    [(0.0, VertLevel), (10.0, VertDown1), (20.0, VertDown2), (30.0, VertDown3), (90.0, VertDown4)];

pub const HORIZONTAL_RIGHT: BucketTable = BucketTable {
    axis: Axis::Horizontal,
    min: -180.0,
    max: 180.0,
    bands: &[(0.0, HorLevel), (15.0, HorRight1), (30.0, HorRight2), (180.0, HorRight3)],
};

pub const HORIZONTAL_LEFT: [(f64, Reading); 4] =
    [(0.0, HorLevel), (15.0, HorLeft1), (30.0, HorLeft2), (180.0, HorLeft3)];

pub const AIRSPEED: BucketTable = BucketTable {
    axis: Axis::Airspeed,
    min: 0.0,
    max: 2.0,
    bands: &[
        (0.7, AirspeedSlow3),
        (0.85, AirspeedSlow2),
        (0.95, AirspeedSlow1),
        (1.05, AirspeedCruise),
        (1.15, AirspeedFast1),
        (1.3, AirspeedFast2),
        (2.0, AirspeedFast3),
    ],
};

pub const ALTITUDE: BucketTable = BucketTable {
    axis: Axis::Altitude,
    min: -10000.0,
    max: 10000.0,
    bands: &[(-500.0, AltDesc), (500.0, AltCruise), (10000.0, AltClimb)],
};

fn band(bands: &[(f64, Reading)], v: f64) -> Reading {
    bands
        .iter()
        .find(|(upper, _)| v <= *upper)
        .map(|(_, r)| *r)
        .unwrap_or(bands[bands.len() - 1].1)
}

/// Maps a value on `axis` to its reading. Total on the axis range.
pub fn discretize_reading<T: Float>(axis: Axis, value: T) -> Result<Reading, DiscretizeError> {
    let v = value.to_f64().ok_or(DiscretizeError::NotFinite)?;
    if !v.is_finite() {
        return Err(DiscretizeError::NotFinite);
    }
    let table = match axis {
        Axis::Vertical => &VERTICAL_UP,
        Axis::Horizontal => &HORIZONTAL_RIGHT,
        Axis::Airspeed => &AIRSPEED,
        Axis::Altitude => &ALTITUDE,
    };
    if v < table.min || v > table.max {
        return Err(DiscretizeError::OutOfRange {
            axis,
            value: v,
            min: table.min,
            max: table.max,
        });
    }
    Ok(match axis {
        Axis::Vertical if v < 0.0 => band(&VERTICAL_DOWN, -v),
        Axis::Horizontal if v < 0.0 => band(&HORIZONTAL_LEFT, -v),
        _ => band(table.bands, v),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nose_up_bands() {
        assert_eq!(discretize_reading(Axis::Vertical, 5.0), Ok(VertUp1));
        assert_eq!(discretize_reading(Axis::Vertical, 0.0), Ok(VertLevel));
        assert_eq!(discretize_reading(Axis::Vertical, 11.0), Ok(VertUp2));
        assert_eq!(discretize_reading(Axis::Vertical, 10.0), Ok(VertUp1));
        assert_eq!(discretize_reading(Axis::Vertical, -10.0f32), Ok(VertDown1));
    }

    #[test]
    fn other_axes() {
        assert_eq!(discretize_reading(Axis::Horizontal, -20.0), Ok(HorLeft2));
        assert_eq!(discretize_reading(Axis::Horizontal, 80.0), Ok(HorRight3));
        assert_eq!(discretize_reading(Axis::Airspeed, 0.5), Ok(AirspeedSlow3));
        assert_eq!(discretize_reading(Axis::Airspeed, 1.0), Ok(AirspeedCruise));
        assert_eq!(discretize_reading(Axis::Airspeed, 0.95), Ok(AirspeedSlow1));
        assert_eq!(discretize_reading(Axis::Altitude, -800.0), Ok(AltDesc));
        assert_eq!(discretize_reading(Axis::Altitude, 0.0), Ok(AltCruise));
    }

    #[test]
    fn range_errors() {
        assert!(matches!(
            discretize_reading(Axis::Vertical, 95.0),
            Err(DiscretizeError::OutOfRange { .. })
        ));
        assert_eq!(discretize_reading(Axis::Airspeed, f64::NAN), Err(DiscretizeError::NotFinite));
    }
}
