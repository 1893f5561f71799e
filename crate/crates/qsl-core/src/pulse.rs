//! Piecewise-constant control pulses.
//!
//! A pulse stores an `n_slices x n_controls` amplitude table plus per-slice
//! durations. Optimizer pulses are always uniform (dt = duration/n_slices);
//! analytic constructions use the segment form so that stated segment
//! durations hold exactly rather than being rounded onto a grid.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PulseError {
    #[error("pulse needs at least one slice")]
    Empty,
    #[error("slice {0} has non-positive duration {1}")]
    BadDuration(usize, f64),
    #[error("amplitude table size {got} does not match {slices} slices x {controls} controls")]
    BadTableSize {
        got: usize,
        slices: usize,
        controls: usize,
    },
    #[error("CSV parse error at line {0}: {1}")]
    Csv(usize, String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlPulse {
    n_controls: usize,
    /// Row-major n_slices x n_controls.
    amplitudes: Vec<f64>,
    durations: Vec<f64>,
}

impl ControlPulse {
    /// Uniform grid: dt = duration / n_slices for every slice.
    pub fn uniform(
        duration: f64,
        n_slices: usize,
        n_controls: usize,
        amplitudes: Vec<f64>,
    ) -> Result<Self, PulseError> {
        if n_slices == 0 {
            return Err(PulseError::Empty);
        }
        if duration <= 0.0 {
            return Err(PulseError::BadDuration(0, duration));
        }
        if amplitudes.len() != n_slices * n_controls {
            return Err(PulseError::BadTableSize {
                got: amplitudes.len(),
                slices: n_slices,
                controls: n_controls,
            });
        }
        let dt = duration / n_slices as f64;
        Ok(Self {
            n_controls,
            amplitudes,
            durations: vec![dt; n_slices],
        })
    }

    /// All-zero uniform pulse.
    pub fn zeros(duration: f64, n_slices: usize, n_controls: usize) -> Result<Self, PulseError> {
        Self::uniform(duration, n_slices, n_controls, vec![0.0; n_slices * n_controls])
    }

    /// Explicit (amplitudes, duration) segments; zero-duration segments are
    /// dropped.
    pub fn from_segments(
        segments: &[(Vec<f64>, f64)],
        n_controls: usize,
    ) -> Result<Self, PulseError> {
        let mut amplitudes = Vec::new();
        let mut durations = Vec::new();
        for (k, (amps, dur)) in segments.iter().enumerate() {
            if *dur == 0.0 {
                continue;
            }
            if *dur < 0.0 || !dur.is_finite() {
                return Err(PulseError::BadDuration(k, *dur));
            }
            if amps.len() != n_controls {
                return Err(PulseError::BadTableSize {
                    got: amps.len(),
                    slices: segments.len(),
                    controls: n_controls,
                });
            }
            amplitudes.extend_from_slice(amps);
            durations.push(*dur);
        }
        if durations.is_empty() {
            return Err(PulseError::Empty);
        }
        Ok(Self {
            n_controls,
            amplitudes,
            durations,
        })
    }

    pub fn n_slices(&self) -> usize {
        self.durations.len()
    }

    pub fn n_controls(&self) -> usize {
        self.n_controls
    }

    pub fn duration(&self) -> f64 {
        self.durations.iter().sum()
    }

    pub fn durations(&self) -> &[f64] {
        &self.durations
    }

    /// Slice width when the grid is uniform.
    pub fn dt_uniform(&self) -> Option<f64> {
        let dt = self.durations[0];
        self.durations
            .iter()
            .all(|&d| (d - dt).abs() <= 1e-15 * dt.abs())
            .then_some(dt)
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn slice(&self, k: usize) -> &[f64] {
        &self.amplitudes[k * self.n_controls..(k + 1) * self.n_controls]
    }

    pub fn amplitude(&self, k: usize, j: usize) -> f64 {
        self.amplitudes[k * self.n_controls + j]
    }

    /// One row per slice: slice start time, then the amplitudes. Values are
    /// printed with 12 significant digits so identical pulses serialize to
    /// identical bytes.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("time");
        for j in 0..self.n_controls {
            out.push_str(&format!(",u{j}"));
        }
        out.push('\n');
        let mut t = 0.0;
        for k in 0..self.n_slices() {
            out.push_str(&fmt_sig(t));
            for j in 0..self.n_controls {
                out.push(',');
                out.push_str(&fmt_sig(self.amplitude(k, j)));
            }
            out.push('\n');
            t += self.durations[k];
        }
        out
    }

    /// Inverse of `to_csv` (slice widths recovered from consecutive start
    /// times; the trailing slice reuses the previous width).
    pub fn from_csv(text: &str) -> Result<Self, PulseError> {
        let mut starts: Vec<f64> = Vec::new();
        let mut rows: Vec<Vec<f64>> = Vec::new();
        let mut n_controls = 0usize;
        for (lineno, line) in text.lines().enumerate() {
            if lineno == 0 {
                n_controls = line.split(',').count().saturating_sub(1);
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<f64> = line
                .split(',')
                .map(|f| {
                    f.trim()
                        .parse::<f64>()
                        .map_err(|e| PulseError::Csv(lineno + 1, e.to_string()))
                })
                .collect::<Result<_, _>>()?;
            if fields.len() != n_controls + 1 {
                return Err(PulseError::Csv(lineno + 1, "wrong field count".into()));
            }
            starts.push(fields[0]);
            rows.push(fields[1..].to_vec());
        }
        if rows.is_empty() {
            return Err(PulseError::Empty);
        }
        let mut segments = Vec::with_capacity(rows.len());
        for (k, row) in rows.iter().enumerate() {
            let dur = if k + 1 < starts.len() {
                starts[k + 1] - starts[k]
            } else if k > 0 {
                starts[k] - starts[k - 1]
            } else {
                1.0
            };
            segments.push((row.clone(), dur));
        }
        Self::from_segments(&segments, n_controls)
    }
}

/// Fixed 12-significant-digit formatting used by all CSV emitters.
pub fn fmt_sig(x: f64) -> String {
    format!("{x:.11e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_grid_invariant() {
        let p = ControlPulse::zeros(2.0, 8, 3).unwrap();
        assert_eq!(p.n_slices(), 8);
        assert_eq!(p.dt_uniform(), Some(0.25));
        assert!((p.duration() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn segments_drop_zero_durations() {
        let p = ControlPulse::from_segments(
            &[
                (vec![1.0, 0.0], 0.0),
                (vec![0.5, -0.5], 1.5),
                (vec![0.0, 2.0], 0.5),
            ],
            2,
        )
        .unwrap();
        assert_eq!(p.n_slices(), 2);
        assert_eq!(p.slice(0), &[0.5, -0.5]);
        assert_eq!(p.dt_uniform(), None);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(matches!(
            ControlPulse::uniform(1.0, 4, 2, vec![0.0; 7]),
            Err(PulseError::BadTableSize { .. })
        ));
        assert!(matches!(
            ControlPulse::uniform(0.0, 4, 2, vec![0.0; 8]),
            Err(PulseError::BadDuration(..))
        ));
    }

    #[test]
    fn csv_round_trip() {
        let p = ControlPulse::uniform(1.0, 5, 2, (0..10).map(|i| i as f64 * 0.3).collect())
            .unwrap();
        let q = ControlPulse::from_csv(&p.to_csv()).unwrap();
        assert_eq!(p.n_slices(), q.n_slices());
        for k in 0..p.n_slices() {
            assert!((p.durations()[k] - q.durations()[k]).abs() < 1e-12);
            for j in 0..2 {
                assert!((p.amplitude(k, j) - q.amplitude(k, j)).abs() < 1e-12);
            }
        }
    }
}
