//! Multi-wall large-scale loss and Gaussian small-scale fading.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::layout::OfficeLayout;
use crate::{Error, Result};

/// How the small-scale amplitude factor varies between measurements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmallScaleMode {
    /// A fresh factor for every path, sensor and measurement.
    PerSample,
    /// One factor per (office, sensor, path), drawn when the [`Channel`] is
    /// built and reused by every measurement taken in it.
    PerLocation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropagationParams {
    /// Effective radiated power of each path, dB. Its length is the path count.
    pub path_power_db: Vec<f64>,
    pub small_scale_mean: f64,
    pub small_scale_var: f64,
    pub wall_loss_db: f64,
    pub door_loss_db: f64,
    /// Multiplies `log10(r)` in the distance term.
    pub distance_coeff: f64,
    pub small_scale_mode: SmallScaleMode,
}

impl Default for PropagationParams {
    fn default() -> Self {
        Self {
            path_power_db: alloc::vec![20.0, 16.0, 10.0],
            small_scale_mean: 1.0,
            small_scale_var: 0.1,
            wall_loss_db: 3.0,
            door_loss_db: 0.2,
            distance_coeff: 2.0,
            small_scale_mode: SmallScaleMode::PerLocation,
        }
    }
}

impl PropagationParams {
    pub fn num_paths(&self) -> usize {
        self.path_power_db.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.path_power_db.is_empty() {
            return Err(Error::Config("at least one propagation path is required".into()));
        }
        let all_finite = self
            .path_power_db
            .iter()
            .chain(&[
                self.small_scale_mean,
                self.small_scale_var,
                self.wall_loss_db,
                self.door_loss_db,
                self.distance_coeff,
            ])
            .all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::Config("propagation parameters must be finite".into()));
        }
        if self.small_scale_var < 0.0 {
            return Err(Error::Config(format!(
                "small-scale variance must be non-negative, got {}",
                self.small_scale_var
            )));
        }
        Ok(())
    }
}

/// Large-scale gain of `path` in dB:
/// `P_s - (distance_coeff * log10 r + wall_loss * n_wall + door_loss * n_door)`.
pub fn large_scale_gain_db(
    params: &PropagationParams,
    path: usize,
    distance_m: f64,
    walls: u32,
    doors: u32,
) -> Result<f64> {
    if !(distance_m > 0.0) {
        return Err(Error::Domain(format!("distance must be positive, got {distance_m}")));
    }
    let power = *params.path_power_db.get(path).ok_or(Error::Dimension {
        expected: params.num_paths(),
        got: path,
    })?;
    let loss = params.distance_coeff * libm::log10(distance_m)
        + params.wall_loss_db * f64::from(walls)
        + params.door_loss_db * f64::from(doors);
    Ok(power - loss)
}

/// One multipath measurement between an office and a sensor.
#[derive(Debug, Clone, PartialEq)]
pub struct CirSample {
    pub office: usize,
    pub sensor: usize,
    pub taps: Vec<Complex64>,
}

/// A layout plus propagation parameters with the deterministic part of every
/// office-to-sensor link precomputed.
#[derive(Debug, Clone)]
pub struct Channel {
    layout: OfficeLayout,
    params: PropagationParams,
    small_scale: Normal<f64>,
    /// `sqrt` of the linear large-scale gain, indexed `[office][sensor][path]`.
    large_amplitude: Vec<f64>,
    /// Frozen small-scale factors in [`SmallScaleMode::PerLocation`].
    frozen: Option<Vec<f64>>,
}

impl Channel {
    /// Builds the channel. In [`SmallScaleMode::PerLocation`] the frozen
    /// fading field is drawn from `rng`; otherwise `rng` is untouched.
    pub fn new<R: Rng + ?Sized>(layout: OfficeLayout, params: PropagationParams, rng: &mut R) -> Result<Self> {
        params.validate()?;
        let small_scale = Normal::new(params.small_scale_mean, libm::sqrt(params.small_scale_var))
            .map_err(|e| Error::Config(format!("small-scale distribution: {e}")))?;

        let paths = params.num_paths();
        let mut large_amplitude = Vec::with_capacity(layout.num_offices() * layout.num_sensors() * paths);
        for &center in &layout.office_centers {
            for &sensor in &layout.sensor_positions {
                let hits = layout.count_obstacles(center, sensor);
                let r = center.distance(sensor);
                for d in 0..paths {
                    let gain_db = large_scale_gain_db(&params, d, r, hits.walls, hits.doors)?;
                    large_amplitude.push(libm::sqrt(libm::pow(10.0, gain_db / 10.0)));
                }
            }
        }

        let frozen = match params.small_scale_mode {
            SmallScaleMode::PerSample => None,
            SmallScaleMode::PerLocation => Some((0..large_amplitude.len()).map(|_| small_scale.sample(rng)).collect()),
        };

        Ok(Self {
            layout,
            params,
            small_scale,
            large_amplitude,
            frozen,
        })
    }

    pub fn layout(&self) -> &OfficeLayout {
        &self.layout
    }

    pub fn params(&self) -> &PropagationParams {
        &self.params
    }

    pub fn num_offices(&self) -> usize {
        self.layout.num_offices()
    }

    pub fn num_sensors(&self) -> usize {
        self.layout.num_sensors()
    }

    pub fn num_paths(&self) -> usize {
        self.params.num_paths()
    }

    /// `sqrt` of the linear large-scale gain of one link.
    pub fn large_scale_amplitude(&self, office: usize, sensor: usize, path: usize) -> f64 {
        self.large_amplitude[self.index(office, sensor, path)]
    }

    fn index(&self, office: usize, sensor: usize, path: usize) -> usize {
        (office * self.num_sensors() + sensor) * self.num_paths() + path
    }

    /// Draws the CIR from the center of `office` to `sensor`.
    ///
    /// Tap `d` is `h_small * sqrt(h_large) * exp(j theta)` with
    /// `theta ~ U[0, 2 pi)`.
    pub fn draw_cir<R: Rng + ?Sized>(&self, office: usize, sensor: usize, rng: &mut R) -> Result<CirSample> {
        if office >= self.num_offices() {
            return Err(Error::Dimension {
                expected: self.num_offices(),
                got: office,
            });
        }
        if sensor >= self.num_sensors() {
            return Err(Error::Dimension {
                expected: self.num_sensors(),
                got: sensor,
            });
        }
        let mut taps = Vec::with_capacity(self.num_paths());
        self.draw_taps(office, sensor, rng, |tap| taps.push(tap));
        Ok(CirSample { office, sensor, taps })
    }

    pub(crate) fn draw_taps<R: Rng + ?Sized>(
        &self,
        office: usize,
        sensor: usize,
        rng: &mut R,
        mut sink: impl FnMut(Complex64),
    ) {
        for path in 0..self.num_paths() {
            let idx = self.index(office, sensor, path);
            let small = match &self.frozen {
                Some(field) => field[idx],
                None => self.small_scale.sample(rng),
            };
            let phase = rng.random::<f64>() * TAU;
            let amplitude = small * self.large_amplitude[idx];
            // A negative Gaussian draw flips the phase by pi; the magnitude is |amplitude|.
            let (magnitude, phase) = if amplitude < 0.0 {
                (-amplitude, (phase + core::f64::consts::PI) % TAU)
            } else {
                (amplitude, phase)
            };
            sink(Complex64::from_polar(magnitude, phase));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{build_layout, LayoutConfig};
    use crate::rng;

    fn per_sample(var: f64) -> PropagationParams {
        PropagationParams {
            small_scale_var: var,
            small_scale_mode: SmallScaleMode::PerSample,
            ..PropagationParams::default()
        }
    }

    fn channel(params: PropagationParams) -> Channel {
        let layout = build_layout(&LayoutConfig::default()).unwrap();
        Channel::new(layout, params, &mut rng::stream(1, 0)).unwrap()
    }

    #[test]
    fn gain_at_one_metre_is_the_path_power() {
        let p = PropagationParams::default();
        assert_eq!(large_scale_gain_db(&p, 0, 1.0, 0, 0).unwrap(), 20.0);
    }

    #[test]
    fn gain_substitution_cases() {
        let p = PropagationParams::default();
        let g = large_scale_gain_db(&p, 0, 10.0, 2, 1).unwrap();
        assert!((g - 11.8).abs() < 1e-12, "{g}");
        assert_eq!(large_scale_gain_db(&p, 2, 100.0, 0, 0).unwrap(), 6.0);
    }

    #[test]
    fn non_positive_distance_is_a_domain_error() {
        let p = PropagationParams::default();
        assert!(matches!(large_scale_gain_db(&p, 0, 0.0, 0, 0), Err(Error::Domain(_))));
        assert!(matches!(large_scale_gain_db(&p, 0, -3.0, 0, 0), Err(Error::Domain(_))));
        assert!(matches!(
            large_scale_gain_db(&p, 0, f64::NAN, 0, 0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn degenerate_fading_gives_the_large_scale_amplitude() {
        let ch = channel(per_sample(0.0));
        let mut rng = rng::stream(5, 0);
        for office in [0, 7, 14] {
            for sensor in 0..3 {
                let cir = ch.draw_cir(office, sensor, &mut rng).unwrap();
                assert_eq!(cir.taps.len(), 3);
                for (d, tap) in cir.taps.iter().enumerate() {
                    let expect = ch.large_scale_amplitude(office, sensor, d);
                    assert!((tap.norm() - expect).abs() <= 1e-12 * expect);
                }
            }
        }
    }

    #[test]
    fn out_of_range_indices_are_rejected() {
        let ch = channel(per_sample(0.1));
        let mut rng = rng::stream(5, 0);
        assert!(ch.draw_cir(15, 0, &mut rng).is_err());
        assert!(ch.draw_cir(0, 3, &mut rng).is_err());
    }

    #[test]
    fn per_location_fading_is_frozen() {
        let ch = channel(PropagationParams::default());
        let mut rng = rng::stream(9, 0);
        let a = ch.draw_cir(3, 1, &mut rng).unwrap();
        let b = ch.draw_cir(3, 1, &mut rng).unwrap();
        for (x, y) in a.taps.iter().zip(&b.taps) {
            assert!((x.norm() - y.norm()).abs() < 1e-12);
            assert_ne!(x.arg(), y.arg());
        }
    }
}
