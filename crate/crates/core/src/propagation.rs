//! Per-component fields and the channel sum.
//!
//! Every component is a product of one-dimensional aperture factors. The
//! out-of-plane dimension is open for every aperture and contributes the exact
//! factor `1 − j` once per diffraction. With prefactors `j/2` (single) and
//! `−1/4` (double), a fully open aperture reproduces free-space propagation.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fresnel::{ApertureTerm, SPEED_OF_LIGHT};
use crate::geometry::{aperture_projection, effective_source, Point2, Validity, WallAperture};
use crate::scenario::Reflector;

/// Vacuum permittivity, F/m.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;

const J: Complex64 = Complex64::new(0.0, 1.0);

pub fn wavelength(f: f64) -> f64 {
    SPEED_OF_LIGHT / f
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencySpec {
    pub center: f64,
    pub band_fraction: f64,
    pub band_points: usize,
}

impl FrequencySpec {
    pub fn tone(center: f64) -> Self {
        FrequencySpec {
            center,
            band_fraction: 0.0,
            band_points: 1,
        }
    }

    pub fn band(center: f64, band_fraction: f64, band_points: usize) -> Self {
        FrequencySpec {
            center,
            band_fraction,
            band_points,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.center > 0.0) || !self.center.is_finite() {
            return Err(Error::validation("frequency.center", "must be > 0"));
        }
        if !(self.band_fraction >= 0.0) || self.band_fraction >= 2.0 {
            return Err(Error::validation("frequency.band_fraction", "must be in [0, 2)"));
        }
        if self.band_points < 1 {
            return Err(Error::validation("frequency.band_points", "must be >= 1"));
        }
        if self.band_fraction == 0.0 && self.band_points != 1 {
            return Err(Error::validation(
                "frequency.band_points",
                "must be 1 when band_fraction is 0",
            ));
        }
        Ok(())
    }

    /// Equally spaced sub-frequencies over `center·(1 ± b/2)`, endpoints included.
    pub fn sub_frequencies(&self) -> Vec<f64> {
        if self.band_points <= 1 {
            return vec![self.center];
        }
        let lo = self.center * (1.0 - 0.5 * self.band_fraction);
        let span = self.center * self.band_fraction;
        let n = self.band_points - 1;
        (0..=n).map(|i| lo + span * i as f64 / n as f64).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transmitter {
    pub position: Point2,
    /// P_in, watts.
    pub input_power: f64,
    /// Linear power gain G_tr.
    pub gain: f64,
    /// Opening in the walls around the transmitter; `None` means no walls.
    pub aperture: Option<WallAperture>,
}

impl Transmitter {
    pub fn isotropic(position: Point2, input_power: f64) -> Self {
        Transmitter {
            position,
            input_power,
            gain: 1.0,
            aperture: None,
        }
    }

    pub fn with_aperture(mut self, aperture: WallAperture) -> Self {
        self.aperture = Some(aperture);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.position.is_finite() {
            return Err(Error::validation("transmitter.position", "must be finite"));
        }
        if !(self.input_power > 0.0) || !self.input_power.is_finite() {
            return Err(Error::validation("transmitter.power_w", "must be > 0"));
        }
        if !(self.gain > 0.0) || !self.gain.is_finite() {
            return Err(Error::validation("transmitter.gain", "must be > 0"));
        }
        if let Some(a) = &self.aperture {
            if !(a.lower <= a.upper) {
                return Err(Error::validation(
                    "transmitter.aperture",
                    "open interval must satisfy lower <= upper",
                ));
            }
        }
        Ok(())
    }

    pub fn amplitude(&self) -> Result<f64> {
        transmit_amplitude(self, self.gain)
    }
}

/// Receive antenna amplitude pattern g_rx(angle of arrival).
#[derive(Debug, Clone, PartialEq)]
pub enum Antenna {
    Isotropic {
        gain: f64,
    },
    /// Flat main lobe of `beamwidth_deg` around `boresight_deg`, `side_gain` elsewhere.
    Sector {
        boresight_deg: f64,
        beamwidth_deg: f64,
        main_gain: f64,
        side_gain: f64,
    },
}

impl Default for Antenna {
    fn default() -> Self {
        Antenna::Isotropic { gain: 1.0 }
    }
}

impl Antenna {
    pub fn gain(&self, aoa_deg: f64) -> f64 {
        match *self {
            Antenna::Isotropic { gain } => gain,
            Antenna::Sector {
                boresight_deg,
                beamwidth_deg,
                main_gain,
                side_gain,
            } => {
                let off = (aoa_deg - boresight_deg + 180.0).rem_euclid(360.0) - 180.0;
                if off.abs() <= 0.5 * beamwidth_deg {
                    main_gain
                } else {
                    side_gain
                }
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Antenna::Isotropic { gain } => gain >= 0.0 && gain.is_finite(),
            Antenna::Sector {
                beamwidth_deg,
                main_gain,
                side_gain,
                ..
            } => {
                main_gain >= 0.0
                    && side_gain >= 0.0
                    && main_gain.is_finite()
                    && side_gain.is_finite()
                    && beamwidth_deg > 0.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::validation("antenna", "gains must be >= 0 and beamwidth > 0"))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentStatus {
    Ok,
    /// The component could not be evaluated for this point and contributes 0.
    Skipped(SkipReason),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkipReason {
    /// Field point behind the reflector (same side as its image source).
    BehindReflector,
    /// Propagation line parallel to the reflector.
    Parallel,
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComponentField {
    /// 0 is the direct component, m ≥ 1 the reflectors in scenario order.
    pub index: usize,
    pub value: Complex64,
    pub aoa_deg: f64,
    pub path_length: f64,
    pub status: ComponentStatus,
}

impl ComponentField {
    fn skipped(index: usize, aoa_deg: f64, reason: SkipReason) -> Self {
        ComponentField {
            index,
            value: Complex64::new(0.0, 0.0),
            aoa_deg,
            path_length: f64::NAN,
            status: ComponentStatus::Skipped(reason),
        }
    }

    pub fn is_skipped(&self) -> bool {
        matches!(self.status, ComponentStatus::Skipped(_))
    }
}

/// `A_tr = √(G·P_in/(2π c ε₀))`.
pub fn transmit_amplitude(tx: &Transmitter, direction_gain: f64) -> Result<f64> {
    if !(tx.input_power > 0.0) || !tx.input_power.is_finite() {
        return Err(Error::InvalidTransmitter(format!(
            "input power must be > 0, got {}",
            tx.input_power
        )));
    }
    if !(direction_gain > 0.0) || !direction_gain.is_finite() {
        return Err(Error::InvalidTransmitter(format!(
            "gain must be > 0, got {direction_gain}"
        )));
    }
    Ok((direction_gain * tx.input_power / (2.0 * PI * SPEED_OF_LIGHT * EPSILON_0)).sqrt())
}

/// First leg: transmitter through its wall opening to `target`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TxLeg {
    /// In-plane aperture factor Fr(w_u1tr, w_u2tr).
    pub term: Complex64,
    /// `|r_txaper − r_tx| + |target − r_txaper|`.
    pub path: f64,
}

/// The wall only acts when it lies between transmitter and target; otherwise
/// the leg is free space.
pub fn tx_leg(tx: &Transmitter, target: Point2, f: f64) -> Result<TxLeg> {
    let path = tx.position.distance(target);
    if path == 0.0 {
        return Err(Error::DegenerateGeometry("target at the transmitter".into()));
    }
    let open = TxLeg {
        term: ApertureTerm::OPEN.value,
        path,
    };
    let Some(wall) = tx.aperture.as_ref() else {
        return Ok(open);
    };
    if wall.is_fully_open() {
        return Ok(open);
    }
    let geo = match wall.projection(tx.position, target) {
        Ok(g) => g,
        Err(Error::NoIntersection(_)) => return Ok(open),
        Err(e) => return Err(e),
    };
    if geo.validity == Validity::SameSide {
        return Ok(open);
    }
    if geo.r1 == 0.0 || geo.r2 == 0.0 {
        return Err(Error::DegenerateGeometry("point on the wall line".into()));
    }
    Ok(TxLeg {
        term: geo.aperture_term(f)?.value,
        path,
    })
}

/// Non-reflected component: one diffraction through the transmitter opening.
pub fn direct_component(tx: &Transmitter, point: Point2, f: f64) -> Result<ComponentField> {
    let amp = tx.amplitude()?;
    direct_with_amplitude(tx, amp, point, f)
}

fn direct_with_amplitude(tx: &Transmitter, amp: f64, point: Point2, f: f64) -> Result<ComponentField> {
    let leg = tx_leg(tx, point, f)?;
    let lambda = wavelength(f);
    let phase = Complex64::from_polar(1.0, 2.0 * PI * leg.path / lambda);
    let value = 0.5 * J * amp * phase * leg.term * ApertureTerm::OPEN.value / leg.path;
    Ok(ComponentField {
        index: 0,
        value,
        aoa_deg: (point - tx.position).angle_deg(),
        path_length: leg.path,
        status: ComponentStatus::Ok,
    })
}

/// Reflector-side data that do not depend on the field point.
#[derive(Debug, Clone)]
struct ReflectorLeg {
    index: usize,
    reflector: Reflector,
    eff: Point2,
    /// |center − eff|
    r1: f64,
    /// `−¼·A·ℜ·e^{jφ}·Fr_tr·(1−j)²/d_tx` and the first-leg path length.
    factor: Complex64,
    tx_path: f64,
}

impl ReflectorLeg {
    fn new(tx: &Transmitter, amp: f64, index: usize, reflector: &Reflector, f: f64) -> Result<Self> {
        let seg = &reflector.geometry;
        let eff = effective_source(tx.position, seg, reflector.radius)?;
        let leg = tx_leg(tx, seg.center, f)?;
        let open = ApertureTerm::OPEN.value;
        let factor = -0.25
            * amp
            * reflector.reflectivity
            * Complex64::from_polar(1.0, reflector.phase_deg.to_radians())
            * open
            * leg.term
            * open
            / leg.path;
        Ok(ReflectorLeg {
            index,
            reflector: reflector.clone(),
            eff,
            r1: eff.distance(seg.center),
            factor,
            tx_path: leg.path,
        })
    }

    fn field(&self, point: Point2, f: f64) -> ComponentField {
        let seg = &self.reflector.geometry;
        let aoa = (point - seg.center).angle_deg();
        let geo = match aperture_projection(self.eff, point, seg) {
            Ok(g) => g,
            Err(Error::NoIntersection(_)) => return ComponentField::skipped(self.index, aoa, SkipReason::Parallel),
            Err(_) => return ComponentField::skipped(self.index, aoa, SkipReason::Degenerate),
        };
        if geo.validity == Validity::SameSide {
            return ComponentField::skipped(self.index, aoa, SkipReason::BehindReflector);
        }
        let term = match geo.aperture_term(f) {
            Ok(t) => t.value,
            Err(_) => return ComponentField::skipped(self.index, aoa, SkipReason::Degenerate),
        };
        // Phase path: transmitter to reflector, then the straight image path
        // from the effective source, less the image-to-reflector distance.
        let path = self.tx_path + self.eff.distance(point) - self.r1;
        let lambda = wavelength(f);
        let phase = Complex64::from_polar(1.0, 2.0 * PI * path / lambda);
        let value = self.factor * phase * term * (geo.r1 / (geo.r1 + geo.r2));
        ComponentField {
            index: self.index,
            value,
            aoa_deg: aoa,
            path_length: path,
            status: ComponentStatus::Ok,
        }
    }
}

/// Reflected component m: transmitter opening → reflector center, then the
/// effective source through the reflector aperture to `point`.
pub fn double_diffraction_component(
    tx: &Transmitter,
    reflector: &Reflector,
    index: usize,
    point: Point2,
    f: f64,
) -> Result<ComponentField> {
    let amp = tx.amplitude()?;
    Ok(ReflectorLeg::new(tx, amp, index, reflector, f)?.field(point, f))
}

/// Channel coefficient at one point and frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSample {
    pub total: Complex64,
    pub parts: Vec<ComponentField>,
}

/// Evaluates the channel at many points for one frequency, sharing the
/// point-independent first-leg computations.
#[derive(Debug, Clone)]
pub struct ChannelEvaluator<'a> {
    tx: &'a Transmitter,
    antenna: &'a Antenna,
    amp: f64,
    f: f64,
    legs: Vec<Option<ReflectorLeg>>,
}

impl<'a> ChannelEvaluator<'a> {
    pub fn new(tx: &'a Transmitter, reflectors: &[Reflector], antenna: &'a Antenna, f: f64) -> Result<Self> {
        if !(f > 0.0) || !f.is_finite() {
            return Err(Error::InvalidGeometry(format!("frequency must be > 0, got {f}")));
        }
        let amp = tx.amplitude()?;
        let legs = reflectors
            .iter()
            .enumerate()
            .map(|(i, r)| match ReflectorLeg::new(tx, amp, i + 1, r, f) {
                Ok(leg) => Some(leg),
                Err(e) => {
                    log::warn!("reflector {} skipped: {e}", i + 1);
                    None
                }
            })
            .collect();
        Ok(ChannelEvaluator {
            tx,
            antenna,
            amp,
            f,
            legs,
        })
    }

    pub fn frequency(&self) -> f64 {
        self.f
    }

    pub fn component_count(&self) -> usize {
        self.legs.len() + 1
    }

    pub fn sample(&self, point: Point2) -> ChannelSample {
        let mut parts = Vec::with_capacity(self.legs.len() + 1);
        parts.push(match direct_with_amplitude(self.tx, self.amp, point, self.f) {
            Ok(c) => c,
            Err(_) => ComponentField::skipped(0, 0.0, SkipReason::Degenerate),
        });
        for (i, leg) in self.legs.iter().enumerate() {
            parts.push(match leg {
                Some(l) => l.field(point, self.f),
                None => ComponentField::skipped(i + 1, 0.0, SkipReason::Degenerate),
            });
        }
        let total = weighted_sum(&parts, self.antenna);
        ChannelSample { total, parts }
    }

    /// Only the total, without keeping the per-component list.
    pub fn total(&self, point: Point2) -> Complex64 {
        let mut sum = match direct_with_amplitude(self.tx, self.amp, point, self.f) {
            Ok(c) => self.antenna.gain(c.aoa_deg) * c.value,
            Err(_) => Complex64::new(0.0, 0.0),
        };
        for leg in self.legs.iter().flatten() {
            let c = leg.field(point, self.f);
            if !c.is_skipped() {
                sum += self.antenna.gain(c.aoa_deg) * c.value;
            }
        }
        sum
    }
}

fn weighted_sum(parts: &[ComponentField], antenna: &Antenna) -> Complex64 {
    parts
        .iter()
        .filter(|c| !c.is_skipped())
        .map(|c| antenna.gain(c.aoa_deg) * c.value)
        .sum()
}

/// `h = Σ_m g_rx(θ_m)·h_m` over the direct and all reflected components.
pub fn channel_coefficient(
    tx: &Transmitter,
    reflectors: &[Reflector],
    antenna: &Antenna,
    point: Point2,
    f: f64,
) -> Result<ChannelSample> {
    Ok(ChannelEvaluator::new(tx, reflectors, antenna, f)?.sample(point))
}

/// Mean of |h|² over the sub-frequencies of `spec`.
pub fn band_average_power(
    tx: &Transmitter,
    reflectors: &[Reflector],
    antenna: &Antenna,
    point: Point2,
    spec: &FrequencySpec,
) -> Result<f64> {
    spec.validate()?;
    let freqs = spec.sub_frequencies();
    let mut acc = 0.0;
    for f in &freqs {
        acc += ChannelEvaluator::new(tx, reflectors, antenna, *f)?
            .total(point)
            .norm_sqr();
    }
    Ok(acc / freqs.len() as f64)
}

/// `P_rx = c·ε₀·λ²·|Σ g_rx,m E_m|²/(8π)`.
pub fn received_power(parts: &[ComponentField], antenna: &Antenna, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidArgument(format!("wavelength must be > 0, got {lambda}")));
    }
    let sum = weighted_sum(parts, antenna);
    Ok(SPEED_OF_LIGHT * EPSILON_0 * lambda * lambda * sum.norm_sqr() / (8.0 * PI))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fresnel::ExtReal;
    use crate::geometry::Segment;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn knife_tx() -> Transmitter {
        // wall along x = 0, open below y = 0
        Transmitter::isotropic(Point2::new(-10.0, 0.0), 1.0).with_aperture(WallAperture::new(
            Point2::new(0.0, 0.0),
            90.0,
            ExtReal::NegInf,
            ExtReal::Finite(0.0),
        ))
    }

    #[test]
    fn amplitude_law() {
        let tx = Transmitter::isotropic(Point2::default(), 1.0);
        let a1 = transmit_amplitude(&tx, 1.0).unwrap();
        assert!(rel(a1, 7.743_286_875_264_441) < 1e-12);
        let tx2 = Transmitter::isotropic(Point2::default(), 2.0);
        assert!(rel(transmit_amplitude(&tx2, 1.0).unwrap(), a1 * 2f64.sqrt()) < 1e-14);
        let unit = Transmitter::isotropic(Point2::default(), 2.0 * PI * SPEED_OF_LIGHT * EPSILON_0);
        assert!(rel(transmit_amplitude(&unit, 1.0).unwrap(), 1.0) < 1e-14);
        assert!(transmit_amplitude(&tx, 0.0).is_err());
        let dead = Transmitter::isotropic(Point2::default(), 0.0);
        assert!(matches!(
            transmit_amplitude(&dead, 1.0),
            Err(Error::InvalidTransmitter(_))
        ));
    }

    #[test]
    fn open_direct_is_free_space() {
        let tx = Transmitter::isotropic(Point2::new(1.0, 2.0), 3.0);
        let p = Point2::new(7.0, -4.0);
        let c = direct_component(&tx, p, 2.4e9).unwrap();
        let expect = tx.amplitude().unwrap() / tx.position.distance(p);
        assert!(rel(c.value.norm(), expect) < 1e-12);
        assert!((c.aoa_deg - 315.0).abs() < 1e-9);
    }

    #[test]
    fn boundary_point_is_half_amplitude() {
        let tx = knife_tx();
        // on the straight line through the edge
        let p = Point2::new(10.0, 0.0);
        for f in [2.4e9, 30e9, 60e9] {
            let c = direct_component(&tx, p, f).unwrap();
            let open = tx.amplitude().unwrap() / 20.0;
            assert!(rel(c.value.norm(), 0.5 * open) < 1e-12, "f={f}");
        }
    }

    #[test]
    fn deep_shadow_decays() {
        let tx = knife_tx();
        let mut last = f64::INFINITY;
        for y in [1.0, 2.0, 4.0, 8.0] {
            let v = direct_component(&tx, Point2::new(10.0, y), 30e9).unwrap().value.norm();
            assert!(v < last);
            last = v;
        }
        let open = tx.amplitude().unwrap() / 20.0;
        assert!(last / open < 0.01);
    }

    fn mirror_reflector(length: f64) -> Reflector {
        Reflector::flat(Segment::new(Point2::new(5.0, 0.0), length, 90.0))
    }

    #[test]
    fn open_reflector_closed_form() {
        let tx = Transmitter::isotropic(Point2::new(0.0, 0.0), 1.0);
        let refl = mirror_reflector(1e9);
        let p = Point2::new(1.0, 3.0);
        let c = double_diffraction_component(&tx, &refl, 1, p, 2.4e9).unwrap();
        let r1 = 5.0;
        let r2 = p.distance(Point2::new(5.0, 0.0));
        let expect = tx.amplitude().unwrap() * r1 / ((r1 + r2) * 5.0);
        assert!(rel(c.value.norm(), expect) < 1e-9);
    }

    #[test]
    fn zero_length_reflector_is_silent() {
        let tx = Transmitter::isotropic(Point2::new(0.0, 0.0), 1.0);
        let c = double_diffraction_component(&tx, &mirror_reflector(0.0), 1, Point2::new(1.0, 0.5), 2.4e9).unwrap();
        assert_eq!(c.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn reflector_edge_at_crossing_is_half() {
        // Long reflector whose lower edge sits where the image ray crosses it.
        let eff = Point2::new(10.0, 0.0);
        let p = Point2::new(0.0, 4.0);
        let seg = Segment::new(Point2::new(5.0, 2.0 + 500.0), 1000.0, 90.0);
        for f in [2.4e9, 30e9] {
            let g = aperture_projection(eff, p, &seg).unwrap();
            let term = g.aperture_term(f).unwrap().value;
            assert!((term - Complex64::new(0.5, -0.5)).norm() < 2e-3, "{term}");
        }
    }

    #[test]
    fn behind_reflector_is_skipped() {
        let tx = Transmitter::isotropic(Point2::new(0.0, 0.0), 1.0);
        let c = double_diffraction_component(&tx, &mirror_reflector(2.0), 1, Point2::new(8.0, 0.0), 2.4e9).unwrap();
        assert_eq!(c.status, ComponentStatus::Skipped(SkipReason::BehindReflector));
        assert_eq!(c.value.norm(), 0.0);
    }

    #[test]
    fn swapped_edges_flip_sign() {
        let tx = Transmitter::isotropic(Point2::new(0.0, 0.0), 1.0);
        let p = Point2::new(1.0, 2.0);
        let a = double_diffraction_component(
            &tx,
            &Reflector::flat(Segment::new(Point2::new(5.0, 0.3), 1.2, 90.0)),
            1,
            p,
            5e9,
        )
        .unwrap();
        let b = double_diffraction_component(
            &tx,
            &Reflector::flat(Segment::new(Point2::new(5.0, 0.3), 1.2, 270.0)),
            1,
            p,
            5e9,
        )
        .unwrap();
        // reversing the segment direction swaps (u1, u2) and negates both
        assert!((a.value - b.value).norm() < 1e-12 * a.value.norm());
    }

    #[test]
    fn channel_sum_and_interference() {
        let tx = Transmitter::isotropic(Point2::new(0.0, 0.0), 1.0);
        let ant = Antenna::default();
        let p = Point2::new(3.0, 4.0);
        let s = channel_coefficient(&tx, &[], &ant, p, 2.4e9).unwrap();
        assert_eq!(s.parts.len(), 1);
        assert_eq!(s.total, s.parts[0].value);
        let mut parts = vec![s.parts[0], s.parts[0]];
        parts[1].value = -parts[1].value;
        assert!(weighted_sum(&parts, &ant).norm() < 1e-18);
    }

    #[test]
    fn band_average_reduces_to_tone() {
        let tx = Transmitter::isotropic(Point2::new(0.0, 0.0), 1.0);
        let refl = vec![mirror_reflector(3.0)];
        let ant = Antenna::default();
        let p = Point2::new(2.0, 1.0);
        let tone = band_average_power(&tx, &refl, &ant, p, &FrequencySpec::tone(5e9)).unwrap();
        let direct = channel_coefficient(&tx, &refl, &ant, p, 5e9).unwrap().total.norm_sqr();
        assert!(rel(tone, direct) < 1e-14);
        // no reflectors: |h|² is frequency flat
        let flat = band_average_power(&tx, &[], &ant, p, &FrequencySpec::band(5e9, 0.01, 5)).unwrap();
        let one = channel_coefficient(&tx, &[], &ant, p, 5e9).unwrap().total.norm_sqr();
        assert!(rel(flat, one) < 1e-12);
    }

    #[test]
    fn sub_frequency_placement() {
        let f = FrequencySpec::band(30e9, 0.01, 5).sub_frequencies();
        assert_eq!(f.len(), 5);
        assert!((f[0] - 29.85e9).abs() < 1.0 && (f[4] - 30.15e9).abs() < 1.0);
        assert!((f[2] - 30e9).abs() < 1e-3);
        assert!(FrequencySpec::band(30e9, 0.0, 3).validate().is_err());
        assert!(FrequencySpec::band(30e9, 0.01, 0).validate().is_err());
    }

    #[test]
    fn power_square_law() {
        let mut c = ComponentField {
            index: 0,
            value: Complex64::new(0.3, 0.4),
            aoa_deg: 0.0,
            path_length: 1.0,
            status: ComponentStatus::Ok,
        };
        let ant = Antenna::default();
        let p1 = received_power(&[c], &ant, 0.1).unwrap();
        c.value *= 2.0;
        let p2 = received_power(&[c], &ant, 0.1).unwrap();
        assert!(rel(p2, 4.0 * p1) < 1e-14);
        c.value = Complex64::new(0.0, 0.0);
        assert_eq!(received_power(&[c], &ant, 0.1).unwrap(), 0.0);
    }

    #[test]
    fn sector_antenna() {
        let a = Antenna::Sector {
            boresight_deg: 350.0,
            beamwidth_deg: 40.0,
            main_gain: 3.0,
            side_gain: 0.1,
        };
        assert_eq!(a.gain(5.0), 3.0);
        assert_eq!(a.gain(320.0), 0.1);
    }
}
