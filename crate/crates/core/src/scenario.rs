//! Scene description, scenario documents, roughness and random scenes.
//!
//! All randomness in the crate is drawn here, from ChaCha8 streams keyed by
//! (master seed, stream tag, object index), so adding an object never shifts
//! the draws of another.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fresnel::ExtReal;
use crate::geometry::{cross_line, Point2, Segment, WallAperture};
use crate::propagation::{Antenna, FrequencySpec, Transmitter};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoughnessSpec {
    pub sub_length: f64,
    /// Half-range of the uniform perpendicular displacement.
    pub max_offset: f64,
    pub seed_offset: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reflector {
    pub geometry: Segment,
    pub reflectivity: f64,
    pub phase_deg: f64,
    pub radius: Option<f64>,
    pub roughness: Option<RoughnessSpec>,
}

impl Reflector {
    pub fn flat(geometry: Segment) -> Self {
        Reflector {
            geometry,
            reflectivity: 1.0,
            phase_deg: 0.0,
            radius: None,
            roughness: None,
        }
    }

    /// Flat reflector whose surface normal points along `facing_deg`.
    pub fn facing(center: Point2, length: f64, facing_deg: f64) -> Self {
        Reflector::flat(Segment::new(center, length, facing_deg - 90.0))
    }

    pub fn with_roughness(mut self, spec: RoughnessSpec) -> Self {
        self.roughness = Some(spec);
        self
    }

    pub fn validate(&self, field: &str) -> Result<()> {
        let g = &self.geometry;
        if !g.center.is_finite() || !g.angle_deg.is_finite() {
            return Err(Error::validation(field, "center and angle must be finite"));
        }
        if !(g.length >= 0.0) || !g.length.is_finite() {
            return Err(Error::validation(format!("{field}.length"), "must be >= 0"));
        }
        if !(0.0..=1.0).contains(&self.reflectivity) {
            return Err(Error::validation(
                format!("{field}.reflectivity"),
                "reflectivity out of [0,1]",
            ));
        }
        if !self.phase_deg.is_finite() {
            return Err(Error::validation(format!("{field}.phase_deg"), "must be finite"));
        }
        if let Some(r) = self.radius {
            if !(r > 0.0) || !r.is_finite() {
                return Err(Error::validation(format!("{field}.radius"), "must be > 0"));
            }
        }
        if let Some(s) = &self.roughness {
            if !(s.sub_length > 0.0) || !s.sub_length.is_finite() {
                return Err(Error::validation(
                    format!("{field}.roughness.sub_length"),
                    "must be > 0",
                ));
            }
            if !(s.max_offset >= 0.0) || !s.max_offset.is_finite() {
                return Err(Error::validation(
                    format!("{field}.roughness.max_offset"),
                    "must be >= 0",
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSpec {
    pub start: Point2,
    pub end: Point2,
    pub samples: usize,
}

impl PathSpec {
    pub fn new(start: Point2, end: Point2, samples: usize) -> Self {
        PathSpec { start, end, samples }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.start.is_finite() || !self.end.is_finite() {
            return Err(Error::validation("path", "endpoints must be finite"));
        }
        if self.samples < 2 {
            return Err(Error::validation("path.samples", "must be >= 2"));
        }
        if self.start == self.end {
            return Err(Error::validation("path", "start and end must differ"));
        }
        Ok(())
    }

    pub fn length(&self) -> f64 {
        self.start.distance(self.end)
    }

    pub fn spacing(&self) -> f64 {
        self.length() / (self.samples - 1) as f64
    }
}

/// `samples` equally spaced points from start to end, both included.
pub fn sample_path(path: &PathSpec) -> Vec<Point2> {
    let n = path.samples.max(2) - 1;
    let d = path.end - path.start;
    (0..=n)
        .map(|i| {
            if i == n {
                path.end
            } else {
                path.start + d * (i as f64 / n as f64)
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub transmitter: Transmitter,
    pub reflectors: Vec<Reflector>,
    pub antenna: Antenna,
    pub path: PathSpec,
    pub frequencies: Vec<FrequencySpec>,
    pub seed: u64,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.transmitter.validate()?;
        for (i, r) in self.reflectors.iter().enumerate() {
            r.validate(&format!("reflectors[{i}]"))?;
        }
        self.antenna.validate()?;
        self.path.validate()?;
        if self.frequencies.is_empty() {
            return Err(Error::validation("frequencies", "at least one frequency required"));
        }
        for (i, f) in self.frequencies.iter().enumerate() {
            f.validate().map_err(|e| match e {
                Error::Validation { field, constraint } => Error::Validation {
                    field: field.replacen("frequency", &format!("frequencies[{i}]"), 1),
                    constraint,
                },
                other => other,
            })?;
        }
        Ok(())
    }

    /// Non-fatal remarks about the scene.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let tx = &self.transmitter;
        if let Some(wall) = &tx.aperture {
            for (i, r) in self.reflectors.iter().enumerate() {
                if spans_shadow_boundary(tx.position, wall, &r.geometry) {
                    out.push(format!(
                        "reflector {} spans the transmitter shadow boundary; consider splitting it into smaller parts",
                        i + 1
                    ));
                }
            }
        }
        for (i, r) in self.reflectors.iter().enumerate() {
            if let Some(s) = &r.roughness {
                if s.sub_length > r.geometry.length {
                    out.push(format!(
                        "reflector {}: roughness sub_length exceeds reflector length",
                        i + 1
                    ));
                }
            }
        }
        out
    }

    /// The reflector list with every rough reflector replaced by its pieces.
    pub fn expanded_reflectors(&self) -> Vec<Reflector> {
        expand_reflectors(&self.reflectors, self.seed)
    }

    /// SHA-256 over a canonical rendering of the scene.
    pub fn hash_hex(&self) -> String {
        let digest = Sha256::digest(format!("{self:?}").as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

pub fn expand_reflectors(reflectors: &[Reflector], master_seed: u64) -> Vec<Reflector> {
    let mut out = Vec::with_capacity(reflectors.len());
    for r in reflectors {
        if r.roughness.is_some() {
            out.extend(roughen(r, master_seed));
        } else {
            out.push(r.clone());
        }
    }
    out
}

fn spans_shadow_boundary(tx: Point2, wall: &WallAperture, seg: &Segment) -> bool {
    let (a, b) = seg.endpoints();
    wall.edges().into_iter().any(|edge| {
        let ray = edge - tx;
        let side = |p: Point2| ray.cross(p - tx);
        let beyond = |p: Point2| {
            cross_line(tx, p, wall.anchor, wall.angle_deg)
                .map(|c| c.t > 0.0 && c.t < 1.0)
                .unwrap_or(false)
        };
        side(a) * side(b) < 0.0 && (beyond(a) || beyond(b))
    })
}

const STREAM_ROUGH: u64 = 0x524f_5547_4800_0000;
const STREAM_SPAWN: u64 = 0x5350_4157_4e00_0000;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the stream for object `index` under `tag`.
pub fn derive_seed(master: u64, tag: u64, index: u64) -> u64 {
    splitmix(splitmix(splitmix(master) ^ tag) ^ index)
}

pub fn stream(master: u64, tag: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, tag, index))
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        rng.gen_range(lo..=hi)
    } else {
        lo
    }
}

/// Split a rough reflector into contiguous, perpendicularly displaced pieces.
pub fn roughen(reflector: &Reflector, master_seed: u64) -> Vec<Reflector> {
    let Some(spec) = reflector.roughness else {
        return vec![reflector.clone()];
    };
    let g = &reflector.geometry;
    let dir = g.direction();
    let normal = g.normal();
    let piece = |center: Point2, length: f64, index: u64| {
        let mut rng = stream(master_seed, STREAM_ROUGH ^ spec.seed_offset, index);
        let shift = uniform(&mut rng, -spec.max_offset, spec.max_offset);
        Reflector {
            geometry: Segment::new(center + normal * shift, length, g.angle_deg),
            roughness: None,
            ..reflector.clone()
        }
    };
    if spec.sub_length >= g.length {
        if spec.sub_length > g.length {
            log::warn!("roughness sub_length exceeds reflector length; using a single piece");
        }
        return vec![piece(g.center, g.length, 0)];
    }
    let count = (g.length / spec.sub_length - 1e-9).ceil().max(1.0) as usize;
    let start = -0.5 * g.length;
    (0..count)
        .map(|i| {
            let a = start + spec.sub_length * i as f64;
            let b = (a + spec.sub_length).min(0.5 * g.length);
            piece(g.center + dir * (0.5 * (a + b)), b - a, i as u64)
        })
        .collect()
}

/// Ranges for randomly placed reflectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpawnRanges {
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub angle_deg: (f64, f64),
    pub length: (f64, f64),
}

impl Default for SpawnRanges {
    fn default() -> Self {
        SpawnRanges {
            x: (5.0, 20.0),
            y: (-5.0, 7.0),
            angle_deg: (90.0, 270.0),
            length: (0.0, 2.0),
        }
    }
}

/// Which reflector attributes vary between trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpawnToggles {
    pub position: bool,
    pub angle: bool,
    pub length: bool,
}

impl SpawnToggles {
    pub const ALL: SpawnToggles = SpawnToggles {
        position: true,
        angle: true,
        length: true,
    };

    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        if self.position {
            parts.push("position");
        }
        if self.angle {
            parts.push("angle");
        }
        if self.length {
            parts.push("length");
        }
        if parts.is_empty() {
            "none".into()
        } else {
            parts.join("+")
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Draw {
    x: f64,
    y: f64,
    angle: f64,
    length: f64,
}

fn draw(ranges: &SpawnRanges, seed: u64, index: u64) -> Draw {
    let mut rng = stream(seed, STREAM_SPAWN, index);
    Draw {
        x: uniform(&mut rng, ranges.x.0, ranges.x.1),
        y: uniform(&mut rng, ranges.y.0, ranges.y.1),
        angle: uniform(&mut rng, ranges.angle_deg.0, ranges.angle_deg.1),
        length: uniform(&mut rng, ranges.length.0, ranges.length.1),
    }
}

fn reflector_from(d: Draw) -> Reflector {
    Reflector::flat(Segment::new(Point2::new(d.x, d.y), d.length, d.angle))
}

/// Independent uniform draws of center, angle and length per reflector.
pub fn spawn_random_reflectors(count: usize, ranges: &SpawnRanges, seed: u64) -> Vec<Reflector> {
    (0..count as u64)
        .map(|i| reflector_from(draw(ranges, seed, i)))
        .collect()
}

/// Like [`spawn_random_reflectors`], but attributes not selected in `toggles`
/// keep the values drawn with `base_seed`.
pub fn spawn_toggled_reflectors(
    count: usize,
    ranges: &SpawnRanges,
    toggles: SpawnToggles,
    base_seed: u64,
    seed: u64,
) -> Vec<Reflector> {
    (0..count as u64)
        .map(|i| {
            let base = draw(ranges, base_seed, i);
            let trial = draw(ranges, seed, i);
            reflector_from(Draw {
                x: if toggles.position { trial.x } else { base.x },
                y: if toggles.position { trial.y } else { base.y },
                angle: if toggles.angle { trial.angle } else { base.angle },
                length: if toggles.length { trial.length } else { base.length },
            })
        })
        .collect()
}

// ---- scenario documents ----

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Doc {
    transmitter: TxDoc,
    #[serde(default)]
    reflectors: Vec<ReflectorDoc>,
    #[serde(default)]
    antenna: Option<AntennaDoc>,
    path: PathDoc,
    frequencies: Vec<FrequencyDoc>,
    #[serde(default)]
    seed: u64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TxDoc {
    position: [f64; 2],
    #[serde(default = "one")]
    power_w: f64,
    #[serde(default = "one")]
    gain: f64,
    #[serde(default)]
    aperture: Option<ApertureDoc>,
}

/// Open interval `[lower, upper]` along a wall line through `anchor`;
/// a missing bound means the opening extends to infinity on that side.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ApertureDoc {
    anchor: [f64; 2],
    angle_deg: f64,
    #[serde(default)]
    lower: Option<f64>,
    #[serde(default)]
    upper: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReflectorDoc {
    center: [f64; 2],
    length: f64,
    #[serde(default)]
    angle_deg: Option<f64>,
    #[serde(default)]
    facing_deg: Option<f64>,
    #[serde(default = "one")]
    reflectivity: f64,
    #[serde(default)]
    phase_deg: f64,
    #[serde(default)]
    radius: Option<f64>,
    #[serde(default)]
    roughness: Option<RoughnessDoc>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RoughnessDoc {
    sub_length: f64,
    max_offset: f64,
    #[serde(default)]
    seed_offset: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "lowercase")]
enum AntennaDoc {
    Isotropic {
        #[serde(default = "one")]
        gain: f64,
    },
    Sector {
        boresight_deg: f64,
        beamwidth_deg: f64,
        main_gain: f64,
        #[serde(default)]
        side_gain: f64,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PathDoc {
    start: [f64; 2],
    end: [f64; 2],
    samples: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FrequencyDoc {
    center: f64,
    #[serde(default)]
    band_fraction: f64,
    #[serde(default)]
    band_points: Option<usize>,
}

fn one() -> f64 {
    1.0
}

fn pt(a: [f64; 2]) -> Point2 {
    Point2::new(a[0], a[1])
}

/// A validated scenario plus non-fatal warnings.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedScenario {
    pub scenario: Scenario,
    pub warnings: Vec<String>,
}

/// Parse and validate a TOML scenario document.
pub fn load_scenario(document: &str) -> Result<LoadedScenario> {
    let doc: Doc = toml::from_str(document).map_err(|e| Error::Parse(e.to_string()))?;
    let tx = &doc.transmitter;
    let aperture = tx.aperture.as_ref().map(|a| {
        WallAperture::new(
            pt(a.anchor),
            a.angle_deg,
            a.lower.map_or(ExtReal::NegInf, ExtReal::Finite),
            a.upper.map_or(ExtReal::PosInf, ExtReal::Finite),
        )
    });
    let transmitter = Transmitter {
        position: pt(tx.position),
        input_power: tx.power_w,
        gain: tx.gain,
        aperture,
    };
    let mut reflectors = Vec::with_capacity(doc.reflectors.len());
    for (i, r) in doc.reflectors.iter().enumerate() {
        let angle = match (r.angle_deg, r.facing_deg) {
            (Some(a), None) => a,
            (None, Some(f)) => f - 90.0,
            (None, None) => {
                return Err(Error::validation(
                    format!("reflectors[{i}]"),
                    "one of angle_deg or facing_deg is required",
                ))
            }
            (Some(_), Some(_)) => {
                return Err(Error::validation(
                    format!("reflectors[{i}]"),
                    "angle_deg and facing_deg are mutually exclusive",
                ))
            }
        };
        if !angle.is_finite() {
            return Err(Error::validation(
                format!("reflectors[{i}].angle_deg"),
                "must be finite",
            ));
        }
        reflectors.push(Reflector {
            geometry: Segment::new(pt(r.center), r.length, angle),
            reflectivity: r.reflectivity,
            phase_deg: r.phase_deg,
            radius: r.radius,
            roughness: r.roughness.as_ref().map(|s| RoughnessSpec {
                sub_length: s.sub_length,
                max_offset: s.max_offset,
                seed_offset: s.seed_offset.unwrap_or(i as u64),
            }),
        });
    }
    let antenna = match doc.antenna {
        None => Antenna::default(),
        Some(AntennaDoc::Isotropic { gain }) => Antenna::Isotropic { gain },
        Some(AntennaDoc::Sector {
            boresight_deg,
            beamwidth_deg,
            main_gain,
            side_gain,
        }) => Antenna::Sector {
            boresight_deg,
            beamwidth_deg,
            main_gain,
            side_gain,
        },
    };
    let frequencies = doc
        .frequencies
        .iter()
        .map(|f| FrequencySpec {
            center: f.center,
            band_fraction: f.band_fraction,
            band_points: f.band_points.unwrap_or(if f.band_fraction > 0.0 { 5 } else { 1 }),
        })
        .collect();
    let scenario = Scenario {
        transmitter,
        reflectors,
        antenna,
        path: PathSpec::new(pt(doc.path.start), pt(doc.path.end), doc.path.samples),
        frequencies,
        seed: doc.seed,
    };
    scenario.validate()?;
    let warnings = scenario.warnings();
    Ok(LoadedScenario { scenario, warnings })
}

pub fn load_scenario_file(path: &std::path::Path) -> Result<LoadedScenario> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    load_scenario(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
        [transmitter]
        position = [0.0, 0.0]

        [path]
        start = [0.0, 10.0]
        end = [20.0, 10.0]
        samples = 2001

        [[frequencies]]
        center = 2.4e9
    "#;

    #[test]
    fn minimal_document() {
        let l = load_scenario(MINIMAL).unwrap();
        assert!(l.scenario.reflectors.is_empty());
        assert_eq!(l.scenario.transmitter.gain, 1.0);
        assert_eq!(l.scenario.frequencies[0].band_points, 1);
        assert!(l.warnings.is_empty());
    }

    #[test]
    fn reflectivity_out_of_range() {
        let doc = format!(
            "{MINIMAL}\n[[reflectors]]\ncenter = [6.0, 0.0]\nlength = 1.5\nangle_deg = 30.0\nreflectivity = 1.5\n"
        );
        match load_scenario(&doc) {
            Err(Error::Validation { field, constraint }) => {
                assert_eq!(field, "reflectors[0].reflectivity");
                assert!(constraint.contains("reflectivity out of [0,1]"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_key_rejected() {
        let doc = format!("{MINIMAL}\nbogus = 3\n");
        assert!(matches!(load_scenario(&doc), Err(Error::Parse(_))));
    }

    #[test]
    fn garbage_is_parse_error() {
        assert!(matches!(load_scenario("[[[ nope"), Err(Error::Parse(_))));
        assert!(matches!(load_scenario(""), Err(Error::Parse(_))));
    }

    #[test]
    fn facing_angle() {
        let r = Reflector::facing(Point2::new(0.0, 0.0), 1.0, 135.0);
        let n = r.geometry.normal();
        assert!((n.x + 0.5f64.sqrt()).abs() < 1e-12 && (n.y - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn path_sampling() {
        let p = PathSpec::new(Point2::new(0.0, 10.0), Point2::new(20.0, 10.0), 2001);
        let pts = sample_path(&p);
        assert_eq!(pts.len(), 2001);
        assert_eq!(pts[2000], p.end);
        for w in pts.windows(2) {
            assert!((w[0].distance(w[1]) - 0.01).abs() < 1e-12);
        }
        let two = sample_path(&PathSpec::new(p.start, p.end, 2));
        assert_eq!(two, vec![p.start, p.end]);
    }

    fn rough(length: f64, sub: f64, off: f64) -> Reflector {
        Reflector::flat(Segment::new(Point2::new(6.0, 0.0), length, 30.0)).with_roughness(RoughnessSpec {
            sub_length: sub,
            max_offset: off,
            seed_offset: 0,
        })
    }

    #[test]
    fn roughen_counts_and_determinism() {
        let r = rough(1.5, 0.1, 0.05);
        let a = roughen(&r, 11);
        assert_eq!(a.len(), 15);
        assert_eq!(a, roughen(&r, 11));
        assert_ne!(a, roughen(&r, 12));
        let total: f64 = a.iter().map(|p| p.geometry.length).sum();
        assert!((total - 1.5).abs() < 1e-12);
        for p in &a {
            let d = r.geometry.signed_distance(p.geometry.center);
            assert!(d.abs() <= 0.05 + 1e-12);
            assert_eq!(p.geometry.angle_deg, r.geometry.angle_deg);
        }
        assert_eq!(roughen(&rough(1.5, 0.4, 0.0), 3).len(), 4);
    }

    #[test]
    fn zero_offset_is_collinear() {
        for p in roughen(&rough(1.5, 0.1, 0.0), 5) {
            assert!(rough(1.5, 0.1, 0.0).geometry.signed_distance(p.geometry.center).abs() < 1e-12);
        }
    }

    #[test]
    fn oversized_sub_length() {
        let v = roughen(&rough(0.5, 1.0, 0.01), 1);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].geometry.length, 0.5);
    }

    #[test]
    fn spawning() {
        let ranges = SpawnRanges::default();
        assert!(spawn_random_reflectors(0, &ranges, 1).is_empty());
        let a = spawn_random_reflectors(5, &ranges, 1);
        let b = spawn_random_reflectors(5, &ranges, 2);
        assert_ne!(a, b);
        assert_eq!(a, spawn_random_reflectors(5, &ranges, 1));
        // adding a reflector leaves earlier ones alone
        assert_eq!(&spawn_random_reflectors(6, &ranges, 1)[..5], &a[..]);
        let fixed = spawn_toggled_reflectors(
            3,
            &ranges,
            SpawnToggles {
                position: false,
                angle: true,
                length: false,
            },
            9,
            4,
        );
        let base = spawn_random_reflectors(3, &ranges, 9);
        for (f, b) in fixed.iter().zip(&base) {
            assert_eq!(f.geometry.center, b.geometry.center);
            assert_eq!(f.geometry.length, b.geometry.length);
        }
    }

    #[test]
    fn shadow_boundary_warning() {
        let doc = r#"
            [transmitter]
            position = [-5.0, -3.0]
            [transmitter.aperture]
            anchor = [-3.0, 0.0]
            angle_deg = 90.0
            upper = -1.0

            [[reflectors]]
            center = [6.0, 4.0]
            length = 30.0
            angle_deg = 90.0

            [path]
            start = [0.0, 10.0]
            end = [20.0, 10.0]
            samples = 11

            [[frequencies]]
            center = 2.4e9
        "#;
        let l = load_scenario(doc).unwrap();
        assert_eq!(l.warnings.len(), 1, "{:?}", l.warnings);
    }

    #[test]
    fn hash_is_stable() {
        let a = load_scenario(MINIMAL).unwrap().scenario;
        let b = load_scenario(MINIMAL).unwrap().scenario;
        assert_eq!(a.hash_hex(), b.hash_hex());
        assert_eq!(a.hash_hex().len(), 64);
    }
}
