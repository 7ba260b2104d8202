//! Channel traces along a path and the quantities read off them: LoS
//! reference level, threshold crossings and delays, strongest component and
//! its AoA, reflector regime, spatial field maps.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::{aperture_projection, fresnel_zone_clear, mirror_point, Point2, Segment, Validity};
use crate::propagation::{wavelength, Antenna, ChannelEvaluator, ComponentField, FrequencySpec, Transmitter};
use crate::scenario::{sample_path, PathSpec, Reflector, Scenario};

/// The channel at one carrier (or band) along the path.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyTrace {
    pub spec: FrequencySpec,
    /// Channel total at the center frequency.
    pub totals: Vec<Complex64>,
    /// Per-point component list at the center frequency, when requested.
    pub parts: Option<Vec<Vec<ComponentField>>>,
    /// Mean |h|² over the band; `None` for a pure tone.
    pub band_power: Option<Vec<f64>>,
    /// Whether the first Fresnel zone from the transmitter is clear of its walls.
    pub los: Vec<bool>,
}

impl FrequencyTrace {
    /// |h| for a tone, √(band power) for a band.
    pub fn amplitude(&self) -> Vec<f64> {
        match &self.band_power {
            Some(p) => p.iter().map(|v| v.sqrt()).collect(),
            None => self.totals.iter().map(|h| h.norm()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelTrace {
    pub points: Vec<Point2>,
    /// Distance of each point from the path start.
    pub positions: Vec<f64>,
    pub tx_position: Point2,
    pub antenna: Antenna,
    pub frequencies: Vec<FrequencyTrace>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TraceOptions {
    pub keep_parts: bool,
    pub exec: Exec,
}

/// Evaluate the scenario (with rough reflectors expanded) along its path.
pub fn compute_trace(scenario: &Scenario, opts: TraceOptions) -> Result<ChannelTrace> {
    scenario.validate()?;
    let reflectors = scenario.expanded_reflectors();
    compute_trace_with(
        &scenario.transmitter,
        &reflectors,
        &scenario.antenna,
        &scenario.path,
        &scenario.frequencies,
        opts,
    )
}

/// Evaluate an already expanded scene along `path`.
pub fn compute_trace_with(
    tx: &Transmitter,
    reflectors: &[Reflector],
    antenna: &Antenna,
    path: &PathSpec,
    frequencies: &[FrequencySpec],
    opts: TraceOptions,
) -> Result<ChannelTrace> {
    path.validate()?;
    let points = sample_path(path);
    let positions: Vec<f64> = points.iter().map(|p| p.distance(path.start)).collect();
    let reach = 100.0 + 10.0 * points.iter().map(|p| p.distance(tx.position)).fold(0.0, f64::max);
    let walls: Vec<Segment> = tx.aperture.map(|a| a.wall_segments(reach)).unwrap_or_default();
    let mut traces = Vec::with_capacity(frequencies.len());
    for spec in frequencies {
        spec.validate()?;
        let center = ChannelEvaluator::new(tx, reflectors, antenna, spec.center)?;
        let (totals, parts) = if opts.keep_parts {
            let samples = opts.exec.map(points.len(), |i| center.sample(points[i]));
            let totals = samples.iter().map(|s| s.total).collect();
            let parts = samples.into_iter().map(|s| s.parts).collect();
            (totals, Some(parts))
        } else {
            (opts.exec.map(points.len(), |i| center.total(points[i])), None)
        };
        let band_power = if spec.band_points > 1 {
            let evals = spec
                .sub_frequencies()
                .into_iter()
                .map(|f| ChannelEvaluator::new(tx, reflectors, antenna, f))
                .collect::<Result<Vec<_>>>()?;
            let n = evals.len() as f64;
            Some(opts.exec.map(points.len(), |i| {
                evals.iter().map(|e| e.total(points[i]).norm_sqr()).sum::<f64>() / n
            }))
        } else {
            None
        };
        let lambda = wavelength(spec.center);
        let los = opts.exec.map(points.len(), |i| {
            fresnel_zone_clear(tx.position, points[i], lambda, &walls)
        });
        traces.push(FrequencyTrace {
            spec: *spec,
            totals,
            parts,
            band_power,
            los,
        });
    }
    Ok(ChannelTrace {
        points,
        positions,
        tx_position: tx.position,
        antenna: antenna.clone(),
        frequencies: traces,
    })
}

impl ChannelTrace {
    fn frequency(&self, fi: usize) -> Result<&FrequencyTrace> {
        self.frequencies
            .get(fi)
            .ok_or_else(|| Error::InvalidArgument(format!("no frequency with index {fi}")))
    }

    /// Index of the trace whose center frequency equals `f`.
    pub fn index_of(&self, f: f64) -> Option<usize> {
        self.frequencies.iter().position(|t| t.spec.center == f)
    }

    fn midpoint_range(&self) -> f64 {
        let mid = (self.points[0] + self.points[self.points.len() - 1]) * 0.5;
        mid.distance(self.tx_position)
    }

    /// Amplitude with the free-space 1/r trend removed, scaled to the path midpoint.
    pub fn compensated(&self, fi: usize) -> Result<Vec<f64>> {
        let t = self.frequency(fi)?;
        let r_mid = self.midpoint_range();
        Ok(t.amplitude()
            .iter()
            .zip(&self.points)
            .map(|(a, p)| a * p.distance(self.tx_position) / r_mid)
            .collect())
    }

    /// Sample spacing along the path.
    pub fn spacing(&self) -> f64 {
        if self.positions.len() < 2 {
            0.0
        } else {
            self.positions[1] - self.positions[0]
        }
    }
}

/// How the LoS reference amplitude is obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LosReference {
    /// Mean over the longest run of points whose first Fresnel zone is clear
    /// of the transmitter walls.
    FresnelClear,
    /// Mean over path positions in `[start, end]` meters.
    Window {
        start: f64,
        end: f64,
    },
    /// The largest compensated amplitude on the path.
    Maximum,
    Explicit(f64),
}

impl Default for LosReference {
    fn default() -> Self {
        LosReference::FresnelClear
    }
}

/// LoS reference amplitude, on the same (compensated) scale as [`ChannelTrace::compensated`].
pub fn estimate_los_average(trace: &ChannelTrace, fi: usize, mode: LosReference) -> Result<f64> {
    let comp = trace.compensated(fi)?;
    let value = match mode {
        LosReference::Explicit(v) => v,
        LosReference::Maximum => comp.iter().copied().fold(f64::NAN, f64::max),
        LosReference::Window { start, end } => {
            let sel: Vec<f64> = comp
                .iter()
                .zip(&trace.positions)
                .filter(|(_, s)| **s >= start && **s <= end)
                .map(|(v, _)| *v)
                .collect();
            mean(&sel).unwrap_or(f64::NAN)
        }
        LosReference::FresnelClear => {
            let los = &trace.frequency(fi)?.los;
            let (mut best, mut run_start) = ((0, 0), None);
            for i in 0..=los.len() {
                let clear = i < los.len() && los[i];
                match (clear, run_start) {
                    (true, None) => run_start = Some(i),
                    (false, Some(s)) => {
                        if i - s > best.1 - best.0 {
                            best = (s, i);
                        }
                        run_start = None;
                    }
                    _ => {}
                }
            }
            mean(&comp[best.0..best.1]).unwrap_or(f64::NAN)
        }
    };
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NoLosReference)
    }
}

fn mean(v: &[f64]) -> Option<f64> {
    if v.is_empty() {
        None
    } else {
        Some(v.iter().sum::<f64>() / v.len() as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Rising,
    Falling,
}

impl Direction {
    pub fn as_str(&self) -> &'static str {
        match self {
            Direction::Rising => "rising",
            Direction::Falling => "falling",
        }
    }
}

/// Direction of travel along the path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Motion {
    Forward,
    Reverse,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingOptions {
    /// Fraction of the LoS reference.
    pub level: f64,
    pub direction: Direction,
    pub motion: Motion,
    /// Crossings within this many path samples of the previous kept one are dropped.
    pub debounce_samples: usize,
}

impl CrossingOptions {
    pub fn new(level: f64, direction: Direction, motion: Motion) -> Self {
        CrossingOptions {
            level,
            direction,
            motion,
            debounce_samples: 2,
        }
    }

    /// Signal dropping to 70% of LoS.
    pub fn falling() -> Self {
        CrossingOptions::new(0.7, Direction::Falling, Motion::Forward)
    }

    /// Signal recovering to 30% of LoS.
    pub fn rising() -> Self {
        CrossingOptions::new(0.3, Direction::Rising, Motion::Forward)
    }

    pub fn with_motion(mut self, motion: Motion) -> Self {
        self.motion = motion;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdEvent {
    pub frequency: f64,
    /// Distance from the path start, m.
    pub position: f64,
    pub direction: Direction,
    pub level: f64,
}

/// Positions where `values` strictly crosses `threshold` in the requested
/// direction, visiting samples in the order of travel.
pub fn crossing_positions(values: &[f64], positions: &[f64], threshold: f64, opts: &CrossingOptions) -> Vec<f64> {
    let n = values.len().min(positions.len());
    let order: Box<dyn Iterator<Item = usize>> = match opts.motion {
        Motion::Forward => Box::new(0..n),
        Motion::Reverse => Box::new((0..n).rev()),
    };
    let spacing = if n >= 2 {
        (positions[n - 1] - positions[0]).abs() / (n - 1) as f64
    } else {
        0.0
    };
    let window = opts.debounce_samples as f64 * spacing;
    let mut out: Vec<f64> = Vec::new();
    let mut prev: Option<(usize, f64)> = None;
    for i in order {
        let s = values[i] - threshold;
        if s == 0.0 || s.is_nan() {
            continue;
        }
        if let Some((j, sp)) = prev {
            let hit = match opts.direction {
                Direction::Falling => sp > 0.0 && s < 0.0,
                Direction::Rising => sp < 0.0 && s > 0.0,
            };
            if hit {
                let x = positions[j] + (positions[i] - positions[j]) * sp / (sp - s);
                let keep = out
                    .last()
                    .map_or(true, |last| (x - last).abs() > window + 1e-12 * spacing);
                if keep {
                    out.push(x);
                }
            }
        }
        prev = Some((i, s));
    }
    out
}

/// Crossings of `level × reference` by the compensated amplitude.
pub fn threshold_crossings(
    trace: &ChannelTrace,
    fi: usize,
    reference: f64,
    opts: &CrossingOptions,
) -> Result<Vec<ThresholdEvent>> {
    if !(opts.level > 0.0 && opts.level < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "threshold level must be in (0, 1), got {}",
            opts.level
        )));
    }
    let comp = trace.compensated(fi)?;
    let f = trace.frequencies[fi].spec.center;
    Ok(
        crossing_positions(&comp, &trace.positions, opts.level * reference, opts)
            .into_iter()
            .map(|position| ThresholdEvent {
                frequency: f,
                position,
                direction: opts.direction,
                level: opts.level,
            })
            .collect(),
    )
}

/// Signed separation of the first crossings at two carriers, measured along
/// the direction of travel; positive when `low` crosses first.
pub fn threshold_delay(
    trace: &ChannelTrace,
    low: usize,
    high: usize,
    reference: LosReference,
    opts: &CrossingOptions,
) -> Result<f64> {
    let first = |fi: usize| -> Result<f64> {
        let r = estimate_los_average(trace, fi, reference)?;
        threshold_crossings(trace, fi, r, opts)?
            .first()
            .map(|e| e.position)
            .ok_or(Error::NoCrossing(trace.frequencies[fi].spec.center))
    };
    let (a, b) = (first(low)?, first(high)?);
    Ok(match opts.motion {
        Motion::Forward => b - a,
        Motion::Reverse => a - b,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Strongest {
    pub index: usize,
    pub aoa_deg: f64,
    pub magnitude: f64,
}

/// Per point, the component with the largest |g_rx·h_m|. Ties keep the
/// previous point's winner, else the lowest index.
pub fn strongest_component_series(trace: &ChannelTrace, fi: usize) -> Result<Vec<Strongest>> {
    let parts = trace
        .frequency(fi)?
        .parts
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("trace was computed without component parts".into()))?;
    let mut out: Vec<Strongest> = Vec::with_capacity(parts.len());
    for comps in parts {
        let mags: Vec<f64> = comps
            .iter()
            .map(|c| trace.antenna.gain(c.aoa_deg) * c.value.norm())
            .collect();
        let best = mags.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let prev = out.last().map(|s| s.index);
        let index = match prev {
            Some(p) if comps.iter().position(|c| c.index == p).map(|k| mags[k]) == Some(best) => p,
            _ => comps[mags.iter().position(|m| *m == best).unwrap_or(0)].index,
        };
        let k = comps.iter().position(|c| c.index == index).unwrap_or(0);
        out.push(Strongest {
            index,
            aoa_deg: comps[k].aoa_deg,
            magnitude: mags[k],
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Switch {
    /// Midpoint between the last sample of `from` and the first of `to`.
    pub position: f64,
    pub from: usize,
    pub to: usize,
}

pub fn component_switches(series: &[Strongest], positions: &[f64]) -> Vec<Switch> {
    series
        .windows(2)
        .zip(positions.windows(2))
        .filter(|(s, _)| s[0].index != s[1].index)
        .map(|(s, x)| Switch {
            position: 0.5 * (x[0] + x[1]),
            from: s[0].index,
            to: s[1].index,
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Far,
    Transition,
    Near,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Far => "far",
            Regime::Transition => "transition",
            Regime::Near => "near",
        }
    }
}

/// `N = 2L²/(λ r₂)`.
pub fn normalized_size(reflector_length: f64, lambda: f64, r2: f64) -> Result<f64> {
    if !(reflector_length > 0.0 && lambda > 0.0 && r2 > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "regime inputs must be > 0 (L={reflector_length}, lambda={lambda}, r2={r2})"
        )));
    }
    Ok(2.0 * reflector_length * reflector_length / (lambda * r2))
}

/// Far field for N ≤ 1, near field for N ≥ 6, transition between.
pub fn classify_regime(reflector_length: f64, lambda: f64, r2: f64) -> Result<(Regime, f64)> {
    let n = normalized_size(reflector_length, lambda, r2)?;
    let regime = if n <= 1.0 {
        Regime::Far
    } else if n >= 6.0 {
        Regime::Near
    } else {
        Regime::Transition
    };
    Ok((regime, n))
}

/// Rectangular map region split into cells of about `res` meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub res: f64,
}

impl Grid {
    pub fn validate(&self) -> Result<()> {
        let ok = [self.x0, self.x1, self.y0, self.y1, self.res]
            .iter()
            .all(|v| v.is_finite())
            && self.x1 > self.x0
            && self.y1 > self.y0
            && self.res > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::validation("grid", "need x0 < x1, y0 < y1 and res > 0"))
        }
    }

    fn axis(lo: f64, hi: f64, res: f64) -> Vec<f64> {
        let n = (((hi - lo) / res) + 1e-9).floor().max(1.0) as usize;
        let step = (hi - lo) / n as f64;
        (0..n).map(|i| lo + (i as f64 + 0.5) * step).collect()
    }

    /// Cell-center x coordinates.
    pub fn xs(&self) -> Vec<f64> {
        Grid::axis(self.x0, self.x1, self.res)
    }

    pub fn ys(&self) -> Vec<f64> {
        Grid::axis(self.y0, self.y1, self.res)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldMap {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// Row-major, rows along y: `values[iy * xs.len() + ix]`.
    pub values: Vec<f64>,
    pub reference: &'static str,
}

pub const MAP_REFERENCE: &str = "free-space amplitude A_tr/|p - tx| of the transmitter at each cell";

/// |h| (or |h_m| for one component) per cell, relative to the unobstructed
/// transmitter amplitude at that cell.
pub fn field_map(
    tx: &Transmitter,
    reflectors: &[Reflector],
    antenna: &Antenna,
    f: f64,
    grid: &Grid,
    component: Option<usize>,
    exec: Exec,
) -> Result<FieldMap> {
    grid.validate()?;
    let eval = ChannelEvaluator::new(tx, reflectors, antenna, f)?;
    if let Some(m) = component {
        if m >= eval.component_count() {
            return Err(Error::InvalidArgument(format!("no component {m}")));
        }
    }
    let amp = tx.amplitude()?;
    let xs = grid.xs();
    let ys = grid.ys();
    let nx = xs.len();
    let values = exec.map(nx * ys.len(), |k| {
        let p = Point2::new(xs[k % nx], ys[k / nx]);
        let r = p.distance(tx.position);
        if r == 0.0 {
            return f64::NAN;
        }
        let h = match component {
            None => eval.total(p).norm(),
            Some(m) => {
                let c = eval.sample(p).parts[m];
                antenna.gain(c.aoa_deg) * c.value.norm()
            }
        };
        h * r / amp
    });
    Ok(FieldMap {
        xs,
        ys,
        values,
        reference: MAP_REFERENCE,
    })
}

/// Extent (path positions) of the points lit geometrically by a mirror
/// image of `tx` in any of `mirrors`.
pub fn specular_region(tx: Point2, mirrors: &[Segment], points: &[Point2], positions: &[f64]) -> Option<(f64, f64)> {
    let images: Vec<(Point2, &Segment)> = mirrors.iter().map(|m| (mirror_point(tx, m), m)).collect();
    let lit = |p: Point2| {
        images.iter().any(|(eff, m)| match aperture_projection(*eff, p, m) {
            Ok(g) => g.validity == Validity::Valid && g.u1.to_f64() < 0.0 && g.u2.to_f64() > 0.0,
            Err(_) => false,
        })
    };
    let sel: Vec<f64> = points
        .iter()
        .zip(positions)
        .filter(|(p, _)| lit(**p))
        .map(|(_, s)| *s)
        .collect();
    Some((*sel.first()?, *sel.last()?))
}

/// Number of local maxima above `fraction` of the global maximum.
pub fn count_maxima_above(values: &[f64], fraction: f64) -> usize {
    let peak = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let floor = fraction * peak;
    let n = values.len();
    (0..n)
        .filter(|&i| {
            let v = values[i];
            let left = i == 0 || v > values[i - 1];
            let right = i + 1 == n || v >= values[i + 1];
            v > floor && left && right && n > 1
        })
        .count()
}

/// Deep fades: maximal runs of samples below `fraction` of the median over
/// a `window`-meter neighborhood. Returns the index of each run's minimum.
pub fn deep_fades(values: &[f64], positions: &[f64], window: f64, fraction: f64) -> Vec<usize> {
    let n = values.len().min(positions.len());
    let mut out = Vec::new();
    let (mut lo, mut hi) = (0, 0);
    let mut run: Option<usize> = None;
    for i in 0..n {
        while positions[lo] < positions[i] - 0.5 * window {
            lo += 1;
        }
        hi = hi.max(i);
        while hi + 1 < n && positions[hi + 1] <= positions[i] + 0.5 * window {
            hi += 1;
        }
        let mut local: Vec<f64> = values[lo..=hi].to_vec();
        local.sort_by(|a, b| a.total_cmp(b));
        let m = local.len();
        let median = if m % 2 == 1 {
            local[m / 2]
        } else {
            0.5 * (local[m / 2 - 1] + local[m / 2])
        };
        if values[i] < fraction * median {
            run = Some(match run {
                Some(k) if values[k] <= values[i] => k,
                _ => i,
            });
        } else if let Some(k) = run.take() {
            out.push(k);
        }
    }
    out.extend(run);
    out
}

/// max/min ratio of `values`.
pub fn fade_depth(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    max / min
}
