//! Named, seeded experiment recipes. Each one builds its scenes, runs the
//! analysis and returns both typed results and CSV tables.

use std::path::{Path, PathBuf};

use crate::analysis::{
    self, component_switches, compute_trace_with, count_maxima_above, crossing_positions, deep_fades, fade_depth,
    specular_region, strongest_component_series, threshold_delay, ChannelTrace, CrossingOptions, Direction,
    LosReference, Motion, Switch, TraceOptions,
};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fresnel::ExtReal;
use crate::geometry::{Point2, Segment, WallAperture};
use crate::propagation::{Antenna, ChannelEvaluator, FrequencySpec, Transmitter};
use crate::scenario::{
    derive_seed, expand_reflectors, roughen, sample_path, spawn_toggled_reflectors, PathSpec, Reflector, RoughnessSpec,
    Scenario, SpawnRanges, SpawnToggles,
};

pub const F_LOW: f64 = 2.4e9;
pub const F_HIGH: f64 = 30e9;

pub const EXPERIMENTS: [&str; 8] = [
    "los_nlos",
    "reflection_shadow",
    "rough_grid",
    "random_variance",
    "offset_sweep",
    "regimes",
    "back_reflection",
    "four_reflector_aoa",
];

const TAG_TRIAL: u64 = 0x5452_4941_4c00_0000;
const TAG_GRID: u64 = 0x4752_4944_0000_0000;
const TAG_VARIANCE: u64 = 0x5641_5200_0000_0000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub exec: Exec,
    /// Overrides the number of seeded trials (per cell for sweeps).
    pub trials: Option<usize>,
    /// Overrides the number of path samples.
    pub samples: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: 0,
            exec: Exec::default(),
            trials: None,
            samples: None,
        }
    }
}

// ---- scenes ----

fn tones() -> Vec<FrequencySpec> {
    vec![FrequencySpec::tone(F_LOW), FrequencySpec::tone(F_HIGH)]
}

fn main_path(samples: usize) -> PathSpec {
    PathSpec::new(Point2::new(0.0, 10.0), Point2::new(20.0, 10.0), samples)
}

/// Walled transmitter with a single edge: the mobile path goes from shadow
/// into line of sight.
pub fn fig1a_scenario() -> Scenario {
    Scenario {
        transmitter: Transmitter::isotropic(Point2::new(-5.0, -3.5), 1.0).with_aperture(WallAperture::new(
            Point2::new(-3.0, 0.0),
            90.0,
            ExtReal::NegInf,
            ExtReal::Finite(-1.5),
        )),
        reflectors: Vec::new(),
        antenna: Antenna::default(),
        path: main_path(2001),
        frequencies: tones(),
        seed: 0,
    }
}

pub const FIG1B_REFLECTOR: Point2 = Point2 { x: 6.0, y: -0.75 };
/// Path point the smooth reflector's specular ray is aimed at.
pub const FIG1B_AIM: Point2 = Point2 { x: 4.875, y: 10.0 };

/// Facing angle whose normal bisects the directions to `source` and `aim`.
pub fn aim_facing_deg(center: Point2, source: Point2, aim: Point2) -> f64 {
    ((source - center).normalized() + (aim - center).normalized()).angle_deg()
}

fn fig1b_transmitter() -> Transmitter {
    Transmitter::isotropic(Point2::new(-5.0, -2.0), 1.0).with_aperture(WallAperture::new(
        Point2::new(-3.0, 0.0),
        90.0,
        ExtReal::Finite(-5.0),
        ExtReal::Finite(-1.5),
    ))
}

/// The path is shadowed from the transmitter; one 1.5 m reflector at x = 6 m
/// sends a specular lobe onto it.
pub fn fig1b_scenario() -> Scenario {
    Scenario {
        transmitter: fig1b_transmitter(),
        reflectors: vec![Reflector::facing(
            FIG1B_REFLECTOR,
            1.5,
            aim_facing_deg(FIG1B_REFLECTOR, fig1b_transmitter().position, FIG1B_AIM),
        )],
        antenna: Antenna::default(),
        path: main_path(2001),
        frequencies: tones(),
        seed: 0,
    }
}

pub const FIG2C_ROUGHNESS: RoughnessSpec = RoughnessSpec {
    sub_length: 0.1,
    max_offset: 0.05,
    seed_offset: 0,
};

/// [`fig1b_scenario`] with the reflector split into rough 0.1 m pieces.
pub fn fig2c_scenario() -> Scenario {
    let mut s = fig1b_scenario();
    s.reflectors[0].roughness = Some(FIG2C_ROUGHNESS);
    s
}

/// Four reflectors steering energy into the shadowed path.
pub fn fig3_scenario() -> Scenario {
    let r = |x: f64, y: f64, len: f64, facing: f64| Reflector::facing(Point2::new(x, y), len, facing);
    Scenario {
        reflectors: vec![
            r(4.5, -1.0, 1.5, 135.0),
            r(2.5, 1.0, 0.5, 120.0),
            r(6.0, 2.0, 2.0, 120.0),
            r(18.0, -3.0, 1.5, 135.0),
        ],
        ..fig1b_scenario()
    }
}

/// Line of sight plus a back-reflection from two flat reflectors 1 m behind
/// the path; the transmitter faces them from 20 m across the path.
pub fn figs8_scenario() -> Scenario {
    Scenario {
        transmitter: Transmitter::isotropic(Point2::new(0.0, -21.0), 1.0),
        reflectors: vec![
            Reflector::facing(Point2::new(-2.5, 0.0), 5.0, 270.0),
            Reflector::facing(Point2::new(2.5, 0.0), 5.0, 270.0),
        ],
        antenna: Antenna::default(),
        path: PathSpec::new(Point2::new(0.0, -1.0), Point2::new(20.0, -1.0), 2001),
        frequencies: tones(),
        seed: 0,
    }
}

/// A single edge at the origin with the wall along +y; the transmitter sits
/// `tx_distance` from the edge at `angle_deg` below the horizontal, and the
/// path runs along y = `offset` from x = 0 to 20.
pub fn knife_edge_scene(offset: f64, angle_deg: f64, tx_distance: f64, samples: usize) -> (Transmitter, PathSpec) {
    let a = angle_deg.to_radians();
    let tx = Transmitter::isotropic(Point2::new(-tx_distance * a.cos(), -tx_distance * a.sin()), 1.0).with_aperture(
        WallAperture::new(Point2::new(0.0, 0.0), 90.0, ExtReal::NegInf, ExtReal::Finite(0.0)),
    );
    (
        tx,
        PathSpec::new(Point2::new(0.0, offset), Point2::new(20.0, offset), samples),
    )
}

// ---- tables ----

/// A CSV table with a fixed header.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}

/// Locale-independent shortest round-trip rendering; non-finite values become empty.
pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else {
        String::new()
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub name: String,
    pub report: Table,
    /// `(suffix, table)` written as `trace_<suffix>.csv`.
    pub traces: Vec<(String, Table)>,
}

impl ExperimentOutput {
    /// Writes `<dir>/<name>/report.csv` and the trace files; returns the experiment directory.
    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let out = dir.join(&self.name);
        std::fs::create_dir_all(&out).map_err(|e| Error::Io(format!("{}: {e}", out.display())))?;
        self.report.write_csv(&out.join("report.csv"))?;
        for (suffix, t) in &self.traces {
            t.write_csv(&out.join(format!("trace_{suffix}.csv")))?;
        }
        Ok(out)
    }
}

/// Path trace table: position, point and per-frequency amplitude.
pub fn trace_table(trace: &ChannelTrace) -> Table {
    let mut header = vec!["s_m".to_string(), "x_m".to_string(), "y_m".to_string()];
    for t in &trace.frequencies {
        header.push(format!("h_abs_{}", num(t.spec.center)));
    }
    let mut table = Table {
        header,
        rows: Vec::new(),
    };
    let amps: Vec<Vec<f64>> = trace.frequencies.iter().map(|t| t.amplitude()).collect();
    for (i, p) in trace.points.iter().enumerate() {
        let mut row = vec![num(trace.positions[i]), num(p.x), num(p.y)];
        row.extend(amps.iter().map(|a| num(a[i])));
        table.push(row);
    }
    table
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stats {
    pub n: usize,
    pub mean: f64,
    /// Sample standard deviation; NaN when n < 2.
    pub std: f64,
}

impl Stats {
    pub fn of(v: &[f64]) -> Stats {
        let n = v.len();
        if n == 0 {
            return Stats {
                n,
                mean: f64::NAN,
                std: f64::NAN,
            };
        }
        let mean = v.iter().sum::<f64>() / n as f64;
        let std = if n >= 2 {
            (v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            f64::NAN
        };
        Stats { n, mean, std }
    }
}

fn samples_or(cfg: &ExperimentConfig, default: usize) -> usize {
    cfg.samples.unwrap_or(default).max(2)
}

fn trace_of(s: &Scenario, reflectors: &[Reflector], exec: Exec, keep_parts: bool) -> Result<ChannelTrace> {
    compute_trace_with(
        &s.transmitter,
        reflectors,
        &s.antenna,
        &s.path,
        &s.frequencies,
        TraceOptions { keep_parts, exec },
    )
}

// ---- LoS / NLoS ----

#[derive(Debug, Clone, PartialEq)]
pub struct LosNlosResult {
    /// Moving from LoS into shadow, 70% level.
    pub falling: Result<f64>,
    /// Moving from shadow into LoS, 30% level.
    pub rising: Result<f64>,
    pub trace: ChannelTrace,
    pub scenario_hash: String,
}

pub fn falling_options() -> CrossingOptions {
    CrossingOptions::falling().with_motion(Motion::Reverse)
}

pub fn rising_options() -> CrossingOptions {
    CrossingOptions::rising()
}

pub fn exp_los_nlos(scenario: &Scenario, cfg: &ExperimentConfig) -> Result<LosNlosResult> {
    let mut s = scenario.clone();
    if let Some(n) = cfg.samples {
        s.path.samples = n.max(2);
    }
    let trace = trace_of(&s, &s.expanded_reflectors(), cfg.exec, false)?;
    let falling = threshold_delay(&trace, 0, 1, LosReference::FresnelClear, &falling_options());
    let rising = threshold_delay(&trace, 0, 1, LosReference::FresnelClear, &rising_options());
    Ok(LosNlosResult {
        falling,
        rising,
        trace,
        scenario_hash: s.hash_hex(),
    })
}

fn los_nlos_output(r: &LosNlosResult, cfg: &ExperimentConfig) -> ExperimentOutput {
    let mut report = Table::new(&[
        "direction",
        "level",
        "f_low_hz",
        "f_high_hz",
        "delay_m",
        "seed",
        "scenario_hash",
    ]);
    let f = |i: usize| num(r.trace.frequencies[i].spec.center);
    for (dir, level, d) in [("falling", 0.7, &r.falling), ("rising", 0.3, &r.rising)] {
        report.push(vec![
            dir.into(),
            num(level),
            f(0),
            f(1),
            opt(d.as_ref().ok().copied()),
            cfg.seed.to_string(),
            r.scenario_hash.clone(),
        ]);
    }
    ExperimentOutput {
        name: "los_nlos".into(),
        report,
        traces: vec![("path".into(), trace_table(&r.trace))],
    }
}

// ---- reflection into shadow ----

/// Path window lit geometrically by the reflectors (before roughening).
pub fn lobe_reference(s: &Scenario) -> Result<LosReference> {
    let points = sample_path(&s.path);
    let positions: Vec<f64> = points.iter().map(|p| p.distance(s.path.start)).collect();
    let mirrors: Vec<Segment> = s.reflectors.iter().map(|r| r.geometry).collect();
    specular_region(s.transmitter.position, &mirrors, &points, &positions)
        .map(|(start, end)| LosReference::Window { start, end })
        .ok_or(Error::NoLosReference)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionShadowResult {
    pub smooth: Result<f64>,
    /// One entry per rough trial: (seed, delay).
    pub rough: Vec<(u64, Result<f64>)>,
    pub smooth_trace: ChannelTrace,
    pub scenario_hash: String,
}

impl ReflectionShadowResult {
    pub fn rough_delays(&self) -> Vec<f64> {
        self.rough
            .iter()
            .filter_map(|(_, d)| d.as_ref().ok().copied())
            .collect()
    }

    pub fn rough_stats(&self) -> Stats {
        Stats::of(&self.rough_delays())
    }

    /// Number of rough trials whose delay exceeds the smooth delay.
    pub fn rough_above_smooth(&self) -> usize {
        match &self.smooth {
            Ok(s) => self.rough_delays().iter().filter(|d| *d > s).count(),
            Err(_) => 0,
        }
    }
}

/// Rough reflector trial `i` uses pieces drawn with this master seed.
pub fn trial_seed(master: u64, i: usize) -> u64 {
    derive_seed(master, TAG_TRIAL, i as u64)
}

pub fn exp_reflection_shadow(
    scenario: &Scenario,
    roughness: Option<RoughnessSpec>,
    cfg: &ExperimentConfig,
) -> Result<ReflectionShadowResult> {
    let mut s = scenario.clone();
    if let Some(n) = cfg.samples {
        s.path.samples = n.max(2);
    }
    for r in &mut s.reflectors {
        r.roughness = None;
    }
    let reference = lobe_reference(&s)?;
    let opts = rising_options();
    let smooth_trace = trace_of(&s, &s.reflectors, cfg.exec, false)?;
    let smooth = threshold_delay(&smooth_trace, 0, 1, reference, &opts);
    let rough = match roughness {
        None => Vec::new(),
        Some(spec) => {
            let n = cfg.trials.unwrap_or(20);
            let base: Vec<Reflector> = s.reflectors.iter().map(|r| r.clone().with_roughness(spec)).collect();
            cfg.exec.map(n, |i| {
                let seed = trial_seed(cfg.seed, i);
                let pieces = expand_reflectors(&base, seed);
                let d = trace_of(&s, &pieces, Exec::Sequential, false)
                    .and_then(|t| threshold_delay(&t, 0, 1, reference, &opts));
                (seed, d)
            })
        }
    };
    Ok(ReflectionShadowResult {
        smooth,
        rough,
        smooth_trace,
        scenario_hash: s.hash_hex(),
    })
}

fn reflection_shadow_output(r: &ReflectionShadowResult, cfg: &ExperimentConfig) -> ExperimentOutput {
    let mut report = Table::new(&["variant", "trial", "trial_seed", "delay_m", "seed", "scenario_hash"]);
    let meta = |t: &mut Table, variant: &str, trial: String, tseed: String, v: String| {
        t.push(vec![
            variant.into(),
            trial,
            tseed,
            v,
            cfg.seed.to_string(),
            r.scenario_hash.clone(),
        ])
    };
    meta(
        &mut report,
        "smooth",
        String::new(),
        String::new(),
        opt(r.smooth.as_ref().ok().copied()),
    );
    for (i, (seed, d)) in r.rough.iter().enumerate() {
        meta(
            &mut report,
            "rough",
            i.to_string(),
            seed.to_string(),
            opt(d.as_ref().ok().copied()),
        );
    }
    if !r.rough.is_empty() {
        let st = r.rough_stats();
        meta(&mut report, "rough_mean", String::new(), String::new(), num(st.mean));
        meta(&mut report, "rough_std", String::new(), String::new(), num(st.std));
    }
    ExperimentOutput {
        name: "reflection_shadow".into(),
        report,
        traces: vec![("smooth".into(), trace_table(&r.smooth_trace))],
    }
}

// ---- rough grid ----

pub const GRID_SUB_LENGTHS: [f64; 5] = [0.1, 0.2, 0.3, 0.4, 0.5];
pub const GRID_MAX_OFFSETS: [f64; 5] = [0.01, 0.02, 0.03, 0.04, 0.05];

#[derive(Debug, Clone, PartialEq)]
pub struct GridCell {
    pub sub_length: f64,
    pub max_offset: f64,
    pub stats: Stats,
    /// Trials without a crossing at either frequency.
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    /// Row-major over (sub_length, max_offset).
    pub cells: Vec<GridCell>,
    pub seed: u64,
    pub scenario_hash: String,
}

impl SweepReport {
    pub fn cell(&self, sub_index: usize, offset_index: usize) -> &GridCell {
        &self.cells[sub_index * GRID_MAX_OFFSETS.len() + offset_index]
    }
}

/// Threshold delay of the rough 1.5 m reflector over sub-reflector length ×
/// maximum offset, 1% band with 5 tones, `n` trials per cell.
pub fn exp_rough_grid(cfg: &ExperimentConfig) -> Result<SweepReport> {
    let mut s = fig1b_scenario();
    s.path.samples = samples_or(cfg, 500);
    s.frequencies = vec![
        FrequencySpec::band(F_LOW, 0.01, 5),
        FrequencySpec::band(F_HIGH, 0.01, 5),
    ];
    let reference = lobe_reference(&s)?;
    let opts = rising_options();
    let n = cfg.trials.unwrap_or(100).max(1);
    let nl = GRID_SUB_LENGTHS.len();
    let no = GRID_MAX_OFFSETS.len();
    let parent = s.reflectors[0].clone();
    let results = cfg.exec.map(nl * no * n, |k| {
        let cell = k / n;
        let spec = RoughnessSpec {
            sub_length: GRID_SUB_LENGTHS[cell / no],
            max_offset: GRID_MAX_OFFSETS[cell % no],
            seed_offset: 0,
        };
        let seed = derive_seed(cfg.seed, TAG_GRID, k as u64);
        let pieces = roughen(&parent.clone().with_roughness(spec), seed);
        trace_of(&s, &pieces, Exec::Sequential, false)
            .and_then(|t| threshold_delay(&t, 0, 1, reference, &opts))
            .ok()
    });
    let cells = (0..nl * no)
        .map(|c| {
            let chunk = &results[c * n..(c + 1) * n];
            let ok: Vec<f64> = chunk.iter().flatten().copied().collect();
            GridCell {
                sub_length: GRID_SUB_LENGTHS[c / no],
                max_offset: GRID_MAX_OFFSETS[c % no],
                failures: n - ok.len(),
                stats: Stats::of(&ok),
            }
        })
        .collect();
    Ok(SweepReport {
        cells,
        seed: cfg.seed,
        scenario_hash: s.hash_hex(),
    })
}

fn rough_grid_output(r: &SweepReport) -> ExperimentOutput {
    let mut report = Table::new(&[
        "sub_length_m",
        "max_offset_m",
        "n",
        "mean_delay_m",
        "std_delay_m",
        "failures",
        "seed",
        "scenario_hash",
    ]);
    for c in &r.cells {
        report.push(vec![
            num(c.sub_length),
            num(c.max_offset),
            c.stats.n.to_string(),
            num(c.stats.mean),
            num(c.stats.std),
            c.failures.to_string(),
            r.seed.to_string(),
            r.scenario_hash.clone(),
        ]);
    }
    ExperimentOutput {
        name: "rough_grid".into(),
        report,
        traces: Vec::new(),
    }
}

// ---- random reflectors ----

pub const VARIANCE_GROUPS: [usize; 4] = [0, 1, 3, 5];

pub fn variance_toggles() -> Vec<SpawnToggles> {
    let t = |position, angle, length| SpawnToggles {
        position,
        angle,
        length,
    };
    vec![
        t(true, false, false),
        t(true, true, false),
        t(true, false, true),
        t(true, true, true),
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct VarianceCell {
    pub count: usize,
    pub toggles: SpawnToggles,
    pub stats: Stats,
    pub failures: usize,
}

impl VarianceCell {
    pub fn variance(&self) -> f64 {
        if self.stats.n >= 2 {
            self.stats.std * self.stats.std
        } else {
            0.0
        }
    }
}

/// LoS → NLoS threshold delay with randomly placed reflectors; attributes not
/// toggled stay at a fixed base draw.
pub fn exp_random_variance(
    groups: &[usize],
    toggles: &[SpawnToggles],
    cfg: &ExperimentConfig,
) -> Result<(Vec<VarianceCell>, String)> {
    let mut s = fig1a_scenario();
    s.path.samples = samples_or(cfg, 1001);
    let n = cfg.trials.unwrap_or(40).max(1);
    let ranges = SpawnRanges::default();
    let base_seed = derive_seed(cfg.seed, TAG_VARIANCE, u64::MAX);
    let cells: Vec<(usize, SpawnToggles)> = groups
        .iter()
        .flat_map(|g| toggles.iter().map(move |t| (*g, *t)))
        .collect();
    let opts = falling_options();
    let results = cfg.exec.map(cells.len() * n, |k| {
        let (count, t) = cells[k / n];
        let seed = derive_seed(cfg.seed, TAG_VARIANCE, (k % n) as u64);
        let refl = spawn_toggled_reflectors(count, &ranges, t, base_seed, seed);
        trace_of(&s, &refl, Exec::Sequential, false)
            .and_then(|tr| threshold_delay(&tr, 0, 1, LosReference::FresnelClear, &opts))
            .ok()
    });
    let out = cells
        .iter()
        .enumerate()
        .map(|(c, (count, t))| {
            let ok: Vec<f64> = results[c * n..(c + 1) * n].iter().flatten().copied().collect();
            VarianceCell {
                count: *count,
                toggles: *t,
                failures: n - ok.len(),
                stats: Stats::of(&ok),
            }
        })
        .collect();
    Ok((out, s.hash_hex()))
}

fn random_variance_output(cells: &[VarianceCell], hash: &str, cfg: &ExperimentConfig) -> ExperimentOutput {
    let mut report = Table::new(&[
        "reflectors",
        "randomized",
        "n",
        "mean_delay_m",
        "std_delay_m",
        "variance_m2",
        "failures",
        "seed",
        "scenario_hash",
    ]);
    for c in cells {
        report.push(vec![
            c.count.to_string(),
            c.toggles.label(),
            c.stats.n.to_string(),
            num(c.stats.mean),
            num(c.stats.std),
            num(c.variance()),
            c.failures.to_string(),
            cfg.seed.to_string(),
            hash.to_string(),
        ]);
    }
    ExperimentOutput {
        name: "random_variance".into(),
        report,
        traces: Vec::new(),
    }
}

// ---- path offset ----

pub const OFFSET_EDGE_ANGLE_DEG: f64 = 45.0;
pub const OFFSET_TX_DISTANCE: f64 = 10.0;

pub fn default_offsets() -> Vec<f64> {
    (0..19).map(|i| 1.0 + 0.5 * i as f64).collect()
}

/// Falling 70% delay for a single edge, referenced to the maximum on each path.
pub fn exp_offset_sweep(offsets: &[f64], cfg: &ExperimentConfig) -> Result<Vec<(f64, Result<f64>)>> {
    let samples = samples_or(cfg, 2001);
    Ok(cfg.exec.map(offsets.len(), |i| {
        let (tx, path) = knife_edge_scene(offsets[i], OFFSET_EDGE_ANGLE_DEG, OFFSET_TX_DISTANCE, samples);
        let d = compute_trace_with(
            &tx,
            &[],
            &Antenna::default(),
            &path,
            &tones(),
            TraceOptions {
                keep_parts: false,
                exec: Exec::Sequential,
            },
        )
        .and_then(|t| threshold_delay(&t, 0, 1, LosReference::Maximum, &falling_options()));
        (offsets[i], d)
    }))
}

/// Least-squares slope of y against x.
pub fn linear_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

fn offset_output(rows: &[(f64, Result<f64>)], cfg: &ExperimentConfig) -> ExperimentOutput {
    let mut report = Table::new(&["offset_m", "delay_m", "seed"]);
    for (o, d) in rows {
        report.push(vec![num(*o), opt(d.as_ref().ok().copied()), cfg.seed.to_string()]);
    }
    ExperimentOutput {
        name: "offset_sweep".into(),
        report,
        traces: Vec::new(),
    }
}

// ---- small-reflector regimes ----

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Wavelength,
    Size,
    Distance,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Wavelength => "wavelength",
            Family::Size => "size",
            Family::Distance => "distance",
        }
    }

    /// `(length, wavelength, r2)` for the four members.
    pub fn members(&self) -> [(f64, f64, f64); 4] {
        match self {
            Family::Wavelength => [0.125, 0.05, 0.02, 0.01].map(|l| (0.46, l, 5.0)),
            Family::Size => [0.46, 0.727, 1.149, 1.625].map(|len| (len, 0.125, 5.0)),
            Family::Distance => [25.0, 10.0, 4.0, 2.0].map(|r2| (0.65, 0.05, r2)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegimeTrace {
    pub family: Family,
    pub length: f64,
    pub lambda: f64,
    pub r2: f64,
    pub n: f64,
    /// Path coordinate over reflector length.
    pub x_over_l: Vec<f64>,
    /// Reflected amplitude relative to its peak.
    pub amplitude: Vec<f64>,
}

impl RegimeTrace {
    pub fn maxima_above_10pct(&self) -> usize {
        count_maxima_above(&self.amplitude, 0.1)
    }

    /// Local maxima within the geometrically lit strip |x/L| ≤ 1/2.
    pub fn maxima_in_lit_strip(&self) -> usize {
        let idx: Vec<usize> = (0..self.amplitude.len())
            .filter(|&i| self.x_over_l[i].abs() <= 0.5)
            .collect();
        let v: Vec<f64> = idx.iter().map(|&i| self.amplitude[i]).collect();
        count_maxima_above(&v, 0.0)
    }

    /// Plateau: the lit strip stays above half the peak and oscillates.
    pub fn is_flat_top(&self) -> bool {
        let lit = (0..self.amplitude.len()).filter(|&i| self.x_over_l[i].abs() <= 0.4);
        lit.clone().all(|i| self.amplitude[i] >= 0.5) && self.maxima_in_lit_strip() >= 2
    }

    /// One dominant maximum, all others below half the peak.
    pub fn is_single_peak(&self) -> bool {
        count_maxima_above(&self.amplitude, 0.5) == 1
    }
}

pub const REGIME_HALF_SPAN: f64 = 4.0;
const REGIME_SOURCE_DISTANCE: f64 = 1.0e7;

/// Reflector along the x axis at the origin, facing +y, lit at normal
/// incidence from far away; the path is parallel at distance r2.
pub fn regime_trace(family: Family, length: f64, lambda: f64, r2: f64, samples: usize) -> Result<RegimeTrace> {
    let (_, n) = analysis::classify_regime(length, lambda, r2)?;
    let tx = Transmitter::isotropic(Point2::new(0.0, REGIME_SOURCE_DISTANCE), 1.0);
    let refl = vec![Reflector::flat(Segment::new(Point2::new(0.0, 0.0), length, 0.0))];
    let ant = Antenna::default();
    let eval = ChannelEvaluator::new(&tx, &refl, &ant, crate::fresnel::SPEED_OF_LIGHT / lambda)?;
    let half = REGIME_HALF_SPAN * length;
    let path = PathSpec::new(Point2::new(-half, r2), Point2::new(half, r2), samples);
    let points = sample_path(&path);
    let raw: Vec<f64> = points.iter().map(|p| eval.sample(*p).parts[1].value.norm()).collect();
    let peak = raw.iter().copied().fold(0.0, f64::max);
    Ok(RegimeTrace {
        family,
        length,
        lambda,
        r2,
        n,
        x_over_l: points.iter().map(|p| p.x / length).collect(),
        amplitude: raw.iter().map(|v| v / peak).collect(),
    })
}

pub fn exp_small_reflector_regimes(cfg: &ExperimentConfig) -> Result<Vec<RegimeTrace>> {
    let samples = samples_or(cfg, 2001);
    let jobs: Vec<(Family, (f64, f64, f64))> = [Family::Wavelength, Family::Size, Family::Distance]
        .iter()
        .flat_map(|f| f.members().into_iter().map(move |m| (*f, m)))
        .collect();
    cfg.exec.try_map(jobs.len(), |i| {
        let (f, (l, lambda, r2)) = jobs[i];
        regime_trace(f, l, lambda, r2, samples)
    })
}

fn regimes_output(traces: &[RegimeTrace]) -> ExperimentOutput {
    let mut report = Table::new(&[
        "family",
        "length_m",
        "wavelength_m",
        "r2_m",
        "normalized_n",
        "regime",
        "maxima_above_10pct",
        "flat_top",
        "single_peak",
    ]);
    let mut out = Vec::new();
    for t in traces {
        let regime = analysis::classify_regime(t.length, t.lambda, t.r2)
            .map(|r| r.0.as_str())
            .unwrap_or("");
        report.push(vec![
            t.family.as_str().into(),
            num(t.length),
            num(t.lambda),
            num(t.r2),
            num(t.n),
            regime.into(),
            t.maxima_above_10pct().to_string(),
            t.is_flat_top().to_string(),
            t.is_single_peak().to_string(),
        ]);
        let mut table = Table::new(&["x_over_l", "amplitude"]);
        for (x, a) in t.x_over_l.iter().zip(&t.amplitude) {
            table.push(vec![num(*x), num(*a)]);
        }
        out.push((
            format!("{}_n{}", t.family.as_str(), num((t.n * 1000.0).round() / 1000.0)),
            table,
        ));
    }
    ExperimentOutput {
        name: "regimes".into(),
        report,
        traces: out,
    }
}

// ---- back-reflection ----

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BackVariant {
    FlatPure,
    Banded,
    Rough,
}

impl BackVariant {
    pub const ALL: [BackVariant; 3] = [BackVariant::FlatPure, BackVariant::Banded, BackVariant::Rough];

    pub fn as_str(&self) -> &'static str {
        match self {
            BackVariant::FlatPure => "flat_pure",
            BackVariant::Banded => "banded",
            BackVariant::Rough => "rough",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BackReflectionBand {
    pub frequency: f64,
    pub fades: usize,
    pub fade_depth: f64,
    /// Change of the direct/reflected phase difference over the region, in periods.
    pub oscillations: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BackReflectionResult {
    pub variant: BackVariant,
    pub region: (f64, f64),
    pub bands: Vec<BackReflectionBand>,
    pub trace: ChannelTrace,
    pub scenario_hash: String,
}

pub const BACK_BAND_FRACTION: f64 = 0.004;
pub const BACK_ROUGHNESS: RoughnessSpec = RoughnessSpec {
    sub_length: 0.1,
    max_offset: 0.01,
    seed_offset: 0,
};

pub fn exp_back_reflection(variant: BackVariant, cfg: &ExperimentConfig) -> Result<BackReflectionResult> {
    let mut s = figs8_scenario();
    s.path.samples = samples_or(cfg, s.path.samples);
    s.seed = cfg.seed;
    match variant {
        BackVariant::FlatPure => {}
        BackVariant::Banded => {
            s.frequencies = vec![
                FrequencySpec::band(F_LOW, BACK_BAND_FRACTION, 5),
                FrequencySpec::band(F_HIGH, BACK_BAND_FRACTION, 5),
            ]
        }
        BackVariant::Rough => {
            for r in &mut s.reflectors {
                r.roughness = Some(BACK_ROUGHNESS);
            }
        }
    }
    let flat: Vec<Segment> = s.reflectors.iter().map(|r| r.geometry).collect();
    let trace = trace_of(&s, &s.expanded_reflectors(), cfg.exec, true)?;
    let region =
        specular_region(s.transmitter.position, &flat, &trace.points, &trace.positions).ok_or(Error::NoLosReference)?;
    let idx: Vec<usize> = (0..trace.points.len())
        .filter(|&i| trace.positions[i] >= region.0 && trace.positions[i] <= region.1)
        .collect();
    let pos: Vec<f64> = idx.iter().map(|&i| trace.positions[i]).collect();
    let bands = trace
        .frequencies
        .iter()
        .map(|ft| {
            let amp = ft.amplitude();
            let vals: Vec<f64> = idx.iter().map(|&i| amp[i]).collect();
            let phase: Vec<f64> = idx
                .iter()
                .map(|&i| {
                    let parts = &ft.parts.as_ref().expect("parts kept")[i];
                    let refl: num_complex::Complex64 = parts[1..].iter().map(|c| c.value).sum();
                    (refl / parts[0].value).arg()
                })
                .collect();
            BackReflectionBand {
                frequency: ft.spec.center,
                fades: deep_fades(&vals, &pos, 1.0, 0.5).len(),
                fade_depth: fade_depth(&vals),
                oscillations: unwrapped_span(&phase) / (2.0 * std::f64::consts::PI),
            }
        })
        .collect();
    Ok(BackReflectionResult {
        variant,
        region,
        bands,
        trace,
        scenario_hash: s.hash_hex(),
    })
}

/// |last − first| of the unwrapped phase sequence.
fn unwrapped_span(phase: &[f64]) -> f64 {
    use std::f64::consts::PI;
    let mut acc = 0.0;
    for w in phase.windows(2) {
        let mut d = w[1] - w[0];
        while d > PI {
            d -= 2.0 * PI;
        }
        while d < -PI {
            d += 2.0 * PI;
        }
        acc += d;
    }
    acc.abs()
}

fn back_reflection_output(results: &[BackReflectionResult], cfg: &ExperimentConfig) -> ExperimentOutput {
    let mut report = Table::new(&[
        "variant",
        "f_hz",
        "deep_fades",
        "fade_depth",
        "oscillations",
        "region_start_m",
        "region_end_m",
        "seed",
        "scenario_hash",
    ]);
    let mut traces = Vec::new();
    for r in results {
        for b in &r.bands {
            report.push(vec![
                r.variant.as_str().into(),
                num(b.frequency),
                b.fades.to_string(),
                num(b.fade_depth),
                num(b.oscillations),
                num(r.region.0),
                num(r.region.1),
                cfg.seed.to_string(),
                r.scenario_hash.clone(),
            ]);
        }
        traces.push((r.variant.as_str().to_string(), trace_table(&r.trace)));
    }
    ExperimentOutput {
        name: "back_reflection".into(),
        report,
        traces,
    }
}

// ---- four reflectors, strongest component ----

#[derive(Debug, Clone, PartialEq)]
pub struct AoaResult {
    pub trace: ChannelTrace,
    /// Per frequency: strongest component at each point.
    pub series: Vec<Vec<analysis::Strongest>>,
    /// Per frequency: switches after removing short flicker runs.
    pub switches: Vec<Vec<Switch>>,
    pub scenario_hash: String,
}

/// Dominance runs shorter than this are treated as flicker between two
/// components of similar magnitude.
pub const MIN_RUN_M: f64 = 0.25;

/// Replace runs shorter than `min_run` by the preceding winner.
pub fn suppress_flicker(series: &[analysis::Strongest], positions: &[f64], min_run: f64) -> Vec<analysis::Strongest> {
    let mut out = series.to_vec();
    let n = out.len();
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && series[j + 1].index == series[i].index {
            j += 1;
        }
        let span = positions[j] - positions[i];
        if i > 0 && j + 1 < n && span < min_run {
            let prev = out[i - 1].index;
            for s in &mut out[i..=j] {
                s.index = prev;
            }
        }
        i = j + 1;
    }
    out
}

pub fn exp_four_reflector_aoa(scenario: &Scenario, cfg: &ExperimentConfig) -> Result<AoaResult> {
    let mut s = scenario.clone();
    if let Some(n) = cfg.samples {
        s.path.samples = n.max(2);
    }
    let trace = trace_of(&s, &s.expanded_reflectors(), cfg.exec, true)?;
    let mut series = Vec::new();
    let mut switches = Vec::new();
    for fi in 0..trace.frequencies.len() {
        let raw = strongest_component_series(&trace, fi)?;
        let clean = suppress_flicker(&raw, &trace.positions, MIN_RUN_M);
        switches.push(component_switches(&clean, &trace.positions));
        series.push(raw);
    }
    Ok(AoaResult {
        trace,
        series,
        switches,
        scenario_hash: s.hash_hex(),
    })
}

/// For each switch at frequency `a`, distance to the nearest switch between
/// the same two components at frequency `b` (infinite if there is none).
pub fn switch_mismatch(a: &[Switch], b: &[Switch]) -> Vec<f64> {
    a.iter()
        .map(|s| {
            b.iter()
                .filter(|o| o.from == s.from && o.to == s.to)
                .map(|o| (o.position - s.position).abs())
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

fn aoa_output(r: &AoaResult, cfg: &ExperimentConfig) -> ExperimentOutput {
    let mut report = Table::new(&["f_hz", "position_m", "from", "to", "seed", "scenario_hash"]);
    for (fi, sw) in r.switches.iter().enumerate() {
        for s in sw {
            report.push(vec![
                num(r.trace.frequencies[fi].spec.center),
                num(s.position),
                s.from.to_string(),
                s.to.to_string(),
                cfg.seed.to_string(),
                r.scenario_hash.clone(),
            ]);
        }
    }
    let mut traces = Vec::new();
    for (fi, ser) in r.series.iter().enumerate() {
        let ft = &r.trace.frequencies[fi];
        let parts = ft.parts.as_ref().expect("parts kept");
        let m = parts.first().map_or(0, |p| p.len());
        let mut header = vec!["s_m".to_string(), "strongest".into(), "aoa_deg".into()];
        header.extend((0..m).map(|k| format!("m{k}_abs")));
        let mut t = Table {
            header,
            rows: Vec::new(),
        };
        for (i, st) in ser.iter().enumerate() {
            let mut row = vec![num(r.trace.positions[i]), st.index.to_string(), num(st.aoa_deg)];
            row.extend(parts[i].iter().map(|c| num(c.value.norm())));
            t.push(row);
        }
        traces.push((num(ft.spec.center), t));
    }
    ExperimentOutput {
        name: "four_reflector_aoa".into(),
        report,
        traces,
    }
}

// ---- dispatch ----

/// Runs the named experiment with its default parameters.
pub fn run_experiment(name: &str, cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let seeded = |mut s: Scenario| {
        s.seed = cfg.seed;
        s
    };
    match name {
        "los_nlos" => Ok(los_nlos_output(&exp_los_nlos(&seeded(fig1a_scenario()), cfg)?, cfg)),
        "reflection_shadow" => Ok(reflection_shadow_output(
            &exp_reflection_shadow(&seeded(fig1b_scenario()), Some(FIG2C_ROUGHNESS), cfg)?,
            cfg,
        )),
        "rough_grid" => Ok(rough_grid_output(&exp_rough_grid(cfg)?)),
        "random_variance" => {
            let (cells, hash) = exp_random_variance(&VARIANCE_GROUPS, &variance_toggles(), cfg)?;
            Ok(random_variance_output(&cells, &hash, cfg))
        }
        "offset_sweep" => Ok(offset_output(&exp_offset_sweep(&default_offsets(), cfg)?, cfg)),
        "regimes" => Ok(regimes_output(&exp_small_reflector_regimes(cfg)?)),
        "back_reflection" => {
            let r = BackVariant::ALL
                .iter()
                .map(|v| exp_back_reflection(*v, cfg))
                .collect::<Result<Vec<_>>>()?;
            Ok(back_reflection_output(&r, cfg))
        }
        "four_reflector_aoa" => Ok(aoa_output(&exp_four_reflector_aoa(&seeded(fig3_scenario()), cfg)?, cfg)),
        other => Err(Error::UnknownExperiment {
            name: other.to_string(),
            valid: EXPERIMENTS.join(", "),
        }),
    }
}

/// Rising/falling helper used by callers that pick their own level.
pub fn crossing_options(level: f64, direction: Direction) -> CrossingOptions {
    match direction {
        Direction::Falling => CrossingOptions::new(level, direction, Motion::Reverse),
        Direction::Rising => CrossingOptions::new(level, direction, Motion::Forward),
    }
}

/// Positions where `|h|/(A/r)` crosses `level`, for a single-edge scene.
pub fn normalized_crossings(
    tx: &Transmitter,
    path: &PathSpec,
    f: f64,
    level: f64,
    direction: Direction,
) -> Result<Vec<f64>> {
    let points = sample_path(path);
    let positions: Vec<f64> = points.iter().map(|p| p.distance(path.start)).collect();
    let amp = tx.amplitude()?;
    let ant = Antenna::default();
    let eval = ChannelEvaluator::new(tx, &[], &ant, f)?;
    let norm: Vec<f64> = points
        .iter()
        .map(|p| eval.total(*p).norm() * p.distance(tx.position) / amp)
        .collect();
    Ok(crossing_positions(
        &norm,
        &positions,
        level,
        &CrossingOptions::new(level, direction, Motion::Forward),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_experiment() {
        match run_experiment("nope", &ExperimentConfig::default()) {
            Err(Error::UnknownExperiment { valid, .. }) => assert!(valid.contains("rough_grid")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn stats() {
        let s = Stats::of(&[1.0, 2.0, 3.0]);
        assert_eq!(s.n, 3);
        assert!((s.mean - 2.0).abs() < 1e-15 && (s.std - 1.0).abs() < 1e-15);
        assert!(Stats::of(&[4.0]).std.is_nan());
    }

    #[test]
    fn slope() {
        let pts: Vec<(f64, f64)> = (0..5).map(|i| (i as f64, 2.0 * i as f64 + 1.0)).collect();
        assert!((linear_slope(&pts) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn equal_frequencies_zero_delay() {
        let mut s = fig1a_scenario();
        s.frequencies = vec![FrequencySpec::tone(F_LOW), FrequencySpec::tone(F_LOW)];
        let cfg = ExperimentConfig {
            samples: Some(401),
            exec: Exec::Sequential,
            ..Default::default()
        };
        let r = exp_los_nlos(&s, &cfg).unwrap();
        assert_eq!(r.falling.unwrap(), 0.0);
        assert_eq!(r.rising.unwrap(), 0.0);
    }

    #[test]
    fn flicker_suppression() {
        let mk = |i: usize| analysis::Strongest {
            index: i,
            aoa_deg: 0.0,
            magnitude: 1.0,
        };
        let s: Vec<_> = [0, 0, 0, 1, 0, 0, 2, 2, 2, 2].iter().map(|&i| mk(i)).collect();
        let pos: Vec<f64> = (0..10).map(|i| i as f64 * 0.1).collect();
        let clean = suppress_flicker(&s, &pos, 0.15);
        let idx: Vec<usize> = clean.iter().map(|c| c.index).collect();
        assert_eq!(idx, vec![0, 0, 0, 0, 0, 0, 2, 2, 2, 2]);
    }
}
