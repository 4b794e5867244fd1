//! Scenario files: flat `key = value` lines with `#` comments.
//!
//! ```text
//! n = 101
//! x_min = -1
//! x_max = 1
//! dt = 0.004
//! sigma = 0.4
//! nu_u = 0.36
//! nu_d = 0.36
//! segments = 5000:nonclassical, 95000:classical
//! initial = gaussian(0.05)
//! ```

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::dynamics::{Segment, StepSchedule};
use crate::error::{Error, Result};
use crate::linalg::{haar_random_unitary, DensityMatrix};
use crate::market::{
    dirac_state, gaussian_state, make_price_observable, make_shift_operators, BoundaryMode,
    LindbladCoefficients, OperatorSet, PriceObservable,
};

const REQUIRED: [&str; 9] = ["n", "x_min", "x_max", "dt", "sigma", "nu_u", "nu_d", "segments", "initial"];
const OPTIONAL: [&str; 5] = ["boundary_mode", "record_stride", "seed", "type2_conjugation", "output_path"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SegmentMode {
    Classical,
    Nonclassical,
}

impl fmt::Display for SegmentMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SegmentMode::Classical => "classical",
            SegmentMode::Nonclassical => "nonclassical",
        })
    }
}

impl FromStr for SegmentMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "classical" => Ok(SegmentMode::Classical),
            "nonclassical" => Ok(SegmentMode::Nonclassical),
            other => Err(format!("unknown segment mode `{other}` (expected classical or nonclassical)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InitialState {
    /// `|f_k><f_k|`, 1-based.
    Dirac(usize),
    /// Diagonal Gaussian of width `sigma0` in price units.
    Gaussian(f64),
}

impl fmt::Display for InitialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialState::Dirac(k) => write!(f, "dirac({k})"),
            InitialState::Gaussian(s) => write!(f, "gaussian({s:?})"),
        }
    }
}

impl FromStr for InitialState {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (name, arg) = s
            .strip_suffix(')')
            .and_then(|rest| rest.split_once('('))
            .ok_or_else(|| format!("expected dirac(k) or gaussian(s0), got `{s}`"))?;
        let arg = arg.trim();
        match name.trim() {
            "dirac" => arg.parse().map(InitialState::Dirac).map_err(|_| format!("bad index `{arg}`")),
            "gaussian" => arg.parse().map(InitialState::Gaussian).map_err(|_| format!("bad width `{arg}`")),
            other => Err(format!("unknown initial state `{other}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub n: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub dt: f64,
    pub sigma: f64,
    pub nu_u: f64,
    pub nu_d: f64,
    pub segments: Vec<(u64, SegmentMode)>,
    pub initial: InitialState,
    pub boundary_mode: BoundaryMode,
    pub record_stride: u64,
    pub seed: u64,
    pub type2_conjugation: bool,
    pub output_path: Option<PathBuf>,
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        parse_config(&text)
    }

    /// Classical segments drop `nu_u`, `nu_d`.
    pub fn coefficients(&self, mode: SegmentMode) -> LindbladCoefficients {
        match mode {
            SegmentMode::Classical => LindbladCoefficients::classical(self.sigma),
            SegmentMode::Nonclassical => LindbladCoefficients::from_rates(self.sigma, self.nu_u, self.nu_d),
        }
    }

    pub fn schedule(&self) -> Result<StepSchedule> {
        let segments = self
            .segments
            .iter()
            .map(|&(steps, mode)| Segment { steps, coefficients: self.coefficients(mode) })
            .collect();
        StepSchedule::new(segments, self.dt)
    }

    pub fn total_steps(&self) -> u64 {
        self.segments.iter().map(|s| s.0).sum()
    }

    /// Shift operators, conjugated by the seeded Haar unitary when
    /// `type2_conjugation` is set.
    pub fn operators(&self) -> Result<OperatorSet> {
        let ops = make_shift_operators(self.n, self.boundary_mode)?;
        if self.type2_conjugation {
            ops.conjugated_by(&haar_random_unitary(self.n, self.seed))
        } else {
            Ok(ops)
        }
    }

    pub fn observable(&self) -> Result<PriceObservable> {
        make_price_observable(self.n, self.x_min, self.x_max)
    }

    pub fn initial_state(&self) -> Result<DensityMatrix> {
        match self.initial {
            InitialState::Dirac(k) => dirac_state(self.n, k),
            InitialState::Gaussian(s0) => gaussian_state(&self.observable()?.values, s0),
        }
    }
}

/// Serializes back to the file format; `parse_config` inverts it.
impl fmt::Display for ScenarioConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n = {}", self.n)?;
        writeln!(f, "x_min = {:?}", self.x_min)?;
        writeln!(f, "x_max = {:?}", self.x_max)?;
        writeln!(f, "dt = {:?}", self.dt)?;
        writeln!(f, "sigma = {:?}", self.sigma)?;
        writeln!(f, "nu_u = {:?}", self.nu_u)?;
        writeln!(f, "nu_d = {:?}", self.nu_d)?;
        let segments: Vec<String> = self.segments.iter().map(|(s, m)| format!("{s}:{m}")).collect();
        writeln!(f, "segments = {}", segments.join(", "))?;
        writeln!(f, "initial = {}", self.initial)?;
        writeln!(f, "boundary_mode = {}", self.boundary_mode)?;
        writeln!(f, "record_stride = {}", self.record_stride)?;
        writeln!(f, "seed = {}", self.seed)?;
        writeln!(f, "type2_conjugation = {}", self.type2_conjugation)?;
        if let Some(p) = &self.output_path {
            writeln!(f, "output_path = {}", p.display())?;
        }
        Ok(())
    }
}

struct Entries<'a> {
    map: HashMap<&'a str, (usize, &'a str)>,
}

impl<'a> Entries<'a> {
    fn required(&self, key: &str) -> Result<(usize, &'a str)> {
        self.map.get(key).copied().ok_or_else(|| Error::MissingKey(key.to_string()))
    }

    fn parse<T: FromStr>(&self, key: &str) -> Result<Option<(usize, T)>>
    where
        T::Err: fmt::Display,
    {
        match self.map.get(key) {
            None => Ok(None),
            Some(&(line, raw)) => raw
                .parse::<T>()
                .map(|v| Some((line, v)))
                .map_err(|e| Error::Config { line, message: format!("`{key}`: {e}") }),
        }
    }

    fn parse_required<T: FromStr>(&self, key: &str) -> Result<(usize, T)>
    where
        T::Err: fmt::Display,
    {
        self.required(key)?;
        Ok(self.parse(key)?.expect("key is present"))
    }
}

fn invariant(line: usize, ok: bool, message: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Config { line, message: message() })
    }
}

fn parse_segments(line: usize, raw: &str) -> Result<Vec<(u64, SegmentMode)>> {
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            let bad = |message: String| Error::Config { line, message };
            let (steps, mode) = item
                .split_once(':')
                .ok_or_else(|| bad(format!("segment `{item}` is not steps:mode")))?;
            let steps: u64 = steps
                .trim()
                .parse()
                .map_err(|_| bad(format!("bad step count in `{item}`")))?;
            if steps == 0 {
                return Err(bad(format!("segment `{item}` has zero steps")));
            }
            Ok((steps, mode.trim().parse().map_err(bad)?))
        })
        .collect()
}

pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let mut map = HashMap::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| Error::Config { line, message: format!("expected `key = value`, got `{content}`") })?;
        let key = key.trim();
        if !REQUIRED.contains(&key) && !OPTIONAL.contains(&key) {
            return Err(Error::Config { line, message: format!("unknown key `{key}`") });
        }
        if let Some((first, _)) = map.insert(key, (line, value.trim())) {
            return Err(Error::Config { line, message: format!("`{key}` already set on line {first}") });
        }
    }
    let e = Entries { map };
    for key in REQUIRED {
        e.required(key)?;
    }

    let (n_line, n) = e.parse_required::<usize>("n")?;
    invariant(n_line, n >= 2, || format!("n must be at least 2, got {n}"))?;
    let (_, x_min) = e.parse_required::<f64>("x_min")?;
    let (x_line, x_max) = e.parse_required::<f64>("x_max")?;
    invariant(x_line, x_min < x_max, || format!("x_max {x_max} must exceed x_min {x_min}"))?;
    let (dt_line, dt) = e.parse_required::<f64>("dt")?;
    invariant(dt_line, dt > 0.0 && dt.is_finite(), || format!("dt must be positive, got {dt}"))?;
    let mut rates = [0.0; 3];
    for (slot, key) in rates.iter_mut().zip(["sigma", "nu_u", "nu_d"]) {
        let (line, v) = e.parse_required::<f64>(key)?;
        invariant(line, v >= 0.0 && v.is_finite(), || format!("{key} must be nonnegative, got {v}"))?;
        *slot = v;
    }
    let (seg_line, seg_raw) = e.required("segments")?;
    let segments = parse_segments(seg_line, seg_raw)?;
    let (init_line, initial) = e.parse_required::<InitialState>("initial")?;
    match initial {
        InitialState::Dirac(k) => {
            invariant(init_line, (1..=n).contains(&k), || format!("dirac index {k} outside 1..={n}"))?
        }
        InitialState::Gaussian(s0) => {
            invariant(init_line, s0 > 0.0 && s0.is_finite(), || format!("gaussian width must be positive, got {s0}"))?
        }
    }
    let boundary_mode = e.parse::<BoundaryMode>("boundary_mode")?.map_or(BoundaryMode::HardWall, |p| p.1);
    let record_stride = match e.parse::<u64>("record_stride")? {
        Some((line, s)) => {
            invariant(line, s >= 1, || "record_stride must be at least 1".into())?;
            s
        }
        None => 100,
    };
    let seed = e.parse::<u64>("seed")?.map_or(0, |p| p.1);
    let type2_conjugation = e.parse::<bool>("type2_conjugation")?.is_some_and(|p| p.1);
    let output_path = e.map.get("output_path").map(|&(_, v)| PathBuf::from(v));

    Ok(ScenarioConfig {
        n,
        x_min,
        x_max,
        dt,
        sigma: rates[0],
        nu_u: rates[1],
        nu_d: rates[2],
        segments,
        initial,
        boundary_mode,
        record_stride,
        seed,
        type2_conjugation,
        output_path,
    })
}
