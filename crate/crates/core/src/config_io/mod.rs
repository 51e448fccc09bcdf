//! Scenario configuration, output writers and the command line front end.
//!
//! The configuration is a flat `key = value` file whose keys mirror the
//! model parameter names (`neighbourLocationLimit`, `maxAreaX`, ...). Lines
//! starting with `#` are comments.

pub mod cli;
pub mod writers;

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::AreaBounds;
use crate::mobility::{ModelParams, SeenUpdate, WaitTimeDist};

/// How initial coordinates are drawn. Only uniform placement exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitialMode {
    #[default]
    Uniform,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub neighbour_location_limit: f64,
    pub speed: f64,
    pub initial_x: InitialMode,
    pub initial_y: InitialMode,
    pub max_area_x: f64,
    pub max_area_y: f64,
    pub wait_time: WaitTimeDist,
    pub alpha: f64,
    pub no_of_locations: usize,
    pub node_count: usize,
    pub sim_duration: f64,
    pub seed: u64,
    /// Distance decay scale; `None` selects `2 / diagonal`.
    pub k: Option<f64>,
    pub seen_update: SeenUpdate,
    pub output_dir: Option<PathBuf>,
}

const KEYS: &[&str] = &[
    "neighbourLocationLimit",
    "speed",
    "initialX",
    "initialY",
    "initialZ",
    "maxAreaX",
    "maxAreaY",
    "maxAreaZ",
    "waitTime",
    "alpha",
    "noOfLocations",
    "nodeCount",
    "simDuration",
    "seed",
    "k",
    "seen_update",
    "outputDir",
];

const REQUIRED: &[&str] = &[
    "neighbourLocationLimit",
    "speed",
    "maxAreaX",
    "maxAreaY",
    "waitTime",
    "alpha",
    "noOfLocations",
];

pub const DEFAULT_NODE_COUNT: usize = 10;
pub const DEFAULT_SIM_DURATION: f64 = 50_000.0;

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    value
        .parse()
        .map_err(|e| Error::invalid(key, format!("`{value}`: {e}")))
}

fn parse_wait_time(value: &str) -> Result<WaitTimeDist> {
    let bad = || {
        Error::invalid(
            "waitTime",
            format!("`{value}`: expected uniform(min,max) or powerlaw(beta,min,max)"),
        )
    };
    let (name, rest) = value.split_once('(').ok_or_else(bad)?;
    let args = rest.strip_suffix(')').ok_or_else(bad)?;
    let nums = args
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<Vec<f64>>>()?;
    let dist = match (name.trim(), nums.as_slice()) {
        ("uniform", &[min, max]) => WaitTimeDist::Uniform { min, max },
        ("powerlaw", &[exponent, min, max]) => {
            WaitTimeDist::TruncatedPowerLaw { exponent, min, max }
        }
        _ => return Err(bad()),
    };
    dist.validate()?;
    Ok(dist)
}

fn format_wait_time(dist: &WaitTimeDist) -> String {
    match *dist {
        WaitTimeDist::Uniform { min, max } => format!("uniform({min},{max})"),
        WaitTimeDist::TruncatedPowerLaw { exponent, min, max } => {
            format!("powerlaw({exponent},{min},{max})")
        }
    }
}

fn parse_initial(key: &str, value: &str) -> Result<InitialMode> {
    match value {
        "uniform" => Ok(InitialMode::Uniform),
        _ => Err(Error::invalid(
            key,
            format!("`{value}`: only `uniform` is supported"),
        )),
    }
}

impl ScenarioConfig {
    /// The parameter set used in the reference verification scenario.
    pub fn reference_scenario(alpha: f64) -> Self {
        Self {
            neighbour_location_limit: 300.0,
            speed: 1.4,
            initial_x: InitialMode::Uniform,
            initial_y: InitialMode::Uniform,
            max_area_x: 400.0,
            max_area_y: 400.0,
            wait_time: WaitTimeDist::Uniform { min: 2.0, max: 5.0 },
            alpha,
            no_of_locations: 21,
            node_count: DEFAULT_NODE_COUNT,
            sim_duration: DEFAULT_SIM_DURATION,
            seed: 0,
            k: None,
            seen_update: SeenUpdate::Symmetric,
            output_dir: None,
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    /// Parses config text; `origin` is only used in syntax errors.
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut entries: BTreeMap<&str, &str> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |reason: String| Error::Syntax {
                path: origin.to_path_buf(),
                line: i + 1,
                reason,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| syntax(format!("expected `key = value`, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(Error::UnknownKey(key.to_string()));
            }
            if entries.insert(key, value).is_some() {
                return Err(syntax(format!("duplicate key `{key}`")));
            }
        }
        for key in REQUIRED {
            if !entries.contains_key(key) {
                return Err(Error::MissingKey(key.to_string()));
            }
        }
        let get = |k: &str| entries.get(k).copied();
        let req = |k: &str| entries[k];

        for key in ["initialZ", "maxAreaZ"] {
            if let Some(v) = get(key) {
                if parse_num::<f64>(key, v)? != 0.0 {
                    return Err(Error::invalid(
                        key,
                        "only 2D movement is supported; must be 0",
                    ));
                }
            }
        }

        let cfg = Self {
            neighbour_location_limit: parse_num(
                "neighbourLocationLimit",
                req("neighbourLocationLimit"),
            )?,
            speed: parse_num("speed", req("speed"))?,
            initial_x: get("initialX")
                .map_or(Ok(InitialMode::Uniform), |v| parse_initial("initialX", v))?,
            initial_y: get("initialY")
                .map_or(Ok(InitialMode::Uniform), |v| parse_initial("initialY", v))?,
            max_area_x: parse_num("maxAreaX", req("maxAreaX"))?,
            max_area_y: parse_num("maxAreaY", req("maxAreaY"))?,
            wait_time: parse_wait_time(req("waitTime"))?,
            alpha: parse_num("alpha", req("alpha"))?,
            no_of_locations: parse_num("noOfLocations", req("noOfLocations"))?,
            node_count: get("nodeCount")
                .map_or(Ok(DEFAULT_NODE_COUNT), |v| parse_num("nodeCount", v))?,
            sim_duration: get("simDuration")
                .map_or(Ok(DEFAULT_SIM_DURATION), |v| parse_num("simDuration", v))?,
            seed: get("seed").map_or(Ok(0), |v| parse_num("seed", v))?,
            k: get("k").map(|v| parse_num("k", v)).transpose()?,
            seen_update: match get("seen_update") {
                None | Some("symmetric") => SeenUpdate::Symmetric,
                Some("bystanders_only") => SeenUpdate::BystandersOnly,
                Some(other) => {
                    return Err(Error::invalid(
                        "seen_update",
                        format!("`{other}`: expected symmetric or bystanders_only"),
                    ))
                }
            },
            output_dir: get("outputDir").map(PathBuf::from),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.max_area_x.is_finite() && self.max_area_x > 0.0) {
            return Err(Error::invalid(
                "maxAreaX",
                format!("must be positive, got {}", self.max_area_x),
            ));
        }
        if !(self.max_area_y.is_finite() && self.max_area_y > 0.0) {
            return Err(Error::invalid(
                "maxAreaY",
                format!("must be positive, got {}", self.max_area_y),
            ));
        }
        self.params().validate()
    }

    pub fn area(&self) -> AreaBounds {
        AreaBounds {
            width: self.max_area_x,
            height: self.max_area_y,
        }
    }

    pub fn params(&self) -> ModelParams {
        let area = self.area();
        ModelParams {
            alpha: self.alpha,
            speed: self.speed,
            neighbour_location_limit: self.neighbour_location_limit,
            no_of_locations: self.no_of_locations,
            area,
            wait_time: self.wait_time,
            distance_decay_scale: self
                .k
                .unwrap_or_else(|| ModelParams::default_decay_scale(area)),
            seed: self.seed,
            node_count: self.node_count,
            sim_duration: self.sim_duration,
            seen_update: self.seen_update,
        }
    }

    /// Renders the config in the file format; `parse` reads it back equal.
    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        let mut put = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        put(
            "neighbourLocationLimit",
            self.neighbour_location_limit.to_string(),
        );
        put("speed", self.speed.to_string());
        put("initialX", "uniform".into());
        put("initialY", "uniform".into());
        put("maxAreaX", self.max_area_x.to_string());
        put("maxAreaY", self.max_area_y.to_string());
        put("waitTime", format_wait_time(&self.wait_time));
        put("alpha", self.alpha.to_string());
        put("noOfLocations", self.no_of_locations.to_string());
        put("nodeCount", self.node_count.to_string());
        put("simDuration", self.sim_duration.to_string());
        put("seed", self.seed.to_string());
        if let Some(k) = self.k {
            put("k", k.to_string());
        }
        put(
            "seen_update",
            match self.seen_update {
                SeenUpdate::Symmetric => "symmetric",
                SeenUpdate::BystandersOnly => "bystanders_only",
            }
            .into(),
        );
        if let Some(dir) = &self.output_dir {
            put("outputDir", dir.display().to_string());
        }
        out
    }
}
