use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::assembly::PenaltyConfig;
use crate::error::{Error, Result};
use crate::mesh::{cartesian_mesh, lshape_mesh, refine_uniform, triangulated_square, Mesh};

use super::table::TableFormat;

/// Domain of the square meshes.
pub const SQUARE: [f64; 4] = [-1.0, 1.0, -1.0, 1.0];

/// Mesh selection: `square:NxM`, `triangles:NxM`, `lshape` or `refine:L`
/// (the 2×2 square refined `L` times).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshSpec {
    Square { nx: usize, ny: usize },
    Triangles { nx: usize, ny: usize },
    LShape,
    Refinement { level: usize },
}

impl MeshSpec {
    pub fn build(&self) -> Result<Mesh> {
        match *self {
            MeshSpec::Square { nx, ny } => cartesian_mesh(nx, ny, SQUARE),
            MeshSpec::Triangles { nx, ny } => triangulated_square(nx, ny, SQUARE),
            MeshSpec::LShape => Ok(lshape_mesh()),
            MeshSpec::Refinement { level } => {
                let mut m = cartesian_mesh(2, 2, SQUARE)?;
                for _ in 0..level {
                    m = refine_uniform(&m);
                }
                Ok(m)
            }
        }
    }
}

fn parse_dims(s: &str) -> Option<(usize, usize)> {
    let (a, b) = s.split_once('x')?;
    Some((a.parse().ok()?, b.parse().ok()?))
}

impl FromStr for MeshSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("bad mesh `{s}` (square:NxM, triangles:NxM, lshape, refine:L)"));
        let (kind, arg) = s.split_once(':').unwrap_or((s, ""));
        match kind {
            "lshape" => Ok(MeshSpec::LShape),
            "square" => parse_dims(arg)
                .map(|(nx, ny)| MeshSpec::Square { nx, ny })
                .ok_or_else(bad),
            "triangles" => parse_dims(arg)
                .map(|(nx, ny)| MeshSpec::Triangles { nx, ny })
                .ok_or_else(bad),
            "refine" => arg
                .parse()
                .map(|level| MeshSpec::Refinement { level })
                .map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for MeshSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeshSpec::Square { nx, ny } => write!(f, "square:{nx}x{ny}"),
            MeshSpec::Triangles { nx, ny } => write!(f, "triangles:{nx}x{ny}"),
            MeshSpec::LShape => write!(f, "lshape"),
            MeshSpec::Refinement { level } => write!(f, "refine:{level}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    Ipdg,
    C0Ipdg,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ipdg" => Ok(Method::Ipdg),
            "c0ipdg" => Ok(Method::C0Ipdg),
            _ => Err(Error::Config(format!("unknown method `{s}` (ipdg, c0ipdg)"))),
        }
    }
}

/// Settings of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub case: String,
    pub mesh: MeshSpec,
    pub method: Method,
    pub p_min: usize,
    pub p_max: usize,
    /// Squares per side for h-sweeps, run at degree `p_min`.
    pub sizes: Vec<usize>,
    pub penalty: PenaltyConfig,
    pub grading_levels: usize,
    pub out: Option<PathBuf>,
    pub format: TableFormat,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            case: "u1".into(),
            mesh: MeshSpec::Square { nx: 2, ny: 2 },
            method: Method::Ipdg,
            p_min: 2,
            p_max: 25,
            sizes: vec![2, 4, 8, 16],
            penalty: PenaltyConfig::default(),
            grading_levels: crate::assembly::LoadOptions::default().grading_levels,
            out: None,
            format: TableFormat::Csv,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("bad value `{value}` for `{key}`")))
}

impl ExperimentConfig {
    /// Sets one `key = value` entry.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim() {
            "case" => self.case = value.to_string(),
            "mesh" => self.mesh = value.parse()?,
            "method" => self.method = value.parse()?,
            "p_min" => self.p_min = parse(key, value)?,
            "p_max" => self.p_max = parse(key, value)?,
            "sizes" => self.sizes = value.split(',').map(|s| parse(key, s.trim())).collect::<Result<_>>()?,
            "c_sigma" => self.penalty.c_sigma = parse(key, value)?,
            "c_tau" => self.penalty.c_tau = parse(key, value)?,
            "grading_levels" => self.grading_levels = parse(key, value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => self.format = value.parse()?,
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Reads `key = value` lines; blank lines and `#` comments are skipped.
    pub fn parse_str(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
            cfg.set(k, v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p_min < 2 {
            return Err(Error::Config("p_min must be at least 2".into()));
        }
        if self.p_max < self.p_min {
            return Err(Error::Config("p_max must not be below p_min".into()));
        }
        if self.penalty.c_sigma <= 0.0 || self.penalty.c_tau <= 0.0 {
            return Err(Error::Config("penalty constants must be positive".into()));
        }
        if self.method == Method::C0Ipdg && matches!(self.mesh, MeshSpec::Triangles { .. } | MeshSpec::LShape) {
            return Err(Error::Config("c0ipdg runs on square meshes only".into()));
        }
        Ok(())
    }
}
