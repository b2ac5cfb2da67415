//! Sweep definitions from flags and JSON config files.

use std::path::Path;

use qlmc::{builtin_molecules, find_molecule, Molecule, QParam};
use serde::Deserialize;

use crate::CliError;

/// Sweep floor for the Morse potential below which the CLI warns.
pub const MORSE_Q_FLOOR: f64 = 0.35;

#[derive(Debug, Clone, PartialEq)]
pub enum System {
    Qho,
    Morse(Molecule),
}

impl System {
    pub fn label(&self) -> &'static str {
        match self {
            System::Qho => "qho",
            System::Morse(_) => "morse",
        }
    }

    pub fn molecule_name(&self) -> &str {
        match self {
            System::Qho => "",
            System::Morse(m) => &m.name,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Output {
    Measures,
    Density,
    Energies,
    Uncertainty,
}

impl std::str::FromStr for Output {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "measures" => Ok(Output::Measures),
            "density" => Ok(Output::Density),
            "energies" | "energy" => Ok(Output::Energies),
            "uncertainty" => Ok(Output::Uncertainty),
            other => Err(CliError::Spec(format!("unknown output '{other}'"))),
        }
    }
}

/// Grid of (n, q) points for one system.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub system: System,
    pub n_list: Vec<u32>,
    pub q_list: Vec<f64>,
    pub outputs: Vec<Output>,
    /// points per density slice
    pub points: usize,
}

pub const DEFAULT_DENSITY_POINTS: usize = 2001;

impl SweepSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.n_list.is_empty() {
            return Err(CliError::Spec("empty n list".into()));
        }
        if self.q_list.is_empty() {
            return Err(CliError::Spec("empty q list".into()));
        }
        for &q in &self.q_list {
            QParam::new(q).map_err(|e| CliError::Spec(e.to_string()))?;
        }
        if self.outputs.is_empty() {
            return Err(CliError::Spec("no outputs requested".into()));
        }
        if self.points < 2 {
            return Err(CliError::Spec("density needs at least 2 points".into()));
        }
        if let System::Morse(m) = &self.system {
            m.validate().map_err(|e| CliError::Spec(e.to_string()))?;
            if self.outputs.contains(&Output::Uncertainty) {
                return Err(CliError::Spec("uncertainty output is only defined for qho".into()));
            }
            if let Some(low) = self.q_list.iter().copied().find(|&q| q < MORSE_Q_FLOOR) {
                log::warn!("q = {low} is below the Morse sweep floor {MORSE_Q_FLOOR}; results may be inaccurate");
            }
        }
        Ok(())
    }

    pub fn wants(&self, o: Output) -> bool {
        self.outputs.contains(&o)
    }
}

/// Parse `1,2,5` or ranges `1..7` (inclusive) and mixtures of both.
pub fn parse_n_list(s: &str) -> Result<Vec<u32>, CliError> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let a: u32 = parse_num(a)?;
            let b: u32 = parse_num(b.trim_start_matches('='))?;
            if a > b {
                return Err(CliError::Spec(format!("empty range {part}")));
            }
            out.extend(a..=b);
        } else {
            out.push(parse_num(part)?);
        }
    }
    Ok(out)
}

pub fn parse_q_list(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(parse_num)
        .collect()
}

/// `start:end:count`, endpoints included.
pub fn parse_q_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, k] = parts.as_slice() else {
        return Err(CliError::Spec(format!("q grid must be start:end:count, got '{s}'")));
    };
    Ok(linspace(parse_num(a)?, parse_num(b)?, parse_num(k)?))
}

pub fn linspace(start: f64, end: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![start],
        _ => (0..count)
            .map(|i| {
                if i == count - 1 {
                    end
                } else {
                    start + (end - start) * i as f64 / (count - 1) as f64
                }
            })
            .collect(),
    }
}

fn parse_num<T: std::str::FromStr>(s: &str) -> Result<T, CliError> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Spec(format!("cannot parse '{}'", s.trim())))
}

/// JSON config: the sweep fields plus extra molecules in the
/// `name, a, r_e, D_e, mu` schema. Every field is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub system: Option<String>,
    pub molecule: Option<String>,
    pub n: Option<Vec<u32>>,
    pub q: Option<Vec<f64>>,
    pub outputs: Option<Vec<String>>,
    pub points: Option<usize>,
    #[serde(default)]
    pub molecules: Vec<Molecule>,
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Spec(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: Config = serde_json::from_str(text).map_err(|e| CliError::Spec(format!("bad config: {e}")))?;
        for m in &cfg.molecules {
            m.validate().map_err(|e| CliError::Spec(e.to_string()))?;
        }
        Ok(cfg)
    }

    /// Built-in molecules with config entries layered on top (same name wins).
    pub fn registry(&self) -> Vec<Molecule> {
        let mut all = builtin_molecules();
        for m in &self.molecules {
            if let Some(slot) = all.iter_mut().find(|b| b.name.eq_ignore_ascii_case(&m.name)) {
                *slot = m.clone();
            } else {
                all.push(m.clone());
            }
        }
        all
    }
}

/// Flag values for a sweep; `None` falls back to the config, then defaults.
#[derive(Debug, Clone, Default)]
pub struct SweepOverrides {
    pub system: Option<String>,
    pub molecule: Option<String>,
    pub n: Option<Vec<u32>>,
    pub q: Option<Vec<f64>>,
    pub outputs: Option<Vec<Output>>,
    pub points: Option<usize>,
}

impl SweepOverrides {
    pub fn resolve(self, cfg: &Config, default_outputs: &[Output]) -> Result<SweepSpec, CliError> {
        let system_name = self
            .system
            .or_else(|| cfg.system.clone())
            .unwrap_or_else(|| "qho".into());
        let registry = cfg.registry();
        let system = match system_name.to_ascii_lowercase().as_str() {
            "qho" => System::Qho,
            "morse" => {
                let name = self
                    .molecule
                    .or_else(|| cfg.molecule.clone())
                    .unwrap_or_else(|| "HCl".into());
                let m = find_molecule(&registry, &name)
                    .ok_or_else(|| CliError::Spec(format!("unknown molecule '{name}'")))?;
                System::Morse(m.clone())
            }
            other => return Err(CliError::Spec(format!("unknown system '{other}'"))),
        };
        let n_list = self.n.or_else(|| cfg.n.clone()).unwrap_or_else(|| match system {
            System::Qho => (0..=10).collect(),
            System::Morse(_) => (1..=7).collect(),
        });
        let q_list = self.q.or_else(|| cfg.q.clone()).unwrap_or_else(|| match system {
            System::Qho => linspace(0.05, 0.999, 25),
            System::Morse(_) => linspace(MORSE_Q_FLOOR, 1.0, 14),
        });
        let outputs = match self.outputs {
            Some(o) => o,
            None => match &cfg.outputs {
                Some(list) => list.iter().map(|s| s.parse()).collect::<Result<_, _>>()?,
                None => default_outputs.to_vec(),
            },
        };
        let points = self.points.or(cfg.points).unwrap_or(DEFAULT_DENSITY_POINTS);
        let spec = SweepSpec {
            system,
            n_list,
            q_list,
            outputs,
            points,
        };
        spec.validate()?;
        Ok(spec)
    }
}
