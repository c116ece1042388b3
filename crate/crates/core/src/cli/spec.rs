use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::path::PathBuf;

use crate::dynamics::{JcParams, WwParams};
use crate::error::{invalid, Result};
use crate::geoment::GeOptions;
use crate::measures::DiscordOptions;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    JcEvolution,
    WwEvolution,
    Invariant,
    Hierarchy,
    Discord,
    PartitionScan,
    Age4Surface,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Self::JcEvolution => "jc-evolution",
            Self::WwEvolution => "ww-evolution",
            Self::Invariant => "invariant",
            Self::Hierarchy => "hierarchy",
            Self::Discord => "discord",
            Self::PartitionScan => "partition-scan",
            Self::Age4Surface => "age4-surface",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    #[default]
    Jc,
    Ww,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Window grid of the partition scan, in units of the emitted linewidth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanConfig {
    pub max_dnu: f64,
    /// Uniform step; `None` scans the mode edges.
    pub step: Option<f64>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            max_dnu: 10.0,
            step: None,
        }
    }
}

/// One experiment, as read from a config file and command-line overrides.
/// Unset fields are filled by [`SweepSpec::resolve`] with per-experiment
/// defaults so that every output records the values actually used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSpec {
    pub experiment: Option<Experiment>,
    pub thetas: Option<Vec<f64>>,
    /// In `1/J` for cavity experiments and `1/Γ` for the bath.
    pub t_max: Option<f64>,
    /// Number of time intervals; the grid has `steps + 1` points.
    pub steps: Option<usize>,
    pub model: ModelKind,
    pub jc: JcParams,
    pub ww: WwParams,
    pub ge: GeOptions,
    pub discord: DiscordOptions,
    pub scan: ScanConfig,
    pub partitions: Option<Vec<String>>,
    pub seed: u64,
    pub format: Format,
    /// Run environment only; never embedded in outputs.
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing)]
    pub workers: usize,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            experiment: None,
            thetas: None,
            t_max: None,
            steps: None,
            model: ModelKind::Jc,
            jc: JcParams::default(),
            ww: WwParams::default(),
            ge: GeOptions::default(),
            discord: DiscordOptions::default(),
            scan: ScanConfig::default(),
            partitions: None,
            seed: 0,
            format: Format::Csv,
            out: None,
            workers: 0,
        }
    }
}

fn theta_range(n: usize) -> Vec<f64> {
    (0..=n).map(|i| FRAC_PI_2 * i as f64 / n as f64).collect()
}

impl SweepSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Fills defaults, propagates the seed into the optimizers and validates.
    pub fn resolve(mut self) -> Result<Self> {
        let Some(exp) = self.experiment else {
            return invalid("no experiment given");
        };
        let bath_time =
            matches!(exp, Experiment::WwEvolution) || (exp == Experiment::Invariant && self.model == ModelKind::Ww);
        self.thetas.get_or_insert_with(|| match exp {
            Experiment::JcEvolution | Experiment::WwEvolution | Experiment::Discord => {
                vec![FRAC_PI_4, 0.4 * PI]
            }
            Experiment::Hierarchy => vec![0.2 * PI, 0.4 * PI],
            Experiment::PartitionScan => vec![0.375 * PI, 0.4 * PI],
            Experiment::Invariant | Experiment::Age4Surface => theta_range(8),
        });
        self.t_max.get_or_insert(if bath_time { 5.0 } else { PI });
        self.steps.get_or_insert(match exp {
            Experiment::Hierarchy | Experiment::Age4Surface => 16,
            _ => 64,
        });
        if exp == Experiment::Hierarchy {
            self.partitions
                .get_or_insert_with(|| vec!["A1P1|A2P2".into(), "A1A2|P1P2".into(), "A1P2|A2P1".into()]);
        }
        self.ge.seed = self.seed;
        self.discord.seed = self.seed;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let thetas = self.thetas.as_deref().unwrap_or_default();
        if thetas.is_empty() {
            return invalid("θ list is empty");
        }
        if thetas.iter().any(|t| !(-1e-12..=FRAC_PI_2 + 1e-12).contains(t)) {
            return invalid("every θ must lie in [0, π/2]");
        }
        let t_max = self.t_max.unwrap_or_default();
        if !(t_max > 0.0 && t_max.is_finite()) {
            return invalid(format!("t_max = {t_max} must be positive"));
        }
        if self.steps.unwrap_or_default() == 0 {
            return invalid("steps must be ≥ 1");
        }
        self.jc.validate()?;
        self.ww.validate()?;
        self.ge.validate()?;
        self.discord.validate()?;
        if !(self.scan.max_dnu > 0.0) || self.scan.step.is_some_and(|s| !(s > 0.0)) {
            return invalid("scan max_dnu and step must be positive");
        }
        Ok(())
    }

    pub fn experiment(&self) -> Experiment {
        self.experiment.expect("resolved spec")
    }

    pub fn theta_list(&self) -> &[f64] {
        self.thetas.as_deref().expect("resolved spec")
    }

    /// `t_i = t_max · i / steps`, `i = 0..=steps`.
    pub fn times(&self) -> Vec<f64> {
        let (t_max, n) = (self.t_max.expect("resolved spec"), self.steps.expect("resolved spec"));
        (0..=n).map(|i| t_max * i as f64 / n as f64).collect()
    }

    /// Compact JSON of everything that influences the numbers.
    pub fn embedded(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }
}

/// Accepts `0.3`, `pi/4`, `2pi/5`, `0.4pi`, `3*pi/8`, and `a:b:n` for `n`
/// evenly spaced values from `a` to `b` inclusive.
pub fn parse_angles(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [one] => out.push(parse_angle(one)?),
            [a, b, n] => {
                let (a, b) = (parse_angle(a)?, parse_angle(b)?);
                let n: usize = n
                    .trim()
                    .parse()
                    .map_err(|_| crate::Error::InvalidInput(format!("bad count in range '{item}'")))?;
                if n < 2 {
                    return invalid(format!("range '{item}' needs at least 2 points"));
                }
                out.extend((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64));
            }
            _ => return invalid(format!("cannot read angle list item '{item}'")),
        }
    }
    if out.is_empty() {
        return invalid("empty angle list");
    }
    Ok(out)
}

fn parse_angle(s: &str) -> Result<f64> {
    let bad = || crate::Error::InvalidInput(format!("cannot read angle '{s}'"));
    let s = s.trim().to_ascii_lowercase().replace(['*', ' '], "");
    let Some(at) = s.find("pi") else {
        return s.parse().map_err(|_| bad());
    };
    let (pre, post) = (&s[..at], &s[at + 2..]);
    let num: f64 = if pre.is_empty() {
        1.0
    } else {
        pre.parse().map_err(|_| bad())?
    };
    let den: f64 = match post.strip_prefix('/') {
        Some(d) => d.parse().map_err(|_| bad())?,
        None if post.is_empty() => 1.0,
        None => return Err(bad()),
    };
    Ok(num * PI / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        let v = parse_angles("pi/4, 2pi/5,0.3pi,3*pi/8,0.5").unwrap();
        let want = [FRAC_PI_4, 0.4 * PI, 0.3 * PI, 0.375 * PI, 0.5];
        for (a, b) in v.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
        let r = parse_angles("0:pi/2:5").unwrap();
        assert_eq!(r.len(), 5);
        assert!((r[4] - FRAC_PI_2).abs() < 1e-15);
        assert!(parse_angles("pix").is_err());
        assert!(parse_angles("").is_err());
    }

    #[test]
    fn resolve_materializes_defaults() {
        let s = SweepSpec {
            experiment: Some(Experiment::Hierarchy),
            seed: 9,
            ..Default::default()
        }
        .resolve()
        .unwrap();
        assert_eq!(s.steps, Some(16));
        assert_eq!(s.ge.seed, 9);
        assert!(s.partitions.is_some());
        let text = s.embedded();
        assert!(text.contains("\"seed\":9"));
        assert!(!text.contains("workers"));
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(SweepSpec::from_json(r#"{"experiment":"jc-evolution","thetaz":[1]}"#).is_err());
        assert!(SweepSpec::from_json(r#"{"experiment":"jc-evolution","ge":{"restart":1}}"#).is_err());
        let s = SweepSpec::from_json(r#"{"experiment":"jc-evolution","steps":0}"#).unwrap();
        assert!(s.resolve().is_err());
    }
}
