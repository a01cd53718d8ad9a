use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{parse_err, Error, Result};
use crate::samplers::SampleSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    /// EJR+ violations on approval instances.
    Exp1,
    /// Best / top-2 / worst rule frequencies per metric.
    Exp2,
    /// Metrics relative to offline MES on synthetic cultures.
    Exp3,
    /// Proportional quota on polarized instances.
    Exp4,
    ThmMes,
    ThmNash,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::Exp1,
        ExperimentKind::Exp2,
        ExperimentKind::Exp3,
        ExperimentKind::Exp4,
        ExperimentKind::ThmMes,
        ExperimentKind::ThmNash,
    ];

    pub fn id(self) -> &'static str {
        match self {
            ExperimentKind::Exp1 => "exp1",
            ExperimentKind::Exp2 => "exp2",
            ExperimentKind::Exp3 => "exp3",
            ExperimentKind::Exp4 => "exp4",
            ExperimentKind::ThmMes => "thm-mes",
            ExperimentKind::ThmNash => "thm-nash",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.id() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown experiment '{s}'")))
    }
}

/// Where instances come from.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    /// A `.pb` file (approval, `k` from the divisors) or a native-format file.
    File(PathBuf),
    Sample(SampleSpec),
}

impl Source {
    /// Stable identifier used in output rows and seed derivation.
    pub fn id(&self) -> String {
        match self {
            Source::File(p) => p
                .file_name()
                .map(|f| f.to_string_lossy().into_owned())
                .unwrap_or_else(|| p.display().to_string()),
            Source::Sample(s) => s.to_string(),
        }
    }
}

/// A flat `key=value` experiment description. `source=` may repeat; `#`
/// starts a comment.
///
/// ```text
/// experiment=exp4
/// seed=7
/// iterations=10
/// instances=300
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub sources: Vec<Source>,
    /// Committee sizes for `.pb` sources, as divisors of `m`.
    pub divisors: Vec<usize>,
    /// Arrival orders per (instance, k).
    pub iterations: usize,
    pub seed: u64,
    pub output: Option<PathBuf>,
    /// Exp 4 and thm-mes: number of generated instances.
    pub instances: usize,
    /// Exploration length for Online MES/BOS; `None` means `⌊m/e⌋`.
    pub exploration: Option<usize>,
    /// thm-mes: electorate size, number of candidates, committee size and
    /// the `p` of "EJR up to `p` candidates".
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub p: usize,
    /// thm-mes: offline-MES winners per generated instance.
    pub winners: usize,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind) -> Self {
        let (iterations, instances) = match experiment {
            ExperimentKind::ThmMes => (5000, 1),
            ExperimentKind::ThmNash => (500, 20),
            ExperimentKind::Exp4 => (10, 300),
            _ => (5, 0),
        };
        ExperimentConfig {
            experiment,
            sources: Vec::new(),
            divisors: vec![20, 10, 4],
            iterations,
            seed: 0,
            output: None,
            instances,
            exploration: None,
            n: 60,
            m: 40,
            k: 3,
            p: 2,
            winners: 3,
        }
    }

    /// Parses config text; relative source paths resolve against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut entries = Vec::new();
        let mut kind = None;
        for (i, raw) in text.lines().enumerate() {
            let ln = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| parse_err(ln, format!("expected key=value, got '{line}'")))?;
            let (key, value) = (key.trim(), value.trim());
            if key == "experiment" {
                kind = Some(value.parse().map_err(|e: Error| parse_err(ln, e.to_string()))?);
            } else {
                entries.push((ln, key.to_string(), value.to_string()));
            }
        }
        let kind = kind.ok_or_else(|| parse_err(1, "missing 'experiment=' line"))?;
        let mut cfg = ExperimentConfig::new(kind);
        for (ln, key, value) in entries {
            let int = |v: &str| {
                v.parse::<usize>()
                    .map_err(|_| parse_err(ln, format!("'{key}' needs a non-negative integer, got '{v}'")))
            };
            match key.as_str() {
                "source" => cfg.sources.push(match value.strip_prefix("sample:") {
                    Some(spec) => Source::Sample(spec.parse().map_err(|e: Error| parse_err(ln, e.to_string()))?),
                    None => Source::File(base.join(&value)),
                }),
                "divisors" => {
                    cfg.divisors = value.split(',').map(|v| int(v.trim())).collect::<Result<_>>()?
                }
                "iterations" => cfg.iterations = int(&value)?,
                "seed" => {
                    cfg.seed = value
                        .parse()
                        .map_err(|_| parse_err(ln, format!("bad seed '{value}'")))?
                }
                "output" => cfg.output = Some(base.join(&value)),
                "instances" => cfg.instances = int(&value)?,
                "t" => cfg.exploration = Some(int(&value)?),
                "n" => cfg.n = int(&value)?,
                "m" => cfg.m = int(&value)?,
                "k" => cfg.k = int(&value)?,
                "p" => cfg.p = int(&value)?,
                "winners" => cfg.winners = int(&value)?,
                other => return Err(parse_err(ln, format!("unknown key '{other}'"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::InvalidParameter("iterations must be at least 1".into()));
        }
        if self.divisors.contains(&0) {
            return Err(Error::InvalidParameter("divisors must be positive".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_full_config() {
        let text = "# sample run\nexperiment=exp1\nsource=data/a.pb\nsource=sample:ic:n=5,m=6,k=2,p=0.5\n\
divisors=20, 4\niterations=3\nseed=9\noutput=out.csv\n";
        let cfg = ExperimentConfig::parse(text, Path::new("/x")).unwrap();
        assert_eq!(cfg.experiment, ExperimentKind::Exp1);
        assert_eq!(cfg.sources[0], Source::File(PathBuf::from("/x/data/a.pb")));
        assert_eq!(cfg.sources[1].id(), "ic:n=5,m=6,k=2,seed=0,p=0.5");
        assert_eq!(cfg.divisors, vec![20, 4]);
        assert_eq!((cfg.iterations, cfg.seed), (3, 9));
        assert_eq!(cfg.output, Some(PathBuf::from("/x/out.csv")));
    }

    #[test]
    fn defaults_per_experiment() {
        let cfg = ExperimentConfig::parse("experiment=thm-mes", Path::new(".")).unwrap();
        assert_eq!((cfg.iterations, cfg.m, cfg.k), (5000, 40, 3));
        let cfg = ExperimentConfig::parse("experiment=thm-nash", Path::new(".")).unwrap();
        assert_eq!(cfg.iterations, 500);
    }

    #[test]
    fn errors_carry_lines() {
        let p = Path::new(".");
        assert!(matches!(ExperimentConfig::parse("iterations=3", p), Err(Error::Parse { .. })));
        assert!(matches!(
            ExperimentConfig::parse("experiment=exp1\nbogus=1", p),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            ExperimentConfig::parse("experiment=exp9", p),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(ExperimentConfig::parse("experiment=exp1\niterations=0", p).is_err());
    }
}
