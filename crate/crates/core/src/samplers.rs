//! Seeded generators for synthetic elections.
//!
//! Every sampler draws from a single ChaCha stream seeded by `spec.seed`, so
//! an identical spec always yields an identical election.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng as _;
use rand_distr::{Binomial, Distribution, Normal};

use crate::election::{Committee, Election};
use crate::error::{Error, Result};
use crate::rng::{rng_from_seed, Rng};

/// Largest `n·m` a sampler will allocate.
pub const MAX_CELLS: usize = 20_000_000;

/// Utilities of IC and Mallows profiles lie in `[0, MAX_UTILITY]`.
pub const MAX_UTILITY: f64 = 200.0;

const MALLOWS_NOISE: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Culture {
    /// Impartial culture with approval probability `p`.
    Ic { p: f64 },
    Mallows { phi: f64, noise: bool },
    /// Mallows with the dispersion given on the normalized scale.
    NormalizedMallows { norm_phi: f64, noise: bool },
    /// Group A (share `x`) approves the first half; group B approves each
    /// second-half candidate with probability `q`.
    Polarized { x: f64, q: f64 },
}

impl Culture {
    pub fn id(&self) -> &'static str {
        match self {
            Culture::Ic { .. } => "ic",
            Culture::Mallows { .. } => "mallows",
            Culture::NormalizedMallows { .. } => "normalized-mallows",
            Culture::Polarized { .. } => "polarized",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleSpec {
    pub culture: Culture,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub seed: u64,
}

impl SampleSpec {
    pub fn new(culture: Culture, n: usize, m: usize, k: usize, seed: u64) -> Self {
        SampleSpec { culture, n, m, k, seed }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        let unit = |v: f64| (0.0..=1.0).contains(&v);
        match self.culture {
            Culture::Ic { p } if !unit(p) => return bad(format!("p must lie in [0, 1], got {p}")),
            Culture::Mallows { phi, .. } if !(phi > 0.0 && phi <= 1.0) => {
                return bad(format!("phi must lie in (0, 1], got {phi}"))
            }
            Culture::NormalizedMallows { norm_phi, .. } if !unit(norm_phi) => {
                return bad(format!("normalized phi must lie in [0, 1], got {norm_phi}"))
            }
            Culture::Polarized { x, .. } if !(x > 0.0 && x <= 1.0) => {
                return bad(format!("x must lie in (0, 1], got {x}"))
            }
            Culture::Polarized { q, .. } if !(q > 0.0 && q <= 1.0) => {
                return bad(format!("q must lie in (0, 1], got {q}"))
            }
            _ => {}
        }
        if self.n == 0 {
            return bad("n must be positive".into());
        }
        match self.n.checked_mul(self.m) {
            Some(c) if c <= MAX_CELLS => Ok(()),
            _ => Err(Error::TooLarge {
                what: format!("{}x{} profile", self.n, self.m),
                cap: MAX_CELLS as u64,
            }),
        }
    }
}

/// Canonical text form, e.g. `ic:n=10,m=20,k=3,seed=7,p=0.4`.
impl fmt::Display for SampleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:n={},m={},k={},seed={}",
            self.culture.id(),
            self.n,
            self.m,
            self.k,
            self.seed
        )?;
        match self.culture {
            Culture::Ic { p } => write!(f, ",p={p}"),
            Culture::Mallows { phi, noise } => write!(f, ",phi={phi},noise={}", noise as u8),
            Culture::NormalizedMallows { norm_phi, noise } => {
                write!(f, ",phi={norm_phi},noise={}", noise as u8)
            }
            Culture::Polarized { x, q } => write!(f, ",x={x},q={q}"),
        }
    }
}

impl FromStr for SampleSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |m: String| Error::InvalidParameter(m);
        let (culture, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut fields = std::collections::BTreeMap::new();
        for kv in rest.split(',').filter(|f| !f.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got '{kv}'")))?;
            fields.insert(k.trim(), v.trim());
        }
        let mut take = |key: &str, default: Option<&str>| -> Result<String> {
            fields
                .remove(key)
                .map(str::to_string)
                .or(default.map(str::to_string))
                .ok_or_else(|| bad(format!("missing '{key}' in sample spec '{s}'")))
        };
        fn num<T: FromStr>(key: &str, v: String) -> Result<T> {
            v.parse()
                .map_err(|_| Error::InvalidParameter(format!("bad value for '{key}': '{v}'")))
        }
        let n = num("n", take("n", None)?)?;
        let m = num("m", take("m", None)?)?;
        let k = num("k", take("k", None)?)?;
        let seed = num("seed", take("seed", Some("0"))?)?;
        let noise = |v: String| -> Result<bool> { Ok(num::<u8>("noise", v)? != 0) };
        let culture = match culture {
            "ic" => Culture::Ic { p: num("p", take("p", None)?)? },
            "mallows" => Culture::Mallows {
                phi: num("phi", take("phi", None)?)?,
                noise: noise(take("noise", Some("1"))?)?,
            },
            "normalized-mallows" => Culture::NormalizedMallows {
                norm_phi: num("phi", take("phi", None)?)?,
                noise: noise(take("noise", Some("1"))?)?,
            },
            "polarized" => Culture::Polarized {
                x: num("x", take("x", None)?)?,
                q: num("q", take("q", None)?)?,
            },
            other => return Err(bad(format!("unknown culture '{other}'"))),
        };
        if let Some(k) = fields.keys().next() {
            return Err(bad(format!("unknown key '{k}' for culture '{culture}'", culture = culture.id())));
        }
        Ok(SampleSpec { culture, n, m, k, seed })
    }
}

/// Draws an election for any culture.
pub fn sample(spec: &SampleSpec) -> Result<Election> {
    match spec.culture {
        Culture::Ic { .. } => sample_ic(spec),
        Culture::Mallows { .. } => sample_mallows(spec),
        Culture::NormalizedMallows { .. } => sample_normalized_mallows(spec),
        Culture::Polarized { .. } => sample_polarized(spec),
    }
}

fn wrong_culture(spec: &SampleSpec, want: &str) -> Error {
    Error::InvalidParameter(format!("expected a {want} spec, got {}", spec.culture.id()))
}

pub fn sample_ic(spec: &SampleSpec) -> Result<Election> {
    let Culture::Ic { p } = spec.culture else {
        return Err(wrong_culture(spec, "ic"));
    };
    spec.validate()?;
    let (n, m) = (spec.n, spec.m);
    let mut rng = rng_from_seed(spec.seed);
    let count = Binomial::new(m as u64, p).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let value = Normal::new(150.0, 140.0).expect("fixed parameters are valid");
    let mut rows = vec![vec![0.0; m]; n];
    for row in rows.iter_mut() {
        let a = count.sample(&mut rng) as usize;
        let mut chosen = index::sample(&mut rng, m, a).into_vec();
        chosen.sort_unstable();
        for c in chosen {
            let u: f64 = value.sample(&mut rng);
            row[c] = u.round().clamp(1.0, MAX_UTILITY);
        }
    }
    Election::new(&rows, spec.k, Some(MAX_UTILITY))
}

pub fn sample_mallows(spec: &SampleSpec) -> Result<Election> {
    let Culture::Mallows { phi, noise } = spec.culture else {
        return Err(wrong_culture(spec, "mallows"));
    };
    spec.validate()?;
    mallows_profile(spec, phi, noise)
}

pub fn sample_normalized_mallows(spec: &SampleSpec) -> Result<Election> {
    let Culture::NormalizedMallows { norm_phi, noise } = spec.culture else {
        return Err(wrong_culture(spec, "normalized-mallows"));
    };
    spec.validate()?;
    mallows_profile(spec, phi_from_normalized(spec.m, norm_phi), noise)
}

fn mallows_profile(spec: &SampleSpec, phi: f64, noise: bool) -> Result<Election> {
    let (n, m) = (spec.n, spec.m);
    let mut rng = rng_from_seed(spec.seed);
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let ranking = mallows_ranking(&mut rng, m, phi);
        let mut row = vec![0.0; m];
        for (pos, &c) in ranking.iter().enumerate() {
            let base = MAX_UTILITY * (m - 1 - pos) as f64 / (m - 1).max(1) as f64;
            row[c] = if noise {
                let d: f64 = rng.random_range(-MALLOWS_NOISE..MALLOWS_NOISE);
                (base + d).clamp(0.0, MAX_UTILITY)
            } else {
                base
            };
        }
        rows.push(row);
    }
    Election::new(&rows, spec.k, Some(MAX_UTILITY))
}

/// Repeated insertion around the identity order: item `i` lands at position
/// `j ∈ 0..=i` with probability proportional to `φ^(i−j)`. Returns the
/// ranking best-first.
pub fn mallows_ranking(rng: &mut Rng, m: usize, phi: f64) -> Vec<usize> {
    let mut ranking = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for i in 0..m {
        weights.clear();
        weights.extend((0..=i).map(|j| phi.powi((i - j) as i32)));
        let total: f64 = weights.iter().sum();
        let mut r = rng.random::<f64>() * total;
        let mut pos = i;
        for (j, w) in weights.iter().enumerate() {
            if r < *w {
                pos = j;
                break;
            }
            r -= w;
        }
        ranking.insert(pos, i);
    }
    ranking
}

/// Expected number of inversions of a Mallows ranking of `m` items.
pub fn expected_swaps(m: usize, phi: f64) -> f64 {
    (1..m)
        .map(|i| {
            let (mut num, mut den) = (0.0, 0.0);
            for d in 0..=i {
                let w = phi.powi(d as i32);
                num += d as f64 * w;
                den += w;
            }
            num / den
        })
        .sum()
}

/// Maps a normalized dispersion to the Mallows `φ` whose expected swap
/// distance is `norm_phi · m(m−1)/4`, by bisection on `φ ∈ [0, 1]`.
pub fn phi_from_normalized(m: usize, norm_phi: f64) -> f64 {
    if norm_phi <= 0.0 || m < 2 {
        return 0.0;
    }
    if norm_phi >= 1.0 {
        return 1.0;
    }
    let target = norm_phi * (m * (m - 1)) as f64 / 4.0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if expected_swaps(m, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Size of group A, `⌈x·n⌉`, robust to `x·n` landing a hair above an integer.
pub fn group_a_size(x: f64, n: usize) -> usize {
    ((x * n as f64 - 1e-9).ceil().max(0.0) as usize).min(n)
}

pub fn sample_polarized(spec: &SampleSpec) -> Result<Election> {
    let Culture::Polarized { x, q } = spec.culture else {
        return Err(wrong_culture(spec, "polarized"));
    };
    spec.validate()?;
    let (n, m) = (spec.n, spec.m);
    let half = m / 2;
    let a = group_a_size(x, n);
    let mut rng = rng_from_seed(spec.seed);
    let mut rows = vec![vec![0.0; m]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        if i < a {
            row[..half].fill(1.0);
        } else {
            for u in &mut row[half..] {
                if rng.random_bool(q) {
                    *u = 1.0;
                }
            }
        }
    }
    Election::new(&rows, spec.k, Some(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Quota {
    pub deserved: usize,
    pub received: usize,
}

impl Quota {
    pub fn underperforms(&self) -> bool {
        self.received < self.deserved
    }

    pub fn deficit(&self) -> usize {
        self.deserved.saturating_sub(self.received)
    }
}

/// Group A's entitlement `⌊x·k⌋` and the number of first-half winners.
pub fn proportional_quota(spec: &SampleSpec, w: &Committee) -> Result<Quota> {
    let Culture::Polarized { x, .. } = spec.culture else {
        return Err(wrong_culture(spec, "polarized"));
    };
    let half = spec.m / 2;
    Ok(Quota {
        deserved: (x * spec.k as f64 + 1e-9).floor() as usize,
        received: w.members().iter().filter(|&&c| c < half).count(),
    })
}
