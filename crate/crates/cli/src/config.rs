//! Experiment configuration.
//!
//! A configuration is a flat `key = value` text file (`#` starts a comment)
//! plus `--key value` overrides on the command line. Every field has a
//! canonical text form; [`ExperimentConfig::to_pairs`] writes it and
//! [`ExperimentConfig::from_pairs`] reads it back to an identical value, which
//! is what makes a manifest re-runnable.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use skewlab_core::cfrac::{construct_liouville, expand_cf, ContinuedFraction, GrowthRule, IrrationalSpec};
use skewlab_core::{AnalyticCircleFunction, Observable, TorusPoint};

use crate::CliError;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "SKEWLAB_OUT";
pub const DEFAULT_OUT_DIR: &str = "skewlab-out";

pub const EXPERIMENTS: [&str; 13] = [
    "sieve",
    "cfrac",
    "resonant-set",
    "coboundary",
    "cocycle-deviation",
    "almost-period",
    "davenport",
    "main-sum",
    "bsz",
    "dirichlet-decompose",
    "short-interval",
    "mu-chi",
    "furstenberg-demo",
];

/// Experiments whose defaults are `alpha = liouville`, `h = furstenberg`.
pub const LIOUVILLE_EXPERIMENTS: [&str; 3] = ["cocycle-deviation", "almost-period", "furstenberg-demo"];

/// Recognised keys with their defaults and a one-line description.
pub const KEYS: &[(&str, &str, &str)] = &[
    ("alpha", "golden", "rotation number: golden | pi-3 | liouville | surd:a,b,d,c | decimal:<digits> | cf:a1,a2,..."),
    ("h", "random", "fiber function: random | furstenberg | furstenberg-random | zero | constant:<c> | file:<path>"),
    ("tau", "1", "analyticity decay rate of h"),
    ("m-max", "200", "largest Fourier frequency of h"),
    ("seed", "1", "seed for every random choice"),
    ("xi1", "0", "observable frequency in x"),
    ("xi2", "1", "observable frequency in y"),
    ("x0", "0.1", "seed point x"),
    ("y0", "0.2", "seed point y"),
    ("limit", "1000000", "Möbius sieve limit (raised when an experiment needs a longer range)"),
    ("checkpoints", "1000,10000,100000,1000000", "checkpoint list N (entries above the limit are dropped)"),
    ("eta", "auto", "A = floor(e^(eta q_k)); auto is tau/8"),
    ("period-multiplier", "1", "S in the almost period n = a S q_k"),
    ("delta", "0.1", "almost-period tolerance"),
    ("b1", "1", "smallest q_k in the resonant set"),
    ("b2", "1", "resonant multiples run up to b2 q_(k+1)"),
    ("p1", "2", "first prime of the pair"),
    ("p2", "3", "second prime of the pair"),
    ("fiber-scale", "1", "s in the derived fiber map"),
    ("precision-bits", "400", "bits for decimal rotation numbers (pi-3 supports up to 415)"),
    ("threads", "0", "worker threads, 0 for all cores"),
    ("out", "auto", "output directory; auto reads SKEWLAB_OUT"),
    ("cf-len", "25", "number of partial quotients"),
    ("k", "auto", "convergent index; auto is the first resonant index"),
    ("a", "1", "largest multiplier a"),
    ("grid-density", "16", "sup grid points per unit of m-max"),
    ("points", "10000", "sample points"),
    ("n", "10000", "orbit length N"),
    ("n0", "auto", "block-decomposition cut N0; auto is N/10"),
    ("l", "1000", "window length or block offset"),
    ("x", "1000000", "X for short intervals"),
    ("q", "12", "modulus"),
    ("chi", "1", "character index within the group mod q"),
    ("beta", "golden", "Davenport frequency (same forms as alpha)"),
    ("count", "10", "number of random periodic weights"),
    ("t-bound", "1000", "search range |t| <= T for the pretentious distance; x means T = X"),
];

pub fn default_of(key: &str) -> Option<&'static str> {
    KEYS.iter().find(|k| k.0 == key).map(|k| k.1)
}

/// Rotation-number forms accepted by `alpha` and `beta`.
#[derive(Clone, Debug, PartialEq)]
pub enum AlphaSpec {
    Golden,
    PiMinus3,
    Liouville,
    Surd([i64; 4]),
    Decimal(String),
    Quotients(Vec<u64>),
}

impl FromStr for AlphaSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (head, rest) = match s.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (s, None),
        };
        match (head, rest) {
            ("golden", None) => Ok(AlphaSpec::Golden),
            ("pi-3", None) => Ok(AlphaSpec::PiMinus3),
            ("liouville", None) => Ok(AlphaSpec::Liouville),
            ("surd", Some(r)) => {
                let v: Vec<i64> = parse_list(r)?;
                let arr: [i64; 4] = v.try_into().map_err(|_| "surd needs a,b,d,c".to_string())?;
                Ok(AlphaSpec::Surd(arr))
            }
            ("decimal", Some(r)) => {
                let ok = r.starts_with("0.") && r.len() > 2 && r[2..].bytes().all(|b| b.is_ascii_digit());
                if !ok {
                    return Err(format!("decimal rotation number must look like 0.ddd, got {r:?}"));
                }
                Ok(AlphaSpec::Decimal(r.to_string()))
            }
            ("cf", Some(r)) => {
                let v: Vec<u64> = parse_list(r)?;
                if v.is_empty() || v.contains(&0) {
                    return Err("partial quotients must be positive".into());
                }
                Ok(AlphaSpec::Quotients(v))
            }
            _ => Err(format!("unknown rotation number {s:?}")),
        }
    }
}

impl fmt::Display for AlphaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaSpec::Golden => write!(f, "golden"),
            AlphaSpec::PiMinus3 => write!(f, "pi-3"),
            AlphaSpec::Liouville => write!(f, "liouville"),
            AlphaSpec::Surd(v) => write!(f, "surd:{},{},{},{}", v[0], v[1], v[2], v[3]),
            AlphaSpec::Decimal(d) => write!(f, "decimal:{d}"),
            AlphaSpec::Quotients(v) => write!(f, "cf:{}", join(v)),
        }
    }
}

impl AlphaSpec {
    /// The rotation number and its first `cf_len` partial quotients (fewer
    /// for a Liouville number whose quotients outgrow the size cap, or for an
    /// explicit finite expansion).
    pub fn resolve(
        &self,
        tau: f64,
        cf_len: usize,
        bits: u32,
    ) -> skewlab_core::Result<(IrrationalSpec, ContinuedFraction)> {
        let spec = match self {
            AlphaSpec::Liouville => return construct_liouville(tau, cf_len.max(2), GrowthRule::Minimal),
            AlphaSpec::Golden => IrrationalSpec::golden(),
            AlphaSpec::PiMinus3 => IrrationalSpec::pi_minus_3(bits)?,
            AlphaSpec::Surd([a, b, d, c]) => IrrationalSpec::surd(*a, *b, *d, *c),
            AlphaSpec::Decimal(digits) => IrrationalSpec::Decimal { digits: digits.clone(), bits },
            AlphaSpec::Quotients(q) => IrrationalSpec::explicit(q),
        };
        spec.validate()?;
        let len = if spec.is_rational() { usize::MAX } else { cf_len };
        let cf = expand_cf(&spec, len)?;
        Ok((spec, cf))
    }
}

/// Fiber-function forms accepted by `h`.
#[derive(Clone, Debug, PartialEq)]
pub enum HSpec {
    Random,
    Furstenberg,
    FurstenbergRandom,
    Zero,
    Constant(f64),
    File(PathBuf),
}

impl FromStr for HSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.split_once(':') {
            None => match s {
                "random" => Ok(HSpec::Random),
                "furstenberg" => Ok(HSpec::Furstenberg),
                "furstenberg-random" => Ok(HSpec::FurstenbergRandom),
                "zero" => Ok(HSpec::Zero),
                _ => Err(format!("unknown fiber function {s:?}")),
            },
            Some(("constant", c)) => parse_f64(c).map(HSpec::Constant),
            Some(("file", p)) if !p.is_empty() => Ok(HSpec::File(PathBuf::from(p))),
            _ => Err(format!("unknown fiber function {s:?}")),
        }
    }
}

impl fmt::Display for HSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HSpec::Random => write!(f, "random"),
            HSpec::Furstenberg => write!(f, "furstenberg"),
            HSpec::FurstenbergRandom => write!(f, "furstenberg-random"),
            HSpec::Zero => write!(f, "zero"),
            HSpec::Constant(c) => write!(f, "constant:{c}"),
            HSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl HSpec {
    /// Coefficient files are `m,re,im` CSV, or the JSON table format when the
    /// name ends in `.json`.
    pub fn resolve(
        &self,
        cf: &ContinuedFraction,
        tau: f64,
        m_max: usize,
        seed: u64,
    ) -> Result<AnalyticCircleFunction, CliError> {
        let h = match self {
            HSpec::Random => AnalyticCircleFunction::random_analytic(seed, tau, m_max)?,
            HSpec::Furstenberg => skewlab_core::fourier::furstenberg_like(cf, tau, m_max, None)?,
            HSpec::FurstenbergRandom => skewlab_core::fourier::furstenberg_like(cf, tau, m_max, Some(seed))?,
            HSpec::Zero => AnalyticCircleFunction::zero(m_max, tau),
            HSpec::Constant(c) => AnalyticCircleFunction::constant(*c, m_max, tau),
            HSpec::File(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Usage(format!("cannot read coefficient file {}: {e}", path.display())))?;
                if path.extension().is_some_and(|e| e == "json") {
                    AnalyticCircleFunction::from_json(&text)?
                } else {
                    AnalyticCircleFunction::from_csv(&text, tau)?
                }
            }
        };
        Ok(h)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub alpha: AlphaSpec,
    pub h: HSpec,
    pub tau: f64,
    pub m_max: usize,
    pub seed: u64,
    pub xi1: i64,
    pub xi2: i64,
    pub x0: f64,
    pub y0: f64,
    pub limit: u64,
    pub checkpoints: Vec<u64>,
    pub eta: Option<f64>,
    pub period_multiplier: u64,
    pub delta: f64,
    pub b1: u64,
    pub b2: u64,
    pub p1: u64,
    pub p2: u64,
    pub fiber_scale: u64,
    pub precision_bits: u32,
    pub threads: usize,
    /// `None` until resolved against the environment.
    pub out: Option<PathBuf>,
    pub cf_len: usize,
    pub k: Option<usize>,
    pub a: u64,
    pub grid_density: usize,
    pub points: usize,
    pub n: u64,
    pub n0: Option<u64>,
    pub l: u64,
    pub x: u64,
    pub q: u64,
    pub chi: usize,
    pub beta: AlphaSpec,
    pub count: u64,
    /// `None` means T = X.
    pub t_bound: Option<f64>,
}

impl ExperimentConfig {
    /// Defaults for every key.
    pub fn new(experiment: &str) -> Result<Self, CliError> {
        let pairs: Vec<(String, String)> = vec![("experiment".into(), experiment.into())];
        Self::from_pairs(&pairs)
    }

    /// Builds a configuration from `(key, value)` pairs; later pairs win.
    /// Missing keys take their defaults; unknown keys are rejected.
    pub fn from_pairs(pairs: &[(String, String)]) -> Result<Self, CliError> {
        let experiment = pairs
            .iter()
            .rev()
            .find(|(k, _)| k == "experiment")
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| CliError::Usage("no experiment named".into()))?;
        if !EXPERIMENTS.contains(&experiment) {
            return Err(CliError::Usage(format!(
                "unknown experiment {experiment:?}; expected one of {}",
                EXPERIMENTS.join(", ")
            )));
        }
        let mut map: BTreeMap<&str, &str> = KEYS.iter().map(|k| (k.0, k.1)).collect();
        if LIOUVILLE_EXPERIMENTS.contains(&experiment) {
            map.insert("alpha", "liouville");
            map.insert("h", "furstenberg");
        }
        for (k, v) in pairs.iter().filter(|(k, _)| k != "experiment") {
            match map.get_mut(k.as_str()) {
                Some(slot) => *slot = v.as_str(),
                None => return Err(CliError::Usage(format!("unknown key {k:?}"))),
            }
        }
        let get = |key: &str| map[key];
        let field = |key: &str, e: String| CliError::Usage(format!("{key}: {e}"));
        let cfg = ExperimentConfig {
            experiment: experiment.to_string(),
            alpha: get("alpha").parse().map_err(|e| field("alpha", e))?,
            h: get("h").parse().map_err(|e| field("h", e))?,
            tau: parse_f64(get("tau")).map_err(|e| field("tau", e))?,
            m_max: parse_u64(get("m-max")).map_err(|e| field("m-max", e))? as usize,
            seed: parse_u64(get("seed")).map_err(|e| field("seed", e))?,
            xi1: parse_i64(get("xi1")).map_err(|e| field("xi1", e))?,
            xi2: parse_i64(get("xi2")).map_err(|e| field("xi2", e))?,
            x0: parse_f64(get("x0")).map_err(|e| field("x0", e))?,
            y0: parse_f64(get("y0")).map_err(|e| field("y0", e))?,
            limit: parse_u64(get("limit")).map_err(|e| field("limit", e))?,
            checkpoints: parse_list_with(get("checkpoints"), parse_u64).map_err(|e| field("checkpoints", e))?,
            eta: parse_auto(get("eta"), parse_f64).map_err(|e| field("eta", e))?,
            period_multiplier: parse_u64(get("period-multiplier")).map_err(|e| field("period-multiplier", e))?,
            delta: parse_f64(get("delta")).map_err(|e| field("delta", e))?,
            b1: parse_u64(get("b1")).map_err(|e| field("b1", e))?,
            b2: parse_u64(get("b2")).map_err(|e| field("b2", e))?,
            p1: parse_u64(get("p1")).map_err(|e| field("p1", e))?,
            p2: parse_u64(get("p2")).map_err(|e| field("p2", e))?,
            fiber_scale: parse_u64(get("fiber-scale")).map_err(|e| field("fiber-scale", e))?,
            precision_bits: parse_u64(get("precision-bits"))
                .map_err(|e| field("precision-bits", e))?
                .min(u32::MAX as u64) as u32,
            threads: parse_u64(get("threads")).map_err(|e| field("threads", e))? as usize,
            out: match get("out") {
                "auto" => None,
                "" => return Err(field("out", "empty path".into())),
                p => Some(PathBuf::from(p)),
            },
            cf_len: parse_u64(get("cf-len")).map_err(|e| field("cf-len", e))? as usize,
            k: parse_auto(get("k"), parse_u64).map_err(|e| field("k", e))?.map(|k| k as usize),
            a: parse_u64(get("a")).map_err(|e| field("a", e))?,
            grid_density: parse_u64(get("grid-density")).map_err(|e| field("grid-density", e))? as usize,
            points: parse_u64(get("points")).map_err(|e| field("points", e))? as usize,
            n: parse_u64(get("n")).map_err(|e| field("n", e))?,
            n0: parse_auto(get("n0"), parse_u64).map_err(|e| field("n0", e))?,
            l: parse_u64(get("l")).map_err(|e| field("l", e))?,
            x: parse_u64(get("x")).map_err(|e| field("x", e))?,
            q: parse_u64(get("q")).map_err(|e| field("q", e))?,
            chi: parse_u64(get("chi")).map_err(|e| field("chi", e))? as usize,
            beta: get("beta").parse().map_err(|e| field("beta", e))?,
            count: parse_u64(get("count")).map_err(|e| field("count", e))?,
            t_bound: match get("t-bound") {
                "x" => None,
                v => Some(parse_f64(v).map_err(|e| field("t-bound", e))?),
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Domain checks shared by every experiment; experiment-specific ranges
    /// are checked by the library calls themselves.
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::Usage(m.to_string()));
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return bad("tau must be positive");
        }
        if let Some(eta) = self.eta {
            if !(eta > 0.0 && eta < self.tau / 4.0) {
                return bad("eta must lie in (0, tau/4)");
            }
        }
        if !(self.delta > 0.0) || self.period_multiplier == 0 || self.fiber_scale == 0 {
            return bad("delta, period-multiplier and fiber-scale must be positive");
        }
        if !self.x0.is_finite() || !self.y0.is_finite() {
            return bad("seed point must be finite");
        }
        if self.limit == 0 {
            return bad("limit must be at least 1");
        }
        if self.checkpoints.is_empty() || self.checkpoints[0] == 0 || self.checkpoints.windows(2).any(|w| w[0] >= w[1])
        {
            return bad("checkpoints must be positive and strictly increasing");
        }
        if self.p1 == self.p2 || self.p1 < 2 || self.p2 < 2 {
            return bad("p1 and p2 must be distinct and at least 2");
        }
        if self.cf_len < 2 || self.b1 == 0 || self.b2 == 0 {
            return bad("cf-len must be at least 2 and b1, b2 positive");
        }
        if self.grid_density == 0 || self.points == 0 || self.n == 0 || self.q == 0 || self.a == 0 || self.count == 0 {
            return bad("grid-density, points, n, q, a and count must be positive");
        }
        if let Some(t) = self.t_bound {
            if !(t >= 0.0 && t.is_finite()) {
                return bad("t-bound must be non-negative");
            }
        }
        Ok(())
    }

    /// Canonical `(key, value)` echo, `experiment` first.
    pub fn to_pairs(&self) -> Vec<(String, String)> {
        let auto = |v: Option<String>| v.unwrap_or_else(|| "auto".into());
        let mut out = vec![("experiment".to_string(), self.experiment.clone())];
        let mut push = |k: &str, v: String| out.push((k.to_string(), v));
        push("alpha", self.alpha.to_string());
        push("h", self.h.to_string());
        push("tau", fmt_f64(self.tau));
        push("m-max", self.m_max.to_string());
        push("seed", self.seed.to_string());
        push("xi1", self.xi1.to_string());
        push("xi2", self.xi2.to_string());
        push("x0", fmt_f64(self.x0));
        push("y0", fmt_f64(self.y0));
        push("limit", self.limit.to_string());
        push("checkpoints", join(&self.checkpoints));
        push("eta", auto(self.eta.map(fmt_f64)));
        push("period-multiplier", self.period_multiplier.to_string());
        push("delta", fmt_f64(self.delta));
        push("b1", self.b1.to_string());
        push("b2", self.b2.to_string());
        push("p1", self.p1.to_string());
        push("p2", self.p2.to_string());
        push("fiber-scale", self.fiber_scale.to_string());
        push("precision-bits", self.precision_bits.to_string());
        push("threads", self.threads.to_string());
        push("out", auto(self.out.as_ref().map(|p| p.display().to_string())));
        push("cf-len", self.cf_len.to_string());
        push("k", auto(self.k.map(|k| k.to_string())));
        push("a", self.a.to_string());
        push("grid-density", self.grid_density.to_string());
        push("points", self.points.to_string());
        push("n", self.n.to_string());
        push("n0", auto(self.n0.map(|v| v.to_string())));
        push("l", self.l.to_string());
        push("x", self.x.to_string());
        push("q", self.q.to_string());
        push("chi", self.chi.to_string());
        push("beta", self.beta.to_string());
        push("count", self.count.to_string());
        push("t-bound", self.t_bound.map_or_else(|| "x".to_string(), fmt_f64));
        out
    }

    /// The `out` key, else `$SKEWLAB_OUT`, else `skewlab-out`.
    pub fn resolve_out(&mut self) -> PathBuf {
        if self.out.is_none() {
            let dir = std::env::var_os(OUT_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
            self.out = Some(dir.unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR)));
        }
        self.out.clone().expect("just set")
    }

    pub fn observable(&self) -> Observable {
        Observable::new(self.xi1, self.xi2)
    }

    pub fn seed_point(&self) -> TorusPoint {
        TorusPoint::new(self.x0, self.y0)
    }

    /// Configured checkpoints that the sieve covers.
    pub fn checkpoints_within(&self, limit: u64) -> Vec<u64> {
        self.checkpoints.iter().copied().filter(|&c| c <= limit).collect()
    }
}

/// Parses a config file into pairs. Lines are `key = value` or `key value`;
/// blank lines and `#` comments are skipped.
pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = match line.split_once('=') {
            Some((k, v)) => (k.trim(), v.trim()),
            None => match line.split_once(char::is_whitespace) {
                Some((k, v)) => (k.trim(), v.trim()),
                None => return Err(CliError::Usage(format!("line {}: expected key = value, got {raw:?}", i + 1))),
            },
        };
        if k.is_empty() || v.is_empty() {
            return Err(CliError::Usage(format!("line {}: expected key = value, got {raw:?}", i + 1)));
        }
        pairs.push((k.to_string(), v.to_string()));
    }
    Ok(pairs)
}

/// Reads `config` pairs back out of a `manifest.json`.
pub fn parse_manifest(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| CliError::Usage(format!("manifest: {e}")))?;
    let cfg = v
        .get("config")
        .and_then(|c| c.as_object())
        .ok_or_else(|| CliError::Usage("manifest has no config object".into()))?;
    cfg.iter()
        .map(|(k, v)| match v.as_str() {
            Some(s) => Ok((k.clone(), s.to_string())),
            None => Err(CliError::Usage(format!("manifest value for {k:?} is not a string"))),
        })
        .collect()
}

/// Splits `--key value` arguments. `--config FILE` and `--manifest FILE` are
/// expanded in place, so overrides after them win.
pub fn parse_overrides(args: &[String]) -> Result<Vec<(String, String)>, CliError> {
    let mut pairs = Vec::new();
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        let key = arg
            .strip_prefix("--")
            .filter(|k| !k.is_empty())
            .ok_or_else(|| CliError::Usage(format!("expected --key value, got {arg:?}")))?;
        let (key, value) = match key.split_once('=') {
            Some((k, v)) => (k.to_string(), v.to_string()),
            None => {
                let v = it.next().ok_or_else(|| CliError::Usage(format!("--{key} needs a value")))?;
                (key.to_string(), v.clone())
            }
        };
        match key.as_str() {
            "config" => pairs.extend(parse_config_text(&read(Path::new(&value))?)?),
            "manifest" => pairs.extend(parse_manifest(&read(Path::new(&value))?)?),
            _ => pairs.push((key, value)),
        }
    }
    Ok(pairs)
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

/// Shortest round-trip form, so parsing the echo gives back the same bits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("expected a number, got {s:?}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("expected a finite number, got {s:?}"))
    }
}

/// Integers may be written in exponent form (`1e6`) when the value is exact.
fn parse_u64(s: &str) -> Result<u64, String> {
    let s = s.trim();
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = s.parse().map_err(|_| format!("expected a non-negative integer, got {s:?}"))?;
    if v >= 0.0 && v.fract() == 0.0 && v < 2f64.powi(53) {
        Ok(v as u64)
    } else {
        Err(format!("expected a non-negative integer, got {s:?}"))
    }
}

fn parse_i64(s: &str) -> Result<i64, String> {
    s.trim().parse().map_err(|_| format!("expected an integer, got {s:?}"))
}

fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>, String> {
    parse_list_with(s, |p| p.parse::<T>().map_err(|_| format!("bad list entry {p:?}")))
}

fn parse_list_with<T>(s: &str, f: impl Fn(&str) -> Result<T, String>) -> Result<Vec<T>, String> {
    s.split(',').map(|p| f(p.trim())).collect()
}

fn parse_auto<T>(s: &str, f: impl Fn(&str) -> Result<T, String>) -> Result<Option<T>, String> {
    if s == "auto" {
        Ok(None)
    } else {
        f(s).map(Some)
    }
}
