//! The named experiments. Each one turns a configuration into summary
//! values, a curve table and a list of invariant checks; nothing here touches
//! the filesystem except reading an `h` coefficient file.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use skewlab_core::arith::{character_group, mobius_of, mobius_sieve, MobiusTable};
use skewlab_core::cfrac::{qnorm_check, resonant_indices, ContinuedFraction, IrrationalSpec, QnormStatus};
use skewlab_core::correlate::{
    bsz_correlation, davenport_series, davenport_sum, dirichlet_decompose_with, mobius_orbit_average, mu_chi_series,
    short_interval_avg_mobius, short_interval_lhs, short_interval_lhs_mobius, DirichletBasis, PeriodicObservable,
};
use skewlab_core::estimates::{
    almost_period_deviation, calibrated_deviations, mrt_bound, rotation_resonance, EstimateConfig,
};
use skewlab_core::fourier::{check_small_divisor_bound, coboundary_phi, resonant_set, split_resonant};
use skewlab_core::{Mobius, Observable, Phase, PretentiousConfig, SkewProduct, TorusPoint};

use crate::checks::Check;
use crate::config::{fmt_f64, ExperimentConfig};
use crate::CliError;

/// Orbit budget for the two-prime correlation.
const BSZ_BUDGET: u64 = 200_000_000;
/// Convergent denominators above this many bits are beyond the 128-bit phase.
const PHASE_BITS: u64 = 100;

/// A CSV table: header row plus data rows, `,` separated, LF terminated.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Curves {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Curves {
    pub fn new(header: &[&str]) -> Self {
        Curves { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub values: Map<String, Value>,
    pub checks: Vec<Check>,
    pub curves: Curves,
}

impl Outcome {
    fn new(header: &[&str]) -> Self {
        Outcome { values: Map::new(), checks: Vec::new(), curves: Curves::new(header) }
    }

    fn set(&mut self, key: &str, v: Value) {
        self.values.insert(key.to_string(), v);
    }

    fn check(&mut self, name: &str, pass: bool, detail: String) {
        self.checks.push(Check::new(name, pass, detail));
    }
}

fn f(x: f64) -> String {
    fmt_f64(x)
}

fn cjson(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    match cfg.experiment.as_str() {
        "sieve" => sieve(cfg),
        "cfrac" => cfrac(cfg),
        "resonant-set" => resonant(cfg),
        "coboundary" => coboundary(cfg),
        "cocycle-deviation" => cocycle_deviation(cfg),
        "almost-period" => almost_period(cfg),
        "davenport" => davenport(cfg),
        "main-sum" => main_sum(cfg),
        "bsz" => bsz(cfg),
        "dirichlet-decompose" => dirichlet(cfg),
        "short-interval" => short_interval(cfg),
        "mu-chi" => mu_chi(cfg),
        "furstenberg-demo" => furstenberg_demo(cfg),
        other => Err(CliError::Usage(format!("unknown experiment {other:?}"))),
    }
}

fn rotation(cfg: &ExperimentConfig) -> Result<(IrrationalSpec, ContinuedFraction), CliError> {
    Ok(cfg.alpha.resolve(cfg.tau, cfg.cf_len, cfg.precision_bits)?)
}

fn system(cfg: &ExperimentConfig) -> Result<(ContinuedFraction, SkewProduct), CliError> {
    let (spec, cf) = rotation(cfg)?;
    let h = cfg.h.resolve(&cf, cfg.tau, cfg.m_max, cfg.seed)?;
    Ok((cf, SkewProduct::from_spec(&spec, h)?))
}

fn sieve_to(cfg: &ExperimentConfig, needed: u64) -> Result<MobiusTable, CliError> {
    Ok(mobius_sieve(cfg.limit.max(needed))?)
}

/// Checkpoints covered by the limit, or the limit itself if none are.
fn checkpoints(cfg: &ExperimentConfig) -> Vec<u64> {
    let c = cfg.checkpoints_within(cfg.limit);
    if c.is_empty() {
        vec![cfg.limit]
    } else {
        c
    }
}

fn describe_system(out: &mut Outcome, cfg: &ExperimentConfig, cf: &ContinuedFraction, t: &SkewProduct) {
    out.set("alpha", json!(cfg.alpha.to_string()));
    out.set("alpha_value", json!(t.alpha().phase.to_f64()));
    out.set("quotients", json!(cf.quotients().iter().map(|a| a.to_string()).collect::<Vec<_>>()));
    out.set("h_support", json!(t.h().support()));
    out.set("h_mean", json!(t.h().mean()));
    out.set("h_decay_c", json!(t.h().decay_c()));
    out.set("system_hash", json!(skewlab_core::correlate::system_hash(t)));
}

fn series_rows(out: &mut Outcome, series: &[(u64, Complex64)]) {
    for (n, z) in series {
        out.curves.push(vec![n.to_string(), f(z.re), f(z.im), f(z.norm())]);
    }
    out.set("series", Value::Array(series.iter().map(|(n, z)| json!({"n": n, "value": cjson(*z)})).collect()));
}

fn sieve(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let mu = mobius_sieve(cfg.limit)?;
    let mut out = Outcome::new(&["n", "mertens", "mertens_over_n"]);
    let mut marks = cfg.checkpoints_within(cfg.limit);
    if marks.last() != Some(&cfg.limit) {
        marks.push(cfg.limit);
    }
    let (mut running, mut next) = (0i64, marks.iter().peekable());
    for n in 1..=cfg.limit {
        running += mu.get(n) as i64;
        if next.peek() == Some(&&n) {
            out.curves.push(vec![n.to_string(), running.to_string(), f(running as f64 / n as f64)]);
            next.next();
        }
    }
    let counts = |v: i8| mu.as_slice().iter().skip(1).filter(|&&m| m == v).count();
    out.set("limit", json!(cfg.limit));
    out.set("mertens", json!(running));
    out.set("count_plus", json!(counts(1)));
    out.set("count_minus", json!(counts(-1)));
    out.set("count_zero", json!(counts(0)));
    let upto = cfg.limit.min(100_000);
    let bad = (1..=upto).find(|&n| mu.get(n) != mobius_of(n));
    out.check(
        "trial-division",
        bad.is_none(),
        match bad {
            Some(n) => format!("mu({n}) disagrees with factorisation"),
            None => format!("agrees for n <= {upto}"),
        },
    );
    Ok(out)
}

fn cfrac(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let (spec, cf) = rotation(cfg)?;
    let mut out = Outcome::new(&["k", "a_k", "p_k", "q_k", "qnorm", "lower", "upper", "status", "resonant"]);
    let resonant = resonant_indices(&cf, cfg.tau, cfg.b1);
    let mut violated = Vec::new();
    for k in 0..=cf.len() {
        let a = if k == 0 { "0".to_string() } else { cf.a(k).to_string() };
        let (value, lower, upper, status) = if k < cf.len() {
            let c = qnorm_check(&cf, &spec, k)?;
            if c.status == QnormStatus::Violated {
                violated.push(k);
            }
            (f(c.value), f(c.lower), f(c.upper), format!("{:?}", c.status))
        } else {
            (String::new(), String::new(), String::new(), "OutOfDomain".to_string())
        };
        out.curves.push(vec![
            k.to_string(),
            a,
            cf.p(k).to_string(),
            cf.q(k).to_string(),
            value,
            lower,
            upper,
            status,
            resonant.contains(&k).to_string(),
        ]);
    }
    out.set("alpha", json!(cfg.alpha.to_string()));
    out.set("len", json!(cf.len()));
    out.set("quotients", json!(cf.quotients().iter().map(|a| a.to_string()).collect::<Vec<_>>()));
    out.set("resonant_indices", json!(resonant));
    let det = cf.check_invariants();
    out.check(
        "determinant",
        det.is_ok(),
        det.err().map_or("p_(k-1) q_k - p_k q_(k-1) = (-1)^k".into(), |e| e.to_string()),
    );
    out.check("qnorm-bounds", violated.is_empty(), format!("violated at k in {violated:?}"));
    Ok(out)
}

fn resonant(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let (spec, cf) = rotation(cfg)?;
    let set = resonant_set(&cf, cfg.tau, cfg.b1, cfg.b2, cfg.m_max as u64)?;
    let mut out = Outcome::new(&["m"]);
    for m in &set.members {
        out.curves.push(vec![m.to_string()]);
    }
    out.set("members", json!(set.members));
    out.set("indices", json!(set.indices));
    out.set("q", json!(set.indices.iter().map(|&k| cf.q(k).to_string()).collect::<Vec<_>>()));
    let symmetric = set.members.iter().all(|m| set.contains(-m));
    out.check("symmetric", symmetric, format!("{} members", set.len()));
    let alpha = spec.to_phase()?;
    let small = check_small_divisor_bound(&cf, &alpha, cfg.m_max as u64);
    out.check(
        "small-divisor",
        small.is_ok(),
        match small {
            Ok(n) => format!("||m alpha|| >= 1/(2m) at {n} non-resonant frequencies"),
            Err(e) => e.to_string(),
        },
    );
    Ok(out)
}

fn coboundary(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let (cf, t) = system(cfg)?;
    let set = resonant_set(&cf, cfg.tau, cfg.b1, cfg.b2, cfg.m_max as u64)?;
    let (h1, h2) = split_resonant(t.h(), &set);
    let phi = coboundary_phi(&h2, t.alpha())?;
    let alpha = t.alpha().phase;
    let mut out = Outcome::new(&["x", "h", "h1", "h2", "phi", "residual"]);
    let mut worst = 0.0f64;
    for i in 0..cfg.points {
        let x = Phase::from_ratio_u64(i as u64, cfg.points as u64);
        let r = phi.evaluate(x + alpha) - phi.evaluate(x) - h2.evaluate(x);
        worst = worst.max(r.abs());
        out.curves.push(vec![
            f(x.to_f64()),
            f(t.h().evaluate(x)),
            f(h1.evaluate(x)),
            f(h2.evaluate(x)),
            f(phi.evaluate(x)),
            f(r),
        ]);
    }
    describe_system(&mut out, cfg, &cf, &t);
    out.set("resonant_members", json!(set.members));
    out.set("max_residual", json!(worst));
    out.set("phi_l1", json!(phi.l1_norm()));
    out.check("coboundary-residual", worst <= 1e-10, format!("sup |phi(x+alpha) - phi(x) - h2(x)| = {worst:e}"));
    Ok(out)
}

/// Resonant indices `k >= 1` whose `||q_k α||` the 128-bit phase resolves.
fn testable_resonant(cf: &ContinuedFraction, tau: f64, b1: u64) -> Vec<usize> {
    resonant_indices(cf, tau, b1)
        .into_iter()
        .filter(|&k| k >= 1 && k < cf.len() && cf.q(k + 1).bits() <= PHASE_BITS && cf.q_u64(k).is_some())
        .collect()
}

fn cocycle_deviation(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let (cf, t) = system(cfg)?;
    let set = resonant_set(&cf, cfg.tau, cfg.b1, cfg.b2, cfg.m_max as u64)?;
    let mut ks = testable_resonant(&cf, cfg.tau, cfg.b1);
    if let Some(k) = cfg.k {
        let first = ks.first().copied();
        ks.retain(|&j| Some(j) == first || j == k);
        if !ks.contains(&k) {
            return Err(skewlab_core::Error::NonResonantIndex { k }.into());
        }
    }
    if ks.is_empty() {
        return Err(CliError::Usage("no resonant index k >= 1 within the phase resolution".into()));
    }
    let grid = cfg.grid_density * cfg.m_max.max(1);
    let reports = calibrated_deviations(&t, &cf, &set, &ks, grid)?;
    let mut out = Outcome::new(&["k", "q_k", "sup_deviation", "scale", "constant", "bound", "within_bound"]);
    for r in &reports {
        out.curves.push(vec![
            r.k.to_string(),
            r.q_k.to_string(),
            f(r.sup_deviation),
            f(r.scale),
            f(r.constant),
            f(r.bound),
            r.pass.to_string(),
        ]);
    }
    // the Fourier route of the fluctuation against the direct orbit sum
    let mut worst = 0.0f64;
    for r in &reports {
        for i in 0..8u64 {
            let x = Phase::from_ratio_u64(2 * i + 1, 16);
            let fourier = t.cocycle_fourier(r.q_k, x)?;
            worst = worst.max((fourier - t.cocycle_direct(r.q_k, x)).abs());
        }
    }
    describe_system(&mut out, cfg, &cf, &t);
    out.set("grid", json!(grid));
    out.set("reports", serde_json::to_value(&reports).expect("plain data"));
    out.check("cocycle-routes", worst <= 1e-8, format!("max |direct - fourier| = {worst:e}"));
    Ok(out)
}

fn sample_points(seed: u64, count: usize) -> Vec<TorusPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| TorusPoint { x: Phase::from_bits(rng.random()), y: Phase::from_bits(rng.random()) }).collect()
}

fn estimate_config(cfg: &ExperimentConfig) -> EstimateConfig {
    let mut e = EstimateConfig::new(cfg.tau);
    e.eta = cfg.eta.unwrap_or(cfg.tau / 8.0);
    e.s = cfg.period_multiplier;
    e.delta = cfg.delta;
    e.grid_density = cfg.grid_density;
    e
}

fn almost_period(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let (cf, t) = system(cfg)?;
    let ecfg = estimate_config(cfg);
    let k = match cfg.k {
        Some(k) => k,
        None => *testable_resonant(&cf, cfg.tau, cfg.b1)
            .first()
            .ok_or_else(|| CliError::Usage("no resonant index k >= 1".into()))?,
    };
    let points = sample_points(cfg.seed, cfg.points);
    let mut out = Outcome::new(&["a", "n", "x_part", "y_part", "total", "chain_bound", "below_delta"]);
    let mut broken = Vec::new();
    let mut reports = Vec::new();
    for a in 1..=cfg.a {
        let r = almost_period_deviation(&t, &ecfg, &cf, k, a, &points)?;
        if !r.chain_holds {
            broken.push(a);
        }
        out.curves.push(vec![
            a.to_string(),
            r.n.to_string(),
            f(r.x_part),
            f(r.y_part),
            f(r.total),
            f(r.chain_bound),
            r.below_delta.to_string(),
        ]);
        reports.push(r);
    }
    let res = rotation_resonance(t.alpha(), &ecfg, &cf, k)?;
    describe_system(&mut out, cfg, &cf, &t);
    out.set("k", json!(k));
    out.set("points", json!(points.len()));
    out.set("reports", serde_json::to_value(&reports).expect("plain data"));
    out.set("rotation", serde_json::to_value(&res).expect("plain data"));
    out.check("chain-inequality", broken.is_empty(), format!("fails for a in {broken:?}"));
    Ok(out)
}

fn davenport(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let (spec, _) = cfg.beta.resolve(cfg.tau, cfg.cf_len, cfg.precision_bits)?;
    let beta = spec.to_phase()?.phase;
    let mu = sieve_to(cfg, 0)?;
    let marks = checkpoints(cfg);
    let series = davenport_series(beta, &marks, &mu)?;
    let mut out = Outcome::new(&["n", "re", "im", "abs"]);
    series_rows(&mut out, &series);
    out.set("beta", json!(cfg.beta.to_string()));
    out.set("beta_value", json!(beta.to_f64()));
    let (n, last) = *series.last().expect("at least one checkpoint");
    let direct = davenport_sum(beta, n, &mu)?;
    let diff = (direct - last).norm();
    out.check("blocked-sum", diff <= 1e-10, format!("|series - direct| = {diff:e} at N = {n}"));
    Ok(out)
}

fn main_sum(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let (cf, t) = system(cfg)?;
    let mu = sieve_to(cfg, 0)?;
    let marks = checkpoints(cfg);
    let f_obs = cfg.observable();
    let p0 = cfg.seed_point();
    let s = mobius_orbit_average(&t, f_obs, &p0, &marks, &mu)?;
    let mut out = Outcome::new(&["n", "re", "im", "abs", "mertens_over_n"]);
    for (n, z) in &s.checkpoints {
        out.curves.push(vec![n.to_string(), f(z.re), f(z.im), f(z.norm()), f(mu.mertens(*n)? as f64 / *n as f64)]);
    }
    out.set("series", Value::Array(s.checkpoints.iter().map(|(n, z)| json!({"n": n, "value": cjson(*z)})).collect()));
    describe_system(&mut out, cfg, &cf, &t);
    reduction_checks(&mut out, &t, f_obs, &p0, &s.checkpoints, &mu)?;
    Ok(out)
}

/// The two closed-form channels of the Möbius–orbit average: ξ2 = 0 is a
/// Davenport sum, and h = 0 with ξ1 = 0 is e(ξ2 y0) M(N)/N.
fn reduction_checks(
    out: &mut Outcome,
    t: &SkewProduct,
    f_obs: Observable,
    p0: &TorusPoint,
    series: &[(u64, Complex64)],
    mu: &MobiusTable,
) -> Result<(), CliError> {
    if f_obs.xi2 == 0 {
        let mut worst = 0.0f64;
        for (n, z) in series {
            let d = p0.x.mul_i64(f_obs.xi1).e() * davenport_sum(t.alpha().phase.mul_i64(f_obs.xi1), *n, mu)?;
            worst = worst.max((z - d).norm());
        }
        out.check("davenport-channel", worst <= 1e-10, format!("max |average - davenport| = {worst:e}"));
    }
    if f_obs.xi1 == 0 && t.h().support().is_empty() && t.h().mean() == 0.0 {
        let mut worst = 0.0f64;
        for (n, z) in series {
            let m = p0.y.mul_i64(f_obs.xi2).e() * (mu.mertens(*n)? as f64 / *n as f64);
            worst = worst.max((z - m).norm());
        }
        out.check("mertens-channel", worst <= 1e-12, format!("max |average - e(xi2 y0) M(N)/N| = {worst:e}"));
    }
    Ok(())
}

fn bsz(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let (cf, t) = system(cfg)?;
    let f_obs = cfg.observable();
    let p0 = cfg.seed_point();
    let mut marks: Vec<u64> = cfg.checkpoints.iter().copied().filter(|&c| c < cfg.n).collect();
    marks.push(cfg.n);
    let mut out = Outcome::new(&["n", "direct_re", "direct_im", "derived_re", "derived_im", "residual"]);
    let mut worst = 0.0f64;
    let mut last = None;
    for &n in &marks {
        let r = bsz_correlation(&t, f_obs, &p0, cfg.p1, cfg.p2, n, BSZ_BUDGET)?;
        worst = worst.max(r.residual);
        out.curves.push(vec![
            n.to_string(),
            f(r.direct.re),
            f(r.direct.im),
            f(r.derived.re),
            f(r.derived.im),
            f(r.residual),
        ]);
        last = Some(r);
    }
    describe_system(&mut out, cfg, &cf, &t);
    out.set("report", serde_json::to_value(last.expect("n >= 1")).expect("plain data"));
    out.check("derived-route", worst <= 1e-8, format!("max |direct - derived| = {worst:e}"));
    Ok(out)
}

fn dirichlet(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let needed = cfg.l + cfg.a * cfg.q;
    let mu = sieve_to(cfg, needed)?;
    let basis = DirichletBasis::new(cfg.q, cfg.l, cfg.a, &mu)?;
    let mut out = Outcome::new(&[
        "index",
        "lhs_re",
        "lhs_im",
        "identity_residual",
        "mean_square",
        "bound",
        "parseval",
        "inequality_holds",
    ]);
    let (mut worst_id, mut worst_parseval, mut failures) = (0.0f64, 0.0f64, 0usize);
    let mut pairs = 0;
    for i in 0..cfg.count {
        let weights = PeriodicObservable::random_unimodular(cfg.q, cfg.seed.wrapping_add(i));
        let r = dirichlet_decompose_with(&weights, &basis, &mu)?;
        worst_id = worst_id.max(r.identity_residual);
        worst_parseval = worst_parseval.max(r.parseval_max);
        failures += usize::from(!r.inequality_holds);
        pairs = r.pairs;
        out.curves.push(vec![
            i.to_string(),
            f(r.lhs.re),
            f(r.lhs.im),
            f(r.identity_residual),
            f(r.mean_square),
            f(r.bound),
            f(r.parseval_max),
            r.inequality_holds.to_string(),
        ]);
    }
    out.set("q", json!(cfg.q));
    out.set("a", json!(cfg.a));
    out.set("l", json!(cfg.l));
    out.set("pairs", json!(pairs));
    out.check("grouping-identity", worst_id <= 1e-10, format!("max residual {worst_id:e}"));
    out.check("character-inequality", failures == 0, format!("{failures} of {} weights violate the bound", cfg.count));
    out.check("parseval", worst_parseval <= 1.0 + 1e-12, format!("max sum |w|^2 = {worst_parseval}"));
    Ok(out)
}

fn short_interval(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let mu = sieve_to(cfg, 2 * cfg.x + cfg.l)?;
    let pcfg = PretentiousConfig { t_bound: cfg.t_bound, ..PretentiousConfig::default() };
    let report = short_interval_avg_mobius(&mu, cfg.x, cfg.l, &pcfg)?;
    let mut windows: Vec<u64> =
        std::iter::successors(Some(10u64), |w| w.checked_mul(10)).take_while(|&w| w < cfg.l).collect();
    windows.push(cfg.l);
    let mut out = Outcome::new(&["l", "lhs", "rhs", "ratio"]);
    for &l in &windows {
        let lhs = if l == cfg.l { report.lhs } else { short_interval_lhs_mobius(&mu, cfg.x, l)? };
        let rhs = mrt_bound(report.m_value, cfg.x, l)?;
        out.curves.push(vec![l.to_string(), f(lhs), f(rhs), f(lhs / rhs)]);
    }
    out.set("report", serde_json::to_value(&report).expect("plain data"));
    let generic = short_interval_lhs(&Mobius(&mu), cfg.x, cfg.l)?;
    let rel = (generic - report.lhs).abs() / report.lhs.max(f64::MIN_POSITIVE);
    out.check("integer-route", rel <= 1e-12, format!("relative gap between integer and complex sliding sums {rel:e}"));
    Ok(out)
}

fn mu_chi(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let group = character_group(cfg.q);
    if cfg.chi >= group.len() {
        return Err(CliError::Usage(format!(
            "chi index {} out of range: {} characters mod {}",
            cfg.chi,
            group.len(),
            cfg.q
        )));
    }
    let chi = group.character(cfg.chi);
    let mu = sieve_to(cfg, 0)?;
    let series = mu_chi_series(&chi, &checkpoints(cfg), &mu)?;
    let normalized: Vec<(u64, Complex64)> = series.iter().map(|&(n, z)| (n, z / n as f64)).collect();
    let mut out = Outcome::new(&["n", "re", "im", "abs"]);
    series_rows(&mut out, &normalized);
    out.set("q", json!(cfg.q));
    out.set("chi", json!(cfg.chi));
    out.set("conductor", json!(chi.conductor()));
    out.set("primitive", json!(chi.is_primitive()));
    out.set("principal", json!(chi.is_principal()));
    let inv = chi.check_invariants();
    out.check(
        "character-table",
        inv.is_ok(),
        inv.err().map_or("zero pattern, unit values, multiplicativity".into(), |e| e.to_string()),
    );
    Ok(out)
}

fn furstenberg_demo(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let (cf, t) = system(cfg)?;
    let mu = sieve_to(cfg, 0)?;
    let marks = checkpoints(cfg);
    let p0 = cfg.seed_point();
    let f_obs = cfg.observable();
    let s = mobius_orbit_average(&t, f_obs, &p0, &marks, &mu)?;
    let mut out = Outcome::new(&["n", "re", "im", "abs"]);
    series_rows(&mut out, &s.checkpoints);
    describe_system(&mut out, cfg, &cf, &t);
    let resonant_q: Vec<String> = resonant_indices(&cf, cfg.tau, 1).iter().map(|&k| cf.q(k).to_string()).collect();
    out.set("resonant_q", json!(resonant_q));
    reduction_checks(&mut out, &t, f_obs, &p0, &s.checkpoints, &mu)?;
    let x_channel = Observable::new(f_obs.xi1.max(1), 0);
    let sx = mobius_orbit_average(&t, x_channel, &p0, &marks, &mu)?;
    reduction_checks(&mut out, &t, x_channel, &p0, &sx.checkpoints, &mu)?;
    Ok(out)
}
