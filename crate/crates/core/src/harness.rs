//! Seeded instance generation, property campaigns and the Heronian search.
//!
//! Every trial derives its inputs from `sub_seed(seed, stream, index)` alone
//! (see [`crate::rng`]), so a report is a pure function of its
//! [`FuzzConfig`] and any recorded witness can be regenerated with
//! [`replay`].

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::invariance::{self, InvarianceTriple};
use crate::matfun::{weighted_outer_sum, SpdMatrix, SquareMatrix, SymMatrix};
use crate::operator::{congruence_equivariance_residual, mean, OperatorMeanKind, PreparedPair, RepFn};
use crate::order::{self, sample_points, TestFn};
use crate::quadrature::{self, DEFAULT_ORDER};
use crate::rng::{stream_tag, sub_seed, Stream};
use crate::scalar::{self, ScalarMeanKind, Weight};

/// Threshold and oracle re-check for Heronian counterexamples.
pub const HERONIAN_THRESHOLD: f64 = 1e-9;
pub const PAPER_PROBE: (f64, f64, f64) = (706.0, 31.8, 0.2169);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Chain,
    IdentricChain,
    Block,
    Invariance,
    Monotone,
    Hh,
    Scalar,
    Axioms,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Chain,
        Suite::IdentricChain,
        Suite::Block,
        Suite::Invariance,
        Suite::Monotone,
        Suite::Hh,
        Suite::Scalar,
        Suite::Axioms,
    ];

    pub fn parse(s: &str) -> Result<Self> {
        serde_json::from_value(Value::String(s.to_string())).map_err(|_| Error::Config(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MonotoneConfig {
    /// Asserted functions: log, identric, affine, power, harmonic, half_sum,
    /// log_identric, x2.
    pub fns: Vec<String>,
    /// Reported but never asserted.
    pub probes: Vec<String>,
    /// Also require `x²` to be flagged at order 2.
    pub control: bool,
    pub min_order: usize,
    pub max_order: usize,
    pub trials: usize,
    pub domain: (f64, f64),
    pub t_values: Vec<Weight>,
}

impl Default for MonotoneConfig {
    fn default() -> Self {
        MonotoneConfig {
            fns: ["log", "log_identric", "affine", "power", "harmonic"].map(String::from).to_vec(),
            probes: vec!["identric".into()],
            control: true,
            min_order: 2,
            max_order: 6,
            trials: 500,
            domain: (1e-2, 1e2),
            t_values: (1..=9).map(|k| Weight::new(k as f64 / 10.0).unwrap()).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometricTriple {
    pub p: Weight,
    pub q: Weight,
    pub r: Weight,
}

impl Default for GeometricTriple {
    fn default() -> Self {
        GeometricTriple { p: Weight::HALF, q: Weight::new(1.0 / 3.0).unwrap(), r: Weight::new(2.0 / 3.0).unwrap() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FuzzConfig {
    pub seed: u64,
    pub dims: Vec<usize>,
    /// Random SPD pairs per dimension.
    pub trials: usize,
    pub spectrum_decades: f64,
    pub t_grid: Vec<Weight>,
    pub tol: f64,
    pub suites: Vec<Suite>,
    pub block_t: Weight,
    pub invariance: GeometricTriple,
    pub monotone: MonotoneConfig,
    pub scalar_samples: usize,
    pub oracle_samples: usize,
    pub hh_samples: usize,
    /// Quadruples per dimension for the axiom probes.
    pub axiom_trials: usize,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            seed: 42,
            dims: (2..=8).collect(),
            trials: 1000,
            spectrum_decades: 2.0,
            t_grid: (0..=20).map(|k| Weight::new(k as f64 / 20.0).unwrap()).collect(),
            tol: order::DEFAULT_TOL,
            suites: Suite::ALL.to_vec(),
            block_t: Weight::HALF,
            invariance: GeometricTriple::default(),
            monotone: MonotoneConfig::default(),
            scalar_samples: 1000,
            oracle_samples: 200,
            hh_samples: 100,
            axiom_trials: 100,
        }
    }
}

impl FuzzConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.dims.is_empty() {
            return Err(Error::Config("dims must be non-empty".into()));
        }
        if let Some(d) = self.dims.iter().find(|&&d| !(1..=8).contains(&d)) {
            return Err(Error::Config(format!("dimension {d} outside [1, 8]")));
        }
        if self.t_grid.is_empty() {
            return Err(Error::Config("t grid must be non-empty".into()));
        }
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            return Err(Error::Config(format!("bad tolerance {}", self.tol)));
        }
        if !(self.spectrum_decades.is_finite() && self.spectrum_decades >= 0.0 && self.spectrum_decades <= 5.0) {
            return Err(Error::Config(format!("spectrum decades {} outside [0, 5]", self.spectrum_decades)));
        }
        if self.suites.is_empty() {
            return Err(Error::Config("no suites selected".into()));
        }
        let m = &self.monotone;
        if m.min_order < 2 || m.max_order > 8 || m.min_order > m.max_order {
            return Err(Error::Config(format!("monotone orders {}..={} outside [2, 8]", m.min_order, m.max_order)));
        }
        if m.trials == 0 {
            return Err(Error::Config("monotone trials must be at least 1".into()));
        }
        if !(m.domain.0 > 0.0 && m.domain.1 > m.domain.0 && m.domain.1.is_finite()) {
            return Err(Error::Config(format!("bad monotone domain {:?}", m.domain)));
        }
        for name in m.fns.iter().chain(&m.probes) {
            test_fn(name, Weight::HALF)?;
        }
        Ok(())
    }

    fn has(&self, s: Suite) -> bool {
        self.suites.contains(&s)
    }
}

/// Resolves a monotone-campaign function name at weight `t`.
pub fn test_fn(name: &str, t: Weight) -> Result<TestFn> {
    Ok(match name {
        "log" => TestFn::Rep(RepFn::Log(t)),
        "identric" => TestFn::Rep(RepFn::Identric(t)),
        "affine" => TestFn::Rep(RepFn::Affine(t)),
        "power" => TestFn::Rep(RepFn::Power(t)),
        "harmonic" => TestFn::Rep(RepFn::Harmonic(t)),
        "half_sum" => TestFn::Rep(RepFn::HalfSum(t)),
        "log_identric" => TestFn::LogIdentric(t),
        "x2" => TestFn::Square,
        _ => return Err(Error::Config(format!("unknown function {name:?}"))),
    })
}

fn weight_free(name: &str) -> bool {
    name == "x2"
}

/// `Q diag(λ) Qᵀ` with `Q` from Gram–Schmidt on a Gaussian matrix and
/// `λ = 10^{d(2u - 1)}`.
pub fn random_spd(dim: usize, seed: u64, decades: f64) -> Result<SpdMatrix> {
    if !(1..=crate::matfun::MAX_DIM).contains(&dim) {
        return Err(Error::Config(format!("dimension {dim} outside [1, 64]")));
    }
    let mut s = Stream::new(seed);
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<f64> = (0..dim).map(|_| s.gaussian()).collect();
        for q in &cols {
            let d: f64 = v.iter().zip(q).map(|(x, y)| x * y).sum();
            v.iter_mut().zip(q).for_each(|(x, y)| *x -= d * y);
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= norm);
        cols.push(v);
    }
    let lambda: Vec<f64> = (0..dim).map(|_| 10f64.powf(decades * (2.0 * s.uniform() - 1.0))).collect();
    let mut q = vec![0.0; dim * dim];
    for (j, c) in cols.iter().enumerate() {
        for i in 0..dim {
            q[i * dim + j] = c[i];
        }
    }
    let m = weighted_outer_sum(&SquareMatrix::new(dim, q)?, &lambda);
    SpdMatrix::new(m)
}

/// `(A, A + PᵀP)`; one draw in eight takes `P = 0`.
pub fn random_ordered_pair(dim: usize, seed: u64, decades: f64) -> Result<(SpdMatrix, SpdMatrix)> {
    let a = random_spd(dim, sub_seed(seed, 1, 0), decades)?;
    let mut s = Stream::new(sub_seed(seed, 2, 0));
    if s.uniform() < 0.125 {
        return Ok((a.clone(), a));
    }
    let size = 10f64.powf(decades * (s.uniform() - 0.5));
    let p: Vec<f64> = (0..dim * dim).map(|_| size * s.gaussian()).collect();
    let p = SquareMatrix::new(dim, p)?;
    let ptp = p.transpose().matmul(&p)?.symmetric_part();
    let c = SpdMatrix::new(a.add(&ptp)?)?;
    Ok((a, c))
}

/// The SPD pair of trial `seed` in the pair campaigns.
pub fn pair_case(dim: usize, seed: u64, decades: f64) -> Result<(SpdMatrix, SpdMatrix)> {
    Ok((random_spd(dim, sub_seed(seed, 1, 0), decades)?, random_spd(dim, sub_seed(seed, 2, 0), decades)?))
}

fn pair_seed(cfg: &FuzzConfig, dim: usize, trial: usize) -> u64 {
    sub_seed(cfg.seed, stream_tag("pairs") ^ dim as u64, trial as u64)
}

/// How a property's value is judged.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    /// `value ≥ limit`; the worst value is the minimum.
    AtLeast,
    /// `value > limit`; the worst value is the minimum.
    Above,
    /// `value ≤ limit`; the worst value is the maximum.
    AtMost,
}

impl Sense {
    fn passes(self, v: f64, limit: f64) -> bool {
        match self {
            Sense::AtLeast => v >= limit,
            Sense::Above => v > limit,
            Sense::AtMost => v <= limit,
        }
    }

    fn worse(self, v: f64, than: f64) -> bool {
        match self {
            Sense::AtLeast | Sense::Above => v < than,
            Sense::AtMost => v > than,
        }
    }
}

/// Everything needed to regenerate one evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub sub_seed: u64,
    pub dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    pub inputs: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyStats {
    pub name: String,
    pub sense: Sense,
    pub limit: f64,
    pub informational: bool,
    pub trials: usize,
    pub failures: usize,
    pub errors: usize,
    /// Candidates the oracle re-check attributed to roundoff.
    #[serde(skip_serializing_if = "is_zero")]
    pub dismissed: usize,
    pub worst: Option<f64>,
    pub worst_case: Option<Witness>,
    pub first_failure: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_error: Option<String>,
}

impl PropertyStats {
    pub fn new(name: &str, sense: Sense, limit: f64) -> Self {
        PropertyStats {
            name: name.into(),
            sense,
            limit,
            informational: false,
            trials: 0,
            failures: 0,
            errors: 0,
            dismissed: 0,
            worst: None,
            worst_case: None,
            first_failure: None,
            first_error: None,
        }
    }

    pub fn informational(mut self) -> Self {
        self.informational = true;
        self
    }

    pub fn passes(&self) -> bool {
        self.informational || (self.failures == 0 && self.errors == 0)
    }

    /// Records one evaluation; `witness` is only built when it is kept.
    pub fn record(&mut self, value: Result<f64>, witness: impl Fn(f64) -> Witness) {
        self.trials += 1;
        let v = match value {
            Ok(v) => v,
            Err(e) => {
                self.errors += 1;
                if self.first_error.is_none() {
                    self.first_error = Some(e.to_string());
                }
                return;
            }
        };
        let fails = !self.sense.passes(v, self.limit);
        if fails {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(witness(v));
            }
        }
        if self.worst.is_none_or(|w| self.sense.worse(v, w)) {
            self.worst = Some(v);
            self.worst_case = Some(witness(v));
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub config: FuzzConfig,
    pub pass: bool,
    pub properties: Vec<PropertyStats>,
    /// Derived quantities that are not pass/fail properties.
    pub findings: Value,
}

impl SuiteReport {
    pub fn property(&self, name: &str) -> Option<&PropertyStats> {
        self.properties.iter().find(|p| p.name == name)
    }
}

fn is_zero(n: &usize) -> bool {
    *n == 0
}

fn matrix_inputs(a: &SpdMatrix, b: &SpdMatrix) -> Value {
    json!({ "a": a.to_json(), "b": b.to_json() })
}

fn rel_margin(v: &order::OrderVerdict) -> f64 {
    v.relative_margin()
}

fn chain_value(r: &order::ChainReport) -> (f64, String) {
    let worst = r.links.iter().min_by(|x, y| rel_margin(&x.verdict).total_cmp(&rel_margin(&y.verdict))).unwrap();
    (rel_margin(&worst.verdict), worst.name.clone())
}

/// Per-pair property values at one weight. Shared by the campaign loop and
/// [`replay`].
fn pair_values(cfg: &FuzzConfig, pair: &PreparedPair, name: &str, t: Weight) -> Result<(f64, Option<String>)> {
    let tol = cfg.tol;
    match name {
        "chain_113" => {
            let (v, link) = chain_value(&order::chain_113_prepared(pair, t, tol)?);
            Ok((v, Some(link)))
        }
        "chain_30" => {
            let (v, link) = chain_value(&order::chain_30_prepared(pair, t, tol)?);
            Ok((v, Some(link)))
        }
        "corollary_li_geo" => Ok((rel_margin(&order::corollary_li_geo_prepared(pair, tol)?), None)),
        "invariance_operator" => {
            let g = cfg.invariance;
            let triple = InvarianceTriple::geometric(g.p, g.q, g.r);
            Ok((invariance::operator_invariance_residual(&triple, pair.a(), pair.b())?, None))
        }
        "gah_identity" => Ok((invariance::gah_operator_identity(pair.a(), pair.b())?, None)),
        _ => Err(Error::Config(format!("{name} is not a pair property"))),
    }
}

fn block_values(cfg: &FuzzConfig, pair: &PreparedPair) -> Result<order::BlockReport> {
    order::block_psd_test_prepared(
        pair,
        OperatorMeanKind::Logarithmic,
        OperatorMeanKind::Geometric,
        OperatorMeanKind::Identric,
        cfg.block_t,
        cfg.tol,
    )
}

struct Campaign {
    props: Vec<PropertyStats>,
}

impl Campaign {
    fn add(&mut self, p: PropertyStats) -> usize {
        self.props.push(p);
        self.props.len() - 1
    }
}

/// Runs every selected suite. Trial errors are counted, not propagated.
pub fn run_suite(cfg: &FuzzConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let mut c = Campaign { props: Vec::new() };
    let mut findings = serde_json::Map::new();
    if cfg.has(Suite::Chain) || cfg.has(Suite::IdentricChain) || cfg.has(Suite::Block) || cfg.has(Suite::Invariance) {
        pair_campaign(cfg, &mut c);
    }
    if cfg.has(Suite::Block) {
        block_scalar(cfg, &mut c);
    }
    if cfg.has(Suite::Invariance) {
        invariance_fixed(cfg, &mut c, &mut findings)?;
    }
    if cfg.has(Suite::Monotone) {
        monotone_campaign(cfg, &mut c)?;
    }
    if cfg.has(Suite::Hh) {
        hh_campaign(cfg, &mut c);
    }
    if cfg.has(Suite::Scalar) {
        scalar_campaign(cfg, &mut c, &mut findings);
    }
    if cfg.has(Suite::Axioms) {
        axiom_campaign(cfg, &mut c);
    }
    let pass = c.props.iter().all(PropertyStats::passes);
    Ok(SuiteReport { config: cfg.clone(), pass, properties: c.props, findings: Value::Object(findings) })
}

fn pair_campaign(cfg: &FuzzConfig, c: &mut Campaign) {
    let tol = cfg.tol;
    let mut per_t = Vec::new();
    let mut per_pair = Vec::new();
    if cfg.has(Suite::Chain) {
        per_t.push(c.add(PropertyStats::new("chain_113", Sense::AtLeast, -tol)));
    }
    if cfg.has(Suite::IdentricChain) {
        per_t.push(c.add(PropertyStats::new("chain_30", Sense::AtLeast, -tol)));
    }
    let mut block = None;
    if cfg.has(Suite::Block) {
        block = Some((
            c.add(PropertyStats::new("block_psd", Sense::AtLeast, -tol)),
            c.add(PropertyStats::new("block_schur", Sense::AtLeast, -tol)),
            c.add(PropertyStats::new("block_consistency", Sense::AtMost, 0.0)),
        ));
        per_pair.push(c.add(PropertyStats::new("corollary_li_geo", Sense::AtLeast, -tol)));
    }
    if cfg.has(Suite::Invariance) {
        per_pair.push(c.add(PropertyStats::new("invariance_operator", Sense::AtMost, 1e-8)));
        per_pair.push(c.add(PropertyStats::new("gah_identity", Sense::AtMost, 1e-8)));
    }

    for &dim in &cfg.dims {
        for trial in 0..cfg.trials {
            let ss = pair_seed(cfg, dim, trial);
            let prepared = pair_case(dim, ss, cfg.spectrum_decades).and_then(|(a, b)| PreparedPair::new(&a, &b));
            let pair = match prepared {
                Ok(p) => p,
                Err(e) => {
                    for &i in per_t.iter().chain(&per_pair) {
                        c.props[i].record(Err(e.clone()), |_| unreachable!());
                    }
                    continue;
                }
            };
            let inputs = || matrix_inputs(pair.a(), pair.b());
            let witness = |t: Option<f64>, detail: Option<String>| {
                move |v: f64| Witness { sub_seed: ss, dim, t, value: v, detail: detail.clone(), inputs: inputs() }
            };
            for &i in &per_t {
                let name = c.props[i].name.clone();
                for &t in &cfg.t_grid {
                    let r = pair_values(cfg, &pair, &name, t);
                    let detail = r.as_ref().ok().and_then(|x| x.1.clone());
                    c.props[i].record(r.map(|x| x.0), witness(Some(t.value()), detail));
                }
            }
            for &i in &per_pair {
                let name = c.props[i].name.clone();
                let r = pair_values(cfg, &pair, &name, cfg.block_t);
                let t = (name == "corollary_li_geo").then_some(0.5);
                c.props[i].record(r.map(|x| x.0), witness(t, None));
            }
            if let Some((bp, bs, bc)) = block {
                let t = Some(cfg.block_t.value());
                match block_values(cfg, &pair) {
                    Ok(r) => {
                        c.props[bp].record(Ok(rel_margin(&r.block)), witness(t, None));
                        c.props[bs].record(Ok(rel_margin(&r.schur)), witness(t, None));
                        let disagree = (r.block.holds != r.schur.holds) as u8 as f64;
                        c.props[bc].record(Ok(disagree), witness(t, None));
                    }
                    Err(e) => {
                        for i in [bp, bs, bc] {
                            c.props[i].record(Err(e.clone()), |_| unreachable!());
                        }
                    }
                }
            }
        }
    }
}

fn fixed_witness(value: f64, inputs: Value) -> Witness {
    Witness { sub_seed: 0, dim: 1, t: None, value, detail: None, inputs }
}

fn block_scalar(cfg: &FuzzConfig, c: &mut Campaign) {
    let t = cfg.block_t;
    let (f, g, h) = (RepFn::Log(t), RepFn::Power(t), RepFn::Identric(t));
    let (v, x) = order::scalar_block_criterion(&f, &g, &h, &order::criterion_grid());
    let i = c.add(PropertyStats::new("block_scalar_criterion", Sense::AtLeast, -cfg.tol));
    c.props[i].record(Ok(v), |v| fixed_witness(v, json!({ "x": x, "t": t.value() })));
}

fn invariance_fixed(cfg: &FuzzConfig, c: &mut Campaign, findings: &mut serde_json::Map<String, Value>) -> Result<()> {
    let g = cfg.invariance;
    let triple = InvarianceTriple::geometric(g.p, g.q, g.r);
    let grid = invariance::default_grid();
    let i = c.add(PropertyStats::new("invariance_scalar", Sense::AtMost, 1e-12));
    let s = triple.scalar_residual(&grid);
    let argmax = s.as_ref().map(|r| r.argmax).unwrap_or(f64::NAN);
    c.props[i].record(s.map(|r| r.residual), |v| fixed_witness(v, json!({ "x": argmax })));

    let i = c.add(PropertyStats::new("gah_scalar", Sense::AtMost, 1e-12));
    let s = InvarianceTriple::gah().scalar_residual(&grid);
    let argmax = s.as_ref().map(|r| r.argmax).unwrap_or(f64::NAN);
    c.props[i].record(s.map(|r| r.residual), |v| fixed_witness(v, json!({ "x": argmax })));

    findings.insert(
        "geometric_condition".into(),
        json!({ "p": g.p, "q": g.q, "r": g.r, "holds": invariance::geometric_triple_condition(g.p, g.q, g.r) }),
    );
    if let Some(w) = invariance::operator_witness(&triple, &grid, 2)? {
        let i = c.add(PropertyStats::new("invariance_witness", Sense::AtLeast, 1e-4));
        let wv = serde_json::to_value(&w).map_err(|e| Error::Parse(e.to_string()))?;
        c.props[i].record(Ok(w.operator_residual), |v| fixed_witness(v, wv.clone()));
        findings.insert("invariance_witness".into(), wv);
    }
    Ok(())
}

fn monotone_seed(cfg: &FuzzConfig, name: &str, t_index: usize) -> u64 {
    sub_seed(cfg.seed, stream_tag(&format!("monotone:{name}")), t_index as u64)
}

fn monotone_property(
    cfg: &FuzzConfig,
    name: &str,
    stats: &mut PropertyStats,
    orders: std::ops::RangeInclusive<usize>,
) -> Result<()> {
    let m = &cfg.monotone;
    let ts: Vec<Weight> = if weight_free(name) { vec![Weight::HALF] } else { m.t_values.clone() };
    for (ti, &t) in ts.iter().enumerate() {
        let f = test_fn(name, t)?;
        for n in orders.clone() {
            let seed = monotone_seed(cfg, name, ti);
            let r = match order::monotone_order_test(&f, n, m.trials, m.domain, seed) {
                Ok(r) => r,
                Err(e) => {
                    stats.record(Err(e), |_| unreachable!());
                    continue;
                }
            };
            let wt = (!weight_free(name)).then_some(t.value());
            stats.trials += r.trials;
            stats.failures += r.violations;
            stats.dismissed += r.dismissed;
            if stats.worst.is_none_or(|w| r.min_eigenvalue < w) {
                stats.worst = Some(r.min_eigenvalue);
                stats.worst_case = Some(Witness {
                    sub_seed: r.min_sub_seed,
                    dim: n,
                    t: wt,
                    value: r.min_eigenvalue,
                    detail: Some(f.name()),
                    inputs: json!({ "points": r.min_points }),
                });
            }
            if let (None, Some(v)) = (&stats.first_failure, &r.first_violation) {
                stats.first_failure = Some(Witness {
                    sub_seed: v.sub_seed,
                    dim: n,
                    t: wt,
                    value: v.min_eigenvalue,
                    detail: Some(f.name()),
                    inputs: json!({ "points": v.points, "loewner": v.loewner }),
                });
            }
        }
    }
    Ok(())
}

fn monotone_campaign(cfg: &FuzzConfig, c: &mut Campaign) -> Result<()> {
    let m = &cfg.monotone;
    let limit = -order::MONOTONE_THRESHOLD;
    for name in &m.fns {
        let mut stats = PropertyStats::new(&format!("monotone_{name}"), Sense::AtLeast, limit);
        monotone_property(cfg, name, &mut stats, m.min_order..=m.max_order)?;
        c.add(stats);
    }
    for name in &m.probes {
        let mut stats = PropertyStats::new(&format!("monotone_{name}_probe"), Sense::AtLeast, limit).informational();
        monotone_property(cfg, name, &mut stats, m.min_order..=m.max_order)?;
        c.add(stats);
    }
    if m.control {
        let mut inner = PropertyStats::new("x2", Sense::AtLeast, limit);
        monotone_property(cfg, "x2", &mut inner, 2..=2)?;
        let mut stats = PropertyStats::new("monotone_x2_control", Sense::AtLeast, 1.0);
        let flagged = inner.failures as f64;
        let witness = inner.first_failure.clone();
        stats.record(Ok(flagged), |v| match &witness {
            Some(w) => Witness { value: v, ..w.clone() },
            None => fixed_witness(v, Value::Null),
        });
        c.add(stats);
    }
    Ok(())
}

/// `(a, b, t)` with `a < b` drawn log-uniformly from `[0.1, 10]`.
pub fn hh_case(seed: u64) -> (f64, f64, Weight) {
    let mut s = Stream::new(seed);
    loop {
        let a = s.log_uniform(0.1, 10.0);
        let b = s.log_uniform(0.1, 10.0);
        let t = Weight::new(s.uniform()).unwrap();
        if a != b {
            return (a.min(b), a.max(b), t);
        }
    }
}

pub const HH_FUNCTIONS: [&str; 4] = ["exp", "neg_log", "square", "quartic"];

fn hh_fn(name: &str) -> fn(f64) -> f64 {
    match name {
        "exp" => f64::exp,
        "neg_log" => |x| -x.ln(),
        "square" => |x| x * x,
        "quartic" => |x| x.powi(4),
        _ => |x| 3.0 * x - 2.0,
    }
}

fn hh_values(name: &str, seed: u64) -> Result<f64> {
    let (a, b, t) = hh_case(seed);
    let r = quadrature::hh_triple(hh_fn(name), a, b, t, DEFAULT_ORDER)?;
    Ok(if name == "affine" {
        (r.left - r.right).abs().max((r.mid - r.right).abs()) / (1.0 + r.right.abs())
    } else {
        r.slack()
    })
}

fn hh_campaign(cfg: &FuzzConfig, c: &mut Campaign) {
    let order_i = c.add(PropertyStats::new("hh_ordering", Sense::AtLeast, -1e-10));
    let affine_i = c.add(PropertyStats::new("hh_affine_equality", Sense::AtMost, 1e-12));
    for k in 0..cfg.hh_samples {
        let ss = sub_seed(cfg.seed, stream_tag("hh"), k as u64);
        let (a, b, t) = hh_case(ss);
        for name in HH_FUNCTIONS {
            c.props[order_i].record(hh_values(name, ss), |v| Witness {
                sub_seed: ss,
                dim: 1,
                t: Some(t.value()),
                value: v,
                detail: Some(name.into()),
                inputs: json!({ "a": a, "b": b }),
            });
        }
        c.props[affine_i].record(hh_values("affine", ss), |v| Witness {
            sub_seed: ss,
            dim: 1,
            t: Some(t.value()),
            value: v,
            detail: Some("affine".into()),
            inputs: json!({ "a": a, "b": b }),
        });
    }
}

/// `(a, b, t, α, r)` for the scalar campaign.
pub fn scalar_case(seed: u64) -> (f64, f64, Weight, f64, f64) {
    let mut s = Stream::new(seed);
    let a = s.log_uniform(1e-3, 1e3);
    let b = s.log_uniform(1e-3, 1e3);
    let t = Weight::new(s.uniform()).unwrap();
    let alpha = s.log_uniform(1e-3, 1e3);
    let r = s.uniform_in(-3.0, 3.0);
    (a, b, t, alpha, r)
}

/// `(x, t, a)` for the oracle campaign: `x ∈ [1e-3, 1e3]`, `t ∈ [0.01, 0.99]`.
pub fn oracle_case(seed: u64) -> (f64, Weight, f64) {
    let mut s = Stream::new(seed);
    let x = s.log_uniform(1e-3, 1e3);
    let t = Weight::new(s.uniform_in(0.01, 0.99)).unwrap();
    let a = s.log_uniform(1e-2, 1e2);
    (x, t, a)
}

const SCALAR_KINDS: [ScalarMeanKind; 6] = [
    ScalarMeanKind::Arithmetic,
    ScalarMeanKind::Geometric,
    ScalarMeanKind::Harmonic,
    ScalarMeanKind::Logarithmic,
    ScalarMeanKind::Identric,
    ScalarMeanKind::HeronianWeighted,
];

const STOLARSKY_GRID: std::ops::RangeInclusive<i32> = -12..=12;

fn scalar_values(name: &str, seed: u64) -> Result<f64> {
    let (a, b, t, alpha, r) = scalar_case(seed);
    let scale = a.max(b);
    let v = match name {
        "scalar_chain_113" => {
            let h = scalar::weighted_harmonic(a, b, t);
            let g = scalar::weighted_geometric(a, b, t);
            let l = scalar::weighted_logarithmic(a, b, t);
            let ar = scalar::weighted_arithmetic(a, b, t);
            let chain = [h, g, l, 0.5 * (g + ar), ar];
            chain.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min) / scale
        }
        "scalar_chain_30" => {
            let g = scalar::weighted_geometric(a, b, t);
            let i = scalar::weighted_identric(a, b, t);
            let ar = scalar::weighted_arithmetic(a, b, t);
            (i - g).min(ar - i) / scale
        }
        "scalar_betweenness" => {
            let (lo, hi) = (a.min(b), a.max(b));
            let mut kinds = SCALAR_KINDS.to_vec();
            kinds.push(ScalarMeanKind::Stolarsky(r));
            kinds
                .iter()
                .map(|k| {
                    let m = k.apply(a, b, t);
                    (m - lo).min(hi - m)
                })
                .fold(f64::INFINITY, f64::min)
                / scale
        }
        "scalar_reflection" => {
            let c = t.complement();
            let l = (scalar::weighted_logarithmic(a, b, t) - scalar::weighted_logarithmic(b, a, c)).abs();
            let i = (scalar::weighted_identric(a, b, t) - scalar::weighted_identric(b, a, c)).abs();
            l.max(i) / scale
        }
        "scalar_homogeneity" => {
            SCALAR_KINDS
                .iter()
                .map(|k| (k.apply(alpha * a, alpha * b, t) - alpha * k.apply(a, b, t)).abs())
                .fold(0.0, f64::max)
                / (alpha * scale)
        }
        "endpoint_limits" => {
            let eps = Weight::new(1e-6).unwrap();
            let d = (b - a).abs();
            let l = (scalar::weighted_logarithmic(a, b, eps) - a).abs();
            let i = (scalar::weighted_identric(a, b, eps) - a).abs();
            if d == 0.0 {
                0.0
            } else {
                l.max(i) / d
            }
        }
        "rep_consistency" => {
            let x = b / a;
            let l = (scalar::rep_log(x, t) - scalar::weighted_logarithmic(1.0, x, t)).abs();
            let i = (scalar::rep_identric(x, t) - scalar::weighted_identric(1.0, x, t)).abs();
            l.max(i) / scalar::rep_log(x, t).max(1.0)
        }
        "stolarsky_monotone" => {
            if (b / a).ln().abs() < 1e-3 {
                f64::INFINITY
            } else {
                let s: Vec<f64> = STOLARSKY_GRID.map(|k| scalar::stolarsky(a, b, k as f64 / 4.0)).collect();
                s.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min) / scale
            }
        }
        "identric_monotone_probe" => {
            let d = 1.0 + 1e-3;
            let base = scalar::weighted_identric(a, b, t);
            let da = scalar::weighted_identric(a * d, b, t) - base;
            let db = scalar::weighted_identric(a, b * d, t) - base;
            da.min(db) / scale
        }
        _ => return Err(Error::Config(format!("{name} is not a scalar property"))),
    };
    Ok(v)
}

fn oracle_values(name: &str, seed: u64) -> Result<f64> {
    let (x, t, a) = oracle_case(seed);
    let s = t.value();
    Ok(match name {
        "oracle_equivalence" => {
            let f = scalar::rep_log(x, t);
            let g = scalar::rep_identric(x, t);
            let l = scalar::weighted_logarithmic(a, a * x, t);
            let ef = (f - quadrature::ft_oracle(x, t, DEFAULT_ORDER)?).abs() / f.max(1.0);
            let eg = (g - quadrature::log_gt_oracle(x, t, DEFAULT_ORDER)?.exp()).abs() / g.max(1.0);
            let el = (l - quadrature::lt_oracle(a, a * x, t, DEFAULT_ORDER)?).abs() / l.max(1.0);
            ef.max(eg).max(el)
        }
        "lemma_1111" => {
            let lo = x.powf(s);
            let hi = 0.5 * (lo + 1.0 - s + s * x);
            let f = scalar::rep_log(x, t);
            (f - lo).min(hi - f) / hi.max(1.0)
        }
        "lemma_27" => {
            let lo = x.powf(s);
            let hi = 1.0 - s + s * x;
            let g = scalar::rep_identric(x, t);
            (g - lo).min(hi - g) / hi.max(1.0)
        }
        _ => return Err(Error::Config(format!("{name} is not an oracle property"))),
    })
}

fn scalar_campaign(cfg: &FuzzConfig, c: &mut Campaign, findings: &mut serde_json::Map<String, Value>) {
    let rel = 1e-12;
    let props = [
        PropertyStats::new("scalar_chain_113", Sense::AtLeast, -rel),
        PropertyStats::new("scalar_chain_30", Sense::AtLeast, -rel),
        PropertyStats::new("scalar_betweenness", Sense::AtLeast, -rel),
        PropertyStats::new("scalar_reflection", Sense::AtMost, rel),
        PropertyStats::new("scalar_homogeneity", Sense::AtMost, rel),
        PropertyStats::new("endpoint_limits", Sense::AtMost, 1e-4),
        PropertyStats::new("rep_consistency", Sense::AtMost, rel),
        PropertyStats::new("stolarsky_monotone", Sense::Above, 0.0),
        PropertyStats::new("identric_monotone_probe", Sense::AtLeast, 0.0).informational(),
    ];
    let idx: Vec<usize> = props.into_iter().map(|p| c.add(p)).collect();
    for k in 0..cfg.scalar_samples {
        let ss = sub_seed(cfg.seed, stream_tag("scalar"), k as u64);
        let (a, b, t, alpha, r) = scalar_case(ss);
        for &i in &idx {
            let name = c.props[i].name.clone();
            c.props[i].record(scalar_values(&name, ss), |v| Witness {
                sub_seed: ss,
                dim: 1,
                t: Some(t.value()),
                value: v,
                detail: None,
                inputs: json!({ "a": a, "b": b, "alpha": alpha, "r": r }),
            });
        }
    }

    let props = [
        PropertyStats::new("oracle_equivalence", Sense::AtMost, 1e-8),
        PropertyStats::new("lemma_1111", Sense::AtLeast, -1e-10),
        PropertyStats::new("lemma_27", Sense::AtLeast, -1e-10),
    ];
    let idx: Vec<usize> = props.into_iter().map(|p| c.add(p)).collect();
    for k in 0..cfg.oracle_samples {
        let ss = sub_seed(cfg.seed, stream_tag("oracle"), k as u64);
        let (x, t, a) = oracle_case(ss);
        for &i in &idx {
            let name = c.props[i].name.clone();
            c.props[i].record(oracle_values(&name, ss), |v| Witness {
                sub_seed: ss,
                dim: 1,
                t: Some(t.value()),
                value: v,
                detail: None,
                inputs: json!({ "x": x, "a": a }),
            });
        }
    }

    let probe = heronian_probe();
    let i = c.add(PropertyStats::new("heronian_counterexample", Sense::AtLeast, 4.9));
    c.props[i].record(Ok(probe.gap), |v| fixed_witness(v, json!({ "a": probe.a, "b": probe.b, "t": probe.t })));
    findings.insert("heronian_probe".into(), serde_json::to_value(probe).unwrap_or(Value::Null));
}

/// Random quadruple `A ≤ C`, `B ≤ D` and weight for the axiom probes.
pub fn axiom_case(dim: usize, seed: u64, decades: f64) -> Result<(SpdMatrix, SpdMatrix, SpdMatrix, SpdMatrix, Weight)> {
    let (a, c) = random_ordered_pair(dim, sub_seed(seed, 1, 0), decades)?;
    let (b, d) = random_ordered_pair(dim, sub_seed(seed, 2, 0), decades)?;
    let t = Weight::new(Stream::new(sub_seed(seed, 3, 0)).uniform()).unwrap();
    Ok((a, b, c, d, t))
}

fn congruence(dim: usize, seed: u64) -> Result<SquareMatrix> {
    let mut s = Stream::new(seed);
    let mut m = SquareMatrix::identity(dim).scaled(2.0);
    for i in 0..dim {
        for j in 0..dim {
            m.set(i, j, m.get(i, j) + 0.5 * s.gaussian());
        }
    }
    Ok(m)
}

const AXIOM_KINDS: [OperatorMeanKind; 4] = [
    OperatorMeanKind::Arithmetic,
    OperatorMeanKind::Harmonic,
    OperatorMeanKind::Geometric,
    OperatorMeanKind::Logarithmic,
];

fn axiom_values(name: &str, dim: usize, seed: u64, decades: f64, tol: f64) -> Result<(f64, Option<String>)> {
    let (a, b, c, d, t) = axiom_case(dim, seed, decades)?;
    let kinds: &[OperatorMeanKind] =
        if name.ends_with("identric") { &[OperatorMeanKind::Identric] } else { &AXIOM_KINDS };
    let mut worst: Option<(f64, String)> = None;
    let lower_is_worse = name.starts_with("axiom_monotonicity");
    for &k in kinds {
        let v = match name {
            "axiom_monotonicity" | "axiom_monotonicity_identric" => {
                let lo = mean(&a, &b, k, t)?;
                let hi = mean(&c, &d, k, t)?;
                rel_margin(&order::loewner_leq(&lo, &hi, tol)?)
            }
            "axiom_transformer" | "axiom_transformer_identric" => {
                let m = congruence(dim, sub_seed(seed, 4, 0))?;
                let pair_scale = PreparedPair::new(&a, &b)?.scale();
                let norm = m.frobenius_norm();
                congruence_equivariance_residual(&a, &b, &m, k, t)? / (norm * norm * pair_scale).max(1.0)
            }
            "weight_endpoints" => {
                let pair = PreparedPair::new(&a, &b)?;
                let e0 = pair.mean(k, Weight::ZERO)?.sub(&a)?.frobenius_norm();
                let e1 = pair.mean(k, Weight::ONE)?.sub(&b)?.frobenius_norm();
                e0.max(e1) / pair.scale().max(1.0)
            }
            "normalization" => {
                let id = SpdMatrix::identity(dim);
                mean(&id, &id, k, t)?.sub(&id)?.max_abs_entry()
            }
            "scalar_reduction" => {
                let da = a.diagonal();
                let db = b.diagonal();
                let m = mean(&SpdMatrix::from_diag(&da)?, &SpdMatrix::from_diag(&db)?, k, t)?;
                let sk = match k {
                    OperatorMeanKind::Arithmetic => ScalarMeanKind::Arithmetic,
                    OperatorMeanKind::Harmonic => ScalarMeanKind::Harmonic,
                    OperatorMeanKind::Geometric => ScalarMeanKind::Geometric,
                    _ => ScalarMeanKind::Logarithmic,
                };
                (0..dim)
                    .map(|i| {
                        let s = sk.apply(da[i], db[i], t);
                        let off = (0..dim).filter(|&j| j != i).map(|j| m.get(i, j).abs()).fold(0.0, f64::max);
                        ((m.get(i, i) - s).abs() / s.max(1.0)).max(off)
                    })
                    .fold(0.0, f64::max)
            }
            _ => return Err(Error::Config(format!("{name} is not an axiom property"))),
        };
        let is_worse = match &worst {
            None => true,
            Some((w, _)) => (lower_is_worse && v < *w) || (!lower_is_worse && v > *w),
        };
        if is_worse {
            worst = Some((v, k.name()));
        }
    }
    let (v, k) = worst.unwrap();
    Ok((v, Some(k)))
}

fn axiom_campaign(cfg: &FuzzConfig, c: &mut Campaign) {
    let tol = cfg.tol;
    let props = [
        PropertyStats::new("axiom_monotonicity", Sense::AtLeast, -tol),
        PropertyStats::new("axiom_monotonicity_identric", Sense::AtLeast, -tol).informational(),
        PropertyStats::new("axiom_transformer", Sense::AtMost, tol),
        PropertyStats::new("axiom_transformer_identric", Sense::AtMost, tol),
        PropertyStats::new("weight_endpoints", Sense::AtMost, tol),
        PropertyStats::new("normalization", Sense::AtMost, 1e-13),
        PropertyStats::new("scalar_reduction", Sense::AtMost, 1e-11),
    ];
    let idx: Vec<usize> = props.into_iter().map(|p| c.add(p)).collect();
    for &dim in &cfg.dims {
        for k in 0..cfg.axiom_trials {
            let ss = sub_seed(cfg.seed, stream_tag("axioms") ^ dim as u64, k as u64);
            for &i in &idx {
                let name = c.props[i].name.clone();
                let r = axiom_values(&name, dim, ss, cfg.spectrum_decades, tol);
                let detail = r.as_ref().ok().and_then(|x| x.1.clone());
                c.props[i].record(r.map(|x| x.0), |v| {
                    let inputs = axiom_case(dim, ss, cfg.spectrum_decades)
                        .map(|(a, b, c, d, _)| json!({ "a": a.to_json(), "b": b.to_json(), "c": c.to_json(), "d": d.to_json() }))
                        .unwrap_or(Value::Null);
                    Witness {
                        sub_seed: ss,
                        dim,
                        t: axiom_case(dim, ss, cfg.spectrum_decades).ok().map(|x| x.4.value()),
                        value: v,
                        detail: detail.clone(),
                        inputs,
                    }
                });
            }
        }
    }
}

/// Recomputes the value of a recorded witness from its sub-seed.
pub fn replay(cfg: &FuzzConfig, property: &str, w: &Witness) -> Result<f64> {
    let t = || w.t.map(Weight::new).transpose().map(|t| t.unwrap_or(cfg.block_t));
    match property {
        "chain_113" | "chain_30" | "corollary_li_geo" | "invariance_operator" | "gah_identity" => {
            let (a, b) = pair_case(w.dim, w.sub_seed, cfg.spectrum_decades)?;
            Ok(pair_values(cfg, &PreparedPair::new(&a, &b)?, property, t()?)?.0)
        }
        "block_psd" | "block_schur" | "block_consistency" => {
            let (a, b) = pair_case(w.dim, w.sub_seed, cfg.spectrum_decades)?;
            let r = block_values(cfg, &PreparedPair::new(&a, &b)?)?;
            Ok(match property {
                "block_psd" => rel_margin(&r.block),
                "block_schur" => rel_margin(&r.schur),
                _ => (r.block.holds != r.schur.holds) as u8 as f64,
            })
        }
        "hh_ordering" | "hh_affine_equality" => {
            let f = w.detail.as_deref().unwrap_or("affine");
            hh_values(f, w.sub_seed)
        }
        "oracle_equivalence" | "lemma_1111" | "lemma_27" => oracle_values(property, w.sub_seed),
        p if p.starts_with("axiom_") || ["weight_endpoints", "normalization", "scalar_reduction"].contains(&p) => {
            Ok(axiom_values(p, w.dim, w.sub_seed, cfg.spectrum_decades, cfg.tol)?.0)
        }
        p if p.starts_with("monotone_") => {
            let name = w.detail.as_deref().ok_or_else(|| Error::Config("monotone witness without function".into()))?;
            let f = match w.t {
                Some(t) => {
                    let family = p.trim_start_matches("monotone_").trim_end_matches("_probe");
                    test_fn(family, Weight::new(t)?)?
                }
                None if name == "x2" => TestFn::Square,
                None => return Err(Error::Config(format!("cannot resolve {name}"))),
            };
            let (points, _) = sample_points(&mut Stream::new(w.sub_seed), w.dim, cfg.monotone.domain);
            f.loewner(&points)?.min_eigenvalue()
        }
        p => scalar_values(p, w.sub_seed),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeronianFinding {
    pub a: f64,
    pub b: f64,
    pub t: f64,
    pub log_mean: f64,
    pub heronian: f64,
    pub gap: f64,
    /// `lt_oracle(a, b, t) − heronian`
    pub oracle_gap: f64,
}

fn heronian_eval(a: f64, b: f64, t: Weight) -> Result<HeronianFinding> {
    let l = scalar::weighted_logarithmic(a, b, t);
    let h = scalar::heronian_weighted(a, b, t);
    let oracle = if t.value() > 0.0 && t.value() < 1.0 { quadrature::lt_oracle(a, b, t, DEFAULT_ORDER)? } else { l };
    Ok(HeronianFinding { a, b, t: t.value(), log_mean: l, heronian: h, gap: l - h, oracle_gap: oracle - h })
}

/// The `(706, 31.8, 0.2169)` triple.
pub fn heronian_probe() -> HeronianFinding {
    let (a, b, t) = PAPER_PROBE;
    heronian_eval(a, b, Weight::new(t).unwrap()).expect("interior weight")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeronianReport {
    pub seed: u64,
    pub iters: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixed_t: Option<f64>,
    pub probe: HeronianFinding,
    pub found: usize,
    pub findings: Vec<HeronianFinding>,
}

/// Random search for `L_t(a, b) > heronian(a, b, t) + 1e-9·max(a, b)`,
/// confirmed with the quadrature oracle.
pub fn heronian_search(seed: u64, iters: usize, fixed_t: Option<Weight>) -> Result<HeronianReport> {
    if iters == 0 {
        return Err(Error::Config("iters must be at least 1".into()));
    }
    let mut findings = Vec::new();
    for k in 0..iters {
        let mut s = Stream::new(sub_seed(seed, stream_tag("heronian"), k as u64));
        let a = s.log_uniform(1e-2, 1e4);
        let b = s.log_uniform(1e-2, 1e4);
        let u = s.uniform_in(0.001, 0.999);
        let t = fixed_t.unwrap_or(Weight::new(u)?);
        let f = heronian_eval(a, b, t)?;
        let limit = HERONIAN_THRESHOLD * a.max(b);
        if f.gap > limit && f.oracle_gap > limit {
            findings.push(f);
        }
    }
    Ok(HeronianReport {
        seed,
        iters,
        fixed_t: fixed_t.map(Weight::value),
        probe: heronian_probe(),
        found: findings.len(),
        findings,
    })
}

/// The distinct SPD matrices a witness refers to, for display.
pub fn witness_matrices(w: &Witness) -> Vec<(String, SymMatrix)> {
    let mut out = Vec::new();
    if let Value::Object(m) = &w.inputs {
        for (k, v) in m {
            if let Ok(j) = serde_json::from_value::<crate::matfun::MatrixJson>(v.clone()) {
                if let Ok(s) = j.into_sym() {
                    out.push((k.clone(), s));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(suites: &[Suite]) -> FuzzConfig {
        FuzzConfig {
            dims: vec![2, 3],
            trials: 4,
            t_grid: vec![Weight::ZERO, Weight::new(0.3).unwrap(), Weight::ONE],
            suites: suites.to_vec(),
            monotone: MonotoneConfig {
                trials: 20,
                max_order: 3,
                t_values: vec![Weight::new(0.3).unwrap()],
                ..MonotoneConfig::default()
            },
            scalar_samples: 50,
            oracle_samples: 20,
            hh_samples: 10,
            axiom_trials: 3,
            ..FuzzConfig::default()
        }
    }

    #[test]
    fn random_spd_properties() {
        let a = random_spd(4, 9, 2.0).unwrap();
        let b = random_spd(4, 9, 2.0).unwrap();
        assert_eq!(a.data(), b.data());
        let e = a.eig().unwrap();
        assert!(e.min() >= 1e-2 * (1.0 - 1e-12) && e.max() <= 1e2 * (1.0 + 1e-12));
        let one = random_spd(1, 3, 2.0).unwrap();
        assert!(one.get(0, 0) > 0.0);
        assert!(random_spd(0, 1, 2.0).is_err());
    }

    #[test]
    fn ordered_pair_is_ordered() {
        let mut zero_branch = false;
        for k in 0..40 {
            let (a, c) = random_ordered_pair(3, k, 2.0).unwrap();
            let v = order::loewner_leq(&a, &c, 1e-9).unwrap();
            assert!(v.holds, "{v:?}");
            zero_branch |= a.data() == c.data();
        }
        assert!(zero_branch);
    }

    #[test]
    fn config_validation() {
        assert!(FuzzConfig::default().validate().is_ok());
        let bad = [
            FuzzConfig { trials: 0, ..FuzzConfig::default() },
            FuzzConfig { dims: vec![], ..FuzzConfig::default() },
            FuzzConfig { dims: vec![9], ..FuzzConfig::default() },
            FuzzConfig { t_grid: vec![], ..FuzzConfig::default() },
        ];
        for c in bad {
            assert!(c.validate().is_err());
        }
        let cfg: FuzzConfig = serde_json::from_str(r#"{"seed": 7, "trials": 3}"#).unwrap();
        assert_eq!((cfg.seed, cfg.trials, cfg.dims.len()), (7, 3, 7));
        assert!(serde_json::from_str::<FuzzConfig>(r#"{"bogus": 1}"#).is_err());
        assert_eq!(Suite::parse("identric-chain").unwrap(), Suite::IdentricChain);
        assert!(Suite::parse("nope").is_err());
    }

    #[test]
    fn small_suite_passes_and_is_deterministic() {
        let cfg = small(&Suite::ALL);
        let r = run_suite(&cfg).unwrap();
        for p in &r.properties {
            assert!(p.passes(), "{p:#?}");
            assert!(p.trials > 0, "{}", p.name);
        }
        assert!(r.pass);
        let again = run_suite(&cfg).unwrap();
        assert_eq!(serde_json::to_string(&r).unwrap(), serde_json::to_string(&again).unwrap());
    }

    #[test]
    fn worst_cases_replay() {
        let cfg = small(&Suite::ALL);
        let r = run_suite(&cfg).unwrap();
        for p in &r.properties {
            let w = p.worst_case.as_ref().unwrap();
            if w.sub_seed == 0 || p.name == "monotone_x2_control" {
                continue;
            }
            let v = replay(&cfg, &p.name, w).unwrap();
            assert!((v - w.value).abs() <= 1e-12, "{}: {} vs {}", p.name, v, w.value);
        }
    }

    #[test]
    fn dim_one_is_degenerate_pass() {
        let cfg = FuzzConfig {
            dims: vec![1],
            trials: 1,
            suites: vec![Suite::Chain, Suite::IdentricChain, Suite::Block, Suite::Invariance],
            ..small(&[])
        };
        assert!(run_suite(&cfg).unwrap().pass);
    }

    #[test]
    fn violated_triple_fails_with_witness() {
        let mut cfg = small(&[Suite::Invariance]);
        cfg.invariance.r = Weight::new(1.0 / 3.0).unwrap();
        let r = run_suite(&cfg).unwrap();
        assert!(!r.pass);
        assert!(!r.property("invariance_scalar").unwrap().passes());
        assert!(!r.property("invariance_operator").unwrap().passes());
        let w = r.property("invariance_witness").unwrap();
        assert!(w.passes() && w.worst.unwrap() >= 1e-4);
        assert_eq!(r.findings["geometric_condition"]["holds"], false);
    }

    #[test]
    fn x2_as_asserted_function_fails() {
        let mut cfg = small(&[Suite::Monotone]);
        cfg.monotone.fns = vec!["x2".into()];
        cfg.monotone.probes.clear();
        cfg.monotone.control = false;
        cfg.monotone.max_order = 2;
        let r = run_suite(&cfg).unwrap();
        assert!(!r.pass);
        let p = r.property("monotone_x2").unwrap();
        let w = p.first_failure.as_ref().unwrap();
        assert_eq!(w.inputs["loewner"].as_array().unwrap().len(), 4);
        assert_eq!(replay(&cfg, "monotone_x2", w).unwrap(), w.value);
    }

    #[test]
    fn heronian_search_examples() {
        let r = heronian_search(1, 300, None).unwrap();
        assert!((r.probe.gap - 5.0004).abs() < 1e-3);
        assert!(r.probe.oracle_gap > 4.9);
        for f in &r.findings {
            assert!(f.gap > 0.0 && f.oracle_gap > 0.0);
        }
        assert_eq!(r, heronian_search(1, 300, None).unwrap());
        let half = heronian_search(1, 300, Some(Weight::HALF)).unwrap();
        assert_eq!(half.found, 0);
        assert!(heronian_search(1, 0, None).is_err());
    }
}
