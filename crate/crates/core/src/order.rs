//! Loewner-order comparisons, the operator inequality chains, block-matrix
//! positivity and order-n operator-monotonicity certificates.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matfun::{eig_sym, power_spd, sandwich, SpdMatrix, SymMatrix};
use crate::operator::{OperatorMeanKind, PreparedPair, RepFn};
use crate::quadrature::{self, DEFAULT_ORDER};
use crate::rng::{sub_seed, Stream};
use crate::scalar::{self, Weight};

pub const DEFAULT_TOL: f64 = 1e-9;

/// Loewner-matrix eigenvalues below `-MONOTONE_THRESHOLD` count as violations.
pub const MONOTONE_THRESHOLD: f64 = 1e-8;

/// Adjacent sample points closer than this (relative) are re-drawn.
pub const MIN_RELATIVE_GAP: f64 = 1e-8;

/// Relative step of the central-difference derivative.
pub const DERIVATIVE_STEP: f64 = 1e-6;

/// Domain of the scalar block-positivity criterion.
pub const CRITERION_DOMAIN: (f64, f64) = (1e-4, 1e4);
pub const CRITERION_POINTS: usize = 401;

/// Outcome of `A ≤ B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderVerdict {
    pub holds: bool,
    /// `λ_min(B − A)`
    pub margin: f64,
    /// Largest spectral norm among the operands.
    pub scale: f64,
    pub tol: f64,
}

impl OrderVerdict {
    pub fn new(margin: f64, scale: f64, tol: f64) -> Self {
        OrderVerdict { holds: margin >= -tol * scale.max(1.0), margin, scale, tol }
    }

    /// `margin / max(1, scale)`
    pub fn relative_margin(&self) -> f64 {
        self.margin / self.scale.max(1.0)
    }
}

fn spectral_norm(m: &SymMatrix) -> Result<f64> {
    m.spectral_norm()
}

fn compare(lhs: &SymMatrix, rhs: &SymMatrix, scale: f64, tol: f64) -> Result<OrderVerdict> {
    let margin = rhs.sub(lhs)?.min_eigenvalue()?;
    Ok(OrderVerdict::new(margin, scale, tol))
}

/// Verdict for `A ≤ B`, i.e. `B − A` positive semidefinite.
pub fn loewner_leq(a: &SymMatrix, b: &SymMatrix, tol: f64) -> Result<OrderVerdict> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: b.dim() });
    }
    let scale = spectral_norm(a)?.max(spectral_norm(b)?);
    compare(a, b, scale, tol)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainLink {
    pub name: String,
    pub verdict: OrderVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainReport {
    pub links: Vec<ChainLink>,
    pub overall: bool,
}

impl ChainReport {
    fn from_operands(names: &[&str], operands: &[SymMatrix], tol: f64) -> Result<Self> {
        let norms = operands.iter().map(spectral_norm).collect::<Result<Vec<_>>>()?;
        let mut links = Vec::with_capacity(operands.len() - 1);
        for i in 0..operands.len() - 1 {
            let verdict = compare(&operands[i], &operands[i + 1], norms[i].max(norms[i + 1]), tol)?;
            links.push(ChainLink { name: format!("{} <= {}", names[i], names[i + 1]), verdict });
        }
        let overall = links.iter().all(|l| l.verdict.holds);
        Ok(ChainReport { links, overall })
    }

    /// Smallest `margin / max(1, scale)` over the links.
    pub fn worst_relative_margin(&self) -> f64 {
        self.links.iter().map(|l| l.verdict.relative_margin()).fold(f64::INFINITY, f64::min)
    }
}

/// `A !_t B ≤ A #_t B ≤ A ℓ_t B ≤ ½(A #_t B + A ∇_t B) ≤ A ∇_t B`
pub fn chain_113(a: &SpdMatrix, b: &SpdMatrix, t: Weight, tol: f64) -> Result<ChainReport> {
    chain_113_prepared(&PreparedPair::new(a, b)?, t, tol)
}

pub fn chain_113_prepared(pair: &PreparedPair, t: Weight, tol: f64) -> Result<ChainReport> {
    let h = pair.mean(OperatorMeanKind::Harmonic, t)?.into_sym();
    let g = pair.mean(OperatorMeanKind::Geometric, t)?.into_sym();
    let l = pair.mean(OperatorMeanKind::Logarithmic, t)?.into_sym();
    let a = pair.mean(OperatorMeanKind::Arithmetic, t)?.into_sym();
    let half = g.add(&a)?.scaled(0.5);
    ChainReport::from_operands(
        &["harmonic", "geometric", "logarithmic", "half_sum", "arithmetic"],
        &[h, g, l, half, a],
        tol,
    )
}

/// `A !_t B ≤ A #_t B ≤ A 𝓘_t B ≤ A ∇_t B`
pub fn chain_30(a: &SpdMatrix, b: &SpdMatrix, t: Weight, tol: f64) -> Result<ChainReport> {
    chain_30_prepared(&PreparedPair::new(a, b)?, t, tol)
}

pub fn chain_30_prepared(pair: &PreparedPair, t: Weight, tol: f64) -> Result<ChainReport> {
    let h = pair.mean(OperatorMeanKind::Harmonic, t)?.into_sym();
    let g = pair.mean(OperatorMeanKind::Geometric, t)?.into_sym();
    let i = pair.mean(OperatorMeanKind::Identric, t)?.into_sym();
    let a = pair.mean(OperatorMeanKind::Arithmetic, t)?.into_sym();
    ChainReport::from_operands(&["harmonic", "geometric", "identric", "arithmetic"], &[h, g, i, a], tol)
}

/// How the diagonal of a Loewner matrix is obtained.
pub enum Derivative<'a> {
    Analytic(&'a dyn Fn(f64) -> f64),
    /// Central differences with step `1e-6 · x`.
    Numeric,
}

pub fn central_difference(f: &dyn Fn(f64) -> f64, x: f64) -> f64 {
    let h = DERIVATIVE_STEP * x;
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Divided-difference matrix `[f(x_i) − f(x_j)] / (x_i − x_j)` with `f'(x_i)`
/// on the diagonal. Points must be positive and strictly ascending.
pub fn loewner_matrix(f: &dyn Fn(f64) -> f64, df: Derivative<'_>, points: &[f64]) -> Result<SymMatrix> {
    let n = points.len();
    if n < 2 {
        return Err(Error::Config("a Loewner matrix needs at least two points".into()));
    }
    for (i, &x) in points.iter().enumerate() {
        if !(x.is_finite() && x > 0.0) || (i > 0 && x <= points[i - 1]) {
            return Err(Error::BadPoints(x));
        }
    }
    let values: Vec<f64> = points.iter().map(|&x| f(x)).collect();
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        data[i * n + i] = match &df {
            Derivative::Analytic(d) => d(points[i]),
            Derivative::Numeric => central_difference(f, points[i]),
        };
        for j in (i + 1)..n {
            let v = (values[i] - values[j]) / (points[i] - points[j]);
            data[i * n + j] = v;
            data[j * n + i] = v;
        }
    }
    SymMatrix::new(n, data)
}

/// Functions that can be put through [`monotone_order_test`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "param", rename_all = "snake_case")]
pub enum TestFn {
    Rep(RepFn),
    /// `log g_t(x)`
    LogIdentric(Weight),
    /// `x²`, the standard non-monotone control.
    Square,
}

impl TestFn {
    pub fn name(&self) -> String {
        match self {
            TestFn::Rep(f) => f.name(),
            TestFn::LogIdentric(t) => format!("log_identric(t={})", t.value()),
            TestFn::Square => "x2".into(),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            TestFn::Rep(f) => f.eval(x),
            TestFn::LogIdentric(t) => scalar::ln_rep_identric(x, *t),
            TestFn::Square => x * x,
        }
    }

    pub fn derivative(&self, x: f64) -> Option<f64> {
        match self {
            TestFn::Rep(f) => f.derivative(x),
            TestFn::LogIdentric(_) => None,
            TestFn::Square => Some(2.0 * x),
        }
    }

    /// Quadrature-based evaluation, when an integral representation exists.
    pub fn oracle(&self, x: f64) -> Option<Result<f64>> {
        match self {
            TestFn::Rep(f) => f.oracle(x),
            TestFn::LogIdentric(t) if t.value() > 0.0 && t.value() < 1.0 => {
                Some(quadrature::log_gt_oracle(x, *t, DEFAULT_ORDER))
            }
            TestFn::LogIdentric(t) => Some(Ok(scalar::ln_rep_identric(x, *t))),
            TestFn::Square => None,
        }
    }

    pub fn loewner(&self, points: &[f64]) -> Result<SymMatrix> {
        let f = |x: f64| self.eval(x);
        match self.derivative(points[0]) {
            Some(_) => {
                let d = |x: f64| self.derivative(x).unwrap();
                loewner_matrix(&f, Derivative::Analytic(&d), points)
            }
            None => loewner_matrix(&f, Derivative::Numeric, points),
        }
    }

    /// Loewner matrix rebuilt from oracle evaluations; `None` without an oracle.
    pub fn loewner_oracle(&self, points: &[f64]) -> Option<Result<SymMatrix>> {
        self.oracle(points[0]).is_some().then_some(())?;
        let failed = std::cell::Cell::new(None);
        let f = |x: f64| match self.oracle(x).unwrap() {
            Ok(v) => v,
            Err(e) => {
                failed.set(Some(e));
                f64::NAN
            }
        };
        let m = loewner_matrix(&f, Derivative::Numeric, points);
        Some(match failed.take() {
            Some(e) => Err(e),
            None => m,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotoneViolation {
    pub trial: usize,
    pub sub_seed: u64,
    pub points: Vec<f64>,
    pub min_eigenvalue: f64,
    /// Row-major Loewner matrix at `points`.
    pub loewner: Vec<f64>,
}

impl MonotoneViolation {
    /// Recomputes the minimum eigenvalue from the recorded points.
    pub fn replay(&self, f: &TestFn) -> Result<f64> {
        f.loewner(&self.points)?.min_eigenvalue()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotoneReport {
    pub function: String,
    pub order: usize,
    pub trials: usize,
    pub domain: (f64, f64),
    pub seed: u64,
    pub min_eigenvalue: f64,
    pub min_points: Vec<f64>,
    pub min_sub_seed: u64,
    /// Violations that survived the oracle re-check (or had no oracle).
    pub violations: usize,
    /// Candidates the oracle re-check attributed to roundoff.
    pub dismissed: usize,
    pub resampled: usize,
    pub first_violation: Option<MonotoneViolation>,
}

impl MonotoneReport {
    pub fn passes(&self) -> bool {
        self.violations == 0
    }
}

/// Sorted log-uniform points with no two closer than [`MIN_RELATIVE_GAP`].
/// Returns the points and the number of re-draws.
pub fn sample_points(stream: &mut Stream, n: usize, domain: (f64, f64)) -> (Vec<f64>, usize) {
    let mut redraws = 0;
    loop {
        let mut pts: Vec<f64> = (0..n).map(|_| stream.log_uniform(domain.0, domain.1)).collect();
        pts.sort_by(f64::total_cmp);
        if pts.windows(2).all(|w| w[1] - w[0] >= MIN_RELATIVE_GAP * w[0]) {
            return (pts, redraws);
        }
        redraws += 1;
    }
}

/// Samples `trials` point sets of size `n` and checks the Loewner matrices
/// for positive semidefiniteness.
pub fn monotone_order_test(
    f: &TestFn,
    n: usize,
    trials: usize,
    domain: (f64, f64),
    seed: u64,
) -> Result<MonotoneReport> {
    if !(2..=8).contains(&n) {
        return Err(Error::Config(format!("order {n} outside [2, 8]")));
    }
    if !(domain.0 > 0.0 && domain.1 > domain.0 && domain.1.is_finite()) {
        return Err(Error::Config(format!("bad domain {domain:?}")));
    }
    if trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    let mut report = MonotoneReport {
        function: f.name(),
        order: n,
        trials,
        domain,
        seed,
        min_eigenvalue: f64::INFINITY,
        min_points: Vec::new(),
        min_sub_seed: 0,
        violations: 0,
        dismissed: 0,
        resampled: 0,
        first_violation: None,
    };
    for trial in 0..trials {
        let ss = sub_seed(seed, n as u64, trial as u64);
        let mut stream = Stream::new(ss);
        let (points, redraws) = sample_points(&mut stream, n, domain);
        report.resampled += redraws;
        let lm = f.loewner(&points)?;
        let min = lm.min_eigenvalue()?;
        if min < report.min_eigenvalue {
            report.min_eigenvalue = min;
            report.min_points = points.clone();
            report.min_sub_seed = ss;
        }
        if min >= -MONOTONE_THRESHOLD {
            continue;
        }
        let confirmed = match f.loewner_oracle(&points) {
            Some(m) => m?.min_eigenvalue()? < -MONOTONE_THRESHOLD,
            None => true,
        };
        if !confirmed {
            report.dismissed += 1;
            continue;
        }
        report.violations += 1;
        if report.first_violation.is_none() {
            report.first_violation = Some(MonotoneViolation {
                trial,
                sub_seed: ss,
                points,
                min_eigenvalue: min,
                loewner: lm.data().to_vec(),
            });
        }
    }
    Ok(report)
}

/// Positivity of `[[AσB, AτB], [AτB, AρB]]` with its two equivalent criteria.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockReport {
    pub block: OrderVerdict,
    /// `AσB − (AτB)(AρB)^{-1}(AτB) ≥ 0`
    pub schur: OrderVerdict,
    /// `min (f h − g²)/max(1, f h)` over the spectrum of `A^{-1/2} B A^{-1/2}`.
    pub spectral_criterion: f64,
    /// Same quantity over the fixed log-uniform grid on [`CRITERION_DOMAIN`].
    pub scalar_criterion: f64,
    pub scalar_argmin: f64,
    pub scalar_holds: bool,
    /// Block, Schur and spectral verdicts agree, and a scalar criterion that
    /// holds everywhere is matched by a PSD block.
    pub consistent: bool,
}

/// Log-uniform grid on [`CRITERION_DOMAIN`] plus `x = 1`.
pub fn criterion_grid() -> Vec<f64> {
    let (lo, hi) = (CRITERION_DOMAIN.0.ln(), CRITERION_DOMAIN.1.ln());
    let mut grid: Vec<f64> =
        (0..CRITERION_POINTS).map(|k| (lo + (hi - lo) * k as f64 / (CRITERION_POINTS - 1) as f64).exp()).collect();
    grid.push(1.0);
    grid.sort_by(f64::total_cmp);
    grid
}

/// `(f h − g²)/max(1, f h)` at `x`.
pub fn block_criterion(f: &RepFn, g: &RepFn, h: &RepFn, x: f64) -> f64 {
    let fh = f.eval(x) * h.eval(x);
    let gx = g.eval(x);
    (fh - gx * gx) / fh.max(1.0)
}

/// Minimum of [`block_criterion`] over `xs` and where it is attained.
pub fn scalar_block_criterion(f: &RepFn, g: &RepFn, h: &RepFn, xs: &[f64]) -> (f64, f64) {
    xs.iter().map(|&x| (block_criterion(f, g, h, x), x)).fold((f64::INFINITY, f64::NAN), |acc, v| {
        if v.0 < acc.0 {
            v
        } else {
            acc
        }
    })
}

pub fn block_psd_test(
    a: &SpdMatrix,
    b: &SpdMatrix,
    sigma: OperatorMeanKind,
    tau: OperatorMeanKind,
    rho: OperatorMeanKind,
    t: Weight,
    tol: f64,
) -> Result<BlockReport> {
    block_psd_test_prepared(&PreparedPair::new(a, b)?, sigma, tau, rho, t, tol)
}

pub fn block_psd_test_prepared(
    pair: &PreparedPair,
    sigma: OperatorMeanKind,
    tau: OperatorMeanKind,
    rho: OperatorMeanKind,
    t: Weight,
    tol: f64,
) -> Result<BlockReport> {
    let x = pair.mean(sigma, t)?;
    let y = pair.mean(tau, t)?;
    let z = pair.mean(rho, t)?;
    let n = x.dim();
    let scale = spectral_norm(&x)?.max(spectral_norm(&y)?).max(spectral_norm(&z)?);

    let mut data = vec![0.0; 4 * n * n];
    let m = 2 * n;
    for i in 0..n {
        for j in 0..n {
            data[i * m + j] = x.get(i, j);
            data[i * m + n + j] = y.get(i, j);
            data[(n + i) * m + j] = y.get(i, j);
            data[(n + i) * m + n + j] = z.get(i, j);
        }
    }
    let block = SymMatrix::new(m, data)?;
    let block = OrderVerdict::new(eig_sym(&block)?.min(), scale, tol);

    let z_inv = power_spd(&z, -1.0)?;
    let complement = x.sub(&sandwich(&y, &z_inv)?)?;
    let schur = OrderVerdict::new(complement.min_eigenvalue()?, scale, tol);

    let (f, g, h) = (sigma.rep_fn(t), tau.rep_fn(t), rho.rep_fn(t));
    let spectral_criterion =
        pair.spectrum().iter().map(|&l| block_criterion(&f, &g, &h, l)).fold(f64::INFINITY, f64::min);
    let (scalar_criterion, scalar_argmin) = scalar_block_criterion(&f, &g, &h, &criterion_grid());
    let scalar_holds = scalar_criterion >= -tol;
    let spectral_holds = spectral_criterion >= -tol;
    let consistent = block.holds == schur.holds && block.holds == spectral_holds && (!scalar_holds || block.holds);
    Ok(BlockReport { block, schur, spectral_criterion, scalar_criterion, scalar_argmin, scalar_holds, consistent })
}

/// `A # B ≤ (A ℓ B) # (A 𝓘 B)`
pub fn corollary_li_geo(a: &SpdMatrix, b: &SpdMatrix, tol: f64) -> Result<OrderVerdict> {
    corollary_li_geo_prepared(&PreparedPair::new(a, b)?, tol)
}

pub fn corollary_li_geo_prepared(pair: &PreparedPair, tol: f64) -> Result<OrderVerdict> {
    let half = Weight::HALF;
    let g = pair.mean(OperatorMeanKind::Geometric, half)?;
    let l = pair.mean(OperatorMeanKind::Logarithmic, half)?;
    let i = pair.mean(OperatorMeanKind::Identric, half)?;
    let rhs = PreparedPair::new(&l, &i)?.mean(OperatorMeanKind::Geometric, half)?;
    loewner_leq(&g, &rhs, tol)
}
