//! Invariance of means: `K(M(a,b), N(a,b)) = K(a,b)` and its operator form
//! `A σ B = (A τ B) σ (A ρ B)`.
//!
//! With representing functions `f, g, h` of `σ, τ, ρ` the operator identity
//! is equivalent to the functional equation `f(x) = g(x) f(h(x)/g(x))`.
//! The variable `x` ranges over the spectrum of `A^{-1/2} B A^{-1/2}`; it is
//! unrelated to the weights carried by the representing functions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matfun::SpdMatrix;
use crate::operator::{OperatorMeanKind, PreparedPair, RepFn};
use crate::scalar::Weight;

pub const GRID_POINTS: usize = 60;
pub const GRID_DOMAIN: (f64, f64) = (1e-3, 1e3);
pub const CONDITION_TOL: f64 = 1e-12;

/// Scalar residual at or above this marks a triple as non-invariant.
pub const WITNESS_SCALAR_THRESHOLD: f64 = 1e-3;

/// `(σ, τ, ρ)` given by representing functions `(f, g, h)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvarianceTriple {
    pub sigma: RepFn,
    pub tau: RepFn,
    pub rho: RepFn,
}

impl InvarianceTriple {
    pub fn new(sigma: RepFn, tau: RepFn, rho: RepFn) -> Result<Self> {
        for f in [sigma, tau, rho] {
            OperatorMeanKind::from_rep_fn(f)?;
        }
        Ok(InvarianceTriple { sigma, tau, rho })
    }

    /// `(#_p, #_q, #_r)`
    pub fn geometric(p: Weight, q: Weight, r: Weight) -> Self {
        InvarianceTriple { sigma: RepFn::Power(p), tau: RepFn::Power(q), rho: RepFn::Power(r) }
    }

    /// `(#, ∇, !)`, all at weight 1/2.
    pub fn gah() -> Self {
        InvarianceTriple {
            sigma: RepFn::Power(Weight::HALF),
            tau: RepFn::Affine(Weight::HALF),
            rho: RepFn::Harmonic(Weight::HALF),
        }
    }

    pub fn scalar_residual(&self, samples: &[f64]) -> Result<ScalarResidual> {
        scalar_invariance_residual(&self.sigma, &self.tau, &self.rho, samples)
    }

    pub fn operator_residual(&self, a: &SpdMatrix, b: &SpdMatrix) -> Result<f64> {
        operator_invariance_residual(self, a, b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalarResidual {
    pub residual: f64,
    /// Sample where the maximum is attained.
    pub argmax: f64,
}

/// 60 log-uniform points on `[1e-3, 1e3]` and `x = 1`, ascending.
pub fn default_grid() -> Vec<f64> {
    let (lo, hi) = (GRID_DOMAIN.0.ln(), GRID_DOMAIN.1.ln());
    let mut grid: Vec<f64> =
        (0..GRID_POINTS).map(|k| (lo + (hi - lo) * k as f64 / (GRID_POINTS - 1) as f64).exp()).collect();
    grid.push(1.0);
    grid.sort_by(f64::total_cmp);
    grid
}

/// `max_x |f(x) − g(x) f(h(x)/g(x))| / max(1, f(x))`
pub fn scalar_invariance_residual(f: &RepFn, g: &RepFn, h: &RepFn, samples: &[f64]) -> Result<ScalarResidual> {
    let mut worst = ScalarResidual { residual: 0.0, argmax: f64::NAN };
    for &x in samples {
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::BadPoints(x));
        }
        let (fx, gx, hx) = (f.eval(x), g.eval(x), h.eval(x));
        if !(gx.is_finite() && gx > 0.0) {
            return Err(Error::NonFinite { context: "invariance: g(x)", value: x });
        }
        let r = (fx - gx * f.eval(hx / gx)).abs() / fx.max(1.0);
        if !r.is_finite() {
            return Err(Error::NonFinite { context: "invariance: residual", value: x });
        }
        if worst.argmax.is_nan() || r > worst.residual {
            worst = ScalarResidual { residual: r, argmax: x };
        }
    }
    Ok(worst)
}

/// `‖AσB − (AτB)σ(AρB)‖_F / max(1, ‖AσB‖_F)`
pub fn operator_invariance_residual(triple: &InvarianceTriple, a: &SpdMatrix, b: &SpdMatrix) -> Result<f64> {
    let pair = PreparedPair::new(a, b)?;
    let sigma = OperatorMeanKind::FromRepFn(triple.sigma);
    let t = triple.sigma.weight();
    let lhs = pair.mean(sigma, t)?;
    let m = pair.mean(OperatorMeanKind::FromRepFn(triple.tau), t)?;
    let n = pair.mean(OperatorMeanKind::FromRepFn(triple.rho), t)?;
    let rhs = PreparedPair::new(&m, &n)?.mean(sigma, t)?;
    Ok(lhs.sub(&rhs)?.frobenius_norm() / lhs.frobenius_norm().max(1.0))
}

/// `|p(1−r) − q(1−p)| ≤ 1e-12`
pub fn geometric_triple_condition(p: Weight, q: Weight, r: Weight) -> bool {
    let (p, q, r) = (p.value(), q.value(), r.value());
    (p * (1.0 - r) - q * (1.0 - p)).abs() <= CONDITION_TOL
}

/// `‖(A∇B) # (A!B) − A#B‖_F / scale`, with scale the largest eigenvalue of
/// `A` and `B` (at least 1).
pub fn gah_operator_identity(a: &SpdMatrix, b: &SpdMatrix) -> Result<f64> {
    let pair = PreparedPair::new(a, b)?;
    let half = Weight::HALF;
    let g = pair.mean(OperatorMeanKind::Geometric, half)?;
    let ar = pair.mean(OperatorMeanKind::Arithmetic, half)?;
    let hr = pair.mean(OperatorMeanKind::Harmonic, half)?;
    let lhs = PreparedPair::new(&ar, &hr)?.mean(OperatorMeanKind::Geometric, half)?;
    Ok(lhs.sub(&g)?.frobenius_norm() / pair.scale().max(1.0))
}

/// `A = I`, `B = diag(x, 1, …, 1)`: the eigenvalue ratio of the pair is `x`.
pub fn witness_pair(x: f64, dim: usize) -> Result<(SpdMatrix, SpdMatrix)> {
    let mut diag = vec![1.0; dim.max(1)];
    diag[0] = x;
    Ok((SpdMatrix::identity(dim.max(1)), SpdMatrix::from_diag(&diag)?))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceWitness {
    pub x: f64,
    pub scalar_residual: f64,
    pub operator_residual: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub dim: usize,
}

/// Lifts the worst grid point to a diagonal operator pair when the scalar
/// residual there reaches [`WITNESS_SCALAR_THRESHOLD`].
pub fn operator_witness(triple: &InvarianceTriple, samples: &[f64], dim: usize) -> Result<Option<InvarianceWitness>> {
    let s = triple.scalar_residual(samples)?;
    if s.residual < WITNESS_SCALAR_THRESHOLD {
        return Ok(None);
    }
    let (a, b) = witness_pair(s.argmax, dim)?;
    let operator_residual = operator_invariance_residual(triple, &a, &b)?;
    Ok(Some(InvarianceWitness {
        x: s.argmax,
        scalar_residual: s.residual,
        operator_residual,
        a: a.data().to_vec(),
        b: b.data().to_vec(),
        dim: a.dim(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matfun::SymMatrix;

    fn w(t: f64) -> Weight {
        Weight::new(t).unwrap()
    }

    fn sample_pair() -> (SpdMatrix, SpdMatrix) {
        let a = SymMatrix::from_rows(&[&[4.0, 1.0, 0.5], &[1.0, 3.0, -0.2], &[0.5, -0.2, 2.0]]).unwrap();
        let b = SymMatrix::from_rows(&[&[1.0, -0.3, 0.0], &[-0.3, 5.0, 1.2], &[0.0, 1.2, 0.7]]).unwrap();
        (SpdMatrix::new(a).unwrap(), SpdMatrix::new(b).unwrap())
    }

    #[test]
    fn grid_shape() {
        let g = default_grid();
        assert_eq!(g.len(), 61);
        assert!((g[0] - 1e-3).abs() < 1e-18 && (g[60] - 1e3).abs() < 1e-9);
        assert!(g.contains(&1.0));
        assert!(g.windows(2).all(|p| p[0] <= p[1]));
    }

    #[test]
    fn scalar_examples() {
        let grid = default_grid();
        let gah = InvarianceTriple::gah().scalar_residual(&grid).unwrap();
        assert!(gah.residual <= 1e-12, "{gah:?}");

        let geo = InvarianceTriple::geometric(w(0.5), w(1.0 / 3.0), w(2.0 / 3.0));
        assert!(geo.scalar_residual(&grid).unwrap().residual <= 1e-12);

        let f = RepFn::Log(w(0.3));
        assert!(scalar_invariance_residual(&f, &f, &f, &grid).unwrap().residual <= 1e-12);

        let bad = InvarianceTriple::geometric(w(0.5), w(1.0 / 3.0), w(1.0 / 3.0));
        let r = scalar_invariance_residual(&bad.sigma, &bad.tau, &bad.rho, &[4.0]).unwrap();
        let expected = (2.0 - 4f64.powf(1.0 / 3.0)) / 2.0;
        assert!((r.residual - expected).abs() < 1e-14);
    }

    #[test]
    fn scalar_rejects_bad_samples() {
        let t = InvarianceTriple::gah();
        assert!(t.scalar_residual(&[1.0, -2.0]).is_err());
        assert!(t.scalar_residual(&[f64::NAN]).is_err());
    }

    #[test]
    fn condition_cross_validates_scalar_residual() {
        let grid = default_grid();
        let ws = [0.0, 0.2, 1.0 / 3.0, 0.5, 2.0 / 3.0, 0.9, 1.0];
        for &p in &ws {
            for &q in &ws {
                for &r in &ws {
                    let (p, q, r) = (w(p), w(q), w(r));
                    let res = InvarianceTriple::geometric(p, q, r).scalar_residual(&grid).unwrap().residual;
                    let cond = geometric_triple_condition(p, q, r);
                    assert_eq!(cond, res <= 1e-10, "p={p:?} q={q:?} r={r:?} res={res}");
                }
            }
        }
    }

    #[test]
    fn condition_examples() {
        assert!(geometric_triple_condition(w(0.5), w(1.0 / 3.0), w(2.0 / 3.0)));
        assert!(geometric_triple_condition(w(0.7), w(0.7), w(0.7)));
        assert!(!geometric_triple_condition(w(0.5), w(1.0 / 3.0), w(1.0 / 3.0)));
    }

    #[test]
    fn operator_examples() {
        let (a, b) = sample_pair();
        let geo = InvarianceTriple::geometric(w(0.5), w(1.0 / 3.0), w(2.0 / 3.0));
        assert!(geo.operator_residual(&a, &a).unwrap() < 1e-13);
        assert!(geo.operator_residual(&a, &b).unwrap() < 1e-8);
        assert!(InvarianceTriple::gah().operator_residual(&a, &b).unwrap() < 1e-8);
        assert!(gah_operator_identity(&a, &b).unwrap() < 1e-8);
        assert!(gah_operator_identity(&a, &a).unwrap() < 1e-13);
        let c = SpdMatrix::from_diag(&[2.0, 7.0, 0.1]).unwrap();
        let d = SpdMatrix::from_diag(&[9.0, 0.5, 0.3]).unwrap();
        assert!(gah_operator_identity(&c, &d).unwrap() < 1e-12);
    }

    #[test]
    fn witness_for_violated_triple() {
        let bad = InvarianceTriple::geometric(w(0.5), w(1.0 / 3.0), w(1.0 / 3.0));
        let wit = operator_witness(&bad, &default_grid(), 3).unwrap().unwrap();
        assert!(wit.scalar_residual >= 1e-3);
        assert!(wit.operator_residual >= 1e-4, "{wit:?}");
        let (a, b) = witness_pair(wit.x, 3).unwrap();
        assert_eq!(bad.operator_residual(&a, &b).unwrap(), wit.operator_residual);

        let good = InvarianceTriple::gah();
        assert!(operator_witness(&good, &default_grid(), 3).unwrap().is_none());
    }

    #[test]
    fn new_checks_normalization() {
        assert!(InvarianceTriple::new(RepFn::Log(w(0.2)), RepFn::Power(w(0.1)), RepFn::Affine(w(0.9))).is_ok());
    }
}
