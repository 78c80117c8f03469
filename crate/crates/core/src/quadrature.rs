//! Fixed-order Gauss–Legendre quadrature and the integral representations
//! of the weighted means, used as independent oracles for the closed forms.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Weight;

pub const DEFAULT_ORDER: usize = 64;

/// Panels used by [`log_gt_oracle`]. The integrand `log(1 + α(x-1))` has a
/// logarithmic branch point just outside `[0, 1]` when `x` is far from 1,
/// which costs a single 64-point panel about eight digits.
pub const LOG_GT_PANELS: usize = 8;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    /// Builds the `order`-point rule by Newton iteration on `P_order`.
    pub fn new(order: usize) -> Result<Self> {
        if !(2..=256).contains(&order) {
            return Err(Error::InvalidOrder(order));
        }
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            // Tricomi's initial guess for the i-th largest root
            let theta = std::f64::consts::PI * (4 * i + 3) as f64 / (4 * n + 2) as f64;
            let mut x = (1.0 - (1.0 - 1.0 / n as f64) / (8.0 * (n * n) as f64)) * theta.cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let wt = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = wt;
            weights[n - 1 - i] = wt;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Ok(QuadratureRule { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integrates `f` over `[lo, hi]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, lo: f64, hi: f64) -> Result<f64> {
        if !(lo.is_finite() && hi.is_finite()) || lo > hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let mut acc = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            let node = mid + half * x;
            let v = f(node);
            if !v.is_finite() {
                return Err(Error::NonFiniteIntegrand { node, value: v });
            }
            acc += w * v;
        }
        Ok(half * acc)
    }

    /// Composite rule over `panels` equal sub-intervals.
    pub fn integrate_composite<F: Fn(f64) -> f64>(&self, f: F, lo: f64, hi: f64, panels: usize) -> Result<f64> {
        let panels = panels.max(1);
        let h = (hi - lo) / panels as f64;
        let mut acc = 0.0;
        for k in 0..panels {
            let a = lo + k as f64 * h;
            let b = if k + 1 == panels { hi } else { a + h };
            acc += self.integrate(&f, a, b)?;
        }
        Ok(acc)
    }
}

/// Returns `(P_n(x), P_n'(x))` from the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Shared, lazily built rule of the given order.
pub fn rule(order: usize) -> Result<Arc<QuadratureRule>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<QuadratureRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = cache.lock().unwrap().get(&order) {
        return Ok(Arc::clone(r));
    }
    let built = Arc::new(QuadratureRule::new(order)?);
    cache.lock().unwrap().entry(order).or_insert_with(|| Arc::clone(&built));
    Ok(built)
}

pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, order: usize) -> Result<f64> {
    rule(order)?.integrate(f, lo, hi)
}

/// The three sides of the weighted Hermite–Hadamard refinement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HhTriple {
    /// `f(tb + (1-t)a)`
    pub left: f64,
    /// `(1-t)∫f(tα(b-a)+a)dα + t∫f((1-t)α(b-a)+tb+(1-t)a)dα`
    pub mid: f64,
    /// `t f(b) + (1-t) f(a)`
    pub right: f64,
}

impl HhTriple {
    /// Smallest of `mid - left` and `right - mid`.
    pub fn slack(&self) -> f64 {
        (self.mid - self.left).min(self.right - self.mid)
    }

    pub fn is_ordered(&self, tol: f64) -> bool {
        self.left <= self.mid + tol && self.mid <= self.right + tol
    }
}

pub fn hh_triple<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, t: Weight, order: usize) -> Result<HhTriple> {
    if !(a < b) {
        return Err(Error::InvalidInterval { lo: a, hi: b });
    }
    let s = t.value();
    let m = s * b + (1.0 - s) * a;
    let r = rule(order)?;
    let first = r.integrate(|alpha| f(s * alpha * (b - a) + a), 0.0, 1.0)?;
    let second = r.integrate(|alpha| f((1.0 - s) * alpha * (b - a) + m), 0.0, 1.0)?;
    Ok(HhTriple { left: f(m), mid: (1.0 - s) * first + s * second, right: s * f(b) + (1.0 - s) * f(a) })
}

/// Quadrature of `(1-t)/t ∫_0^t a^(1-z) b^z dz + t/(1-t) ∫_t^1 a^(1-z) b^z dz`.
pub fn lt_oracle(a: f64, b: f64, t: Weight, order: usize) -> Result<f64> {
    let s = interior(t)?;
    let r = rule(order)?;
    let g = |z: f64| a.powf(1.0 - z) * b.powf(z);
    let left = r.integrate(g, 0.0, s)?;
    let right = r.integrate(g, s, 1.0)?;
    Ok((1.0 - s) / s * left + s / (1.0 - s) * right)
}

/// Quadrature of `f_t(x) = (1-t)∫_0^1 x^(tα) dα + t x^t ∫_0^1 x^((1-t)α) dα`.
pub fn ft_oracle(x: f64, t: Weight, order: usize) -> Result<f64> {
    let s = interior(t)?;
    let r = rule(order)?;
    let lx = x.ln();
    let first = r.integrate(|alpha| (s * alpha * lx).exp(), 0.0, 1.0)?;
    let second = r.integrate(|alpha| ((1.0 - s) * alpha * lx).exp(), 0.0, 1.0)?;
    Ok((1.0 - s) * first + s * x.powf(s) * second)
}

/// Quadrature of
/// `log g_t(x) = (1-t)/t ∫_0^t log(αx + 1 - α) dα + t/(1-t) ∫_t^1 log(αx + 1 - α) dα`,
/// with each sub-interval split into [`LOG_GT_PANELS`] panels.
pub fn log_gt_oracle(x: f64, t: Weight, order: usize) -> Result<f64> {
    let s = interior(t)?;
    let r = rule(order)?;
    let g = |alpha: f64| (alpha * (x - 1.0)).ln_1p();
    let left = r.integrate_composite(g, 0.0, s, LOG_GT_PANELS)?;
    let right = r.integrate_composite(g, s, 1.0, LOG_GT_PANELS)?;
    Ok((1.0 - s) / s * left + s / (1.0 - s) * right)
}

/// The oracles divide by `t` and `1 - t`; the endpoints are covered by the
/// closed forms.
fn interior(t: Weight) -> Result<f64> {
    let s = t.value();
    if s <= 0.0 || s >= 1.0 {
        return Err(Error::InvalidWeight(s));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn rule_invariants() {
        for order in [2, 3, 7, 16, 64, 255, 256] {
            let r = QuadratureRule::new(order).unwrap();
            let sum: f64 = r.weights().iter().sum();
            assert!((sum - 2.0).abs() < 1e-13, "order {order}: {sum}");
            assert!(r.weights().iter().all(|&w| w > 0.0));
            for i in 0..order {
                let (a, b) = (r.nodes()[i], r.nodes()[order - 1 - i]);
                assert!((a + b).abs() < 1e-15);
                assert!(a > -1.0 && a < 1.0);
            }
            assert!(r.nodes().windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn rejects_bad_order() {
        assert_eq!(QuadratureRule::new(1), Err(Error::InvalidOrder(1)));
        assert_eq!(QuadratureRule::new(257), Err(Error::InvalidOrder(257)));
    }

    #[test]
    fn integrate_examples() {
        assert!((integrate(|_| 1.0, 0.0, 1.0, 16).unwrap() - 1.0).abs() < 1e-15);
        assert!((integrate(|x| x * x * x, 0.0, 1.0, 4).unwrap() - 0.25).abs() < 1e-15);
        assert!((integrate(f64::exp, 0.0, 1.0, 64).unwrap() - (E - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn exact_for_degree_2n_minus_1() {
        for n in [2usize, 5, 10] {
            let deg = 2 * n - 1;
            let v = integrate(|x| x.powi(deg as i32), 0.0, 2.0, n).unwrap();
            let exact = 2f64.powi(deg as i32 + 1) / (deg + 1) as f64;
            assert!((v - exact).abs() < 1e-12 * exact, "n={n}");
        }
    }

    #[test]
    fn non_finite_integrand_names_node() {
        let err = integrate(|x| 1.0 / (x - 0.5).max(0.0), 0.0, 1.0, 4).unwrap_err();
        match err {
            Error::NonFiniteIntegrand { node, .. } => assert!(node < 0.5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn hh_exp_example() {
        let tr = hh_triple(f64::exp, 0.0, 1.0, Weight::HALF, 64).unwrap();
        assert!((tr.left - 0.5f64.exp()).abs() < 1e-15);
        assert!((tr.right - (E + 1.0) / 2.0).abs() < 1e-15);
        assert!(tr.left < tr.mid && tr.mid < tr.right);
    }

    #[test]
    fn hh_affine_equality() {
        let tr = hh_triple(|x| 2.0 * x + 1.0, -3.0, 5.0, Weight::new(0.37).unwrap(), 64).unwrap();
        assert!((tr.left - tr.right).abs() <= 1e-12 * (1.0 + tr.right.abs()));
        assert!((tr.mid - tr.right).abs() <= 1e-12 * (1.0 + tr.right.abs()));
    }

    #[test]
    fn hh_neg_log_ordered() {
        let tr = hh_triple(|x: f64| -x.ln(), 1.0, 4.0, Weight::new(0.3).unwrap(), 64).unwrap();
        assert!(tr.is_ordered(0.0));
    }

    #[test]
    fn oracle_examples() {
        let t = Weight::new(0.2169).unwrap();
        assert!((lt_oracle(706.0, 31.8, t, 64).unwrap() - 431.8506).abs() < 5e-4);
        assert!((lt_oracle(3.0, 3.0, Weight::new(0.4).unwrap(), 8).unwrap() - 3.0).abs() < 1e-14);
        assert!((lt_oracle(1.0, E, Weight::HALF, 64).unwrap() - (E - 1.0)).abs() < 1e-10);
        assert!((ft_oracle(1.0, t, 16).unwrap() - 1.0).abs() < 1e-15);
        assert!(log_gt_oracle(1.0, t, 16).unwrap().abs() < 1e-15);
        assert!((ft_oracle(4.0, Weight::HALF, 64).unwrap() - 3.0 / 4f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn oracles_reject_endpoint_weights() {
        assert!(ft_oracle(2.0, Weight::ZERO, 64).is_err());
        assert!(log_gt_oracle(2.0, Weight::ONE, 64).is_err());
    }
}
