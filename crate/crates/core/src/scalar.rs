//! Weighted means of two positive scalars.
//!
//! Every weighted mean `M_t(a, b)` here satisfies `M_0(a, b) = a`,
//! `M_1(a, b) = b` and `M_t(a, a) = a`. The logarithmic and identric
//! families are evaluated through forms that have no removable
//! singularities left in them:
//!
//! * `L_t(a, b) = (1-t) L(a, G_t) + t L(G_t, b)`, where `G_t = a^(1-t) b^t`
//!   and `L` is the classical logarithmic mean. Written with
//!   `u = log(b/a)` this is `a[(1-t)/t expm1(tu) + t/(1-t) e^(tu) expm1((1-t)u)]/u`.
//! * `log I_t(a, b) = (1-t) log I(a, m) + t log I(m, b)` with
//!   `m = (1-t)a + tb` and `I` the classical identric mean, which is the
//!   closed form of the `x log x` integrals regrouped so nothing overflows.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Weight `t` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Weight(f64);

impl Weight {
    pub const ZERO: Weight = Weight(0.0);
    pub const HALF: Weight = Weight(0.5);
    pub const ONE: Weight = Weight(1.0);

    pub fn new(t: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&t) {
            Ok(Weight(t))
        } else {
            Err(Error::InvalidWeight(t))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `1 - t`.
    #[inline]
    pub fn complement(self) -> Weight {
        Weight(1.0 - self.0)
    }
}

impl TryFrom<f64> for Weight {
    type Error = Error;
    fn try_from(t: f64) -> Result<Self> {
        Weight::new(t)
    }
}

impl From<Weight> for f64 {
    fn from(w: Weight) -> f64 {
        w.0
    }
}

/// Finite, strictly positive real.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct PosReal(f64);

impl PosReal {
    pub fn new(v: f64) -> Result<Self> {
        if v.is_finite() && v > 0.0 {
            Ok(PosReal(v))
        } else {
            Err(Error::NotPositive(v))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for PosReal {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        PosReal::new(v)
    }
}

impl From<PosReal> for f64 {
    fn from(v: PosReal) -> f64 {
        v.0
    }
}

/// The scalar mean families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalarMeanKind {
    Arithmetic,
    Geometric,
    Harmonic,
    Logarithmic,
    Identric,
    HeronianWeighted,
    /// Stolarsky mean `S_r`; ignores the weight.
    Stolarsky(f64),
}

impl ScalarMeanKind {
    pub fn name(&self) -> &'static str {
        match self {
            ScalarMeanKind::Arithmetic => "arithmetic",
            ScalarMeanKind::Geometric => "geometric",
            ScalarMeanKind::Harmonic => "harmonic",
            ScalarMeanKind::Logarithmic => "logarithmic",
            ScalarMeanKind::Identric => "identric",
            ScalarMeanKind::HeronianWeighted => "heronian",
            ScalarMeanKind::Stolarsky(_) => "stolarsky",
        }
    }

    /// Raw evaluation; `a` and `b` are assumed positive.
    pub fn apply(&self, a: f64, b: f64, t: Weight) -> f64 {
        match *self {
            ScalarMeanKind::Arithmetic => weighted_arithmetic(a, b, t),
            ScalarMeanKind::Geometric => weighted_geometric(a, b, t),
            ScalarMeanKind::Harmonic => weighted_harmonic(a, b, t),
            ScalarMeanKind::Logarithmic => weighted_logarithmic(a, b, t),
            ScalarMeanKind::Identric => weighted_identric(a, b, t),
            ScalarMeanKind::HeronianWeighted => heronian_weighted(a, b, t),
            ScalarMeanKind::Stolarsky(r) => stolarsky(a, b, r),
        }
    }

    pub fn eval(&self, a: PosReal, b: PosReal, t: Weight) -> Result<PosReal> {
        if let ScalarMeanKind::Stolarsky(r) = *self {
            if !r.is_finite() {
                return Err(Error::NonFinite { context: "Stolarsky parameter", value: r });
            }
        }
        PosReal::new(self.apply(a.value(), b.value(), t))
    }
}

/// `expm1(u)/u`, equal to 1 at `u = 0`.
pub(crate) fn exprel(u: f64) -> f64 {
    if u.abs() < 1e-5 {
        1.0 + u * (0.5 + u * (1.0 / 6.0 + u / 24.0))
    } else {
        u.exp_m1() / u
    }
}

/// `log(expm1(v)/v)`, equal to 0 at `v = 0`.
fn log_exprel(v: f64) -> f64 {
    if v.abs() < 1e-5 {
        v * (0.5 + v / 24.0)
    } else if v > 30.0 {
        v + (-(-v).exp()).ln_1p() - v.ln()
    } else if v < -30.0 {
        (-v.exp_m1()).ln() - (-v).ln()
    } else {
        (v.exp_m1() / v).ln()
    }
}

/// `log(b/a)` for `a <= b`, accurate when the two are close.
fn log_ratio(lo: f64, hi: f64) -> f64 {
    let e = (hi - lo) / lo;
    if e.is_finite() {
        e.ln_1p()
    } else {
        hi.ln() - lo.ln()
    }
}

fn ordered(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Classical logarithmic mean `(b - a)/(log b - log a)`.
pub fn log_mean(a: f64, b: f64) -> f64 {
    if a == b {
        return a;
    }
    let (lo, hi) = ordered(a, b);
    let u = log_ratio(lo, hi);
    if u > 1.0 {
        (hi - lo) / u
    } else {
        lo * exprel(u)
    }
}

/// Logarithm of the classical identric mean `(1/e)(b^b/a^a)^(1/(b-a))`.
pub fn ln_identric_mean(a: f64, b: f64) -> f64 {
    if a == b {
        return a.ln();
    }
    let (lo, hi) = ordered(a, b);
    let e = (hi - lo) / lo;
    if e > 1.0 {
        // log hi - 1 + log(hi/lo) / (hi/lo - 1)
        let (lnh, lnl) = (hi.ln(), lo.ln());
        lnh - 1.0 + (lnh - lnl) / e
    } else if e < 1e-5 {
        lo.ln() + e * (0.5 + e * (-1.0 / 6.0 + e / 12.0))
    } else {
        lo.ln() + (1.0 + e) * e.ln_1p() / e - 1.0
    }
}

pub fn identric_mean(a: f64, b: f64) -> f64 {
    if a == b {
        return a;
    }
    ln_identric_mean(a, b).exp()
}

/// `(1-t)a + tb`
pub fn weighted_arithmetic(a: f64, b: f64, t: Weight) -> f64 {
    let t = t.value();
    (1.0 - t) * a + t * b
}

/// `a^(1-t) b^t`
pub fn weighted_geometric(a: f64, b: f64, t: Weight) -> f64 {
    let t = t.value();
    if t == 0.0 {
        return a;
    }
    if t == 1.0 {
        return b;
    }
    a.powf(1.0 - t) * b.powf(t)
}

/// `((1-t)/a + t/b)^(-1)`
pub fn weighted_harmonic(a: f64, b: f64, t: Weight) -> f64 {
    let t = t.value();
    1.0 / ((1.0 - t) / a + t / b)
}

/// Weighted logarithmic mean `L_t(a, b)`.
pub fn weighted_logarithmic(a: f64, b: f64, t: Weight) -> f64 {
    let s = t.value();
    if s == 0.0 || a == b {
        return a;
    }
    if s == 1.0 {
        return b;
    }
    let g = weighted_geometric(a, b, t);
    (1.0 - s) * log_mean(a, g) + s * log_mean(g, b)
}

/// `log I_t(a, b)`.
pub fn ln_weighted_identric(a: f64, b: f64, t: Weight) -> f64 {
    let s = t.value();
    if s == 0.0 || a == b {
        return a.ln();
    }
    if s == 1.0 {
        return b.ln();
    }
    let m = weighted_arithmetic(a, b, t);
    (1.0 - s) * ln_identric_mean(a, m) + s * ln_identric_mean(m, b)
}

/// Weighted identric mean `I_t(a, b)`.
pub fn weighted_identric(a: f64, b: f64, t: Weight) -> f64 {
    let s = t.value();
    if s == 0.0 || a == b {
        return a;
    }
    if s == 1.0 {
        return b;
    }
    ln_weighted_identric(a, b, t).exp()
}

/// Stolarsky mean `((a^r - b^r)/(r(a-b)))^(1/(r-1))`, continuously extended
/// to `r = 0` (logarithmic mean) and `r = 1` (identric mean).
pub fn stolarsky(a: f64, b: f64, r: f64) -> f64 {
    if a == b {
        return a;
    }
    if r.abs() < 1e-7 {
        return log_mean(a, b);
    }
    if (r - 1.0).abs() < 1e-7 {
        return identric_mean(a, b);
    }
    let (lo, hi) = ordered(a, b);
    let u = log_ratio(lo, hi);
    // (a^r - b^r)/(r(a-b)) = lo^(r-1) * [expm1(ru)/(ru)] / [expm1(u)/u]
    (lo.ln() + (log_exprel(r * u) - log_exprel(u)) / (r - 1.0)).exp()
}

/// `(2/3) a^(1-t) b^t + (1/3)((1-t)a + tb)`
pub fn heronian_weighted(a: f64, b: f64, t: Weight) -> f64 {
    (2.0 * weighted_geometric(a, b, t) + weighted_arithmetic(a, b, t)) / 3.0
}

/// Representing function of the weighted logarithmic mean, `f_t(x) = L_t(1, x)`.
pub fn rep_log(x: f64, t: Weight) -> f64 {
    weighted_logarithmic(1.0, x, t)
}

/// Representing function of the weighted identric mean, `g_t(x) = I_t(1, x)`.
pub fn rep_identric(x: f64, t: Weight) -> f64 {
    weighted_identric(1.0, x, t)
}

/// `log g_t(x)`.
pub fn ln_rep_identric(x: f64, t: Weight) -> f64 {
    ln_weighted_identric(1.0, x, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn w(t: f64) -> Weight {
        Weight::new(t).unwrap()
    }

    fn rel(x: f64, y: f64) -> f64 {
        (x - y).abs() / y.abs().max(1.0)
    }

    #[test]
    fn weight_rejects_out_of_range() {
        assert!(Weight::new(-0.1).is_err());
        assert!(Weight::new(1.0 + 1e-15).is_err());
        assert!(Weight::new(f64::NAN).is_err());
        assert_eq!(Weight::new(0.25).unwrap().complement().value(), 0.75);
    }

    #[test]
    fn pos_real_rejects_bad_values() {
        assert!(PosReal::new(0.0).is_err());
        assert!(PosReal::new(-1.0).is_err());
        assert!(PosReal::new(f64::INFINITY).is_err());
        assert!(PosReal::new(f64::NAN).is_err());
        assert!(PosReal::new(1e-300).is_ok());
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(weighted_arithmetic(1.0, 3.0, Weight::HALF), 2.0);
        assert_eq!(weighted_arithmetic(7.5, 7.5, w(0.3)), 7.5);
        // 706 * 0.7831 + 31.8 * 0.2169
        assert!((weighted_arithmetic(706.0, 31.8, w(0.2169)) - 559.76602).abs() < 1e-9);
    }

    #[test]
    fn geometric_examples() {
        assert!((weighted_geometric(1.0, 4.0, Weight::HALF) - 2.0).abs() < 1e-15);
        assert_eq!(weighted_geometric(3.0, 5.0, Weight::ZERO), 3.0);
        let expected = (1.5 * 2f64.ln()).exp();
        assert!(rel(weighted_geometric(2.0, 8.0, w(0.25)), expected) < 1e-15);
    }

    #[test]
    fn harmonic_examples() {
        assert_eq!(weighted_harmonic(1.0, 1.0, w(0.7)), 1.0);
        assert!((weighted_harmonic(2.0, 6.0, Weight::HALF) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn logarithmic_counterexample_value() {
        let l = weighted_logarithmic(706.0, 31.8, w(0.2169));
        assert!((l - 431.8506).abs() < 5e-4, "{l}");
    }

    #[test]
    fn logarithmic_examples() {
        assert_eq!(weighted_logarithmic(2.5, 2.5, w(0.4)), 2.5);
        assert!(rel(weighted_logarithmic(1.0, E, Weight::HALF), E - 1.0) < 1e-15);
        assert_eq!(weighted_logarithmic(2.0, 9.0, Weight::ZERO), 2.0);
        assert_eq!(weighted_logarithmic(2.0, 9.0, Weight::ONE), 9.0);
    }

    /// Literal transcription of the closed form, only usable away from its
    /// singularities.
    fn naive_log(a: f64, b: f64, t: f64) -> f64 {
        1.0 / (a.ln() - b.ln())
            * ((1.0 - t) / t * a.powf(1.0 - t) * (a.powf(t) - b.powf(t))
                + t / (1.0 - t) * b.powf(t) * (a.powf(1.0 - t) - b.powf(1.0 - t)))
    }

    fn naive_ln_identric(a: f64, b: f64, t: f64) -> f64 {
        let m = (1.0 - t) * a + t * b;
        -1.0 + (1.0 - 2.0 * t) * m / (t * (1.0 - t) * (b - a)) * m.ln()
            + (t * b / (1.0 - t) * b.ln() - (1.0 - t) * a / t * a.ln()) / (b - a)
    }

    #[test]
    fn stable_forms_match_literal_closed_forms() {
        for &(a, b) in &[(1.0, 3.0), (706.0, 31.8), (0.2, 5.0), (10.0, 0.5)] {
            for &t in &[0.1, 0.2169, 0.5, 0.8, 0.95] {
                let l = weighted_logarithmic(a, b, w(t));
                assert!(rel(l, naive_log(a, b, t)) < 1e-12, "{a} {b} {t}");
                let li = ln_weighted_identric(a, b, w(t));
                assert!((li - naive_ln_identric(a, b, t)).abs() < 1e-12, "{a} {b} {t}");
            }
        }
    }

    #[test]
    fn identric_examples() {
        let expected = (1.0 / (E - 1.0)).exp();
        assert!(rel(weighted_identric(1.0, E, Weight::HALF), expected) < 1e-14);
        assert_eq!(weighted_identric(4.0, 4.0, w(0.3)), 4.0);
        assert!(rel(identric_mean(1.0, E), expected) < 1e-14);
    }

    #[test]
    fn identric_half_is_classical_identric() {
        for &(a, b) in &[(1.0, 2.0), (0.01, 100.0), (3.0, 3.0 + 1e-9), (5e-5, 7e4)] {
            let lhs = weighted_identric(a, b, Weight::HALF);
            assert!(rel(lhs, identric_mean(a, b)) < 1e-13, "{a} {b}");
        }
    }

    #[test]
    fn identric_between_geometric_and_arithmetic() {
        for &(a, b) in &[(706.0, 31.8), (1.0, 1e6), (2.0, 2.000001)] {
            for &t in &[0.01, 0.2169, 0.5, 0.77, 0.99] {
                let i = weighted_identric(a, b, w(t));
                let scale = a.max(b);
                assert!(weighted_geometric(a, b, w(t)) <= i + 1e-12 * scale);
                assert!(i <= weighted_arithmetic(a, b, w(t)) + 1e-12 * scale);
            }
        }
    }

    #[test]
    fn near_diagonal_is_smooth() {
        // a and b within rounding distance: the mean must still sit between them
        let a = 1.0;
        for k in 1..15 {
            let b = 1.0 + 10f64.powi(-k);
            for &t in &[0.1, 0.5, 0.9] {
                for m in [weighted_logarithmic(a, b, w(t)), weighted_identric(a, b, w(t))] {
                    assert!(m >= a - 1e-15 && m <= b + 1e-15, "k={k} t={t} m={m}");
                }
            }
        }
    }

    #[test]
    fn endpoint_limits() {
        let (a, b) = (3.0, 11.0);
        let eps = w(1e-6);
        assert!((weighted_logarithmic(a, b, eps) - a).abs() <= 1e-4 * (b - a));
        assert!((weighted_identric(a, b, eps) - a).abs() <= 1e-4 * (b - a));
        let near_one = w(1.0 - 1e-6);
        assert!((weighted_logarithmic(a, b, near_one) - b).abs() <= 1e-4 * (b - a));
        assert!((weighted_identric(a, b, near_one) - b).abs() <= 1e-4 * (b - a));
    }

    #[test]
    fn stolarsky_examples() {
        assert!((stolarsky(1.0, 3.0, 2.0) - 2.0).abs() < 1e-14);
        assert!((stolarsky(1.0, 4.0, -1.0) - 2.0).abs() < 1e-14);
        assert!(rel(stolarsky(1.0, E, 0.0), E - 1.0) < 1e-15);
        assert!(rel(stolarsky(1.0, E, 1.0), identric_mean(1.0, E)) < 1e-15);
        assert_eq!(stolarsky(5.0, 5.0, 3.0), 5.0);
    }

    #[test]
    fn stolarsky_continuous_at_branch_points() {
        let (a, b) = (0.7, 9.0);
        for r0 in [0.0, 1.0] {
            let at = stolarsky(a, b, r0);
            for h in [1e-6, -1e-6, 1e-5, -1e-5] {
                assert!(rel(stolarsky(a, b, r0 + h), at) < 1e-4, "r0={r0} h={h}");
            }
        }
    }

    #[test]
    fn stolarsky_strictly_increasing_in_r() {
        for &(a, b) in &[(1.0, 3.0), (0.05, 40.0), (2.0, 2.5)] {
            let mut prev = stolarsky(a, b, -5.0);
            let mut r = -5.0;
            while r < 5.0 {
                r += 0.125;
                let cur = stolarsky(a, b, r);
                assert!(cur > prev, "a={a} b={b} r={r}");
                prev = cur;
            }
        }
    }

    #[test]
    fn heronian_examples() {
        let h = heronian_weighted(706.0, 31.8, w(0.2169));
        assert!((h - 426.8502).abs() < 5e-4, "{h}");
        assert_eq!(heronian_weighted(2.0, 2.0, w(0.6)), 2.0);
        assert!((heronian_weighted(1.0, 4.0, Weight::HALF) - 13.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn heronian_bound_fails_for_counterexample() {
        let t = w(0.2169);
        let gap = weighted_logarithmic(706.0, 31.8, t) - heronian_weighted(706.0, 31.8, t);
        assert!(gap > 4.9, "{gap}");
    }

    #[test]
    fn rep_functions() {
        for &t in &[0.0, 0.3, 0.5, 1.0] {
            assert_eq!(rep_log(1.0, w(t)), 1.0);
            assert_eq!(rep_identric(1.0, w(t)), 1.0);
        }
        assert!(rel(rep_log(4.0, Weight::HALF), 3.0 / 4f64.ln()) < 1e-15);
        assert!(rel(rep_identric(E, Weight::HALF), (1.0 / (E - 1.0)).exp()) < 1e-14);
        assert_eq!(rep_log(7.0, Weight::ZERO), 1.0);
        assert_eq!(rep_log(7.0, Weight::ONE), 7.0);
    }

    #[test]
    fn extreme_ratios_stay_finite() {
        for &(a, b) in &[(1e-300, 1e300), (1e300, 1e-300), (1.0, 1e308)] {
            for &t in &[0.1, 0.5, 0.9] {
                for kind in [
                    ScalarMeanKind::Logarithmic,
                    ScalarMeanKind::Identric,
                    ScalarMeanKind::Stolarsky(3.0),
                    ScalarMeanKind::Stolarsky(-2.0),
                ] {
                    let m = kind.apply(a, b, w(t));
                    assert!(m.is_finite() && m > 0.0, "{kind:?} {a} {b} {t} -> {m}");
                }
            }
        }
    }
}
