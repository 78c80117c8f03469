//! Weighted operator means on SPD pairs.
//!
//! A mean σ with representing function `f` is computed as
//! `A σ B = A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2}`. Representing functions
//! follow the `f(x) I = I σ (x I)` orientation, so the weighted arithmetic
//! mean has `f(x) = (1-t) + t x` and `mean(I, 2I, Arithmetic, t) = (1+t) I`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matfun::{
    eig_sym, power_spd, sandwich, weighted_outer_sum, SpdMatrix, SquareMatrix, SymMatrix, MAX_CONDITION,
};
use crate::quadrature::{self, DEFAULT_ORDER};
use crate::scalar::{self, Weight};

/// Representing functions of the supported means.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", content = "t", rename_all = "snake_case")]
pub enum RepFn {
    /// `(1-t) + t x`
    Affine(Weight),
    /// `x^t`
    Power(Weight),
    /// `((1-t) + t/x)^{-1}`
    Harmonic(Weight),
    /// `f_t(x) = L_t(1, x)`
    Log(Weight),
    /// `g_t(x) = I_t(1, x)`
    Identric(Weight),
    /// `(x^t + 1 - t + t x)/2`
    HalfSum(Weight),
}

impl RepFn {
    pub fn weight(&self) -> Weight {
        match *self {
            RepFn::Affine(t)
            | RepFn::Power(t)
            | RepFn::Harmonic(t)
            | RepFn::Log(t)
            | RepFn::Identric(t)
            | RepFn::HalfSum(t) => t,
        }
    }

    pub fn name(&self) -> String {
        let form = match self {
            RepFn::Affine(_) => "affine",
            RepFn::Power(_) => "power",
            RepFn::Harmonic(_) => "harmonic",
            RepFn::Log(_) => "log",
            RepFn::Identric(_) => "identric",
            RepFn::HalfSum(_) => "half_sum",
        };
        format!("{form}(t={})", self.weight().value())
    }

    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            RepFn::Affine(t) => scalar::weighted_arithmetic(1.0, x, t),
            RepFn::Power(t) => scalar::weighted_geometric(1.0, x, t),
            RepFn::Harmonic(t) => scalar::weighted_harmonic(1.0, x, t),
            RepFn::Log(t) => scalar::rep_log(x, t),
            RepFn::Identric(t) => scalar::rep_identric(x, t),
            RepFn::HalfSum(t) => 0.5 * (scalar::weighted_geometric(1.0, x, t) + scalar::weighted_arithmetic(1.0, x, t)),
        }
    }

    /// Closed-form derivative where one is cheap.
    pub fn derivative(&self, x: f64) -> Option<f64> {
        let t = self.weight().value();
        match *self {
            RepFn::Affine(_) => Some(t),
            RepFn::Power(_) => Some(t * x.powf(t - 1.0)),
            RepFn::Harmonic(_) => {
                let f = self.eval(x);
                Some(t * f * f / (x * x))
            }
            RepFn::HalfSum(_) => Some(0.5 * (t * x.powf(t - 1.0) + t)),
            RepFn::Log(_) | RepFn::Identric(_) => None,
        }
    }

    /// Independent evaluation through the integral representations, for the
    /// two families that have one.
    pub fn oracle(&self, x: f64) -> Option<Result<f64>> {
        match *self {
            RepFn::Log(t) if t.value() > 0.0 && t.value() < 1.0 => Some(quadrature::ft_oracle(x, t, DEFAULT_ORDER)),
            RepFn::Identric(t) if t.value() > 0.0 && t.value() < 1.0 => {
                Some(quadrature::log_gt_oracle(x, t, DEFAULT_ORDER).map(f64::exp))
            }
            RepFn::Log(_) | RepFn::Identric(_) => Some(Ok(self.eval(x))),
            _ => None,
        }
    }

    /// The same family at weight `1 - t`; `A σ_t B = B σ_{1-t} A`.
    pub fn reflected(&self) -> RepFn {
        match *self {
            RepFn::Affine(t) => RepFn::Affine(t.complement()),
            RepFn::Power(t) => RepFn::Power(t.complement()),
            RepFn::Harmonic(t) => RepFn::Harmonic(t.complement()),
            RepFn::Log(t) => RepFn::Log(t.complement()),
            RepFn::Identric(t) => RepFn::Identric(t.complement()),
            RepFn::HalfSum(t) => RepFn::HalfSum(t.complement()),
        }
    }
}

/// The operator means.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorMeanKind {
    Arithmetic,
    Harmonic,
    Geometric,
    Logarithmic,
    Identric,
    /// A mean given directly by its representing function; the weight
    /// argument of [`mean`] is ignored in favour of the function's own.
    FromRepFn(RepFn),
}

impl OperatorMeanKind {
    pub const NAMED: [OperatorMeanKind; 5] = [
        OperatorMeanKind::Arithmetic,
        OperatorMeanKind::Harmonic,
        OperatorMeanKind::Geometric,
        OperatorMeanKind::Logarithmic,
        OperatorMeanKind::Identric,
    ];

    /// Wraps `f` after checking `f(1) = 1` to 1e-12.
    pub fn from_rep_fn(f: RepFn) -> Result<Self> {
        let one = f.eval(1.0);
        if (one - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized(one));
        }
        Ok(OperatorMeanKind::FromRepFn(f))
    }

    pub fn rep_fn(&self, t: Weight) -> RepFn {
        match *self {
            OperatorMeanKind::Arithmetic => RepFn::Affine(t),
            OperatorMeanKind::Harmonic => RepFn::Harmonic(t),
            OperatorMeanKind::Geometric => RepFn::Power(t),
            OperatorMeanKind::Logarithmic => RepFn::Log(t),
            OperatorMeanKind::Identric => RepFn::Identric(t),
            OperatorMeanKind::FromRepFn(f) => f,
        }
    }

    pub fn name(&self) -> String {
        match self {
            OperatorMeanKind::Arithmetic => "arithmetic".into(),
            OperatorMeanKind::Harmonic => "harmonic".into(),
            OperatorMeanKind::Geometric => "geometric".into(),
            OperatorMeanKind::Logarithmic => "logarithmic".into(),
            OperatorMeanKind::Identric => "identric".into(),
            OperatorMeanKind::FromRepFn(f) => f.name(),
        }
    }
}

/// An SPD pair with the decompositions every mean of it needs.
///
/// With `A^{-1/2} B A^{-1/2} = Q Λ Qᵀ` and `W = A^{1/2} Q`, any mean is
/// `W f(Λ) Wᵀ`, so evaluating many means (or one mean over a grid of
/// weights) costs one outer-product sum each.
#[derive(Debug, Clone)]
pub struct PreparedPair {
    a: SpdMatrix,
    b: SpdMatrix,
    a_inv: SymMatrix,
    b_inv: SymMatrix,
    w: SquareMatrix,
    spectrum: Vec<f64>,
    scale: f64,
}

impl PreparedPair {
    pub fn new(a: &SpdMatrix, b: &SpdMatrix) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch { left: a.dim(), right: b.dim() });
        }
        let ea = eig_sym(a)?;
        let eb = eig_sym(b)?;
        for e in [&ea, &eb] {
            if !(e.min() > 0.0) {
                return Err(Error::NotPositiveDefinite { min: e.min(), max: e.max() });
            }
            if e.condition() > MAX_CONDITION {
                return Err(Error::IllConditioned { cond: e.condition() });
            }
        }
        let a_half = ea.map(f64::sqrt)?;
        let a_inv_half = ea.map(|l| 1.0 / l.sqrt())?;
        let middle = sandwich(&a_inv_half, b)?;
        let em = eig_sym(&middle)?;
        let w = a_half.as_square().matmul(&em.vectors)?;
        Ok(PreparedPair {
            a: a.clone(),
            b: b.clone(),
            a_inv: ea.map(|l| 1.0 / l)?,
            b_inv: eb.map(|l| 1.0 / l)?,
            w,
            spectrum: em.values,
            scale: ea.max().max(eb.max()),
        })
    }

    pub fn a(&self) -> &SpdMatrix {
        &self.a
    }

    pub fn b(&self) -> &SpdMatrix {
        &self.b
    }

    /// `max(‖A‖₂, ‖B‖₂)`
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Eigenvalues of `A^{-1/2} B A^{-1/2}`, ascending.
    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    /// `A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2}`
    pub fn spectral<F: Fn(f64) -> f64>(&self, f: F) -> Result<SymMatrix> {
        let fv = self
            .spectrum
            .iter()
            .map(|&l| {
                let v = f(l);
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::NonFiniteSpectral { eigenvalue: l, value: v })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(weighted_outer_sum(&self.w, &fv))
    }

    pub fn spectral_mean(&self, kind: OperatorMeanKind, t: Weight) -> Result<SpdMatrix> {
        let f = kind.rep_fn(t);
        Ok(SpdMatrix::assume(self.spectral(|x| f.eval(x))?))
    }

    /// Arithmetic and harmonic means use their direct formulas, everything
    /// else the spectral route.
    pub fn mean(&self, kind: OperatorMeanKind, t: Weight) -> Result<SpdMatrix> {
        match kind {
            OperatorMeanKind::Arithmetic => Ok(SpdMatrix::assume(self.a.lerp(&self.b, t.value())?)),
            OperatorMeanKind::Harmonic => {
                let s = t.value();
                if s == 0.0 {
                    return Ok(self.a.clone());
                }
                if s == 1.0 {
                    return Ok(self.b.clone());
                }
                let blend = SpdMatrix::assume(self.a_inv.lerp(&self.b_inv, s)?);
                power_spd(&blend, -1.0)
            }
            _ => self.spectral_mean(kind, t),
        }
    }
}

/// `A σ_t B` for the given kind.
pub fn mean(a: &SpdMatrix, b: &SpdMatrix, kind: OperatorMeanKind, t: Weight) -> Result<SpdMatrix> {
    match kind {
        OperatorMeanKind::Arithmetic => {
            if a.dim() != b.dim() {
                return Err(Error::DimensionMismatch { left: a.dim(), right: b.dim() });
            }
            Ok(SpdMatrix::assume(a.lerp(b, t.value())?))
        }
        _ => PreparedPair::new(a, b)?.mean(kind, t),
    }
}

/// `‖direct − spectral‖_F` for the arithmetic and harmonic means; zero for
/// kinds that only have the spectral route.
pub fn spectral_route_residual(a: &SpdMatrix, b: &SpdMatrix, kind: OperatorMeanKind, t: Weight) -> Result<f64> {
    match kind {
        OperatorMeanKind::Arithmetic | OperatorMeanKind::Harmonic => {
            let pair = PreparedPair::new(a, b)?;
            let direct = pair.mean(kind, t)?;
            let spectral = pair.spectral_mean(kind, t)?;
            Ok(direct.sub(&spectral)?.frobenius_norm())
        }
        _ => Ok(0.0),
    }
}

/// `‖A σ_t B − B σ_{1-t} A‖_F`.
pub fn transpose_identity_check(a: &SpdMatrix, b: &SpdMatrix, kind: OperatorMeanKind, t: Weight) -> Result<f64> {
    let forward = mean(a, b, kind, t)?;
    let backward = match kind {
        OperatorMeanKind::FromRepFn(f) => mean(b, a, OperatorMeanKind::FromRepFn(f.reflected()), t)?,
        _ => mean(b, a, kind, t.complement())?,
    };
    Ok(forward.sub(&backward)?.frobenius_norm())
}

/// `‖Cᵀ(A σ B)C − (CᵀAC) σ (CᵀBC)‖_F` for invertible `C`.
pub fn congruence_equivariance_residual(
    a: &SpdMatrix,
    b: &SpdMatrix,
    c: &SquareMatrix,
    kind: OperatorMeanKind,
    t: Weight,
) -> Result<f64> {
    let gram = eig_sym(&c.transpose().matmul(c)?.symmetric_part())?;
    if !(gram.min() > 0.0) || gram.condition().sqrt() > MAX_CONDITION {
        let cond = if gram.min() > 0.0 { gram.condition().sqrt() } else { f64::INFINITY };
        return Err(Error::SingularCongruence { cond });
    }
    let m = mean(a, b, kind, t)?;
    let lhs = crate::matfun::conjugate(c, &m)?;
    let ca = SpdMatrix::assume(crate::matfun::conjugate(c, a)?);
    let cb = SpdMatrix::assume(crate::matfun::conjugate(c, b)?);
    let rhs = mean(&ca, &cb, kind, t)?;
    Ok(lhs.sub(&rhs)?.frobenius_norm())
}
