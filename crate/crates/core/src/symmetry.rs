//! Finite transformations of the algebras 𝔄_N(z) ⊃ 𝔅_N(z), their action on
//! fields, the transformation laws of the derivatives, the transformed
//! `W^I` identity, and the commutator table of the generators.
//!
//! Throughout, `A(t)` is the spatial scale of an `X_n` element,
//! `x' = A x`, `dt'/dt = A^z`, `u' = A^λ u`, and `K = A'(t)·A^{−z}` is the
//! coefficient that multiplies `u − x·∇u` in `u'_{t'}`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::det::det;
use crate::error::{Error, Result};
use crate::fields::{Coords, ModelParams, Point, Polynomial, ProfileFunction, ScalarField};
use crate::jet2::Jet2;
use crate::operators::{monge_ampere, w1, w1_matrix};

/// A finite symmetry transformation.
#[derive(Debug, Clone, PartialEq)]
pub enum GroupElement {
    /// Generated by `X_n`; `lambda` is the scaling dimension of `u`.
    Xn { n: i32, eps: f64, lambda: f64 },
    /// Galilei-type shift `x' = x + v t^k`.
    Yk { k: i32, v: Vec<f64> },
    /// `x'_a = x_a + e_a φ_a(t)`.
    Yphi { profiles: Vec<ProfileFunction>, e: Vec<f64> },
    /// Rotation in the `(x_a, x_b)` plane, 1-based indices.
    Rot { a: usize, b: usize, angle: f64 },
}

/// Scalars attached to a transformed point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransformFactors {
    /// Spatial scale `A(t)`; 1 for everything but `X_n`.
    pub a: f64,
    /// `dA/dt`
    pub a_dot: f64,
    pub t_prime: f64,
    /// Factor multiplying `u`, `A^λ`.
    pub u_factor: f64,
    /// `B` with `dA/dt = B·A^{1+zn/(n+1)}`; `n(n+1)ε t^{n−1}` for `z ≠ 0`,
    /// `nε t^{n−1}` for `z = 0`, and 0 for `n ∈ {−1, 0}`.
    pub obstruction_coeff: f64,
    /// `K = A'·A^{−z}`
    pub k: f64,
}

impl TransformFactors {
    fn identity(t: f64) -> Self {
        Self {
            a: 1.0,
            a_dot: 0.0,
            t_prime: t,
            u_factor: 1.0,
            obstruction_coeff: 0.0,
            k: 0.0,
        }
    }
}

impl GroupElement {
    pub fn xn(n: i32, eps: f64) -> Self {
        Self::Xn { n, eps, lambda: 1.0 }
    }

    pub fn check_dims(&self, params: &ModelParams) -> Result<()> {
        let n = params.spatial_dim;
        let mismatch = |found| Error::DimensionMismatch { expected: n, found };
        match self {
            Self::Xn { .. } => Ok(()),
            Self::Yk { v, .. } if v.len() != n => Err(mismatch(v.len())),
            Self::Yphi { profiles, e } if profiles.len() != n || e.len() != n => {
                Err(mismatch(profiles.len().min(e.len())))
            }
            Self::Rot { a, b, .. } => {
                for &i in [a, b] {
                    if i == 0 || i > n {
                        return Err(Error::IndexOutOfRange { index: i, dim: n });
                    }
                }
                if a == b {
                    return Err(Error::InvalidArgument("rotation needs two distinct axes".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// The inverse element: the same variant with the parameter negated.
    pub fn inverse(&self) -> Self {
        match self {
            Self::Xn { n, eps, lambda } => Self::Xn {
                n: *n,
                eps: -eps,
                lambda: *lambda,
            },
            Self::Yk { k, v } => Self::Yk {
                k: *k,
                v: v.iter().map(|x| -x).collect(),
            },
            Self::Yphi { profiles, e } => Self::Yphi {
                profiles: profiles.clone(),
                e: e.iter().map(|x| -x).collect(),
            },
            Self::Rot { a, b, angle } => Self::Rot {
                a: *a,
                b: *b,
                angle: -angle,
            },
        }
    }

    /// `self ∘ other` for two elements of the same one-parameter subgroup.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let incompatible = || Error::InvalidArgument(format!("cannot compose {self} with {other}"));
        match (self, other) {
            (Self::Xn { n, eps, lambda }, Self::Xn { n: m, eps: d, lambda: l }) if n == m && lambda == l => {
                Ok(Self::Xn {
                    n: *n,
                    eps: eps + d,
                    lambda: *lambda,
                })
            }
            (Self::Yk { k, v }, Self::Yk { k: j, v: w }) if k == j && v.len() == w.len() => Ok(Self::Yk {
                k: *k,
                v: v.iter().zip(w).map(|(a, b)| a + b).collect(),
            }),
            (Self::Yphi { profiles, e }, Self::Yphi { profiles: p, e: f }) if profiles == p && e.len() == f.len() => {
                Ok(Self::Yphi {
                    profiles: profiles.clone(),
                    e: e.iter().zip(f).map(|(a, b)| a + b).collect(),
                })
            }
            (Self::Rot { a, b, angle }, Self::Rot { a: c, b: d, angle: w }) if (a, b) == (c, d) => Ok(Self::Rot {
                a: *a,
                b: *b,
                angle: angle + w,
            }),
            (Self::Rot { a, b, angle }, Self::Rot { a: c, b: d, angle: w }) if (a, b) == (d, c) => Ok(Self::Rot {
                a: *a,
                b: *b,
                angle: angle - w,
            }),
            _ => Err(incompatible()),
        }
    }

    /// Scale `A` and its time derivative at time `t`.
    fn scale_at(&self, z: f64, t: f64) -> Result<(f64, f64, f64)> {
        let Self::Xn { n, eps, .. } = *self else {
            return Ok((1.0, 0.0, 0.0));
        };
        let nf = n as f64;
        if z == 0.0 {
            let tn = pow_t(t, n)?;
            let a = (eps * tn).exp();
            let b = if n == 0 { 0.0 } else { nf * eps * pow_t(t, n - 1)? };
            return Ok((a, b * a, b));
        }
        match n {
            -1 => Ok((1.0, 0.0, 0.0)),
            0 => Ok((eps.exp(), 0.0, 0.0)),
            _ => {
                let s = branch_s(z, n, eps, t)?;
                let a = s.powf(-(nf + 1.0) / (z * nf));
                let b = nf * (nf + 1.0) * eps * pow_t(t, n - 1)?;
                Ok((a, b * a.powf(1.0 + z * nf / (nf + 1.0)), b))
            }
        }
    }

    /// Image of a point together with the scalars of the transformation.
    pub fn transform_point(&self, params: &ModelParams, p: &Point) -> Result<(Point, TransformFactors)> {
        params.check_point(p)?;
        let (coords, factor) = self.map_jets(params, &Coords::constant(1, p))?;
        let mut f = TransformFactors::identity(p.t);
        f.t_prime = coords.t.value();
        f.u_factor = factor.value();
        if let Self::Xn { .. } = self {
            let (a, a_dot, b) = self.scale_at(params.z, p.t)?;
            f.a = a;
            f.a_dot = a_dot;
            f.obstruction_coeff = b;
            f.k = a_dot * a.powf(-params.z);
        }
        Ok((coords.point(), f))
    }

    /// Applies the coordinate map to jet coordinates and returns the image
    /// coordinates with the factor multiplying `u`, all as jets over the
    /// same variables as `c`.
    pub fn map_jets(&self, params: &ModelParams, c: &Coords) -> Result<(Coords, Jet2)> {
        self.check_dims(params)?;
        if c.x.len() != params.spatial_dim {
            return Err(Error::DimensionMismatch {
                expected: params.spatial_dim,
                found: c.x.len(),
            });
        }
        let dim = c.jet_dim();
        let one = Jet2::constant(dim, 1.0);
        match self {
            Self::Xn { n, eps, lambda } => {
                let (n, eps, z) = (*n, *eps, params.z);
                let nf = n as f64;
                let (t, a) = if z == 0.0 {
                    (c.t.clone(), (jet_pow_t(&c.t, n)? * eps).exp())
                } else if n == -1 {
                    (c.t.add_scalar(z * eps), one)
                } else if n == 0 {
                    (&c.t * (z * eps).exp(), Jet2::constant(dim, eps.exp()))
                } else {
                    branch_s(z, n, eps, c.t.value())?;
                    let s = (jet_pow_t(&c.t, n)? * (-z * nf * eps)).add_scalar(1.0);
                    (&c.t * &s.powf(-1.0 / nf)?, s.powf(-(nf + 1.0) / (z * nf))?)
                };
                let x = c.x.iter().map(|x| x * &a).collect();
                let factor = if *lambda == 1.0 { a } else { a.powf(*lambda)? };
                Ok((Coords { t, x }, factor))
            }
            Self::Yk { k, v } => {
                let tk = jet_pow_t(&c.t, *k)?;
                let x = c.x.iter().zip(v).map(|(x, &va)| x + &(&tk * va)).collect();
                Ok((Coords { t: c.t.clone(), x }, one))
            }
            Self::Yphi { profiles, e } => {
                let x = c
                    .x
                    .iter()
                    .zip(profiles.iter().zip(e))
                    .map(|(x, (phi, &ea))| x + &(phi.apply(&c.t) * ea))
                    .collect();
                Ok((Coords { t: c.t.clone(), x }, one))
            }
            Self::Rot { a, b, angle } => {
                let (s, co) = angle.sin_cos();
                let (xa, xb) = (&c.x[a - 1], &c.x[b - 1]);
                let mut x = c.x.clone();
                x[a - 1] = xa * co - xb * s;
                x[b - 1] = xa * s + xb * co;
                Ok((Coords { t: c.t.clone(), x }, one))
            }
        }
    }
}

fn pow_t(t: f64, n: i32) -> Result<f64> {
    if t == 0.0 && n < 0 {
        return Err(Error::DivisionByZero(t));
    }
    Ok(t.powi(n))
}

fn jet_pow_t(t: &Jet2, n: i32) -> Result<Jet2> {
    match n {
        0 => Ok(Jet2::constant(t.dim(), 1.0)),
        1 => Ok(t.clone()),
        _ => t.powi(n),
    }
}

/// `s = 1 − z n ε t^n`, rejected unless positive.
fn branch_s(z: f64, n: i32, eps: f64, t: f64) -> Result<f64> {
    let s = 1.0 - z * n as f64 * eps * pow_t(t, n)?;
    if s > 0.0 {
        Ok(s)
    } else {
        Err(Error::Branch(format!(
            "1 - z n eps t^n = {s} <= 0 at t = {t} (n = {n}, eps = {eps}, z = {z})"
        )))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            Self::Xn { n, eps, lambda } => {
                write!(f, "Xn:n={n},eps={eps}")?;
                if *lambda != 1.0 {
                    write!(f, ",lambda={lambda}")?;
                }
                Ok(())
            }
            Self::Yk { k, v } => write!(f, "Yk:k={k},v={}", join(v)),
            Self::Yphi { profiles, e } => {
                let p = profiles.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("|");
                write!(f, "Yphi:e={};profiles={p}", join(e))
            }
            Self::Rot { a, b, angle } => write!(f, "rot:a={a},b={b},angle={angle}"),
        }
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| Error::Parse(format!("expected a number, got `{s}`")))
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(parse_f64).collect()
}

impl FromStr for GroupElement {
    type Err = Error;

    /// `Xn:n=1,eps=0.01[,lambda=1]`, `Yk:k=1,v=0.5,0.0`,
    /// `Yphi:e=1,0;profiles=sin:1,1,0|const:0`, `rot:a=1,b=2,angle=0.3`.
    fn from_str(s: &str) -> Result<Self> {
        let (head, body) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("group element `{s}` lacks `kind:`")))?;
        let int = |v: &str| -> Result<i64> {
            v.trim().parse().map_err(|_| Error::Parse(format!("expected an integer, got `{v}`")))
        };
        match head {
            "Xn" => {
                let (mut n, mut eps, mut lambda) = (None, None, 1.0);
                for kv in body.split(',') {
                    match kv.split_once('=') {
                        Some(("n", v)) => n = Some(int(v)? as i32),
                        Some(("eps", v)) => eps = Some(parse_f64(v)?),
                        Some(("lambda", v)) => lambda = parse_f64(v)?,
                        _ => return Err(Error::Parse(format!("bad Xn field `{kv}`"))),
                    }
                }
                match (n, eps) {
                    (Some(n), Some(eps)) => Ok(Self::Xn { n, eps, lambda }),
                    _ => Err(Error::Parse("Xn needs n= and eps=".into())),
                }
            }
            "Yk" => {
                let rest = body
                    .strip_prefix("k=")
                    .ok_or_else(|| Error::Parse("Yk must start with k=".into()))?;
                let (k, v) = rest
                    .split_once(",v=")
                    .ok_or_else(|| Error::Parse("Yk needs ,v=".into()))?;
                Ok(Self::Yk {
                    k: int(k)? as i32,
                    v: parse_list(v)?,
                })
            }
            "Yphi" => {
                let (e, p) = body
                    .split_once(';')
                    .ok_or_else(|| Error::Parse("Yphi needs e=...;profiles=...".into()))?;
                let e = e.strip_prefix("e=").ok_or_else(|| Error::Parse("Yphi needs e=".into()))?;
                let p = p
                    .strip_prefix("profiles=")
                    .ok_or_else(|| Error::Parse("Yphi needs profiles=".into()))?;
                let profiles = p.split('|').map(str::parse).collect::<Result<Vec<_>>>()?;
                let e = parse_list(e)?;
                if e.len() != profiles.len() {
                    return Err(Error::Parse("Yphi: e and profiles differ in length".into()));
                }
                Ok(Self::Yphi { profiles, e })
            }
            "rot" => {
                let (mut a, mut b, mut angle) = (None, None, None);
                for kv in body.split(',') {
                    match kv.split_once('=') {
                        Some(("a", v)) => a = Some(int(v)? as usize),
                        Some(("b", v)) => b = Some(int(v)? as usize),
                        Some(("angle", v)) => angle = Some(parse_f64(v)?),
                        _ => return Err(Error::Parse(format!("bad rot field `{kv}`"))),
                    }
                }
                match (a, b, angle) {
                    (Some(a), Some(b), Some(angle)) => Ok(Self::Rot { a, b, angle }),
                    _ => Err(Error::Parse("rot needs a=, b= and angle=".into())),
                }
            }
            other => Err(Error::Parse(format!("unknown group element kind `{other}`"))),
        }
    }
}

/// The field `u'` with `u'(g·p) = factor(p)·u(p)`.
#[derive(Debug, Clone)]
pub struct Pushforward<F> {
    pub element: GroupElement,
    inverse: GroupElement,
    pub field: F,
}

pub fn pushforward_field<F: ScalarField>(g: &GroupElement, params: &ModelParams, u: F) -> Result<Pushforward<F>> {
    g.check_dims(params)?;
    Ok(Pushforward {
        element: g.clone(),
        inverse: g.inverse(),
        field: u,
    })
}

impl<F: ScalarField> ScalarField for Pushforward<F> {
    fn eval_coords(&self, params: &ModelParams, coords: &Coords) -> Result<Jet2> {
        // u'(q) = factor_g(p)·u(p) with p = g⁻¹q, and factor_g(p) = 1/factor_{g⁻¹}(q)
        let (pre, factor) = self.inverse.map_jets(params, coords)?;
        self.field.eval_coords(params, &pre)?.div(&factor)
    }

    fn label(&self) -> String {
        format!("{} pushed by {}", self.field.label(), self.element)
    }
}

fn require_xn(g: &GroupElement) -> Result<()> {
    match g {
        GroupElement::Xn { lambda, .. } if *lambda == 1.0 => Ok(()),
        GroupElement::Xn { lambda, .. } => Err(Error::InvalidArgument(format!(
            "derivative laws assume lambda = 1, got {lambda}"
        ))),
        _ => Err(Error::InvalidArgument(format!("expected an Xn element, got {g}"))),
    }
}

fn rel(pred: f64, actual: f64) -> f64 {
    (pred - actual).abs() / pred.abs().max(1.0)
}

/// Largest relative deviation per line of the derivative laws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LawGap {
    /// `u' = A u`
    pub value: f64,
    /// `u'_{t'} = A^{1−z} u_t + K (u − x·∇u)`
    pub u_t: f64,
    /// `u'_{a'} = u_a`
    pub u_x: f64,
    /// `u'_{a'b'} = u_ab / A`
    pub u_xx: f64,
    /// `u'_{t'b'} = A^{−z} u_tb − (H x)_b K / A`
    pub u_tx: f64,
}

impl LawGap {
    pub fn max(&self) -> f64 {
        [self.value, self.u_t, self.u_x, self.u_xx, self.u_tx]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// Which coefficient of `u − x·∇u` to use in the closed-form laws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LawForm {
    /// `K = A'·A^{−z}`, from the chain rule with `dt'/dt = A^z`.
    Derived,
    /// `A'` alone, as the laws are often written; kept as a diagnostic.
    Printed,
}

/// Compares the jet of the pushforward at `g·p` with the closed-form
/// transformed derivatives computed from the jet of `u` at `p`.
pub fn derivative_law_detail(
    g: &GroupElement,
    params: &ModelParams,
    u: &dyn ScalarField,
    p: &Point,
    form: LawForm,
) -> Result<LawGap> {
    require_xn(g)?;
    let (q, f) = g.transform_point(params, p)?;
    let jet = u.evaluate(params, p)?;
    let moved = pushforward_field(g, params, u)?.evaluate(params, &q)?;
    let (a, z, n) = (f.a, params.z, params.spatial_dim);
    let k = match form {
        LawForm::Derived => f.k,
        LawForm::Printed => f.a_dot,
    };
    let x = &p.x;
    let x_grad: f64 = (0..n).map(|i| x[i] * jet.d(i + 1)).sum();
    let hx = |b: usize| -> f64 { (0..n).map(|i| x[i] * jet.hess(i + 1, b)).sum() };

    let mut gap = LawGap {
        value: rel(a * jet.value(), moved.value()),
        u_t: rel(a.powf(1.0 - z) * jet.d(0) + k * (jet.value() - x_grad), moved.d(0)),
        u_x: 0.0,
        u_xx: 0.0,
        u_tx: 0.0,
    };
    for b in 1..=n {
        gap.u_x = gap.u_x.max(rel(jet.d(b), moved.d(b)));
        gap.u_tx = gap
            .u_tx
            .max(rel(a.powf(-z) * jet.hess(0, b) - hx(b) * k / a, moved.hess(0, b)));
        for c in 1..=n {
            gap.u_xx = gap.u_xx.max(rel(jet.hess(b, c) / a, moved.hess(b, c)));
        }
    }
    Ok(gap)
}

/// Largest relative deviation between the pushforward's jet and the
/// derived transformation laws.
pub fn derivative_law_gap(g: &GroupElement, params: &ModelParams, u: &dyn ScalarField, p: &Point) -> Result<f64> {
    Ok(derivative_law_detail(g, params, u, p, LawForm::Derived)?.max())
}

/// The two sides of `W'^I = A^{1−z−N} W^I + u K A^{−N} W_N^II`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityCheck {
    /// `W^I` of the pushforward at the transformed point.
    pub lhs: f64,
    /// `A^{1−z−N} W^I(p)`
    pub main_term: f64,
    /// `u K A^{−N} W_N^II(p)`, zero exactly when the Monge-Ampère
    /// determinant vanishes or `n ∈ {−1, 0}`.
    pub obstruction_term: f64,
    /// Monge-Ampère determinant of `u` at `p`.
    pub monge_ampere: f64,
    /// `|lhs − main − obstruction|`
    pub gap: f64,
    /// Local magnitude: `(1 + max|W'^I entry|)^{N+1} + |main| + |obstruction|`.
    pub scale: f64,
}

impl IdentityCheck {
    pub fn normalized_gap(&self) -> f64 {
        self.gap / self.scale
    }
}

pub fn pushforward_identity(
    g: &GroupElement,
    params: &ModelParams,
    u: &dyn ScalarField,
    p: &Point,
    form: LawForm,
) -> Result<IdentityCheck> {
    require_xn(g)?;
    let (q, f) = g.transform_point(params, p)?;
    let jet = u.evaluate(params, p)?;
    let moved = pushforward_field(g, params, u)?.evaluate(params, &q)?;
    let n = params.spatial_dim as f64;
    let m = w1_matrix(&moved, params)?;
    let lhs = det(&m, params.jet_dim());
    let max = m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let main = f.a.powf(1.0 - params.z - n) * w1(&jet, params)?;
    let ma = monge_ampere(&jet, params)?;
    let k = match form {
        LawForm::Derived => f.k,
        LawForm::Printed => f.a_dot,
    };
    let obstruction = jet.value() * k * f.a.powf(-n) * ma;
    Ok(IdentityCheck {
        lhs,
        main_term: main,
        obstruction_term: obstruction,
        monge_ampere: ma,
        gap: (lhs - main - obstruction).abs(),
        scale: (1.0 + max).powi(params.jet_dim() as i32) + main.abs() + obstruction.abs(),
    })
}

/// Normalized gap of the transformed `W^I` identity.
pub fn pushforward_identity_gap(
    g: &GroupElement,
    params: &ModelParams,
    u: &dyn ScalarField,
    p: &Point,
) -> Result<f64> {
    Ok(pushforward_identity(g, params, u, p, LawForm::Derived)?.normalized_gap())
}

/// Generators of 𝔄_N(z) acting on functions of `(t, x, u)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum AlgebraGenerator {
    /// `z t^{n+1} ∂_t + (n+1) t^n x·∂_x + λ(n+1) t^n u ∂_u`
    X { n: i32, lambda: f64 },
    /// `t^k ∂_{x_a}`, with `k = m + 1/z`; `a` is 1-based.
    Y { k: i32, a: usize },
    /// `x_a ∂_b − x_b ∂_a`
    J { a: usize, b: usize },
}

impl fmt::Display for AlgebraGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::X { n, lambda } if *lambda == 1.0 => write!(f, "X[{n}]"),
            Self::X { n, lambda } => write!(f, "X[{n};{lambda}]"),
            Self::Y { k, a } => write!(f, "Y{a}[{k}]"),
            Self::J { a, b } => write!(f, "J{a}{b}"),
        }
    }
}

/// A linear combination of generators.
pub type Combination = Vec<(f64, AlgebraGenerator)>;

impl AlgebraGenerator {
    pub fn x(n: i32) -> Self {
        Self::X { n, lambda: 1.0 }
    }

    /// `Y_m` along `x_a`; requires `z ≠ 0` and `m + 1/z ∈ ℤ`.
    pub fn y_from_m(m: f64, a: usize, z: f64) -> Result<Self> {
        if z == 0.0 {
            return Err(Error::ZeroDynamicalExponent);
        }
        let k = m + 1.0 / z;
        let r = k.round();
        if (k - r).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("m + 1/z = {k} is not an integer")));
        }
        Ok(Self::Y { k: r as i32, a })
    }

    fn check(&self, n: usize) -> Result<()> {
        let ok = |i: usize| {
            if i == 0 || i > n {
                Err(Error::IndexOutOfRange { index: i, dim: n })
            } else {
                Ok(())
            }
        };
        match *self {
            Self::X { .. } => Ok(()),
            Self::Y { a, .. } => ok(a),
            Self::J { a, b } => ok(a).and(ok(b)),
        }
    }

    /// Coefficients `(ξ^t, ξ^1, …, ξ^N, η)` as jets in `vars = (t, x, u)`.
    pub fn coefficients(&self, params: &ModelParams, vars: &[Jet2]) -> Result<Vec<Jet2>> {
        let n = params.spatial_dim;
        if vars.len() != n + 2 {
            return Err(Error::DimensionMismatch {
                expected: n + 2,
                found: vars.len(),
            });
        }
        self.check(n)?;
        let dim = vars[0].dim();
        let mut xi = vec![Jet2::constant(dim, 0.0); n + 2];
        let t = &vars[0];
        match *self {
            Self::X { n: m, lambda } => {
                let mf = (m + 1) as f64;
                xi[0] = jet_pow_t(t, m + 1)? * params.z;
                let tn = jet_pow_t(t, m)? * mf;
                for a in 1..=n {
                    xi[a] = &tn * &vars[a];
                }
                xi[n + 1] = &tn * &vars[n + 1] * lambda;
            }
            Self::Y { k, a } => xi[a] = jet_pow_t(t, k)?,
            Self::J { a, b } => {
                if a != b {
                    xi[b] = vars[a].clone();
                    xi[a] = -&vars[b];
                }
            }
        }
        Ok(xi)
    }
}

/// A smooth function `F(t, x, u)` evaluated on jets over `N + 2` variables.
pub trait TestFunction: Send + Sync {
    fn eval(&self, vars: &[Jet2]) -> Result<Jet2>;

    fn label(&self) -> String {
        "F".into()
    }
}

impl TestFunction for Polynomial {
    fn eval(&self, vars: &[Jet2]) -> Result<Jet2> {
        self.eval_jet(vars)
    }

    fn label(&self) -> String {
        self.to_string()
    }
}

/// `(gen F)` at `point = (t, x, u)`, with its exact gradient.
pub fn apply_generator(
    gen: &AlgebraGenerator,
    params: &ModelParams,
    f: &dyn TestFunction,
    point: &[f64],
) -> Result<(f64, Vec<f64>)> {
    let vars = Jet2::variables(point);
    let fj = f.eval(&vars)?;
    let xi = gen.coefficients(params, &vars)?;
    let d = point.len();
    let value = (0..d).map(|j| xi[j].value() * fj.d(j)).sum();
    let grad = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| xi[j].d(i) * fj.d(j) + xi[j].value() * fj.hess(i, j))
                .sum()
        })
        .collect();
    Ok((value, grad))
}

/// `(V∘W − W∘V) F` evaluated literally, by applying `V` to the first-order
/// data of `W F`.
pub fn commutator_nested(
    v: &AlgebraGenerator,
    w: &AlgebraGenerator,
    params: &ModelParams,
    f: &dyn TestFunction,
    point: &[f64],
) -> Result<f64> {
    let vars = Jet2::variables(point);
    let xv = v.coefficients(params, &vars)?;
    let xw = w.coefficients(params, &vars)?;
    let (_, gw) = apply_generator(w, params, f, point)?;
    let (_, gv) = apply_generator(v, params, f, point)?;
    let vw: f64 = xv.iter().zip(&gw).map(|(c, g)| c.value() * g).sum();
    let wv: f64 = xw.iter().zip(&gv).map(|(c, g)| c.value() * g).sum();
    Ok(vw - wv)
}

/// `[V, W] F`: the first-order part `Σ_j (V ξ_W^j − W ξ_V^j) F_j` plus the
/// difference of the second-order pairings, which are built symmetrically
/// so they cancel bit for bit.
pub fn commutator_value(
    v: &AlgebraGenerator,
    w: &AlgebraGenerator,
    params: &ModelParams,
    f: &dyn TestFunction,
    point: &[f64],
) -> Result<f64> {
    let vars = Jet2::variables(point);
    let fj = f.eval(&vars)?;
    let xv = v.coefficients(params, &vars)?;
    let xw = w.coefficients(params, &vars)?;
    let d = point.len();
    let apply = |c: &[Jet2], g: &Jet2| -> f64 { (0..d).map(|i| c[i].value() * g.d(i)).sum() };
    let mut first = 0.0;
    for j in 0..d {
        first += (apply(&xv, &xw[j]) - apply(&xw, &xv[j])) * fj.d(j);
    }
    let pair = |a: &[Jet2], b: &[Jet2]| -> f64 {
        let mut s = 0.0;
        for i in 0..d {
            s += fj.hess(i, i) * (a[i].value() * b[i].value());
            for j in i + 1..d {
                s += fj.hess(i, j) * (a[i].value() * b[j].value() + a[j].value() * b[i].value());
            }
        }
        s
    };
    Ok(first + (pair(&xv, &xw) - pair(&xw, &xv)))
}

fn delta(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

/// The commutator table:
/// `[X_n, X_n'] = z(n'−n) X_{n+n'}`, `[X_n, Y_k] = (zk − 1 − n) Y_{n+k}`
/// (i.e. `(zm − n) Y_{m+n}` with `m = k − 1/z`), `[Y, Y] = 0`,
/// `[Y^a_k, J_bc] = δ_ab Y^c_k − δ_ac Y^b_k`, `[X, J] = 0` and the so(N)
/// relations among the `J`.
pub fn expected_commutator(v: &AlgebraGenerator, w: &AlgebraGenerator, z: f64) -> Combination {
    use AlgebraGenerator::*;
    let mut out = Combination::new();
    match (*v, *w) {
        (X { n, lambda }, X { n: m, lambda: l }) if lambda == l => {
            out.push((z * (m - n) as f64, X { n: n + m, lambda }));
        }
        (X { n, .. }, Y { k, a }) => out.push((z * k as f64 - 1.0 - n as f64, Y { k: n + k, a })),
        (Y { .. }, X { .. }) => {
            return expected_commutator(w, v, z).into_iter().map(|(c, g)| (-c, g)).collect();
        }
        (Y { .. }, Y { .. }) | (X { .. }, J { .. }) | (J { .. }, X { .. }) => {}
        (Y { k, a }, J { a: b, b: c }) => {
            out.push((delta(a, b), Y { k, a: c }));
            out.push((-delta(a, c), Y { k, a: b }));
        }
        (J { .. }, Y { .. }) => {
            return expected_commutator(w, v, z).into_iter().map(|(c, g)| (-c, g)).collect();
        }
        (J { a, b }, J { a: c, b: d }) => {
            out.push((delta(b, c), J { a, b: d }));
            out.push((-delta(a, c), J { a: b, b: d }));
            out.push((-delta(b, d), J { a, b: c }));
            out.push((delta(a, d), J { a: b, b: c }));
        }
        (X { .. }, X { .. }) => unreachable!("mixed scaling dimensions are rejected by the caller"),
    }
    out.retain(|(c, _)| *c != 0.0);
    out
}

/// `Σ c_i (G_i F)` at `point`.
pub fn apply_combination(
    comb: &[(f64, AlgebraGenerator)],
    params: &ModelParams,
    f: &dyn TestFunction,
    point: &[f64],
) -> Result<f64> {
    let mut s = 0.0;
    for (c, g) in comb {
        s += c * apply_generator(g, params, f, point)?.0;
    }
    Ok(s)
}

/// `|[V, W] F − expected F|` at `point = (t, x, u)`.
pub fn commutator_gap(
    v: &AlgebraGenerator,
    w: &AlgebraGenerator,
    expected: &[(f64, AlgebraGenerator)],
    params: &ModelParams,
    f: &dyn TestFunction,
    point: &[f64],
) -> Result<f64> {
    if let (AlgebraGenerator::X { lambda, .. }, AlgebraGenerator::X { lambda: l, .. }) = (v, w) {
        if lambda != l {
            return Err(Error::InvalidArgument("generators carry different scaling dimensions".into()));
        }
    }
    let lhs = commutator_value(v, w, params, f, point)?;
    let rhs = apply_combination(expected, params, f, point)?;
    Ok((lhs - rhs).abs())
}

/// All generators of the verification window: `X_n` for `n ∈ ns`,
/// `Y^a_k` for `k ∈ ks` and every axis, `J_ab` for `a < b`.
pub fn generator_window(ns: std::ops::RangeInclusive<i32>, ks: std::ops::RangeInclusive<i32>, n: usize) -> Vec<AlgebraGenerator> {
    let mut out: Vec<AlgebraGenerator> = ns.map(AlgebraGenerator::x).collect();
    for k in ks {
        for a in 1..=n {
            out.push(AlgebraGenerator::Y { k, a });
        }
    }
    for a in 1..=n {
        for b in a + 1..=n {
            out.push(AlgebraGenerator::J { a, b });
        }
    }
    out
}
