//! Space-time points, model constants and evaluatable scalar fields.
//!
//! Coordinates are ordered `(t, x_1, …, x_N)` everywhere: jet index 0 is
//! time, jet index `a` is `x_a`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet2::Jet2;

/// Number of spatial dimensions and the dynamical exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub spatial_dim: usize,
    pub z: f64,
}

impl ModelParams {
    pub fn new(spatial_dim: usize, z: f64) -> Result<Self> {
        if spatial_dim == 0 {
            return Err(Error::InvalidArgument("spatial dimension must be at least 1".into()));
        }
        if !z.is_finite() {
            return Err(Error::InvalidArgument(format!("dynamical exponent {z} is not finite")));
        }
        Ok(Self { spatial_dim, z })
    }

    /// Jet dimension of a space-time field, `N + 1`.
    #[inline]
    pub fn jet_dim(&self) -> usize {
        self.spatial_dim + 1
    }

    pub fn check_point(&self, p: &Point) -> Result<()> {
        if p.x.len() != self.spatial_dim {
            return Err(Error::DimensionMismatch {
                expected: self.spatial_dim,
                found: p.x.len(),
            });
        }
        Ok(())
    }

    pub fn check_jet(&self, jet: &Jet2) -> Result<()> {
        if jet.dim() != self.jet_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.jet_dim(),
                found: jet.dim(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub t: f64,
    pub x: Vec<f64>,
}

impl Point {
    pub fn new(t: f64, x: impl Into<Vec<f64>>) -> Self {
        Self { t, x: x.into() }
    }

    /// `(t, x_1, …, x_N)` as one slice-friendly vector.
    pub fn to_vec(&self) -> Vec<f64> {
        std::iter::once(self.t).chain(self.x.iter().copied()).collect()
    }

    pub fn from_slice(v: &[f64]) -> Self {
        Self {
            t: v[0],
            x: v[1..].to_vec(),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(t={}", self.t)?;
        for (a, x) in self.x.iter().enumerate() {
            write!(f, ", x{}={}", a + 1, x)?;
        }
        write!(f, ")")
    }
}

/// Space-time coordinates expressed as jets over some set of independent
/// variables. Seeding a [`Point`] gives the identity chart; composing with a
/// coordinate map gives the chain rule for free.
#[derive(Debug, Clone, PartialEq)]
pub struct Coords {
    pub t: Jet2,
    pub x: Vec<Jet2>,
}

impl Coords {
    pub fn seeded(p: &Point) -> Self {
        let mut v = Jet2::variables(&p.to_vec());
        let x = v.split_off(1);
        Self { t: v.pop().expect("time coordinate"), x }
    }

    /// Constant jets of dimension `dim` at `p`.
    pub fn constant(dim: usize, p: &Point) -> Self {
        Self {
            t: Jet2::constant(dim, p.t),
            x: p.x.iter().map(|&x| Jet2::constant(dim, x)).collect(),
        }
    }

    pub fn point(&self) -> Point {
        Point {
            t: self.t.value(),
            x: self.x.iter().map(Jet2::value).collect(),
        }
    }

    pub fn jet_dim(&self) -> usize {
        self.t.dim()
    }
}

/// An evaluatable scalar field `u(t, x)`.
pub trait ScalarField: Send + Sync {
    /// Evaluates the field at coordinates given as jets; the result carries
    /// derivatives with respect to whatever variables the jets were seeded in.
    fn eval_coords(&self, params: &ModelParams, coords: &Coords) -> Result<Jet2>;

    fn label(&self) -> String {
        "field".to_string()
    }

    /// Rough distance from `p` to the set where the field or its derivatives
    /// blow up; `None` for fields without such a set.
    fn singular_distance(&self, _params: &ModelParams, _p: &Point) -> Option<f64> {
        None
    }

    /// Value, gradient and Hessian in `(t, x)` at `p`.
    fn evaluate(&self, params: &ModelParams, p: &Point) -> Result<Jet2> {
        params.check_point(p)?;
        self.eval_coords(params, &Coords::seeded(p))
    }
}

impl<F: ScalarField + ?Sized> ScalarField for &F {
    fn eval_coords(&self, params: &ModelParams, coords: &Coords) -> Result<Jet2> {
        (**self).eval_coords(params, coords)
    }
    fn label(&self) -> String {
        (**self).label()
    }
    fn singular_distance(&self, params: &ModelParams, p: &Point) -> Option<f64> {
        (**self).singular_distance(params, p)
    }
}

impl<F: ScalarField + ?Sized> ScalarField for Box<F> {
    fn eval_coords(&self, params: &ModelParams, coords: &Coords) -> Result<Jet2> {
        (**self).eval_coords(params, coords)
    }
    fn label(&self) -> String {
        (**self).label()
    }
    fn singular_distance(&self, params: &ModelParams, p: &Point) -> Option<f64> {
        (**self).singular_distance(params, p)
    }
}

impl<F: ScalarField + ?Sized> ScalarField for Arc<F> {
    fn eval_coords(&self, params: &ModelParams, coords: &Coords) -> Result<Jet2> {
        (**self).eval_coords(params, coords)
    }
    fn label(&self) -> String {
        (**self).label()
    }
    fn singular_distance(&self, params: &ModelParams, p: &Point) -> Option<f64> {
        (**self).singular_distance(params, p)
    }
}

/// Free-function form of [`ScalarField::evaluate`].
pub fn evaluate(field: &dyn ScalarField, params: &ModelParams, p: &Point) -> Result<Jet2> {
    field.evaluate(params, p)
}

/// A field given by a closure over jet coordinates.
pub struct FnField<F> {
    label: String,
    f: F,
}

impl<F> FnField<F>
where
    F: Fn(&ModelParams, &Coords) -> Result<Jet2> + Send + Sync,
{
    pub fn new(label: impl Into<String>, f: F) -> Self {
        Self {
            label: label.into(),
            f,
        }
    }
}

impl<F> ScalarField for FnField<F>
where
    F: Fn(&ModelParams, &Coords) -> Result<Jet2> + Send + Sync,
{
    fn eval_coords(&self, params: &ModelParams, coords: &Coords) -> Result<Jet2> {
        (self.f)(params, coords)
    }
    fn label(&self) -> String {
        self.label.clone()
    }
}

/// A field over the two similarity variables `(ω_1, ω_2)`; `p.x` holds
/// `ω` and `p.t` is the time slice it was taken at (ignored by fields that
/// do not depend on time). Jets have dimension 2.
pub trait PlaneField: Send + Sync {
    fn eval_plane(&self, p: &Point) -> Result<Jet2>;

    fn label(&self) -> String {
        "plane-field".to_string()
    }
}

/// Named smooth univariate profiles standing in for the arbitrary functions
/// `q(t)`, `ψ`, `ψ_1`, `ψ_2` and `φ_a(t)`.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileFunction {
    /// Coefficients from low to high degree.
    Polynomial(Vec<f64>),
    /// `a·exp(b·t)`
    Exponential { a: f64, b: f64 },
    /// `a·sin(b·t + c)`
    Sine { a: f64, b: f64, c: f64 },
    Constant(f64),
}

impl ProfileFunction {
    /// Value, first and second derivative at `t`.
    pub fn eval(&self, t: f64) -> (f64, f64, f64) {
        match self {
            Self::Polynomial(c) => {
                let (mut v, mut d1, mut d2) = (0.0, 0.0, 0.0);
                for &ck in c.iter().rev() {
                    d2 = d2 * t + 2.0 * d1;
                    d1 = d1 * t + v;
                    v = v * t + ck;
                }
                (v, d1, d2)
            }
            Self::Exponential { a, b } => {
                let e = a * (b * t).exp();
                (e, b * e, b * b * e)
            }
            Self::Sine { a, b, c } => {
                let (s, co) = (b * t + c).sin_cos();
                (a * s, a * b * co, -a * b * b * s)
            }
            Self::Constant(c) => (*c, 0.0, 0.0),
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        self.eval(t).0
    }

    /// Composes the profile with a jet argument.
    pub fn apply(&self, arg: &Jet2) -> Jet2 {
        let (v, d1, d2) = self.eval(arg.value());
        arg.univariate(v, d1, d2)
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number `{v}`")))
        })
        .collect()
}

impl FromStr for ProfileFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (tag, body) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("profile `{s}` lacks a `tag:` prefix")))?;
        let v = parse_list(body)?;
        let want = |n: usize| {
            if v.len() == n {
                Ok(())
            } else {
                Err(Error::Parse(format!("profile `{tag}` takes {n} values, got {}", v.len())))
            }
        };
        match tag {
            "poly" => {
                if v.is_empty() {
                    return Err(Error::Parse("empty polynomial".into()));
                }
                Ok(Self::Polynomial(v))
            }
            "exp" => want(2).map(|_| Self::Exponential { a: v[0], b: v[1] }),
            "sin" => want(3).map(|_| Self::Sine {
                a: v[0],
                b: v[1],
                c: v[2],
            }),
            "const" => want(1).map(|_| Self::Constant(v[0])),
            other => Err(Error::Parse(format!("unknown profile tag `{other}`"))),
        }
    }
}

impl fmt::Display for ProfileFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Polynomial(c) => {
                let s: Vec<String> = c.iter().map(|v| v.to_string()).collect();
                write!(f, "poly:{}", s.join(","))
            }
            Self::Exponential { a, b } => write!(f, "exp:{a},{b}"),
            Self::Sine { a, b, c } => write!(f, "sin:{a},{b},{c}"),
            Self::Constant(c) => write!(f, "const:{c}"),
        }
    }
}

/// `coeff · Π_i v_i^{exps[i]}`
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub coeff: f64,
    pub exps: Vec<u32>,
}

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }
}

/// Multivariate polynomial with real coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    nvars: usize,
    terms: Vec<Monomial>,
}

impl Polynomial {
    pub fn new(nvars: usize, terms: Vec<Monomial>) -> Result<Self> {
        if let Some(m) = terms.iter().find(|m| m.exps.len() != nvars) {
            return Err(Error::DimensionMismatch {
                expected: nvars,
                found: m.exps.len(),
            });
        }
        Ok(Self { nvars, terms })
    }

    /// Polynomial with coefficients uniform in `[-bound, bound]` over every
    /// monomial of total degree `<= degree`, reproducible from `seed`.
    pub fn random(nvars: usize, degree: u32, bound: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let terms = exponent_tuples(nvars, degree)
            .into_iter()
            .map(|exps| Monomial {
                coeff: rng.gen_range(-bound..=bound),
                exps,
            })
            .collect();
        Self { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn eval(&self, v: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|m| {
                m.exps
                    .iter()
                    .zip(v)
                    .fold(m.coeff, |acc, (&e, &x)| acc * x.powi(e as i32))
            })
            .sum()
    }

    pub fn eval_jet(&self, v: &[Jet2]) -> Result<Jet2> {
        if v.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: v.len(),
            });
        }
        let dim = v.first().map(Jet2::dim).unwrap_or(1);
        let mut acc = Jet2::constant(dim, 0.0);
        for m in &self.terms {
            let mut term = Jet2::constant(dim, m.coeff);
            for (&e, x) in m.exps.iter().zip(v) {
                if e > 0 {
                    term = &term * &x.powi(e as i32)?;
                }
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// Parses `coeff*e1.e2.….en` terms joined by `+`, e.g. `1*2.0+-0.5*0.1`.
    pub fn parse_terms(s: &str, nvars: usize) -> Result<Self> {
        let mut terms = Vec::new();
        for part in s.split('+').map(str::trim).filter(|p| !p.is_empty()) {
            let (c, e) = part
                .split_once('*')
                .ok_or_else(|| Error::Parse(format!("term `{part}` is not `coeff*exponents`")))?;
            let coeff = c
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad coefficient `{c}`")))?;
            let exps = e
                .split('.')
                .map(|d| {
                    d.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad exponent `{d}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            terms.push(Monomial { coeff, exps });
        }
        if terms.is_empty() {
            return Err(Error::Parse("polynomial has no terms".into()));
        }
        Self::new(nvars, terms).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|m| {
                let e: Vec<String> = m.exps.iter().map(|e| e.to_string()).collect();
                format!("{}*{}", m.coeff, e.join("."))
            })
            .collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// All exponent tuples over `nvars` variables with total degree `<= degree`,
/// in graded order.
pub fn exponent_tuples(nvars: usize, degree: u32) -> Vec<Vec<u32>> {
    fn rec(prefix: &mut Vec<u32>, left: usize, budget: u32, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(prefix.clone());
            return;
        }
        for e in 0..=budget {
            prefix.push(e);
            rec(prefix, left - 1, budget - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(nvars), nvars, degree, &mut out);
    out.sort_by_key(|e| (e.iter().sum::<u32>(), std::cmp::Reverse(e.clone())));
    out
}

/// Random polynomial field in `(t, x_1, …, x_N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomPolynomialField {
    pub seed: u64,
    pub degree: u32,
    pub poly: Polynomial,
}

impl RandomPolynomialField {
    pub fn new(seed: u64, params: &ModelParams, degree: u32, coeff_bound: f64) -> Result<Self> {
        if degree < 1 {
            return Err(Error::InvalidArgument("degree must be at least 1".into()));
        }
        if !(coeff_bound > 0.0) {
            return Err(Error::InvalidArgument("coefficient bound must be positive".into()));
        }
        Ok(Self {
            seed,
            degree,
            poly: Polynomial::random(params.jet_dim(), degree, coeff_bound, seed),
        })
    }
}

pub fn make_random_polynomial(
    seed: u64,
    params: &ModelParams,
    degree: u32,
    coeff_bound: f64,
) -> Result<RandomPolynomialField> {
    RandomPolynomialField::new(seed, params, degree, coeff_bound)
}

impl ScalarField for RandomPolynomialField {
    fn eval_coords(&self, params: &ModelParams, coords: &Coords) -> Result<Jet2> {
        if coords.x.len() != params.spatial_dim || self.poly.nvars() != params.jet_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.poly.nvars(),
                found: coords.x.len() + 1,
            });
        }
        let mut v = Vec::with_capacity(coords.x.len() + 1);
        v.push(coords.t.clone());
        v.extend(coords.x.iter().cloned());
        self.poly.eval_jet(&v)
    }

    fn label(&self) -> String {
        format!("random:deg={},seed={}", self.degree, self.seed)
    }
}
