//! Determinant operators and PDE residuals.
//!
//! All operators read a space-time [`Jet2`] in `(t, x_1, …, x_N)` order:
//!
//! * `W^I`: determinant with first row `(u_t, u_1, …, u_N)` and rows
//!   `(u_{ta}, u_{a1}, …, u_{aN})`;
//! * `W^II`: determinant of the full space-time Hessian;
//! * `W_N^II`: determinant of the spatial Hessian; `W_N^II = 0` is the
//!   Monge-Ampère equation.
//!
//! Residuals come with a local scale so tolerances can be applied to
//! `raw / scale` independently of the magnitude of the field.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::det::det;
use crate::error::{Error, Result};
use crate::fields::{ModelParams, PlaneField, Point};
use crate::jet2::{real_pow, Jet2};

/// A residual value together with the magnitude it should be judged against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub raw: f64,
    pub scale: f64,
}

impl Residual {
    pub fn normalized(&self) -> f64 {
        self.raw / self.scale
    }
}

fn matrix_scale(m: &[f64], n: usize) -> f64 {
    let max = m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    (1.0 + max).powi(n as i32)
}

/// The `(N+1)×(N+1)` matrix whose determinant is `W^I`, row-major.
pub fn w1_matrix(jet: &Jet2, params: &ModelParams) -> Result<Vec<f64>> {
    params.check_jet(jet)?;
    let n = params.jet_dim();
    let mut m = vec![0.0; n * n];
    m[..n].copy_from_slice(jet.grad());
    for a in 1..n {
        for j in 0..n {
            m[a * n + j] = jet.hess(a, j);
        }
    }
    Ok(m)
}

/// `W^I`
pub fn w1(jet: &Jet2, params: &ModelParams) -> Result<f64> {
    let m = w1_matrix(jet, params)?;
    Ok(det(&m, params.jet_dim()))
}

/// `W^II`: determinant of the Hessian in `(t, x)`.
pub fn w2(jet: &Jet2, params: &ModelParams) -> Result<f64> {
    params.check_jet(jet)?;
    Ok(det(jet.hess_matrix(), params.jet_dim()))
}

/// Spatial Hessian block, row-major `N × N`.
pub fn spatial_hessian(jet: &Jet2, params: &ModelParams) -> Result<Vec<f64>> {
    params.check_jet(jet)?;
    let n = params.spatial_dim;
    let mut m = Vec::with_capacity(n * n);
    for a in 1..=n {
        for b in 1..=n {
            m.push(jet.hess(a, b));
        }
    }
    Ok(m)
}

/// `W_N^II`, the Monge-Ampère determinant.
pub fn monge_ampere(jet: &Jet2, params: &ModelParams) -> Result<f64> {
    let m = spatial_hessian(jet, params)?;
    Ok(det(&m, params.spatial_dim))
}

/// Arguments handed to a [`GFunction`]: the first spatial derivatives and
/// the products `u·u_ab` for `a <= b`, the invariants the B_N(z)-invariant
/// class is written in.
#[derive(Debug, Clone, PartialEq)]
pub struct GArgs {
    pub grad: Vec<f64>,
    /// `u·u_ab`, upper triangle row-major: `(1,1), (1,2), …, (1,N), (2,2), …`.
    pub u_hess: Vec<f64>,
}

impl GArgs {
    pub fn from_jet(jet: &Jet2, params: &ModelParams) -> Result<Self> {
        params.check_jet(jet)?;
        let n = params.spatial_dim;
        let u = jet.value();
        let grad = jet.grad()[1..].to_vec();
        let mut u_hess = Vec::with_capacity(n * (n + 1) / 2);
        for a in 1..=n {
            for b in a..=n {
                u_hess.push(u * jet.hess(a, b));
            }
        }
        Ok(Self { grad, u_hess })
    }

    pub fn spatial_dim(&self) -> usize {
        self.grad.len()
    }

    /// `u·u_ab` with 1-based indices, either order.
    pub fn u_hess(&self, a: usize, b: usize) -> f64 {
        let n = self.spatial_dim();
        let (a, b) = if a <= b { (a - 1, b - 1) } else { (b - 1, a - 1) };
        // offset of row a in the packed upper triangle
        let start: usize = (0..a).map(|r| n - r).sum();
        self.u_hess[start + (b - a)]
    }
}

/// The arbitrary function `g` of the B_N(z)-invariant class
/// `W^I = u^{1−z−N} g(u_a, u·u_ab)`.
#[derive(Clone)]
pub struct GFunction {
    label: String,
    f: Arc<dyn Fn(&GArgs) -> f64 + Send + Sync>,
}

impl fmt::Debug for GFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("GFunction").field(&self.label).finish()
    }
}

impl GFunction {
    pub fn new(label: impl Into<String>, f: impl Fn(&GArgs) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            label: label.into(),
            f: Arc::new(f),
        }
    }

    pub fn zero() -> Self {
        Self::new("0", |_| 0.0)
    }

    pub fn one() -> Self {
        Self::new("1", |_| 1.0)
    }

    /// The instance reproducing the generalized diffusion equation:
    /// `g = Σ_a [u·u_aa + (2−z−N)·u_a²]`.
    pub fn diffusion(params: &ModelParams) -> Self {
        let gamma = 2.0 - params.z - params.spatial_dim as f64;
        Self::new("diffusion", move |g: &GArgs| {
            (1..=g.spatial_dim())
                .map(|a| g.u_hess(a, a) + gamma * g.grad[a - 1] * g.grad[a - 1])
                .sum()
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn call(&self, args: &GArgs) -> f64 {
        (self.f)(args)
    }
}

/// Which equation a residual refers to.
#[derive(Debug, Clone)]
pub enum ResidualKind {
    /// `W^I = Σ_a ∂_a(u^{2−z−N} u_a)`
    Diffusion,
    /// `W^I = u^{1−z−N} g(u_a, u·u_ab)`
    GeneralInvariant(GFunction),
    /// `W_N^II = 0`
    MongeAmpere,
    /// `φ Δφ = z |∇φ|²` over `(ω_1, ω_2)`
    ReducedFirst,
    /// `φ_11 φ_22 = φ_12²` over `(ω_1, ω_2)`
    ReducedSecond,
    /// `W^I = Δu` for `N = 2`, `z = 0`
    Z0Diffusion,
}

impl ResidualKind {
    pub fn label(&self) -> String {
        match self {
            Self::Diffusion => "diffusion".into(),
            Self::GeneralInvariant(g) => format!("general-invariant({})", g.label()),
            Self::MongeAmpere => "monge-ampere".into(),
            Self::ReducedFirst => "reduced-first".into(),
            Self::ReducedSecond => "reduced-second".into(),
            Self::Z0Diffusion => "z0-diffusion".into(),
        }
    }

    /// Whether the residual is evaluated on a jet over `(ω_1, ω_2)` rather
    /// than over space-time.
    pub fn is_reduced(&self) -> bool {
        matches!(self, Self::ReducedFirst | Self::ReducedSecond)
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "diffusion" => Ok(Self::Diffusion),
            "monge-ampere" | "ma" => Ok(Self::MongeAmpere),
            "z0-diffusion" => Ok(Self::Z0Diffusion),
            "reduced-first" => Ok(Self::ReducedFirst),
            "reduced-second" => Ok(Self::ReducedSecond),
            "general:0" => Ok(Self::GeneralInvariant(GFunction::zero())),
            "general:1" => Ok(Self::GeneralInvariant(GFunction::one())),
            other => Err(Error::Parse(format!("unknown residual kind `{other}`"))),
        }
    }
}

impl fmt::Display for ResidualKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Right-hand side terms `u^{2−z−N} u_aa` and `(2−z−N) u^{1−z−N} u_a²`,
/// summed over `a`, returned as `(sum, sum of magnitudes)`.
fn diffusion_rhs(jet: &Jet2, params: &ModelParams) -> Result<(f64, f64)> {
    let n = params.spatial_dim;
    let u = jet.value();
    let gamma = 2.0 - params.z - n as f64;
    let pow2 = real_pow(u, gamma)?;
    let pow1 = if gamma != 0.0 { real_pow(u, gamma - 1.0)? } else { 0.0 };
    let (mut sum, mut mag) = (0.0, 0.0);
    for a in 1..=n {
        let lap = pow2 * jet.hess(a, a);
        let conv = if gamma != 0.0 { gamma * pow1 * jet.d(a) * jet.d(a) } else { 0.0 };
        sum += lap + conv;
        mag += lap.abs() + conv.abs();
    }
    Ok((sum, mag))
}

/// Residual of the generalized diffusion equation
/// `W^I − Σ_a [u^{2−z−N} u_aa + (2−z−N) u^{1−z−N} u_a²]`.
pub fn diffusion_residual(jet: &Jet2, params: &ModelParams) -> Result<f64> {
    Ok(w1(jet, params)? - diffusion_rhs(jet, params)?.0)
}

/// Residual of `W^I = u^{1−z−N} g(u_a, u·u_ab)`.
pub fn general_residual(jet: &Jet2, params: &ModelParams, g: &GFunction) -> Result<f64> {
    Ok(general(jet, params, g)?.raw)
}

fn general(jet: &Jet2, params: &ModelParams, g: &GFunction) -> Result<Residual> {
    let m = w1_matrix(jet, params)?;
    let n1 = params.jet_dim();
    let p = 1.0 - params.z - params.spatial_dim as f64;
    let gv = g.call(&GArgs::from_jet(jet, params)?);
    let rhs = if gv == 0.0 { 0.0 } else { real_pow(jet.value(), p)? * gv };
    Ok(Residual {
        raw: det(&m, n1) - rhs,
        scale: matrix_scale(&m, n1) + rhs.abs(),
    })
}

/// `W^I − (u_11 + u_22)`, the `z = 0`, `N = 2` diffusion equation.
pub fn z0_diffusion_residual(jet: &Jet2) -> Result<f64> {
    let params = ModelParams { spatial_dim: 2, z: 0.0 };
    Ok(w1(jet, &params)? - jet.hess(1, 1) - jet.hess(2, 2))
}

/// Residuals of the reduced system over `(ω_1, ω_2)`:
/// `φ(φ_11 + φ_22) − z(φ_1² + φ_2²)` and `φ_11 φ_22 − φ_12²`.
pub fn reduced_residuals(phi: &Jet2, z: f64) -> Result<(f64, f64)> {
    if phi.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: phi.dim(),
        });
    }
    let v = phi.value();
    let first = v * (phi.hess(0, 0) + phi.hess(1, 1)) - z * (phi.d(0) * phi.d(0) + phi.d(1) * phi.d(1));
    let second = phi.hess(0, 0) * phi.hess(1, 1) - phi.hess(0, 1) * phi.hess(0, 1);
    Ok((first, second))
}

/// Residuals of the `z = 0` reduced equation for `u = x_1 φ(ω, t)`,
/// `ω = x_1/x_2`, on a jet over `(t, ω)`:
/// returns `(E1, E2, full)` with `E1 = −ω² φ φ_t − (1+ω²)`,
/// `E2 = ω φ_ωω + 2 φ_ω` and `full = −ω² φ φ_t E2 − (1+ω²) E2`.
pub fn z0_decomposed(phi: &Jet2, omega: f64) -> Result<(f64, f64, f64)> {
    if phi.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: phi.dim(),
        });
    }
    let w2 = omega * omega;
    let lhs = -w2 * phi.value() * phi.d(0);
    let e1 = lhs - (1.0 + w2);
    let e2 = omega * phi.hess(1, 1) + 2.0 * phi.d(1);
    Ok((e1, e2, lhs * e2 - (1.0 + w2) * e2))
}

/// Residual of `kind` at `jet`, with its local scale. Reduced kinds expect
/// a jet of dimension 2 and read `z` from `params`.
pub fn evaluate_residual(kind: &ResidualKind, jet: &Jet2, params: &ModelParams) -> Result<Residual> {
    match kind {
        ResidualKind::Diffusion => {
            let m = w1_matrix(jet, params)?;
            let n1 = params.jet_dim();
            let (rhs, mag) = diffusion_rhs(jet, params)?;
            Ok(Residual {
                raw: det(&m, n1) - rhs,
                scale: matrix_scale(&m, n1) + mag,
            })
        }
        ResidualKind::GeneralInvariant(g) => general(jet, params, g),
        ResidualKind::MongeAmpere => {
            let m = spatial_hessian(jet, params)?;
            let n = params.spatial_dim;
            Ok(Residual {
                raw: det(&m, n),
                scale: matrix_scale(&m, n),
            })
        }
        ResidualKind::Z0Diffusion => {
            if params.spatial_dim != 2 {
                return Err(Error::InvalidArgument("z0-diffusion requires N = 2".into()));
            }
            let m = w1_matrix(jet, params)?;
            let lap = jet.hess(1, 1) + jet.hess(2, 2);
            Ok(Residual {
                raw: det(&m, 3) - lap,
                scale: matrix_scale(&m, 3) + jet.hess(1, 1).abs() + jet.hess(2, 2).abs(),
            })
        }
        ResidualKind::ReducedFirst => {
            let (first, _) = reduced_residuals(jet, params.z)?;
            let grad2 = jet.d(0) * jet.d(0) + jet.d(1) * jet.d(1);
            let lap = jet.value() * (jet.hess(0, 0) + jet.hess(1, 1));
            Ok(Residual {
                raw: first,
                scale: 1.0 + lap.abs() + (params.z * grad2).abs(),
            })
        }
        ResidualKind::ReducedSecond => {
            let (_, second) = reduced_residuals(jet, params.z)?;
            Ok(Residual {
                raw: second,
                scale: matrix_scale(jet.hess_matrix(), 2),
            })
        }
    }
}

/// Entire function with real coefficients, evaluated at complex arguments.
#[derive(Debug, Clone, PartialEq)]
pub enum Holomorphic {
    /// `Σ c_k w^k`, coefficients low to high.
    Polynomial(Vec<f64>),
    /// `a·exp(α w)`
    Exponential { a: f64, alpha: f64 },
}

impl Holomorphic {
    /// `f(w)`, `f'(w)`, `f''(w)`.
    pub fn eval(&self, w: Complex64) -> (Complex64, Complex64, Complex64) {
        match self {
            Self::Polynomial(c) => {
                let zero = Complex64::new(0.0, 0.0);
                let (mut v, mut d1, mut d2) = (zero, zero, zero);
                for &ck in c.iter().rev() {
                    d2 = d2 * w + d1 * 2.0;
                    d1 = d1 * w + v;
                    v = v * w + ck;
                }
                (v, d1, d2)
            }
            Self::Exponential { a, alpha } => {
                let e = (w * *alpha).exp() * *a;
                (e, e * *alpha, e * (*alpha * *alpha))
            }
        }
    }

    /// Jet over `(ω_1, ω_2)` of the harmonic function `2·Re f(ω_1 + iω_2)`.
    pub fn harmonic_jet(&self, omega: [f64; 2]) -> Jet2 {
        let (f, f1, f2) = self.eval(Complex64::new(omega[0], omega[1]));
        // Cauchy-Riemann: ∂_1 Re f = Re f', ∂_2 Re f = −Im f',
        // ∂_11 = Re f'', ∂_12 = −Im f'', ∂_22 = −Re f''.
        let grad = vec![2.0 * f1.re, -2.0 * f1.im];
        let (h11, h12) = (2.0 * f2.re, -2.0 * f2.im);
        Jet2::from_parts(2.0 * f.re, grad, vec![h11, h12, h12, -h11]).expect("symmetric by construction")
    }
}

/// `φ` built from a harmonic `φ̃ = 2·Re f(ω_1 + iω_2)` through the local
/// substitution `φ = exp φ̃` (`z = 1`) or `φ = φ̃^{1/(1−z)}` (`z ≠ 1`),
/// which annihilates the first reduced equation.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicPhi {
    pub f: Holomorphic,
    pub z: f64,
}

pub fn build_phi_from_harmonic(f: Holomorphic, z: f64) -> HarmonicPhi {
    HarmonicPhi { f, z }
}

impl HarmonicPhi {
    pub fn eval_omega(&self, omega: [f64; 2]) -> Result<Jet2> {
        let h = self.f.harmonic_jet(omega);
        if self.z == 1.0 {
            Ok(h.exp())
        } else {
            h.powf(1.0 / (1.0 - self.z))
        }
    }
}

impl PlaneField for HarmonicPhi {
    fn eval_plane(&self, p: &Point) -> Result<Jet2> {
        if p.x.len() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: p.x.len(),
            });
        }
        self.eval_omega([p.x[0], p.x[1]])
    }

    fn label(&self) -> String {
        format!("harmonic-phi({:?}, z={})", self.f, self.z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{make_random_polynomial, Coords, FnField, ScalarField};
    use approx::assert_relative_eq;

    fn jet_of(
        params: &ModelParams,
        p: &Point,
        f: impl Fn(&Coords) -> Jet2 + Send + Sync,
    ) -> Jet2 {
        FnField::new("test", move |_: &ModelParams, c: &Coords| Ok(f(c)))
            .evaluate(params, p)
            .unwrap()
    }

    /// Independent 3×3 determinant by the rule of Sarrus.
    fn sarrus(m: &[f64]) -> f64 {
        m[0] * m[4] * m[8] + m[1] * m[5] * m[6] + m[2] * m[3] * m[7]
            - m[2] * m[4] * m[6]
            - m[0] * m[5] * m[7]
            - m[1] * m[3] * m[8]
    }

    #[test]
    fn w1_examples() {
        let p1 = ModelParams::new(1, 2.0).unwrap();
        let j = jet_of(&p1, &Point::new(2.0, [3.0]), |c| &c.t * &c.x[0]);
        assert_eq!(w1(&j, &p1).unwrap(), -2.0);
        let j = jet_of(&p1, &Point::new(2.0, [3.0]), |c| &c.t + &c.x[0]);
        assert_eq!(w1(&j, &p1).unwrap(), 0.0);

        let p2 = ModelParams::new(2, 2.0).unwrap();
        let j = jet_of(&p2, &Point::new(1.0, [1.0, 1.0]), |c| &(&c.t * &c.x[0]) * &c.x[1]);
        let m = w1_matrix(&j, &p2).unwrap();
        assert_eq!(m, vec![1.0, 1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 0.0]);
        assert_eq!(sarrus(&m), 1.0);
        assert_eq!(w1(&j, &p2).unwrap(), 1.0);

        assert!(matches!(w1(&j, &p1), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn w2_examples() {
        let p1 = ModelParams::new(1, 1.0).unwrap();
        let pt = Point::new(0.3, [0.7]);
        let j = jet_of(&p1, &pt, |c| &c.t * &c.t + &c.x[0] * &c.x[0]);
        assert_eq!(w2(&j, &p1).unwrap(), 4.0);
        let j = jet_of(&p1, &pt, |c| &c.t * 2.0 - &c.x[0]);
        assert_eq!(w2(&j, &p1).unwrap(), 0.0);
        let j = jet_of(&p1, &pt, |c| &c.t * &c.x[0]);
        assert_eq!(w2(&j, &p1).unwrap(), -1.0);
    }

    #[test]
    fn monge_ampere_examples() {
        let p = ModelParams::new(2, 1.0).unwrap();
        let pt = Point::new(1.0, [0.4, -0.3]);
        let j = jet_of(&p, &pt, |c| &c.x[0] * &c.x[0] + &c.x[1] * &c.x[1]);
        assert_eq!(monge_ampere(&j, &p).unwrap(), 4.0);
        let j = jet_of(&p, &pt, |c| &c.x[0] * &c.x[1]);
        assert_eq!(monge_ampere(&j, &p).unwrap(), -1.0);
        let j = jet_of(&p, &pt, |c| {
            let s = &c.x[0] + &c.x[1];
            &s * &s
        });
        assert_eq!(monge_ampere(&j, &p).unwrap(), 0.0);
    }

    #[test]
    fn diffusion_residual_examples() {
        // u = q(t), N = 1: both sides vanish.
        for z in [0.5, 2.0, 3.0] {
            let p = ModelParams::new(1, z).unwrap();
            let j = jet_of(&p, &Point::new(1.2, [0.4]), |c| c.t.exp());
            assert_eq!(diffusion_residual(&j, &p).unwrap(), 0.0);
        }

        // z = 0, N = 2, u = x1 ψ1(t) + x2 ψ2(t)
        let p = ModelParams::new(2, 0.0).unwrap();
        let j = jet_of(&p, &Point::new(1.3, [0.2, -0.7]), |c| {
            &c.x[0] * &c.t.sin() + &c.x[1] * &(&c.t * &c.t)
        });
        assert!(diffusion_residual(&j, &p).unwrap().abs() < 1e-14);

        // z = 1, N = 2, u = x1² + x2² at (1, 1, 1). Oracle by hand:
        // u = 2, u_a = 2, u_aa = 2, u_t = u_ta = 0 → W^I = 0,
        // RHS = 2^{-1}(2 + 2) + (−1)·2^{-2}(4 + 4) = 2 − 2 = 0.
        let oracle_w1 = 0.0;
        let oracle_rhs = 0.5 * 4.0 - 0.25 * 8.0;
        let p = ModelParams::new(2, 1.0).unwrap();
        let j = jet_of(&p, &Point::new(1.0, [1.0, 1.0]), |c| &c.x[0] * &c.x[0] + &c.x[1] * &c.x[1]);
        assert_eq!(w1(&j, &p).unwrap(), oracle_w1);
        assert_eq!(diffusion_residual(&j, &p).unwrap(), oracle_w1 - oracle_rhs);
        assert_eq!(diffusion_residual(&j, &p).unwrap(), 0.0);

        // fractional exponent on a non-positive value
        let p = ModelParams::new(2, 0.5).unwrap();
        let j = jet_of(&p, &Point::new(1.0, [0.0, 1.0]), |c| &c.x[0] * -1.0);
        assert!(matches!(diffusion_residual(&j, &p), Err(Error::Domain(_))));
    }

    #[test]
    fn z0_diffusion_agrees_with_general_form() {
        let p = ModelParams::new(2, 0.0).unwrap();
        let f = make_random_polynomial(11, &p, 3, 1.0).unwrap();
        for i in 0..10 {
            let pt = Point::new(0.5 + 0.1 * i as f64, [0.3 - 0.05 * i as f64, 0.8]);
            let j = f.evaluate(&p, &pt).unwrap();
            if j.value().abs() < 1e-3 {
                continue;
            }
            let a = diffusion_residual(&j, &p).unwrap();
            let b = z0_diffusion_residual(&j).unwrap();
            assert!((a - b).abs() <= 1e-14 * (1.0 + a.abs()), "{a} vs {b}");
        }
    }

    #[test]
    fn general_residual_special_cases() {
        let p = ModelParams::new(2, 2.0).unwrap();
        let f = make_random_polynomial(5, &p, 3, 1.0).unwrap();
        let pt = Point::new(1.1, [0.2, 0.5]);
        let j = f.evaluate(&p, &pt).unwrap();
        let u = j.value();
        assert!(u > 0.0, "test point chosen with u > 0, got {u}");
        assert_eq!(general_residual(&j, &p, &GFunction::zero()).unwrap(), w1(&j, &p).unwrap());
        assert_relative_eq!(
            general_residual(&j, &p, &GFunction::one()).unwrap(),
            w1(&j, &p).unwrap() - u.powf(1.0 - 2.0 - 2.0),
            max_relative = 1e-14
        );
    }

    #[test]
    fn diffusion_instance_of_general_class() {
        for (n, z) in [(1usize, 0.5), (2, 2.0), (2, 0.0), (3, 1.5)] {
            let p = ModelParams::new(n, z).unwrap();
            let g = GFunction::diffusion(&p);
            for seed in 0..5 {
                let f = make_random_polynomial(seed, &p, 3, 1.0).unwrap();
                let mut x = vec![0.3; n];
                x[0] = 0.1 * seed as f64;
                let j = f.evaluate(&p, &Point::new(1.0, x)).unwrap();
                if j.value() <= 1e-3 {
                    continue;
                }
                let a = diffusion_residual(&j, &p).unwrap();
                let b = general_residual(&j, &p, &g).unwrap();
                let scale = evaluate_residual(&ResidualKind::Diffusion, &j, &p).unwrap().scale;
                assert!((a - b).abs() <= 1e-14 * scale, "N={n} z={z} seed={seed}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn g_args_packing() {
        let p = ModelParams::new(3, 1.0).unwrap();
        let j = jet_of(&p, &Point::new(1.0, [1.0, 2.0, 3.0]), |c| {
            &(&c.x[0] * &c.x[1]) + &(&c.x[2] * &c.x[2]) + 2.0
        });
        let g = GArgs::from_jet(&j, &p).unwrap();
        let u = j.value();
        assert_eq!(g.u_hess.len(), 6);
        assert_eq!(g.u_hess(1, 2), u);
        assert_eq!(g.u_hess(2, 1), u);
        assert_eq!(g.u_hess(3, 3), 2.0 * u);
        assert_eq!(g.u_hess(1, 1), 0.0);
        assert_eq!(g.u_hess(2, 3), 0.0);
    }

    #[test]
    fn reduced_examples() {
        let w = Jet2::variables(&[0.4, -0.2]);
        let (a, b) = reduced_residuals(&w[0].exp(), 1.0).unwrap();
        assert!(a.abs() < 1e-15 && b == 0.0);
        let (a, b) = reduced_residuals(&w[0], 2.5).unwrap();
        assert_eq!((a, b), (-2.5, 0.0));
        assert!(reduced_residuals(&Jet2::constant(3, 1.0), 1.0).is_err());
    }

    #[test]
    fn harmonic_jet_matches_real_part() {
        let f = Holomorphic::Polynomial(vec![0.0, 0.0, 1.0]);
        let j = f.harmonic_jet([0.7, 0.3]);
        assert_relative_eq!(j.value(), 2.0 * (0.49 - 0.09), max_relative = 1e-15);
        assert_eq!(j.grad(), &[2.0 * 1.4, -2.0 * 0.6]);
        assert_eq!(j.hess(0, 0) + j.hess(1, 1), 0.0);
        let e = Holomorphic::Exponential { a: 1.0, alpha: 1.0 }.harmonic_jet([0.2, 0.5]);
        assert_relative_eq!(e.value(), 2.0 * 0.2f64.exp() * 0.5f64.cos(), max_relative = 1e-15);
    }

    #[test]
    fn harmonic_phi_annihilates_first_reduced_equation() {
        let cases = [
            (Holomorphic::Polynomial(vec![0.0, 1.0]), 1.0),
            (Holomorphic::Polynomial(vec![0.0, 0.0, 1.0]), 1.0),
            (Holomorphic::Exponential { a: 1.0, alpha: 1.0 }, 2.0),
        ];
        for (f, z) in cases {
            let phi = build_phi_from_harmonic(f.clone(), z);
            for i in 0..5 {
                let om = [0.6 + 0.2 * i as f64, 0.1 * i as f64 - 0.2];
                let j = phi.eval_omega(om).unwrap();
                let r = evaluate_residual(&ResidualKind::ReducedFirst, &j, &ModelParams { spatial_dim: 2, z })
                    .unwrap();
                assert!(r.normalized().abs() < 1e-12, "{f:?} z={z}: {}", r.normalized());
            }
        }
        // f(w) = w, z = 1 gives exp(2 ω1)
        let j = build_phi_from_harmonic(Holomorphic::Polynomial(vec![0.0, 1.0]), 1.0)
            .eval_omega([0.3, 0.9])
            .unwrap();
        assert_relative_eq!(j.value(), 0.6f64.exp(), max_relative = 1e-15);
    }
}
