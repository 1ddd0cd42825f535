//! Closed-form solution families of the generalized diffusion equation and
//! of the Monge-Ampère equation.
//!
//! Each family is a [`ScalarField`] with a fixed `(z, N)` requirement, a
//! domain predicate (evaluation outside raises [`Error::Domain`]) and the
//! set of residuals it must annihilate.

use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Error, Result};
use crate::fields::{Coords, ModelParams, PlaneField, Point, Polynomial, ProfileFunction, ScalarField};
use crate::jet2::Jet2;
use crate::operators::ResidualKind;

/// Smallest admissible `r` and `cos((1−z)θ)` for the polar families.
pub const POLAR_MARGIN: f64 = 1e-6;
/// Smallest admissible radicand for [`SolutionFamily::Z0Sqrt`].
pub const RADICAND_MARGIN: f64 = 1e-10;
/// Smallest admissible `|x_a|` where a family divides by `x_a`.
pub const RATIO_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum SolutionFamily {
    /// `u = c x e^{−t} + q(t)`; `N = 1`, `z = 0`.
    OneDimZ0 { c: f64, q: ProfileFunction },
    /// `u = c x + q(t)`; `N = 1`, `z = 1`.
    OneDimZ1 { c: f64, q: ProfileFunction },
    /// `u = q(t)`; `N = 1`, any `z`.
    OneDimGeneric { q: ProfileFunction },
    /// `u = c·sqrt((x_1 + e_1 t^{n+1})² + (x_2 + e_2 t^{n+1})²)`; `N = 2`, `z = 1`.
    RadialZ1 { c: f64, e1: f64, e2: f64, n: i32 },
    /// `u = 2c·r·cos((1−z)θ)^{1/(1−z)}` in polar coordinates of
    /// `(x_1 + e_1 t^{(n+1)/z}, x_2 + e_2 t^{(n+1)/z})`; `N = 2`.
    GeneralZ { c: f64, e1: f64, e2: f64, n: i32, z: f64 },
    /// `u = sqrt(−2t(x_1² + x_2²) + ψ(x_1/x_2) x_1²)`; `N = 2`, `z = 0`.
    Z0Sqrt { psi: ProfileFunction },
    /// `u = x_1 ψ_1(t) + x_2 ψ_2(t)`; `N = 2`, `z = 0`.
    Z0Linear { psi1: ProfileFunction, psi2: ProfileFunction },
    /// The polar family with `x_a + e_a φ_a(t)` in place of
    /// `x_a + e_a t^{(n+1)/z}`; `N = 2`, `z ≠ 1`.
    GeneralYphi {
        c: f64,
        e1: f64,
        e2: f64,
        z: f64,
        phi1: ProfileFunction,
        phi2: ProfileFunction,
    },
    /// `u = x_1 φ(x_1/x_2, …, x_1/x_N)`, a time-independent solution of the
    /// N-dimensional Monge-Ampère equation.
    MAOnly { n_dim: usize, phi: Polynomial },
    /// `base` with `x_a` replaced by `x_a + e_a φ_a(t)`.
    Shifted {
        base: Box<SolutionFamily>,
        profiles: Vec<ProfileFunction>,
        e: Vec<f64>,
    },
}

fn c(dim: usize, v: f64) -> Jet2 {
    Jet2::constant(dim, v)
}

/// `2c·r·cos((1−z)θ)^{1/(1−z)}` at `(X, Y)`.
fn polar(cc: f64, z: f64, x: &Jet2, y: &Jet2) -> Result<Jet2> {
    let r = (x * x + y * y).sqrt()?;
    if r.value() <= POLAR_MARGIN {
        return Err(domain(format!("r = {} too close to the origin", r.value())));
    }
    if z == 1.0 {
        return Ok(r * (2.0 * cc));
    }
    let theta = Jet2::atan2(y, x)?;
    let cs = (theta * (1.0 - z)).cos();
    if cs.value() <= POLAR_MARGIN {
        return Err(domain(format!("cos((1-z)θ) = {} outside the sector", cs.value())));
    }
    Ok(&r * &cs.powf(1.0 / (1.0 - z))? * (2.0 * cc))
}

fn time_power(t: &Jet2, p: f64) -> Result<Jet2> {
    if p == 0.0 {
        return Ok(c(t.dim(), 1.0));
    }
    t.powf(p)
}

impl SolutionFamily {
    /// Spatial dimension the family lives in.
    pub fn spatial_dim(&self) -> usize {
        match self {
            Self::OneDimZ0 { .. } | Self::OneDimZ1 { .. } | Self::OneDimGeneric { .. } => 1,
            Self::MAOnly { n_dim, .. } => *n_dim,
            Self::Shifted { base, .. } => base.spatial_dim(),
            _ => 2,
        }
    }

    /// The dynamical exponent the family requires, if any.
    pub fn required_z(&self) -> Option<f64> {
        match self {
            Self::OneDimZ0 { .. } | Self::Z0Sqrt { .. } | Self::Z0Linear { .. } => Some(0.0),
            Self::OneDimZ1 { .. } | Self::RadialZ1 { .. } => Some(1.0),
            Self::GeneralZ { z, .. } | Self::GeneralYphi { z, .. } => Some(*z),
            Self::OneDimGeneric { .. } | Self::MAOnly { .. } => None,
            Self::Shifted { base, .. } => base.required_z(),
        }
    }

    /// Parameters the family is checked with by default.
    pub fn default_params(&self) -> ModelParams {
        ModelParams {
            spatial_dim: self.spatial_dim(),
            z: self.required_z().unwrap_or(2.0),
        }
    }

    pub fn check_params(&self, params: &ModelParams) -> Result<()> {
        if params.spatial_dim != self.spatial_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.spatial_dim(),
                found: params.spatial_dim,
            });
        }
        if let Some(z) = self.required_z() {
            if params.z != z {
                return Err(Error::InvalidArgument(format!("{self} requires z = {z}, got z = {}", params.z)));
            }
        }
        Ok(())
    }

    /// Checks the family's own parameters.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        match self {
            Self::RadialZ1 { c, .. } if !(*c > 0.0) => bad(format!("c must be positive, got {c}")),
            Self::GeneralZ { c, z, .. } if !(*c > 0.0) || *z == 0.0 || *z == 1.0 => {
                bad(format!("general-z needs c > 0 and z ∉ {{0, 1}}, got c = {c}, z = {z}"))
            }
            Self::GeneralYphi { c, z, .. } if !(*c > 0.0) || *z == 1.0 => {
                bad(format!("general-yphi needs c > 0 and z ≠ 1, got c = {c}, z = {z}"))
            }
            Self::MAOnly { n_dim, phi } if *n_dim < 2 || phi.nvars() != n_dim - 1 => {
                bad(format!("ma-only needs N ≥ 2 and φ in N − 1 = {} ratios", n_dim.saturating_sub(1)))
            }
            Self::Shifted { base, profiles, e } => {
                if base.spatial_dim() != profiles.len() || e.len() != profiles.len() {
                    return Err(Error::DimensionMismatch {
                        expected: base.spatial_dim(),
                        found: profiles.len().min(e.len()),
                    });
                }
                base.validate()
            }
            _ => Ok(()),
        }
    }

    /// Residuals the family must annihilate.
    pub fn designated_residuals(&self) -> Vec<ResidualKind> {
        match self {
            Self::OneDimZ0 { .. } | Self::OneDimZ1 { .. } | Self::OneDimGeneric { .. } => {
                vec![ResidualKind::Diffusion]
            }
            Self::MAOnly { .. } => vec![ResidualKind::MongeAmpere],
            Self::Shifted { base, .. } => base.designated_residuals(),
            _ => vec![ResidualKind::Diffusion, ResidualKind::MongeAmpere],
        }
    }

    /// Designated residuals plus those implied by the form: Monge-Ampère
    /// for the one-dimensional families and the `z = 0` diffusion form for
    /// the two-dimensional `z = 0` families.
    pub fn checked_residuals(&self) -> Vec<ResidualKind> {
        let mut kinds = self.designated_residuals();
        if self.spatial_dim() == 1 {
            kinds.push(ResidualKind::MongeAmpere);
        }
        if self.spatial_dim() == 2 && self.required_z() == Some(0.0) {
            kinds.push(ResidualKind::Z0Diffusion);
        }
        kinds
    }

    fn eval_inner(&self, coords: &Coords) -> Result<Jet2> {
        let d = coords.jet_dim();
        let (t, x) = (&coords.t, &coords.x);
        match self {
            Self::OneDimZ0 { c: cc, q } => Ok(&(&x[0] * &(-t).exp()) * *cc + q.apply(t)),
            Self::OneDimZ1 { c: cc, q } => Ok(&x[0] * *cc + q.apply(t)),
            Self::OneDimGeneric { q } => Ok(q.apply(t)),
            Self::RadialZ1 { c: cc, e1, e2, n } => {
                let tn = time_power(t, (*n + 1) as f64)?;
                let xx = &x[0] + &(&tn * *e1);
                let yy = &x[1] + &(&tn * *e2);
                let r = (&xx * &xx + &yy * &yy).sqrt()?;
                if r.value() <= POLAR_MARGIN {
                    return Err(domain(format!("r = {} too close to the origin", r.value())));
                }
                Ok(r * *cc)
            }
            Self::GeneralZ { c: cc, e1, e2, n, z } => {
                let tp = time_power(t, (*n + 1) as f64 / z)?;
                polar(*cc, *z, &(&x[0] + &(&tp * *e1)), &(&x[1] + &(&tp * *e2)))
            }
            Self::GeneralYphi { c: cc, e1, e2, z, phi1, phi2 } => polar(
                *cc,
                *z,
                &(&x[0] + &(phi1.apply(t) * *e1)),
                &(&x[1] + &(phi2.apply(t) * *e2)),
            ),
            Self::Z0Sqrt { psi } => {
                if x[1].value().abs() <= RATIO_MARGIN {
                    return Err(domain("x2 = 0"));
                }
                let x1s = &x[0] * &x[0];
                let omega = x[0].div(&x[1])?;
                let rad = &(&(&x1s + &(&x[1] * &x[1])) * t) * -2.0 + &psi.apply(&omega) * &x1s;
                if rad.value() <= RADICAND_MARGIN {
                    return Err(domain(format!("radicand {} <= 0", rad.value())));
                }
                rad.sqrt()
            }
            Self::Z0Linear { psi1, psi2 } => Ok(&x[0] * &psi1.apply(t) + &x[1] * &psi2.apply(t)),
            Self::MAOnly { phi, .. } => {
                let mut ratios = Vec::with_capacity(x.len() - 1);
                for xa in &x[1..] {
                    if xa.value().abs() <= RATIO_MARGIN {
                        return Err(domain("division by a vanishing coordinate"));
                    }
                    ratios.push(x[0].div(xa)?);
                }
                Ok(&x[0] * &phi.eval_jet(&ratios)?)
            }
            Self::Shifted { base, profiles, e } => {
                let x = x
                    .iter()
                    .zip(profiles.iter().zip(e))
                    .map(|(xa, (p, &ea))| xa + &(p.apply(t) * ea))
                    .collect();
                base.eval_inner(&Coords { t: t.clone(), x })
            }
        }
        .map(|j| {
            debug_assert_eq!(j.dim(), d);
            j
        })
    }

    /// Full second-order jet at `p`.
    pub fn evaluate_solution(&self, params: &ModelParams, p: &Point) -> Result<Jet2> {
        self.evaluate(params, p)
    }
}

impl ScalarField for SolutionFamily {
    fn eval_coords(&self, params: &ModelParams, coords: &Coords) -> Result<Jet2> {
        self.check_params(params)?;
        if coords.x.len() != params.spatial_dim {
            return Err(Error::DimensionMismatch {
                expected: params.spatial_dim,
                found: coords.x.len(),
            });
        }
        self.eval_inner(coords)
    }

    fn label(&self) -> String {
        self.to_string()
    }

    fn singular_distance(&self, params: &ModelParams, p: &Point) -> Option<f64> {
        let (t, x) = (p.t, &p.x);
        let polar_dist = |xx: f64, yy: f64, z: f64| {
            let r = xx.hypot(yy);
            if z == 1.0 {
                return r;
            }
            let edge = (std::f64::consts::FRAC_PI_2 / (1.0 - z).abs()).min(std::f64::consts::PI);
            let gap = (edge - yy.atan2(xx).abs()).max(0.0);
            r.min(r * gap.min(std::f64::consts::FRAC_PI_2).sin())
        };
        match self {
            Self::OneDimZ0 { .. } | Self::OneDimZ1 { .. } | Self::OneDimGeneric { .. } | Self::Z0Linear { .. } => None,
            Self::RadialZ1 { e1, e2, n, .. } => {
                let tn = t.powi(n + 1);
                Some((x[0] + e1 * tn).hypot(x[1] + e2 * tn))
            }
            Self::GeneralZ { e1, e2, n, z, .. } => {
                let tp = if *n == -1 { 1.0 } else { t.powf((*n + 1) as f64 / z) };
                Some(polar_dist(x[0] + e1 * tp, x[1] + e2 * tp, *z))
            }
            Self::GeneralYphi { e1, e2, z, phi1, phi2, .. } => {
                Some(polar_dist(x[0] + e1 * phi1.eval(t).0, x[1] + e2 * phi2.eval(t).0, *z))
            }
            Self::Z0Sqrt { .. } => {
                let u = self.evaluate(params, p).ok()?;
                let g = (0..=2).map(|i| u.d(i).powi(2)).sum::<f64>().sqrt();
                Some(x[1].abs().min(u.value() / (2.0 * g)))
            }
            Self::MAOnly { .. } => x[1..].iter().map(|v| v.abs()).reduce(f64::min),
            Self::Shifted { base, profiles, e } => {
                let x = x
                    .iter()
                    .zip(profiles.iter().zip(e))
                    .map(|(xa, (pr, &ea))| xa + ea * pr.eval(t).0)
                    .collect::<Vec<_>>();
                base.singular_distance(params, &Point::new(t, x))
            }
        }
    }
}

/// `fam` with `x_a` replaced by `x_a + e_a φ_a(t)`.
pub fn shift_by_yphi(fam: &SolutionFamily, profiles: Vec<ProfileFunction>, e: Vec<f64>) -> Result<SolutionFamily> {
    let out = SolutionFamily::Shifted {
        base: Box::new(fam.clone()),
        profiles,
        e,
    };
    out.validate()?;
    Ok(out)
}

/// A field restricted to the similarity variables of the `z ≠ 0` ansatz:
/// `φ(ω) = t^{−(n+1)/z} u(t, ω t^{(n+1)/z})` at a fixed time `p.t`.
pub struct AnsatzSlice<F> {
    pub field: F,
    pub params: ModelParams,
    /// `(n + 1)/z`
    pub exponent: f64,
}

impl<F: ScalarField> AnsatzSlice<F> {
    pub fn new(field: F, params: ModelParams, n: i32) -> Result<Self> {
        if params.spatial_dim != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: params.spatial_dim,
            });
        }
        if params.z == 0.0 {
            return Err(Error::ZeroDynamicalExponent);
        }
        Ok(Self {
            field,
            params,
            exponent: (n + 1) as f64 / params.z,
        })
    }
}

impl<F: ScalarField> PlaneField for AnsatzSlice<F> {
    fn eval_plane(&self, p: &Point) -> Result<Jet2> {
        if !(p.t > 0.0) {
            return Err(domain(format!("ansatz needs t > 0, got {}", p.t)));
        }
        let tau = p.t.powf(self.exponent);
        let w = Jet2::variables(&p.x);
        if w.len() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: w.len(),
            });
        }
        let coords = Coords {
            t: Jet2::constant(2, p.t),
            x: w.iter().map(|wa| wa * tau).collect(),
        };
        Ok(self.field.eval_coords(&self.params, &coords)? * (1.0 / tau))
    }

    fn label(&self) -> String {
        format!("ansatz({})", self.field.label())
    }
}

/// A `N = 2`, `z = 0` field in the variables of the ansatz `u = x_1 φ(t, ω)`,
/// `ω = x_1/x_2`, taken along the line of fixed `x_2`. Jets are over `(t, ω)`.
pub struct Z0Slice<F> {
    pub field: F,
    pub x2: f64,
}

impl<F: ScalarField> Z0Slice<F> {
    pub fn eval(&self, t: f64, omega: f64) -> Result<Jet2> {
        if self.x2.abs() <= RATIO_MARGIN || omega.abs() <= RATIO_MARGIN {
            return Err(domain("ansatz needs x1, x2 ≠ 0"));
        }
        let v = Jet2::variables(&[t, omega]);
        let x1 = &v[1] * self.x2;
        let coords = Coords {
            t: v[0].clone(),
            x: vec![x1.clone(), Jet2::constant(2, self.x2)],
        };
        let params = ModelParams { spatial_dim: 2, z: 0.0 };
        self.field.eval_coords(&params, &coords)?.div(&x1)
    }
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for SolutionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::OneDimZ0 { c, q } => write!(f, "one-dim-z0:c={c},q={q}"),
            Self::OneDimZ1 { c, q } => write!(f, "one-dim-z1:c={c},q={q}"),
            Self::OneDimGeneric { q } => write!(f, "one-dim:q={q}"),
            Self::RadialZ1 { c, e1, e2, n } => write!(f, "radial-z1:c={c},e1={e1},e2={e2},n={n}"),
            Self::GeneralZ { c, e1, e2, n, z } => write!(f, "general-z:c={c},e1={e1},e2={e2},n={n},z={z}"),
            Self::Z0Sqrt { psi } => write!(f, "z0-sqrt:psi={psi}"),
            Self::Z0Linear { psi1, psi2 } => write!(f, "z0-linear:psi1={psi1},psi2={psi2}"),
            Self::GeneralYphi { c, e1, e2, z, phi1, phi2 } => {
                write!(f, "general-yphi:c={c},e1={e1},e2={e2},z={z},phi1={phi1},phi2={phi2}")
            }
            Self::MAOnly { n_dim, phi } => write!(f, "ma-only:N={n_dim},phi={phi}"),
            Self::Shifted { base, profiles, e } => {
                let p = profiles.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("|");
                write!(f, "{base}+Yphi:e={};profiles={p}", join(e))
            }
        }
    }
}

/// Splits `k1=v1,k2=v2,…` where values may themselves contain commas:
/// a piece without `=` continues the previous value.
fn split_kv(body: &str) -> Result<Vec<(String, String)>> {
    let mut out: Vec<(String, String)> = Vec::new();
    for piece in body.split(',') {
        match piece.split_once('=') {
            Some((k, v)) if !k.contains(':') => out.push((k.trim().to_string(), v.to_string())),
            _ => match out.last_mut() {
                Some((_, v)) => {
                    v.push(',');
                    v.push_str(piece);
                }
                None => return Err(Error::Parse(format!("expected key=value, got `{piece}`"))),
            },
        }
    }
    Ok(out)
}

struct Fields {
    name: &'static str,
    kv: Vec<(String, String)>,
}

impl Fields {
    fn take(&mut self, key: &str) -> Result<String> {
        let i = self
            .kv
            .iter()
            .position(|(k, _)| k == key)
            .ok_or_else(|| Error::Parse(format!("{} needs `{key}=`", self.name)))?;
        Ok(self.kv.remove(i).1)
    }

    fn num(&mut self, key: &str) -> Result<f64> {
        let v = self.take(key)?;
        v.trim()
            .parse()
            .map_err(|_| Error::Parse(format!("{}: `{key}` expects a number, got `{v}`", self.name)))
    }

    fn int(&mut self, key: &str) -> Result<i32> {
        let v = self.take(key)?;
        v.trim()
            .parse()
            .map_err(|_| Error::Parse(format!("{}: `{key}` expects an integer, got `{v}`", self.name)))
    }

    fn profile(&mut self, key: &str) -> Result<ProfileFunction> {
        self.take(key)?.parse()
    }

    fn done(self) -> Result<()> {
        match self.kv.first() {
            None => Ok(()),
            Some((k, _)) => Err(Error::Parse(format!("{}: unknown field `{k}`", self.name))),
        }
    }
}

impl FromStr for SolutionFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some((base, shift)) = s.split_once("+Yphi:") {
            let base: SolutionFamily = base.parse()?;
            let g: crate::symmetry::GroupElement = format!("Yphi:{shift}").parse()?;
            let crate::symmetry::GroupElement::Yphi { profiles, e } = g else {
                unreachable!("parsed as Yphi")
            };
            return shift_by_yphi(&base, profiles, e);
        }
        let (head, body) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("family `{s}` lacks `name:`")))?;
        let names = [
            "one-dim-z0",
            "one-dim-z1",
            "one-dim",
            "radial-z1",
            "general-z",
            "z0-sqrt",
            "z0-linear",
            "general-yphi",
            "ma-only",
        ];
        let name = *names
            .iter()
            .find(|n| **n == head)
            .ok_or_else(|| Error::Parse(format!("unknown family `{head}`")))?;
        let mut f = Fields {
            name,
            kv: split_kv(body)?,
        };
        let fam = match name {
            "one-dim-z0" => Self::OneDimZ0 {
                c: f.num("c")?,
                q: f.profile("q")?,
            },
            "one-dim-z1" => Self::OneDimZ1 {
                c: f.num("c")?,
                q: f.profile("q")?,
            },
            "one-dim" => Self::OneDimGeneric { q: f.profile("q")? },
            "radial-z1" => Self::RadialZ1 {
                c: f.num("c")?,
                e1: f.num("e1")?,
                e2: f.num("e2")?,
                n: f.int("n")?,
            },
            "general-z" => Self::GeneralZ {
                c: f.num("c")?,
                e1: f.num("e1")?,
                e2: f.num("e2")?,
                n: f.int("n")?,
                z: f.num("z")?,
            },
            "z0-sqrt" => Self::Z0Sqrt { psi: f.profile("psi")? },
            "z0-linear" => Self::Z0Linear {
                psi1: f.profile("psi1")?,
                psi2: f.profile("psi2")?,
            },
            "general-yphi" => Self::GeneralYphi {
                c: f.num("c")?,
                e1: f.num("e1")?,
                e2: f.num("e2")?,
                z: f.num("z")?,
                phi1: f.profile("phi1")?,
                phi2: f.profile("phi2")?,
            },
            "ma-only" => {
                let n_dim = f.int("N")?;
                if n_dim < 2 {
                    return Err(Error::Parse(format!("ma-only needs N >= 2, got {n_dim}")));
                }
                let n_dim = n_dim as usize;
                let phi = Polynomial::parse_terms(&f.take("phi")?, n_dim - 1)?;
                Self::MAOnly { n_dim, phi }
            }
            _ => unreachable!(),
        };
        f.done()?;
        fam.validate()?;
        Ok(fam)
    }
}

/// A named instance of a family with the parameters it is checked at.
#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub family: SolutionFamily,
    pub params: ModelParams,
}

/// One representative of every family, with profiles drawn from the
/// polynomial, exponential and trigonometric catalog.
pub fn catalog() -> Vec<CatalogEntry> {
    [
        "one-dim-z0:c=1.5,q=sin:1,1,0",
        "one-dim-z1:c=2,q=exp:1,0.5",
        "one-dim:q=exp:1,0.5",
        "radial-z1:c=1,e1=0.5,e2=-0.25,n=1",
        "general-z:c=1,e1=0.5,e2=0,n=1,z=2",
        "z0-sqrt:psi=poly:20,0,1",
        "z0-linear:psi1=sin:1,1,0,psi2=poly:0,1",
        "general-yphi:c=1,e1=1,e2=0.5,z=2,phi1=sin:1,1,0,phi2=exp:0.5,0.3",
        "ma-only:N=3,phi=1*0.0+0.5*1.0+0.25*1.1+-0.2*0.2",
        "general-z:c=0.5,e1=2,e2=0.2,n=0,z=3+Yphi:e=0.5,-0.5;profiles=sin:1,2,0|poly:0,0,1",
    ]
    .into_iter()
    .map(|s| {
        let family: SolutionFamily = s.parse().expect("catalog entries parse");
        CatalogEntry {
            params: family.default_params(),
            family,
        }
    })
    .collect()
}
