//! Second-order forward-mode automatic differentiation.
//!
//! A [`Jet2`] carries the value, gradient and (dense, symmetric) Hessian of a
//! scalar quantity with respect to `dim` independent coordinates. Arithmetic
//! propagates all three through the Leibniz and chain rules, so any composite
//! expression built from these operations yields exact (to rounding) first
//! and second partial derivatives.
//!
//! Hessian entries are always written pairwise from one expression, which
//! keeps `hess(i, j) == hess(j, i)` bit-for-bit.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{domain, Error, Result};

/// Relative threshold below which a divisor or a logarithm/root argument is
/// treated as singular.
pub const SINGULAR_THRESHOLD: f64 = 1e-12;

#[inline]
pub(crate) fn is_singular(v: f64) -> bool {
    v.abs() <= SINGULAR_THRESHOLD * v.abs().max(1.0)
}

/// Returns `Some(k)` when `p` is an integer representable as `i32`.
#[inline]
pub(crate) fn as_integer(p: f64) -> Option<i32> {
    if p.fract() == 0.0 && p.abs() <= i32::MAX as f64 {
        Some(p as i32)
    } else {
        None
    }
}

/// Real power `base^p` with the same domain rules as [`Jet2::powf`]:
/// integer exponents accept any base (non-zero when negative), fractional
/// exponents require a positive base.
pub fn real_pow(base: f64, p: f64) -> Result<f64> {
    match as_integer(p) {
        Some(0) => Ok(1.0),
        Some(k) if k > 0 => Ok(base.powi(k)),
        Some(k) => {
            if is_singular(base) {
                Err(Error::DivisionByZero(base))
            } else {
                Ok(base.powi(k))
            }
        }
        None => {
            if base > 0.0 && !is_singular(base) {
                Ok(base.powf(p))
            } else {
                Err(domain(format!("fractional power {p} of non-positive base {base}")))
            }
        }
    }
}

/// Truncated second-order Taylor data of a scalar at a point.
#[derive(Clone, PartialEq)]
pub struct Jet2 {
    value: f64,
    grad: Vec<f64>,
    // row-major dim × dim
    hess: Vec<f64>,
}

impl fmt::Debug for Jet2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.dim();
        let rows: Vec<&[f64]> = (0..d).map(|i| &self.hess[i * d..(i + 1) * d]).collect();
        f.debug_struct("Jet2")
            .field("value", &self.value)
            .field("grad", &self.grad)
            .field("hess", &rows)
            .finish()
    }
}

impl Jet2 {
    /// The coordinate function `x_index` at the given value.
    pub fn seed(dim: usize, index: usize, value: f64) -> Result<Self> {
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, dim });
        }
        let mut j = Self::constant(dim, value);
        j.grad[index] = 1.0;
        Ok(j)
    }

    pub fn constant(dim: usize, value: f64) -> Self {
        assert!(dim >= 1, "jet dimension must be positive");
        Self {
            value,
            grad: vec![0.0; dim],
            hess: vec![0.0; dim * dim],
        }
    }

    /// Builds a jet from explicit parts. The Hessian is given row-major and
    /// must already be symmetric.
    pub fn from_parts(value: f64, grad: Vec<f64>, hess: Vec<f64>) -> Result<Self> {
        let d = grad.len();
        if d == 0 {
            return Err(Error::InvalidArgument("empty gradient".into()));
        }
        if hess.len() != d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                found: hess.len(),
            });
        }
        for i in 0..d {
            for j in 0..i {
                if hess[i * d + j] != hess[j * d + i] {
                    return Err(Error::InvalidArgument(format!(
                        "hessian not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self { value, grad, hess })
    }

    /// All `dim` coordinate jets at `point`.
    pub fn variables(point: &[f64]) -> Vec<Self> {
        let d = point.len();
        point
            .iter()
            .enumerate()
            .map(|(i, &v)| Self::seed(d, i, v).expect("index within dim"))
            .collect()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.grad.len()
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.value
    }

    #[inline]
    pub fn grad(&self) -> &[f64] {
        &self.grad
    }

    #[inline]
    pub fn d(&self, i: usize) -> f64 {
        self.grad[i]
    }

    #[inline]
    pub fn hess(&self, i: usize, j: usize) -> f64 {
        self.hess[i * self.dim() + j]
    }

    /// Row-major Hessian.
    pub fn hess_matrix(&self) -> &[f64] {
        &self.hess
    }

    fn check_dim(&self, other: &Self) {
        assert_eq!(
            self.dim(),
            other.dim(),
            "jet arithmetic requires operands of equal dimension"
        );
    }

    /// Chain rule for a univariate `f` given `f(a)`, `f'(a)` and `f''(a)`.
    pub fn univariate(&self, f0: f64, f1: f64, f2: f64) -> Self {
        let d = self.dim();
        let grad = self.grad.iter().map(|g| f1 * g).collect();
        let mut hess = vec![0.0; d * d];
        for i in 0..d {
            for j in i..d {
                let h = f1 * self.hess[i * d + j] + f2 * self.grad[i] * self.grad[j];
                hess[i * d + j] = h;
                hess[j * d + i] = h;
            }
        }
        Self {
            value: f0,
            grad,
            hess,
        }
    }

    /// Chain rule for a bivariate `f(a, b)` given its value, gradient
    /// `(f_a, f_b)` and Hessian `(f_aa, f_ab, f_bb)`.
    fn bivariate(a: &Self, b: &Self, f0: f64, fa: f64, fb: f64, faa: f64, fab: f64, fbb: f64) -> Self {
        a.check_dim(b);
        let d = a.dim();
        let grad = (0..d).map(|i| fa * a.grad[i] + fb * b.grad[i]).collect();
        let mut hess = vec![0.0; d * d];
        for i in 0..d {
            for j in i..d {
                let (ai, aj, bi, bj) = (a.grad[i], a.grad[j], b.grad[i], b.grad[j]);
                let h = fa * a.hess[i * d + j]
                    + fb * b.hess[i * d + j]
                    + faa * ai * aj
                    + fbb * bi * bj
                    + fab * (ai * bj + bi * aj);
                hess[i * d + j] = h;
                hess[j * d + i] = h;
            }
        }
        Self {
            value: f0,
            grad,
            hess,
        }
    }

    pub fn scale(&self, k: f64) -> Self {
        Self {
            value: k * self.value,
            grad: self.grad.iter().map(|g| k * g).collect(),
            hess: self.hess.iter().map(|h| k * h).collect(),
        }
    }

    pub fn add_scalar(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.value += c;
        out
    }

    pub fn recip(&self) -> Result<Self> {
        let v = self.value;
        if is_singular(v) {
            return Err(Error::DivisionByZero(v));
        }
        let inv = 1.0 / v;
        Ok(self.univariate(inv, -inv * inv, 2.0 * inv * inv * inv))
    }

    /// Quotient `self / rhs`.
    pub fn div(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs);
        if is_singular(rhs.value) {
            return Err(Error::DivisionByZero(rhs.value));
        }
        Ok(self * &rhs.recip()?)
    }

    pub fn exp(&self) -> Self {
        let e = self.value.exp();
        self.univariate(e, e, e)
    }

    pub fn ln(&self) -> Result<Self> {
        let v = self.value;
        if v <= 0.0 || is_singular(v) {
            return Err(domain(format!("ln of non-positive value {v}")));
        }
        Ok(self.univariate(v.ln(), 1.0 / v, -1.0 / (v * v)))
    }

    pub fn sqrt(&self) -> Result<Self> {
        let v = self.value;
        if v <= 0.0 || is_singular(v) {
            return Err(domain(format!("sqrt of non-positive value {v}")));
        }
        let s = v.sqrt();
        Ok(self.univariate(s, 0.5 / s, -0.25 / (s * v)))
    }

    pub fn sin(&self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.univariate(s, c, -s)
    }

    pub fn cos(&self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.univariate(c, -s, -c)
    }

    pub fn atan(&self) -> Self {
        let v = self.value;
        let q = 1.0 + v * v;
        self.univariate(v.atan(), 1.0 / q, -2.0 * v / (q * q))
    }

    /// Integer power; negative bases are handled exactly.
    pub fn powi(&self, k: i32) -> Result<Self> {
        let v = self.value;
        if k == 0 {
            return Ok(Self::constant(self.dim(), 1.0));
        }
        if k < 0 && is_singular(v) {
            return Err(Error::DivisionByZero(v));
        }
        let kf = k as f64;
        let f1 = kf * v.powi(k - 1);
        let f2 = kf * (kf - 1.0) * if k >= 2 || k < 0 { v.powi(k - 2) } else { 0.0 };
        Ok(self.univariate(v.powi(k), f1, f2))
    }

    /// Real power `self^p`. Integer `p` is dispatched to [`Jet2::powi`];
    /// otherwise the base must be positive.
    pub fn powf(&self, p: f64) -> Result<Self> {
        if let Some(k) = as_integer(p) {
            return self.powi(k);
        }
        let v = self.value;
        if v <= 0.0 || is_singular(v) {
            return Err(domain(format!("fractional power {p} of non-positive base {v}")));
        }
        let f0 = v.powf(p);
        Ok(self.univariate(f0, p * f0 / v, p * (p - 1.0) * f0 / (v * v)))
    }

    /// Principal `atan2(y, x)` in `(-π, π]`.
    pub fn atan2(y: &Self, x: &Self) -> Result<Self> {
        let (xv, yv) = (x.value, y.value);
        let r2 = xv * xv + yv * yv;
        if is_singular(r2) {
            return Err(domain("atan2 at the origin"));
        }
        let r4 = r2 * r2;
        // arguments ordered (y, x)
        Ok(Self::bivariate(
            y,
            x,
            yv.atan2(xv),
            xv / r2,
            -yv / r2,
            -2.0 * xv * yv / r4,
            (yv * yv - xv * xv) / r4,
            2.0 * xv * yv / r4,
        ))
    }
}

impl<'b> Add<&'b Jet2> for &Jet2 {
    type Output = Jet2;
    fn add(self, rhs: &'b Jet2) -> Jet2 {
        self.check_dim(rhs);
        Jet2 {
            value: self.value + rhs.value,
            grad: self.grad.iter().zip(&rhs.grad).map(|(a, b)| a + b).collect(),
            hess: self.hess.iter().zip(&rhs.hess).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'b> Sub<&'b Jet2> for &Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: &'b Jet2) -> Jet2 {
        self.check_dim(rhs);
        Jet2 {
            value: self.value - rhs.value,
            grad: self.grad.iter().zip(&rhs.grad).map(|(a, b)| a - b).collect(),
            hess: self.hess.iter().zip(&rhs.hess).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<'b> Mul<&'b Jet2> for &Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: &'b Jet2) -> Jet2 {
        let (a, b) = (self.value, rhs.value);
        Jet2::bivariate(self, rhs, a * b, b, a, 0.0, 1.0, 0.0)
    }
}

impl Neg for &Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Jet2> for Jet2 {
            type Output = Jet2;
            fn $m(self, rhs: Jet2) -> Jet2 {
                (&self).$m(&rhs)
            }
        }
        impl<'b> $tr<&'b Jet2> for Jet2 {
            type Output = Jet2;
            fn $m(self, rhs: &'b Jet2) -> Jet2 {
                (&self).$m(rhs)
            }
        }
        impl $tr<Jet2> for &Jet2 {
            type Output = Jet2;
            fn $m(self, rhs: Jet2) -> Jet2 {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Mul<f64> for &Jet2 {
    type Output = Jet2;
    fn mul(self, k: f64) -> Jet2 {
        self.scale(k)
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, k: f64) -> Jet2 {
        self.scale(k)
    }
}

impl Add<f64> for &Jet2 {
    type Output = Jet2;
    fn add(self, c: f64) -> Jet2 {
        self.add_scalar(c)
    }
}

impl Add<f64> for Jet2 {
    type Output = Jet2;
    fn add(self, c: f64) -> Jet2 {
        self.add_scalar(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn fd_second(f: impl Fn(f64) -> f64, x: f64, h: f64) -> (f64, f64) {
        let d1 = (f(x + h) - f(x - h)) / (2.0 * h);
        let d2 = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        (d1, d2)
    }

    #[test]
    fn seeds_and_constants() {
        let j = Jet2::seed(3, 0, 2.0).unwrap();
        assert_eq!(j.value(), 2.0);
        assert_eq!(j.grad(), &[1.0, 0.0, 0.0]);
        assert!(j.hess_matrix().iter().all(|&h| h == 0.0));

        let j = Jet2::seed(2, 1, -1.5).unwrap();
        assert_eq!(j.grad(), &[0.0, 1.0]);

        let j = Jet2::seed(1, 0, 0.0).unwrap();
        assert_eq!((j.value(), j.d(0), j.hess(0, 0)), (0.0, 1.0, 0.0));

        assert_eq!(
            Jet2::seed(2, 2, 0.0),
            Err(Error::IndexOutOfRange { index: 2, dim: 2 })
        );

        let c = Jet2::constant(3, 7.0);
        assert_eq!(c.value(), 7.0);
        assert!(c.grad().iter().all(|&g| g == 0.0));

        let s = &Jet2::constant(2, 3.0) + &Jet2::seed(2, 0, 1.0).unwrap();
        assert_eq!(s.value(), 4.0);
        assert_eq!(s.grad(), &[1.0, 0.0]);
    }

    #[test]
    fn product_quotient_cancellation() {
        let p = Jet2::seed(2, 0, 3.0).unwrap() * Jet2::seed(2, 1, 4.0).unwrap();
        assert_eq!(p.value(), 12.0);
        assert_eq!(p.grad(), &[4.0, 3.0]);
        assert_eq!(p.hess(0, 1), 1.0);
        assert_eq!(p.hess(1, 0), 1.0);
        assert_eq!(p.hess(0, 0), 0.0);

        let q = Jet2::constant(1, 1.0).div(&Jet2::seed(1, 0, 2.0).unwrap()).unwrap();
        assert_eq!((q.value(), q.d(0), q.hess(0, 0)), (0.5, -0.25, 0.25));

        let x = Jet2::seed(3, 1, 1.7).unwrap();
        let z = &x - &x;
        assert_eq!(z, Jet2::constant(3, 0.0));

        assert!(matches!(
            Jet2::constant(1, 1.0).div(&Jet2::constant(1, 0.0)),
            Err(Error::DivisionByZero(_))
        ));
    }

    #[test]
    fn univariate_instances() {
        let e = Jet2::seed(1, 0, 0.0).unwrap().exp();
        assert_eq!((e.value(), e.d(0), e.hess(0, 0)), (1.0, 1.0, 1.0));

        let s = (Jet2::constant(1, 3.0) + Jet2::seed(1, 0, 1.0).unwrap()).sqrt().unwrap();
        assert_eq!(s.value(), 2.0);
        assert_eq!(s.d(0), 0.25);
        assert_relative_eq!(s.hess(0, 0), -1.0 / 32.0, max_relative = 1e-15);

        assert!(Jet2::constant(1, -1.0).sqrt().is_err());
        assert!(Jet2::constant(1, 0.0).ln().is_err());
        assert!(Jet2::constant(1, -2.0).powf(0.5).is_err());
    }

    #[test]
    fn negative_integer_power_matches_fd_oracle() {
        // Frozen from the central-difference oracle below (h = 1e-4):
        // x^-3 at 2 -> 0.125, -0.1875, 0.375.
        let (d1, d2) = fd_second(|x| x.powi(-3), 2.0, 1e-4);
        assert_relative_eq!(d1, -0.1875, max_relative = 1e-6);
        assert_relative_eq!(d2, 0.375, max_relative = 1e-6);

        let p = Jet2::seed(1, 0, 2.0).unwrap().powf(-3.0).unwrap();
        assert_eq!(p.value(), 0.125);
        assert_relative_eq!(p.d(0), -0.1875, max_relative = 1e-15);
        assert_relative_eq!(p.hess(0, 0), 0.375, max_relative = 1e-15);
    }

    #[test]
    fn integer_power_of_negative_base_is_sign_tracked() {
        let p = Jet2::seed(1, 0, -2.0).unwrap().powf(3.0).unwrap();
        assert_eq!(p.value(), -8.0);
        assert_eq!(p.d(0), 12.0);
        assert_eq!(p.hess(0, 0), -12.0);
        assert!(Jet2::seed(1, 0, 0.0).unwrap().powi(-1).is_err());
        assert_eq!(real_pow(-2.0, 2.0), Ok(4.0));
        assert!(real_pow(-2.0, 0.5).is_err());
        assert!(real_pow(0.0, -1.0).is_err());
    }

    #[test]
    fn atan2_values_and_derivatives() {
        let at = |y: f64, x: f64| {
            let v = Jet2::variables(&[y, x]);
            Jet2::atan2(&v[0], &v[1]).unwrap()
        };
        let a = at(0.0, 1.0);
        assert_eq!(a.value(), 0.0);
        assert_eq!(a.d(0), 1.0);
        assert_eq!(at(1.0, 1.0).value(), PI / 4.0);

        let b = at(1.0, -1.0);
        assert_relative_eq!(b.value(), 3.0 * PI / 4.0, max_relative = 1e-15);
        let h = 1e-4;
        let f = |y: f64, x: f64| y.atan2(x);
        let (y0, x0) = (1.0, -1.0);
        let fy = (f(y0 + h, x0) - f(y0 - h, x0)) / (2.0 * h);
        let fx = (f(y0, x0 + h) - f(y0, x0 - h)) / (2.0 * h);
        let fyx = (f(y0 + h, x0 + h) - f(y0 + h, x0 - h) - f(y0 - h, x0 + h) + f(y0 - h, x0 - h))
            / (4.0 * h * h);
        let fyy = (f(y0 + h, x0) - 2.0 * f(y0, x0) + f(y0 - h, x0)) / (h * h);
        assert_relative_eq!(b.d(0), fy, max_relative = 1e-6);
        assert_relative_eq!(b.d(1), fx, max_relative = 1e-6);
        assert_relative_eq!(b.hess(0, 1), fyx, max_relative = 1e-4);
        assert_relative_eq!(b.hess(0, 0), fyy, max_relative = 1e-4);

        let o = Jet2::constant(2, 0.0);
        assert!(Jet2::atan2(&o, &o).is_err());
    }

    #[test]
    fn from_parts_rejects_asymmetric_hessian() {
        assert!(Jet2::from_parts(0.0, vec![0.0, 0.0], vec![0.0, 1.0, 2.0, 0.0]).is_err());
        assert!(Jet2::from_parts(0.0, vec![0.0, 0.0], vec![0.0; 3]).is_err());
    }

    #[test]
    fn quadratic_polynomials_are_exact() {
        // f = 3 + 2a - b + a^2 - 4ab + 0.5 b^2
        let v = Jet2::variables(&[0.3, -1.1]);
        let (a, b) = (&v[0], &v[1]);
        let f = (a * 2.0) + (b * -1.0) + (a * a) + (a * b) * -4.0 + (b * b) * 0.5 + 3.0;
        let (av, bv) = (0.3, -1.1);
        assert_eq!(f.d(0), 2.0 + 2.0 * av - 4.0 * bv);
        assert_eq!(f.d(1), -1.0 - 4.0 * av + bv);
        assert_eq!(f.hess(0, 0), 2.0);
        assert_eq!(f.hess(0, 1), -4.0);
        assert_eq!(f.hess(1, 1), 1.0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        // A fixed composite over three coordinates exercising every primitive.
        fn composite(v: &[Jet2]) -> Result<Jet2> {
            let (a, b, c) = (&v[0], &v[1], &v[2]);
            let r = (a * a + b * b + 1.0).sqrt()?;
            let t = Jet2::atan2(b, &(a + 2.5))?;
            let q = (a * b).exp().div(&(c * c + 0.5))?;
            let w = (c + 3.0).ln()? * t.cos() + b.sin() * r.powf(1.5)? + a.atan();
            Ok(&w + &q * (c + 2.0).powi(-2)?)
        }

        fn eval(p: &[f64]) -> f64 {
            let consts: Vec<Jet2> = p.iter().map(|&x| Jet2::constant(1, x)).collect();
            composite(&consts).unwrap().value()
        }

        proptest! {
            #[test]
            fn composite_matches_central_differences(
                a in -1.0f64..1.0, b in -1.0f64..1.0, c in -1.0f64..1.0
            ) {
                let p = [a, b, c];
                let jet = composite(&Jet2::variables(&p)).unwrap();
                let h = 1e-4;
                for i in 0..3 {
                    let mut pp = p; pp[i] += h;
                    let mut pm = p; pm[i] -= h;
                    let fd = (eval(&pp) - eval(&pm)) / (2.0 * h);
                    prop_assert!((jet.d(i) - fd).abs() <= 1e-4 * jet.d(i).abs().max(1.0));
                    for j in 0..3 {
                        let fd2 = if i == j {
                            (eval(&pp) - 2.0 * eval(&p) + eval(&pm)) / (h * h)
                        } else {
                            let s = |si: f64, sj: f64| {
                                let mut q = p; q[i] += si * h; q[j] += sj * h; eval(&q)
                            };
                            (s(1.0, 1.0) - s(1.0, -1.0) - s(-1.0, 1.0) + s(-1.0, -1.0)) / (4.0 * h * h)
                        };
                        prop_assert!((jet.hess(i, j) - fd2).abs() <= 1e-4 * jet.hess(i, j).abs().max(1.0),
                            "hess({},{}) = {} vs fd {}", i, j, jet.hess(i, j), fd2);
                        prop_assert_eq!(jet.hess(i, j).to_bits(), jet.hess(j, i).to_bits());
                    }
                }
            }
        }
    }
}
