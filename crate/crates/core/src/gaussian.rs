//! Exact two-dimensional complex Gaussians over `(r, q)`.
//!
//! A [`ComplexQuadraticForm`] represents
//! `exp(log_scale + i gouy) * exp(-[x.Q x + l.x + s])` with `x = (r, q)`.
//! Free propagation over a distance `L` applies the paraxial kernel
//! `exp(i k0 |x - x'|^2 / L)` in both coordinates and is evaluated in closed
//! form, so slit windows of any widths can be composed exactly.

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;

use crate::error::{Error, Result};

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexQuadraticForm {
    pub q: Matrix2<C>,
    pub l: Vector2<C>,
    pub s: C,
    /// Accumulated log-modulus of the propagation prefactors.
    pub log_scale: f64,
    /// Accumulated phase of the propagation prefactors, continuous in distance.
    pub gouy: f64,
}

/// Mean and covariance of position and wavenumber in `(r, q, k_r, k_q)` order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianMoments {
    pub mean: [f64; 4],
    pub cov: nalgebra::Matrix4<f64>,
}

fn real(m: &Matrix2<C>) -> Matrix2<f64> {
    m.map(|z| z.re)
}

fn imag(m: &Matrix2<C>) -> Matrix2<f64> {
    m.map(|z| z.im)
}

/// Eigenvalues of a 2x2 complex matrix.
fn eigenvalues(m: &Matrix2<C>) -> [C; 2] {
    let half_trace = (m[(0, 0)] + m[(1, 1)]) * 0.5;
    let disc = (half_trace * half_trace - m.determinant()).sqrt();
    [half_trace + disc, half_trace - disc]
}

impl ComplexQuadraticForm {
    /// The constant function 1.
    pub fn unit() -> Self {
        Self {
            q: Matrix2::zeros(),
            l: Vector2::zeros(),
            s: C::new(0.0, 0.0),
            log_scale: 0.0,
            gouy: 0.0,
        }
    }

    /// Centred product Gaussian `exp(-r^2/width_r^2 - q^2/width_q^2)`, normalised so
    /// that `int |psi|^2 dr dq = 1/2` (unit norm in `(x1, x2)`).
    pub fn product_gaussian(width_r: f64, width_q: f64) -> Self {
        Self {
            q: Matrix2::new(
                C::from(1.0 / (width_r * width_r)),
                C::from(0.0),
                C::from(0.0),
                C::from(1.0 / (width_q * width_q)),
            ),
            l: Vector2::zeros(),
            s: C::new(0.0, 0.0),
            log_scale: -0.5 * (std::f64::consts::PI * width_r * width_q).ln(),
            gouy: 0.0,
        }
    }

    /// Product of two Gaussian slit windows acting on each photon:
    /// `exp(-(x1 - c1)^2/(2 b1^2) - (x2 - c2)^2/(2 b2^2))` with `x1 = r + q`, `x2 = r - q`.
    pub fn slit_window(c1: f64, b1: f64, c2: f64, b2: f64) -> Self {
        let a1 = 0.5 / (b1 * b1);
        let a2 = 0.5 / (b2 * b2);
        let diag = C::from(a1 + a2);
        let off = C::from(a1 - a2);
        Self {
            q: Matrix2::new(diag, off, off, diag),
            l: Vector2::new(
                C::from(-2.0 * (a1 * c1 + a2 * c2)),
                C::from(-2.0 * (a1 * c1 - a2 * c2)),
            ),
            s: C::from(a1 * c1 * c1 + a2 * c2 * c2),
            log_scale: 0.0,
            gouy: 0.0,
        }
    }

    /// Pointwise product.
    pub fn multiply(&self, other: &Self) -> Self {
        Self {
            q: self.q + other.q,
            l: self.l + other.l,
            s: self.s + other.s,
            log_scale: self.log_scale + other.log_scale,
            gouy: self.gouy + other.gouy,
        }
    }

    /// Checks that the real part of `Q` is positive definite.
    pub fn is_normalizable(&self) -> bool {
        let re = real(&self.q);
        re[(0, 0)] > 0.0 && re.determinant() > 0.0
    }

    /// Free paraxial propagation over `distance` with wavenumber `k0`.
    pub fn propagate(&self, distance: f64, k0: f64) -> Result<Self> {
        if distance == 0.0 {
            return Ok(*self);
        }
        if !self.is_normalizable() {
            return Err(Error::Degenerate("real part of Q is not positive definite"));
        }
        let t = C::new(0.0, distance / k0);
        let n = Matrix2::identity() + self.q * t;
        let n_inv = n
            .try_inverse()
            .ok_or(Error::Degenerate("singular propagation matrix"))?;
        let q = self.q * n_inv;
        let q = (q + q.transpose()) * C::from(0.5);
        let l = n_inv * self.l;
        let s = self.s - t * (self.l.transpose() * n_inv * self.l)[(0, 0)] * 0.25;
        // Eigenvalues of N are 1 + i (L/k0) lambda(Q) with Re lambda > 0, so each
        // argument lies in (0, pi) and the sum is the continuous branch.
        let [e1, e2] = eigenvalues(&n);
        Ok(Self {
            q,
            l,
            s,
            log_scale: self.log_scale - 0.5 * (e1.norm().ln() + e2.norm().ln()),
            gouy: self.gouy - 0.5 * (e1.arg() + e2.arg()),
        })
    }

    /// Complex value at `(r, q)`.
    pub fn evaluate(&self, r: f64, q: f64) -> C {
        let x = Vector2::new(C::from(r), C::from(q));
        let e = (x.transpose() * self.q * x)[(0, 0)] + (self.l.transpose() * x)[(0, 0)] + self.s;
        (C::new(self.log_scale, self.gouy) - e).exp()
    }

    /// `int |psi|^2 dr dq`.
    pub fn norm_sq(&self) -> Result<f64> {
        let a = real(&self.q);
        let a_inv = a
            .try_inverse()
            .ok_or(Error::Degenerate("singular real part of Q"))?;
        let lr = self.l.map(|z| z.re);
        let exponent =
            2.0 * self.log_scale - 2.0 * self.s.re + 0.5 * (lr.transpose() * a_inv * lr)[(0, 0)];
        Ok(std::f64::consts::PI / (4.0 * a.determinant()).sqrt() * exponent.exp())
    }

    /// Rescales so that `int |psi|^2 dr dq = 1/2`, the convention of a unit-norm
    /// two-photon state in `(x1, x2)`.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sq()?;
        let mut out = *self;
        out.log_scale -= 0.5 * (2.0 * n).ln();
        Ok(out)
    }

    /// Position and wavenumber moments of `|psi|^2`.
    pub fn moments(&self) -> Result<GaussianMoments> {
        let qr = real(&self.q);
        let qi = imag(&self.q);
        let qr_inv = qr
            .try_inverse()
            .ok_or(Error::Degenerate("singular real part of Q"))?;
        let sigma = qr_inv * 0.25;
        let lr = self.l.map(|z| z.re);
        let li = self.l.map(|z| z.im);
        let mu = -(qr_inv * lr) * 0.5;
        let k_mean = -(qi * mu) * 2.0 - li;
        let k_cov = qr + qi * sigma * qi * 4.0;
        let xk = -(sigma * qi) * 2.0;
        let mut cov = nalgebra::Matrix4::zeros();
        cov.fixed_view_mut::<2, 2>(0, 0).copy_from(&sigma);
        cov.fixed_view_mut::<2, 2>(2, 2).copy_from(&k_cov);
        cov.fixed_view_mut::<2, 2>(0, 2).copy_from(&xk);
        cov.fixed_view_mut::<2, 2>(2, 0).copy_from(&xk.transpose());
        Ok(GaussianMoments {
            mean: [mu[0], mu[1], k_mean[0], k_mean[1]],
            cov,
        })
    }
}
