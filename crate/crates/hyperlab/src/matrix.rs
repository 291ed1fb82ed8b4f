//! Real 2x2 unit-determinant matrices acting on the upper half-plane.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Point of the boundary circle R u {oo}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ExtReal {
    Finite(f64),
    Infinity,
}

impl ExtReal {
    pub fn approx_eq(&self, other: &ExtReal, tol: f64) -> bool {
        match (self, other) {
            (ExtReal::Infinity, ExtReal::Infinity) => true,
            (ExtReal::Finite(a), ExtReal::Finite(b)) => (a - b).abs() <= tol,
            _ => false,
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(x) => write!(f, "{x}"),
            ExtReal::Infinity => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let m = Mat2 { a, b, c, d };
        let det = m.det();
        if det <= 0.0 {
            return Err(Error::Config(format!("matrix determinant {det} must be positive")));
        }
        if (det - 1.0).abs() > 1e-6 {
            return Err(Error::Config(format!("matrix determinant {det} too far from 1")));
        }
        Ok(m.renormalized())
    }

    pub fn identity() -> Self {
        Mat2 { a: 1.0, b: 0.0, c: 0.0, d: 1.0 }
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    /// Rescale so the determinant is exactly 1 again; applied after every
    /// product to keep drift below 1e-12.
    pub fn renormalized(&self) -> Self {
        let s = self.det().sqrt();
        Mat2 { a: self.a / s, b: self.b / s, c: self.c / s, d: self.d / s }
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
        .renormalized()
    }

    pub fn inverse(&self) -> Mat2 {
        Mat2 { a: self.d, b: -self.b, c: -self.c, d: self.a }.renormalized()
    }

    pub fn pow(&self, n: i64) -> Mat2 {
        let mut base = if n < 0 { self.inverse() } else { *self };
        let mut e = n.unsigned_abs();
        let mut acc = Mat2::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Moebius action on the upper half-plane.
    pub fn apply(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    /// Moebius action on the boundary circle.
    pub fn apply_boundary(&self, x: ExtReal) -> ExtReal {
        match x {
            ExtReal::Infinity => {
                if self.c.abs() < 1e-14 {
                    ExtReal::Infinity
                } else {
                    ExtReal::Finite(self.a / self.c)
                }
            }
            ExtReal::Finite(t) => {
                let den = self.c * t + self.d;
                if den.abs() < 1e-14 {
                    ExtReal::Infinity
                } else {
                    ExtReal::Finite((self.a * t + self.b) / den)
                }
            }
        }
    }

    /// Attracting and repelling boundary fixed points of a hyperbolic matrix.
    pub fn fixed_points(&self) -> Result<(ExtReal, ExtReal)> {
        let tr = self.trace();
        if tr.abs() <= 2.0 + 1e-9 && tr.abs() >= 2.0 - 1e-9 {
            return Err(Error::NoAxis);
        }
        if tr.abs() < 2.0 {
            return Err(Error::NoAxis);
        }
        // eigenvalues; lambda_plus is the one of larger modulus
        let disc = (tr * tr - 4.0).sqrt();
        let (l1, l2) = ((tr + disc) / 2.0, (tr - disc) / 2.0);
        let (lp, lm) = if l1.abs() > l2.abs() { (l1, l2) } else { (l2, l1) };
        let fix = |lambda: f64| -> ExtReal {
            if self.c.abs() > 1e-12 {
                ExtReal::Finite((lambda - self.d) / self.c)
            } else if (self.a - lambda).abs() < 1e-12 {
                // eigenvector (1, 0): fixed point at infinity
                ExtReal::Infinity
            } else {
                ExtReal::Finite(self.b / (lambda - self.a))
            }
        };
        Ok((fix(lp), fix(lm)))
    }
}

/// d(z0, g^n z0) in log-scaled arithmetic, safe for n large enough that the
/// entries of g^n overflow f64. Uses cosh d(i, m i) = (a^2+b^2+c^2+d^2)/2
/// for unit-determinant m, with the determinant tracked symbolically.
pub fn power_orbit_distance(g: &Mat2, z0: Complex64, n: u64) -> f64 {
    let mul_raw = |x: &Mat2, y: &Mat2| Mat2 {
        a: x.a * y.a + x.b * y.c,
        b: x.a * y.b + x.b * y.d,
        c: x.c * y.a + x.d * y.c,
        d: x.c * y.b + x.d * y.d,
    };
    let rescale = |m: &mut Mat2, s: &mut f64| {
        let mx = m.a.abs().max(m.b.abs()).max(m.c.abs()).max(m.d.abs());
        if mx > 0.0 {
            m.a /= mx;
            m.b /= mx;
            m.c /= mx;
            m.d /= mx;
            *s += mx.ln();
        }
    };
    // move the base point to i
    let ry = z0.im.sqrt();
    let t = Mat2 { a: ry, b: z0.re / ry, c: 0.0, d: 1.0 / ry };
    let h = t.inverse().mul(g).mul(&t);
    let mut base = h;
    let mut bs = 0.0f64;
    let mut acc = Mat2::identity();
    let mut s = 0.0f64;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_raw(&acc, &base);
            s += bs;
            rescale(&mut acc, &mut s);
        }
        base = mul_raw(&base, &base);
        bs *= 2.0;
        rescale(&mut base, &mut bs);
        e >>= 1;
    }
    let q = acc.a * acc.a + acc.b * acc.b + acc.c * acc.c + acc.d * acc.d;
    // ln cosh d; the true matrix is e^s * acc with determinant 1
    let l = 2.0 * s + (q / 2.0).ln();
    if l > 40.0 {
        l + 2f64.ln()
    } else {
        l.exp().max(1.0).acosh()
    }
}

/// Hyperbolic distance in the upper half-plane.
pub fn half_plane_distance(p: Complex64, q: Complex64) -> f64 {
    let num = (p - q).norm_sqr();
    let arg = 1.0 + num / (2.0 * p.im * q.im);
    arg.max(1.0).acosh()
}

/// Point at hyperbolic distance `s` from `z0` along the geodesic toward
/// boundary point `xi`, unit speed.
pub fn geodesic_toward(z0: Complex64, xi: ExtReal, s: f64) -> Complex64 {
    match xi {
        ExtReal::Infinity => Complex64::new(z0.re, z0.im * s.exp()),
        ExtReal::Finite(t) => {
            // send xi to infinity by w = -1/(z - t), walk up the vertical line, pull back
            let w0 = -1.0 / (z0 - Complex64::new(t, 0.0));
            let w = Complex64::new(w0.re, w0.im * s.exp());
            Complex64::new(t, 0.0) - 1.0 / w
        }
    }
}

/// Endpoints of the full geodesic through p and q, ordered (beyond q, beyond p).
pub fn geodesic_endpoints(p: Complex64, q: Complex64) -> (ExtReal, ExtReal) {
    if (p.re - q.re).abs() < 1e-12 {
        if q.im > p.im {
            (ExtReal::Infinity, ExtReal::Finite(p.re))
        } else {
            (ExtReal::Finite(p.re), ExtReal::Infinity)
        }
    } else {
        let c = (p.norm_sqr() - q.norm_sqr()) / (2.0 * (p.re - q.re));
        let r = (p - Complex64::new(c, 0.0)).norm();
        // walking from p to q moves toward the endpoint on q's side
        if q.re > p.re {
            (ExtReal::Finite(c + r), ExtReal::Finite(c - r))
        } else {
            (ExtReal::Finite(c - r), ExtReal::Finite(c + r))
        }
    }
}

/// Endpoint of the geodesic leaving `q` perpendicular to the geodesic (p, q),
/// on a deterministic side.
pub fn perpendicular_endpoint(p: Complex64, q: Complex64) -> ExtReal {
    // tangent of the p->q geodesic at q
    let tangent = if (p.re - q.re).abs() < 1e-12 {
        Complex64::new(0.0, if q.im > p.im { 1.0 } else { -1.0 })
    } else {
        let c = (p.norm_sqr() - q.norm_sqr()) / (2.0 * (p.re - q.re));
        // tangent to circle centered at (c, 0) at point q, oriented away from p
        let radial = q - Complex64::new(c, 0.0);
        let t = Complex64::new(-radial.im, radial.re);
        if (q.re - p.re) * t.re + (q.im - p.im) * t.im >= 0.0 { t } else { -t }
    };
    // rotate by 90 degrees and follow that geodesic to the boundary
    let v = Complex64::new(-tangent.im, tangent.re);
    if v.re.abs() < 1e-12 {
        if v.im > 0.0 {
            ExtReal::Infinity
        } else {
            ExtReal::Finite(q.re)
        }
    } else {
        let c = q.re + q.im * v.im / v.re;
        let r = (q - Complex64::new(c, 0.0)).norm();
        ExtReal::Finite(if v.re > 0.0 { c + r } else { c - r })
    }
}
