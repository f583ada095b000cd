//! Roots of real monic polynomials: companion-matrix eigenvalues by the
//! shifted Hessenberg QR iteration, then simultaneous Aberth refinement of
//! real roots in double-double arithmetic.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::dd::Dd;
use crate::math;
use crate::{Error, Result};

const MAX_QR_ITERATIONS: usize = 60;

/// Roots of `t^m + c[0] t^(m-1) + ... + c[m-1]` as eigenvalues of the
/// (balanced) companion matrix.
pub(crate) fn companion_roots(c: &[f64]) -> Result<Vec<Complex64>> {
    let m = c.len();
    if m == 0 {
        return Ok(Vec::new());
    }
    let mut a = vec![vec![0.0; m]; m];
    for (j, &cj) in c.iter().enumerate() {
        a[0][j] = -cj;
    }
    for i in 1..m {
        a[i][i - 1] = 1.0;
    }
    balance(&mut a);
    hqr(&mut a)
}

/// Diagonal similarity by powers of two that equalizes row and column norms.
fn balance(a: &mut [Vec<f64>]) {
    const RADIX: f64 = 2.0;
    let n = a.len();
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let (mut r, mut c) = (0.0, 0.0);
            for j in 0..n {
                if j != i {
                    c += a[j][i].abs();
                    r += a[i][j].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let g = 1.0 / f;
                for j in 0..n {
                    a[i][j] *= g;
                }
                for row in a.iter_mut() {
                    row[i] *= f;
                }
            }
        }
    }
}

#[inline]
fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Eigenvalues of an upper Hessenberg matrix by the Francis double-shift QR
/// iteration with deflation. Destroys `a`.
fn hqr(a: &mut [Vec<f64>]) -> Result<Vec<Complex64>> {
    let n = a.len() as isize;
    let mut wr = vec![Complex64::new(0.0, 0.0); n as usize];
    let at = |a: &[Vec<f64>], i: isize, j: isize| a[i as usize][j as usize];

    let mut anorm = 0.0;
    for i in 0..n {
        for j in (i - 1).max(0)..n {
            anorm += at(a, i, j).abs();
        }
    }

    let mut nn = n - 1;
    let mut t = 0.0;
    while nn >= 0 {
        let mut its = 0;
        loop {
            // look for a single small subdiagonal element
            let mut l = nn;
            while l > 0 {
                let mut s = at(a, l - 1, l - 1).abs() + at(a, l, l).abs();
                if s == 0.0 {
                    s = anorm;
                }
                if at(a, l, l - 1).abs() + s == s {
                    a[l as usize][(l - 1) as usize] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = at(a, nn, nn);
            if l == nn {
                wr[nn as usize] = Complex64::new(x + t, 0.0);
                nn -= 1;
                break;
            }
            let mut y = at(a, nn - 1, nn - 1);
            let mut w = at(a, nn, nn - 1) * at(a, nn - 1, nn);
            if l == nn - 1 {
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let mut z = math::sqrt(q.abs());
                x += t;
                if q >= 0.0 {
                    z = p + sign(z, p);
                    let other = if z != 0.0 { x - w / z } else { x + z };
                    wr[(nn - 1) as usize] = Complex64::new(x + z, 0.0);
                    wr[nn as usize] = Complex64::new(other, 0.0);
                } else {
                    wr[(nn - 1) as usize] = Complex64::new(x + p, -z);
                    wr[nn as usize] = Complex64::new(x + p, z);
                }
                nn -= 2;
                break;
            }
            if its == MAX_QR_ITERATIONS {
                return Err(Error::NoConvergence("Hessenberg QR iteration"));
            }
            if its == 10 || its == 20 {
                // exceptional shift
                t += x;
                for i in 0..=nn {
                    a[i as usize][i as usize] -= x;
                }
                let s = at(a, nn, nn - 1).abs() + at(a, nn - 1, nn - 2).abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;
            // look for two consecutive small subdiagonal elements
            let mut m = nn - 2;
            let (mut p, mut q, mut r, mut z);
            loop {
                z = at(a, m, m);
                r = x - z;
                let s0 = y - z;
                p = (r * s0 - w) / at(a, m + 1, m) + at(a, m, m + 1);
                q = at(a, m + 1, m + 1) - z - r - s0;
                r = at(a, m + 2, m + 1);
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = at(a, m, m - 1).abs() * (q.abs() + r.abs());
                let v = p.abs() * (at(a, m - 1, m - 1).abs() + z.abs() + at(a, m + 1, m + 1).abs());
                if u + v == v {
                    break;
                }
                m -= 1;
            }
            for i in m..nn - 1 {
                a[(i + 2) as usize][i as usize] = 0.0;
                if i != m {
                    a[(i + 2) as usize][(i - 1) as usize] = 0.0;
                }
            }
            // double QR step on rows l..nn and columns m..nn
            for k in m..nn {
                if k != m {
                    p = at(a, k, k - 1);
                    q = at(a, k + 1, k - 1);
                    r = if k + 1 != nn { at(a, k + 2, k - 1) } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = sign(math::sqrt(p * p + q * q + r * r), p);
                if s == 0.0 {
                    continue;
                }
                if k == m {
                    if l != m {
                        a[k as usize][(k - 1) as usize] = -at(a, k, k - 1);
                    }
                } else {
                    a[k as usize][(k - 1) as usize] = -s * x;
                }
                p += s;
                x = p / s;
                y = q / s;
                z = r / s;
                q /= p;
                r /= p;
                for j in k..=nn {
                    let (ku, k1) = (k as usize, (k + 1) as usize);
                    let ju = j as usize;
                    p = a[ku][ju] + q * a[k1][ju];
                    if k + 1 != nn {
                        let k2 = (k + 2) as usize;
                        p += r * a[k2][ju];
                        a[k2][ju] -= p * z;
                    }
                    a[k1][ju] -= p * y;
                    a[ku][ju] -= p * x;
                }
                let mmin = if nn < k + 3 { nn } else { k + 3 };
                for i in l..=mmin {
                    let iu = i as usize;
                    let (ku, k1) = (k as usize, (k + 1) as usize);
                    p = x * a[iu][ku] + y * a[iu][k1];
                    if k + 1 != nn {
                        let k2 = (k + 2) as usize;
                        p += z * a[iu][k2];
                        a[iu][k2] -= p * r;
                    }
                    a[iu][k1] -= p * q;
                    a[iu][ku] -= p;
                }
            }
            if l + 1 >= nn {
                break;
            }
        }
    }
    Ok(wr)
}

/// Complex number with double-double parts.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Cdd {
    pub(crate) re: Dd,
    pub(crate) im: Dd,
}

impl Cdd {
    const ZERO: Cdd = Cdd { re: Dd::ZERO, im: Dd::ZERO };
    const ONE: Cdd = Cdd { re: Dd::ONE, im: Dd::ZERO };

    fn from_c64(z: Complex64) -> Self {
        Cdd { re: Dd::new(z.re), im: Dd::new(z.im) }
    }

    fn real(x: Dd) -> Self {
        Cdd { re: x, im: Dd::ZERO }
    }

    fn add(self, o: Cdd) -> Cdd {
        Cdd { re: self.re + o.re, im: self.im + o.im }
    }

    fn sub(self, o: Cdd) -> Cdd {
        Cdd { re: self.re - o.re, im: self.im - o.im }
    }

    fn mul(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }

    fn div(self, o: Cdd) -> Cdd {
        let d = o.re * o.re + o.im * o.im;
        Cdd {
            re: (self.re * o.re + self.im * o.im) / d,
            im: (self.im * o.re - self.re * o.im) / d,
        }
    }

    /// Modulus, to double precision.
    pub(crate) fn norm(self) -> f64 {
        let (a, b) = (self.re.to_f64(), self.im.to_f64());
        math::sqrt(a * a + b * b)
    }
}

/// `p(z)` and `p'(z)` for the monic polynomial with coefficients `c` (Horner).
fn eval(c: &[Dd], z: Cdd) -> (Cdd, Cdd) {
    let mut p = Cdd::ONE;
    let mut dp = Cdd::ZERO;
    for &ck in c {
        dp = dp.mul(z).add(p);
        p = p.mul(z).add(Cdd::real(ck));
    }
    (p, dp)
}

/// Polishes approximate roots of the real monic polynomial with coefficients
/// `c` by the Aberth-Ehrlich simultaneous iteration in double-double.
pub(crate) fn aberth(c: &[Dd], start: &[Complex64], max_iter: usize) -> Vec<Cdd> {
    let m = start.len();
    let mut z: Vec<Cdd> = start.iter().map(|&x| Cdd::from_c64(x)).collect();
    // coincident starting points stall the repulsion term; separate them slightly
    let scale = start.iter().fold(0.0f64, |a, x| a.max(x.norm())).max(1e-300);
    for i in 1..m {
        for j in 0..i {
            if z[i].sub(z[j]).norm() <= 1e-14 * scale {
                let (s, c) = math::sin_cos(i as f64);
                let kick = Complex64::new(c, s) * (1e-9 * scale);
                z[i] = z[i].add(Cdd::from_c64(kick));
            }
        }
    }
    for _ in 0..max_iter {
        let mut largest = 0.0f64;
        for i in 0..m {
            let (p, dp) = eval(c, z[i]);
            if p.norm() == 0.0 || dp.norm() == 0.0 {
                continue;
            }
            let ratio = p.div(dp);
            let mut repulsion = Cdd::ZERO;
            for j in 0..m {
                if j != i {
                    let d = z[i].sub(z[j]);
                    if d.norm() != 0.0 {
                        repulsion = repulsion.add(Cdd::ONE.div(d));
                    }
                }
            }
            let denom = Cdd::ONE.sub(ratio.mul(repulsion));
            if denom.norm() == 0.0 {
                continue;
            }
            let step = ratio.div(denom);
            z[i] = z[i].sub(step);
            largest = largest.max(step.norm() / (z[i].norm() + 1e-300));
        }
        if largest < 1e-31 {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_re(mut r: Vec<Complex64>) -> Vec<f64> {
        r.sort_by(|a, b| a.re.total_cmp(&b.re));
        r.iter().map(|z| z.re).collect()
    }

    #[test]
    fn quadratic() {
        // t^2 - 5t + 4 = (t - 1)(t - 4)
        let r = sorted_re(companion_roots(&[-5.0, 4.0]).unwrap());
        assert!((r[0] - 1.0).abs() < 1e-12 && (r[1] - 4.0).abs() < 1e-12);
    }

    #[test]
    fn complex_pair() {
        // t^2 + 1
        let r = companion_roots(&[0.0, 1.0]).unwrap();
        assert!(r.iter().all(|z| z.re.abs() < 1e-12 && (z.im.abs() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn cubic_and_quintic() {
        // (t-1)(t-2)(t-3) = t^3 - 6t^2 + 11t - 6
        let r = sorted_re(companion_roots(&[-6.0, 11.0, -6.0]).unwrap());
        for (x, y) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert!((x - y).abs() < 1e-10);
        }
        // roots 0.1, 0.2, ..., 0.5 via expanded coefficients
        let roots = [0.1, 0.2, 0.3, 0.4, 0.5];
        let mut coef = vec![1.0];
        for &x in &roots {
            let mut next = vec![0.0; coef.len() + 1];
            for (k, &ck) in coef.iter().enumerate() {
                next[k] += ck;
                next[k + 1] -= ck * x;
            }
            coef = next;
        }
        let r = sorted_re(companion_roots(&coef[1..]).unwrap());
        for (x, y) in r.iter().zip(roots) {
            assert!((x - y).abs() < 1e-8, "{x} vs {y}");
        }
    }

    #[test]
    fn zero_polynomial_roots() {
        let r = companion_roots(&[0.0, 0.0, 0.0]).unwrap();
        assert!(r.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn aberth_refines_close_roots() {
        // (t - 1)(t - (1 + 1e-6))
        let b = Dd::new(1.0) + Dd::new(1e-6);
        let c = [-(Dd::ONE + b), b];
        let start = [Complex64::new(0.999, 0.0), Complex64::new(1.001, 0.0)];
        let z = aberth(&c, &start, 100);
        let mut v: Vec<f64> = z.iter().map(|x| x.re.to_f64()).collect();
        v.sort_by(f64::total_cmp);
        assert!((v[0] - 1.0).abs() < 1e-15);
        assert!((v[1] - 1.000001).abs() < 1e-15);
    }

    #[test]
    fn aberth_resolves_triple_root() {
        // (t - 1/3)^3 from perturbed complex starting points
        let third = Dd::ONE / 3.0;
        let c = [-(third * 3.0), third * third * 3.0, -(third * third * third)];
        let start = companion_roots(&[-1.0, 1.0 / 3.0, -1.0 / 27.0]).unwrap();
        for z in aberth(&c, &start, 200) {
            assert!((z.re.to_f64() - 1.0 / 3.0).abs() < 1e-9);
            assert!(z.im.to_f64().abs() < 1e-9);
        }
    }
}
