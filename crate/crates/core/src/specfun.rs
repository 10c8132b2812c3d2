//! Gamma function, Bessel functions of real order and their Riccati forms.
//!
//! `J_ν, Y_ν` use Temme's series for `x < 2` and Steed's continued fraction
//! otherwise, with the continued fraction for `J'_ν/J_ν` supplying the ratio
//! at the requested order. Both recurrences track an exponent so orders far
//! above the argument stay representable; see [`ScaledRiccati`].

use std::f64::consts::PI;

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `Γ(x)` for real `x` away from the poles.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if x <= 0.0 && x == x.floor() {
        return Err(Error::Domain(format!("Gamma has a pole at {x}")));
    }
    if !x.is_finite() {
        return Err(Error::Domain(format!("Gamma of non-finite {x}")));
    }
    Ok(gamma_unchecked(x))
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("ln Gamma needs x > 0, got {x}")));
    }
    if x < 0.5 {
        return Ok(ln_gamma(x + 1.0)? - x.ln());
    }
    let x = x - 1.0;
    let t = x + LANCZOS_G + 0.5;
    let mut a = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    Ok(0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + a.ln())
}

/// Regularized incomplete beta function `I_x(a, b)` by Lentz's continued fraction.
pub fn incomplete_beta(a: f64, b: f64, x: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain(format!("incomplete beta needs a, b > 0, got ({a}, {b})")));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("incomplete beta argument {x} outside [0, 1]")));
    }
    if x == 0.0 || x == 1.0 {
        return Ok(x);
    }
    let ln_front = ln_gamma(a + b)? - ln_gamma(a)? - ln_gamma(b)? + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        Ok(front * beta_cf(a, b, x)? / a)
    } else {
        Ok(1.0 - front * beta_cf(b, a, 1.0 - x)? / b)
    }
}

fn beta_cf(a: f64, b: f64, x: f64) -> Result<f64> {
    const FPMIN: f64 = 1e-300;
    let (qab, qap, qam) = (a + b, a + 1.0, a - 1.0);
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < FPMIN {
        d = FPMIN;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..10_000 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            return Ok(h);
        }
    }
    Err(Error::Range(format!(
        "incomplete beta continued fraction failed at x = {x}"
    )))
}

fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma_unchecked(1.0 - x));
    }
    let x = x - 1.0;
    let t = x + LANCZOS_G + 0.5;
    let mut a = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

/// Surface measure of the unit sphere `𝕊ⁿ⁻¹ ⊂ ℝⁿ`.
pub fn sphere_volume(n: usize) -> f64 {
    2.0 * PI.powf(n as f64 / 2.0) / gamma_unchecked(n as f64 / 2.0)
}

/// Riccati–Bessel values `ĵ_μ(x) = √(πx/2)·J_μ(x)`, `ŷ_μ(x) = √(πx/2)·Y_μ(x)` and derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselPair {
    pub j: f64,
    pub y: f64,
    pub jp: f64,
    pub yp: f64,
}

/// Riccati–Bessel pair stored as mantissas with a shared exponent:
/// the true values are `ĵ = j·e^{-scale}` and `ŷ = y·e^{+scale}` (same for derivatives).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledRiccati {
    pub j: f64,
    pub jp: f64,
    pub y: f64,
    pub yp: f64,
    pub scale: f64,
}

impl ScaledRiccati {
    /// Unscaled pair, or a range error when `ŷ` (or `ĵ`) is not representable.
    pub fn unscaled(&self) -> Result<BesselPair> {
        let up = self.scale.exp();
        let down = (-self.scale).exp();
        let pair = BesselPair {
            j: self.j * down,
            jp: self.jp * down,
            y: self.y * up,
            yp: self.yp * up,
        };
        let ok = [pair.j, pair.jp, pair.y, pair.yp].iter().all(|v| v.is_finite()) && (self.j == 0.0 || pair.j != 0.0);
        if ok {
            Ok(pair)
        } else {
            Err(Error::Range(format!(
                "Riccati–Bessel values overflow (log scale {:.1})",
                self.scale
            )))
        }
    }
}

/// `ĵ_μ, ŷ_μ` and derivatives; fails with a range error where `Y_μ` overflows.
pub fn riccati_bessel(mu: f64, x: f64) -> Result<BesselPair> {
    riccati_bessel_scaled(mu, x)?.unscaled()
}

/// Exponent-tracked Riccati–Bessel functions usable for any `μ ≥ 0`, `x > 0`.
pub fn riccati_bessel_scaled(mu: f64, x: f64) -> Result<ScaledRiccati> {
    let b = bessel_jy_scaled(mu, x)?;
    let s = (0.5 * PI * x).sqrt();
    let half = 0.5 / x;
    Ok(ScaledRiccati {
        j: s * b.j,
        jp: s * (b.jp + half * b.j),
        y: s * b.y,
        yp: s * (b.yp + half * b.y),
        scale: b.scale,
    })
}

/// Ordinary Bessel functions `J_ν, Y_ν` with derivatives, exponent tracked like [`ScaledRiccati`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledBessel {
    pub j: f64,
    pub jp: f64,
    pub y: f64,
    pub yp: f64,
    pub scale: f64,
}

/// Series coefficients of `1/Γ(1+z)` beyond the constant term.
const RGAM_C4: f64 = -0.042_002_635_034_095_2;
const RGAM_C6: f64 = -0.042_197_734_555_544_3;

/// Temme's `γ₁, γ₂` together with `1/Γ(1+μ)` and `1/Γ(1-μ)` for `|μ| ≤ 1/2`.
fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    let gampl = 1.0 / gamma_unchecked(1.0 + mu);
    let gammi = 1.0 / gamma_unchecked(1.0 - mu);
    let gam2 = 0.5 * (gammi + gampl);
    let gam1 = if mu.abs() < 1e-3 {
        let m2 = mu * mu;
        -(EULER_GAMMA + RGAM_C4 * m2 + RGAM_C6 * m2 * m2)
    } else {
        (gammi - gampl) / (2.0 * mu)
    };
    (gam1, gam2, gampl, gammi)
}

/// Below this argument the continued fractions are used at every order.
const ASYMPTOTIC_MIN_X: f64 = 500.0;

/// Hankel's large-argument expansion of `(J_ν(x), Y_ν(x))`, valid for `ν² ≪ x`.
fn hankel_asymptotic(nu: f64, x: f64) -> (f64, f64) {
    let m = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        term *= (m - odd * odd) / (k as f64 * 8.0 * x);
        if term.abs() > prev {
            break;
        }
        prev = term.abs();
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 * p.abs().max(q.abs()) {
            break;
        }
    }
    let chi = x - (0.5 * nu + 0.25) * PI;
    let (sc, cc) = chi.sin_cos();
    let amp = (2.0 / (PI * x)).sqrt();
    (amp * (p * cc - q * sc), amp * (p * sc + q * cc))
}

pub fn bessel_jy_scaled(nu: f64, x: f64) -> Result<ScaledBessel> {
    const EPS: f64 = 1e-16;
    const FPMIN: f64 = 1e-300;
    const MAXIT: usize = 1_000_000;
    const BIG: f64 = 1e200;
    const XMIN: f64 = 2.0;
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(Error::Domain(format!("Bessel order must be >= 0, got {nu}")));
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("Bessel argument must be > 0, got {x}")));
    }
    if x >= ASYMPTOTIC_MIN_X && nu * nu <= 0.25 * x {
        let (j, y) = hankel_asymptotic(nu, x);
        let (j1, y1) = hankel_asymptotic(nu + 1.0, x);
        return Ok(ScaledBessel {
            j,
            jp: nu / x * j - j1,
            y,
            yp: nu / x * y - y1,
            scale: 0.0,
        });
    }
    let nl = if x < XMIN {
        (nu + 0.5).floor() as usize
    } else {
        (nu - x + 1.5).floor().max(0.0) as usize
    };
    let xmu = nu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;

    // CF1: J'_ν / J_ν by modified Lentz.
    let mut isign = 1.0;
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    let mut converged = false;
    for _ in 0..MAXIT {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Range(format!("CF1 failed for nu = {nu}, x = {x}")));
    }

    // Downward recurrence from ν to μ = ν - nl with exponent tracking.
    let mut rjl = isign;
    let mut rjpl = h * rjl;
    let rjl1 = rjl;
    let rjp1 = rjpl;
    let mut log_j = 0.0;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
        if rjl.abs() > BIG {
            rjl /= BIG;
            rjpl /= BIG;
            log_j += BIG.ln();
        }
    }
    if rjl == 0.0 {
        rjl = EPS;
    }
    let f = rjpl / rjl;

    let (rjmu, mut rymu, mut ry1);
    if x < XMIN {
        let x2 = 0.5 * x;
        let pimu = PI * xmu;
        let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = xmu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = temme_gammas(xmu);
        let mut ff = 2.0 / PI * fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let e = e.exp();
        let mut p = e / (gampl * PI);
        let mut q = 1.0 / (e * PI * gammi);
        let pimu2 = 0.5 * pimu;
        let fact3 = if pimu2.abs() < EPS { 1.0 } else { pimu2.sin() / pimu2 };
        let r = PI * pimu2 * fact3 * fact3;
        let mut c = 1.0;
        let d = -x2 * x2;
        let mut sum = ff + r * q;
        let mut sum1 = p;
        let mut ok = false;
        for i in 1..MAXIT {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - xmu2);
            c *= d / fi;
            p /= fi - xmu;
            q /= fi + xmu;
            let del = c * (ff + r * q);
            sum += del;
            let del1 = c * p - fi * del;
            sum1 += del1;
            if del.abs() < (1.0 + sum.abs()) * EPS {
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(Error::Range(format!("Temme series failed for x = {x}")));
        }
        rymu = -sum;
        ry1 = -sum1 * xi2;
        let rymup = xmu * xi * rymu - ry1;
        rjmu = w / (rymup - f * rymu);
    } else {
        // Steed's CF2 for p + iq.
        let mut a = 0.25 - xmu2;
        let mut p = -0.5 * xi;
        let mut q = 1.0;
        let br = 2.0 * x;
        let mut bi = 2.0;
        let mut fact = a * xi / (p * p + q * q);
        let mut cr = br + q * fact;
        let mut ci = bi + p * fact;
        let mut den = br * br + bi * bi;
        let mut dr = br / den;
        let mut di = -bi / den;
        let mut dlr = cr * dr - ci * di;
        let mut dli = cr * di + ci * dr;
        let mut temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        let mut ok = false;
        for i in 2..MAXIT {
            a += 2.0 * (i as f64 - 1.0);
            bi += 2.0;
            dr = a * dr + br;
            di = a * di + bi;
            if dr.abs() + di.abs() < FPMIN {
                dr = FPMIN;
            }
            fact = a / (cr * cr + ci * ci);
            cr = br + cr * fact;
            ci = bi - ci * fact;
            if cr.abs() + ci.abs() < FPMIN {
                cr = FPMIN;
            }
            den = dr * dr + di * di;
            dr /= den;
            di /= -den;
            dlr = cr * dr - ci * di;
            dli = cr * di + ci * dr;
            temp = p * dlr - q * dli;
            q = p * dli + q * dlr;
            p = temp;
            if (dlr - 1.0).abs() + dli.abs() < EPS {
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(Error::Range(format!("CF2 failed for x = {x}")));
        }
        let gam = (p - f) / q;
        let mut j = (w / ((p - f) * gam + q)).sqrt();
        if rjl < 0.0 {
            j = -j;
        }
        rjmu = j;
        rymu = rjmu * gam;
        let rymup = rymu * (p + q / gam);
        ry1 = xmu * xi * rymu - rymup;
    }

    // J at order ν from the normalised downward sweep.
    let ratio = rjmu / rjl;
    let mut j_nu = rjl1 * ratio;
    let mut jp_nu = rjp1 * ratio;

    // Upward recurrence for Y with exponent tracking.
    let mut log_y = 0.0;
    for i in 1..=nl {
        let rytemp = (xmu + i as f64) * xi2 * ry1 - rymu;
        rymu = ry1;
        ry1 = rytemp;
        if rytemp.abs() > BIG {
            rymu /= BIG;
            ry1 /= BIG;
            log_y += BIG.ln();
        }
    }
    let y_nu = rymu;
    let yp_nu = nu * xi * rymu - ry1;

    // Bring J onto the exponent of Y: J_true = j_nu·e^{-log_j} = (j_nu·e^{log_y - log_j})·e^{-log_y}.
    let shift = log_y - log_j;
    if shift != 0.0 {
        let m = shift.exp();
        j_nu *= m;
        jp_nu *= m;
    }
    Ok(ScaledBessel {
        j: j_nu,
        jp: jp_nu,
        y: y_nu,
        yp: yp_nu,
        scale: log_y,
    })
}
