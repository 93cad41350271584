//! Adaptive Gauss–Kronrod quadrature (7-point Gauss embedded in 15-point
//! Kronrod) and the nested integrals that realize `D̄` numerically.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

// Kronrod nodes on [0, 1] (symmetric), odd indices are the Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::Config(
                "quadrature tolerances must be positive".into(),
            ));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Config("max_subdivisions must be at least 1".into()));
        }
        Ok(())
    }

    /// Integrand magnitude below which an infinite tail is cut off.
    fn tail_threshold(&self) -> f64 {
        self.abs_tol * 1e-2
    }
}

#[derive(Clone, Copy, Debug)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut gsum = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        k += WGK[j] * pair;
        if j % 2 == 1 {
            gsum += WG[j / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: k * h,
        error: ((k - gsum) * h).abs(),
    }
}

/// `∫_a^b f`, bisecting the worst segment until the summed error estimate
/// meets `max(abs_tol, rel_tol·|I|)`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let mut segments = vec![kronrod(&f, a, b)];
    for _ in 0..cfg.max_subdivisions {
        let total: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        if !total.is_finite() || !error.is_finite() {
            return Err(Error::Quadrature {
                subdivisions: segments.len(),
                estimate: error,
            });
        }
        if error <= cfg.abs_tol.max(cfg.rel_tol * total.abs()) {
            return Ok(total);
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("at least one segment");
        let s = segments.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        segments.push(kronrod(&f, s.a, mid));
        segments.push(kronrod(&f, mid, s.b));
    }
    Err(Error::Quadrature {
        subdivisions: segments.len(),
        estimate: segments.iter().map(|s| s.error).sum(),
    })
}

/// `∫_a^∞ f` (or `∫_{−∞}^a f` for negative `direction`) for an integrand with a decaying envelope. The range is cut
/// where three consecutive probes one `step` apart fall below the tail
/// threshold.
pub fn integrate_tail<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    direction: f64,
    step: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let threshold = cfg.tail_threshold();
    let mut quiet = 0;
    let mut b = a;
    for _ in 0..100_000 {
        b += direction * step;
        if (f(b) * step).abs() < threshold {
            quiet += 1;
            if quiet == 3 {
                let (lo, hi) = if direction < 0.0 { (b, a) } else { (a, b) };
                return integrate(&f, lo, hi, cfg);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::Quadrature {
        subdivisions: 0,
        estimate: f64::INFINITY,
    })
}

/// Numeric Gaussian mean `∫e^{−gz²}u / ∫e^{−gz²}`.
pub fn gauss_mean_numeric<F: Fn(f64) -> f64>(u: F, g: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let step = 0.5 / g.sqrt();
    let w = |z: f64| (-g * z * z).exp() * u(z);
    let total = integrate_tail(w, 0.0, -1.0, step, cfg)? + integrate_tail(w, 0.0, 1.0, step, cfg)?;
    Ok(total / (std::f64::consts::PI / g).sqrt())
}

/// `D̄u(x) = −2∫₀^x dy e^{gy²} ∫_{−∞}^y dz e^{−gz²} u(z)` with the Gaussian
/// mean of `u` subtracted numerically first. For `y > 0` the inner integral
/// is taken as `−∫_y^∞`, which is equal for mean-zero `u` and avoids
/// cancellation. The outer weight is folded into the inner integrand so no
/// large exponential multiplies a tiny one.
pub fn numeric_dbar_1d<F: Fn(f64) -> f64>(
    u: F,
    x: f64,
    g: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    cfg.validate()?;
    if g.is_nan() || g <= 0.0 {
        return Err(Error::Config(format!("g must be positive, got {g}")));
    }
    let mean = gauss_mean_numeric(&u, g, cfg)?;
    let step = 0.5 / g.sqrt();
    let inner = |y: f64| -> Result<f64> {
        let w = |z: f64| (-g * (z * z - y * y)).exp() * (u(z) - mean);
        if y <= 0.0 {
            integrate_tail(w, y, -1.0, step, cfg)
        } else {
            integrate_tail(w, y, 1.0, step, cfg).map(|v| -v)
        }
    };
    outer(x, cfg, inner).map(|v| -2.0 * v)
}

/// Radial `D̄u(r) = −2∫₀^r dr′ r′⁻² e^{2g²r′} ∫₀^{r′} ds s² e^{−2g²s} u(s)`
/// after subtracting the measure mean of `u`. Past the peak of the measure
/// the inner integral is taken as `−∫_{r′}^∞`.
pub fn numeric_dbar_radial<F: Fn(f64) -> f64>(
    u: F,
    r: f64,
    g: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    cfg.validate()?;
    if g.is_nan() || g <= 0.0 {
        return Err(Error::Config(format!("g must be positive, got {g}")));
    }
    if r < 0.0 {
        return Err(Error::Config(format!(
            "radius must be non-negative, got {r}"
        )));
    }
    let a = 2.0 * g * g;
    let step = 0.5 / a;
    let norm = 2.0 / a.powi(3);
    let mean = integrate_tail(|s| s * s * (-a * s).exp() * u(s), 0.0, 1.0, step, cfg)? / norm;
    let peak = 2.0 / a;
    let inner = |rp: f64| -> Result<f64> {
        if rp == 0.0 {
            return Ok(0.0);
        }
        let w = |s: f64| s * s * (-a * (s - rp)).exp() * (u(s) - mean);
        let k = if rp <= peak {
            integrate(w, 0.0, rp, cfg)?
        } else {
            -integrate_tail(w, rp, 1.0, step, cfg)?
        };
        Ok(k / (rp * rp))
    };
    outer(r, cfg, inner).map(|v| -2.0 * v)
}

/// Outer integral over `[0, x]` of an integrand whose evaluation may fail;
/// the first failure is reported.
fn outer<F: Fn(f64) -> Result<f64>>(x: f64, cfg: &QuadratureConfig, f: F) -> Result<f64> {
    let failure = std::cell::RefCell::new(None);
    let value = integrate(
        |y| match f(y) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        },
        0.0,
        x,
        cfg,
    );
    match failure.into_inner() {
        Some(e) => Err(e),
        None => value,
    }
}
