//! Gamma density and maximum-likelihood fitting of infection curves.
//!
//! The density is `f(x) = x^(a-1) e^(-x/b) / (Γ(a) b^a)` with shape `a` and
//! scale `b`. Samples are hop distances, optionally weighted (a histogram
//! bin contributes its distance with its count as weight).

// `!(x > 0)` style guards deliberately reject NaN along with non-positive
// values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use serde::{Deserialize, Serialize};

use crate::epidemic::DistanceHistogram;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
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

/// `ln Γ(x)` for `x > 0` (Lanczos approximation, reflection below 1/2).
pub fn ln_gamma<F: Scalar>(x: F) -> F {
    let half = F::lit(0.5);
    if x < half {
        let pi = F::lit(std::f64::consts::PI);
        return (pi / (pi * x).sin()).ln() - ln_gamma(F::one() - x);
    }
    let x = x - F::one();
    let mut acc = F::lit(LANCZOS_COEFFS[0]);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += F::lit(c) / (x + F::from_usize(i).unwrap());
    }
    let t = x + F::lit(LANCZOS_G) + half;
    F::lit(0.5 * (2.0 * std::f64::consts::PI).ln()) + (x + half) * t.ln() - t + acc.ln()
}

/// Shift used before switching to the asymptotic expansions.
const ASYMPTOTIC_FROM: f64 = 10.0;

/// Digamma ψ(x) for `x > 0`: upward recurrence to `x ≥ 10`, then the
/// asymptotic series in `1/x²`.
pub fn digamma<F: Scalar>(mut x: F) -> F {
    let mut shift = F::zero();
    while x < F::lit(ASYMPTOTIC_FROM) {
        shift -= x.recip();
        x += F::one();
    }
    let inv2 = (x * x).recip();
    // Bernoulli terms B_2k / (2k) for k = 1..=7.
    let series = inv2
        * (F::lit(1.0 / 12.0)
            - inv2
                * (F::lit(1.0 / 120.0)
                    - inv2
                        * (F::lit(1.0 / 252.0)
                            - inv2
                                * (F::lit(1.0 / 240.0)
                                    - inv2
                                        * (F::lit(1.0 / 132.0)
                                            - inv2
                                                * (F::lit(691.0 / 32760.0)
                                                    - inv2 * F::lit(1.0 / 12.0)))))));
    shift + x.ln() - F::lit(0.5) / x - series
}

/// Trigamma ψ'(x) for `x > 0`, by the same recurrence-plus-series scheme.
pub fn trigamma<F: Scalar>(mut x: F) -> F {
    let mut shift = F::zero();
    while x < F::lit(ASYMPTOTIC_FROM) {
        shift += (x * x).recip();
        x += F::one();
    }
    let inv = x.recip();
    let inv2 = inv * inv;
    let series = inv
        + F::lit(0.5) * inv2
        + inv
            * inv2
            * (F::lit(1.0 / 6.0)
                - inv2
                    * (F::lit(1.0 / 30.0)
                        - inv2
                            * (F::lit(1.0 / 42.0)
                                - inv2 * (F::lit(1.0 / 30.0) - inv2 * F::lit(5.0 / 66.0)))));
    shift + series
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitMethod {
    /// Maximum likelihood.
    Mle,
    /// Method of moments.
    Mom,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitDiagnostics<F> {
    /// Total sample weight.
    pub sample_count: F,
    pub log_likelihood: F,
    pub iterations: usize,
    /// The fit landed outside the `a > 1` regime expected of infection
    /// curves.
    pub shape_at_most_one: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaParams<F> {
    pub shape: F,
    pub scale: F,
    pub diagnostics: Option<FitDiagnostics<F>>,
}

impl<F: Scalar> GammaParams<F> {
    pub fn new(shape: F, scale: F) -> Result<Self> {
        if !(shape > F::zero() && scale > F::zero() && shape.is_finite() && scale.is_finite()) {
            return Err(Error::invalid(
                "gamma",
                format!("shape {shape} and scale {scale} must be positive and finite"),
            ));
        }
        Ok(Self {
            shape,
            scale,
            diagnostics: None,
        })
    }

    pub fn mode(&self) -> F {
        ((self.shape - F::one()) * self.scale).max(F::zero())
    }

    pub fn mean(&self) -> F {
        self.shape * self.scale
    }

    fn ln_pdf(&self, x: F) -> F {
        (self.shape - F::one()) * x.ln()
            - x / self.scale
            - ln_gamma(self.shape)
            - self.shape * self.scale.ln()
    }
}

pub fn gamma_pdf<F: Scalar>(x: F, p: &GammaParams<F>) -> Result<F> {
    if !(x > F::zero()) {
        return Err(Error::invalid(
            "x",
            format!("density evaluated at non-positive {x}"),
        ));
    }
    Ok(p.ln_pdf(x).exp())
}

/// Weighted sufficient statistics: total weight, mean, variance and mean of
/// logs.
struct Moments<F> {
    weight: F,
    mean: F,
    variance: F,
    mean_log: F,
}

fn moments<F: Scalar>(samples: &[F], weights: Option<&[F]>) -> Result<Moments<F>> {
    if let Some(w) = weights {
        if w.len() != samples.len() {
            return Err(Error::invalid(
                "weights",
                format!("{} weights for {} samples", w.len(), samples.len()),
            ));
        }
        if let Some(bad) = w.iter().find(|&&w| !(w >= F::zero()) || !w.is_finite()) {
            return Err(Error::invalid(
                "weights",
                format!("weight {bad} is negative or not finite"),
            ));
        }
    }
    if let Some(bad) = samples
        .iter()
        .find(|&&x| !(x > F::zero()) || !x.is_finite())
    {
        return Err(Error::invalid(
            "samples",
            format!("sample {bad} is not positive"),
        ));
    }
    let weight_of = |i: usize| weights.map_or(F::one(), |w| w[i]);
    let mut weight = F::zero();
    let mut sum = F::zero();
    let mut sum_log = F::zero();
    let mut support = 0usize;
    for (i, &x) in samples.iter().enumerate() {
        let w = weight_of(i);
        if w > F::zero() {
            support += 1;
        }
        weight += w;
        sum += w * x;
        sum_log += w * x.ln();
    }
    if support < 2 {
        return Err(Error::Degenerate(
            "gamma fit needs at least two weighted samples".into(),
        ));
    }
    let mean = sum / weight;
    let variance = samples
        .iter()
        .enumerate()
        .map(|(i, &x)| weight_of(i) * (x - mean) * (x - mean))
        .sum::<F>()
        / weight;
    if !(variance > F::zero()) {
        return Err(Error::Degenerate(
            "gamma fit needs samples that are not all equal".into(),
        ));
    }
    Ok(Moments {
        weight,
        mean,
        variance,
        mean_log: sum_log / weight,
    })
}

fn log_likelihood<F: Scalar>(p: &GammaParams<F>, samples: &[F], weights: Option<&[F]>) -> F {
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| weights.map_or(F::one(), |w| w[i]) * p.ln_pdf(x))
        .sum()
}

/// Solves `ln a − ψ(a) = target` for `a`. The left side decreases strictly
/// from +∞ to 0, so Newton steps are safeguarded by a bisection bracket.
fn solve_shape<F: Scalar>(target: F, initial: F, tol: F) -> Result<(F, usize)> {
    let f = |a: F| a.ln() - digamma(a) - target;
    let (mut lo, mut hi) = (initial, initial);
    while f(lo) < F::zero() {
        lo /= F::lit(2.0);
    }
    while f(hi) > F::zero() {
        hi *= F::lit(2.0);
    }
    let mut a = initial;
    const CAP: usize = 200;
    for it in 1..=CAP {
        let fa = f(a);
        if fa > F::zero() {
            lo = a;
        } else {
            hi = a;
        }
        let slope = a.recip() - trigamma(a);
        let mut next = a - fa / slope;
        if !(next > lo && next < hi) {
            next = (lo + hi) / F::lit(2.0);
        }
        if (next - a).abs() <= tol * next || fa == F::zero() {
            return Ok((next, it));
        }
        a = next;
    }
    Err(Error::NotConverged {
        what: "gamma shape solver",
        cap: CAP,
        residual: f(a).to_f64().unwrap_or(f64::NAN),
    })
}

/// Fits a Gamma distribution to positive samples. With [`FitMethod::Mle`]
/// the shape solves `ln a − ψ(a) = ln(mean) − mean(ln x)` starting from the
/// moment estimate `mean² / variance`, and `b = mean / a`.
pub fn fit_gamma<F: Scalar>(
    samples: &[F],
    weights: Option<&[F]>,
    method: FitMethod,
) -> Result<GammaParams<F>> {
    let m = moments(samples, weights)?;
    let mom_shape = m.mean * m.mean / m.variance;
    let (shape, iterations) = match method {
        FitMethod::Mom => (mom_shape, 0),
        FitMethod::Mle => {
            let target = m.mean.ln() - m.mean_log;
            if !(target > F::zero()) {
                // Rounding can erase the Jensen gap for nearly constant data.
                return Err(Error::Degenerate(
                    "samples too concentrated for a maximum-likelihood gamma fit".into(),
                ));
            }
            solve_shape(target, mom_shape, F::default_tolerance())?
        }
    };
    let mut params = GammaParams::new(shape, m.mean / shape)?;
    params.diagnostics = Some(FitDiagnostics {
        sample_count: m.weight,
        log_likelihood: log_likelihood(&params, samples, weights),
        iterations,
        shape_at_most_one: shape <= F::one(),
    });
    Ok(params)
}

/// Fits the histogram's distances weighted by their counts.
pub fn fit_histogram<F: Scalar>(
    h: &DistanceHistogram,
    method: FitMethod,
) -> Result<GammaParams<F>> {
    let (samples, weights): (Vec<F>, Vec<F>) = h
        .bins()
        .filter(|&(_, c)| c > 0)
        .map(|(d, c)| (F::from_u32(d).unwrap(), F::from_count(c)))
        .unzip();
    fit_gamma(&samples, Some(&weights), method)
}

/// The density sampled on a strictly ascending positive grid.
pub fn curve_points<F: Scalar>(p: &GammaParams<F>, grid: &[F]) -> Result<Vec<(F, F)>> {
    if grid.is_empty() {
        return Err(Error::invalid("grid", "empty evaluation grid"));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("grid", "grid must be strictly ascending"));
    }
    grid.iter()
        .map(|&x| gamma_pdf(x, p).map(|y| (x, y)))
        .collect()
}
