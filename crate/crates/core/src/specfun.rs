//! Special functions on the real line: Gamma, Kummer M, Tricomi U, Hermite
//! functions of arbitrary real order, the oscillator Wronskian and the
//! normalized oscillator eigenfunctions.

use std::f64::consts::{LN_2, PI};

use thiserror::Error;

use crate::numerics::{integrate_half_line, CompensatedSum};
use crate::units::Epsilon;

const SQRT_PI: f64 = 1.772_453_850_905_516;
const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

/// Orders with `|ν − round(ν)|` below this are flagged as integer.
pub const INTEGER_ORDER_TOL: f64 = 1e-12;

/// Below this argument U(a, b, x) uses the two-M combination.
pub const KUMMER_PAIR_MAX_X: f64 = 1.0;

const POLYNOMIAL_MAX_ORDER: f64 = 400.0;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecfunError {
    #[error("gamma function pole at z = {0}")]
    Pole(f64),
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("{function} did not converge within {terms} terms")]
    NonConvergence { function: &'static str, terms: usize },
    #[error("invalid accuracy policy: {0}")]
    InvalidPolicy(String),
}

/// Accuracy knobs for the series evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracyPolicy {
    rel_tol: f64,
    max_terms: usize,
    asymptotic_switch: f64,
}

impl Default for AccuracyPolicy {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            max_terms: 500,
            asymptotic_switch: 8.0,
        }
    }
}

impl AccuracyPolicy {
    pub fn new(rel_tol: f64, max_terms: usize, asymptotic_switch: f64) -> Result<Self, SpecfunError> {
        if !(rel_tol > 0.0) || !rel_tol.is_finite() {
            return Err(SpecfunError::InvalidPolicy(format!("rel_tol must be > 0, got {rel_tol}")));
        }
        if max_terms < 10 {
            return Err(SpecfunError::InvalidPolicy(format!("max_terms must be >= 10, got {max_terms}")));
        }
        if !(asymptotic_switch > 0.0) || !asymptotic_switch.is_finite() {
            return Err(SpecfunError::InvalidPolicy(format!(
                "asymptotic_switch must be > 0, got {asymptotic_switch}"
            )));
        }
        Ok(Self {
            rel_tol,
            max_terms,
            asymptotic_switch,
        })
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    pub fn asymptotic_switch(&self) -> f64 {
        self.asymptotic_switch
    }
}

/// Order ν of a Hermite function.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct HermiteOrder(f64);

impl HermiteOrder {
    pub fn new(nu: f64) -> Result<Self, SpecfunError> {
        if nu.is_finite() {
            Ok(Self(nu))
        } else {
            Err(SpecfunError::Domain(format!("Hermite order must be finite, got {nu}")))
        }
    }

    pub fn from_epsilon(eps: Epsilon) -> Self {
        Self(eps.nu())
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// True when ν is within [`INTEGER_ORDER_TOL`] of an integer.
    pub fn is_integer(self) -> bool {
        (self.0 - self.0.round()).abs() < INTEGER_ORDER_TOL
    }

    /// The nearest integer when [`Self::is_integer`] holds.
    pub fn nearest_integer(self) -> Option<i64> {
        self.is_integer().then(|| self.0.round() as i64)
    }

    fn exact_polynomial_degree(self) -> Option<usize> {
        (self.0 >= 0.0 && self.0 <= POLYNOMIAL_MAX_ORDER && self.0.fract() == 0.0).then(|| self.0 as usize)
    }

    fn shifted(self, by: f64) -> Self {
        Self(self.0 + by)
    }
}

fn is_nonpositive_integer(z: f64) -> bool {
    z <= 0.0 && z == z.round()
}

/// sin(πx) with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    let n = (2.0 * x).round();
    let r = PI * (x - 0.5 * n);
    match (n as i64).rem_euclid(4) {
        0 => r.sin(),
        1 => r.cos(),
        2 => -r.sin(),
        _ => -r.cos(),
    }
}

/// cos(πx) with exact zeros at the half-integers.
pub fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}

fn lanczos_gamma(z: f64) -> f64 {
    let z = z - 1.0;
    let mut x = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    let half_pow = t.powf(0.5 * (z + 0.5));
    SQRT_2PI * half_pow * (half_pow * (-t).exp()) * x
}

/// Γ(z) by the Lanczos approximation, with reflection below 1/2.
pub fn gamma(z: f64) -> Result<f64, SpecfunError> {
    if !z.is_finite() {
        return Err(SpecfunError::Domain(format!("gamma argument must be finite, got {z}")));
    }
    if is_nonpositive_integer(z) {
        return Err(SpecfunError::Pole(z));
    }
    if z == z.round() && z <= 31.0 {
        let mut f = 1.0;
        for k in 2..(z as u32) {
            f *= k as f64;
        }
        return Ok(f);
    }
    if z < 0.5 {
        Ok(PI / (sin_pi(z) * lanczos_gamma(1.0 - z)))
    } else {
        Ok(lanczos_gamma(z))
    }
}

/// 1/Γ(z); entire, exactly zero at the non-positive integers.
pub fn recip_gamma(z: f64) -> f64 {
    if is_nonpositive_integer(z) {
        return 0.0;
    }
    if z < 0.5 {
        sin_pi(z) * lanczos_gamma(1.0 - z) / PI
    } else {
        match gamma(z) {
            Ok(g) => 1.0 / g,
            Err(_) => f64::NAN,
        }
    }
}

fn check_finite(args: &[(&str, f64)]) -> Result<(), SpecfunError> {
    for (name, v) in args {
        if !v.is_finite() {
            return Err(SpecfunError::Domain(format!("{name} must be finite, got {v}")));
        }
    }
    Ok(())
}

pub fn kummer_m(a: f64, b: f64, x: f64) -> Result<f64, SpecfunError> {
    kummer_m_with(a, b, x, &AccuracyPolicy::default())
}

/// Kummer's M(a, b, x) by its power series with compensated summation.
///
/// Terms are added until they no longer change the sum; if the term cap is
/// reached first the result is accepted only when the last term is below
/// `rel_tol` relative to the sum.
pub fn kummer_m_with(a: f64, b: f64, x: f64, policy: &AccuracyPolicy) -> Result<f64, SpecfunError> {
    check_finite(&[("a", a), ("b", b), ("x", x)])?;
    if is_nonpositive_integer(b) {
        return Err(SpecfunError::Domain(format!("M(a, b, x) undefined for b = {b}")));
    }
    if x == 0.0 || a == 0.0 {
        return Ok(1.0);
    }
    let mut sum = CompensatedSum::new();
    sum.add(1.0);
    let mut term = 1.0_f64;
    for k in 0..policy.max_terms {
        let kf = k as f64;
        term *= (a + kf) * x / ((b + kf) * (kf + 1.0));
        if term == 0.0 {
            return Ok(sum.value());
        }
        sum.add(term);
        let next_ratio = ((a + kf + 1.0) * x / ((b + kf + 1.0) * (kf + 2.0))).abs();
        if kf > -a && kf > x.abs() && next_ratio < 1.0 && term.abs() <= f64::EPSILON * sum.value().abs() {
            return Ok(sum.value());
        }
    }
    if term.abs() <= policy.rel_tol * sum.value().abs() {
        Ok(sum.value())
    } else {
        Err(SpecfunError::NonConvergence {
            function: "kummer_m",
            terms: policy.max_terms,
        })
    }
}

/// Evaluation route for [`tricomi_u_by`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TricomiRoute {
    /// Pick by argument size (the behaviour of [`tricomi_u`]).
    Auto,
    /// Γ(1−b)/Γ(a−b+1)·M(a,b,x) + Γ(b−1)/Γ(a)·x^{1−b}·M(a−b+1,2−b,x).
    KummerPair,
    /// Laplace integral at a shifted first parameter plus downward recurrence.
    Integral,
    /// Power series in 1/x.
    Asymptotic,
}

pub fn tricomi_u(a: f64, b: f64, x: f64) -> Result<f64, SpecfunError> {
    tricomi_u_by(a, b, x, TricomiRoute::Auto, &AccuracyPolicy::default())
}

pub fn tricomi_u_with(a: f64, b: f64, x: f64, policy: &AccuracyPolicy) -> Result<f64, SpecfunError> {
    tricomi_u_by(a, b, x, TricomiRoute::Auto, policy)
}

/// Tricomi's U(a, b, x) for x > 0 through an explicit route.
pub fn tricomi_u_by(
    a: f64,
    b: f64,
    x: f64,
    route: TricomiRoute,
    policy: &AccuracyPolicy,
) -> Result<f64, SpecfunError> {
    check_finite(&[("a", a), ("b", b), ("x", x)])?;
    if !(x > 0.0) {
        return Err(SpecfunError::Domain(format!("U(a, b, x) needs x > 0, got {x}")));
    }
    if a == 0.0 {
        return Ok(1.0);
    }
    let switch_sq = policy.asymptotic_switch * policy.asymptotic_switch;
    let integer_b = (b - b.round()).abs() < 1e-9;
    let route = match route {
        TricomiRoute::Auto if x > switch_sq => TricomiRoute::Asymptotic,
        TricomiRoute::Auto if x <= KUMMER_PAIR_MAX_X && !integer_b => TricomiRoute::KummerPair,
        TricomiRoute::Auto => TricomiRoute::Integral,
        other => other,
    };
    match route {
        TricomiRoute::KummerPair => {
            if integer_b {
                return Err(SpecfunError::Domain(format!(
                    "the two-M combination is singular for integer b = {b}"
                )));
            }
            let first = if is_nonpositive_integer(a - b + 1.0) {
                0.0
            } else {
                gamma(1.0 - b)? * recip_gamma(a - b + 1.0) * kummer_m_with(a, b, x, policy)?
            };
            let second = if is_nonpositive_integer(a) {
                0.0
            } else {
                gamma(b - 1.0)?
                    * recip_gamma(a)
                    * x.powf(1.0 - b)
                    * kummer_m_with(a - b + 1.0, 2.0 - b, x, policy)?
            };
            Ok(first + second)
        }
        TricomiRoute::Integral => u_by_recurrence(a, b, x),
        TricomiRoute::Asymptotic => u_asymptotic(a, b, x, policy),
        TricomiRoute::Auto => unreachable!("route resolved above"),
    }
}

fn u_laplace(c: f64, b: f64, x: f64) -> Result<f64, SpecfunError> {
    let integrand = |t: f64| (-x * t + (c - 1.0) * t.ln() + (b - c - 1.0) * t.ln_1p()).exp();
    let value = integrate_half_line(integrand, 1e-15)
        .map_err(|e| SpecfunError::Domain(format!("U integral failed: {e}")))?;
    Ok(value * recip_gamma(c))
}

fn u_by_recurrence(a: f64, b: f64, x: f64) -> Result<f64, SpecfunError> {
    if a >= 1.0 {
        return u_laplace(a, b, x);
    }
    let steps = (1.0 - a).floor() as usize + 1;
    let c0 = a + steps as f64;
    let mut upper = u_laplace(c0 + 1.0, b, x)?;
    let mut current = u_laplace(c0, b, x)?;
    let mut c = c0;
    for _ in 0..steps {
        let lower = (2.0 * c + x - b) * current - c * (c - b + 1.0) * upper;
        upper = current;
        current = lower;
        c -= 1.0;
    }
    Ok(current)
}

/// Sum of an asymptotic series whose term ratio is `ratio(s)`, stopped at the
/// smallest term.
fn asymptotic_sum(
    function: &'static str,
    ratio: impl Fn(f64) -> f64,
    growth_phase: f64,
    policy: &AccuracyPolicy,
) -> Result<f64, SpecfunError> {
    let mut sum = CompensatedSum::new();
    sum.add(1.0);
    let mut term = 1.0_f64;
    for s in 0..policy.max_terms {
        let sf = s as f64;
        let next = term * ratio(sf);
        if next == 0.0 {
            return Ok(sum.value());
        }
        if sf > growth_phase && next.abs() > term.abs() {
            break;
        }
        term = next;
        sum.add(term);
        if term.abs() <= f64::EPSILON * sum.value().abs() {
            return Ok(sum.value());
        }
    }
    if term.abs() <= policy.rel_tol * sum.value().abs() {
        Ok(sum.value())
    } else {
        Err(SpecfunError::NonConvergence {
            function,
            terms: policy.max_terms,
        })
    }
}

fn u_asymptotic(a: f64, b: f64, x: f64, policy: &AccuracyPolicy) -> Result<f64, SpecfunError> {
    let c = a - b + 1.0;
    let series = asymptotic_sum(
        "tricomi_u asymptotic series",
        |s| -(a + s) * (c + s) / ((s + 1.0) * x),
        a.abs() + c.abs(),
        policy,
    )?;
    Ok(x.powf(-a) * series)
}

fn hermite_polynomial(n: usize, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

pub fn hermite_nu(nu: HermiteOrder, x: f64) -> Result<f64, SpecfunError> {
    hermite_nu_with(nu, x, &AccuracyPolicy::default())
}

/// H_ν(x) for real ν and all real x.
///
/// Exact non-negative integer orders use the polynomial recurrence. For
/// x ≥ 0, H_ν(x) = 2^ν U(−ν/2, 1/2, x²). For x = −y < 0 the two Kummer terms
/// of the all-x representation add with equal sign, so the series is used up
/// to `asymptotic_switch` and the connection formula beyond.
pub fn hermite_nu_with(nu: HermiteOrder, x: f64, policy: &AccuracyPolicy) -> Result<f64, SpecfunError> {
    check_finite(&[("x", x)])?;
    if let Some(n) = nu.exact_polynomial_degree() {
        return Ok(hermite_polynomial(n, x));
    }
    hermite_nu_continuous_with(nu, x, policy)
}

/// [`hermite_nu`] without the integer-order polynomial shortcut.
pub fn hermite_nu_continuous(nu: HermiteOrder, x: f64) -> Result<f64, SpecfunError> {
    hermite_nu_continuous_with(nu, x, &AccuracyPolicy::default())
}

fn hermite_nu_continuous_with(nu: HermiteOrder, x: f64, policy: &AccuracyPolicy) -> Result<f64, SpecfunError> {
    check_finite(&[("x", x)])?;
    let v = nu.value();
    if x == 0.0 {
        return Ok((v * LN_2).exp() * SQRT_PI * recip_gamma(0.5 * (1.0 - v)));
    }
    if x > 0.0 {
        return Ok((v * LN_2).exp() * tricomi_u_with(-0.5 * v, 0.5, x * x, policy)?);
    }
    let y = -x;
    if y <= connection_switch(v, policy) {
        hermite_negative_series(v, y, policy)
    } else {
        let (growing, log_scale, recessive) = hermite_negative_connection(v, y, policy)?;
        Ok(growing * log_scale.exp() + recessive)
    }
}

/// The connection series only reaches full precision once y² is large
/// against ν, so its onset moves out with the order.
fn connection_switch(v: f64, policy: &AccuracyPolicy) -> f64 {
    policy.asymptotic_switch + 0.25 * (v - 6.0).max(0.0)
}

fn hermite_negative_series(v: f64, y: f64, policy: &AccuracyPolicy) -> Result<f64, SpecfunError> {
    let y2 = y * y;
    let even = kummer_m_with(-0.5 * v, 0.5, y2, policy)? * recip_gamma(0.5 * (1.0 - v));
    let odd = 2.0 * y * kummer_m_with(0.5 * (1.0 - v), 1.5, y2, policy)? * recip_gamma(-0.5 * v);
    Ok((v * LN_2).exp() * SQRT_PI * (even + odd))
}

/// H_ν(−y) = G·e^{L} + R with the dominant part split as mantissa G and log
/// scale L = y², and R = cos(πν)·H_ν(y).
fn hermite_negative_connection(v: f64, y: f64, policy: &AccuracyPolicy) -> Result<(f64, f64, f64), SpecfunError> {
    let y2 = y * y;
    let p = 0.5 * (v + 1.0);
    let q = 0.5 * (v + 2.0);
    let series = asymptotic_sum(
        "hermite connection series",
        |s| (p + s) * (q + s) / ((s + 1.0) * y2),
        p.abs() + q.abs(),
        policy,
    )?;
    let growing = SQRT_PI * recip_gamma(-v) * y.powf(-v - 1.0) * series;
    let recessive = cos_pi(v) * hermite_nu_continuous_with(HermiteOrder(v), y, policy)?;
    Ok((growing, y2, recessive))
}

pub fn hermite_envelope(nu: HermiteOrder, x: f64) -> Result<f64, SpecfunError> {
    hermite_envelope_with(nu, x, &AccuracyPolicy::default())
}

/// e^{−x²/2} H_ν(x) with the Gaussian folded into the exponent of the
/// growing branch, so it stays finite while H_ν alone would overflow.
pub fn hermite_envelope_with(nu: HermiteOrder, x: f64, policy: &AccuracyPolicy) -> Result<f64, SpecfunError> {
    check_finite(&[("x", x)])?;
    let half = 0.5 * x * x;
    if x < -connection_switch(nu.value(), policy) && nu.exact_polynomial_degree().is_none() {
        let (growing, log_scale, recessive) = hermite_negative_connection(nu.value(), -x, policy)?;
        return Ok(growing * (log_scale - half).exp() + recessive * (-half).exp());
    }
    let h = hermite_nu_with(nu, x, policy)?;
    if h == 0.0 {
        return Ok(0.0);
    }
    // split the Gaussian so large |H| and tiny e^{-x²/2} do not meet in isolation
    let g = (-0.5 * half).exp();
    Ok(h * g * g)
}

/// d/dx [e^{−x²/2} H_ν(x)] = e^{−x²/2} (2ν H_{ν−1}(x) − x H_ν(x)).
pub fn hermite_envelope_prime(nu: HermiteOrder, x: f64) -> Result<f64, SpecfunError> {
    let lower = if nu.value() == 0.0 {
        0.0
    } else {
        2.0 * nu.value() * hermite_envelope(nu.shifted(-1.0), x)?
    };
    Ok(lower - x * hermite_envelope(nu, x)?)
}

/// dH_ν/dx = 2ν H_{ν−1}(x).
pub fn hermite_nu_prime(nu: HermiteOrder, x: f64) -> Result<f64, SpecfunError> {
    if nu.value() == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * nu.value() * hermite_nu(nu.shifted(-1.0), x)?)
}

/// W = f_< f_>′ − f_<′ f_> = −2^{ε+1/2} √π / Γ(1/2 − ε) for
/// f_>(x) = e^{−x²/2} H_ν(x) and f_<(x) = f_>(−x).
pub fn wronskian_analytic(epsilon: Epsilon) -> f64 {
    let e = epsilon.value();
    -((e + 0.5) * LN_2).exp() * SQRT_PI * recip_gamma(0.5 - e)
}

/// The same Wronskian evaluated pointwise from the Hermite functions and
/// their derivatives at `y`.
pub fn wronskian_numeric(epsilon: Epsilon, y: f64) -> Result<f64, SpecfunError> {
    let nu = HermiteOrder::from_epsilon(epsilon);
    let f_gt = hermite_envelope(nu, y)?;
    let f_gt_prime = hermite_envelope_prime(nu, y)?;
    let f_lt = hermite_envelope(nu, -y)?;
    let f_lt_prime = -hermite_envelope_prime(nu, -y)?;
    Ok(f_lt * f_gt_prime - f_lt_prime * f_gt)
}

/// Normalized oscillator eigenfunction u_n(x) = (2ⁿ n! √π)^{−1/2} e^{−x²/2} H_n(x).
pub fn sho_eigenfunction(n: usize, x: f64) -> f64 {
    *sho_eigenfunctions(n + 1, x).last().expect("n + 1 >= 1 entries")
}

/// u_0(x), …, u_{count−1}(x) by the normalized three-term recurrence, with
/// the Gaussian carried as a separate log scale.
pub fn sho_eigenfunctions(count: usize, x: f64) -> Vec<f64> {
    const RESCALE: f64 = 1e150;
    let ln_rescale = RESCALE.ln();
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    let mut log_scale = -0.5 * x * x;
    let mut factor = log_scale.exp();
    let mut prev = 0.0_f64;
    let mut cur = PI.powf(-0.25);
    out.push(cur * factor);
    for k in 0..count.saturating_sub(1) {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
            log_scale += ln_rescale;
            factor = log_scale.exp();
        }
        out.push(cur * factor);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(nu: f64) -> HermiteOrder {
        HermiteOrder::new(nu).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn gamma_examples() {
        assert!(rel(gamma(0.5).unwrap(), 1.7724538509055160) < 1e-14);
        assert_eq!(gamma(5.0).unwrap(), 24.0);
        assert!(rel(gamma(-0.5).unwrap(), -3.5449077018110320) < 1e-14);
        assert!(matches!(gamma(-3.0), Err(SpecfunError::Pole(_))));
        assert!(matches!(gamma(0.0), Err(SpecfunError::Pole(_))));
    }

    #[test]
    fn recip_gamma_examples() {
        assert_eq!(recip_gamma(-2.0), 0.0);
        assert_eq!(recip_gamma(0.0), 0.0);
        assert_eq!(recip_gamma(1.0), 1.0);
        assert!(rel(recip_gamma(0.5), 0.5641895835477563) < 1e-14);
    }

    #[test]
    fn sin_pi_is_exact_at_integers() {
        for k in -10..=10 {
            assert_eq!(sin_pi(k as f64), 0.0);
        }
        assert!((sin_pi(0.5) - 1.0).abs() < 1e-16);
        assert!((sin_pi(-1.5) - 1.0).abs() < 1e-16);
        assert!((cos_pi(2.0) - 1.0).abs() < 1e-16);
    }

    #[test]
    fn kummer_examples() {
        assert_eq!(kummer_m(3.7, 0.5, 0.0).unwrap(), 1.0);
        assert!(rel(kummer_m(1.0, 1.0, 1.0).unwrap(), std::f64::consts::E) < 1e-15);
        assert!(matches!(kummer_m(1.0, -2.0, 0.3), Err(SpecfunError::Domain(_))));
    }

    #[test]
    fn kummer_reports_non_convergence() {
        let tight = AccuracyPolicy::new(1e-14, 10, 8.0).unwrap();
        assert!(matches!(
            kummer_m_with(0.5, 0.5, 30.0, &tight),
            Err(SpecfunError::NonConvergence { .. })
        ));
    }

    #[test]
    fn tricomi_examples() {
        assert_eq!(tricomi_u(0.0, 0.5, 2.3).unwrap(), 1.0);
        assert!((tricomi_u(-0.5, 0.5, 0.49).unwrap() - 0.7).abs() < 1e-14);
        assert!(tricomi_u(1.0, 0.5, 0.0).is_err());
        assert!(tricomi_u(1.0, 0.5, -1.0).is_err());
    }

    #[test]
    fn tricomi_routes_agree() {
        let p = AccuracyPolicy::default();
        for &(a, b) in &[(-1.3, 0.5), (0.4, 0.5), (-3.05, 0.5), (1.7, 0.5), (-0.45, 1.5)] {
            for &x in &[0.2, 0.6, 1.0] {
                let pair = tricomi_u_by(a, b, x, TricomiRoute::KummerPair, &p).unwrap();
                let integral = tricomi_u_by(a, b, x, TricomiRoute::Integral, &p).unwrap();
                assert!(rel(pair, integral) < 1e-13, "a={a} x={x}: {pair} vs {integral}");
            }
        }
    }

    #[test]
    fn tricomi_polynomial_case() {
        // U(−1, b, z) = z − b
        for &z in &[0.5, 3.0, 10.0, 50.0, 100.0] {
            let u = tricomi_u(-1.0, 0.5, z).unwrap();
            assert!(rel(u, z - 0.5) < 1e-13, "z={z}: {u}");
        }
    }

    #[test]
    fn hermite_integer_examples() {
        assert!((hermite_nu(order(2.0), 0.7).unwrap() + 0.04).abs() < 1e-14);
        assert!((hermite_nu(order(3.0), -1.1).unwrap() - 2.552).abs() < 1e-12);
        assert_eq!(hermite_nu_prime(order(0.0), 1.3).unwrap(), 0.0);
        assert!((hermite_nu_prime(order(2.0), 0.7).unwrap() - 5.6).abs() < 1e-14);
    }

    #[test]
    fn hermite_continuous_route_matches_polynomials() {
        for n in 0..=8 {
            for &x in &[-7.5, -3.0, -0.4, 0.0, 0.3, 2.2, 5.0, 9.0, -9.0] {
                let poly = hermite_polynomial(n, x);
                let cont = hermite_nu_continuous(order(n as f64), x).unwrap();
                let scale = poly.abs().max((2.0 * x.abs()).powi(n as i32)).max(1.0);
                assert!((poly - cont).abs() < 1e-11 * scale, "n={n} x={x}: {poly} vs {cont}");
            }
        }
    }

    #[test]
    fn wronskian_examples() {
        for n in 0..3 {
            assert_eq!(wronskian_analytic(Epsilon::new(n as f64 + 0.5).unwrap()), 0.0);
        }
        let w = wronskian_analytic(Epsilon::new(1.0).unwrap());
        assert!(rel(w, std::f64::consts::SQRT_2) < 1e-14);
    }

    #[test]
    fn sho_eigenfunction_examples() {
        assert!(rel(sho_eigenfunction(0, 0.0), 0.7511255444649425) < 1e-14);
        assert_eq!(sho_eigenfunction(1, 0.0), 0.0);
        // large order at large argument stays finite
        let v = sho_eigenfunction(500, 30.0);
        assert!(v.is_finite() && v != 0.0);
    }

    #[test]
    fn policy_validation() {
        assert!(AccuracyPolicy::new(0.0, 500, 8.0).is_err());
        assert!(AccuracyPolicy::new(1e-12, 5, 8.0).is_err());
        assert!(AccuracyPolicy::new(1e-12, 500, -1.0).is_err());
    }

    #[test]
    fn integer_flag() {
        assert!(order(3.0 + 1e-13).is_integer());
        assert!(!order(3.0 + 1e-9).is_integer());
        assert_eq!(order(-2.0).nearest_integer(), Some(-2));
    }
}
