//! Complete elliptic integral of the first kind by three independent routes:
//! the hypergeometric series in the modulus, the arithmetic-geometric mean,
//! and Gauss-Legendre quadrature of the two-argument integral
//! `K(a, b) = int_0^{pi/2} dθ / sqrt(a^2 cos^2 θ + b^2 sin^2 θ)`.

use std::f64::consts::{FRAC_PI_2, LN_10};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::coefficients;
use crate::means::{agm, MeanError, MeanInput, DEFAULT_AGM_REL_TOL};
use crate::quadrature;

/// The series route refuses moduli above this; it would need hundreds of terms.
pub const SERIES_MODULUS_LIMIT: f64 = 0.95;

/// Summation stops once the next term is below this fraction of the partial sum.
pub const SERIES_REL_CUTOFF: f64 = 1e-17;

/// Number of cached series coefficients; an upper bound on any term budget.
pub const SERIES_COEFFICIENT_CACHE: usize = 1024;

/// Successive panel doublings must agree to this relative tolerance.
pub const QUADRATURE_REL_TOL: f64 = 1e-13;

pub const DEFAULT_PANEL_BUDGET: usize = 4096;

pub const DEFAULT_TERM_BUDGET: usize = SERIES_COEFFICIENT_CACHE;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Series,
    Agm,
    Quadrature,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Series => "series",
            Method::Agm => "agm",
            Method::Quadrature => "quadrature",
        })
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EllipticError {
    #[error("modulus t = {0} must satisfy 0 <= t < 1")]
    InvalidModulus(f64),
    #[error("argument {name} = {value} must be positive and finite")]
    InvalidArgument { name: &'static str, value: f64 },
    #[error("budget must be at least 1")]
    ZeroBudget,
    #[error("modulus t = {t} exceeds the series limit {limit}; use the AGM route")]
    ModulusTooLarge { t: f64, limit: f64 },
    #[error("series did not reach its cutoff within {} terms", best.terms_or_iterations)]
    TermBudgetExhausted { best: EllipticResult },
    #[error("quadrature did not converge within {} panels (estimate {})", best.terms_or_iterations, best.error_estimate)]
    PanelBudgetExhausted { best: EllipticResult },
    #[error(transparent)]
    Mean(#[from] MeanError),
}

/// Elliptic modulus `t` in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct Modulus(f64);

impl Modulus {
    pub fn new(t: f64) -> Result<Self, EllipticError> {
        if (0.0..1.0).contains(&t) {
            Ok(Self(t))
        } else {
            Err(EllipticError::InvalidModulus(t))
        }
    }

    pub fn t(self) -> f64 {
        self.0
    }

    /// `sqrt(1 - t^2)`, evaluated as `sqrt((1 - t)(1 + t))`.
    pub fn complementary(self) -> f64 {
        ((1.0 - self.0) * (1.0 + self.0)).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticResult {
    pub value: f64,
    pub method: Method,
    pub terms_or_iterations: usize,
    /// A-posteriori estimate of `|value - K|`, not a proven bound.
    pub error_estimate: f64,
}

fn series_coefficients() -> &'static [f64] {
    static COEFFS: OnceLock<Vec<f64>> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let table = coefficients::build_table(SERIES_COEFFICIENT_CACHE as u32 - 1)
            .expect("cache size is above the table minimum");
        table
            .column(coefficients::Column::B)
            .iter()
            .map(|b| b.to_f64())
            .collect()
    })
}

/// Coefficient of `t^{2i}` in `(2/pi) K(t)`: the nearest double to `b_i`.
pub fn series_coefficient(i: usize) -> Option<f64> {
    series_coefficients().get(i).copied()
}

/// `K(t) = (pi/2) sum_i b_i t^{2i}`, stopped when the next term drops below
/// `1e-17` of the partial sum. The error estimate is the first omitted term
/// over `1 - t^2`, a geometric bound on the tail since the term ratio is below
/// `t^2`.
pub fn k_series(m: Modulus, max_terms: usize) -> Result<EllipticResult, EllipticError> {
    if max_terms == 0 {
        return Err(EllipticError::ZeroBudget);
    }
    let t = m.t();
    if t > SERIES_MODULUS_LIMIT {
        return Err(EllipticError::ModulusTooLarge {
            t,
            limit: SERIES_MODULUS_LIMIT,
        });
    }
    let coeffs = series_coefficients();
    let budget = max_terms.min(coeffs.len() - 1);
    let t2 = t * t;
    let tail_factor = FRAC_PI_2 / ((1.0 - t) * (1.0 + t));

    // Neumaier-compensated sum
    let mut sum = 0.0;
    let mut carry = 0.0;
    let mut power = 1.0;
    let mut terms = 0;
    loop {
        let term = coeffs[terms] * power;
        let next_sum = sum + term;
        carry += if sum.abs() >= term.abs() {
            (sum - next_sum) + term
        } else {
            (term - next_sum) + sum
        };
        sum = next_sum;
        terms += 1;
        power *= t2;

        let next_term = coeffs[terms] * power;
        let total = sum + carry;
        let result = EllipticResult {
            value: FRAC_PI_2 * total,
            method: Method::Series,
            terms_or_iterations: terms,
            error_estimate: next_term * tail_factor,
        };
        if next_term < SERIES_REL_CUTOFF * total {
            return Ok(result);
        }
        if terms >= budget {
            return Err(EllipticError::TermBudgetExhausted { best: result });
        }
    }
}

/// `K(t) = pi / (2 M(1, sqrt(1 - t^2)))`.
pub fn k_agm(m: Modulus) -> Result<EllipticResult, EllipticError> {
    k_agm_pair(1.0, m.complementary())
}

/// `K(a, b) = pi / (2 M(a, b))`.
pub fn k_agm_pair(a: f64, b: f64) -> Result<EllipticResult, EllipticError> {
    let input = validated_pair(a, b)?;
    let trace = agm(&input, DEFAULT_AGM_REL_TOL)?;
    let value = FRAC_PI_2 / trace.limit();
    let rel = trace.final_gap() / trace.limit() + 2.0 * f64::EPSILON;
    Ok(EllipticResult {
        value,
        method: Method::Agm,
        terms_or_iterations: trace.iterations(),
        error_estimate: value * rel,
    })
}

fn validated_pair(a: f64, b: f64) -> Result<MeanInput, EllipticError> {
    for (name, value) in [("a", a), ("b", b)] {
        if !(value.is_finite() && value > 0.0) {
            return Err(EllipticError::InvalidArgument { name, value });
        }
    }
    Ok(MeanInput::new(a, b)?)
}

/// `K(a, b)` by composite 20-point Gauss-Legendre quadrature with panel
/// doubling, stopped when two successive refinements agree to `1e-13`.
///
/// The integral is taken after the substitution `tan θ = sqrt(a/b) e^u`,
/// which turns it into `2 int_0^inf du / sqrt(a^2 + b^2 + 2ab cosh 2u)`. That
/// integrand is analytic in the strip `|Im u| < pi/2` whatever the ratio
/// `b/a`, so panels of fixed width converge geometrically even where the
/// original integrand is sharply peaked. The range is cut where the tail
/// bound `2 e^{-U} / sqrt(ab)` falls below `1e-17 K`.
pub fn k_quadrature(a: f64, b: f64, panels: usize) -> Result<EllipticResult, EllipticError> {
    let input = validated_pair(a, b)?;
    if panels == 0 {
        return Err(EllipticError::ZeroBudget);
    }
    let (hi, lo) = input.ordered();
    let rho = lo / hi;
    let rho_sq_plus_one = 1.0 + rho * rho;
    let integrand = |u: f64| 2.0 / (rho_sq_plus_one + 2.0 * rho * (2.0 * u).cosh()).sqrt();

    // K(1, rho) >= pi/2, so this cut leaves a tail below 1e-17 K.
    let upper = (4.0 / std::f64::consts::PI).ln() + 17.0 * LN_10 - 0.5 * rho.ln();
    let tail = 2.0 * (-upper).exp() / rho.sqrt();

    let rule = quadrature::default_rule();
    let mut count = ((upper / 4.0).ceil() as usize).clamp(1, panels);
    let mut previous = rule.composite(integrand, 0.0, upper, count);
    let result = |value: f64, count: usize, delta: f64| EllipticResult {
        value: value / hi,
        method: Method::Quadrature,
        terms_or_iterations: count,
        error_estimate: (delta + tail) / hi,
    };
    // no refinement compared yet
    let mut delta = f64::INFINITY;
    loop {
        if count * 2 > panels {
            let best = result(previous, count, delta);
            return Err(EllipticError::PanelBudgetExhausted { best });
        }
        count *= 2;
        let current = rule.composite(integrand, 0.0, upper, count);
        delta = (current - previous).abs();
        if delta <= QUADRATURE_REL_TOL * current.abs() {
            return Ok(result(current, count, delta));
        }
        previous = current;
    }
}

/// `K(t)` by quadrature of `K(1, sqrt(1 - t^2))`.
pub fn k_quadrature_modulus(m: Modulus, panels: usize) -> Result<EllipticResult, EllipticError> {
    k_quadrature(1.0, m.complementary(), panels)
}

/// `K(t)` by the chosen route with default budgets.
pub fn k_modulus(method: Method, m: Modulus) -> Result<EllipticResult, EllipticError> {
    match method {
        Method::Series => k_series(m, DEFAULT_TERM_BUDGET),
        Method::Agm => k_agm(m),
        Method::Quadrature => k_quadrature_modulus(m, DEFAULT_PANEL_BUDGET),
    }
}

/// `K(a, b)` by the chosen route with default budgets. The series route goes
/// through `K(a, b) = K(t) / max(a, b)` with `t = sqrt(1 - (min/max)^2)`.
pub fn k_pair(method: Method, a: f64, b: f64) -> Result<EllipticResult, EllipticError> {
    match method {
        Method::Series => {
            let (hi, lo) = validated_pair(a, b)?.ordered();
            let rho = lo / hi;
            let m = Modulus::new(((1.0 - rho) * (1.0 + rho)).sqrt())?;
            let k = k_series(m, DEFAULT_TERM_BUDGET)?;
            Ok(EllipticResult {
                value: k.value / hi,
                error_estimate: k.error_estimate / hi,
                ..k
            })
        }
        Method::Agm => k_agm_pair(a, b),
        Method::Quadrature => k_quadrature(a, b, DEFAULT_PANEL_BUDGET),
    }
}

/// `M(a, b) = pi / (2 K(a, b))` with `K` from quadrature.
pub fn m_from_k(a: f64, b: f64) -> Result<f64, EllipticError> {
    let k = k_quadrature(a, b, DEFAULT_PANEL_BUDGET)?;
    Ok(FRAC_PI_2 / k.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::means::{agm_mean, log_mean};
    use crate::rational::ExactRational;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_4, SQRT_2};

    fn modulus(t: f64) -> Modulus {
        Modulus::new(t).unwrap()
    }

    // mpmath ellipk(m = t^2), 40 digits
    const K_AT_HALF: f64 = 1.685_750_354_812_596;
    const K_AT_0_8: f64 = 1.995_302_777_664_729_5;
    const K_AT_0_999999: f64 = 7.947_479_773_547_967;

    #[test]
    fn modulus_validation() {
        assert!(Modulus::new(0.0).is_ok());
        for t in [1.0, -0.1, f64::NAN, 2.0] {
            assert!(matches!(
                Modulus::new(t),
                Err(EllipticError::InvalidModulus(_))
            ));
        }
    }

    #[test]
    fn series_examples() {
        let r = k_series(modulus(0.0), 10).unwrap();
        assert_eq!(r.value, FRAC_PI_2);
        assert_eq!(r.terms_or_iterations, 1);
        assert_eq!(series_coefficient(0), Some(1.0));
        assert_eq!(series_coefficient(1), Some(0.25));
        assert_eq!(series_coefficient(2), Some(9.0 / 64.0));

        let r = k_series(modulus(0.5), DEFAULT_TERM_BUDGET).unwrap();
        assert_relative_eq!(r.value, K_AT_HALF, max_relative = 1e-15);
        let s = k_series(modulus(0.8), DEFAULT_TERM_BUDGET).unwrap();
        let a = k_agm(modulus(0.8)).unwrap();
        assert_relative_eq!(s.value, a.value, max_relative = 1e-13);
        assert_relative_eq!(s.value, K_AT_0_8, max_relative = 1e-14);
        assert!(s.error_estimate < 1e-15);
    }

    #[test]
    fn series_errors() {
        assert!(matches!(
            k_series(modulus(0.96), DEFAULT_TERM_BUDGET),
            Err(EllipticError::ModulusTooLarge { .. })
        ));
        assert!(matches!(
            k_series(modulus(0.5), 0),
            Err(EllipticError::ZeroBudget)
        ));
        match k_series(modulus(0.9), 5) {
            Err(EllipticError::TermBudgetExhausted { best }) => {
                assert_eq!(best.terms_or_iterations, 5);
                assert!(best.value < K_AT_0_8 * 2.0 && best.value > FRAC_PI_2);
                // estimate covers the actual truncation error
                let reference = k_agm(modulus(0.9)).unwrap().value;
                assert!(reference - best.value <= best.error_estimate);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn series_terms_near_limit() {
        let r = k_series(modulus(SERIES_MODULUS_LIMIT), DEFAULT_TERM_BUDGET).unwrap();
        assert!(r.terms_or_iterations > 300 && r.terms_or_iterations < SERIES_COEFFICIENT_CACHE);
    }

    #[test]
    fn series_coefficients_are_nearest_doubles_of_b() {
        let table = coefficients::build_table(600).unwrap();
        for i in 0..=600u32 {
            let c = series_coefficient(i as usize).unwrap();
            let exact = table.b(i).unwrap();
            let err = (ExactRational::from_f64(c).unwrap() - exact).abs();
            for neighbour in [c.next_up(), c.next_down()] {
                let other = (ExactRational::from_f64(neighbour).unwrap() - exact).abs();
                assert!(err <= other, "coefficient {i} is not the nearest double");
            }
        }
    }

    #[test]
    fn agm_examples() {
        assert_eq!(k_agm(modulus(0.0)).unwrap().value, FRAC_PI_2);
        let t = 3f64.sqrt() / 2.0;
        let via_modulus = k_agm(modulus(t)).unwrap().value;
        let direct =
            FRAC_PI_2 / agm_mean(&MeanInput::new(1.0, modulus(t).complementary()).unwrap());
        assert_eq!(via_modulus, direct);
        let half = FRAC_PI_2 / agm_mean(&MeanInput::new(1.0, 0.5).unwrap());
        assert_relative_eq!(via_modulus, half, max_relative = 1e-15);

        let near = k_agm(modulus(0.999_999)).unwrap();
        let quad = k_quadrature_modulus(modulus(0.999_999), DEFAULT_PANEL_BUDGET).unwrap();
        assert!(near.value >= FRAC_PI_2);
        assert_relative_eq!(near.value, quad.value, max_relative = 1e-9);
        assert_relative_eq!(near.value, K_AT_0_999999, max_relative = 1e-12);
    }

    #[test]
    fn quadrature_examples() {
        let r = k_quadrature(1.0, 1.0, DEFAULT_PANEL_BUDGET).unwrap();
        assert_relative_eq!(r.value, FRAC_PI_2, max_relative = 1e-15);
        let r = k_quadrature(2.0, 2.0, DEFAULT_PANEL_BUDGET).unwrap();
        assert_relative_eq!(r.value, FRAC_PI_4, max_relative = 1e-15);
        let q = k_quadrature(1.0, 0.5, DEFAULT_PANEL_BUDGET).unwrap();
        let a = k_agm(modulus(3f64.sqrt() / 2.0)).unwrap();
        assert_relative_eq!(q.value, a.value, max_relative = 1e-12);
        assert!(q.error_estimate < 1e-12);
    }

    #[test]
    fn quadrature_budget_and_arguments() {
        assert!(matches!(
            k_quadrature(0.0, 1.0, 10),
            Err(EllipticError::InvalidArgument { name: "a", .. })
        ));
        assert!(matches!(
            k_quadrature(1.0, f64::NAN, 10),
            Err(EllipticError::InvalidArgument { name: "b", .. })
        ));
        assert!(matches!(
            k_quadrature(1.0, 0.5, 0),
            Err(EllipticError::ZeroBudget)
        ));
        match k_quadrature(1.0, 0.5, 1) {
            Err(EllipticError::PanelBudgetExhausted { best }) => {
                assert!(best.value.is_finite());
                assert!(best.error_estimate.is_infinite());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn m_from_k_examples() {
        assert_relative_eq!(m_from_k(7.0, 7.0).unwrap(), 7.0, max_relative = 1e-15);
        assert_relative_eq!(
            m_from_k(SQRT_2, 1.0).unwrap(),
            1.198_140_234_735_592_2,
            max_relative = 1e-14
        );
        let t = 0.01;
        let ratio = m_from_k(1.0, t).unwrap() / log_mean(&MeanInput::new(1.0, t).unwrap());
        assert!(1.0 < ratio && ratio < FRAC_PI_2);
    }

    #[test]
    fn k_increases_with_modulus() {
        let values: Vec<f64> = (0..100)
            .map(|i| k_agm(modulus(i as f64 / 100.0)).unwrap().value)
            .collect();
        assert!(values.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn pair_dispatch_matches_across_routes() {
        // K(2, 1.6) = K(0.6) / 2
        let expected = k_agm(modulus(0.6)).unwrap().value / 2.0;
        for method in [Method::Series, Method::Agm, Method::Quadrature] {
            let k = k_pair(method, 2.0, 1.6).unwrap();
            assert_eq!(k.method, method);
            assert_relative_eq!(k.value, expected, max_relative = 1e-13);
            let k = k_modulus(method, modulus(0.6)).unwrap();
            assert_relative_eq!(k.value, 2.0 * expected, max_relative = 1e-13);
        }
        assert!(matches!(
            k_pair(Method::Series, 1.0, 0.01),
            Err(EllipticError::ModulusTooLarge { .. })
        ));
        assert!(matches!(
            k_pair(Method::Agm, -1.0, 1.0),
            Err(EllipticError::InvalidArgument { name: "a", .. })
        ));
    }

    proptest! {
        #[test]
        fn three_routes_agree(t in 0.0f64..=0.95) {
            let m = modulus(t);
            let s = k_series(m, DEFAULT_TERM_BUDGET).unwrap().value;
            let a = k_agm(m).unwrap().value;
            let q = k_quadrature_modulus(m, DEFAULT_PANEL_BUDGET).unwrap().value;
            for (x, y) in [(s, a), (s, q), (a, q)] {
                prop_assert!((x - y).abs() <= 1e-11 * x.abs().max(y.abs()));
            }
        }

        #[test]
        fn two_argument_form_is_homogeneous(a in -3.0f64..3.0, b in -3.0f64..3.0, scale in -3.0f64..3.0) {
            let (a, b, s) = (10f64.powf(a), 10f64.powf(b), 10f64.powf(scale));
            let base = k_quadrature(a, b, DEFAULT_PANEL_BUDGET).unwrap().value;
            let scaled = k_quadrature(s * a, s * b, DEFAULT_PANEL_BUDGET).unwrap().value;
            prop_assert!((scaled - base / s).abs() <= 1e-12 * scaled);
        }

        #[test]
        fn reciprocal_relation(a in -3.0f64..3.0, b in -3.0f64..3.0) {
            let (a, b) = (10f64.powf(a), 10f64.powf(b));
            let m = agm_mean(&MeanInput::new(a, b).unwrap());
            let k = k_quadrature(a, b, DEFAULT_PANEL_BUDGET).unwrap().value;
            prop_assert!((m * k / FRAC_PI_2 - 1.0).abs() <= 1e-11);
        }
    }
}
