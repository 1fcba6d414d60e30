//! Exact rational arithmetic for the discrete side of the bound: central
//! binomials, Wallis integrals, the series coefficients `a_k` of
//! `ln t / (t - 1)` and `b_k` of `(2/pi) K(1, t)` in powers of `1 - t^2`, the
//! sums `h(k)` and `g(k)`, their recurrence, and the sequence `S_k`.
//!
//! Every transcendental factor is eliminated before evaluation:
//! `Gamma(k + 1/2) / (sqrt(pi) Gamma(k + 1)) = C(2k, k) / 4^k` and
//! `psi(k + 1/2) = -gamma - 2 ln 2 + 2 sum_{i<=k} 1/(2i - 1)`. Nothing in
//! this module rounds.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::rational::ExactRational;

/// Reference values of `a_1 ..= a_10`.
pub const REFERENCE_A: [(i64, i64); 10] = [
    (1, 4),
    (7, 48),
    (5, 48),
    (313, 3840),
    (43, 640),
    (12317, 215040),
    (10751, 215040),
    (183349, 4128768),
    (206329, 5160960),
    (66087019, 1816657920),
];

/// Reference values of `a_{k+1} / a_k` for `k = 1 ..= 9`.
pub const REFERENCE_A_RATIO: [(i64, i64); 9] = [
    (7, 12),
    (5, 7),
    (313, 400),
    (258, 313),
    (12317, 14448),
    (10751, 12317),
    (916745, 1032096),
    (825316, 916745),
    (66087019, 72627808),
];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoefficientError {
    #[error("index {index} is below the minimum {min}")]
    IndexTooSmall { index: u32, min: u32 },
    #[error("malformed coefficient table: {0}")]
    MalformedTable(String),
}

fn rat(n: impl Into<BigInt>, d: impl Into<BigInt>) -> ExactRational {
    ExactRational::new(n, d)
}

fn central_binomial_int(k: u32) -> BigUint {
    // C(k + i, i) after step i
    let mut c = BigUint::one();
    for i in 1..=k {
        c = c * (k + i) / i;
    }
    c
}

/// `C(0, 0), C(2, 1), ..., C(2k, k)`.
fn central_binomials(k: u32) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(k as usize + 1);
    let mut c = BigUint::one();
    out.push(c.clone());
    for i in 1..=u64::from(k) {
        // C(2i, i) = C(2i-2, i-1) * 2(2i-1) / i
        c = c * (2 * (2 * i - 1)) / i;
        out.push(c.clone());
    }
    out
}

/// `sum n / (4^e d)` over terms `(n, e, d)`, accumulated on one common
/// denominator and normalised once. Summing term by term renormalises a
/// growing fraction at every step, which dominates for long sums.
fn sum_dyadic(terms: impl Iterator<Item = (BigUint, u64, u64)>) -> ExactRational {
    let terms: Vec<_> = terms.collect();
    let max_exp = terms.iter().map(|t| t.1).max().unwrap_or(0);
    let lcm = terms
        .iter()
        .fold(BigUint::one(), |acc, t| acc.lcm(&BigUint::from(t.2)));
    let numer: BigUint = terms
        .into_iter()
        .map(|(n, e, d)| (n * (&lcm / d)) << (2 * (max_exp - e)))
        .sum();
    let denom = lcm << (2 * max_exp);
    ExactRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// `C(2k, k)`.
pub fn central_binomial(k: u32) -> ExactRational {
    ExactRational::from_biguint(central_binomial_int(k))
}

/// `C(2k, k) / 4^k`, which equals `(2k - 1)!! / (2k)!!`.
pub fn central_binomial_ratio(k: u32) -> ExactRational {
    central_binomial(k) * ExactRational::inv_pow2(2 * u64::from(k))
}

/// `sum_{i=1}^{k} 1 / (2i - 1)`; zero for `k = 0`.
pub fn odd_harmonic(k: u32) -> ExactRational {
    sum_dyadic((1..=u64::from(k)).map(|i| (BigUint::one(), 0, 2 * i - 1)))
}

/// `int_0^{pi/2} sin^n x dx` with the factor `pi / 2` kept symbolic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallisIntegral {
    pub rational: ExactRational,
    /// 1 when the value is `rational * pi / 2`, 0 when it is `rational`.
    pub pi_power: u8,
}

impl WallisIntegral {
    pub fn to_f64(&self) -> f64 {
        let r = self.rational.to_f64();
        if self.pi_power == 1 {
            r * std::f64::consts::FRAC_PI_2
        } else {
            r
        }
    }
}

/// `(n - 1)!! / n!!`, times `pi / 2` for even `n`.
pub fn wallis_integral(n: u32) -> WallisIntegral {
    let m = n / 2;
    if n.is_multiple_of(2) {
        WallisIntegral {
            rational: central_binomial_ratio(m),
            pi_power: 1,
        }
    } else {
        // (2m)!! / (2m + 1)!! = 4^m / (C(2m, m) (2m + 1))
        let denom = central_binomial_ratio(m) * ExactRational::from_integer(2 * i64::from(m) + 1);
        WallisIntegral {
            rational: denom.recip(),
            pi_power: 0,
        }
    }
}

/// `b_k = C(2k, k)^2 / 2^{4k}`.
pub fn b_coeff(k: u32) -> ExactRational {
    central_binomial_ratio(k).pow(2)
}

/// `a_k` from its defining finite sum:
/// `1/(k+1) - (1/2) sum_{i=1}^{k} (2i-1)!! / ((2i)!! (2i-1) (k-i+1))`.
pub fn a_coeff_sum(k: u32) -> ExactRational {
    // (2i-1)!! / (2i)!! = C(2i, i) / 4^i
    let binomials = central_binomials(k);
    let terms = (1..=k).map(|i| {
        let d = (2 * u64::from(i) - 1) * u64::from(k - i + 1);
        (binomials[i as usize].clone(), u64::from(i), d)
    });
    rat(1, i64::from(k) + 1) - sum_dyadic(terms) * rat(1, 2)
}

/// `a_k = (1 / (2(k+1))) [1 - (C(2k,k)/4^k) (sum_{i=1}^{k} 1/(2i-1) - 1)]`.
///
/// Also correct at `k = 0`.
pub fn a_coeff_closed(k: u32) -> ExactRational {
    let bracket =
        ExactRational::one() - central_binomial_ratio(k) * (odd_harmonic(k) - ExactRational::one());
    bracket * rat(1, 2 * (i64::from(k) + 1))
}

/// `h(k) = sum_{i=1}^{k} C(2i-2, i-1) / (i 4^i)`.
pub fn h_sum(k: u32) -> ExactRational {
    let binomials = central_binomials(k);
    sum_dyadic((1..=k).map(|i| {
        (
            binomials[i as usize - 1].clone(),
            u64::from(i),
            u64::from(i),
        )
    }))
}

/// `1/2 - (2 / 4^{k+1}) C(2k, k)`.
pub fn h_closed(k: u32) -> ExactRational {
    rat(1, 2) - central_binomial(k) * ExactRational::inv_pow2(2 * u64::from(k) + 1)
}

/// `g(k) = sum_{i=1}^{k} C(2i-2, i-1) / ((k-i+1) 4^i)`.
pub fn g_sum(k: u32) -> ExactRational {
    let binomials = central_binomials(k);
    let terms = (1..=k).map(|i| {
        (
            binomials[i as usize - 1].clone(),
            u64::from(i),
            u64::from(k - i + 1),
        )
    });
    sum_dyadic(terms)
}

/// `g(k)` after the digamma and gamma-ratio reductions:
/// `(C(2k,k) / 4^k) (1/2) sum_{i=1}^{k} 1/(2i-1)`.
pub fn g_closed(k: u32) -> ExactRational {
    central_binomial_ratio(k) * odd_harmonic(k) * rat(1, 2)
}

/// Whether `2(k+1) g(k+1) - (2k+1) g(k) = (1/2) C(2k,k) / 4^k`, with `g` from
/// its defining sum.
pub fn zeilberger_check(k: u32) -> bool {
    recurrence_holds(k, &g_sum(k), &g_sum(k + 1))
}

pub(crate) fn recurrence_holds(k: u32, g_k: &ExactRational, g_next: &ExactRational) -> bool {
    let k = i64::from(k);
    let lhs = rat(2 * (k + 1), 1) * g_next - rat(2 * k + 1, 1) * g_k;
    lhs == central_binomial_ratio(k as u32) * rat(1, 2)
}

/// `S_k = 2(k+1)^2 / (k(2k+1)) - sum_{i=2}^{k} 1/(2i-1)` for `k >= 2`.
pub fn s_seq(k: u32) -> Result<ExactRational, CoefficientError> {
    if k < 2 {
        return Err(CoefficientError::IndexTooSmall { index: k, min: 2 });
    }
    Ok(s_from_harmonic(k, &odd_harmonic(k)))
}

fn s_from_harmonic(k: u32, odd_harmonic_k: &ExactRational) -> ExactRational {
    let k = i64::from(k);
    rat(2 * (k + 1) * (k + 1), k * (2 * k + 1)) - (odd_harmonic_k - ExactRational::one())
}

/// Both sides of the rearranged form of `a_{k+1} / a_k > ((2k+1)/(2k+2))^2`,
/// valid for `k >= 2`:
///
/// `[T_{k+1} - ((k+1/2)(k+2)/(k+1)^2) T_k] C(2k+2,k+1)/4^{k+1}` against
/// `1 - (k+1/2)^2 (k+2) / (k+1)^3`, where `T_n = sum_{i=2}^{n} 1/(2i-1)`.
pub fn rearranged_inequality_sides(
    k: u32,
) -> Result<(ExactRational, ExactRational), CoefficientError> {
    if k < 2 {
        return Err(CoefficientError::IndexTooSmall { index: k, min: 2 });
    }
    let t_k = odd_harmonic(k) - ExactRational::one();
    let t_next = &t_k + rat(1, 2 * i64::from(k) + 1);
    let kk = i64::from(k);
    let weight = rat((2 * kk + 1) * (kk + 2), 2 * (kk + 1) * (kk + 1));
    let lhs = (t_next - weight * t_k) * central_binomial_ratio(k + 1);
    let rhs =
        ExactRational::one() - rat((2 * kk + 1) * (2 * kk + 1) * (kk + 2), 4 * (kk + 1).pow(3));
    Ok((lhs, rhs))
}

/// `((2k+1) / (2k+2))^2 = b_{k+1} / b_k`.
pub fn b_ratio(k: u32) -> ExactRational {
    let k = i64::from(k);
    rat(2 * k + 1, 2 * k + 2).pow(2)
}

/// A column of [`CoefficientTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Column {
    A,
    B,
    H,
    G,
    S,
}

impl Column {
    pub const ALL: [Column; 5] = [Column::A, Column::B, Column::H, Column::G, Column::S];

    /// Smallest index stored in this column.
    pub fn first_index(self) -> u32 {
        match self {
            Column::B => 0,
            Column::A | Column::H | Column::G => 1,
            Column::S => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Column::A => "a",
            Column::B => "b",
            Column::H => "h",
            Column::G => "g",
            Column::S => "s",
        }
    }
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Column {
    type Err = CoefficientError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Column::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| CoefficientError::MalformedTable(format!("unknown column {s:?}")))
    }
}

/// Exact values of `a_k`, `b_k`, `h(k)`, `g(k)`, `S_k` up to `k_max`.
///
/// Column `c` holds indices `c.first_index() ..= k_max`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawTable")]
pub struct CoefficientTable {
    k_max: u32,
    a: Vec<ExactRational>,
    b: Vec<ExactRational>,
    h: Vec<ExactRational>,
    g: Vec<ExactRational>,
    s: Vec<ExactRational>,
}

#[derive(Deserialize)]
struct RawTable {
    k_max: u32,
    a: Vec<ExactRational>,
    b: Vec<ExactRational>,
    h: Vec<ExactRational>,
    g: Vec<ExactRational>,
    s: Vec<ExactRational>,
}

impl TryFrom<RawTable> for CoefficientTable {
    type Error = CoefficientError;

    fn try_from(raw: RawTable) -> Result<Self, Self::Error> {
        if raw.k_max < 2 {
            return Err(CoefficientError::MalformedTable(format!(
                "k_max = {} < 2",
                raw.k_max
            )));
        }
        let table = CoefficientTable {
            k_max: raw.k_max,
            a: raw.a,
            b: raw.b,
            h: raw.h,
            g: raw.g,
            s: raw.s,
        };
        for column in Column::ALL {
            let expected = (table.k_max - column.first_index() + 1) as usize;
            let got = table.column(column).len();
            if got != expected {
                return Err(CoefficientError::MalformedTable(format!(
                    "column {column} has {got} entries, expected {expected}"
                )));
            }
        }
        Ok(table)
    }
}

impl CoefficientTable {
    pub fn k_max(&self) -> u32 {
        self.k_max
    }

    pub fn column(&self, column: Column) -> &[ExactRational] {
        match column {
            Column::A => &self.a,
            Column::B => &self.b,
            Column::H => &self.h,
            Column::G => &self.g,
            Column::S => &self.s,
        }
    }

    fn column_mut(&mut self, column: Column) -> &mut Vec<ExactRational> {
        match column {
            Column::A => &mut self.a,
            Column::B => &mut self.b,
            Column::H => &mut self.h,
            Column::G => &mut self.g,
            Column::S => &mut self.s,
        }
    }

    pub fn get(&self, column: Column, k: u32) -> Option<&ExactRational> {
        let offset = k.checked_sub(column.first_index())?;
        self.column(column).get(offset as usize)
    }

    pub fn a(&self, k: u32) -> Option<&ExactRational> {
        self.get(Column::A, k)
    }

    pub fn b(&self, k: u32) -> Option<&ExactRational> {
        self.get(Column::B, k)
    }

    pub fn h(&self, k: u32) -> Option<&ExactRational> {
        self.get(Column::H, k)
    }

    pub fn g(&self, k: u32) -> Option<&ExactRational> {
        self.get(Column::G, k)
    }

    pub fn s(&self, k: u32) -> Option<&ExactRational> {
        self.get(Column::S, k)
    }

    /// Overwrites one stored entry and returns the previous value. Used for
    /// fault injection against the verifier.
    pub fn replace(
        &mut self,
        column: Column,
        k: u32,
        value: ExactRational,
    ) -> Option<ExactRational> {
        let offset = k.checked_sub(column.first_index())? as usize;
        let slot = self.column_mut(column).get_mut(offset)?;
        Some(std::mem::replace(slot, value))
    }

    /// Rows `k = 0 ..= k_max` with columns `k,a,b,h,g,s`; undefined cells are
    /// empty and values are written as `numerator/denominator`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,a,b,h,g,s\n");
        for k in 0..=self.k_max {
            out.push_str(&k.to_string());
            for column in Column::ALL {
                out.push(',');
                if let Some(value) = self.get(column, k) {
                    out.push_str(&value.to_string());
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Builds every column by O(1)-per-index recurrences:
/// `C(2k,k)/4^k` by the factor `(2k-1)/(2k)`, the odd harmonic sum by one term,
/// `h` by its next summand, and `a`, `g`, `S` from those two running values.
pub fn build_table(k_max: u32) -> Result<CoefficientTable, CoefficientError> {
    if k_max < 2 {
        return Err(CoefficientError::IndexTooSmall {
            index: k_max,
            min: 2,
        });
    }
    let n = k_max as usize;
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n + 1);
    let mut h = Vec::with_capacity(n);
    let mut g = Vec::with_capacity(n);
    let mut s = Vec::with_capacity(n - 1);

    let mut ratio = ExactRational::one();
    let mut harmonic = ExactRational::zero();
    let mut h_k = ExactRational::zero();
    b.push(ExactRational::one());
    for k in 1..=k_max {
        let kk = i64::from(k);
        // C(2k-2, k-1) / 4^k = ratio_{k-1} / 4
        h_k += &ratio * rat(1, 4 * kk);
        ratio = ratio * rat(2 * kk - 1, 2 * kk);
        harmonic += rat(1, 2 * kk - 1);

        b.push(ratio.pow(2));
        let bracket = ExactRational::one() - &ratio * (&harmonic - ExactRational::one());
        a.push(bracket * rat(1, 2 * (kk + 1)));
        h.push(h_k.clone());
        g.push(&ratio * &harmonic * rat(1, 2));
        if k >= 2 {
            s.push(s_from_harmonic(k, &harmonic));
        }
    }
    Ok(CoefficientTable {
        k_max,
        a,
        b,
        h,
        g,
        s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> ExactRational {
        ExactRational::new(n, d)
    }

    /// C(2k, k) from Pascal's triangle.
    fn pascal_central(k: usize) -> BigUint {
        let n = 2 * k;
        let mut row = vec![BigUint::one()];
        for _ in 0..n {
            let mut next = vec![BigUint::one(); row.len() + 1];
            for j in 1..row.len() {
                next[j] = &row[j - 1] + &row[j];
            }
            row = next;
        }
        row[k].clone()
    }

    fn double_factorial(n: u32) -> BigUint {
        (1..=n)
            .rev()
            .step_by(2)
            .fold(BigUint::one(), |acc, x| acc * x)
    }

    #[test]
    fn central_binomial_examples() {
        assert_eq!(central_binomial(0), ExactRational::one());
        assert_eq!(central_binomial(1), ExactRational::from_integer(2));
        assert_eq!(central_binomial(10), ExactRational::from_integer(184756));
        for k in 0..40 {
            assert_eq!(
                central_binomial(k),
                ExactRational::from_biguint(pascal_central(k as usize))
            );
        }
    }

    #[test]
    fn central_ratio_is_double_factorial_quotient() {
        for k in 1..30 {
            let df = ExactRational::new(
                BigInt::from(double_factorial(2 * k - 1)),
                BigInt::from(double_factorial(2 * k)),
            );
            assert_eq!(central_binomial_ratio(k), df);
        }
    }

    #[test]
    fn wallis_examples() {
        assert_eq!(
            wallis_integral(1),
            WallisIntegral {
                rational: r(1, 1),
                pi_power: 0
            }
        );
        assert_eq!(
            wallis_integral(2),
            WallisIntegral {
                rational: r(1, 2),
                pi_power: 1
            }
        );
        assert_eq!(
            wallis_integral(3),
            WallisIntegral {
                rational: r(2, 3),
                pi_power: 0
            }
        );
        assert_eq!(wallis_integral(4).rational, r(3, 8));
        assert_eq!(wallis_integral(5).rational, r(8, 15));
        // int_0^{pi/2} sin^3 = 2/3 by Gauss-Legendre quadrature
        let rule = crate::quadrature::default_rule();
        let numeric = rule.composite(|x| x.sin().powi(3), 0.0, std::f64::consts::FRAC_PI_2, 4);
        assert!((numeric - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn wallis_matches_double_factorials() {
        for n in 1..40u32 {
            let expected = ExactRational::new(
                BigInt::from(double_factorial(n - 1)),
                BigInt::from(double_factorial(n)),
            );
            let w = wallis_integral(n);
            assert_eq!(w.rational, expected, "n = {n}");
            assert_eq!(w.pi_power, u8::from(n % 2 == 0));
        }
    }

    #[test]
    fn b_coeff_examples() {
        assert_eq!(b_coeff(0), r(1, 1));
        assert_eq!(b_coeff(1), r(1, 4));
        assert_eq!(b_coeff(2), r(9, 64));
    }

    #[test]
    fn a_coeff_examples() {
        assert_eq!(a_coeff_sum(0), r(1, 1));
        assert_eq!(a_coeff_closed(0), r(1, 1));
        assert_eq!(a_coeff_sum(1), r(1, 4));
        assert_eq!(a_coeff_closed(1), r(1, 4));
        assert_eq!(a_coeff_closed(4), r(313, 3840));
        assert_eq!(a_coeff_closed(7), r(10751, 215040));
        assert_eq!(a_coeff_sum(10), r(66087019, 1816657920));
    }

    #[test]
    fn a_matches_reference_table() {
        for (k, &(n, d)) in (1..).zip(REFERENCE_A.iter()) {
            assert_eq!(a_coeff_sum(k), r(n, d));
            assert_eq!(a_coeff_closed(k), r(n, d));
        }
        for (k, &(n, d)) in (1..).zip(REFERENCE_A_RATIO.iter()) {
            let ratio = a_coeff_closed(k + 1) / a_coeff_closed(k);
            assert_eq!(ratio, r(n, d));
            assert!(ratio > b_ratio(k));
        }
    }

    #[test]
    fn h_examples() {
        assert_eq!(h_sum(1), r(1, 4));
        assert_eq!(h_closed(1), r(1, 4));
        assert_eq!(h_sum(2), r(5, 16));
        assert_eq!(h_closed(2), r(5, 16));
        assert_eq!(h_sum(3), r(11, 32));
        // increases toward 1/2
        let mut prev = h_closed(1);
        for k in [2, 5, 20, 100, 400] {
            let next = h_closed(k);
            assert!(next > prev && next < r(1, 2));
            prev = next;
        }
        assert!(r(1, 2) - h_closed(400) < r(1, 40));
    }

    #[test]
    fn g_examples() {
        assert_eq!(g_sum(1), r(1, 4));
        assert_eq!(g_closed(1), r(1, 4));
        assert_eq!(g_sum(2), r(1, 4));
        assert_eq!(g_closed(2), r(1, 4));
        assert_eq!(g_sum(3), r(23, 96));
        assert_eq!(g_sum(3), g_closed(3));
    }

    #[test]
    fn zeilberger_examples() {
        assert!(zeilberger_check(1));
        assert!(zeilberger_check(2));
        assert!(zeilberger_check(50));
        assert!(!recurrence_holds(
            3,
            &g_sum(3),
            &(g_sum(4) + r(1, 1_000_000))
        ));
    }

    #[test]
    fn identities_hold_on_small_range() {
        for k in 0..=60 {
            assert_eq!(a_coeff_sum(k), a_coeff_closed(k), "a at {k}");
            assert_eq!(h_sum(k), h_closed(k), "h at {k}");
            assert_eq!(g_sum(k), g_closed(k), "g at {k}");
        }
    }

    #[test]
    fn s_examples() {
        assert_eq!(s_seq(2).unwrap(), r(22, 15));
        assert_eq!(
            s_seq(1),
            Err(CoefficientError::IndexTooSmall { index: 1, min: 2 })
        );
        // Exact values; the sign change happens between k = 10 and k = 11.
        assert_eq!(s_seq(9).unwrap(), r(1294424, 14549535));
        assert_eq!(s_seq(10).unwrap(), r(278266, 14549535));
        let s9 = s_seq(9).unwrap().to_f64();
        let s10 = s_seq(10).unwrap().to_f64();
        let s11 = s_seq(11).unwrap().to_f64();
        assert!((s9 - 0.088_966_692).abs() < 1e-8);
        assert!((s10 - 0.019_125_422).abs() < 1e-8);
        assert!((s11 + 0.042_534_657).abs() < 1e-8);
    }

    #[test]
    fn rearranged_inequality_tracks_ratio_condition() {
        assert!(rearranged_inequality_sides(1).is_err());
        for k in 2..=40 {
            let (lhs, rhs) = rearranged_inequality_sides(k).unwrap();
            let ratio_holds = a_coeff_closed(k + 1) / a_coeff_closed(k) > b_ratio(k);
            assert_eq!(lhs < rhs, ratio_holds, "k = {k}");
            assert!(lhs < rhs);
        }
    }

    #[test]
    fn build_table_examples() {
        assert!(build_table(1).is_err());
        let t = build_table(2).unwrap();
        assert_eq!(t.column(Column::B), &[r(1, 1), r(1, 4), r(9, 64)]);
        let t = build_table(3).unwrap();
        assert_eq!(t.column(Column::H), &[r(1, 4), r(5, 16), r(11, 32)]);
        let t = build_table(10).unwrap();
        let expected: Vec<_> = REFERENCE_A.iter().map(|&(n, d)| r(n, d)).collect();
        assert_eq!(t.column(Column::A), expected.as_slice());
    }

    #[test]
    fn table_agrees_with_definitions() {
        let t = build_table(40).unwrap();
        for k in 0..=40 {
            assert_eq!(t.b(k).unwrap(), &b_coeff(k));
            if k >= 1 {
                assert_eq!(t.a(k).unwrap(), &a_coeff_sum(k));
                assert_eq!(t.h(k).unwrap(), &h_sum(k));
                assert_eq!(t.g(k).unwrap(), &g_sum(k));
                assert_eq!(
                    t.b(k).unwrap() / t.b(k - 1).unwrap(),
                    r(2 * k as i64 - 1, 2 * k as i64).pow(2)
                );
            }
            if k >= 2 {
                assert_eq!(t.s(k).unwrap(), &s_seq(k).unwrap());
                assert!(t.a(k).unwrap() < t.a(k - 1).unwrap());
            }
        }
        assert_eq!(t.a(0), None);
        assert_eq!(t.s(1), None);
        assert_eq!(t.b(41), None);
    }

    #[test]
    fn table_csv_layout() {
        let csv = build_table(2).unwrap().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "k,a,b,h,g,s");
        assert_eq!(lines[1], "0,,1/1,,,");
        assert_eq!(lines[2], "1,1/4,1/4,1/4,1/4,");
        assert_eq!(lines[3], "2,7/48,9/64,5/16,1/4,22/15");
    }

    #[test]
    fn table_json_rejects_wrong_lengths() {
        let t = build_table(4).unwrap();
        let mut value = serde_json::to_value(&t).unwrap();
        let back: CoefficientTable = serde_json::from_value(value.clone()).unwrap();
        assert_eq!(back, t);
        value["s"].as_array_mut().unwrap().pop();
        assert!(serde_json::from_value::<CoefficientTable>(value).is_err());
    }

    #[test]
    fn replace_swaps_single_entry() {
        let mut t = build_table(5).unwrap();
        let old = t.replace(Column::G, 3, r(1, 2)).unwrap();
        assert_eq!(old, g_sum(3));
        assert_eq!(t.g(3).unwrap(), &r(1, 2));
        assert!(t.replace(Column::S, 1, r(0, 1)).is_none());
        assert!(t.replace(Column::A, 6, r(0, 1)).is_none());
    }
}
