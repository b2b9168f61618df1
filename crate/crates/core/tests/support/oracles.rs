//! Reference values computed without the library's numerics.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// `atan(1/x) * 10^scale`, truncated, by the alternating Taylor series in
/// fixed point.
fn arctan_inv(x: i64, unit: &BigInt) -> BigInt {
    let x2 = BigInt::from(x * x);
    let mut power = unit / x;
    let mut sum = power.clone();
    let mut n = 1i64;
    loop {
        power = &power / &x2;
        let term = &power / (2 * n + 1);
        if term.is_zero() {
            return sum;
        }
        if n % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        n += 1;
    }
}

/// Pi to within `10^-digits` from Machin's formula
/// `pi = 16 atan(1/5) - 4 atan(1/239)`.
pub fn machin_pi(digits: u32) -> BigRational {
    let guard = 10;
    let unit = num_traits::pow(BigInt::from(10), (digits + guard) as usize);
    let fixed = arctan_inv(5, &unit) * 16 - arctan_inv(239, &unit) * 4;
    BigRational::new(fixed, unit)
}

pub fn decimal(r: &BigRational, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), places);
    let scaled = (r * BigRational::from_integer(scale)).round().to_integer();
    let neg = scaled.is_negative();
    let s = scaled.abs().to_string();
    let s = format!("{}{}", "0".repeat((places + 1).saturating_sub(s.len())), s);
    let (int, frac) = s.split_at(s.len() - places);
    format!("{}{int}.{frac}", if neg { "-" } else { "" })
}

/// Number of partitions of each `m <= n_max`, by listing every partition
/// as a nonincreasing sequence.
pub fn partition_counts(n_max: usize) -> Vec<u64> {
    fn walk(remaining: usize, largest: usize, count: &mut u64) {
        if remaining == 0 {
            *count += 1;
            return;
        }
        for part in (1..=largest.min(remaining)).rev() {
            walk(remaining - part, part, count);
        }
    }
    (0..=n_max)
        .map(|m| {
            let mut c = 0;
            walk(m, m, &mut c);
            c
        })
        .collect()
}

/// `sum_{j>=0} 1/(z+j)^2` from partial sums at `N, 2N, 4N` with the
/// `1/N` and `1/N^2` error terms removed by Richardson extrapolation.
pub fn trigamma_richardson(z: f64) -> f64 {
    let partial = |n: usize| -> f64 {
        let mut s = 0.0f64;
        let mut c = 0.0f64;
        for j in (0..n).rev() {
            let t = 1.0 / ((z + j as f64) * (z + j as f64));
            let y = t - c;
            let u = s + y;
            c = (u - s) - y;
            s = u;
        }
        s
    };
    let n = 4000;
    let (a, b, c) = (partial(n), partial(2 * n), partial(4 * n));
    let r1 = 2.0 * b - a;
    let r2 = 2.0 * c - b;
    (4.0 * r2 - r1) / 3.0
}

/// Consecutive partial sums of `5/2 sum (-1)^(n+1)/(n^3 C(2n,n))` around
/// `n = terms`; the limit lies between them.
pub fn zeta3_bracket(terms: usize) -> (BigRational, BigRational) {
    let mut sum = BigRational::zero();
    let mut central = BigInt::one();
    let mut prev = sum.clone();
    for n in 1..=terms as i64 {
        central = central * (2 * (2 * n - 1)) / n;
        let t = BigRational::new(BigInt::one(), BigInt::from(n * n * n) * &central);
        prev = sum.clone();
        if n.is_odd() {
            sum += t;
        } else {
            sum -= t;
        }
    }
    let scale = BigRational::new(5.into(), 2.into());
    let (a, b) = (prev * &scale, sum * &scale);
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// `sum 1/n^3` by direct summation to `N` plus the Euler-Maclaurin tail.
pub fn zeta3_euler_maclaurin() -> f64 {
    let n = 1000usize;
    let head: f64 = (1..n).rev().map(|j| 1.0 / (j as f64).powi(3)).sum();
    let x = n as f64;
    head + 1.0 / (2.0 * x * x) + 1.0 / (2.0 * x.powi(3)) + 1.0 / (4.0 * x.powi(4)) - 1.0 / (12.0 * x.powi(6))
}

/// `ln Gamma(x)` for `x >= 10` by Stirling's series.
fn ln_gamma_large(x: f64) -> f64 {
    let x2 = x * x;
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * x) - 1.0 / (360.0 * x * x2)
        + 1.0 / (1260.0 * x * x2 * x2)
        - 1.0 / (1680.0 * x * x2 * x2 * x2)
}

/// `Gamma(x)` for real non-integer `x`, shifting the argument above 10
/// with `Gamma(x) = Gamma(x+m) / (x (x+1) ... (x+m-1))`.
pub fn gamma(x: f64) -> f64 {
    let mut m = 0;
    let mut denom = 1.0;
    while x + (m as f64) < 10.0 {
        denom *= x + m as f64;
        m += 1;
    }
    ln_gamma_large(x + m as f64).exp() / denom
}
