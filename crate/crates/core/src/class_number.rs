//! The index `[A_m : S_m]` as a determinant of a sign matrix built from the
//! short basis, the relative class number it yields, and explicit upper
//! bounds for that class number.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::conductor::{gcd, is_prime, Conductor};
use crate::error::{Error, Result};
use crate::linalg::{det_bareiss, det_bareiss_parallel, IntMatrix};
use crate::stickelberger::alphas_on_mprime;

/// Matrices at least this large are eliminated with row-parallel Bareiss.
const PARALLEL_DET_THRESHOLD: usize = 48;

/// 0/1 coefficients of `alpha_m(b)`, `b` in `M'_m`, on the half system
/// `{s : 1 <= s < m/2, (s, m) = 1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientMatrix {
    pub m: u64,
    /// Row labels `b`, ascending.
    pub rows: Vec<u64>,
    /// Column labels `s`, ascending.
    pub cols: Vec<u64>,
    pub entries: Vec<Vec<u8>>,
}

impl CoefficientMatrix {
    /// The `+-1` matrix `2A - J`.
    pub fn sign_matrix(&self) -> IntMatrix {
        let rows = self
            .entries
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&x| BigInt::from(2 * i64::from(x) - 1))
                    .collect()
            })
            .collect();
        IntMatrix::from_rows(rows, self.cols.len()).expect("square")
    }
}

pub fn coefficient_matrix(m: u64) -> Result<CoefficientMatrix> {
    let cols: Vec<u64> = (1..m.div_ceil(2)).filter(|&s| gcd(s, m) == 1).collect();
    let alphas = alphas_on_mprime(m)?;
    let rows = alphas.iter().map(|(b, _)| *b).collect();
    let entries = alphas
        .iter()
        .map(|(_, a)| cols.iter().map(|&s| u8::from(a.contains(s))).collect())
        .collect();
    Ok(CoefficientMatrix {
        m,
        rows,
        cols,
        entries,
    })
}

/// `[A_m : S_m] = |det(2A - J)| / 2^{n-1}` with `n = phi(m)/2`.
pub fn index_a_s(m: u64) -> Result<BigInt> {
    index_from_matrix(&coefficient_matrix(m)?)
}

pub fn index_from_matrix(cm: &CoefficientMatrix) -> Result<BigInt> {
    let n = cm.cols.len();
    let sign = cm.sign_matrix();
    let det = if n >= PARALLEL_DET_THRESHOLD {
        det_bareiss_parallel(&sign)?
    } else {
        det_bareiss(&sign)?
    };
    let pow = BigInt::one() << (n - 1);
    let (q, r) = det.abs().div_rem(&pow);
    if !r.is_zero() {
        return Err(Error::Inconsistent(format!(
            "determinant {det} of the sign matrix for m = {} is not divisible by 2^{}",
            cm.m,
            n - 1
        )));
    }
    Ok(q)
}

/// A nonnegative real `r * sqrt(s)` with `r`, `s` rational and `s > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactBound {
    pub factor: BigRational,
    pub radicand: BigRational,
}

impl ExactBound {
    pub fn rational(r: BigRational) -> Self {
        ExactBound {
            factor: r,
            radicand: BigRational::one(),
        }
    }

    /// `r^2 s`, the square of the value.
    pub fn squared(&self) -> BigRational {
        &self.factor * &self.factor * &self.radicand
    }

    pub fn is_rational(&self) -> bool {
        self.radicand.is_one()
    }

    /// Exact comparison against an integer.
    pub fn dominates(&self, h: &BigInt) -> bool {
        if h.is_negative() {
            return true;
        }
        let h2 = BigRational::from_integer(h * h);
        self.squared() >= h2
    }

    /// Exact text form such as `121/32*sqrt(11/4)`.
    pub fn exact_string(&self) -> String {
        if self.is_rational() {
            self.factor.to_string()
        } else {
            format!("{}*sqrt({})", self.factor, self.radicand)
        }
    }

    /// Decimal rendering truncated to `digits` significant digits;
    /// scientific notation once the integer part is longer than that.
    pub fn to_decimal(&self, digits: usize) -> String {
        let sq = self.squared();
        if sq.is_zero() {
            return "0".into();
        }
        let (num, den) = (
            sq.numer().magnitude().clone(),
            sq.denom().magnitude().clone(),
        );
        let mut k: u32 = digits as u32 + 10;
        let v = loop {
            let scaled: BigUint = num.clone() * BigUint::from(10u8).pow(2 * k) / &den;
            let v = scaled.sqrt();
            let len = v.to_string().len();
            if len >= digits || k > 100_000 {
                break (v, len);
            }
            k += (digits - len) as u32 + 1;
        };
        let (v, len) = v;
        // keep `digits` leading digits; the value is v * 10^-k
        let s = v.to_string();
        let kept = &s[..digits.min(len)];
        let exp10 = len as i64 - k as i64 - 1;
        let int_len = exp10 + 1;
        let trim = |t: &str| -> String {
            let t = t.trim_end_matches('0');
            t.trim_end_matches('.').to_string()
        };
        if int_len > digits as i64 {
            let body = trim(&format!("{}.{}", &kept[..1], &kept[1..]));
            format!("{body}e{exp10}")
        } else if int_len > 0 {
            let (a, b) = kept.split_at(int_len as usize);
            trim(&format!("{a}.{b}"))
        } else {
            let zeros = "0".repeat((-int_len) as usize);
            trim(&format!("0.{zeros}{kept}"))
        }
    }
}

impl PartialOrd for ExactBound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.squared().cmp(&other.squared()))
    }
}

impl fmt::Display for ExactBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(50))
    }
}

fn rat(n: impl Into<BigInt>, d: impl Into<BigInt>) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `2^{1-a} (phi/8)^{phi/4}`.
pub fn upper_bound(m: u64) -> Result<ExactBound> {
    let c = Conductor::new(m)?;
    let phi = c.phi();
    let base = rat(phi, 8u32);
    let lead = rat(BigInt::from(2), BigInt::one() << c.a());
    let half_exp = phi / 2;
    let factor = lead * Pow::pow(&base, (half_exp / 2) as u32);
    Ok(if half_exp % 2 == 0 {
        ExactBound::rational(factor)
    } else {
        ExactBound {
            factor,
            radicand: base,
        }
    })
}

/// `8 sqrt(p) (p/16)^{(p-1)/2}` for an odd prime `p`, a bound for `m = 4p`.
pub fn louboutin_bound_4p(p: u64) -> Result<ExactBound> {
    if p == 2 || !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let factor = rat(8u32, 1u32) * Pow::pow(&rat(p, 16u32), ((p - 1) / 2) as u32);
    Ok(ExactBound {
        factor,
        radicand: rat(p, 1u32),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Determinant,
    Analytic,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Determinant => "det",
            Method::Analytic => "analytic",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassNumberReport {
    pub m: u64,
    /// `[A_m : S_m] = 2^a h_m^-`.
    pub index: BigInt,
    pub a: u32,
    pub h_minus: BigInt,
    pub bound: ExactBound,
    pub method: Method,
}

impl ClassNumberReport {
    pub fn within_bound(&self) -> bool {
        self.bound.dominates(&self.h_minus)
    }
}

pub fn h_minus_det(m: u64) -> Result<ClassNumberReport> {
    let c = Conductor::new(m)?;
    let index = index_a_s(m)?;
    let (h, r) = index.div_rem(&(BigInt::one() << c.a()));
    if !r.is_zero() {
        return Err(Error::Inconsistent(format!(
            "index {index} for m = {m} is not divisible by 2^{}",
            c.a()
        )));
    }
    Ok(ClassNumberReport {
        m,
        index,
        a: c.a(),
        h_minus: h,
        bound: upper_bound(m)?,
        method: Method::Determinant,
    })
}
