//! Exact arithmetic in `Z[zeta_n]`, elements stored as integer polynomials
//! of degree below `phi(n)` reduced modulo the cyclotomic polynomial.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::conductor::{gcd, modulo};

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    // den is monic
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let mut out = vec![0i64; num.len() - dn];
    for i in (0..out.len()).rev() {
        let c = rem[i + dn];
        out[i] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    out
}

fn compute_cyclotomic(n: u64) -> Vec<i64> {
    // x^n - 1 divided by every Phi_d, d | n, d < n
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        p = poly_div_exact(&p, &cyclotomic_poly(d));
    }
    p
}

/// Coefficients of the `n`-th cyclotomic polynomial, constant term first.
pub fn cyclotomic_poly(n: u64) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().expect("cache").get(&n) {
        return p.clone();
    }
    let p = Arc::new(compute_cyclotomic(n));
    cache.lock().expect("cache").insert(n, p.clone());
    p
}

/// An element of `Z[zeta_n]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicInteger {
    n: u64,
    coeffs: Vec<BigInt>,
}

impl CyclotomicInteger {
    pub fn zero(n: u64) -> Self {
        let deg = cyclotomic_poly(n).len() - 1;
        CyclotomicInteger {
            n,
            coeffs: vec![BigInt::zero(); deg],
        }
    }

    pub fn from_int(n: u64, c: impl Into<BigInt>) -> Self {
        let mut z = Self::zero(n);
        z.coeffs[0] = c.into();
        z
    }

    pub fn one(n: u64) -> Self {
        Self::from_int(n, 1)
    }

    /// `zeta_n^k`.
    pub fn zeta_power(n: u64, k: i64) -> Self {
        let mut counts = vec![BigInt::zero(); n as usize];
        counts[modulo(k, n) as usize] = BigInt::one();
        Self::from_power_coeffs(n, counts)
    }

    /// `sum_k c_k zeta_n^k` for an arbitrary-length list indexed by `k`.
    pub fn from_power_coeffs(n: u64, coeffs: Vec<BigInt>) -> Self {
        let mut folded = vec![BigInt::zero(); n as usize];
        for (k, c) in coeffs.into_iter().enumerate() {
            if !c.is_zero() {
                folded[k % n as usize] += c;
            }
        }
        Self::reduce(n, folded)
    }

    pub fn from_i64_power_coeffs(n: u64, coeffs: &[i64]) -> Self {
        Self::from_power_coeffs(n, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Remainder of a polynomial modulo `Phi_n`.
    fn reduce(n: u64, mut p: Vec<BigInt>) -> Self {
        let phi = cyclotomic_poly(n);
        let deg = phi.len() - 1;
        if p.len() > deg {
            for i in (deg..p.len()).rev() {
                let c = std::mem::take(&mut p[i]);
                if c.is_zero() {
                    continue;
                }
                for (j, &d) in phi[..deg].iter().enumerate() {
                    if d != 0 {
                        p[i - deg + j] -= &c * d;
                    }
                }
            }
        }
        p.resize(deg, BigInt::zero());
        CyclotomicInteger { n, coeffs: p }
    }

    pub fn order(&self) -> u64 {
        self.n
    }

    /// Coefficients on `1, zeta, ..., zeta^{phi(n)-1}`.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The value if it lies in `Z`.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "orders differ");
        CyclotomicInteger {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "orders differ");
        CyclotomicInteger {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        CyclotomicInteger {
            n: self.n,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        CyclotomicInteger {
            n: self.n,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "orders differ");
        let d = self.coeffs.len();
        let mut prod = vec![BigInt::zero(); 2 * d];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Self::reduce(self.n, prod)
    }

    /// The automorphism `zeta -> zeta^k`, `k` coprime to `n`.
    pub fn sigma(&self, k: i64) -> Self {
        let n = self.n;
        assert_eq!(gcd(modulo(k, n), n), 1, "{k} is not a unit modulo {n}");
        let k = modulo(k, n);
        let mut out = vec![BigInt::zero(); n as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out[(i as u64 * k % n) as usize] += c;
            }
        }
        Self::reduce(n, out)
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        self.sigma(-1)
    }

    /// Absolute norm: the product of all conjugates, an integer.
    pub fn norm(&self) -> BigInt {
        let n = self.n;
        let mut acc = Self::one(n);
        for k in (1..n.max(2)).filter(|&k| gcd(k, n) == 1) {
            acc = acc.mul(&self.sigma(k as i64));
        }
        acc.as_integer().expect("norm is rational")
    }

    /// Embedding `zeta -> exp(2 pi i / n)`, as an `(re, im)` pair.
    pub fn embed(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            let a = 2.0 * std::f64::consts::PI * i as f64 / self.n as f64;
            let c: f64 = c.to_string().parse().unwrap_or(f64::NAN);
            re += c * a.cos();
            im += c * a.sin();
        }
        (re, im)
    }
}

impl fmt::Display for CyclotomicInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = match i {
                0 => c.to_string(),
                1 => format!("{c}*z"),
                _ => format!("{c}*z^{i}"),
            };
            parts.push(term);
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        let s = parts.join(" + ").replace("+ -", "- ");
        f.write_str(&s)
    }
}

/// True when every coefficient is a multiple of `d`.
pub fn divisible_by(x: &CyclotomicInteger, d: &BigInt) -> bool {
    x.coeffs().iter().all(|c| (c % d).is_zero())
}

pub fn abs_max_coeff(x: &CyclotomicInteger) -> BigInt {
    x.coeffs().iter().map(|c| c.abs()).max().unwrap_or_default()
}
