//! Conductors of cyclotomic fields and the elementary modular arithmetic
//! used everywhere else.

use crate::error::{Error, Result};

/// A prime power `p^e` dividing a conductor exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimePower {
    pub p: u64,
    pub e: u32,
    pub q: u64,
}

impl PrimePower {
    pub fn phi(&self) -> u64 {
        self.q / self.p * (self.p - 1)
    }
}

/// A validated conductor `m > 1`, `m != 2 (mod 4)`, with its factorization
/// `m = q_1 ... q_t` into coprime prime powers ordered by ascending prime.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Conductor {
    m: u64,
    factors: Vec<PrimePower>,
    phi: u64,
}

impl Conductor {
    pub fn new(m: u64) -> Result<Self> {
        if m <= 1 || m % 4 == 2 {
            return Err(Error::InvalidConductor(m));
        }
        let factors = factorize(m);
        let phi = factors.iter().map(PrimePower::phi).product();
        Ok(Conductor { m, factors, phi })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// The prime powers `q_1 < ... ` ordered by their primes.
    pub fn factors(&self) -> &[PrimePower] {
        &self.factors
    }

    pub fn t(&self) -> usize {
        self.factors.len()
    }

    pub fn phi(&self) -> u64 {
        self.phi
    }

    /// Number of roots of unity in the field.
    pub fn w(&self) -> u64 {
        if self.m % 2 == 1 {
            2 * self.m
        } else {
            self.m
        }
    }

    /// Exponent relating `[A_m : S_m]` to the relative class number.
    pub fn a(&self) -> u32 {
        match self.t() {
            1 => 0,
            t => (1u32 << (t - 2)) - 1,
        }
    }

    pub fn is_prime_power(&self) -> bool {
        self.t() == 1
    }

    /// Human-readable factorization such as `2^2*3*5`.
    pub fn factorization_string(&self) -> String {
        self.factors
            .iter()
            .map(|f| {
                if f.e == 1 {
                    f.p.to_string()
                } else {
                    format!("{}^{}", f.p, f.e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Ascending list of residues in `[1, m)` coprime to `m`.
    pub fn units(&self) -> Vec<u64> {
        units(self.m)
    }
}

/// Every valid conductor in `[lo, hi]`.
pub fn valid_conductors(lo: u64, hi: u64) -> impl Iterator<Item = u64> {
    (lo.max(3)..=hi).filter(|m| m % 4 != 2)
}

/// Factorization by trial division, ascending primes.
pub fn factorize(mut n: u64) -> Vec<PrimePower> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            let mut q = 1;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
                q *= p;
            }
            out.push(PrimePower { p, e, q });
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(PrimePower { p: n, e: 1, q: n });
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n).iter().map(PrimePower::phi).product()
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Ascending residues in `[1, n)` coprime to `n` (`[0]` for `n = 1`).
pub fn units(n: u64) -> Vec<u64> {
    if n == 1 {
        return vec![0];
    }
    (1..n).filter(|&s| gcd(s, n) == 1).collect()
}

/// Least nonnegative residue of `a` modulo `n`.
pub fn modulo(a: i64, n: u64) -> u64 {
    a.rem_euclid(n as i64) as u64
}

/// Extended Euclid: returns `(g, x, y)` with `ax + by = g >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut x0, mut x1) = (1i64, 0i64);
    let (mut y0, mut y1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
        (y0, y1) = (y1, y0 - q * y1);
    }
    if r0 < 0 {
        (-r0, -x0, -y0)
    } else {
        (r0, x0, y0)
    }
}

pub fn mod_inv(a: i64, n: u64) -> Result<u64> {
    if n == 1 {
        return Ok(0);
    }
    let (g, x, _) = ext_gcd(modulo(a, n) as i64, n as i64);
    if g != 1 {
        return Err(Error::NotAUnit { s: a, m: n });
    }
    Ok(modulo(x, n))
}

pub fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    (a as u128 * b as u128 % n as u128) as u64
}

pub fn mod_pow(base: u64, mut exp: u64, n: u64) -> u64 {
    let mut acc = 1u128 % n as u128;
    let mut b = base as u128 % n as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % n as u128;
        }
        b = b * b % n as u128;
        exp >>= 1;
    }
    acc as u64
}

/// Multiplicative order of `a` modulo `n`; `a` must be a unit.
pub fn mult_order(a: u64, n: u64) -> u64 {
    let phi = euler_phi(n);
    let mut ord = phi;
    for f in factorize(phi) {
        for _ in 0..f.e {
            if mod_pow(a, ord / f.p, n) == 1 {
                ord /= f.p;
            } else {
                break;
            }
        }
    }
    ord
}

/// Chinese remaindering of `x = r_i (mod n_i)` for pairwise coprime moduli.
pub fn crt(residues: &[(u64, u64)]) -> u64 {
    let mut x: u128 = 0;
    let mut n: u128 = 1;
    for &(r, ni) in residues {
        // x + n*k = r (mod ni)
        let inv = mod_inv((n % ni as u128) as i64, ni).expect("coprime moduli");
        let diff = (r as i128 - (x % ni as u128) as i128).rem_euclid(ni as i128) as u128;
        let k = diff * inv as u128 % ni as u128;
        x += n * k;
        n *= ni as u128;
    }
    (x % n) as u64
}

/// Canonical solution of `ux + vy = -1`: `x` is the least nonnegative
/// representative of its class modulo `v`.
pub fn bezout_pair(u: u64, v: u64) -> Result<(i64, i64)> {
    if gcd(u, v) != 1 {
        return Err(Error::NotCoprime(u as i64, v as i64));
    }
    // ux = -1 (mod v)
    let x = if v == 1 {
        0
    } else {
        modulo(-(mod_inv(u as i64, v)? as i64), v) as i64
    };
    let y = (-1 - u as i64 * x) / v as i64;
    debug_assert_eq!(u as i64 * x + v as i64 * y, -1);
    Ok((x, y))
}
