//! `l`-adic evaluation of Jacobi sums for residue fields too large to
//! enumerate.
//!
//! The Gross-Koblitz formula writes the image of `J(b, c)` in the completion
//! at `L` as `(-l)^k` times a ratio of Morita gamma values at fractions
//! `r/m`. That image lies in `Z_l` because `J(b, c)` is fixed by the
//! decomposition group. Images of the conjugates `sigma_t J` at one coset
//! representative `t` of `<l>` each determine `J` modulo `l^K`; for
//! `l^K` well above the coefficient size this recovers `J` exactly, which
//! is then certified by `J conj(J) = q`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::conductor::{euler_phi, gcd, modulo};
use crate::cyclotomic::CyclotomicInteger;
use crate::error::{Error, Result};
use crate::finite_field::PrimeAbove;

/// Largest modulus handled, leaving headroom for additions in `u128`.
const MAX_MODULUS: u128 = 1 << 125;

/// Arithmetic modulo `n < 2^125`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct ModRing {
    n: u128,
}

impl ModRing {
    pub fn new(n: u128) -> Self {
        assert!(n > 1 && n <= MAX_MODULUS, "modulus out of range");
        ModRing { n }
    }

    /// `base^e` as a ring, or `None` once it exceeds the supported range.
    pub fn prime_power(base: u64, e: u32) -> Option<Self> {
        let n = (base as u128).checked_pow(e)?;
        (n <= MAX_MODULUS).then(|| ModRing::new(n))
    }

    pub fn modulus(&self) -> u128 {
        self.n
    }

    pub fn reduce_int(&self, x: &BigInt) -> u128 {
        x.mod_floor(&BigInt::from(self.n))
            .to_u128()
            .expect("reduced")
    }

    /// Symmetric representative in `(-n/2, n/2]`.
    pub fn centered(&self, x: u128) -> BigInt {
        if x > self.n / 2 {
            BigInt::from(x) - BigInt::from(self.n)
        } else {
            BigInt::from(x)
        }
    }

    pub fn add(&self, a: u128, b: u128) -> u128 {
        (a + b) % self.n
    }

    pub fn sub(&self, a: u128, b: u128) -> u128 {
        (a + self.n - b) % self.n
    }

    pub fn neg(&self, a: u128) -> u128 {
        (self.n - a) % self.n
    }

    pub fn mul(&self, a: u128, b: u128) -> u128 {
        if self.n <= 1 << 64 {
            return a * b % self.n;
        }
        let (mut a, mut b, mut acc) = (a, b, 0u128);
        while b > 0 {
            if b & 1 == 1 {
                acc = self.add(acc, a);
            }
            a = self.add(a, a);
            b >>= 1;
        }
        acc
    }

    pub fn pow(&self, a: u128, mut e: u128) -> u128 {
        let (mut base, mut acc) = (a % self.n, 1 % self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u128) -> Option<u128> {
        let (mut r0, mut r1) = (self.n as i128, (a % self.n) as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        (r0 == 1).then(|| t0.rem_euclid(self.n as i128) as u128)
    }
}

/// `(Z/n)[y] / (g)` for a monic `g` of degree `f`.
#[derive(Debug, Clone)]
struct Extension {
    ring: ModRing,
    g: Vec<u128>,
    f: usize,
}

impl Extension {
    fn one(&self) -> Vec<u128> {
        let mut e = vec![0; self.f];
        e[0] = 1;
        e
    }

    fn mul(&self, a: &[u128], b: &[u128]) -> Vec<u128> {
        let (r, f) = (self.ring, self.f);
        let mut p = vec![0u128; 2 * f - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                p[i + j] = r.add(p[i + j], r.mul(x, y));
            }
        }
        for i in (f..2 * f - 1).rev() {
            let c = std::mem::take(&mut p[i]);
            if c == 0 {
                continue;
            }
            for (j, &gj) in self.g[..f].iter().enumerate() {
                p[i - f + j] = r.sub(p[i - f + j], r.mul(c, gj));
            }
        }
        p.truncate(f);
        p
    }

    fn pow(&self, a: &[u128], mut e: u64) -> Vec<u128> {
        let mut acc = self.one();
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

/// The embedding of `Z[zeta_m]` into the completion at `L`, modulo
/// `l^precision`: `zeta_m` goes to the Teichmuller lift of `eta`.
#[derive(Debug, Clone)]
pub(crate) struct LocalEmbedding {
    m: u64,
    ell: u64,
    precision: u32,
    ext: Extension,
    /// Images of `zeta_m^i` for `0 <= i < m`.
    powers: Vec<Vec<u128>>,
}

impl LocalEmbedding {
    pub fn new(p: &PrimeAbove, precision: u32) -> Result<Self> {
        let ring = ModRing::prime_power(p.ell, precision).ok_or_else(|| {
            Error::Inconsistent(format!("{}^{precision} exceeds the l-adic range", p.ell))
        })?;
        let m = p.m;
        let ext = Extension {
            ring,
            g: p.modulus.iter().map(|&c| c as u128).collect(),
            f: p.f,
        };
        let one = ext.one();
        let m_inv = ring.inv(m as u128).expect("l does not divide m");
        let mut x: Vec<u128> = p.eta.iter().map(|&c| c as u128).collect();
        // Newton for x^m = 1: x <- x - (x^m - 1) x / m, quadratic from eta
        let mut steps = 0;
        loop {
            let xm = ext.pow(&x, m);
            if xm == one {
                break;
            }
            steps += 1;
            if steps > 2 * precision + 8 {
                return Err(Error::Inconsistent(
                    "Teichmuller lift did not converge".into(),
                ));
            }
            let mut err = xm;
            err[0] = ring.sub(err[0], 1);
            let corr = ext.mul(&err, &x);
            x = x
                .iter()
                .zip(&corr)
                .map(|(&a, &c)| ring.sub(a, ring.mul(c, m_inv)))
                .collect();
        }
        let mut powers = Vec::with_capacity(m as usize);
        let mut w = one;
        for _ in 0..m {
            let next = ext.mul(&w, &x);
            powers.push(w);
            w = next;
        }
        Ok(LocalEmbedding {
            m,
            ell: p.ell,
            precision,
            ext,
            powers,
        })
    }

    /// Image of `sigma_t(x)`.
    pub fn image(&self, x: &CyclotomicInteger, t: u64) -> Vec<u128> {
        let r = self.ext.ring;
        let mut acc = vec![0u128; self.ext.f];
        for (i, c) in x.coeffs().iter().enumerate() {
            let c = r.reduce_int(c);
            if c == 0 {
                continue;
            }
            let p = &self.powers[(i as u64 * t % self.m) as usize];
            for (a, &v) in acc.iter_mut().zip(p) {
                *a = r.add(*a, r.mul(c, v));
            }
        }
        acc
    }

    /// `v_L(sigma_t(x))`, capped at the precision.
    pub fn valuation(&self, x: &CyclotomicInteger, t: u64) -> u32 {
        let ell = self.ell as u128;
        self.image(x, t)
            .into_iter()
            .filter(|&a| a != 0)
            .map(|mut a| {
                let mut v = 0;
                while a % ell == 0 {
                    a /= ell;
                    v += 1;
                }
                v
            })
            .min()
            .unwrap_or(self.precision)
    }
}

/// `Gamma_l(r/m)` modulo `l^precision` for `0 <= r < m`, with `l` prime and
/// coprime to `m`.
pub fn morita_gamma_fractions(m: u64, ell: u64, precision: u32) -> Result<Vec<BigInt>> {
    // two guard digits cover the weaker continuity of Gamma_2
    let guard = precision + 2;
    let ring = ModRing::prime_power(ell, guard)
        .ok_or_else(|| Error::Inconsistent(format!("{ell}^{guard} exceeds the l-adic range")))?;
    let out_mod = BigInt::from(ell).pow(precision);
    let m_inv = ring.inv(m as u128).ok_or(Error::Ramified { ell, m })?;
    let blocks = BlockProduct::new(ell, guard as usize, ring);
    Ok((0..m)
        .map(|r| {
            let x = ring.mul(r as u128, m_inv);
            BigInt::from(gamma_at_integer(x, ell, &blocks)).mod_floor(&out_mod)
        })
        .collect())
}

/// `Gamma_l(x) = (-1)^x prod_{0<j<x, l does not divide j} j` for an integer
/// `x >= 0`, reduced modulo the block ring.
fn gamma_at_integer(x: u128, ell: u64, blocks: &BlockProduct) -> u128 {
    let r = blocks.ring;
    if x == 0 {
        return 1;
    }
    let ell = ell as u128;
    let full = x / ell;
    let mut acc = blocks.eval(full);
    for j in full * ell + 1..x {
        acc = r.mul(acc, j % r.modulus());
    }
    if x % 2 == 1 {
        r.neg(acc)
    } else {
        acc
    }
}

/// `prod_{k<N} B(k)` with `B(x) = prod_{j=1}^{l-1} (l x + j)`, by doubling on
/// `N`. Polynomials in `x` are truncated below degree `deg`: the coefficient
/// of `x^i` in any product of shifts of `B` is divisible by `l^i`, so the
/// truncation is exact modulo `l^deg`.
struct BlockProduct {
    ring: ModRing,
    base: Vec<u128>,
    binom: Vec<Vec<u128>>,
}

impl BlockProduct {
    fn new(ell: u64, deg: usize, ring: ModRing) -> Self {
        let mut base = vec![1u128];
        for j in 1..ell {
            base = truncated_mul(
                &base,
                &[j as u128 % ring.modulus(), ell as u128 % ring.modulus()],
                deg,
                ring,
            );
        }
        let mut binom = vec![vec![0u128; deg]; deg];
        for i in 0..deg {
            binom[i][0] = 1 % ring.modulus();
            for j in 1..=i {
                binom[i][j] =
                    ring.add(binom[i - 1][j - 1], if j < i { binom[i - 1][j] } else { 0 });
            }
        }
        BlockProduct { ring, base, binom }
    }

    /// `G(x + c)`.
    fn shift(&self, g: &[u128], c: u128) -> Vec<u128> {
        let r = self.ring;
        let c = c % r.modulus();
        let mut cpow = vec![1 % r.modulus(); g.len()];
        for i in 1..g.len() {
            cpow[i] = r.mul(cpow[i - 1], c);
        }
        (0..g.len())
            .map(|j| {
                (j..g.len()).fold(0, |acc, i| {
                    r.add(acc, r.mul(g[i], r.mul(self.binom[i][j], cpow[i - j])))
                })
            })
            .collect()
    }

    fn eval(&self, n: u128) -> u128 {
        let deg = self.binom.len();
        let mut p = vec![1 % self.ring.modulus()];
        let mut count = 0u128;
        for bit in (0..128 - n.leading_zeros()).rev() {
            // P_{2c}(x) = P_c(x) P_c(x + c)
            p = truncated_mul(&p, &self.shift(&p, count), deg, self.ring);
            count *= 2;
            if (n >> bit) & 1 == 1 {
                p = truncated_mul(&p, &self.shift(&self.base, count), deg, self.ring);
                count += 1;
            }
        }
        debug_assert_eq!(count, n);
        p[0]
    }
}

fn truncated_mul(a: &[u128], b: &[u128], deg: usize, r: ModRing) -> Vec<u128> {
    let len = (a.len() + b.len() - 1).min(deg);
    let mut out = vec![0u128; len];
    for (i, &x) in a.iter().enumerate().take(len) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(len - i) {
            out[i + j] = r.add(out[i + j], r.mul(x, y));
        }
    }
    out
}

/// Jacobi sums at a fixed prime `L`, evaluated `l`-adically.
#[derive(Debug, Clone)]
pub struct LAdicJacobi {
    prime: PrimeAbove,
    precision: u32,
    ring: ModRing,
    gamma: Vec<u128>,
    /// Coset representatives of `(Z/m)^* / <l>`.
    reps: Vec<u64>,
    /// Inverse of the map from power-basis coefficients to the images at
    /// `sigma_t^{-1} L`, rows indexed by coefficient.
    inverse: Vec<Vec<u128>>,
}

impl LAdicJacobi {
    pub fn new(prime: &PrimeAbove) -> Result<Self> {
        let phi = euler_phi(prime.m);
        // l^K >= 8 phi sqrt(q) leaves room for the coefficient size
        let mut extra = 0;
        while (prime.ell as u128).pow(extra) < 8 * phi as u128 {
            extra += 1;
        }
        Self::with_precision(prime, (prime.f as u32).div_ceil(2) + extra)
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    fn with_precision(prime: &PrimeAbove, precision: u32) -> Result<Self> {
        let (m, ell, f) = (prime.m, prime.ell, prime.f);
        let emb = LocalEmbedding::new(prime, precision)?;
        let ring = emb.ext.ring;
        let gamma = morita_gamma_fractions(m, ell, precision)?
            .iter()
            .map(|g| ring.reduce_int(g))
            .collect();
        let mut seen = vec![false; m as usize];
        let mut reps = Vec::new();
        for s in (1..m).filter(|&s| gcd(s, m) == 1) {
            if seen[s as usize] {
                continue;
            }
            reps.push(s);
            let mut t = s;
            for _ in 0..f {
                seen[t as usize] = true;
                t = t * ell % m;
            }
        }
        // row (t, j): coordinate j of the image of zeta^{t i}, column i
        let phi = euler_phi(m) as usize;
        let mut a: Vec<Vec<u128>> = Vec::with_capacity(phi);
        for &t in &reps {
            for j in 0..f {
                a.push(
                    (0..phi)
                        .map(|i| emb.powers[(t * i as u64 % m) as usize][j])
                        .collect(),
                );
            }
        }
        let inverse = invert(a, ring, ell)?;
        Ok(LAdicJacobi {
            prime: prime.clone(),
            precision,
            ring,
            gamma,
            reps,
            inverse,
        })
    }

    /// Image of `J(b, c)` in `Z_l` modulo `l^precision`.
    pub fn local_value(&self, b: i64, c: i64) -> Result<u128> {
        let (m, ell) = (self.prime.m, self.prime.ell);
        let (bm, cm) = (modulo(b, m), modulo(c, m));
        if bm == 0 || cm == 0 || (bm + cm) % m == 0 {
            return Err(Error::JacobiUndefined { b, c, m });
        }
        let r = self.ring;
        let mut carries = 0u32;
        let mut value = 1u128;
        let mut li = 1u64;
        for _ in 0..self.prime.f {
            let x = (m - bm * li % m) % m;
            let y = (m - cm * li % m) % m;
            let z = (m - (bm + cm) * li % m) % m;
            carries += ((x + y - z) / m) as u32;
            let den = r
                .inv(self.gamma[z as usize])
                .expect("gamma values are units");
            value = r.mul(
                value,
                r.mul(r.mul(self.gamma[x as usize], self.gamma[y as usize]), den),
            );
            li = li * ell % m;
        }
        let minus_ell = r.neg(ell as u128 % r.modulus());
        Ok(r.mul(value, r.pow(minus_ell, carries as u128)))
    }

    fn reconstruct(&self, b: i64, c: i64) -> Result<CyclotomicInteger> {
        let f = self.prime.f;
        let r = self.ring;
        let mut rhs = Vec::with_capacity(self.inverse.len());
        for &t in &self.reps {
            let t = t as i64;
            rhs.push(self.local_value(t * b, t * c)?);
            rhs.extend(std::iter::repeat_n(0, f - 1));
        }
        let coeffs: Vec<BigInt> = self
            .inverse
            .iter()
            .map(|row| {
                let v = row
                    .iter()
                    .zip(&rhs)
                    .fold(0, |acc, (&x, &y)| r.add(acc, r.mul(x, y)));
                r.centered(v)
            })
            .collect();
        Ok(CyclotomicInteger::from_power_coeffs(self.prime.m, coeffs))
    }

    /// `J(b, c)`, raising the precision until `J conj(J) = q` holds.
    pub fn jacobi(&mut self, b: i64, c: i64) -> Result<CyclotomicInteger> {
        let q = self.prime.norm();
        loop {
            let j = self.reconstruct(b, c)?;
            if j.mul(&j.conj()).as_integer() == Some(q.clone()) {
                return Ok(j);
            }
            *self = Self::with_precision(&self.prime, self.precision + 4)?;
        }
    }
}

/// Gauss-Jordan inverse over `Z/l^K`; pivots are chosen among units.
fn invert(mut a: Vec<Vec<u128>>, r: ModRing, ell: u64) -> Result<Vec<Vec<u128>>> {
    let n = a.len();
    let mut inv: Vec<Vec<u128>> = (0..n)
        .map(|i| (0..n).map(|j| u128::from(i == j)).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&i| !a[i][col].is_multiple_of(ell as u128))
            .ok_or_else(|| Error::Inconsistent("evaluation matrix is singular modulo l".into()))?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let s = r.inv(a[col][col]).expect("unit pivot");
        for j in 0..n {
            a[col][j] = r.mul(a[col][j], s);
            inv[col][j] = r.mul(inv[col][j], s);
        }
        for i in 0..n {
            if i == col || a[i][col] == 0 {
                continue;
            }
            let factor = a[i][col];
            for j in 0..n {
                let (x, y) = (a[col][j], inv[col][j]);
                a[i][j] = r.sub(a[i][j], r.mul(factor, x));
                inv[i][j] = r.sub(inv[i][j], r.mul(factor, y));
            }
        }
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    use crate::finite_field::ResidueFieldData;
    use crate::jacobi::{jacobi_from_histogram, PairHistogram};

    #[test]
    fn mod_ring_wide_multiplication() {
        let r = ModRing::prime_power(5, 50).unwrap();
        assert!(r.modulus() > 1 << 64);
        let a = r.modulus() - 3;
        let b = r.modulus() - 7;
        // (-3)(-7) = 21
        assert_eq!(r.mul(a, b), 21);
        assert_eq!(r.mul(r.inv(12346).unwrap(), 12346), 1);
        assert!(r.inv(10).is_none());
    }

    #[test]
    fn gamma_at_integers_matches_definition() {
        for ell in [2u64, 3, 5, 7] {
            let ring = ModRing::prime_power(ell, 6).unwrap();
            let blocks = BlockProduct::new(ell, 6, ring);
            let mut direct = 1u128;
            for x in 1..400u128 {
                let expected = if x % 2 == 1 { ring.neg(direct) } else { direct };
                assert_eq!(gamma_at_integer(x, ell, &blocks), expected, "l={ell} x={x}");
                if x % ell as u128 != 0 {
                    direct = ring.mul(direct, x);
                }
            }
        }
    }

    #[test]
    fn gamma_reflection_formula() {
        // Gamma(x) Gamma(1 - x) = (-1)^{x_0}, x_0 in [1, l] with x_0 = x mod l
        for (m, ell) in [(7u64, 3u64), (9, 5), (11, 7), (12, 5), (37, 3)] {
            let k = 8;
            let g = morita_gamma_fractions(m, ell, k).unwrap();
            let n = BigInt::from(ell).pow(k);
            for r in 1..m {
                let x0 = {
                    let inv = crate::conductor::mod_inv(m as i64, ell).unwrap();
                    let v = r * inv % ell;
                    if v == 0 {
                        ell
                    } else {
                        v
                    }
                };
                let sign = if x0 % 2 == 0 { BigInt::one() } else { &n - 1 };
                assert_eq!(
                    (&g[r as usize] * &g[(m - r) as usize]).mod_floor(&n),
                    sign,
                    "m={m} l={ell} r={r}"
                );
            }
        }
    }

    #[test]
    fn teichmuller_lift_is_a_root_of_unity() {
        let p = PrimeAbove::new(37, 5).unwrap();
        let emb = LocalEmbedding::new(&p, 30).unwrap();
        assert!(emb.ext.ring.modulus() > 1 << 64);
        let w = &emb.powers[1];
        assert_eq!(emb.ext.pow(w, 37), emb.ext.one());
        let reduced: Vec<u64> = w.iter().map(|&c| (c % 5) as u64).collect();
        assert_eq!(reduced, p.eta);
    }

    #[test]
    fn l_adic_sums_match_enumeration() {
        for (m, ell) in [
            (3u64, 7u64),
            (5, 11),
            (5, 2),
            (7, 2),
            (8, 3),
            (9, 2),
            (12, 5),
            (13, 3),
            (15, 2),
            (20, 3),
            (21, 2),
            (11, 3),
        ] {
            let d = ResidueFieldData::new(m, ell).unwrap();
            let h = PairHistogram::new(&d);
            let mut ctx = LAdicJacobi::new(&d.prime).unwrap();
            for b in 1..m as i64 {
                for c in 1..m as i64 {
                    if (b + c) % m as i64 == 0 {
                        continue;
                    }
                    let direct = jacobi_from_histogram(&h, b, c).unwrap();
                    assert_eq!(
                        ctx.jacobi(b, c).unwrap(),
                        direct,
                        "m={m} l={ell} b={b} c={c}"
                    );
                }
            }
        }
    }

    #[test]
    fn large_fields_reconstruct() {
        for (m, ell) in [(37u64, 2u64), (37, 5), (29, 3), (31, 3)] {
            let p = PrimeAbove::new(m, ell).unwrap();
            let mut ctx = LAdicJacobi::new(&p).unwrap();
            let j = ctx.jacobi(1, 1).unwrap();
            assert_eq!(j.mul(&j.conj()).as_integer(), Some(p.norm()));
            assert!(ctx.jacobi(1, m as i64 - 1).is_err());
        }
    }
}
