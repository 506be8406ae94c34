//! Residue fields `Z[zeta_m] / L` for unramified primes `L` above `l`, and the
//! `m`-th power residue character on them.

use num_bigint::BigInt;

use crate::conductor::{factorize, is_prime, mod_inv, mod_pow, mul_mod as mulmod, mult_order};
use crate::cyclotomic::cyclotomic_poly;
use crate::error::{Error, Result};

/// Largest residue field for which the character table is built by default.
pub const DEFAULT_FIELD_LIMIT: u64 = 10_000_000;

/// Polynomials over `Z/nZ`, constant term first, no trailing zeros.
pub(crate) mod poly {
    use super::mulmod;

    pub fn trim(p: &mut Vec<u64>) {
        while p.last() == Some(&0) {
            p.pop();
        }
    }

    pub fn sub(a: &[u64], b: &[u64], n: u64) -> Vec<u64> {
        let mut out: Vec<u64> = (0..a.len().max(b.len()))
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + n - y) % n
            })
            .collect();
        trim(&mut out);
        out
    }

    pub fn mul(a: &[u64], b: &[u64], n: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u128; a.len() + b.len() - 1];
        let nn = n as u128;
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u128 * y as u128) % nn;
            }
        }
        let mut out: Vec<u64> = out.into_iter().map(|x| x as u64).collect();
        trim(&mut out);
        out
    }

    /// Remainder modulo a monic polynomial.
    pub fn rem_monic(a: &[u64], g: &[u64], n: u64) -> Vec<u64> {
        let d = g.len() - 1;
        let mut r = a.to_vec();
        while r.len() > d {
            let c = r.pop().expect("nonempty");
            if c == 0 {
                continue;
            }
            let base = r.len() - d;
            for (j, &gj) in g[..d].iter().enumerate() {
                r[base + j] = (r[base + j] + n - mulmod(c, gj, n)) % n;
            }
        }
        trim(&mut r);
        r
    }

    /// Remainder modulo any polynomial with invertible leading coefficient
    /// over a prime field.
    pub fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let lead = *b.last().expect("nonzero divisor");
        let inv = crate::conductor::mod_inv(lead as i64, p).expect("prime field");
        let monic: Vec<u64> = b.iter().map(|&x| mulmod(x, inv, p)).collect();
        rem_monic(a, &monic, p)
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    pub fn add(a: &[u64], b: &[u64], n: u64) -> Vec<u64> {
        let mut out: Vec<u64> = (0..a.len().max(b.len()))
            .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % n)
            .collect();
        trim(&mut out);
        out
    }

    /// Scales a nonzero polynomial over a prime field to leading coefficient 1.
    pub fn monic(a: &[u64], p: u64) -> Vec<u64> {
        let lead = *a.last().expect("nonzero polynomial");
        let inv = crate::conductor::mod_inv(lead as i64, p).expect("prime field");
        a.iter().map(|&x| mulmod(x, inv, p)).collect()
    }

    /// Exact quotient by a monic divisor.
    pub fn div_monic(a: &[u64], d: &[u64], n: u64) -> Vec<u64> {
        let dd = d.len() - 1;
        let mut r = a.to_vec();
        let mut q = vec![0u64; a.len() - dd];
        for i in (0..q.len()).rev() {
            let c = r[i + dd];
            q[i] = c;
            if c != 0 {
                for (j, &dj) in d.iter().enumerate() {
                    r[i + j] = (r[i + j] + n - mulmod(c, dj, n)) % n;
                }
            }
        }
        debug_assert!(r.iter().all(|&x| x == 0));
        q
    }

    pub fn mulmod_poly(a: &[u64], b: &[u64], g: &[u64], n: u64) -> Vec<u64> {
        rem_monic(&mul(a, b, n), g, n)
    }

    pub fn powmod(a: &[u64], mut e: u128, g: &[u64], n: u64) -> Vec<u64> {
        let mut acc = rem_monic(&[1], g, n);
        let mut base = rem_monic(a, g, n);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod_poly(&acc, &base, g, n);
            }
            base = mulmod_poly(&base, &base, g, n);
            e >>= 1;
        }
        acc
    }
}

/// Rabin's test for a monic polynomial over `F_p`.
pub fn is_irreducible(g: &[u64], p: u64) -> bool {
    let f = g.len() - 1;
    if f == 0 {
        return false;
    }
    if f == 1 {
        return true;
    }
    let y = vec![0, 1];
    let frob = |k: usize| -> Vec<u64> {
        // y^(p^k) mod g
        let mut x = y.clone();
        for _ in 0..k {
            x = poly::powmod(&x, p as u128, g, p);
        }
        x
    };
    if poly::sub(&frob(f), &y, p).iter().any(|&c| c != 0) {
        return false;
    }
    for r in factorize(f as u64) {
        let h = poly::sub(&frob(f / r.p as usize), &y, p);
        if poly::gcd(g, &h, p).len() != 1 {
            return false;
        }
    }
    true
}

/// `F_l[y] / (g)` for a monic irreducible `g` of degree `f`; elements are
/// coefficient vectors of length `f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteField {
    pub ell: u64,
    pub f: usize,
    /// Monic, `f + 1` coefficients.
    pub modulus: Vec<u64>,
}

impl FiniteField {
    pub fn size(&self) -> u128 {
        (self.ell as u128).pow(self.f as u32)
    }

    pub fn one(&self) -> Vec<u64> {
        let mut e = vec![0; self.f];
        e[0] = 1;
        e
    }

    fn pad(&self, mut p: Vec<u64>) -> Vec<u64> {
        p.resize(self.f, 0);
        p
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.pad(poly::mulmod_poly(a, b, &self.modulus, self.ell))
    }

    pub fn pow(&self, a: &[u64], e: u128) -> Vec<u64> {
        self.pad(poly::powmod(a, e, &self.modulus, self.ell))
    }

    /// `y * a`, a shift followed by one reduction step.
    pub fn mul_by_y(&self, a: &mut [u64]) {
        let l = self.ell;
        let top = a[self.f - 1];
        for i in (1..self.f).rev() {
            a[i] = a[i - 1];
        }
        a[0] = 0;
        if top != 0 {
            for (ai, &gi) in a.iter_mut().zip(&self.modulus[..self.f]) {
                *ai = (*ai + l - mulmod(top, gi, l)) % l;
            }
        }
    }

    pub fn encode(&self, a: &[u64]) -> u64 {
        a.iter().rev().fold(0, |acc, &c| acc * self.ell + c)
    }

    pub fn decode(&self, mut x: u64) -> Vec<u64> {
        let mut out = vec![0; self.f];
        for c in out.iter_mut() {
            *c = x % self.ell;
            x /= self.ell;
        }
        out
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: &[u64]) -> u128 {
        let n = self.size() - 1;
        let mut ord = n;
        for r in factorize(n as u64) {
            for _ in 0..r.e {
                if self.pow(a, ord / r.p as u128) == self.one() {
                    ord /= r.p as u128;
                } else {
                    break;
                }
            }
        }
        ord
    }

    /// `Tr(a) = a + a^l + ... + a^{l^{f-1}}`, an element of `F_l`.
    pub fn trace(&self, a: &[u64]) -> u64 {
        let mut x = a.to_vec();
        let mut acc = vec![0; self.f];
        for _ in 0..self.f {
            for (s, c) in acc.iter_mut().zip(&x) {
                *s = (*s + c) % self.ell;
            }
            x = self.pow(&x, self.ell as u128);
        }
        debug_assert!(acc[1..].iter().all(|&c| c == 0));
        acc[0]
    }
}

/// Irreducible factors of `Phi_m` modulo `l`, each monic of degree
/// `ord_m(l)`, sorted lexicographically from the constant term up.
pub fn cyclotomic_factors(m: u64, ell: u64) -> Result<Vec<Vec<u64>>> {
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    if m.is_multiple_of(ell) {
        return Err(Error::Ramified { ell, m });
    }
    let f = mult_order(ell % m, m) as usize;
    let mut h: Vec<u64> = cyclotomic_poly(m)
        .iter()
        .map(|&c| c.rem_euclid(ell as i64) as u64)
        .collect();
    poly::trim(&mut h);
    let mut factors = Vec::new();
    split_equal_degree(h, f, ell, &mut factors);
    factors.sort();
    Ok(factors)
}

/// Splits a squarefree monic `h` over `F_l` whose irreducible factors all
/// have degree `f`. On each factor the trace `sum_i a^{l^i}` of a fixed `a`
/// is a constant of `F_l`; once two factors see different constants, a gcd
/// with `trace - c` separates them.
fn split_equal_degree(h: Vec<u64>, f: usize, ell: u64, out: &mut Vec<Vec<u64>>) {
    if h.len() - 1 == f {
        out.push(h);
        return;
    }
    // the trace is F_l-linear, so if no monomial separates two factors
    // nothing does
    for k in 1..h.len() - 1 {
        let mut a = vec![0u64; k + 1];
        a[k] = 1;
        let mut power = poly::rem_monic(&a, &h, ell);
        let mut trace = power.clone();
        for _ in 1..f {
            power = poly::powmod(&power, ell as u128, &h, ell);
            trace = poly::add(&trace, &power, ell);
        }
        for c in 0..ell {
            let d = poly::monic(&poly::gcd(&h, &poly::sub(&trace, &[c], ell), ell), ell);
            if d.len() > 1 && d.len() < h.len() {
                let rest = poly::div_monic(&h, &d, ell);
                split_equal_degree(d, f, ell, out);
                split_equal_degree(rest, f, ell, out);
                return;
            }
        }
    }
    unreachable!("distinct factors are separated by the trace of some monomial");
}

/// A prime `L = (l, g(zeta_m))` above an unramified `l`, with the image
/// `eta` of `zeta_m` in `F_l[y] / (g)`.
///
/// Canonical choices: for `f = 1` the smallest element of order `m` modulo
/// `l`; otherwise the lexicographically smallest factor `g` of `Phi_m mod l`
/// with `eta = y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeAbove {
    pub m: u64,
    pub ell: u64,
    /// Inertia degree `ord_m(l)`.
    pub f: usize,
    /// Monic, `f + 1` coefficients, constant term first.
    pub modulus: Vec<u64>,
    /// `f` coefficients.
    pub eta: Vec<u64>,
}

impl PrimeAbove {
    pub fn new(m: u64, ell: u64) -> Result<Self> {
        if !is_prime(ell) {
            return Err(Error::NotPrime(ell));
        }
        if m.is_multiple_of(ell) {
            return Err(Error::Ramified { ell, m });
        }
        let f = mult_order(ell % m, m) as usize;
        if f == 1 {
            let prime_divs: Vec<u64> = factorize(m).iter().map(|r| r.p).collect();
            let r = (2..ell)
                .find(|&r| {
                    mod_pow(r, m, ell) == 1
                        && prime_divs.iter().all(|&p| mod_pow(r, m / p, ell) != 1)
                })
                .ok_or_else(|| {
                    Error::Inconsistent(format!("no element of order {m} modulo {ell}"))
                })?;
            return Ok(PrimeAbove {
                m,
                ell,
                f,
                modulus: vec![(ell - r) % ell, 1],
                eta: vec![r],
            });
        }
        let modulus = cyclotomic_factors(m, ell)?.swap_remove(0);
        let mut eta = vec![0; f];
        eta[1] = 1;
        Ok(PrimeAbove {
            m,
            ell,
            f,
            modulus,
            eta,
        })
    }

    /// `q = l^f = N(L)`.
    pub fn norm(&self) -> BigInt {
        BigInt::from(self.ell).pow(self.f as u32)
    }
}

/// The residue field of a prime [`PrimeAbove`] with a table of the power
/// residue character.
#[derive(Debug, Clone)]
pub struct ResidueFieldData {
    pub prime: PrimeAbove,
    pub q: u64,
    pub field: FiniteField,
    /// `chi[enc(a)] = k` with `a^{(q-1)/m} = eta^k`; unused at 0.
    chi: Vec<u16>,
}

impl std::ops::Deref for ResidueFieldData {
    type Target = PrimeAbove;
    fn deref(&self) -> &PrimeAbove {
        &self.prime
    }
}

impl ResidueFieldData {
    /// Field data with the default size limit.
    pub fn new(m: u64, ell: u64) -> Result<Self> {
        Self::with_limit(m, ell, DEFAULT_FIELD_LIMIT)
    }

    pub fn with_limit(m: u64, ell: u64, limit: u64) -> Result<Self> {
        if !is_prime(ell) {
            return Err(Error::NotPrime(ell));
        }
        if m.is_multiple_of(ell) {
            return Err(Error::Ramified { ell, m });
        }
        if m > u16::MAX as u64 {
            return Err(Error::Inconsistent(format!(
                "modulus {m} too large for the character table"
            )));
        }
        let f = mult_order(ell % m, m) as usize;
        let q = (ell as u128).checked_pow(f as u32).unwrap_or(u128::MAX);
        if q > limit as u128 {
            return Err(Error::FieldTooLarge { q, limit });
        }
        let prime = PrimeAbove::new(m, ell)?;
        let field = FiniteField {
            ell,
            f,
            modulus: prime.modulus.clone(),
        };
        let chi = build_chi_table(&field, &prime.eta, m)?;
        Ok(ResidueFieldData {
            prime,
            q: q as u64,
            field,
            chi,
        })
    }

    /// `k` with `chi_L(a) = zeta_m^k`.
    pub fn chi_exponent(&self, a: &[u64]) -> Result<u64> {
        let e = self.field.encode(a);
        if e == 0 {
            return Err(Error::ZeroArgument);
        }
        Ok(self.chi[e as usize] as u64)
    }

    /// Character exponent by encoding, for nonzero encodings.
    pub(crate) fn chi_by_code(&self, e: u64) -> u64 {
        self.chi[e as usize] as u64
    }
}

/// Walk the powers of a primitive element, recording `i mod m` for each
/// `gamma^i`, then rescale so that `eta` gets exponent 1.
fn build_chi_table(field: &FiniteField, eta: &[u64], m: u64) -> Result<Vec<u16>> {
    let q = field.size() as u64;
    let f = field.f;
    let ell = field.ell;
    // prefer gamma = y + c, whose multiplication is a shift
    let shift_gamma = if f > 1 {
        (0..ell).find(|&c| {
            let mut g = vec![0; f];
            g[0] = c;
            g[1] = 1;
            field.order(&g) == (q - 1) as u128
        })
    } else {
        None
    };
    let gamma: Vec<u64> = match shift_gamma {
        Some(c) => {
            let mut g = vec![0; f];
            g[0] = c;
            g[1] = 1;
            g
        }
        None => (2..q)
            .map(|e| field.decode(e))
            .find(|g| field.order(g) == (q - 1) as u128)
            .ok_or_else(|| Error::Inconsistent("no primitive element".into()))?,
    };
    let mut table = vec![u16::MAX; q as usize];
    let mut x = field.one();
    let eta_code = field.encode(eta);
    let mut eta_log = None;
    let c = shift_gamma.unwrap_or(0);
    for i in 0..q - 1 {
        let code = field.encode(&x);
        table[code as usize] = (i % m) as u16;
        if code == eta_code {
            eta_log = Some(i);
        }
        x = match shift_gamma {
            Some(_) => {
                // x * (y + c)
                let mut xy = x.clone();
                field.mul_by_y(&mut xy);
                xy.iter()
                    .zip(&x)
                    .map(|(&a, &b)| (a + mulmod(b, c, ell)) % ell)
                    .collect()
            }
            None => field.mul(&x, &gamma),
        };
    }
    let eta_log = eta_log.ok_or_else(|| Error::Inconsistent("eta not reached".into()))?;
    // eta = gamma^{E (q-1)/m}
    let e = eta_log / ((q - 1) / m);
    let e_inv = mod_inv(e as i64, m)?;
    for t in table.iter_mut().skip(1) {
        *t = mulmod(*t as u64, e_inv, m) as u16;
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conductor::euler_phi;

    #[test]
    fn residue_field_examples() {
        let d = ResidueFieldData::new(3, 7).unwrap();
        assert_eq!((d.f, d.q), (1, 7));
        assert_eq!(d.eta, vec![2]);
        let d = ResidueFieldData::new(5, 2).unwrap();
        assert_eq!((d.f, d.q), (4, 16));
        assert!(matches!(
            ResidueFieldData::new(5, 5),
            Err(Error::Ramified { .. })
        ));
        assert!(matches!(
            ResidueFieldData::new(5, 4),
            Err(Error::NotPrime(4))
        ));
        assert!(matches!(
            ResidueFieldData::new(37, 2),
            Err(Error::FieldTooLarge { .. })
        ));
        let p = PrimeAbove::new(37, 2).unwrap();
        assert_eq!((p.f, p.norm()), (36, BigInt::from(1u64 << 36)));
    }

    #[test]
    fn chi_examples() {
        let d = ResidueFieldData::new(3, 7).unwrap();
        assert_eq!(d.chi_exponent(&[3]).unwrap(), 1);
        assert_eq!(d.chi_exponent(&[6]).unwrap(), 0);
        assert_eq!(d.chi_exponent(&[1]).unwrap(), 0);
        assert_eq!(d.chi_exponent(&[0]), Err(Error::ZeroArgument));
    }

    #[test]
    fn chi_matches_power_definition() {
        for (m, ell) in [
            (3u64, 7u64),
            (5, 2),
            (5, 11),
            (7, 2),
            (8, 3),
            (9, 2),
            (12, 5),
            (13, 3),
            (20, 3),
        ] {
            let d = ResidueFieldData::new(m, ell).unwrap();
            let exp = (d.q as u128 - 1) / m as u128;
            let eta_pows: Vec<Vec<u64>> = (0..m).map(|k| d.field.pow(&d.eta, k as u128)).collect();
            assert_eq!(d.field.order(&d.eta), m as u128);
            for code in 1..d.q {
                let a = d.field.decode(code);
                let k = d.chi_exponent(&a).unwrap();
                assert_eq!(
                    d.field.pow(&a, exp),
                    eta_pows[k as usize],
                    "m={m} l={ell} a={a:?}"
                );
            }
        }
    }

    #[test]
    fn factors_of_cyclotomic_polynomials() {
        // Phi_5 is irreducible mod 2
        assert_eq!(cyclotomic_factors(5, 2).unwrap(), vec![vec![1, 1, 1, 1, 1]]);
        // Phi_7 = (y^3 + y + 1)(y^3 + y^2 + 1) mod 2
        assert_eq!(
            cyclotomic_factors(7, 2).unwrap(),
            vec![vec![1, 0, 1, 1], vec![1, 1, 0, 1]]
        );
        // Phi_3 = (y - 2)(y - 4) mod 7
        assert_eq!(
            cyclotomic_factors(3, 7).unwrap(),
            vec![vec![3, 1], vec![5, 1]]
        );
        for (m, ell) in [
            (9u64, 2u64),
            (15, 2),
            (16, 3),
            (21, 5),
            (40, 3),
            (35, 2),
            (39, 5),
            (37, 3),
            (31, 2),
            (27, 7),
            (27, 2),
        ] {
            let fs = cyclotomic_factors(m, ell).unwrap();
            let f = mult_order(ell, m) as usize;
            assert_eq!(fs.len() * f, euler_phi(m) as usize);
            assert!(fs
                .iter()
                .all(|g| g.len() == f + 1 && is_irreducible(g, ell)));
            let phi: Vec<u64> = cyclotomic_poly(m)
                .iter()
                .map(|&c| c.rem_euclid(ell as i64) as u64)
                .collect();
            let prod = fs.iter().fold(vec![1u64], |acc, g| poly::mul(&acc, g, ell));
            assert_eq!(prod, phi, "m={m} l={ell}");
        }
    }

    #[test]
    fn irreducibility() {
        assert!(is_irreducible(&[1, 1, 1], 2));
        assert!(!is_irreducible(&[1, 0, 1], 2));
        assert!(is_irreducible(&[1, 1, 0, 0, 1], 2));
        assert!(!is_irreducible(&[1, 1, 1, 1, 1, 1], 2));
    }

    #[test]
    fn traces_land_in_prime_field() {
        let d = ResidueFieldData::new(7, 2).unwrap();
        let mut counts = [0; 2];
        for code in 0..d.q {
            counts[d.field.trace(&d.field.decode(code)) as usize] += 1;
        }
        assert_eq!(counts, [4, 4]);
    }
}
