//! Jacobi sums over residue fields of `Q(zeta_m)`, small Gauss sums, and
//! generators of the ideals `L^{alpha_m(b)}`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::conductor::{gcd, modulo, mul_mod, Conductor};
use crate::cyclotomic::CyclotomicInteger;
use crate::error::{Error, Result};
use crate::finite_field::{PrimeAbove, ResidueFieldData};
use crate::padic::{LAdicJacobi, LocalEmbedding};
use crate::stickelberger::{alpha, alpha_recipe, set_mprime, AlphaCase, FactorSupport};

/// Largest `m * l` accepted by [`gauss_sum_small`].
pub const GAUSS_SUM_LIMIT: u64 = 200;

/// Counts `H[i][j]` of field elements `a != 0, 1` with `chi(a) = zeta^i` and
/// `chi(1 - a) = zeta^j`; every Jacobi sum is read off this table.
#[derive(Debug, Clone)]
pub struct PairHistogram {
    m: u64,
    counts: Vec<u64>,
}

impl PairHistogram {
    pub fn new(d: &ResidueFieldData) -> Self {
        let m = d.m as usize;
        let ell = d.ell;
        let chunk = 1 << 16;
        let codes: Vec<u64> = (2..d.q).collect();
        let counts = codes
            .par_chunks(chunk)
            .map(|part| {
                let mut h = vec![0u64; m * m];
                for &code in part {
                    let i = d.chi_by_code(code) as usize;
                    // 1 - a: negate every digit, then add one to the constant term
                    let mut neg = 0u64;
                    let mut place = 1u64;
                    let mut x = code;
                    let mut first = true;
                    while x > 0 || first {
                        let digit = x % ell;
                        let nd = if first {
                            (1 + ell - digit) % ell
                        } else {
                            (ell - digit) % ell
                        };
                        neg += nd * place;
                        place *= ell;
                        x /= ell;
                        first = false;
                    }
                    if neg == 0 {
                        continue;
                    }
                    let j = d.chi_by_code(neg) as usize;
                    h[i * m + j] += 1;
                }
                h
            })
            .reduce(
                || vec![0u64; m * m],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            );
        PairHistogram { m: d.m, counts }
    }

    pub fn get(&self, i: u64, j: u64) -> u64 {
        self.counts[(i * self.m + j) as usize]
    }
}

/// `J(b, c) = -sum_a chi(a)^b chi(1 - a)^c` in `Z[zeta_m]`.
pub fn jacobi_sum(d: &ResidueFieldData, b: i64, c: i64) -> Result<CyclotomicInteger> {
    jacobi_from_histogram(&PairHistogram::new(d), b, c)
}

pub fn jacobi_from_histogram(h: &PairHistogram, b: i64, c: i64) -> Result<CyclotomicInteger> {
    let m = h.m;
    let (bm, cm) = (modulo(b, m), modulo(c, m));
    if bm == 0 || cm == 0 || (bm + cm) % m == 0 {
        return Err(Error::JacobiUndefined { b, c, m });
    }
    let mut coeffs = vec![BigInt::zero(); m as usize];
    for i in 0..m {
        for j in 0..m {
            let n = h.get(i, j);
            if n != 0 {
                coeffs[((bm * i + cm * j) % m) as usize] -= BigInt::from(n);
            }
        }
    }
    Ok(CyclotomicInteger::from_power_coeffs(m, coeffs))
}

/// `g(b) = -sum_a chi(a)^b zeta_l^{Tr(a)}` in `Z[zeta_{m l}]`, by direct
/// summation; for tiny fields only.
pub fn gauss_sum_small(d: &ResidueFieldData, b: i64) -> Result<CyclotomicInteger> {
    let (m, ell) = (d.m, d.ell);
    let n = m * ell;
    if n > GAUSS_SUM_LIMIT {
        return Err(Error::FieldTooLarge {
            q: n as u128,
            limit: GAUSS_SUM_LIMIT,
        });
    }
    let traces = trace_table(d);
    let bm = modulo(b, m);
    let mut coeffs = vec![BigInt::zero(); n as usize];
    for code in 1..d.q {
        let k = d.chi_by_code(code);
        let e = (ell * (bm * k % m) + m * traces[code as usize]) % n;
        coeffs[e as usize] -= 1;
    }
    Ok(CyclotomicInteger::from_power_coeffs(n, coeffs))
}

fn trace_table(d: &ResidueFieldData) -> Vec<u64> {
    let basis: Vec<u64> = (0..d.f)
        .map(|i| {
            let mut e = vec![0; d.f];
            e[i] = 1;
            d.field.trace(&e)
        })
        .collect();
    (0..d.q)
        .map(|code| {
            let a = d.field.decode(code);
            a.iter().zip(&basis).map(|(x, t)| x * t).sum::<u64>() % d.ell
        })
        .collect()
}

/// `zeta_m -> zeta_n^{n/m}` on coefficient vectors.
pub fn embed(x: &CyclotomicInteger, n: u64) -> CyclotomicInteger {
    let m = x.order();
    assert_eq!(n % m, 0);
    let step = (n / m) as usize;
    let mut coeffs = vec![BigInt::zero(); n as usize];
    for (i, c) in x.coeffs().iter().enumerate() {
        coeffs[i * step] = c.clone();
    }
    CyclotomicInteger::from_power_coeffs(n, coeffs)
}

/// The Jacobi sum generating `L^{alpha_m(b)}`: `J(p, r)` for the pair
/// `(p, r)` with `alpha_m(b) = theta(p) + theta(r) - theta(p + r)`.
pub fn generator_for_alpha(d: &ResidueFieldData, b: u64) -> Result<CyclotomicInteger> {
    let c = Conductor::new(d.m)?;
    let (p, r) = alpha_recipe(&c, b)?.jacobi_pair;
    jacobi_sum(d, p as i64, r as i64)
}

/// Generators for every `b` in `M'_m`, ascending. One Jacobi sum is summed
/// per set `J'_b` in the Bezout case; the others are Galois conjugates.
pub fn generators_for_mprime(d: &ResidueFieldData) -> Result<Vec<(u64, CyclotomicInteger)>> {
    let m = d.m;
    let c = Conductor::new(m)?;
    let h = PairHistogram::new(d);
    let mut reps: HashMap<Vec<usize>, (u64, CyclotomicInteger)> = HashMap::new();
    let mut out = Vec::new();
    for b in set_mprime(m)?.members {
        let recipe = alpha_recipe(&c, b)?;
        let gen = if let AlphaCase::Bezout { .. } = recipe.case {
            let key = FactorSupport::new(&c, b)?.coprime;
            match reps.get(&key) {
                Some((b0, j0)) => {
                    // b = s b0 with s a unit: b and b0 share their gcd with m
                    let g = gcd(*b0, m);
                    let s = find_unit_multiplier(*b0 / g, b / g, m / g, m)?;
                    j0.sigma(s as i64)
                }
                None => {
                    let (p, r) = recipe.jacobi_pair;
                    let j = jacobi_from_histogram(&h, p as i64, r as i64)?;
                    reps.insert(key, (b, j.clone()));
                    j
                }
            }
        } else {
            let (p, r) = recipe.jacobi_pair;
            jacobi_from_histogram(&h, p as i64, r as i64)?
        };
        out.push((b, gen));
    }
    Ok(out)
}

/// A unit `s` modulo `m` with `s x = y (mod n)`, `x, y` units modulo `n | m`.
fn find_unit_multiplier(x: u64, y: u64, n: u64, m: u64) -> Result<u64> {
    let t = mul_mod(y, crate::conductor::mod_inv(x as i64, n)?, n);
    (0..m / n)
        .map(|k| t + k * n)
        .find(|&s| gcd(s, m) == 1)
        .ok_or_else(|| Error::Inconsistent("no unit lift".into()))
}

/// Outcome of [`verify_generator`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorCheck {
    pub b: u64,
    /// Units `s` where the valuation of `sigma_{s^{-1}}(J)` at `L` differs
    /// from the count of ones of `alpha_m(b)` on the coset `s <l>`.
    pub valuation_mismatches: Vec<u64>,
    pub norm: BigInt,
    pub expected_norm: BigInt,
    /// `J * conj(J) = q`.
    pub absolute_value_ok: bool,
}

impl GeneratorCheck {
    pub fn passed(&self) -> bool {
        self.valuation_mismatches.is_empty()
            && self.norm.abs() == self.expected_norm
            && self.absolute_value_ok
    }
}

/// Check that `J` generates `L^{alpha_m(b)}`: the `L`-adic valuation of every
/// conjugate matches `alpha_m(b)`, `|N(J)| = q^{phi(m)/2}` and
/// `J conj(J) = q`.
pub fn verify_generator(
    j: &CyclotomicInteger,
    b: u64,
    prime: &PrimeAbove,
) -> Result<GeneratorCheck> {
    let m = prime.m;
    if j.order() != m {
        return Err(Error::ModulusMismatch(j.order(), m));
    }
    let a = alpha(m, b)?;
    let local = LocalEmbedding::new(prime, prime.f as u32 + 1)?;
    let mut mismatches = Vec::new();
    for s in (1..m).filter(|&s| gcd(s, m) == 1) {
        // L is fixed by sigma_l, so its exponent collects the coset s <l>
        let mut expected = 0u32;
        let mut t = s;
        for _ in 0..prime.f {
            expected += u32::from(a.contains(t));
            t = mul_mod(t, prime.ell, m);
        }
        let s_inv = crate::conductor::mod_inv(s as i64, m)?;
        if local.valuation(j, s_inv) != expected {
            mismatches.push(s);
        }
    }
    let phi = Conductor::new(m)?.phi();
    let q = prime.norm();
    let expected_norm = q.pow((phi / 2) as u32);
    let absolute_value_ok = j.mul(&j.conj()).as_integer() == Some(q);
    Ok(GeneratorCheck {
        b,
        valuation_mismatches: mismatches,
        norm: j.norm(),
        expected_norm,
        absolute_value_ok,
    })
}

/// How the Jacobi sums of a [`GeneratorSet`] were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumMethod {
    /// Direct summation over the residue field.
    Enumeration,
    /// Gamma values in the completion at `L`.
    LAdic,
}

impl std::fmt::Display for SumMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SumMethod::Enumeration => "enumeration",
            SumMethod::LAdic => "l-adic",
        })
    }
}

#[derive(Debug, Clone)]
pub struct GeneratorSet {
    pub prime: PrimeAbove,
    pub method: SumMethod,
    /// `(b, J)` in ascending `b`.
    pub generators: Vec<(u64, CyclotomicInteger)>,
}

/// Generators of `L^{alpha_m(b)}` for every `b` in `M'_m`, or for `only`.
/// Fields with at most `field_limit` elements are enumerated; larger ones go
/// through [`LAdicJacobi`].
pub fn jacobi_generators(
    m: u64,
    ell: u64,
    only: Option<u64>,
    field_limit: u64,
) -> Result<GeneratorSet> {
    let c = Conductor::new(m)?;
    let prime = PrimeAbove::new(m, ell)?;
    let targets = match only {
        Some(b) => vec![b],
        None => set_mprime(m)?.members,
    };
    match ResidueFieldData::with_limit(m, ell, field_limit) {
        Ok(d) => {
            let generators = if only.is_none() {
                generators_for_mprime(&d)?
            } else {
                let h = PairHistogram::new(&d);
                targets
                    .iter()
                    .map(|&b| {
                        let (p, r) = alpha_recipe(&c, b)?.jacobi_pair;
                        Ok((b, jacobi_from_histogram(&h, p as i64, r as i64)?))
                    })
                    .collect::<Result<_>>()?
            };
            Ok(GeneratorSet {
                prime,
                method: SumMethod::Enumeration,
                generators,
            })
        }
        Err(Error::FieldTooLarge { .. }) => {
            let mut ctx = LAdicJacobi::new(&prime)?;
            let generators = targets
                .iter()
                .map(|&b| {
                    let (p, r) = alpha_recipe(&c, b)?.jacobi_pair;
                    Ok((b, ctx.jacobi(p as i64, r as i64)?))
                })
                .collect::<Result<_>>()?;
            Ok(GeneratorSet {
                prime,
                method: SumMethod::LAdic,
                generators,
            })
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ci(n: u64, c: &[i64]) -> CyclotomicInteger {
        CyclotomicInteger::from_i64_power_coeffs(n, c)
    }

    #[test]
    fn jacobi_examples() {
        let d = ResidueFieldData::new(3, 7).unwrap();
        let j = jacobi_sum(&d, 1, 1).unwrap();
        assert_eq!(j, ci(3, &[1, 3]));
        assert_eq!(j.norm(), BigInt::from(7));
        assert!(jacobi_sum(&d, 1, 2).is_err());
        assert!(jacobi_sum(&d, 3, 1).is_err());
    }

    #[test]
    fn jacobi_symmetry_and_galois() {
        for (m, ell) in [(5u64, 11u64), (7, 2), (8, 3), (9, 19), (12, 13), (15, 2)] {
            let d = ResidueFieldData::new(m, ell).unwrap();
            let h = PairHistogram::new(&d);
            for b in 1..m as i64 {
                for c in 1..m as i64 {
                    if (b + c) % m as i64 == 0 {
                        continue;
                    }
                    let j = jacobi_from_histogram(&h, b, c).unwrap();
                    assert_eq!(j, jacobi_from_histogram(&h, c, b).unwrap());
                    for v in (1..m as i64).filter(|&v| gcd(v as u64, m) == 1) {
                        assert_eq!(j.sigma(v), jacobi_from_histogram(&h, v * b, v * c).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn generator_examples() {
        let d = ResidueFieldData::new(3, 7).unwrap();
        let j = generator_for_alpha(&d, 1).unwrap();
        assert_eq!(j, ci(3, &[1, 3]));
        let check = verify_generator(&j, 1, &d).unwrap();
        assert!(check.passed(), "{check:?}");
        assert_eq!(check.norm, BigInt::from(7));

        // b = 2, m = 5: pair (b - m/q, m/q) = (1, 1)
        let c = Conductor::new(5).unwrap();
        assert_eq!(alpha_recipe(&c, 2).unwrap().jacobi_pair, (1, 1));

        let bumped = j.add(&CyclotomicInteger::one(3));
        assert!(!verify_generator(&bumped, 1, &d).unwrap().passed());
    }

    #[test]
    fn galois_reuse_matches_direct_sums() {
        for (m, ell) in [(15u64, 31u64), (21, 43), (35, 71), (20, 41), (12, 13)] {
            let d = ResidueFieldData::new(m, ell).unwrap();
            for (b, j) in generators_for_mprime(&d).unwrap() {
                assert_eq!(j, generator_for_alpha(&d, b).unwrap(), "m={m} b={b}");
            }
        }
    }

    #[test]
    fn generators_verify_with_inertia() {
        // f > 1 in each case
        for (m, ell) in [
            (5u64, 2u64),
            (7, 2),
            (8, 3),
            (9, 2),
            (12, 5),
            (13, 3),
            (15, 2),
            (16, 3),
            (20, 3),
        ] {
            let d = ResidueFieldData::new(m, ell).unwrap();
            for (b, j) in generators_for_mprime(&d).unwrap() {
                let check = verify_generator(&j, b, &d).unwrap();
                assert!(check.passed(), "m={m} l={ell} b={b}: {check:?}");
            }
        }
    }

    fn admissible(m: u64) -> impl Iterator<Item = (i64, i64)> {
        let m = m as i64;
        (1..m).flat_map(move |b| {
            (1..m)
                .filter(move |c| (b + c) % m != 0)
                .map(move |c| (b, c))
        })
    }

    #[test]
    fn gauss_sums_factor_jacobi_sums() {
        for (m, ell) in [(3u64, 7u64), (4, 5), (5, 11), (7, 2)] {
            let d = ResidueFieldData::new(m, ell).unwrap();
            let n = m * ell;
            let g: Vec<CyclotomicInteger> = (0..m as i64)
                .map(|b| gauss_sum_small(&d, b).unwrap())
                .collect();
            for (b, c) in admissible(m) {
                let j = embed(&jacobi_sum(&d, b, c).unwrap(), n);
                let bc = ((b + c) % m as i64) as usize;
                assert_eq!(
                    j.mul(&g[bc]),
                    g[b as usize].mul(&g[c as usize]),
                    "m={m} b={b} c={c}"
                );
            }
            // g(b) g(-b) = chi(-1)^b q
            let minus_one = d.chi_exponent(&d.field.decode(ell - 1)).unwrap();
            for b in 1..m as i64 {
                let prod = g[b as usize].mul(&g[(m as i64 - b) as usize]);
                let sign =
                    CyclotomicInteger::zeta_power(n, (ell * (b as u64 * minus_one % m)) as i64);
                assert_eq!(prod, sign.scale(&BigInt::from(d.q)));
            }
            assert!(gauss_sum_small(&ResidueFieldData::new(41, 83).unwrap(), 1).is_err());
        }
    }

    #[test]
    fn gauss_sum_galois_actions() {
        for (m, ell) in [(3u64, 7u64), (4, 5), (5, 11), (7, 2)] {
            let d = ResidueFieldData::new(m, ell).unwrap();
            let n = m * ell;
            for b in 0..m as i64 {
                let g = gauss_sum_small(&d, b).unwrap();
                // u = 1 (mod m), l does not divide u
                for u in (0..n).filter(|u| u % m == 1 && u % ell != 0) {
                    let k = d.chi_exponent(&d.field.decode(u % ell)).unwrap();
                    let factor =
                        CyclotomicInteger::zeta_power(n, -((ell * (b as u64 % m * k % m)) as i64));
                    assert_eq!(g.sigma(u as i64), factor.mul(&g), "u={u} b={b}");
                }
                // v = 1 (mod l), v a unit modulo m
                for v in (0..n).filter(|v| v % ell == 1 && gcd(*v, m) == 1) {
                    assert_eq!(
                        g.sigma(v as i64),
                        gauss_sum_small(&d, v as i64 * b).unwrap(),
                        "v={v} b={b}"
                    );
                }
            }
        }
    }
}
