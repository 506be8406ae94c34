//! Dirichlet characters modulo `m` and the relative class number from the
//! analytic class number formula, evaluated exactly by grouping characters
//! into Galois orbits.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::class_number::{upper_bound, ClassNumberReport, Method};
use crate::conductor::{crt, gcd, lcm, mult_order, Conductor};
use crate::cyclotomic::CyclotomicInteger;
use crate::error::{Error, Result};

/// `(Z/mZ)^*` as a product of cyclic groups, one or two per prime power.
#[derive(Debug, Clone)]
pub struct UnitGroupStructure {
    m: u64,
    gens: Vec<u64>,
    orders: Vec<u64>,
    exponent: u64,
    /// Exponent vector of each residue, indexed by the residue; empty for
    /// non-units.
    logs: Vec<Vec<u64>>,
}

impl UnitGroupStructure {
    pub fn new(m: u64) -> Result<Self> {
        let c = Conductor::new(m)?;
        let mut gens = Vec::new();
        let mut orders = Vec::new();
        for f in c.factors() {
            // lift a local generator, identity at every other factor
            let lift = |g: u64| {
                let parts: Vec<(u64, u64)> = c
                    .factors()
                    .iter()
                    .map(|h| (if h.q == f.q { g % f.q } else { 1 }, h.q))
                    .collect();
                crt(&parts)
            };
            if f.p == 2 {
                gens.push(lift(f.q - 1));
                orders.push(2);
                if f.e >= 3 {
                    gens.push(lift(5));
                    orders.push(f.q / 4);
                }
            } else {
                let g = (2..f.q)
                    .find(|&g| g % f.p != 0 && mult_order(g, f.q) == f.phi())
                    .expect("odd prime powers have primitive roots");
                gens.push(lift(g));
                orders.push(f.phi());
            }
        }
        let exponent = orders.iter().fold(1, |acc, &o| lcm(acc, o));
        let mut logs = vec![Vec::new(); m as usize];
        let mut exps = vec![0u64; gens.len()];
        let mut value = 1u64;
        // mixed-radix walk over all exponent vectors
        loop {
            logs[value as usize] = exps.clone();
            let mut i = 0;
            loop {
                if i == gens.len() {
                    return Ok(UnitGroupStructure {
                        m,
                        gens,
                        orders,
                        exponent,
                        logs,
                    });
                }
                exps[i] += 1;
                value = (value as u128 * gens[i] as u128 % m as u128) as u64;
                if exps[i] < orders[i] {
                    break;
                }
                // gens[i]^orders[i] = 1, so value is back to its old self
                exps[i] = 0;
                i += 1;
            }
        }
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn generators(&self) -> &[u64] {
        &self.gens
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// Lcm of the generator orders.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Exponent vector of `a` over the generators, if `a` is a unit.
    pub fn log(&self, a: u64) -> Option<&[u64]> {
        let v = &self.logs[(a % self.m) as usize];
        (!v.is_empty()).then_some(v.as_slice())
    }
}

/// A character modulo `m` given by `chi(g_j) = exp(2 pi i k_j / n_j)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DirichletCharacter {
    pub modulus: u64,
    pub exponents: Vec<u64>,
    pub order: u64,
    pub conductor: u64,
    pub odd: bool,
}

impl DirichletCharacter {
    /// `chi(a)` as an exponent `v` with `chi(a) = zeta_E^v`, `E` the group
    /// exponent; `None` when `a` is not a unit.
    pub fn value(&self, g: &UnitGroupStructure, a: u64) -> Option<u64> {
        let e = g.exponent();
        g.log(a).map(|l| {
            l.iter()
                .zip(&self.exponents)
                .zip(g.orders())
                .map(|((&x, &k), &n)| x * k % n * (e / n))
                .sum::<u64>()
                % e
        })
    }

    fn power(&self, g: &UnitGroupStructure, j: u64) -> DirichletCharacter {
        let exponents: Vec<u64> = self
            .exponents
            .iter()
            .zip(g.orders())
            .map(|(&k, &n)| k * j % n)
            .collect();
        DirichletCharacter {
            modulus: self.modulus,
            exponents,
            order: self.order,
            conductor: self.conductor,
            odd: self.odd,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&k| k == 0)
    }
}

fn build_character(g: &UnitGroupStructure, exponents: Vec<u64>) -> DirichletCharacter {
    let m = g.modulus();
    let order = exponents
        .iter()
        .zip(g.orders())
        .fold(1, |acc, (&k, &n)| lcm(acc, n / gcd(k, n)));
    let mut chi = DirichletCharacter {
        modulus: m,
        exponents,
        order,
        conductor: m,
        odd: false,
    };
    chi.odd = chi.value(g, m - 1) == Some(g.exponent() / 2);
    chi.conductor = (1..=m)
        .filter(|f| m.is_multiple_of(*f))
        .find(|&f| {
            (1..m)
                .step_by(f as usize)
                .filter(|&a| gcd(a, m) == 1)
                .all(|a| chi.value(g, a) == Some(0))
        })
        .expect("m itself qualifies");
    chi
}

/// Every character modulo `m`.
pub fn all_characters(g: &UnitGroupStructure) -> Vec<DirichletCharacter> {
    let mut out = Vec::new();
    let mut exps = vec![0u64; g.orders().len()];
    loop {
        out.push(build_character(g, exps.clone()));
        let mut i = 0;
        loop {
            if i == exps.len() {
                return out;
            }
            exps[i] += 1;
            if exps[i] < g.orders()[i] {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

/// The odd characters modulo `m`; each induces the odd primitive character
/// of conductor `f_chi | m` used in the class number formula.
pub fn enumerate_odd_primitive(m: u64) -> Result<Vec<DirichletCharacter>> {
    let g = UnitGroupStructure::new(m)?;
    Ok(all_characters(&g).into_iter().filter(|c| c.odd).collect())
}

/// `B_{1,chi} = numer / denom` with `numer` in `Z[zeta_{ord chi}]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BernoulliValue {
    pub numer: CyclotomicInteger,
    pub denom: BigInt,
}

/// `f * B_{1,chi} = sum_{a=1}^{f} a chi(a)` for the primitive character of
/// conductor `f` induced by `chi`.
fn bernoulli_numerator(g: &UnitGroupStructure, chi: &DirichletCharacter) -> CyclotomicInteger {
    let m = g.modulus();
    let f = chi.conductor;
    let d = chi.order;
    let step = g.exponent() / d;
    let mut counts = vec![BigInt::zero(); d as usize];
    for a in 1..=f {
        if gcd(a, f) != 1 {
            continue;
        }
        // a unit modulo m congruent to a modulo f
        let lifted = (0..m / f)
            .map(|k| a % f + k * f)
            .find(|&x| gcd(x, m) == 1)
            .expect("units lift along m -> f");
        let v = chi.value(g, lifted).expect("unit");
        counts[(v / step) as usize] += BigInt::from(a);
    }
    CyclotomicInteger::from_power_coeffs(d, counts)
}

pub fn b1_of_character(chi: &DirichletCharacter) -> Result<BernoulliValue> {
    if chi.is_trivial() {
        return Err(Error::TrivialCharacter);
    }
    let g = UnitGroupStructure::new(chi.modulus)?;
    Ok(BernoulliValue {
        numer: bernoulli_numerator(&g, chi),
        denom: BigInt::from(chi.conductor),
    })
}

/// Odd characters grouped into orbits `{chi^j : j in (Z/ord chi)^*}`.
pub fn galois_orbits(
    g: &UnitGroupStructure,
    odd: &[DirichletCharacter],
) -> Vec<Vec<DirichletCharacter>> {
    let mut seen = HashSet::new();
    let mut orbits = Vec::new();
    for chi in odd {
        if seen.contains(&chi.exponents) {
            continue;
        }
        let orbit: Vec<DirichletCharacter> = (1..chi.order.max(2))
            .filter(|&j| gcd(j, chi.order) == 1)
            .map(|j| chi.power(g, j))
            .collect();
        for c in &orbit {
            seen.insert(c.exponents.clone());
        }
        orbits.push(orbit);
    }
    orbits
}

/// `prod_{chi in orbit} (-B_{1,chi} / 2)`, a rational number.
fn orbit_factor(g: &UnitGroupStructure, orbit: &[DirichletCharacter]) -> Result<BigRational> {
    let rep = &orbit[0];
    let s = bernoulli_numerator(g, rep);
    // the conjugates of s are the numerators of the other orbit members
    let mut prod = CyclotomicInteger::one(rep.order);
    for j in (1..rep.order.max(2)).filter(|&j| gcd(j, rep.order) == 1) {
        prod = prod.mul(&s.sigma(j as i64));
    }
    let norm = prod.as_integer().ok_or_else(|| {
        Error::Inconsistent(format!(
            "orbit norm for m = {} is not rational",
            g.modulus()
        ))
    })?;
    let k = orbit.len() as u32;
    let den = BigInt::from(-2 * rep.conductor as i64).pow(k);
    Ok(BigRational::new(norm, den))
}

/// `h_m^- = Q w prod_{chi odd} (-B_{1,chi} / 2)`.
pub fn h_minus_analytic(m: u64) -> Result<ClassNumberReport> {
    let c = Conductor::new(m)?;
    let g = UnitGroupStructure::new(m)?;
    let odd: Vec<DirichletCharacter> = all_characters(&g).into_iter().filter(|x| x.odd).collect();
    let orbits = galois_orbits(&g, &odd);
    let factors: Vec<BigRational> = orbits
        .par_iter()
        .map(|o| orbit_factor(&g, o))
        .collect::<Result<_>>()?;
    let q = if c.is_prime_power() { 1 } else { 2 };
    let h = factors.into_iter().fold(
        BigRational::from_integer(BigInt::from(q * c.w())),
        |acc, f| acc * f,
    );
    if !h.is_integer() || !h.is_positive() {
        return Err(Error::Inconsistent(format!(
            "analytic h^- for m = {m} came out as {h}"
        )));
    }
    let h = h.to_integer();
    Ok(ClassNumberReport {
        m,
        index: &h << c.a(),
        a: c.a(),
        h_minus: h,
        bound: upper_bound(m)?,
        method: Method::Analytic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conductor::valid_conductors;
    use num_traits::One;

    fn chars_with(m: u64, pred: impl Fn(&DirichletCharacter) -> bool) -> Vec<DirichletCharacter> {
        enumerate_odd_primitive(m)
            .unwrap()
            .into_iter()
            .filter(pred)
            .collect()
    }

    #[test]
    fn unit_group_structure() {
        for m in valid_conductors(3, 200) {
            let g = UnitGroupStructure::new(m).unwrap();
            let phi = Conductor::new(m).unwrap().phi();
            assert_eq!(g.orders().iter().product::<u64>(), phi);
            for a in 1..m {
                assert_eq!(g.log(a).is_some(), gcd(a, m) == 1, "m={m} a={a}");
            }
        }
        let g = UnitGroupStructure::new(16).unwrap();
        assert_eq!(g.orders(), &[2, 4]);
        assert_eq!(g.generators(), &[15, 5]);
    }

    #[test]
    fn odd_character_examples() {
        let c5 = enumerate_odd_primitive(5).unwrap();
        assert_eq!(c5.len(), 2);
        assert!(c5.iter().all(|c| c.order == 4 && c.conductor == 5));

        let c12 = enumerate_odd_primitive(12).unwrap();
        let mut conds: Vec<u64> = c12.iter().map(|c| c.conductor).collect();
        conds.sort_unstable();
        assert_eq!(conds, vec![3, 4]);
        assert!(c12.iter().all(|c| c.order == 2));

        for p in [7u64, 11, 13, 29] {
            let c = enumerate_odd_primitive(p).unwrap();
            assert_eq!(c.len() as u64, (p - 1) / 2);
            assert!(c.iter().all(|x| x.conductor == p));
        }
        for m in valid_conductors(3, 120) {
            let phi = Conductor::new(m).unwrap().phi();
            let c = enumerate_odd_primitive(m).unwrap();
            assert_eq!(c.len() as u64, phi / 2);
            assert!(c.iter().all(|x| m % x.conductor == 0));
        }
    }

    #[test]
    fn bernoulli_examples() {
        let chi = &chars_with(3, |_| true)[0];
        let b = b1_of_character(chi).unwrap();
        assert_eq!(b.numer.as_integer(), Some(BigInt::from(-1)));
        assert_eq!(b.denom, BigInt::from(3));

        let chi = &chars_with(4, |_| true)[0];
        let b = b1_of_character(chi).unwrap();
        assert_eq!(b.numer.as_integer(), Some(BigInt::from(-2)));
        assert_eq!(b.denom, BigInt::from(4));

        // order 4 mod 5: (1 + 2 chi(2) + 3 chi(3) + 4 chi(4)) = -3 -+ i, so the
        // numerator is -3 - i or -3 + i
        for chi in chars_with(5, |_| true) {
            let b = b1_of_character(&chi).unwrap();
            let c: Vec<i64> = b
                .numer
                .coeffs()
                .iter()
                .map(|x| x.try_into().unwrap())
                .collect();
            assert!(c == vec![-3, -1] || c == vec![-3, 1], "{c:?}");
        }
        let g = UnitGroupStructure::new(5).unwrap();
        let trivial = build_character(&g, vec![0]);
        assert_eq!(b1_of_character(&trivial), Err(Error::TrivialCharacter));
    }

    #[test]
    fn class_number_examples() {
        assert_eq!(h_minus_analytic(4).unwrap().h_minus, BigInt::one());
        assert_eq!(h_minus_analytic(5).unwrap().h_minus, BigInt::one());
        assert_eq!(h_minus_analytic(23).unwrap().h_minus, BigInt::from(3));
        assert_eq!(h_minus_analytic(39).unwrap().h_minus, BigInt::from(2));
        for m in valid_conductors(3, 22) {
            assert_eq!(h_minus_analytic(m).unwrap().h_minus, BigInt::one(), "m={m}");
        }
        // classical values
        assert_eq!(h_minus_analytic(29).unwrap().h_minus, BigInt::from(8));
        assert_eq!(h_minus_analytic(31).unwrap().h_minus, BigInt::from(9));
        assert_eq!(h_minus_analytic(37).unwrap().h_minus, BigInt::from(37));
    }

    #[test]
    fn orbits_partition_odd_characters() {
        for m in valid_conductors(3, 100) {
            let g = UnitGroupStructure::new(m).unwrap();
            let odd: Vec<_> = all_characters(&g).into_iter().filter(|c| c.odd).collect();
            let orbits = galois_orbits(&g, &odd);
            assert_eq!(orbits.iter().map(Vec::len).sum::<usize>(), odd.len());
            for o in &orbits {
                assert!(o.iter().all(|c| c.odd && c.conductor == o[0].conductor));
                // conjugate characters have conjugate B_1 numerators
                let s = bernoulli_numerator(&g, &o[0]);
                for (c, j) in o
                    .iter()
                    .zip((1..o[0].order.max(2)).filter(|&j| gcd(j, o[0].order) == 1))
                {
                    assert_eq!(bernoulli_numerator(&g, c), s.sigma(j as i64));
                }
            }
        }
    }
}
