//! Exact arithmetic in `Q[G_m]`, `G_m = (Z/mZ)^*`, where `sigma_s` sends a
//! root of unity to its `s`-th power.
//!
//! Elements are dense: one rational coefficient per unit residue, in
//! ascending order of the residue. The trivial group `G_1` is modelled by
//! the single residue `0`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::conductor::{gcd, mod_inv, modulo, units, Conductor};
use crate::error::{Error, Result};

/// Position of each unit residue in the ascending unit list.
#[derive(Debug, Clone)]
pub struct UnitIndex {
    m: u64,
    units: Vec<u64>,
    inverses: Vec<u64>,
    pos: Vec<u32>,
}

impl UnitIndex {
    pub fn new(m: u64) -> Self {
        let units = units(m);
        let mut pos = vec![u32::MAX; m.max(1) as usize];
        for (i, &s) in units.iter().enumerate() {
            pos[s as usize] = i as u32;
        }
        let inverses = units
            .iter()
            .map(|&s| mod_inv(s as i64, m).expect("unit"))
            .collect();
        UnitIndex {
            m,
            units,
            inverses,
            pos,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn units(&self) -> &[u64] {
        &self.units
    }

    /// Inverse modulo `m` of the `i`-th unit.
    pub fn inverse(&self, i: usize) -> u64 {
        self.inverses[i]
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    /// Index of the residue class of `s`, if it is a unit.
    pub fn position(&self, s: i64) -> Option<usize> {
        let r = modulo(s, self.m);
        match self.pos[r as usize] {
            u32::MAX => None,
            i => Some(i as usize),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRingElement {
    modulus: u64,
    coeffs: Vec<BigRational>,
}

impl GroupRingElement {
    pub fn zero(m: u64) -> Self {
        GroupRingElement {
            modulus: m,
            coeffs: vec![BigRational::zero(); units(m).len()],
        }
    }

    /// The norm element `N_m` without conductor validation.
    pub(crate) fn norm_unchecked(m: u64) -> Self {
        GroupRingElement {
            modulus: m,
            coeffs: vec![BigRational::one(); units(m).len()],
        }
    }

    /// Build from coefficients listed in ascending unit order.
    pub fn from_coeffs(m: u64, coeffs: Vec<BigRational>) -> Result<Self> {
        let n = units(m).len();
        if coeffs.len() != n {
            return Err(Error::Dimension(format!(
                "expected {n} coefficients for modulus {m}, got {}",
                coeffs.len()
            )));
        }
        Ok(GroupRingElement { modulus: m, coeffs })
    }

    /// `sum_s c_s sigma_s` with integer numerators over a common denominator.
    pub fn from_scaled(m: u64, numerators: &[i64], denominator: i64) -> Result<Self> {
        let d = BigInt::from(denominator);
        let coeffs = numerators
            .iter()
            .map(|&c| BigRational::new(BigInt::from(c), d.clone()))
            .collect();
        Self::from_coeffs(m, coeffs)
    }

    /// A single group element `sigma_s`.
    pub fn sigma(m: u64, s: i64) -> Result<Self> {
        let idx = UnitIndex::new(m);
        let i = idx.position(s).ok_or(Error::NotAUnit { s, m })?;
        let mut x = Self::zero(m);
        x.coeffs[i] = BigRational::one();
        Ok(x)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `sigma_s`.
    pub fn coeff(&self, s: i64) -> Result<&BigRational> {
        let idx = UnitIndex::new(self.modulus);
        idx.position(s)
            .map(|i| &self.coeffs[i])
            .ok_or(Error::NotAUnit { s, m: self.modulus })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        GroupRingElement {
            modulus: self.modulus,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&BigRational::from_integer(BigInt::from(c)))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(
        &self,
        other: &Self,
        f: impl Fn(&BigRational, &BigRational) -> BigRational,
    ) -> Result<Self> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        Ok(GroupRingElement {
            modulus: self.modulus,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    /// Left action of `sigma_s`: the coefficient of `sigma_{st}` in the
    /// result is the coefficient of `sigma_t` in `self`.
    pub fn sigma_apply(&self, s: i64) -> Result<Self> {
        let m = self.modulus;
        if m > 1 && gcd(modulo(s, m), m) != 1 {
            return Err(Error::NotAUnit { s, m });
        }
        let idx = UnitIndex::new(m);
        let s = modulo(s, m) as u128;
        let mut out = vec![BigRational::zero(); self.coeffs.len()];
        for (i, &t) in idx.units().iter().enumerate() {
            let st = (s * t as u128 % m as u128) as i64;
            out[idx.position(st).expect("unit")] = self.coeffs[i].clone();
        }
        Ok(GroupRingElement {
            modulus: m,
            coeffs: out,
        })
    }

    /// `x + sigma_{-1} x`.
    pub fn conj_sum(&self) -> Self {
        let conj = self.sigma_apply(-1).expect("-1 is a unit");
        self + &conj
    }

    /// Restriction to `Q[G_d]`: `sigma_s -> sigma_{s mod d}`.
    pub fn restriction(&self, d: u64) -> Result<Self> {
        let m = self.modulus;
        if d == 0 || !m.is_multiple_of(d) {
            return Err(Error::NotADivisor { d, m });
        }
        let src = UnitIndex::new(m);
        let dst = UnitIndex::new(d);
        let mut out = vec![BigRational::zero(); dst.len()];
        for (i, &s) in src.units().iter().enumerate() {
            let j = dst.position(s as i64).expect("units restrict to units");
            out[j] += &self.coeffs[i];
        }
        Ok(GroupRingElement {
            modulus: d,
            coeffs: out,
        })
    }

    /// Corestriction to `Q[G_m]`: `sigma_tau` goes to the sum of all
    /// `sigma_sigma` with `sigma = tau (mod d)`.
    pub fn corestriction(&self, m: u64) -> Result<Self> {
        let d = self.modulus;
        if m == 0 || !m.is_multiple_of(d) {
            return Err(Error::NotADivisor { d, m });
        }
        let src = UnitIndex::new(d);
        let dst = UnitIndex::new(m);
        let coeffs = dst
            .units()
            .iter()
            .map(|&s| self.coeffs[src.position(s as i64).expect("unit")].clone())
            .collect();
        Ok(GroupRingElement { modulus: m, coeffs })
    }

    /// Least common denominator of the coefficients.
    pub fn denominator(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::one(), |acc, c| {
            num_integer::lcm(acc, c.denom().clone())
        })
    }

    /// Coefficients multiplied by `scale`; fails if the result is not integral.
    pub fn scaled_integers(&self, scale: &BigInt) -> Result<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| {
                let v = c * BigRational::from_integer(scale.clone());
                if v.is_integer() {
                    Ok(v.to_integer())
                } else {
                    Err(Error::Inconsistent(format!(
                        "coefficient {c} is not integral after scaling by {scale}"
                    )))
                }
            })
            .collect()
    }

    /// Interpret as a short element if every coefficient lies in `{0, 1}`.
    pub fn to_short(&self) -> Option<ShortElement> {
        let idx = UnitIndex::new(self.modulus);
        let mut support = Vec::new();
        for (c, &s) in self.coeffs.iter().zip(idx.units()) {
            if c.is_one() {
                support.push(s);
            } else if !c.is_zero() {
                return None;
            }
        }
        Some(ShortElement {
            modulus: self.modulus,
            support,
        })
    }
}

impl Add for &GroupRingElement {
    type Output = GroupRingElement;
    fn add(self, rhs: &GroupRingElement) -> GroupRingElement {
        self.checked_add(rhs).expect("matching moduli")
    }
}

impl Sub for &GroupRingElement {
    type Output = GroupRingElement;
    fn sub(self, rhs: &GroupRingElement) -> GroupRingElement {
        self.checked_sub(rhs).expect("matching moduli")
    }
}

impl Neg for &GroupRingElement {
    type Output = GroupRingElement;
    fn neg(self) -> GroupRingElement {
        GroupRingElement {
            modulus: self.modulus,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx = UnitIndex::new(self.modulus);
        let mut first = true;
        for (c, s) in self.coeffs.iter().zip(idx.units()) {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            if a.is_one() {
                write!(f, "s{s}")?;
            } else {
                write!(f, "({a})s{s}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The absolute norm element `N_m`, all coefficients 1.
pub fn norm_element(m: u64) -> Result<GroupRingElement> {
    Conductor::new(m)?;
    Ok(GroupRingElement::norm_unchecked(m))
}

/// An element of `Z[G_m]` with coefficients in `{0, 1}`, stored as its
/// ascending support.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ShortElement {
    modulus: u64,
    support: Vec<u64>,
}

impl ShortElement {
    /// Support residues are reduced modulo `m`, sorted and deduplicated.
    pub fn new(m: u64, support: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut support: Vec<u64> = support.into_iter().map(|s| s % m).collect();
        for &s in &support {
            if gcd(s, m) != 1 {
                return Err(Error::NotAUnit { s: s as i64, m });
            }
        }
        support.sort_unstable();
        support.dedup();
        Ok(ShortElement {
            modulus: m,
            support,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn support(&self) -> &[u64] {
        &self.support
    }

    pub fn contains(&self, s: u64) -> bool {
        self.support.binary_search(&(s % self.modulus)).is_ok()
    }

    /// 0/1 coefficient vector in ascending unit order.
    pub fn indicator(&self) -> Vec<u8> {
        units(self.modulus)
            .into_iter()
            .map(|s| u8::from(self.contains(s)))
            .collect()
    }

    pub fn to_group_ring(&self) -> GroupRingElement {
        let coeffs = self
            .indicator()
            .into_iter()
            .map(|c| BigRational::from_integer(BigInt::from(c)))
            .collect();
        GroupRingElement {
            modulus: self.modulus,
            coeffs,
        }
    }

    /// True when the support has `phi(m)/2` elements and meets its negative
    /// trivially, i.e. `(1 + sigma_{-1}) x = N_m`.
    pub fn is_half_system(&self) -> bool {
        let m = self.modulus;
        let phi = units(m).len();
        2 * self.support.len() == phi && self.support.iter().all(|&s| !self.contains(m - s))
    }
}

impl fmt::Display for ShortElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.support.iter().map(u64::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn short(m: u64, s: &[u64]) -> GroupRingElement {
        ShortElement::new(m, s.iter().copied())
            .unwrap()
            .to_group_ring()
    }

    #[test]
    fn norm_examples() {
        assert_eq!(norm_element(5).unwrap(), short(5, &[1, 2, 3, 4]));
        assert_eq!(norm_element(4).unwrap(), short(4, &[1, 3]));
        assert_eq!(norm_element(15).unwrap().coeffs().len(), 8);
        assert!(norm_element(6).is_err());
    }

    #[test]
    fn sigma_examples() {
        let x = short(5, &[1, 2]);
        assert_eq!(x.sigma_apply(4).unwrap(), short(5, &[3, 4]));
        assert_eq!(x.sigma_apply(1).unwrap(), x);
        assert_eq!(x.sigma_apply(-1).unwrap(), short(5, &[3, 4]));
        assert!(x.sigma_apply(5).is_err());
        assert!(short(15, &[1]).sigma_apply(3).is_err());
    }

    #[test]
    fn restriction_examples() {
        let x = GroupRingElement::sigma(15, 7).unwrap();
        assert_eq!(
            x.restriction(5).unwrap(),
            GroupRingElement::sigma(5, 2).unwrap()
        );
        let n15 = norm_element(15).unwrap();
        assert_eq!(
            n15.restriction(5).unwrap(),
            norm_element(5).unwrap().scale_int(2)
        );
        assert_eq!(x.restriction(15).unwrap(), x);
        assert!(x.restriction(4).is_err());
        // G_1 is trivial: the image is the coefficient sum.
        let r = n15.restriction(1).unwrap();
        assert_eq!(r.coeffs(), &[q(8, 1)]);
    }

    #[test]
    fn corestriction_examples() {
        let x = GroupRingElement::sigma(5, 2).unwrap();
        assert_eq!(x.corestriction(15).unwrap(), short(15, &[2, 7]));
        assert_eq!(
            norm_element(5).unwrap().corestriction(15).unwrap(),
            norm_element(15).unwrap()
        );
        let half = GroupRingElement::from_coeffs(1, vec![q(1, 2)]).unwrap();
        assert_eq!(
            half.corestriction(15).unwrap(),
            norm_element(15).unwrap().scale(&q(1, 2))
        );
        let half5 = norm_element(5).unwrap().scale(&q(1, 2));
        assert_eq!(
            half5.corestriction(15).unwrap(),
            norm_element(15).unwrap().scale(&q(1, 2))
        );
        assert!(x.corestriction(12).is_err());
    }

    #[test]
    fn res_after_cor_multiplies_by_index() {
        for m in [12u64, 15, 20, 21, 36, 45] {
            let m_units = units(m).len() as i64;
            for d in (1..=m).filter(|d| m % d == 0) {
                let factor = m_units / units(d).len() as i64;
                let idx = UnitIndex::new(d);
                for (i, &s) in idx.units().iter().enumerate() {
                    let mut x = GroupRingElement::zero(d);
                    x.coeffs[i] = q(i as i64 + 1, 3);
                    let back = x.corestriction(m).unwrap().restriction(d).unwrap();
                    assert_eq!(back, x.scale_int(factor), "m={m} d={d} s={s}");
                }
            }
        }
    }

    #[test]
    fn conj_sum_examples() {
        assert_eq!(short(5, &[1, 2]).conj_sum(), norm_element(5).unwrap());
        assert!(GroupRingElement::zero(7).conj_sum().is_zero());
    }

    #[test]
    fn short_element_checks() {
        let s = ShortElement::new(5, [2, 1]).unwrap();
        assert_eq!(s.support(), &[1, 2]);
        assert!(s.is_half_system());
        assert!(!ShortElement::new(5, [1, 4]).unwrap().is_half_system());
        assert_eq!(s.to_group_ring().to_short().unwrap(), s);
        assert!(
            GroupRingElement::from_coeffs(5, vec![q(1, 2), q(0, 1), q(0, 1), q(0, 1)])
                .unwrap()
                .to_short()
                .is_none()
        );
    }
}
