//! Stickelberger elements, the index sets that parameterize bases of the
//! module `S'_m`, the short elements `alpha_m(b)` and the named bases built
//! from them.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::conductor::{bezout_pair, gcd, modulo, Conductor};
use crate::error::{Error, Result};
use crate::group_ring::{GroupRingElement, ShortElement, UnitIndex};
use crate::linalg::RatMatrix;

/// Numerators of `theta_m(a)` over the common denominator `m`, one per unit
/// in ascending order: the coefficient of `sigma_t` is `<-a t^{-1} / m>`.
pub fn theta_numerators(idx: &UnitIndex, a: i64) -> Vec<i64> {
    let m = idx.modulus();
    let a = modulo(a, m) as u128;
    (0..idx.len())
        .map(|i| {
            let prod = a * idx.inverse(i) as u128 % m as u128;
            ((m as u128 - prod) % m as u128) as i64
        })
        .collect()
}

pub fn theta(m: u64, a: i64) -> Result<GroupRingElement> {
    Conductor::new(m)?;
    let idx = UnitIndex::new(m);
    GroupRingElement::from_scaled(m, &theta_numerators(&idx, a), m as i64)
}

/// `theta_m(a) - N_m / 2`, or zero when `m | a`.
pub fn omega(m: u64, a: i64) -> Result<GroupRingElement> {
    Conductor::new(m)?;
    let idx = UnitIndex::new(m);
    omega_in(&idx, a)
}

fn omega_in(idx: &UnitIndex, a: i64) -> Result<GroupRingElement> {
    let m = idx.modulus();
    if modulo(a, m) == 0 {
        return Ok(GroupRingElement::zero(m));
    }
    let nums: Vec<i64> = theta_numerators(idx, a)
        .into_iter()
        .map(|c| 2 * c - m as i64)
        .collect();
    GroupRingElement::from_scaled(m, &nums, 2 * m as i64)
}

fn half_norm(m: u64) -> GroupRingElement {
    GroupRingElement::norm_unchecked(m).scale(&BigRational::new(1.into(), 2.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndexSetKind {
    X,
    M,
    MPrime,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSet {
    pub modulus: u64,
    pub kind: IndexSetKind,
    pub members: Vec<u64>,
}

impl IndexSet {
    pub fn contains(&self, a: u64) -> bool {
        self.members.binary_search(&a).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

fn in_x(c: &Conductor, a: u64) -> bool {
    let g = gcd(a, c.m());
    gcd(a, c.m() / g) == 1
}

/// Residues `0 < a < m` such that each `q_i` either divides `a` or is
/// coprime to it.
pub fn set_x(m: u64) -> Result<IndexSet> {
    let c = Conductor::new(m)?;
    Ok(IndexSet {
        modulus: m,
        kind: IndexSetKind::X,
        members: (1..m).filter(|&a| in_x(&c, a)).collect(),
    })
}

fn in_m(c: &Conductor, a: u64) -> bool {
    if !in_x(c, a) {
        return false;
    }
    let m = c.m();
    let g = gcd(a, m);
    let qs = c.factors();
    for f in qs {
        if !a.is_multiple_of(f.q) && (a + g).is_multiple_of(f.q) {
            return false;
        }
    }
    if !m.is_multiple_of(a) {
        let k = qs
            .iter()
            .rposition(|f| !(a + f.q - g % f.q).is_multiple_of(f.q))
            .expect("a != (a,m) somewhere when a does not divide m");
        let qk = qs[k].q;
        if 2 * ((a / g) % qk) >= qk {
            return false;
        }
    } else if qs.iter().filter(|f| !a.is_multiple_of(f.q)).count() % 2 == 0 {
        return false;
    }
    true
}

pub fn set_m(m: u64) -> Result<IndexSet> {
    let c = Conductor::new(m)?;
    Ok(IndexSet {
        modulus: m,
        kind: IndexSetKind::M,
        members: (1..m).filter(|&a| in_m(&c, a)).collect(),
    })
}

pub fn set_mprime(m: u64) -> Result<IndexSet> {
    let c = Conductor::new(m)?;
    Ok(IndexSet {
        modulus: m,
        kind: IndexSetKind::MPrime,
        members: mprime_members(&c),
    })
}

fn mprime_members(c: &Conductor) -> Vec<u64> {
    let m = c.m();
    let mut out: Vec<u64> = (1..m)
        .filter(|&a| in_m(c, a) && c.factors().iter().all(|f| a % (m / f.q) != 0))
        .collect();
    for f in c.factors() {
        out.extend((1..=f.phi() / 2).map(|b| m / f.q * b));
    }
    out.sort_unstable();
    out
}

/// Which prime-power factors of `m` divide `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorSupport {
    pub b: u64,
    /// Product of the `q_i` dividing `b`.
    pub r_b: u64,
    /// Indices `i` with `q_i | b`.
    pub dividing: Vec<usize>,
    /// Indices `i` with `q_i` not dividing `b`.
    pub coprime: Vec<usize>,
}

impl FactorSupport {
    pub fn new(c: &Conductor, b: u64) -> Result<Self> {
        if b == 0 || b >= c.m() {
            return Err(Error::OutOfRange {
                b: b as i64,
                m: c.m(),
            });
        }
        let (dividing, coprime): (Vec<usize>, Vec<usize>) =
            (0..c.t()).partition(|&i| b.is_multiple_of(c.factors()[i].q));
        let r_b = dividing.iter().map(|&i| c.factors()[i].q).product();
        Ok(FactorSupport {
            b,
            r_b,
            dividing,
            coprime,
        })
    }
}

/// Which of the three constructions produced `alpha_m(b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaCase {
    /// Several factors do not divide `b`; splits `-b` with a Bezout relation
    /// `ux + vy = -1`.
    Bezout { u: u64, v: u64, x: i64, y: i64 },
    /// `b = c m / q_j` with `1 < c < q_j`.
    SingleFactor { j: usize, c: u64 },
    /// `b = m / q_j`.
    Cofactor { j: usize },
}

/// `alpha_m(b) = theta(args[0]) + theta(args[1]) + theta(args[2]) - N_m`,
/// with the three arguments summing to `0 (mod m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaRecipe {
    pub b: u64,
    pub case: AlphaCase,
    /// Arguments reduced into `[0, m)`.
    pub args: [u64; 3],
    /// Character exponents `(b, c)` of the Jacobi sum whose ideal is the
    /// image of `alpha_m(b)`.
    pub jacobi_pair: (u64, u64),
}

pub fn alpha_recipe(c: &Conductor, b: u64) -> Result<AlphaRecipe> {
    let m = c.m();
    let fs = FactorSupport::new(c, b)?;
    let red = |x: i128| x.rem_euclid(m as i128) as u64;
    let bi = b as i128;
    if fs.coprime.len() > 1 {
        let u = c.factors()[fs.coprime[0]].q;
        let v = m / (u * fs.r_b);
        let (x, y) = bezout_pair(u, v)?;
        let p1 = red(bi * u as i128 * x as i128);
        let p2 = red(bi * v as i128 * y as i128);
        return Ok(AlphaRecipe {
            b,
            case: AlphaCase::Bezout { u, v, x, y },
            args: [b, p1, p2],
            jacobi_pair: (p1, p2),
        });
    }
    let j = fs.coprime[0];
    let f = c.factors()[j];
    let cof = m / f.q;
    let cc = b / cof;
    if cc > 1 {
        let p1 = b - cof;
        Ok(AlphaRecipe {
            b,
            case: AlphaCase::SingleFactor { j, c: cc },
            args: [m - b, p1, cof],
            jacobi_pair: (p1, cof),
        })
    } else {
        let d = m / f.q * f.phi() / 2;
        Ok(AlphaRecipe {
            b,
            case: AlphaCase::Cofactor { j },
            args: [d, d, m / f.p],
            jacobi_pair: (d, d),
        })
    }
}

fn alpha_in(c: &Conductor, idx: &UnitIndex, b: u64) -> Result<ShortElement> {
    let m = c.m();
    let recipe = alpha_recipe(c, b)?;
    let mut sums = vec![0i64; idx.len()];
    for &a in &recipe.args {
        for (s, n) in sums.iter_mut().zip(theta_numerators(idx, a as i64)) {
            *s += n;
        }
    }
    let mut support = Vec::with_capacity(idx.len() / 2);
    for (i, &s) in sums.iter().enumerate() {
        if s == 2 * m as i64 {
            support.push(idx.units()[i]);
        } else if s != m as i64 {
            return Err(Error::Inconsistent(format!(
                "alpha_{m}({b}) has coefficient {}/{m} - 1",
                s
            )));
        }
    }
    ShortElement::new(m, support)
}

/// The short element `alpha_m(b)` for `0 < b < m`.
pub fn alpha(m: u64, b: u64) -> Result<ShortElement> {
    let c = Conductor::new(m)?;
    alpha_in(&c, &UnitIndex::new(m), b)
}

/// The bases of `S'_m` (and the short basis of `S_m`) built here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisKind {
    /// `{omega(a) : a in M} + {N/2}`.
    Omega,
    /// `{theta(a) : a in M'} + {N/2}`.
    Theta,
    /// `{alpha(b) : b in M', b != m/q_i} + {theta(m/q_i)} + {N/2}`.
    AlmostShort,
    /// `{alpha(a) : a in M'} + {N/2}`; spans a sublattice of `S'_m`.
    AlphaHalfNorm,
    /// `{alpha(a) : a in M'} + {N}`: a basis of `S_m` of short elements.
    Short,
}

impl BasisKind {
    pub const ALL: [BasisKind; 5] = [
        BasisKind::Omega,
        BasisKind::Theta,
        BasisKind::AlmostShort,
        BasisKind::AlphaHalfNorm,
        BasisKind::Short,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BasisKind::Omega => "omega",
            BasisKind::Theta => "theta",
            BasisKind::AlmostShort => "almost-short",
            BasisKind::AlphaHalfNorm => "alpha-half-norm",
            BasisKind::Short => "short",
        }
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for BasisKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        BasisKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown basis {s:?}"))
    }
}

/// What a basis element is, for labelling and serialization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementLabel {
    Omega(u64),
    Theta(u64),
    Alpha(u64),
    HalfNorm,
    Norm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedBasis {
    pub kind: BasisKind,
    pub modulus: u64,
    pub labels: Vec<ElementLabel>,
    pub elements: Vec<GroupRingElement>,
}

impl NamedBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Coefficient rows in ascending unit order.
    pub fn to_matrix(&self) -> RatMatrix {
        let cols = self.elements.first().map_or(0, |e| e.coeffs().len());
        RatMatrix::from_rows(
            self.elements.iter().map(|e| e.coeffs().to_vec()).collect(),
            cols,
        )
        .expect("elements share a modulus")
    }

    /// The short elements of the basis, when every element is short.
    pub fn short_elements(&self) -> Option<Vec<ShortElement>> {
        self.elements
            .iter()
            .map(GroupRingElement::to_short)
            .collect()
    }
}

/// Short elements `alpha_m(b)` for every `b` in `M'_m`, computed in parallel.
pub fn alphas_on_mprime(m: u64) -> Result<Vec<(u64, ShortElement)>> {
    let c = Conductor::new(m)?;
    let idx = UnitIndex::new(m);
    mprime_members(&c)
        .into_par_iter()
        .map(|b| alpha_in(&c, &idx, b).map(|a| (b, a)))
        .collect()
}

pub fn basis(m: u64, kind: BasisKind) -> Result<NamedBasis> {
    let c = Conductor::new(m)?;
    let idx = UnitIndex::new(m);
    let theta_el =
        |a: u64| GroupRingElement::from_scaled(m, &theta_numerators(&idx, a as i64), m as i64);
    let mut labels = Vec::new();
    let mut elements = Vec::new();
    match kind {
        BasisKind::Omega => {
            for a in (1..m).filter(|&a| in_m(&c, a)) {
                labels.push(ElementLabel::Omega(a));
                elements.push(omega_in(&idx, a as i64)?);
            }
        }
        BasisKind::Theta => {
            for a in mprime_members(&c) {
                labels.push(ElementLabel::Theta(a));
                elements.push(theta_el(a)?);
            }
        }
        BasisKind::AlmostShort => {
            let cofactors: Vec<u64> = c.factors().iter().map(|f| m / f.q).collect();
            for (b, a) in alphas_on_mprime(m)? {
                if !cofactors.contains(&b) {
                    labels.push(ElementLabel::Alpha(b));
                    elements.push(a.to_group_ring());
                }
            }
            for b in cofactors {
                labels.push(ElementLabel::Theta(b));
                elements.push(theta_el(b)?);
            }
        }
        BasisKind::AlphaHalfNorm | BasisKind::Short => {
            for (b, a) in alphas_on_mprime(m)? {
                labels.push(ElementLabel::Alpha(b));
                elements.push(a.to_group_ring());
            }
        }
    }
    if kind == BasisKind::Short {
        labels.push(ElementLabel::Norm);
        elements.push(GroupRingElement::norm_unchecked(m));
    } else {
        labels.push(ElementLabel::HalfNorm);
        elements.push(half_norm(m));
    }
    Ok(NamedBasis {
        kind,
        modulus: m,
        labels,
        elements,
    })
}

/// `{alpha_m(a) : a in M'_m} + {N_m}`.
pub fn short_basis(m: u64) -> Result<NamedBasis> {
    basis(m, BasisKind::Short)
}

/// Exact coordinates of `x` in `basis`.
pub fn expand_in_basis(x: &GroupRingElement, basis: &NamedBasis) -> Result<Vec<BigRational>> {
    if x.modulus() != basis.modulus {
        return Err(Error::ModulusMismatch(x.modulus(), basis.modulus));
    }
    basis.to_matrix().solve_left(x.coeffs())
}

/// `x` written as an integer vector over the denominator `2m`, the scale at
/// which every element of `S'_m` becomes integral.
pub fn integral_coeffs(x: &GroupRingElement) -> Result<Vec<BigInt>> {
    x.scaled_integers(&BigInt::from(2 * x.modulus()))
}
