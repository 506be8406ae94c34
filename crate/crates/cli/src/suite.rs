//! Verification suites run by `stick verify`.
//!
//! The shortness suite rebuilds every `alpha_m(b)` from its three theta
//! terms with group-ring arithmetic, independently of the closed form used
//! by the library, and checks the short-element properties. The deep suite
//! adds the lattice comparisons.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use stickel_core::linalg::{hnf, lattice_intersect_integral, transition_determinant};
use stickel_core::stickelberger::alpha_recipe;
use stickel_core::{alpha, basis, norm_element, set_mprime, theta, BasisKind, Conductor, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub m: u64,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{status} m={} {}: {}\n", self.m, c.name, c.detail));
        }
        out
    }
}

fn listed(bs: &[u64]) -> String {
    if bs.is_empty() {
        "all b".into()
    } else {
        let shown: Vec<String> = bs.iter().take(8).map(u64::to_string).collect();
        let more = if bs.len() > 8 {
            format!(" (+{} more)", bs.len() - 8)
        } else {
            String::new()
        };
        format!("failing b = {}{more}", shown.join(","))
    }
}

/// For every `b` in `M'_m`: the element rebuilt from theta terms has
/// coefficients in `{0, 1}`, exactly `phi(m)/2` ones, satisfies
/// `(1 + sigma_{-1}) x = N_m`, and equals the library's `alpha_m(b)`.
pub fn shortness_suite(m: u64) -> Result<SuiteReport> {
    let c = Conductor::new(m)?;
    let half = (c.phi() / 2) as usize;
    let norm = norm_element(m)?;
    let members = set_mprime(m)?.members;
    let (mut not_short, mut wrong_count, mut not_half, mut differs) =
        (vec![], vec![], vec![], vec![]);
    for &b in &members {
        let recipe = alpha_recipe(&c, b)?;
        let mut x = norm.scale_int(-1);
        for &arg in &recipe.args {
            x = x.checked_add(&theta(m, arg as i64)?)?;
        }
        let Some(short) = x.to_short() else {
            not_short.push(b);
            continue;
        };
        if short.support().len() != half {
            wrong_count.push(b);
        }
        if x.conj_sum() != norm {
            not_half.push(b);
        }
        if alpha(m, b)? != short {
            differs.push(b);
        }
    }
    let count = format!("{} elements", members.len());
    Ok(SuiteReport {
        m,
        checks: vec![
            Check::new(
                "index-set-size",
                members.len() == half,
                format!("|M'| = {}, phi/2 = {half}", members.len()),
            ),
            Check::new(
                "coefficients-in-0-1",
                not_short.is_empty(),
                format!("{count}, {}", listed(&not_short)),
            ),
            Check::new(
                "half-phi-ones",
                wrong_count.is_empty(),
                format!("{count}, {}", listed(&wrong_count)),
            ),
            Check::new(
                "complements-negative",
                not_half.is_empty(),
                format!("{count}, {}", listed(&not_half)),
            ),
            Check::new(
                "matches-library-alpha",
                differs.is_empty(),
                format!("{count}, {}", listed(&differs)),
            ),
        ],
    })
}

/// Expected `|transition_determinant|` from the theta basis to `kind`.
pub fn expected_index(m: u64, kind: BasisKind) -> Result<BigInt> {
    let c = Conductor::new(m)?;
    Ok(match kind {
        BasisKind::Short => BigInt::from(c.w()),
        BasisKind::AlphaHalfNorm => BigInt::from(if m % 2 == 1 { m } else { m / 2 }),
        _ => BigInt::one(),
    })
}

/// Shortness plus: the HNF of the short basis equals the HNF of the integral
/// part of the theta lattice, and the three transition indices.
pub fn deep_suite(m: u64) -> Result<SuiteReport> {
    let mut report = shortness_suite(m)?;
    let theta_rows = basis(m, BasisKind::Theta)?.to_matrix();
    let short_rows = basis(m, BasisKind::Short)?.to_matrix();
    let short_int = short_rows.scaled(&BigInt::one())?;
    let equal = hnf(&short_int) == lattice_intersect_integral(&theta_rows)?;
    report.checks.push(Check::new(
        "hnf-equality",
        equal,
        "HNF(short basis) vs HNF(theta lattice meet Z[G])",
    ));
    for kind in [
        BasisKind::Short,
        BasisKind::AlphaHalfNorm,
        BasisKind::AlmostShort,
    ] {
        let rows = if kind == BasisKind::Short {
            short_rows.clone()
        } else {
            basis(m, kind)?.to_matrix()
        };
        let det = transition_determinant(&theta_rows, &rows)?;
        let want = expected_index(m, kind)?;
        let got = det.abs();
        let ok = got.is_integer() && got.numer() == &want;
        report.checks.push(Check::new(
            &format!("index-theta-to-{}", kind.name()),
            ok,
            format!("|det| = {got}, expected {want}"),
        ));
    }
    Ok(report)
}
