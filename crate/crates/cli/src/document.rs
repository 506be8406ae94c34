//! Serialized forms: the short-basis document and numeric helpers for JSON
//! output that never goes through floating point.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use stickel_core::{short_basis, Conductor, Result};

/// One prime power `p^e` of the conductor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorRow {
    pub e: u32,
    pub p: u64,
}

/// One basis element: `kind` is `"alpha"` for `alpha_m(b)` and `"norm"` for
/// the norm element, which is written with `b = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisRow {
    pub b: u64,
    pub kind: String,
    pub support: Vec<u64>,
}

/// The short basis of `S_m`. Fields are declared in key order so the JSON
/// form is canonical and survives a parse/serialize round trip unchanged.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisDocument {
    pub a: u32,
    pub elements: Vec<BasisRow>,
    pub factors: Vec<FactorRow>,
    pub includes_norm: bool,
    pub m: u64,
    pub m_prime: Vec<u64>,
    pub w: u64,
}

impl BasisDocument {
    pub fn build(m: u64) -> Result<Self> {
        let c = Conductor::new(m)?;
        let basis = short_basis(m)?;
        let shorts = basis
            .short_elements()
            .expect("every element of the short basis is short");
        let mut elements = Vec::with_capacity(shorts.len());
        let mut m_prime = Vec::new();
        for (label, el) in basis.labels.iter().zip(&shorts) {
            let (b, kind) = match label {
                stickel_core::stickelberger::ElementLabel::Alpha(b) => {
                    m_prime.push(*b);
                    (*b, "alpha")
                }
                _ => (0, "norm"),
            };
            elements.push(BasisRow {
                b,
                kind: kind.into(),
                support: el.support().to_vec(),
            });
        }
        Ok(BasisDocument {
            a: c.a(),
            includes_norm: elements.iter().any(|r| r.kind == "norm"),
            elements,
            factors: c
                .factors()
                .iter()
                .map(|f| FactorRow { e: f.e, p: f.p })
                .collect(),
            m,
            m_prime,
            w: c.w(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// One line per element: `b=<b>: {s1,s2,...}`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for row in &self.elements {
            let parts: Vec<String> = row.support.iter().map(u64::to_string).collect();
            out.push_str(&format!("b={}: {{{}}}\n", row.b, parts.join(",")));
        }
        out
    }
}

/// An arbitrary-size integer as a JSON number.
pub fn json_int(x: &BigInt) -> serde_json::Value {
    serde_json::Value::Number(
        x.to_string()
            .parse()
            .expect("decimal integers are JSON numbers"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conductor_five() {
        let d = BasisDocument::build(5).unwrap();
        let supports: Vec<&[u64]> = d.elements.iter().map(|r| r.support.as_slice()).collect();
        assert_eq!(supports, vec![&[1, 2][..], &[1, 3], &[1, 2, 3, 4]]);
        assert_eq!(d.elements[2].b, 0);
        assert!(d.includes_norm);
        assert_eq!((d.w, d.a), (10, 0));
        assert_eq!(d.to_text(), "b=1: {1,2}\nb=2: {1,3}\nb=0: {1,2,3,4}\n");
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        for m in [3u64, 5, 12, 15, 20, 36, 105] {
            let d = BasisDocument::build(m).unwrap();
            let s = d.to_json();
            let back = BasisDocument::from_json(&s).unwrap();
            assert_eq!(back, d);
            assert_eq!(back.to_json(), s);
            assert!(!s.contains('.'), "no floating point in {s}");
        }
    }

    #[test]
    fn element_counts_and_sorted_supports() {
        for m in [7u64, 16, 21, 40, 60] {
            let d = BasisDocument::build(m).unwrap();
            let phi = stickel_core::conductor::euler_phi(m) as usize;
            assert_eq!(d.elements.len(), phi / 2 + 1);
            assert_eq!(d.m_prime.len(), phi / 2);
            assert!(d
                .elements
                .iter()
                .all(|r| r.support.windows(2).all(|w| w[0] < w[1])));
        }
    }

    #[test]
    fn huge_integers_stay_exact() {
        let x: BigInt = "123456789012345678901234567890123456789".parse().unwrap();
        assert_eq!(serde_json::to_string(&json_int(&x)).unwrap(), x.to_string());
    }

    proptest::proptest! {
        #![proptest_config(proptest::test_runner::Config::with_cases(48))]

        #[test]
        fn documents_are_canonical(
            m in proptest::sample::select(stickel_core::conductor::valid_conductors(3, 400).collect::<Vec<_>>())
        ) {
            let d = BasisDocument::build(m).unwrap();
            let phi = stickel_core::conductor::euler_phi(m) as usize;
            proptest::prop_assert_eq!(d.elements.len(), phi / 2 + 1);
            for row in &d.elements {
                proptest::prop_assert!(row.support.windows(2).all(|w| w[0] < w[1]));
                let want = if row.kind == "norm" { phi } else { phi / 2 };
                proptest::prop_assert_eq!(row.support.len(), want);
            }
            let s = d.to_json();
            proptest::prop_assert_eq!(BasisDocument::from_json(&s).unwrap().to_json(), s);
        }
    }
}
