//! Rényi, von Neumann and linear entropies of spectra, in nats.

use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::Spectrum;

/// Orders within this distance above 1 use the von Neumann branch.
const VON_NEUMANN_WINDOW: f64 = 1e-9;
/// Spectrum entries below this are dropped from `-Σ λ ln λ`.
const ENTROPY_FLOOR: f64 = 1e-15;

/// Entropic order `q >= 1`, possibly infinite.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EntropicOrder(f64);

impl EntropicOrder {
    pub const ONE: EntropicOrder = EntropicOrder(1.0);
    pub const TWO: EntropicOrder = EntropicOrder(2.0);
    pub const INFINITY: EntropicOrder = EntropicOrder(f64::INFINITY);

    pub fn new(q: f64) -> Result<Self> {
        if q.is_nan() || q < 1.0 {
            return Err(Error::InvalidOrder(q));
        }
        Ok(Self(q))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    fn is_von_neumann(self) -> bool {
        self.0 < 1.0 + VON_NEUMANN_WINDOW
    }
}

impl fmt::Display for EntropicOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl std::str::FromStr for EntropicOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "Infinity" => Ok(Self::INFINITY),
            other => other
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("entropic order `{other}`: {e}")))
                .and_then(Self::new),
        }
    }
}

impl Serialize for EntropicOrder {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_infinite() {
            serializer.serialize_str("inf")
        } else {
            serializer.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for EntropicOrder {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct OrderVisitor;

        impl Visitor<'_> for OrderVisitor {
            type Value = EntropicOrder;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number >= 1 or the string \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<EntropicOrder, E> {
                EntropicOrder::new(v).map_err(E::custom)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<EntropicOrder, E> {
                self.visit_f64(v as f64)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<EntropicOrder, E> {
                self.visit_f64(v as f64)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<EntropicOrder, E> {
                v.parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_any(OrderVisitor)
    }
}

/// `-Σ λ ln λ` with `0 ln 0 = 0`.
pub fn von_neumann(spec: &Spectrum) -> f64 {
    -spec
        .values()
        .iter()
        .filter(|&&l| l > ENTROPY_FLOOR)
        .map(|&l| l * l.ln())
        .sum::<f64>()
}

/// `1 - Σ λ²`.
pub fn linear_entropy(spec: &Spectrum) -> f64 {
    1.0 - spec.purity()
}

/// `ln Σ λ^q`, factoring out `λ_max` so large orders do not underflow.
fn log_power_sum(spec: &Spectrum, q: f64) -> f64 {
    let top = spec.max();
    if top <= 0.0 {
        return f64::NEG_INFINITY;
    }
    let rest: f64 = spec.values().iter().map(|&l| (l / top).powf(q)).sum();
    q * top.ln() + rest.ln()
}

/// Rényi entropy `ln(Σ λ^q) / (1 - q)`; von Neumann at `q = 1`, `-ln λ_max` at `q = ∞`.
pub fn renyi(spec: &Spectrum, q: EntropicOrder) -> f64 {
    if q.is_infinite() {
        -spec.max().ln()
    } else if q.is_von_neumann() {
        von_neumann(spec)
    } else {
        log_power_sum(spec, q.0) / (1.0 - q.0)
    }
}

/// Raw finite-order Rényi entropy for orders straddling 1, without the
/// von Neumann dispatch. Only meant for probing continuity at `q = 1`.
pub fn renyi_continuity_check(spec: &Spectrum, q: f64) -> Result<f64> {
    if q == 1.0 || (q - 1.0).abs() > 0.01 || q.is_nan() {
        return Err(Error::InvalidOrder(q));
    }
    Ok(log_power_sum(spec, q) / (1.0 - q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn spec(v: &[f64]) -> Spectrum {
        Spectrum::new(v.to_vec()).unwrap()
    }

    fn orders() -> Vec<EntropicOrder> {
        [1.0, 1.5, 2.0, 3.0, 7.5, 50.0]
            .into_iter()
            .map(|q| EntropicOrder::new(q).unwrap())
            .chain([EntropicOrder::INFINITY])
            .collect()
    }

    #[test]
    fn uniform_gives_log_d() {
        for d in [2usize, 4, 6, 15] {
            let s = spec(&vec![1.0 / d as f64; d]);
            for q in orders() {
                assert_abs_diff_eq!(renyi(&s, q), (d as f64).ln(), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn pure_gives_zero() {
        let s = spec(&[1.0, 0.0, 0.0]);
        for q in orders() {
            assert_abs_diff_eq!(renyi(&s, q), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn two_level_collision_entropy() {
        let s = spec(&[0.7, 0.3]);
        let expected = -(0.7f64 * 0.7 + 0.3 * 0.3).ln();
        assert_abs_diff_eq!(renyi(&s, EntropicOrder::TWO), expected, epsilon = 1e-14);
        assert_abs_diff_eq!(expected, 0.5447271754416722, epsilon = 1e-12);
    }

    #[test]
    fn von_neumann_examples() {
        assert_abs_diff_eq!(von_neumann(&spec(&[1.0 / 6.0; 6])), 6f64.ln(), epsilon = 1e-14);
        assert_abs_diff_eq!(von_neumann(&spec(&[0.25; 4])), 4f64.ln(), epsilon = 1e-14);
        assert_abs_diff_eq!(von_neumann(&spec(&[0.5, 0.5, 0.0, 0.0])), 2f64.ln(), epsilon = 1e-14);
    }

    #[test]
    fn linear_entropy_examples() {
        assert_eq!(linear_entropy(&spec(&[1.0, 0.0])), 0.0);
        assert_abs_diff_eq!(linear_entropy(&spec(&[1.0 / 6.0; 6])), 5.0 / 6.0, epsilon = 1e-14);
        for i in 0..=10 {
            let p = i as f64 / 10.0;
            let mut w = vec![(1.0 - p) / 6.0; 5];
            w.push((1.0 + 5.0 * p) / 6.0);
            let expected = 1.0 - ((1.0 + 5.0 * p).powi(2) / 36.0 + 5.0 * (1.0 - p).powi(2) / 36.0);
            assert_abs_diff_eq!(linear_entropy(&spec(&w)), expected, epsilon = 1e-14);
        }
    }

    #[test]
    fn orders_below_one_rejected() {
        assert!(matches!(EntropicOrder::new(0.5), Err(Error::InvalidOrder(_))));
        assert!(EntropicOrder::new(f64::NAN).is_err());
        assert!("0.9".parse::<EntropicOrder>().is_err());
        assert!("inf".parse::<EntropicOrder>().unwrap().is_infinite());
    }

    #[test]
    fn near_one_dispatches_to_von_neumann() {
        let s = spec(&[0.6, 0.3, 0.1]);
        let q = EntropicOrder::new(1.0 + 1e-10).unwrap();
        assert_eq!(renyi(&s, q), von_neumann(&s));
    }

    #[test]
    fn continuity_at_one() {
        let s = spec(&[0.9, 0.1]);
        let near = renyi_continuity_check(&s, 1.001).unwrap();
        assert!((near - von_neumann(&s)).abs() <= 1e-3);
        let u = spec(&[0.25; 4]);
        assert_abs_diff_eq!(renyi_continuity_check(&u, 0.995).unwrap(), 4f64.ln(), epsilon = 1e-12);
        assert_eq!(renyi_continuity_check(&spec(&[1.0, 0.0]), 1.005).unwrap(), 0.0);
        assert!(renyi_continuity_check(&s, 1.0).is_err());
        assert!(renyi_continuity_check(&s, 1.5).is_err());
    }

    #[test]
    fn order_serialization() {
        assert_eq!(serde_json::to_string(&EntropicOrder::INFINITY).unwrap(), "\"inf\"");
        assert_eq!(serde_json::to_string(&EntropicOrder::TWO).unwrap(), "2.0");
        let q: EntropicOrder = serde_json::from_str("\"inf\"").unwrap();
        assert!(q.is_infinite());
        let q: EntropicOrder = serde_json::from_str("3").unwrap();
        assert_eq!(q.value(), 3.0);
        assert!(serde_json::from_str::<EntropicOrder>("0.5").is_err());
    }

    fn arb_spectrum() -> impl Strategy<Value = Spectrum> {
        prop::collection::vec(0.0f64..1.0, 1..12).prop_filter_map("non-zero mass", |raw| {
            let total: f64 = raw.iter().sum();
            (total > 1e-6).then(|| spec(&raw.iter().map(|x| x / total).collect::<Vec<_>>()))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn renyi_non_increasing_in_q(s in arb_spectrum(), a in 1.0f64..20.0, b in 1.0f64..20.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let hq = renyi(&s, EntropicOrder::new(hi).unwrap());
            let lq = renyi(&s, EntropicOrder::new(lo).unwrap());
            prop_assert!(lq >= hq - 1e-12);
            prop_assert!(hq >= renyi(&s, EntropicOrder::INFINITY) - 1e-12);
        }

        #[test]
        fn renyi_within_range(s in arb_spectrum(), q in 1.0f64..50.0) {
            let h = renyi(&s, EntropicOrder::new(q).unwrap());
            prop_assert!(h >= -1e-12);
            prop_assert!(h <= (s.len() as f64).ln() + 1e-12);
        }

        #[test]
        fn min_entropy_is_exact(s in arb_spectrum()) {
            prop_assert_eq!(renyi(&s, EntropicOrder::INFINITY), -s.max().ln());
        }

        #[test]
        fn near_one_bound(s in arb_spectrum(), delta in 1e-6f64..0.01) {
            let d = s.len() as f64;
            let bound = 10.0 * delta * d.ln().powi(2).max(1e-300);
            for q in [1.0 + delta, 1.0 - delta] {
                let diff = (renyi_continuity_check(&s, q).unwrap() - von_neumann(&s)).abs();
                prop_assert!(diff <= bound + 1e-12, "q = {}, diff = {}, bound = {}", q, diff, bound);
            }
        }
    }
}
