//! Closed-form Hadwiger-number bounds as exact values `a + Σ b_i·√c_i`, and
//! the two-sided check of a construction certificate against them.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use num::bigint::BigInt;
use num::integer::Roots;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::constructions::ConstructionCertificate;
use crate::minors::{hadwiger_oracle, verify_model, OracleConfig, OracleError};
use crate::vortex::Params;

/// Exact real of the form `constant + Σ coeff·√radicand`.
///
/// Radicands are kept as written (so `√12` prints as `√12`); comparisons
/// reduce them to squarefree form first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundValue {
    constant: BigRational,
    radicals: Vec<(BigRational, u64)>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// `(s, r)` with `c = s²·r` and `r` squarefree.
fn squarefree(mut c: u64) -> (u64, u64) {
    let mut s = 1;
    let mut r = 1;
    let mut p = 2;
    while p * p <= c {
        while c.is_multiple_of(p * p) {
            c /= p * p;
            s *= p;
        }
        if c.is_multiple_of(p) {
            c /= p;
            r *= p;
        }
        p += 1;
    }
    (s, r * c)
}

impl BoundValue {
    pub fn int(n: i64) -> Self {
        BoundValue { constant: rat(n), radicals: Vec::new() }
    }

    pub fn rational(q: BigRational) -> Self {
        BoundValue { constant: q, radicals: Vec::new() }
    }

    /// `coeff·√radicand`; perfect squares fold into the constant.
    pub fn sqrt_term(coeff: BigRational, radicand: u64) -> Self {
        let root = radicand.sqrt();
        if root * root == radicand || coeff.is_zero() {
            return BoundValue::rational(coeff * rat(root as i64));
        }
        BoundValue { constant: BigRational::zero(), radicals: vec![(coeff, radicand)] }
    }

    pub fn sqrt(radicand: u64) -> Self {
        Self::sqrt_term(BigRational::one(), radicand)
    }

    pub fn constant(&self) -> &BigRational {
        &self.constant
    }

    pub fn radicals(&self) -> &[(BigRational, u64)] {
        &self.radicals
    }

    /// Constant plus coefficients keyed by squarefree radicand (> 1).
    fn normal_form(&self) -> (BigRational, BTreeMap<u64, BigRational>) {
        let mut constant = self.constant.clone();
        let mut terms: BTreeMap<u64, BigRational> = BTreeMap::new();
        for (q, c) in &self.radicals {
            if *c == 0 {
                continue;
            }
            let (s, r) = squarefree(*c);
            let q = q * rat(s as i64);
            if r == 1 {
                constant += q;
            } else {
                *terms.entry(r).or_insert_with(BigRational::zero) += q;
            }
        }
        terms.retain(|_, q| !q.is_zero());
        (constant, terms)
    }

    /// Exact sign. Square roots of distinct squarefree integers are linearly
    /// independent over the rationals, so the value is zero exactly when the
    /// normal form is; otherwise shrinking intervals eventually exclude zero.
    pub fn signum(&self) -> Ordering {
        let (constant, terms) = self.normal_form();
        if terms.is_empty() {
            return constant.cmp(&BigRational::zero());
        }
        let mut bits = 32u32;
        loop {
            let scale = BigInt::one() << bits;
            let mut lo = constant.clone();
            let mut hi = constant.clone();
            for (&r, q) in &terms {
                let floor = (BigInt::from(r) << (2 * bits)).sqrt();
                let a = BigRational::new(floor.clone(), scale.clone());
                let b = BigRational::new(floor + 1, scale.clone());
                if q.is_positive() {
                    lo += q * a;
                    hi += q * b;
                } else {
                    lo += q * b;
                    hi += q * a;
                }
            }
            if lo.is_positive() {
                return Ordering::Greater;
            }
            if hi.is_negative() {
                return Ordering::Less;
            }
            bits *= 2;
        }
    }

    pub fn neg(&self) -> Self {
        self.clone() * rat(-1)
    }

    pub fn cmp_int(&self, n: i64) -> Ordering {
        (self.clone() + BoundValue::int(-n)).signum()
    }

    pub fn to_f64(&self) -> f64 {
        let f = |q: &BigRational| q.to_f64().unwrap_or(f64::NAN);
        f(&self.constant) + self.radicals.iter().map(|(q, c)| f(q) * (*c as f64).sqrt()).sum::<f64>()
    }

    /// Largest integer not above the value.
    pub fn floor(&self) -> i64 {
        let mut n = self.to_f64().floor() as i64;
        while self.cmp_int(n) == Ordering::Less {
            n -= 1;
        }
        while self.cmp_int(n + 1) != Ordering::Less {
            n += 1;
        }
        n
    }

    /// Whether the value is at most the integer `n`.
    pub fn le_int(&self, n: i64) -> bool {
        self.cmp_int(n) != Ordering::Greater
    }
}

impl Add for BoundValue {
    type Output = BoundValue;

    fn add(mut self, rhs: BoundValue) -> BoundValue {
        self.constant += rhs.constant;
        self.radicals.extend(rhs.radicals);
        self
    }
}

impl Mul<BigRational> for BoundValue {
    type Output = BoundValue;

    fn mul(self, q: BigRational) -> BoundValue {
        BoundValue {
            constant: self.constant * &q,
            radicals: self.radicals.into_iter().map(|(c, r)| (c * &q, r)).collect(),
        }
    }
}

impl PartialOrd for BoundValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BoundValue {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() + other.neg()).signum()
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<(bool, String)> = Vec::new();
        if !self.constant.is_zero() || self.radicals.is_empty() {
            parts.push((self.constant.is_negative(), fmt_rational(&self.constant.abs())));
        }
        for (q, c) in &self.radicals {
            let body = if q.abs().is_one() { format!("√{c}") } else { format!("{}·√{c}", fmt_rational(&q.abs())) };
            parts.push((q.is_negative(), body));
        }
        for (i, (neg, body)) in parts.iter().enumerate() {
            match (i, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct BoundValueJson {
    expr: String,
    approx: f64,
    constant: String,
    radicals: Vec<(String, u64)>,
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    let parse = |t: &str| t.trim().parse::<BigInt>().map_err(|e| format!("bad rational {s:?}: {e}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let q = parse(q)?;
            if q.is_zero() {
                return Err(format!("zero denominator in {s:?}"));
            }
            Ok(BigRational::new(parse(p)?, q))
        }
        None => Ok(BigRational::from_integer(parse(s)?)),
    }
}

impl Serialize for BoundValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        BoundValueJson {
            expr: self.to_string(),
            approx: self.to_f64(),
            constant: fmt_rational(&self.constant),
            radicals: self.radicals.iter().map(|(q, c)| (fmt_rational(q), *c)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BoundValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let doc = BoundValueJson::deserialize(d)?;
        let constant = parse_rational(&doc.constant).map_err(D::Error::custom)?;
        let radicals = doc
            .radicals
            .iter()
            .map(|(q, c)| parse_rational(q).map(|q| (q, *c)))
            .collect::<Result<_, _>>()
            .map_err(D::Error::custom)?;
        Ok(BoundValue { constant, radicals })
    }
}

fn int(n: usize) -> BoundValue {
    BoundValue::int(n as i64)
}

/// Upper bound on the Hadwiger number of a graph of Euler genus `g`: `√(6g) + 4`.
pub fn surface_bound(g: usize) -> BoundValue {
    BoundValue::int(4) + BoundValue::sqrt(6 * g as u64)
}

/// Minimum-degree bound `k·tw + k - 1` for minors of `G[k]`.
pub fn lemma21_bound(k: usize, tw: usize) -> i64 {
    (k * tw + k) as i64 - 1
}

/// `48(k+1)√(g+p) + √(6g) + 5`.
pub fn main_upper(g: usize, p: usize, k: usize) -> BoundValue {
    BoundValue::sqrt_term(rat(48 * (k as i64 + 1)), (g + p) as u64)
        + BoundValue::sqrt(6 * g as u64)
        + BoundValue::int(5)
}

/// `a + main_upper(g, p, k)`.
pub fn full_upper(g: usize, p: usize, k: usize, a: usize) -> BoundValue {
    int(a) + main_upper(g, p, k)
}

/// Minimum-degree bound `48k√(c+g)` for weak `k`-minors of a `(g,c)`-embedded graph.
pub fn main_tool_bound(k: usize, c: usize, g: usize) -> BoundValue {
    BoundValue::sqrt_term(rat(48 * k as i64), (c + g) as u64)
}

/// `a + ¼·k·√(p+g)`.
pub fn lower_guarantee(g: usize, p: usize, k: usize, a: usize) -> BoundValue {
    int(a) + BoundValue::sqrt_term(ratio(k as i64, 4), (p + g) as u64)
}

/// Single-vortex guarantee `k√(6g)`.
pub fn one_vortex_guarantee(g: usize, k: usize) -> BoundValue {
    BoundValue::sqrt_term(rat(k as i64), 6 * g as u64)
}

/// Grid guarantee `(2/(3√3))·k·√p`, written as `(2k/9)·√(3p)`.
pub fn many_vortex_guarantee(p: usize, k: usize) -> BoundValue {
    BoundValue::sqrt_term(ratio(2 * k as i64, 9), 3 * p as u64)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum OracleCheck {
    /// `flatten(structure)` exceeds the oracle cap; only the certificate's `n` is bounded.
    Skipped {
        vertices: usize,
        cap: usize,
    },
    BudgetExceeded {
        budget: u64,
    },
    Computed {
        eta: usize,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct SandwichReport {
    pub n: usize,
    pub lower: BoundValue,
    pub upper: BoundValue,
    pub upper_floor: i64,
    /// `lower ≤ n`.
    pub lower_ok: bool,
    /// `n ≤ upper`.
    pub upper_ok: bool,
    pub oracle: OracleCheck,
    /// `n ≤ η ≤ upper` when the oracle ran.
    pub oracle_ok: bool,
}

impl SandwichReport {
    pub fn passed(&self) -> bool {
        self.lower_ok && self.upper_ok && self.oracle_ok
    }
}

/// Checks `lower_guarantee ≤ n ≤ full_upper` for the certificate, and when the
/// flattened graph is small enough, that the exact Hadwiger number sits in the
/// same window.
pub fn sandwich_check(cert: &ConstructionCertificate, params: Params, cfg: &OracleConfig) -> SandwichReport {
    let Params { g, p, k, a } = params;
    let lower = lower_guarantee(g, p, k, a);
    let upper = full_upper(g, p, k, a);
    let n = cert.n as i64;
    let lower_ok = lower.le_int(n);
    let upper_ok = upper.cmp_int(n) != Ordering::Less;
    let host = cert.structure.flatten();
    let (oracle, oracle_ok) = if host.n() > cfg.max_vertices {
        (OracleCheck::Skipped { vertices: host.n(), cap: cfg.max_vertices }, true)
    } else {
        match hadwiger_oracle(&host, cfg) {
            Ok(r) => {
                let eta = r.eta as i64;
                let ok = eta >= n && upper.cmp_int(eta) != Ordering::Less && verify_model(&host, &r.model).is_valid();
                (OracleCheck::Computed { eta: r.eta }, ok)
            }
            Err(OracleError::BudgetExceeded(budget)) => (OracleCheck::BudgetExceeded { budget }, true),
            Err(OracleError::TooLarge { n, cap }) => (OracleCheck::Skipped { vertices: n, cap }, true),
        }
    };
    SandwichReport { n: cert.n, upper_floor: upper.floor(), lower, upper, lower_ok, upper_ok, oracle, oracle_ok }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squarefree_parts() {
        assert_eq!(squarefree(12), (2, 3));
        assert_eq!(squarefree(1), (1, 1));
        assert_eq!(squarefree(72), (6, 2));
        assert_eq!(squarefree(30), (1, 30));
        assert_eq!(squarefree(49), (7, 1));
    }

    #[test]
    fn formula_values() {
        assert_eq!(surface_bound(0), BoundValue::int(4));
        assert_eq!(surface_bound(2).to_string(), "4 + √12");
        assert_eq!(full_upper(0, 1, 2, 0), BoundValue::int(149));
        assert_eq!(full_upper(0, 1, 2, 0).to_string(), "149");
        assert_eq!(lemma21_bound(2, 3), 7);
        assert_eq!(lower_guarantee(1, 1, 2, 3).to_string(), "3 + 1/2·√2");
        assert_eq!(main_tool_bound(1, 1, 0), BoundValue::int(48));
        assert_eq!(lower_guarantee(0, 1, 2, 0).to_string(), "1/2");
    }

    #[test]
    fn exact_comparisons() {
        // √12 + 4 ≈ 7.46
        let s = surface_bound(2);
        assert_eq!(s.cmp_int(7), Ordering::Greater);
        assert_eq!(s.cmp_int(8), Ordering::Less);
        assert_eq!(s.floor(), 7);
        // √12 = 2√3 exactly
        let zero = BoundValue::sqrt(12) + BoundValue::sqrt_term(rat(-2), 3);
        assert_eq!(zero.signum(), Ordering::Equal);
        // (√2 + √3)² = 5 + 2√6 < 10
        let lhs = BoundValue::sqrt(2) + BoundValue::sqrt(3);
        assert_eq!(lhs.cmp(&BoundValue::sqrt(10)), Ordering::Less);
        assert!(BoundValue::sqrt(2) < BoundValue::sqrt(3));
        // a near miss: 99/70 vs √2
        let close = BoundValue::rational(ratio(99, 70)) + BoundValue::sqrt(2).neg();
        assert_eq!(close.signum(), Ordering::Greater);
        assert_eq!(lower_guarantee(1, 1, 2, 3).floor(), 3);
    }

    #[test]
    fn full_upper_is_apex_plus_main() {
        for g in 0..4 {
            for p in 0..4 {
                for k in 0..4 {
                    for a in 0..3 {
                        let lhs = full_upper(g, p, k, a);
                        let rhs = int(a) + main_upper(g, p, k);
                        assert_eq!(lhs.cmp(&rhs), Ordering::Equal);
                    }
                }
            }
        }
    }

    #[test]
    fn construction_guarantees_exceed_quarter_bound() {
        for g in 1..8 {
            for k in 2..5 {
                assert!(one_vortex_guarantee(g, k) > lower_guarantee(g, g, k, 0));
            }
        }
        for p in 1..20 {
            for k in 2..5 {
                assert!(many_vortex_guarantee(p, k) > lower_guarantee(p - 1, p, k, 0));
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let v = lower_guarantee(1, 1, 2, 3);
        let text = serde_json::to_string(&v).unwrap();
        assert!(text.contains("\"expr\":\"3 + 1/2·√2\""));
        let back: BoundValue = serde_json::from_str(&text).unwrap();
        assert_eq!(back, v);
    }
}
