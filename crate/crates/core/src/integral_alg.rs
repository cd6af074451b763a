//! Integral classes modeled as `Z[p_1, p_2, ...]` plus 2-torsion.
//!
//! The torsion summand is the image of the Bockstein; it is stored through its
//! mod-2 image, which lies in the image of `Sq1`. Products of torsion classes
//! are computed in GF(2) from their images. This is a model of the ring
//! structure, exact for the identities exercised in this crate, not a full
//! description of `H*(BSO; Z)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::char_alg::{Generator, Gf2Poly, Monomial};
use crate::error::{Error, Result};

/// Monomial in Pontryagin classes: sorted `(index, exponent)` pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PMonomial(Vec<(u32, u32)>);

impl PMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn from_factors<I: IntoIterator<Item = (u32, u32)>>(factors: I) -> Self {
        let mut exps: BTreeMap<u32, u32> = BTreeMap::new();
        for (i, e) in factors {
            assert!(i >= 1, "p_0 is the unit");
            if e > 0 {
                *exps.entry(i).or_default() += e;
            }
        }
        PMonomial(exps.into_iter().collect())
    }

    /// Cohomological degree; `|p_i| = 4i`.
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(i, e)| 4 * i * e).sum()
    }

    pub fn factors(&self) -> &[(u32, u32)] {
        &self.0
    }

    fn mul(&self, other: &PMonomial) -> PMonomial {
        PMonomial::from_factors(self.0.iter().chain(other.0.iter()).copied())
    }
}

impl fmt::Display for PMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (n, (i, e)) in self.0.iter().enumerate() {
            if n > 0 {
                write!(f, "*")?;
            }
            match e {
                1 => write!(f, "p{i}")?,
                _ => write!(f, "p{i}^{e}")?,
            }
        }
        Ok(())
    }
}

/// Integer polynomial in the Pontryagin classes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntPoly {
    terms: BTreeMap<PMonomial, i64>,
}

impl IntPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, PMonomial::one())
    }

    pub fn p(i: u32) -> Self {
        Self::monomial(1, PMonomial::from_factors([(i, 1)]))
    }

    pub fn monomial(coeff: i64, m: PMonomial) -> Self {
        let mut p = Self::zero();
        p.add_term(m, coeff);
        p
    }

    fn add_term(&mut self, m: PMonomial, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PMonomial, &i64)> {
        self.terms.iter()
    }

    pub fn scale(&self, n: i64) -> IntPoly {
        let mut out = IntPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * n);
        }
        out
    }

    pub fn pow(&self, e: u32) -> IntPoly {
        (0..e).fold(IntPoly::one(), |acc, _| &acc * self)
    }

    /// Mod-2 reduction, `p_i -> w_(2i)^2`.
    pub fn reduce_mod2(&self) -> Gf2Poly {
        Gf2Poly::from_monomials(self.terms.iter().filter(|(_, c)| *c % 2 != 0).map(
            |(m, _)| {
                Monomial::from_factors(m.factors().iter().map(|(i, e)| (Generator::w(2 * i), 2 * e)))
            },
        ))
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), *c);
        }
        out
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        let mut out = IntPoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a.mul(b), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms.iter().enumerate() {
            let (sign, abs) = if *c < 0 { ("-", -c) } else { ("+", *c) };
            match (n, sign) {
                (0, "-") => write!(f, "-")?,
                (0, _) => {}
                _ => write!(f, " {sign} ")?,
            }
            match (abs, m.factors().is_empty()) {
                (1, false) => write!(f, "{m}")?,
                (_, true) => write!(f, "{abs}")?,
                _ => write!(f, "{abs}*{m}")?,
            }
        }
        Ok(())
    }
}

type PTermJson = (i64, Vec<(String, u32)>);

impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<PTermJson> = self
            .terms
            .iter()
            .map(|(m, c)| (*c, m.factors().iter().map(|(i, e)| (format!("p{i}"), *e)).collect()))
            .collect();
        terms.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let terms: Vec<PTermJson> = Vec::deserialize(deserializer)?;
        let mut out = IntPoly::zero();
        for (c, factors) in terms {
            let mut fs = Vec::new();
            for (name, e) in factors {
                let i: u32 = name
                    .strip_prefix('p')
                    .and_then(|d| d.parse().ok())
                    .filter(|&i| i >= 1)
                    .ok_or_else(|| D::Error::custom(format!("bad Pontryagin class {name:?}")))?;
                fs.push((i, e));
            }
            out.add_term(PMonomial::from_factors(fs), c);
        }
        Ok(out)
    }
}

/// Element of `Z[p_1, p_2, ...] + im(beta)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntegralClass {
    pub free: IntPoly,
    pub torsion: Gf2Poly,
}

impl IntegralClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_free(IntPoly::one())
    }

    pub fn from_free(free: IntPoly) -> Self {
        IntegralClass {
            free,
            torsion: Gf2Poly::zero(),
        }
    }

    pub fn p(i: u32) -> Self {
        Self::from_free(IntPoly::p(i))
    }

    /// The torsion class `v_(i_1,...,i_r)` whose mod-2 image is
    /// `w_(i_1) ... w_(i_r)`. Fails when that monomial is not in `im Sq1`.
    pub fn v_class(indices: &[u32]) -> Result<Self> {
        if indices.is_empty() || indices.contains(&0) {
            return Err(Error::InvalidParameter(format!(
                "v-class indices must be positive, got {indices:?}"
            )));
        }
        let m = Monomial::from_factors(indices.iter().map(|&i| (Generator::w(i), 1)));
        let d = m.degree();
        let w = Gf2Poly::from_monomial(m.clone());
        if w.sq1_preimage(d).is_none() {
            return Err(Error::NotInSq1Image(m.to_string()));
        }
        Ok(IntegralClass {
            free: IntPoly::zero(),
            torsion: w,
        })
    }

    pub fn scale(&self, n: i64) -> IntegralClass {
        IntegralClass {
            free: self.free.scale(n),
            torsion: if n % 2 == 0 {
                Gf2Poly::zero()
            } else {
                self.torsion.clone()
            },
        }
    }

    pub fn pow(&self, e: u32) -> IntegralClass {
        (0..e).fold(IntegralClass::one(), |acc, _| &acc * self)
    }

    pub fn reduce_mod2(&self) -> Gf2Poly {
        &self.free.reduce_mod2() + &self.torsion
    }

    /// Free part; tensoring with Q kills the torsion.
    pub fn rationalize(&self) -> IntPoly {
        self.free.clone()
    }

    /// Whether every homogeneous part of the torsion lies in `im Sq1`.
    pub fn torsion_in_sq1_image(&self) -> bool {
        let Some(top) = self.torsion.max_degree() else {
            return true;
        };
        (0..=top).all(|d| self.torsion.homogeneous_part(d).sq1_preimage(d).is_some())
    }
}

impl Add for &IntegralClass {
    type Output = IntegralClass;
    fn add(self, rhs: &IntegralClass) -> IntegralClass {
        IntegralClass {
            free: &self.free + &rhs.free,
            torsion: &self.torsion + &rhs.torsion,
        }
    }
}

impl Mul for &IntegralClass {
    type Output = IntegralClass;
    /// `(F1, T1)(F2, T2) = (F1 F2, r(F1) T2 + r(F2) T1 + T1 T2)` with `r` the
    /// mod-2 reduction.
    fn mul(self, rhs: &IntegralClass) -> IntegralClass {
        let cross = &(&self.free.reduce_mod2() * &rhs.torsion) + &(&rhs.free.reduce_mod2() * &self.torsion);
        IntegralClass {
            free: &self.free * &rhs.free,
            torsion: &cross + &(&self.torsion * &rhs.torsion),
        }
    }
}

impl fmt::Display for IntegralClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.free.is_zero(), self.torsion.is_zero()) {
            (_, true) => write!(f, "{}", self.free),
            (true, false) => write!(f, "beta[{}]", self.torsion),
            (false, false) => write!(f, "{} + beta[{}]", self.free, self.torsion),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::char_alg::wpoly;

    fn v35() -> IntegralClass {
        IntegralClass::v_class(&[3, 5]).unwrap()
    }

    #[test]
    fn torsion_is_two_torsion() {
        assert_eq!(v35().scale(2), IntegralClass::zero());
        let a = &IntegralClass::p(2) + &v35();
        let doubled = &a + &a;
        assert!(doubled.torsion.is_zero());
        assert_eq!(doubled.free, IntPoly::p(2).scale(2));
    }

    #[test]
    fn square_of_sigma2_class() {
        let a = &IntegralClass::p(2) + &v35();
        let sq = &a * &a;
        assert_eq!(sq.free, IntPoly::p(2).pow(2));
        // The cross terms r(p2) v + r(p2) v cancel mod 2.
        assert_eq!(sq.torsion, wpoly(&[&[3, 3, 5, 5]]));
        assert!(sq.torsion_in_sq1_image());
        assert_eq!(sq.reduce_mod2(), &wpoly(&[&[4, 4]]) * &wpoly(&[&[4, 4]]) + wpoly(&[&[3, 3, 5, 5]]));
    }

    #[test]
    fn free_times_torsion() {
        let a = IntegralClass::p(1);
        let b = IntegralClass::v_class(&[1, 1]).unwrap();
        let prod = &a * &b;
        assert!(prod.free.is_zero());
        assert_eq!(prod.torsion, wpoly(&[&[1, 1, 2, 2]]));
    }

    #[test]
    fn v_class_membership() {
        assert_eq!(v35().torsion, wpoly(&[&[3, 5]]));
        assert_eq!(IntegralClass::v_class(&[1, 1]).unwrap().torsion, wpoly(&[&[1, 1]]));
        for k in [2u32, 4, 6] {
            assert!(matches!(
                IntegralClass::v_class(&[k, k + 2]),
                Err(Error::NotInSq1Image(_))
            ));
        }
        for k in [1u32, 3, 5, 7] {
            let v = IntegralClass::v_class(&[k, k + 2]).unwrap();
            assert_eq!(v.reduce_mod2(), wpoly(&[&[k, k + 1]]).sq1());
        }
    }

    #[test]
    fn reduction_and_rationalization() {
        let a = &IntegralClass::p(2) + &v35();
        assert_eq!(a.reduce_mod2(), wpoly(&[&[4, 4], &[3, 5]]));
        assert!(IntegralClass::zero().reduce_mod2().is_zero());
        assert_eq!(IntegralClass::p(1).pow(2).reduce_mod2(), wpoly(&[&[2, 2, 2, 2]]));
        assert_eq!(a.rationalize(), IntPoly::p(2));
        assert!(v35().rationalize().is_zero());
        assert_eq!((&a * &a).rationalize(), IntPoly::p(2).pow(2));
    }

    #[test]
    fn display_and_json() {
        let a = &IntegralClass::p(2).scale(3) + &v35();
        assert_eq!(a.to_string(), "3*p2 + beta[w3*w5]");
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"{"free":[[3,[["p2",1]]]],"torsion":[[["w3",1],["w5",1]]]}"#);
        let back: IntegralClass = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
    }
}
