//! Sparse polynomials over GF(2) in graded generators.
//!
//! The generators are Stiefel-Whitney classes `w_i` of named bundle families
//! (degree `i`) and classes `t` of line bundles (degree 1). A coefficient in
//! GF(2) is either present or absent, so a polynomial is a set of monomials.
//! The empty family name denotes the stable normal bundle of the map under
//! study; its classes print as plain `w3`.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, AddAssign, Mul};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Family name of the stable normal bundle; its classes print as `w_i`.
pub const NORMAL_FAMILY: &str = "";

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    /// `w_index` of the bundle family `family`.
    W { family: String, index: u32 },
    /// First Stiefel-Whitney class of the line bundle `tag`.
    Line(String),
}

impl Generator {
    pub fn w(index: u32) -> Self {
        Self::w_of(NORMAL_FAMILY, index)
    }

    pub fn w_of(family: &str, index: u32) -> Self {
        assert!(index >= 1, "w_0 is the unit, not a generator");
        Generator::W {
            family: family.to_string(),
            index,
        }
    }

    pub fn line(tag: &str) -> Self {
        Generator::Line(tag.to_string())
    }

    pub fn degree(&self) -> u32 {
        match self {
            Generator::W { index, .. } => *index,
            Generator::Line(_) => 1,
        }
    }

    /// Canonical name: `w3`, `w3(TM)` or `t:ell`.
    pub fn name(&self) -> String {
        self.to_string()
    }

    pub fn parse(name: &str) -> Result<Self> {
        if let Some(tag) = name.strip_prefix("t:") {
            if tag.is_empty() {
                return Err(Error::Parse(format!("empty line tag in {name:?}")));
            }
            return Ok(Generator::line(tag));
        }
        let rest = name
            .strip_prefix('w')
            .ok_or_else(|| Error::Parse(format!("unknown generator {name:?}")))?;
        let (digits, family) = match rest.find('(') {
            Some(open) => {
                let fam = rest[open + 1..]
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Parse(format!("unbalanced family in {name:?}")))?;
                (&rest[..open], fam)
            }
            None => (rest, NORMAL_FAMILY),
        };
        let index: u32 = digits
            .parse()
            .map_err(|_| Error::Parse(format!("bad index in {name:?}")))?;
        if index == 0 {
            return Err(Error::Parse(format!("w0 is not a generator ({name:?})")));
        }
        Ok(Generator::w_of(family, index))
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::W { family, index } if family.is_empty() => write!(f, "w{index}"),
            Generator::W { family, index } => write!(f, "w{index}({family})"),
            Generator::Line(tag) => write!(f, "t:{tag}"),
        }
    }
}

/// A product of generators with positive exponents, kept sorted.
///
/// Ordering is graded-lexicographic: total degree first, then the sorted
/// factor list.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    degree: u32,
    factors: Vec<(Generator, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn from_factors<I: IntoIterator<Item = (Generator, u32)>>(factors: I) -> Self {
        let mut v: Vec<(Generator, u32)> = factors.into_iter().filter(|(_, e)| *e > 0).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(Generator, u32)> = Vec::with_capacity(v.len());
        for (g, e) in v {
            match merged.last_mut() {
                Some((last, le)) if *last == g => *le += e,
                _ => merged.push((g, e)),
            }
        }
        let degree = merged.iter().map(|(g, e)| g.degree() * e).sum();
        Monomial {
            degree,
            factors: merged,
        }
    }

    pub fn generator(g: Generator) -> Self {
        Self::from_factors([(g, 1)])
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn factors(&self) -> &[(Generator, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn exponent(&self, g: &Generator) -> u32 {
        self.factors
            .binary_search_by(|(h, _)| h.cmp(g))
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            let (a, b) = (&self.factors[i], &other.factors[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Less => {
                    out.push(a.clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b.clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a.0.clone(), a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.factors[i..]);
        out.extend_from_slice(&other.factors[j..]);
        Monomial {
            degree: self.degree + other.degree,
            factors: out,
        }
    }

    /// Lowers the exponent of `g` by `by`; `None` if the exponent is too small.
    pub fn divide(&self, g: &Generator, by: u32) -> Option<Monomial> {
        let pos = self.factors.binary_search_by(|(h, _)| h.cmp(g)).ok()?;
        let e = self.factors[pos].1;
        if e < by {
            return None;
        }
        let mut factors = self.factors.clone();
        if e == by {
            factors.remove(pos);
        } else {
            factors[pos].1 -= by;
        }
        Some(Monomial {
            degree: self.degree - g.degree() * by,
            factors,
        })
    }

    /// Drops every power of `g`, returning the remaining monomial and the exponent.
    pub fn split_off(&self, g: &Generator) -> (Monomial, u32) {
        let e = self.exponent(g);
        if e == 0 {
            (self.clone(), 0)
        } else {
            (self.divide(g, e).expect("exponent present"), e)
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, (g, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Polynomial over GF(2), optionally truncated above a degree bound.
#[derive(Clone, Debug, Default)]
pub struct Gf2Poly {
    terms: BTreeSet<Monomial>,
    bound: Option<u32>,
}

impl PartialEq for Gf2Poly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for Gf2Poly {}

impl std::hash::Hash for Gf2Poly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

fn min_bound(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl Gf2Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_monomial(Monomial::one())
    }

    pub fn from_monomial(m: Monomial) -> Self {
        let mut terms = BTreeSet::new();
        terms.insert(m);
        Gf2Poly { terms, bound: None }
    }

    /// Sums the monomials over GF(2): repeated monomials cancel in pairs.
    pub fn from_monomials<I: IntoIterator<Item = Monomial>>(ms: I) -> Self {
        let mut p = Gf2Poly::zero();
        for m in ms {
            p.toggle(m);
        }
        p
    }

    pub fn generator(g: Generator) -> Self {
        Self::from_monomial(Monomial::generator(g))
    }

    /// `w_i` of the normal family with `w_0 = 1` and `w_i = 0` for `i < 0`.
    pub fn w(i: i64) -> Self {
        Self::w_of(NORMAL_FAMILY, i)
    }

    pub fn w_of(family: &str, i: i64) -> Self {
        match i {
            i if i < 0 => Self::zero(),
            0 => Self::one(),
            i => Self::generator(Generator::w_of(family, i as u32)),
        }
    }

    pub fn line(tag: &str) -> Self {
        Self::generator(Generator::line(tag))
    }

    pub fn with_bound(mut self, d: u32) -> Self {
        self.bound = Some(min_bound(self.bound, Some(d)).unwrap());
        self.terms.retain(|m| m.degree() <= d);
        self
    }

    pub fn bound(&self) -> Option<u32> {
        self.bound
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().next().unwrap().is_one()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in graded-lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.contains(m)
    }

    fn toggle(&mut self, m: Monomial) {
        if let Some(d) = self.bound {
            if m.degree() > d {
                return;
            }
        }
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.iter().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.iter().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn truncate(&self, d: u32) -> Gf2Poly {
        self.clone().with_bound(d)
    }

    pub fn homogeneous_part(&self, d: u32) -> Gf2Poly {
        Gf2Poly {
            terms: self.terms.iter().filter(|m| m.degree() == d).cloned().collect(),
            bound: self.bound,
        }
    }

    /// Applies a GF(2)-linear map defined on monomials.
    pub fn map_linear<F: FnMut(&Monomial) -> Gf2Poly>(&self, mut f: F) -> Gf2Poly {
        let mut out = Gf2Poly {
            terms: BTreeSet::new(),
            bound: self.bound,
        };
        for m in &self.terms {
            out += &f(m);
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Gf2Poly {
        let mut out = Gf2Poly {
            terms: BTreeSet::new(),
            bound: self.bound,
        };
        for a in &self.terms {
            out.toggle(a.mul(m));
        }
        out
    }

    pub fn pow(&self, e: u32) -> Gf2Poly {
        let mut acc = Gf2Poly {
            terms: Gf2Poly::one().terms,
            bound: self.bound,
        };
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// First Steenrod square.
    ///
    /// A derivation extended from `Sq1(w_i) = w_1 w_i + (i+1) w_(i+1)` and
    /// `Sq1(t) = t^2`. The result is truncated at the bound of `self`.
    pub fn sq1(&self) -> Gf2Poly {
        self.map_linear(sq1_monomial)
    }

    /// Some `b` of degree `d - 1` with `b.sq1() == self`, or `None` when
    /// `self` is not in the image of `Sq1`.
    ///
    /// Only monomials whose image can meet the target are considered: the
    /// linear system splits into independent blocks and the block reached
    /// from the target's terms is solved exactly.
    pub fn sq1_preimage(&self, d: u32) -> Option<Gf2Poly> {
        if self.is_zero() {
            return Some(Gf2Poly::zero());
        }
        if !self.terms.iter().all(|m| m.degree() == d) || d == 0 {
            return None;
        }
        let mut basis: BTreeSet<Monomial> = BTreeSet::new();
        let mut seen_rows: BTreeSet<Monomial> = self.terms.clone();
        let mut queue: Vec<Monomial> = self.terms.iter().cloned().collect();
        while let Some(row) = queue.pop() {
            for b in sq1_sources(&row) {
                if basis.insert(b.clone()) {
                    for t in sq1_monomial(&b).terms {
                        if seen_rows.insert(t.clone()) {
                            queue.push(t);
                        }
                    }
                }
            }
        }
        let basis: Vec<Monomial> = basis.into_iter().collect();
        let rows: Vec<Monomial> = seen_rows.into_iter().collect();
        let row_of = |m: &Monomial| rows.binary_search(m).expect("row present");
        let columns: Vec<BitRow> = basis
            .iter()
            .map(|m| BitRow::from_indices(rows.len(), sq1_monomial(m).terms.iter().map(row_of)))
            .collect();
        let target = BitRow::from_indices(rows.len(), self.terms.iter().map(row_of));
        let choice = solve_gf2(&columns, &target)?;
        Some(Gf2Poly::from_monomials(
            basis
                .into_iter()
                .zip(choice)
                .filter_map(|(m, on)| on.then_some(m)),
        ))
    }

    /// Inverse of a total class up to degree `d`, computed degree by degree
    /// from `b_j = sum_{i=1..j} a_i b_(j-i)`.
    pub fn inverse_total(&self, d: u32) -> Result<Gf2Poly> {
        if !self.homogeneous_part(0).is_one() {
            return Err(Error::NotUnitTotal);
        }
        let parts: Vec<Gf2Poly> = (0..=d).map(|i| self.homogeneous_part(i).with_bound(d)).collect();
        let mut inv: Vec<Gf2Poly> = vec![Gf2Poly::one().with_bound(d)];
        for j in 1..=d as usize {
            let mut bj = Gf2Poly::zero().with_bound(d);
            for i in 1..=j {
                if !parts[i].is_zero() && !inv[j - i].is_zero() {
                    bj += &(&parts[i] * &inv[j - i]);
                }
            }
            inv.push(bj);
        }
        let mut out = Gf2Poly::zero().with_bound(d);
        for p in &inv {
            out += p;
        }
        Ok(out)
    }

    /// Differing homogeneous parts of `self` and `other`, by degree.
    pub fn diff_by_degree(&self, other: &Gf2Poly) -> Vec<(u32, Gf2Poly, Gf2Poly)> {
        let diff = self + other;
        let mut degrees: Vec<u32> = diff.terms.iter().map(Monomial::degree).collect();
        degrees.dedup();
        degrees
            .into_iter()
            .map(|d| (d, self.homogeneous_part(d), other.homogeneous_part(d)))
            .collect()
    }
}

fn sq1_generator(g: &Generator) -> Gf2Poly {
    match g {
        Generator::Line(_) => Gf2Poly::from_monomial(Monomial::from_factors([(g.clone(), 2)])),
        Generator::W { family, index } => {
            let w1 = Generator::w_of(family, 1);
            let mut p = Gf2Poly::from_monomial(Monomial::from_factors([(w1, 1), (g.clone(), 1)]));
            if (index + 1) % 2 == 1 {
                p.toggle(Monomial::generator(Generator::w_of(family, index + 1)));
            }
            p
        }
    }
}

fn sq1_monomial(m: &Monomial) -> Gf2Poly {
    let mut out = Gf2Poly::zero();
    for (g, e) in m.factors() {
        // d(g^e) = e g^(e-1) Sq1(g); even exponents vanish over GF(2).
        if e % 2 == 1 {
            let rest = m.divide(g, 1).expect("factor present");
            for t in sq1_generator(g).terms() {
                out.toggle(rest.mul(t));
            }
        }
    }
    out
}

/// Monomials `b` whose `Sq1` may contain the term `m`: every term of
/// `Sq1(b)` multiplies `b` by `w_1`, raises some `w_(2j)` to `w_(2j+1)`, or
/// squares a line class.
fn sq1_sources(m: &Monomial) -> Vec<Monomial> {
    let mut out = Vec::new();
    for (g, e) in m.factors() {
        match g {
            Generator::W { family, index } => {
                if *index == 1 {
                    out.extend(m.divide(g, 1));
                } else if index % 2 == 1 {
                    if let Some(rest) = m.divide(g, 1) {
                        out.push(rest.mul(&Monomial::generator(Generator::w_of(family, index - 1))));
                    }
                }
            }
            Generator::Line(_) => {
                if *e >= 2 {
                    out.extend(m.divide(g, 1));
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct BitRow {
    words: Vec<u64>,
}

impl BitRow {
    fn new(len: usize) -> Self {
        BitRow {
            words: vec![0; len.div_ceil(64).max(1)],
        }
    }

    fn from_indices<I: IntoIterator<Item = usize>>(len: usize, idx: I) -> Self {
        let mut r = Self::new(len);
        for i in idx {
            r.flip(i);
        }
        r
    }

    fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    fn xor(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }
}

/// Solves `sum_j x_j columns[j] = target` over GF(2).
fn solve_gf2(columns: &[BitRow], target: &BitRow) -> Option<Vec<bool>> {
    let ncols = columns.len();
    let nrows = target.words.len() * 64;
    // Row-major augmented matrix: each row holds the column bits plus the rhs.
    let mut rows: Vec<BitRow> = (0..nrows)
        .map(|r| {
            let mut row = BitRow::new(ncols + 1);
            for (c, col) in columns.iter().enumerate() {
                if col.get(r) {
                    row.flip(c);
                }
            }
            if target.get(r) {
                row.flip(ncols);
            }
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..nrows).find(|&i| rows[i].get(c)) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row.get(c) {
                row.xor(&pivot);
            }
        }
        pivots.push(c);
        r += 1;
        if r == nrows {
            break;
        }
    }
    if rows[r..].iter().any(|row| row.get(ncols)) {
        return None;
    }
    let mut x = vec![false; ncols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = rows[i].get(ncols);
    }
    Some(x)
}

impl Add for &Gf2Poly {
    type Output = Gf2Poly;
    fn add(self, rhs: &Gf2Poly) -> Gf2Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Gf2Poly {
    type Output = Gf2Poly;
    fn add(mut self, rhs: Gf2Poly) -> Gf2Poly {
        self += &rhs;
        self
    }
}

impl AddAssign<&Gf2Poly> for Gf2Poly {
    fn add_assign(&mut self, rhs: &Gf2Poly) {
        self.bound = min_bound(self.bound, rhs.bound);
        if let Some(d) = self.bound {
            self.terms.retain(|m| m.degree() <= d);
        }
        for m in &rhs.terms {
            self.toggle(m.clone());
        }
    }
}

impl Mul for &Gf2Poly {
    type Output = Gf2Poly;
    fn mul(self, rhs: &Gf2Poly) -> Gf2Poly {
        let bound = min_bound(self.bound, rhs.bound);
        let mut out = Gf2Poly {
            terms: BTreeSet::new(),
            bound,
        };
        for a in &self.terms {
            for b in &rhs.terms {
                if let Some(d) = bound {
                    if a.degree() + b.degree() > d {
                        continue;
                    }
                }
                out.toggle(a.mul(b));
            }
        }
        out
    }
}

impl Mul for Gf2Poly {
    type Output = Gf2Poly;
    fn mul(self, rhs: Gf2Poly) -> Gf2Poly {
        &self * &rhs
    }
}

impl fmt::Display for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, m) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl Serialize for Gf2Poly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<Vec<(String, u32)>> = self
            .terms
            .iter()
            .map(|m| m.factors().iter().map(|(g, e)| (g.name(), *e)).collect())
            .collect();
        terms.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Gf2Poly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let terms: Vec<Vec<(String, u32)>> = Vec::deserialize(deserializer)?;
        let mut monomials = Vec::with_capacity(terms.len());
        for term in terms {
            let mut factors = Vec::with_capacity(term.len());
            for (name, e) in term {
                factors.push((Generator::parse(&name).map_err(D::Error::custom)?, e));
            }
            monomials.push(Monomial::from_factors(factors));
        }
        Ok(Gf2Poly::from_monomials(monomials))
    }
}

/// Builds a polynomial from products of normal-family indices, e.g.
/// `wpoly(&[&[4, 4], &[3, 5]])` is `w4^2 + w3 w5`.
pub fn wpoly(terms: &[&[u32]]) -> Gf2Poly {
    Gf2Poly::from_monomials(
        terms
            .iter()
            .map(|idx| Monomial::from_factors(idx.iter().map(|&i| (Generator::w(i), 1)))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> Gf2Poly {
        Gf2Poly::line("ell")
    }

    #[test]
    fn addition_cancels_over_gf2() {
        let a = wpoly(&[&[4, 4]]);
        let b = wpoly(&[&[4, 4], &[3, 5]]);
        assert_eq!(&a + &b, wpoly(&[&[3, 5]]));
        let c = wpoly(&[&[2], &[1, 1]]);
        assert_eq!(&c + &wpoly(&[&[2]]), wpoly(&[&[1, 1]]));
        assert_eq!(&c + &Gf2Poly::zero(), c);
    }

    #[test]
    fn squaring_kills_cross_terms() {
        let x = &Gf2Poly::w(4) + &(&Gf2Poly::w(3) * &t());
        let sq = &x * &x;
        let expected = &wpoly(&[&[4, 4]]) + &(&wpoly(&[&[3, 3]]) * &(&t() * &t()));
        assert_eq!(sq, expected);
        assert_eq!(&Gf2Poly::w(1) * &Gf2Poly::w(1), wpoly(&[&[1, 1]]));
        let det = &(&Gf2Poly::w(4) * &Gf2Poly::w(4)) + &(&Gf2Poly::w(5) * &Gf2Poly::w(3));
        assert_eq!(det, wpoly(&[&[4, 4], &[3, 5]]));
    }

    #[test]
    fn truncate_and_homogeneous_part() {
        let a = wpoly(&[&[1], &[1, 1], &[1, 1, 1]]);
        assert_eq!(a.truncate(2), wpoly(&[&[1], &[1, 1]]));
        let b = wpoly(&[&[2], &[1, 2], &[4]]);
        assert_eq!(b.homogeneous_part(3), wpoly(&[&[1, 2]]));
        assert!(Gf2Poly::zero().homogeneous_part(5).is_zero());
    }

    #[test]
    fn bounded_product_drops_high_terms() {
        let a = wpoly(&[&[1], &[2]]).with_bound(3);
        let p = &a * &a;
        assert_eq!(p, wpoly(&[&[1, 1]]));
    }

    #[test]
    fn sq1_examples() {
        assert_eq!(wpoly(&[&[3, 4]]).sq1(), wpoly(&[&[3, 5]]));
        assert_eq!(t().sq1(), &t() * &t());
        assert_eq!(Gf2Poly::w(2).sq1(), wpoly(&[&[1, 2], &[3]]));
        assert_eq!(Gf2Poly::w(1).sq1(), wpoly(&[&[1, 1]]));
        assert_eq!(Gf2Poly::w_of("TM", 2).sq1().to_string(), "w1(TM)*w2(TM) + w3(TM)");
    }

    #[test]
    fn sq1_preimage_examples() {
        let target = wpoly(&[&[3, 5]]);
        let b = target.sq1_preimage(8).expect("w3w5 is in the image");
        assert_eq!(b.sq1(), target);
        assert_eq!(Gf2Poly::zero().sq1_preimage(4), Some(Gf2Poly::zero()));
        assert_eq!(Gf2Poly::w(2).sq1_preimage(2), None);
        assert_eq!(Gf2Poly::one().sq1_preimage(0), None);
        // w1^2 = Sq1(w1), while w2 w4 has no preimage.
        assert_eq!(wpoly(&[&[2, 4]]).sq1_preimage(6), None);
        assert!(wpoly(&[&[1, 1]]).sq1_preimage(2).is_some());
    }

    #[test]
    fn inverse_total_examples() {
        let d = 6;
        let a = &Gf2Poly::one() + &Gf2Poly::w(1);
        let expected = Gf2Poly::from_monomials(
            (0..=d).map(|e| Monomial::from_factors([(Generator::w(1), e)])),
        );
        assert_eq!(a.inverse_total(d).unwrap(), expected);
        assert_eq!(Gf2Poly::one().inverse_total(4).unwrap(), Gf2Poly::one());
        let b = wpoly(&[&[], &[1], &[2]]);
        let inv = b.inverse_total(3).unwrap();
        // 1 + w1 + (w1^2 + w2) + w1^3
        assert_eq!(inv, wpoly(&[&[], &[1], &[1, 1], &[2], &[1, 1, 1]]));
        assert!((&b * &inv).truncate(3).is_one());
        assert_eq!(Gf2Poly::w(1).inverse_total(3), Err(Error::NotUnitTotal));
    }

    #[test]
    fn generator_names_round_trip() {
        for name in ["w3", "w12(TM)", "t:ell", "w1(F)"] {
            assert_eq!(Generator::parse(name).unwrap().name(), name);
        }
        assert!(Generator::parse("w0").is_err());
        assert!(Generator::parse("x3").is_err());
    }

    #[test]
    fn canonical_json() {
        let p = &wpoly(&[&[4, 4], &[3, 5]]) + &t();
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"[[["t:ell",1]],[["w3",1],["w5",1]],[["w4",2]]]"#);
        let back: Gf2Poly = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
        assert_eq!(serde_json::to_string(&Gf2Poly::one()).unwrap(), "[[]]");
        assert_eq!(serde_json::to_string(&Gf2Poly::zero()).unwrap(), "[]");
    }

    #[test]
    fn generator_order() {
        assert!(Generator::w(9) < Generator::line("a"));
        assert!(Generator::w(2) < Generator::w(3));
        assert!(Generator::line("a") < Generator::line("b"));
    }
}
