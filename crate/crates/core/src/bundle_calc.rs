//! Virtual bundles and their total Stiefel-Whitney classes.
//!
//! Expressions track ranks explicitly: tensoring with a line bundle is not a
//! stable operation, so `l (x) E` depends on the rank of `E`, not only on its
//! stable class.

use std::fmt;

use crate::char_alg::{Generator, Gf2Poly, Monomial, NORMAL_FAMILY};
use crate::error::{Error, Result};

/// Bundle name whose classes are the unnamed `w_i`.
pub const NORMAL_BUNDLE: &str = "nu_f";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BundleExpr {
    /// Genuine bundle of the given rank: classes `w_1 .. w_rank` of its family.
    Named { name: String, rank: i64 },
    /// Stable class of the given virtual rank with all `w_i` independent.
    Stable { name: String, rank: i64 },
    Trivial(i64),
    Line(String),
    Sum(Box<BundleExpr>, Box<BundleExpr>),
    Diff(Box<BundleExpr>, Box<BundleExpr>),
    TensorLine(String, Box<BundleExpr>),
}

/// Generator family of a bundle name.
pub fn family_of(name: &str) -> &str {
    if name == NORMAL_BUNDLE {
        NORMAL_FAMILY
    } else {
        name
    }
}

impl BundleExpr {
    pub fn named(name: &str, rank: i64) -> Self {
        BundleExpr::Named {
            name: name.to_string(),
            rank,
        }
    }

    pub fn stable(name: &str, rank: i64) -> Self {
        BundleExpr::Stable {
            name: name.to_string(),
            rank,
        }
    }

    pub fn line(tag: &str) -> Self {
        BundleExpr::Line(tag.to_string())
    }

    pub fn sum(a: BundleExpr, b: BundleExpr) -> Self {
        BundleExpr::Sum(Box::new(a), Box::new(b))
    }

    pub fn diff(a: BundleExpr, b: BundleExpr) -> Self {
        BundleExpr::Diff(Box::new(a), Box::new(b))
    }

    pub fn tensor(tag: &str, e: BundleExpr) -> Self {
        BundleExpr::TensorLine(tag.to_string(), Box::new(e))
    }

    pub fn rank(&self) -> i64 {
        match self {
            BundleExpr::Named { rank, .. } | BundleExpr::Stable { rank, .. } => *rank,
            BundleExpr::Trivial(r) => *r,
            BundleExpr::Line(_) => 1,
            BundleExpr::Sum(a, b) => a.rank() + b.rank(),
            BundleExpr::Diff(a, b) => a.rank() - b.rank(),
            BundleExpr::TensorLine(_, e) => e.rank(),
        }
    }

    /// Parses the textual grammar `nu_f`, `TM`, `F`, `eps(r)`, `line(tag)`,
    /// `A + B`, `A - B`, `tensor(tag, A)` with parentheses. `nu_f` is the
    /// stable normal bundle of rank `k`, `TM` has rank `n` and `F` rank `n+k`.
    pub fn parse(src: &str, n: i64, k: i64) -> Result<BundleExpr> {
        let mut p = Parser {
            chars: src.chars().collect(),
            pos: 0,
            n,
            k,
        };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.chars.len() {
            return Err(Error::Parse(format!(
                "unexpected input at offset {} in {src:?}",
                p.pos
            )));
        }
        Ok(e)
    }
}

impl fmt::Display for BundleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BundleExpr::Named { name, .. } | BundleExpr::Stable { name, .. } => write!(f, "{name}"),
            BundleExpr::Trivial(r) => write!(f, "eps({r})"),
            BundleExpr::Line(t) => write!(f, "line({t})"),
            BundleExpr::Sum(a, b) => write!(f, "({a} + {b})"),
            BundleExpr::Diff(a, b) => write!(f, "({a} - {b})"),
            BundleExpr::TensorLine(t, e) => write!(f, "tensor({t}, {e})"),
        }
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    n: i64,
    k: i64,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!("expected {c:?} at offset {}", self.pos)))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len()
            && (self.chars[self.pos].is_alphanumeric() || self.chars[self.pos] == '_')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Parse(format!("expected identifier at offset {start}")));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn expr(&mut self) -> Result<BundleExpr> {
        let mut lhs = self.atom()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    lhs = BundleExpr::sum(lhs, self.atom()?);
                }
                Some('-') => {
                    self.pos += 1;
                    lhs = BundleExpr::diff(lhs, self.atom()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn atom(&mut self) -> Result<BundleExpr> {
        if self.peek() == Some('(') {
            self.pos += 1;
            let e = self.expr()?;
            self.expect(')')?;
            return Ok(e);
        }
        let id = self.ident()?;
        match id.as_str() {
            NORMAL_BUNDLE => Ok(BundleExpr::stable(NORMAL_BUNDLE, self.k)),
            "TM" => Ok(BundleExpr::named("TM", self.n)),
            "F" => Ok(BundleExpr::named("F", self.n + self.k)),
            "eps" => {
                self.expect('(')?;
                let r = self.ident()?;
                self.expect(')')?;
                let r: i64 = r
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad rank {r:?}")))?;
                Ok(BundleExpr::Trivial(r))
            }
            "line" => {
                self.expect('(')?;
                let tag = self.ident()?;
                self.expect(')')?;
                Ok(BundleExpr::line(&tag))
            }
            "tensor" => {
                self.expect('(')?;
                let tag = self.ident()?;
                self.expect(',')?;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(BundleExpr::tensor(&tag, e))
            }
            other => Err(Error::Parse(format!("unknown bundle {other:?}"))),
        }
    }
}

/// `C(n, k) mod 2` for any integer `n`, using `C(-m, k) = (-1)^k C(m+k-1, k)`
/// and Lucas' theorem.
pub fn binom_mod2(n: i64, k: u32) -> bool {
    let k = k as i64;
    let top = if n >= 0 { n } else { k - n - 1 };
    k <= top && (k & !top) == 0
}

/// Total class of `l (x) E` for a bundle `E` of (possibly virtual) rank `rank`
/// with total class `total`, where `line` is `w_1(l)`:
/// `w_j(l (x) E) = sum_i C(rank - i, j - i) line^(j-i) w_i(E)`.
pub fn tensor_line(line: &Gf2Poly, rank: i64, total: &Gf2Poly, d: u32) -> Gf2Poly {
    let parts: Vec<Gf2Poly> = (0..=d).map(|i| total.homogeneous_part(i)).collect();
    let powers: Vec<Gf2Poly> = {
        let mut v = vec![Gf2Poly::one()];
        for _ in 0..d {
            let next = v.last().unwrap() * line;
            v.push(next);
        }
        v
    };
    let mut out = Gf2Poly::zero().with_bound(d);
    for j in 0..=d {
        for (i, part) in parts.iter().enumerate().take(j as usize + 1) {
            if part.is_zero() {
                continue;
            }
            let i = i as u32;
            if binom_mod2(rank - i as i64, j - i) {
                out += &(&powers[(j - i) as usize] * part);
            }
        }
    }
    out
}

/// Rank and total Stiefel-Whitney class, truncated above degree `d`.
pub fn total_sw(e: &BundleExpr, d: u32) -> Result<(i64, Gf2Poly)> {
    eval(e, &Gf2Poly::zero(), d)
}

fn genuine_total(family: &str, top: i64, d: u32) -> Gf2Poly {
    let mut out = Gf2Poly::one().with_bound(d);
    for i in 1..=top.min(d as i64) {
        out += &Gf2Poly::w_of(family, i);
    }
    out
}

fn eval(e: &BundleExpr, twist: &Gf2Poly, d: u32) -> Result<(i64, Gf2Poly)> {
    let untwisted = |rank: i64, total: Gf2Poly| -> (i64, Gf2Poly) {
        if twist.is_zero() {
            (rank, total)
        } else {
            (rank, tensor_line(twist, rank, &total, d))
        }
    };
    Ok(match e {
        BundleExpr::Named { name, rank } => {
            if *rank < 0 {
                return Err(Error::NegativeRank(*rank));
            }
            untwisted(*rank, genuine_total(family_of(name), *rank, d))
        }
        BundleExpr::Stable { name, rank } => untwisted(*rank, genuine_total(family_of(name), d as i64, d)),
        BundleExpr::Trivial(r) => {
            if *r < 0 {
                return Err(Error::NegativeRank(*r));
            }
            let factor = (&Gf2Poly::one() + twist).with_bound(d);
            (*r, factor.pow(*r as u32))
        }
        BundleExpr::Line(tag) => {
            let total = &(&Gf2Poly::one() + &Gf2Poly::line(tag)) + twist;
            (1, total.with_bound(d))
        }
        BundleExpr::Sum(a, b) => {
            let (ra, ta) = eval(a, twist, d)?;
            let (rb, tb) = eval(b, twist, d)?;
            (ra + rb, &ta * &tb)
        }
        BundleExpr::Diff(a, b) => {
            let (ra, ta) = eval(a, twist, d)?;
            let (rb, tb) = eval(b, twist, d)?;
            if ra - rb < 0 {
                return Err(Error::NegativeRank(ra - rb));
            }
            (ra - rb, &ta * &tb.inverse_total(d)?)
        }
        BundleExpr::TensorLine(tag, inner) => {
            let twist = twist + &Gf2Poly::line(tag);
            eval(inner, &twist, d)?
        }
    })
}

/// Relations imposed on the normal-bundle classes `w_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Regime {
    None,
    /// `w_m = 0` for `m > k+1`.
    Prim { k: u32 },
    /// `w_m = t w_(m-1)` for `m >= k+2`, oriented to remove high `w_m`.
    TwistedPrim { k: u32, line: String },
    /// The same relation oriented the other way: `t w_(k+1) -> w_(k+2)`.
    /// Normal forms contain no monomial divisible by `t w_(k+1)`.
    MorinNu1 { k: u32, line: String },
}

impl Regime {
    pub fn rules(&self) -> Vec<String> {
        match self {
            Regime::None => vec![],
            Regime::Prim { k } => vec![format!("w_m -> 0 for m > {}", k + 1)],
            Regime::TwistedPrim { k, line } => {
                vec![format!("w_m -> t:{line} * w_(m-1) for m >= {}", k + 2)]
            }
            Regime::MorinNu1 { k, line } => {
                vec![format!("t:{line} * w{} -> w{}", k + 1, k + 2)]
            }
        }
    }
}

/// Normal form of `a` under the regime's rewriting rules.
pub fn apply_regime(a: &Gf2Poly, regime: &Regime) -> Gf2Poly {
    match regime {
        Regime::None => a.clone(),
        Regime::Prim { k } => a.map_linear(|m| {
            let killed = m.factors().iter().any(|(g, _)| match g {
                Generator::W { family, index } => family.is_empty() && *index > k + 1,
                Generator::Line(_) => false,
            });
            if killed {
                Gf2Poly::zero()
            } else {
                Gf2Poly::from_monomial(m.clone())
            }
        }),
        Regime::TwistedPrim { k, line } => a.map_linear(|m| {
            let t = Generator::line(line);
            let factors = m.factors().iter().flat_map(|(g, e)| match g {
                Generator::W { family, index } if family.is_empty() && *index >= k + 2 => {
                    vec![(Generator::w(k + 1), *e), (t.clone(), (index - k - 1) * e)]
                }
                _ => vec![(g.clone(), *e)],
            });
            Gf2Poly::from_monomial(Monomial::from_factors(factors.collect::<Vec<_>>()))
        }),
        Regime::MorinNu1 { k, line } => a.map_linear(|m| {
            let t = Generator::line(line);
            let w = Generator::w(k + 1);
            let c = m.exponent(&t).min(m.exponent(&w));
            if c == 0 {
                return Gf2Poly::from_monomial(m.clone());
            }
            let reduced = m
                .divide(&t, c)
                .and_then(|r| r.divide(&w, c))
                .expect("exponents checked");
            Gf2Poly::from_monomial(
                reduced.mul(&Monomial::from_factors([(Generator::w(k + 2), c)])),
            )
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::char_alg::wpoly;

    fn t() -> Gf2Poly {
        Gf2Poly::line("ell")
    }

    #[test]
    fn binomials_mod2() {
        assert!(binom_mod2(5, 1));
        assert!(!binom_mod2(4, 1));
        assert!(binom_mod2(4, 4));
        assert!(!binom_mod2(3, 4));
        assert!(binom_mod2(6, 2));
        assert!(!binom_mod2(5, 2));
        for j in 0..8 {
            assert!(binom_mod2(-1, j), "C(-1,{j}) is odd");
        }
        // C(-2, j) = (-1)^j (j+1)
        for j in 0..8u32 {
            assert_eq!(binom_mod2(-2, j), (j + 1) % 2 == 1);
        }
    }

    #[test]
    fn trivial_summand_does_not_change_total() {
        let d = 10;
        let k = 3;
        let nu = BundleExpr::named(NORMAL_BUNDLE, k + 1);
        let (r1, t1) = total_sw(&nu, d).unwrap();
        let (r2, t2) = total_sw(&BundleExpr::sum(nu, BundleExpr::Trivial(1)), d).unwrap();
        assert_eq!((r1 + 1, t1), (r2, t2));
    }

    #[test]
    fn normal_class_of_difference() {
        let (n, k, r) = (3i64, 2i64, 1u32);
        let d = (k as u32) + r + 1;
        let f = BundleExpr::named("F", n + k);
        let tm = BundleExpr::named("TM", n);
        let (rank, total) = total_sw(&BundleExpr::diff(f.clone(), tm.clone()), d).unwrap();
        assert_eq!(rank, k);
        let (_, tf) = total_sw(&f, d).unwrap();
        let (_, ttm) = total_sw(&tm, d).unwrap();
        let expected = (&tf * &ttm.inverse_total(d).unwrap()).homogeneous_part(d);
        assert_eq!(total.homogeneous_part(d), expected);
    }

    #[test]
    fn double_twist_of_summand() {
        let k = 3;
        let d = 10;
        let nu = BundleExpr::named(NORMAL_BUNDLE, k + 1);
        let expr = BundleExpr::tensor(
            "ell",
            BundleExpr::sum(BundleExpr::tensor("ell", nu.clone()), BundleExpr::Trivial(1)),
        );
        let (rank, total) = total_sw(&expr, d).unwrap();
        let (_, plain) = total_sw(&nu, d).unwrap();
        assert_eq!(rank, k + 2);
        assert_eq!(total, (&plain * &(&Gf2Poly::one() + &t())).truncate(d));
    }

    #[test]
    fn negative_rank_rejected() {
        let e = BundleExpr::diff(BundleExpr::named("TM", 2), BundleExpr::named("F", 3));
        assert_eq!(total_sw(&e, 4), Err(Error::NegativeRank(-1)));
    }

    #[test]
    fn top_class_of_twisted_bundle() {
        let m = 4;
        let d = 8;
        let (_, total) = total_sw(&BundleExpr::named("E", m), d).unwrap();
        let twisted = tensor_line(&t(), m, &total, d);
        let mut expected = Gf2Poly::zero();
        for i in 0..=m {
            expected += &(&t().pow((m - i) as u32) * &Gf2Poly::w_of("E", i));
        }
        assert_eq!(twisted.homogeneous_part(m as u32), expected);
        assert!(twisted.max_degree().unwrap() <= m as u32);
    }

    #[test]
    fn twisting_by_zero_is_identity() {
        let d = 9;
        let (_, total) = total_sw(&BundleExpr::stable(NORMAL_BUNDLE, 3), d).unwrap();
        assert_eq!(tensor_line(&Gf2Poly::zero(), 3, &total, d), total);
    }

    #[test]
    fn expansion_of_twisted_nu1() {
        // w_(k+1)(l (x) nu_1) for nu_1 = l (x) nu_f + eps^1 equals
        // w_(k+1)(nu_f) + t w_k(nu_f).
        for k in 1..6i64 {
            let d = (k + 2) as u32;
            let nu1 = BundleExpr::sum(
                BundleExpr::tensor("ell", BundleExpr::stable(NORMAL_BUNDLE, k)),
                BundleExpr::Trivial(1),
            );
            let (_, total) = total_sw(&BundleExpr::tensor("ell", nu1), d).unwrap();
            let expected = &Gf2Poly::w(k + 1) + &(&t() * &Gf2Poly::w(k));
            assert_eq!(total.homogeneous_part((k + 1) as u32), expected, "k = {k}");
        }
    }

    #[test]
    fn regimes() {
        let a = wpoly(&[&[4, 4], &[3, 5]]);
        assert_eq!(apply_regime(&a, &Regime::Prim { k: 3 }), wpoly(&[&[4, 4]]));
        let tw = Regime::TwistedPrim {
            k: 3,
            line: "ell".into(),
        };
        assert_eq!(apply_regime(&Gf2Poly::w(5), &tw), &t() * &Gf2Poly::w(4));
        assert_eq!(apply_regime(&Gf2Poly::w(6), &tw), &(&t() * &t()) * &Gf2Poly::w(4));
        assert_eq!(apply_regime(&a, &Regime::None), a);
        let mn = Regime::MorinNu1 {
            k: 3,
            line: "ell".into(),
        };
        let x = &(&t() * &t()) * &wpoly(&[&[4, 3]]);
        assert_eq!(apply_regime(&x, &mn), &t() * &wpoly(&[&[5, 3]]));
        for r in [Regime::Prim { k: 3 }, tw, mn] {
            let once = apply_regime(&(&a + &x), &r);
            assert_eq!(apply_regime(&once, &r), once);
        }
    }

    #[test]
    fn parse_grammar() {
        let e = BundleExpr::parse("tensor(ell, nu_f + eps(1)) - line(m)", 4, 2).unwrap();
        assert_eq!(e.rank(), 2);
        assert_eq!(e.to_string(), "(tensor(ell, (nu_f + eps(1))) - line(m))");
        assert_eq!(BundleExpr::parse("F - TM", 3, 2).unwrap().rank(), 2);
        assert!(BundleExpr::parse("G", 3, 2).is_err());
        assert!(BundleExpr::parse("TM +", 3, 2).is_err());
    }
}
