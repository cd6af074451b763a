//! Pushforwards along the projectivized tangent bundle `q: PTM -> M` and
//! along the inclusion of the singular set.
//!
//! `a` denotes `w_1` of the tautological line bundle over `PTM`. The
//! pushforward `q_!` sends `a^m` to the normal class `wbar_(m-n+1)(TM)`; it
//! is applied as a monomial rule, without imposing the ring relation of the
//! projective bundle. Classes of `TM` and of `F` (standing for the pulled-back
//! target tangent bundle) are kept as independent generators, so every
//! verified identity holds in `H*(BO x BO; Z_2)`.

use std::fmt;

use crate::bundle_calc::{tensor_line, total_sw, BundleExpr};
use crate::char_alg::{Generator, Gf2Poly, Monomial};
use crate::conventions::Conventions;
use crate::error::{Error, Result};
use crate::report::Report;

pub const TAUTOLOGICAL: &str = "a";
pub const TANGENT: &str = "TM";
pub const TARGET: &str = "F";

/// Polynomial in the tautological class `a` with base coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PtmClass {
    pub n: u32,
    pub k: u32,
    /// `coeffs[m]` multiplies `a^m`.
    pub coeffs: Vec<Gf2Poly>,
}

impl PtmClass {
    pub fn a_power(n: u32, k: u32, m: usize) -> Self {
        let mut coeffs = vec![Gf2Poly::zero(); m + 1];
        coeffs[m] = Gf2Poly::one();
        PtmClass { n, k, coeffs }
    }

    pub fn mul(&self, other: &PtmClass) -> PtmClass {
        let len = self.coeffs.len() + other.coeffs.len() - 1;
        let mut coeffs = vec![Gf2Poly::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += &(a * b);
            }
        }
        PtmClass {
            n: self.n,
            k: self.k,
            coeffs,
        }
    }

    /// Flattens to a polynomial with `a` as a line generator.
    pub fn to_poly(&self) -> Gf2Poly {
        let a = Gf2Poly::line(TAUTOLOGICAL);
        let mut out = Gf2Poly::zero();
        for (m, c) in self.coeffs.iter().enumerate() {
            out += &(&a.pow(m as u32) * c);
        }
        out
    }

    /// Splits a polynomial by powers of `a`.
    pub fn from_poly(n: u32, k: u32, p: &Gf2Poly) -> Self {
        let a = Generator::line(TAUTOLOGICAL);
        let mut coeffs: Vec<Gf2Poly> = Vec::new();
        for m in p.terms() {
            let (rest, e) = m.split_off(&a);
            let e = e as usize;
            if coeffs.len() <= e {
                coeffs.resize(e + 1, Gf2Poly::zero());
            }
            coeffs[e] += &Gf2Poly::from_monomial(rest);
        }
        PtmClass { n, k, coeffs }
    }
}

impl fmt::Display for PtmClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

/// Normal classes `wbar(TM)` up to degree `d`.
pub fn normal_classes(n: u32, d: u32) -> Gf2Poly {
    let (_, total) = total_sw(&BundleExpr::named(TANGENT, n as i64), d).expect("rank is positive");
    total.inverse_total(d).expect("total class has unit constant term")
}

/// `q_!`: `a^m -> wbar_(m-n+1)(TM)`, linear over base classes.
pub fn q_push(c: &PtmClass, d: u32) -> Gf2Poly {
    let wbar = normal_classes(c.n, d);
    let mut out = Gf2Poly::zero();
    for (m, coeff) in c.coeffs.iter().enumerate() {
        let idx = m as i64 - c.n as i64 + 1;
        if idx < 0 || coeff.is_zero() {
            continue;
        }
        out += &(coeff * &wbar.homogeneous_part(idx as u32));
    }
    out.truncate(d)
}

/// Top Stiefel-Whitney class of `gamma (x) q^*F` for the tautological line
/// `gamma` and `F` of rank `n+k`: `sum_i a^i w_(n+k-i)(F)`.
pub fn zero_locus_class(n: u32, k: u32, conv: &Conventions) -> PtmClass {
    let rank = n + k;
    let mut total = conv.w_of(TARGET, 0);
    for i in 1..=rank {
        total += &Gf2Poly::w_of(TARGET, i as i64);
    }
    let twisted = tensor_line(&Gf2Poly::line(TAUTOLOGICAL), rank as i64, &total, rank);
    PtmClass::from_poly(n, k, &twisted.homogeneous_part(rank))
}

/// Checks `q_!(a^r w_(n+k)(gamma (x) q^*F)) = w_(k+r+1)(F - TM)`.
pub fn verify_lemma_nu1(n: u32, k: u32, r: u32, d: u32, conv: &Conventions) -> Result<Report> {
    if n < 1 {
        return Err(Error::InvalidParameter(format!("n must be >= 1, got {n}")));
    }
    let top = k + r + 1;
    if d < top {
        return Err(Error::InvalidParameter(format!(
            "max degree {d} is below k+r+1 = {top}"
        )));
    }
    let mut report = Report::new("verify lemma-pushforward")
        .param("n", n)
        .param("k", k)
        .param("r", r)
        .param("max_deg", d);

    let section = zero_locus_class(n, k, conv);
    let integrand = PtmClass::a_power(n, k, r as usize).mul(&section);
    let pushed = q_push(&integrand, d);

    let virtual_normal = BundleExpr::diff(
        BundleExpr::named(TARGET, (n + k) as i64),
        BundleExpr::named(TANGENT, n as i64),
    );
    let (_, total) = total_sw(&virtual_normal, d)?;
    let w_top = total.homogeneous_part(top);

    // sum_i wbar_i(TM) w_(top-i)(F), written out term by term.
    let wbar = normal_classes(n, d);
    let mut explicit = Gf2Poly::zero();
    for i in 0..=top {
        let f_class = if top - i > n + k {
            Gf2Poly::zero()
        } else {
            Gf2Poly::w_of(TARGET, (top - i) as i64)
        };
        explicit += &(&wbar.homogeneous_part(i) * &f_class);
    }

    report.check_poly_eq("pushforward equals w_(k+r+1)(nu_f)", &pushed, &w_top);
    report.check_poly_eq("w_(k+r+1)(nu_f) equals sum wbar_i(TM) w_(k+r+1-i)(F)", &w_top, &explicit);
    report.artifact("pushforward", &pushed);
    report.artifact("terms", pushed.len());
    Ok(report)
}

/// Pushforward along the singular-set inclusion: `t^m X -> w_(k+m+1) X`
/// for `X` free of the line class `t`.
pub fn i_push(x: &Gf2Poly, k: u32, line: &str) -> Gf2Poly {
    let t = Generator::line(line);
    x.map_linear(|m| {
        let (rest, e) = m.split_off(&t);
        Gf2Poly::from_monomial(rest.mul(&Monomial::generator(Generator::w(k + e + 1))))
    })
}
