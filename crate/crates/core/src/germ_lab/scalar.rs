//! Scalar types the germ maps are evaluated over: exact rationals, `f64`
//! (finite-difference sanity mode) and second-order jets over the rationals.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `3`, `-2/3` (ASCII or Unicode minus).
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim().replace('\u{2212}', "-");
    let bad = || Error::Parse(format!("not a fraction: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn parse_q_list(s: &str) -> Result<Vec<Q>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_q).collect()
}

pub fn q_to_f64(x: &Q) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

/// Field operations needed to evaluate the germ maps.
pub trait Field:
    Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    fn constant(c: &Q) -> Self;

    fn int(n: i64) -> Self {
        Self::constant(&q(n))
    }
}

impl Field for Q {
    fn constant(c: &Q) -> Self {
        c.clone()
    }
}

impl Field for f64 {
    fn constant(c: &Q) -> Self {
        q_to_f64(c)
    }
}

/// Truncated second-order Taylor expansion in `dim` variables: value,
/// gradient and (symmetric, row-major) Hessian. Constants carry empty
/// derivative vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet2 {
    pub value: Q,
    pub grad: Vec<Q>,
    pub hess: Vec<Q>,
}

impl Jet2 {
    pub fn variable(value: Q, index: usize, dim: usize) -> Self {
        let mut grad = vec![Q::zero(); dim];
        grad[index] = Q::one();
        Jet2 {
            value,
            grad,
            hess: vec![Q::zero(); dim * dim],
        }
    }

    fn dim(&self) -> usize {
        self.grad.len()
    }

    pub fn hess_at(&self, i: usize, j: usize) -> Q {
        if self.hess.is_empty() {
            Q::zero()
        } else {
            self.hess[i * self.dim() + j].clone()
        }
    }

    pub fn grad_at(&self, i: usize) -> Q {
        self.grad.get(i).cloned().unwrap_or_else(Q::zero)
    }

    fn scaled(&self, c: &Q) -> Jet2 {
        Jet2 {
            value: &self.value * c,
            grad: self.grad.iter().map(|g| g * c).collect(),
            hess: self.hess.iter().map(|h| h * c).collect(),
        }
    }

    fn recip(&self) -> Jet2 {
        let v = self.value.recip();
        let v2 = &v * &v;
        let v3 = &v2 * &v;
        let n = self.dim();
        let grad = self.grad.iter().map(|g| -(g * &v2)).collect();
        let mut hess = vec![Q::zero(); n * n];
        if n > 0 {
            for i in 0..n {
                for j in 0..n {
                    let outer = &self.grad[i] * &self.grad[j] * q(2) * &v3;
                    hess[i * n + j] = outer - &self.hess[i * n + j] * &v2;
                }
            }
        }
        Jet2 { value: v, grad, hess }
    }
}

fn zip_with(a: &[Q], b: &[Q], f: impl Fn(&Q, &Q) -> Q) -> Vec<Q> {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => Vec::new(),
        (true, false) => b.iter().map(|y| f(&Q::zero(), y)).collect(),
        (false, true) => a.iter().map(|x| f(x, &Q::zero())).collect(),
        (false, false) => a.iter().zip(b).map(|(x, y)| f(x, y)).collect(),
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, rhs: Jet2) -> Jet2 {
        Jet2 {
            value: self.value + rhs.value,
            grad: zip_with(&self.grad, &rhs.grad, |x, y| x + y),
            hess: zip_with(&self.hess, &rhs.hess, |x, y| x + y),
        }
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: Jet2) -> Jet2 {
        self + (-rhs)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scaled(&q(-1))
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: Jet2) -> Jet2 {
        if self.grad.is_empty() {
            return rhs.scaled(&self.value);
        }
        if rhs.grad.is_empty() {
            return self.scaled(&rhs.value);
        }
        let n = self.dim();
        let grad = (0..n)
            .map(|i| &self.value * &rhs.grad[i] + &rhs.value * &self.grad[i])
            .collect();
        let mut hess = vec![Q::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let idx = i * n + j;
                hess[idx] = &self.value * &rhs.hess[idx]
                    + &rhs.value * &self.hess[idx]
                    + &self.grad[i] * &rhs.grad[j]
                    + &rhs.grad[i] * &self.grad[j];
            }
        }
        Jet2 {
            value: self.value * rhs.value,
            grad,
            hess,
        }
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    fn div(self, rhs: Jet2) -> Jet2 {
        if rhs.grad.is_empty() {
            return self.scaled(&rhs.value.recip());
        }
        self * rhs.recip()
    }
}

impl Field for Jet2 {
    fn constant(c: &Q) -> Self {
        Jet2 {
            value: c.clone(),
            grad: Vec::new(),
            hess: Vec::new(),
        }
    }
}

/// Renders a rational as `a` or `a/b`.
pub fn show_q(x: &Q) -> String {
    x.to_string()
}

pub fn is_negative(x: &Q) -> bool {
    x.is_negative()
}
