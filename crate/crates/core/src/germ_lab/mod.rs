//! Exact-rational laboratory for the corank-one normal form
//!
//! ```text
//! X_j = x_j (j <= 2k),  X_(2k+1) = y,  Y_i = z x_(2i-1) + z^2 x_(2i),
//! Z = z y + z^3,  S_i = s_i
//! ```
//!
//! from `R^n` to `R^(n+k)`, its perturbation `f~(p, t) = f(p) + t sigma(p)`
//! and the corank / transversality computations on both.
//!
//! Source coordinates are ordered `x_1..x_2k, y, z, s_1..`, with `t` appended
//! for `f~`. Target coordinates are ordered `X_1..X_(2k+1), Y_1..Y_k, Z, S_1..`.

pub mod linalg;
pub mod maps;
pub mod oracle;
pub mod scalar;
pub mod strata;

use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use scalar::{parse_q, parse_q_list, Q};

pub use linalg::QMatrix;
pub use maps::{
    fd_deviation, hessian_ad, jacobian_ad, jacobian_f, jacobian_fd, jacobian_tilde_f, normal_form_f,
    sigma_closed, tilde_f, GermMap,
};
pub use oracle::{random_sigma_point, sigma_oracle};
pub use strata::{
    corank, scan_sigma2, stratify_grid, transversality_check, JetReport, Sigma2Scan, StratificationReport,
    Transversality,
};

/// Dimensions of the normal form: source `R^n`, target `R^(n+k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Germ {
    pub n: usize,
    pub k: usize,
}

impl Germ {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidParameter(format!("k must be >= 1, got {k}")));
        }
        if n < 2 * k + 2 {
            return Err(Error::InvalidParameter(format!(
                "n must be >= 2k+2 = {}, got {n}",
                2 * k + 2
            )));
        }
        Ok(Germ { n, k })
    }

    /// Smallest source dimension for `k`.
    pub fn minimal(k: usize) -> Result<Self> {
        Germ::new(2 * k + 2, k)
    }

    pub fn target_dim(&self) -> usize {
        self.n + self.k
    }

    pub fn s_count(&self) -> usize {
        self.n - 2 * self.k - 2
    }

    /// Source index of `x_j`, `1 <= j <= 2k`.
    pub fn x(&self, j: usize) -> usize {
        j - 1
    }

    pub fn y(&self) -> usize {
        2 * self.k
    }

    pub fn z(&self) -> usize {
        2 * self.k + 1
    }

    pub fn s(&self, i: usize) -> usize {
        2 * self.k + 1 + i
    }

    pub fn t(&self) -> usize {
        self.n
    }

    pub fn big_x_last(&self) -> usize {
        2 * self.k
    }

    pub fn big_y(&self, i: usize) -> usize {
        2 * self.k + i
    }

    pub fn big_z(&self) -> usize {
        3 * self.k + 1
    }

    pub fn big_s(&self, i: usize) -> usize {
        3 * self.k + 1 + i
    }

    pub fn source_names(&self, with_t: bool) -> Vec<String> {
        let mut v: Vec<String> = (1..=2 * self.k).map(|j| format!("x{j}")).collect();
        v.push("y".into());
        v.push("z".into());
        v.extend((1..=self.s_count()).map(|i| format!("s{i}")));
        if with_t {
            v.push("t".into());
        }
        v
    }

    pub fn target_names(&self) -> Vec<String> {
        let mut v: Vec<String> = (1..=2 * self.k + 1).map(|j| format!("X{j}")).collect();
        v.extend((1..=self.k).map(|i| format!("Y{i}")));
        v.push("Z".into());
        v.extend((1..=self.s_count()).map(|i| format!("S{i}")));
        v
    }

    pub fn check_point(&self, p: &GermPoint) -> Result<()> {
        if p.x.len() != 2 * self.k {
            return Err(Error::Dimension {
                expected: 2 * self.k,
                got: p.x.len(),
            });
        }
        if p.s.len() != self.s_count() {
            return Err(Error::Dimension {
                expected: self.s_count(),
                got: p.s.len(),
            });
        }
        Ok(())
    }

    /// Is `p` on the singular set `x_(2i-1) = -2 z x_(2i)`, `y = -3 z^2`?
    pub fn on_sigma(&self, p: &GermPoint) -> bool {
        let z = &p.z;
        let two = Q::from_integer(2.into());
        let three = Q::from_integer(3.into());
        (1..=self.k).all(|i| p.x[2 * i - 2] == -(&two * z * &p.x[2 * i - 1])) && p.y == -(three * z * z)
    }

    /// The cusp locus `x = 0, y = 0, z = 0`.
    pub fn on_cusp_locus(&self, p: &GermPoint) -> bool {
        p.x.iter().all(Zero::is_zero) && p.y.is_zero() && p.z.is_zero()
    }
}

/// A source point, optionally with the perturbation parameter `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GermPoint {
    pub x: Vec<Q>,
    pub y: Q,
    pub z: Q,
    pub s: Vec<Q>,
    pub t: Option<Q>,
}

impl GermPoint {
    pub fn origin(g: &Germ) -> Self {
        GermPoint {
            x: vec![Q::zero(); 2 * g.k],
            y: Q::zero(),
            z: Q::zero(),
            s: vec![Q::zero(); g.s_count()],
            t: None,
        }
    }

    pub fn with_t(mut self, t: Q) -> Self {
        self.t = Some(t);
        self
    }

    /// From `n` source coordinates, or `n + 1` with `t` last.
    pub fn from_coords(g: &Germ, c: &[Q]) -> Result<Self> {
        if c.len() != g.n && c.len() != g.n + 1 {
            return Err(Error::Dimension {
                expected: g.n,
                got: c.len(),
            });
        }
        Ok(GermPoint {
            x: c[..2 * g.k].to_vec(),
            y: c[g.y()].clone(),
            z: c[g.z()].clone(),
            s: c[g.s(1)..g.n].to_vec(),
            t: c.get(g.n).cloned(),
        })
    }

    /// Parses a comma-separated list of fractions such as `-2,1,-3,1`.
    pub fn parse(g: &Germ, point: &str, t: Option<&str>) -> Result<Self> {
        let mut p = Self::from_coords(g, &parse_q_list(point)?)?;
        if let Some(t) = t {
            p.t = Some(parse_q(t)?);
        }
        Ok(p)
    }

    pub fn coords(&self) -> Vec<Q> {
        let mut v = self.x.clone();
        v.push(self.y.clone());
        v.push(self.z.clone());
        v.extend(self.s.iter().cloned());
        v
    }

    /// Source coordinates followed by `t` (zero when absent).
    pub fn coords_with_t(&self) -> Vec<Q> {
        let mut v = self.coords();
        v.push(self.t.clone().unwrap_or_else(Q::zero));
        v
    }
}

impl fmt::Display for GermPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords().iter().map(|x| x.to_string()).collect();
        write!(f, "({})", c.join(", "))?;
        if let Some(t) = &self.t {
            write!(f, " t={t}")?;
        }
        Ok(())
    }
}

pub fn show_vec(v: &[Q]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}
