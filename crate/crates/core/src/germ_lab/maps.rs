//! The cusp normal form `f`, the section `sigma`, the de-suspension
//! `f~(p, t) = f(p) + t sigma(p)`, and their derivatives.
//!
//! Maps are written once over [`Field`], so the same code evaluates exactly,
//! in floating point, and on second-order jets.

use num_traits::{One, Zero};

use super::linalg::QMatrix;
use super::scalar::{q, q_to_f64, Field, Jet2, Q};
use super::{Germ, GermPoint};
use crate::conventions::Conventions;
use crate::error::{Error, Result};

/// One of the closed-form germ maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GermMap {
    NormalForm,
    Sigma,
    TildeF,
}

impl GermMap {
    pub fn input_dim(self, g: &Germ) -> usize {
        match self {
            GermMap::NormalForm | GermMap::Sigma => g.n,
            GermMap::TildeF => g.n + 1,
        }
    }

    pub fn eval<T: Field>(self, g: &Germ, v: &[T]) -> Vec<T> {
        match self {
            GermMap::NormalForm => f_generic(g, v),
            GermMap::Sigma => sigma_generic(g, v),
            GermMap::TildeF => tilde_generic(g, v),
        }
    }
}

fn f_generic<T: Field>(g: &Germ, v: &[T]) -> Vec<T> {
    let k = g.k;
    let y = v[g.y()].clone();
    let z = v[g.z()].clone();
    let z2 = z.clone() * z.clone();
    let mut out: Vec<T> = Vec::with_capacity(g.target_dim());
    out.extend(v[..2 * k].iter().cloned());
    out.push(y.clone());
    for i in 1..=k {
        let a = v[g.x(2 * i - 1)].clone();
        let b = v[g.x(2 * i)].clone();
        out.push(z.clone() * a + z2.clone() * b);
    }
    out.push(z.clone() * y + z2 * z);
    out.extend(v[g.s(1)..g.n].iter().cloned());
    out
}

fn sigma_generic<T: Field>(g: &Germ, v: &[T]) -> Vec<T> {
    let k = g.k;
    let z = v[g.z()].clone();
    let z2 = z.clone() * z.clone();
    let d2 = T::int(1) + z2.clone();
    let d4 = d2.clone() + z2.clone() * z2.clone();
    let mut out: Vec<T> = Vec::with_capacity(g.target_dim());
    for i in 1..=k {
        let b = v[g.x(2 * i)].clone();
        out.push(T::int(-2) * z.clone() * b.clone() / d4.clone());
        out.push(T::int(-2) * z2.clone() * b / d4.clone());
    }
    out.push(T::int(-6) * z2.clone() / d2.clone());
    for i in 1..=k {
        out.push(T::int(2) * v[g.x(2 * i)].clone() / d4.clone());
    }
    out.push(T::int(6) * z / d2);
    for _ in g.s(1)..g.n {
        out.push(T::int(0));
    }
    out
}

fn tilde_generic<T: Field>(g: &Germ, v: &[T]) -> Vec<T> {
    let t = v[g.n].clone();
    f_generic(g, v)
        .into_iter()
        .zip(sigma_generic(g, v))
        .map(|(a, b)| a + t.clone() * b)
        .collect()
}

pub fn normal_form_f(g: &Germ, p: &GermPoint) -> Result<Vec<Q>> {
    g.check_point(p)?;
    Ok(f_generic(g, &p.coords()))
}

pub fn sigma_closed(g: &Germ, p: &GermPoint) -> Result<Vec<Q>> {
    g.check_point(p)?;
    Ok(sigma_generic(g, &p.coords()))
}

pub fn tilde_f(g: &Germ, p: &GermPoint) -> Result<Vec<Q>> {
    g.check_point(p)?;
    if p.t.is_none() {
        return Err(Error::Precondition("tilde_f needs a t coordinate".into()));
    }
    Ok(tilde_generic(g, &p.coords_with_t()))
}

/// Closed-form `df` of the unperturbed normal form, `(n+k) x n`.
pub fn jacobian_f(g: &Germ, p: &GermPoint) -> QMatrix {
    let c = p.coords();
    let z = &c[g.z()];
    let y = &c[g.y()];
    let mut m = QMatrix::zeros(g.target_dim(), g.n);
    for j in 0..=2 * g.k {
        m.set(j, j, Q::one());
    }
    for i in 1..=g.k {
        let row = g.big_y(i);
        let a = &c[g.x(2 * i - 1)];
        let b = &c[g.x(2 * i)];
        m.set(row, g.x(2 * i - 1), z.clone());
        m.set(row, g.x(2 * i), z * z);
        m.set(row, g.z(), a + q(2) * z * b);
    }
    m.set(g.big_z(), g.y(), z.clone());
    m.set(g.big_z(), g.z(), y + q(3) * z * z);
    for i in 1..=g.s_count() {
        m.set(g.big_s(i), g.s(i), Q::one());
    }
    m
}

/// Closed-form `df~`, hand-differentiated, `(n+k) x (n+1)`. The last column
/// is `d/dt`; `conv.jacobian_t_column = false` drops it.
pub fn jacobian_tilde_f(g: &Germ, p: &GermPoint, conv: &Conventions) -> QMatrix {
    let c = p.coords();
    let t = p.t.clone().unwrap_or_else(Q::zero);
    let z = &c[g.z()];
    let y = &c[g.y()];
    let z2 = z * z;
    let d2 = Q::one() + &z2;
    let d4 = &d2 + &z2 * &z2;
    let d2sq = &d2 * &d2;
    let d4sq = &d4 * &d4;
    let tc = g.n;
    let mut m = QMatrix::zeros(g.target_dim(), g.n + 1);

    for i in 1..=g.k {
        let b = &c[g.x(2 * i)];
        let a = &c[g.x(2 * i - 1)];
        let (odd, even) = (g.x(2 * i - 1), g.x(2 * i));

        let r = odd;
        m.set(r, odd, Q::one());
        m.set(r, even, q(-2) * &t * z / &d4);
        m.set(r, g.z(), q(2) * &t * b * (&z2 + q(3) * &z2 * &z2 - q(1)) / &d4sq);
        m.set(r, tc, q(-2) * z * b / &d4);

        let r = even;
        m.set(r, even, Q::one() - q(2) * &t * &z2 / &d4);
        m.set(r, g.z(), q(-4) * &t * b * z * (Q::one() - &z2 * &z2) / &d4sq);
        m.set(r, tc, q(-2) * &z2 * b / &d4);

        let r = g.big_y(i);
        m.set(r, odd, z.clone());
        m.set(r, even, &z2 + q(2) * &t / &d4);
        m.set(
            r,
            g.z(),
            a + q(2) * z * b - q(4) * &t * z * b * (Q::one() + q(2) * &z2) / &d4sq,
        );
        m.set(r, tc, q(2) * b / &d4);
    }

    let r = g.big_x_last();
    m.set(r, g.y(), Q::one());
    m.set(r, g.z(), q(-12) * &t * z / &d2sq);
    m.set(r, tc, q(-6) * &z2 / &d2);

    let r = g.big_z();
    m.set(r, g.y(), z.clone());
    m.set(r, g.z(), y + q(3) * &z2 + q(6) * &t * (Q::one() - &z2) / &d2sq);
    m.set(r, tc, q(6) * z / &d2);

    for i in 1..=g.s_count() {
        m.set(g.big_s(i), g.s(i), Q::one());
    }
    if conv.jacobian_t_column {
        m
    } else {
        m.without_column(tc)
    }
}

fn seeded(coords: &[Q]) -> Vec<Jet2> {
    let dim = coords.len();
    coords
        .iter()
        .enumerate()
        .map(|(i, x)| Jet2::variable(x.clone(), i, dim))
        .collect()
}

fn input_coords(map: GermMap, p: &GermPoint) -> Vec<Q> {
    match map {
        GermMap::TildeF => p.coords_with_t(),
        _ => p.coords(),
    }
}

/// Jacobian by forward-mode differentiation over exact rationals.
pub fn jacobian_ad(g: &Germ, map: GermMap, p: &GermPoint) -> QMatrix {
    let coords = input_coords(map, p);
    let out = map.eval(g, &seeded(&coords));
    QMatrix::from_rows(
        out.iter()
            .map(|f| (0..coords.len()).map(|j| f.grad_at(j)).collect())
            .collect(),
    )
}

/// Second derivatives: one symmetric input-by-input matrix per output.
pub fn hessian_ad(g: &Germ, map: GermMap, p: &GermPoint) -> Vec<QMatrix> {
    let coords = input_coords(map, p);
    let dim = coords.len();
    map.eval(g, &seeded(&coords))
        .iter()
        .map(|f| {
            QMatrix::from_rows(
                (0..dim)
                    .map(|i| (0..dim).map(|j| f.hess_at(i, j)).collect())
                    .collect(),
            )
        })
        .collect()
}

/// Central-difference Jacobian of `f~` in `f64`.
pub fn jacobian_fd(g: &Germ, p: &GermPoint) -> Vec<Vec<f64>> {
    let base: Vec<f64> = p.coords_with_t().iter().map(q_to_f64).collect();
    let rows = g.target_dim();
    let mut m = vec![vec![0.0; base.len()]; rows];
    for j in 0..base.len() {
        let h = 1e-5 * base[j].abs().max(1.0);
        let mut plus = base.clone();
        let mut minus = base.clone();
        plus[j] += h;
        minus[j] -= h;
        let fp = GermMap::TildeF.eval(g, &plus);
        let fm = GermMap::TildeF.eval(g, &minus);
        for i in 0..rows {
            m[i][j] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    m
}

/// Largest deviation `|fd - exact| / max(1, |exact|)` over all entries.
pub fn fd_deviation(exact: &QMatrix, fd: &[Vec<f64>]) -> Result<f64> {
    if fd.len() != exact.rows() || fd.iter().any(|r| r.len() != exact.cols()) {
        return Err(Error::Dimension {
            expected: exact.rows() * exact.cols(),
            got: fd.iter().map(Vec::len).sum(),
        });
    }
    let mut worst = 0.0f64;
    for (i, row) in fd.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            let e = q_to_f64(exact.get(i, j));
            worst = worst.max((x - e).abs() / e.abs().max(1.0));
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ_lab::scalar::qf;

    fn g41() -> Germ {
        Germ::new(4, 1).unwrap()
    }

    fn pt(g: &Germ, c: &[Q], t: Option<Q>) -> GermPoint {
        let mut p = GermPoint::from_coords(g, c).unwrap();
        p.t = t;
        p
    }

    fn ints(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn normal_form_examples() {
        let g = g41();
        assert_eq!(normal_form_f(&g, &pt(&g, &ints(&[0, 0, 0, 0]), None)).unwrap(), ints(&[0; 5]));
        assert_eq!(
            normal_form_f(&g, &pt(&g, &ints(&[-2, 1, -3, 1]), None)).unwrap(),
            ints(&[-2, 1, -3, -1, -2])
        );
        assert_eq!(
            normal_form_f(&g, &pt(&g, &ints(&[1, 0, 0, 0]), None)).unwrap(),
            ints(&[1, 0, 0, 0, 0])
        );
    }

    #[test]
    fn sigma_examples() {
        let g = g41();
        assert_eq!(sigma_closed(&g, &pt(&g, &ints(&[0, 0, 0, 0]), None)).unwrap(), ints(&[0; 5]));
        assert_eq!(
            sigma_closed(&g, &pt(&g, &ints(&[-2, 1, -3, 1]), None)).unwrap(),
            vec![qf(-2, 3), qf(-2, 3), q(-3), qf(2, 3), q(3)]
        );
        assert_eq!(sigma_closed(&g, &pt(&g, &ints(&[0, 0, 7, 0]), None)).unwrap(), ints(&[0; 5]));
    }

    #[test]
    fn tilde_f_examples() {
        let g = g41();
        assert_eq!(tilde_f(&g, &pt(&g, &ints(&[0; 4]), Some(q(5)))).unwrap(), ints(&[0; 5]));
        assert_eq!(
            tilde_f(&g, &pt(&g, &ints(&[-2, 1, -3, 1]), Some(q(1)))).unwrap(),
            vec![qf(-8, 3), qf(1, 3), q(-6), qf(-1, 3), q(1)]
        );
        let p = pt(&g, &ints(&[3, -1, 2, 2]), Some(q(0)));
        assert_eq!(tilde_f(&g, &p).unwrap(), normal_form_f(&g, &p).unwrap());
        assert!(tilde_f(&g, &pt(&g, &ints(&[0; 4]), None)).is_err());
    }

    #[test]
    fn jacobian_at_origin_rows() {
        let g = g41();
        let t = q(7);
        let m = jacobian_tilde_f(&g, &pt(&g, &ints(&[0; 4]), Some(t.clone())), &Conventions::default());
        assert_eq!(m.row(g.big_y(1)), vec![q(0), q(2) * &t, q(0), q(0), q(0)]);
        assert_eq!(m.get(g.big_z(), g.z()), &(q(6) * &t));
    }

    #[test]
    fn closed_form_matches_ad_at_fixed_point() {
        let g = g41();
        let p = pt(&g, &ints(&[-2, 1, -3, 1]), Some(q(2)));
        let conv = Conventions::default();
        assert_eq!(jacobian_tilde_f(&g, &p, &conv), jacobian_ad(&g, GermMap::TildeF, &p));
        let p0 = pt(&g, &[qf(1, 2), qf(-3, 5), q(2), qf(7, 3)], None);
        assert_eq!(jacobian_f(&g, &p0), jacobian_ad(&g, GermMap::NormalForm, &p0));
    }

    #[test]
    fn t_column_is_sigma_and_t0_reduces_to_df() {
        let g = Germ::new(6, 2).unwrap();
        let c = vec![q(1), qf(-1, 2), q(3), q(2), qf(5, 7), qf(-4, 3)];
        let p = pt(&g, &c, Some(q(0)));
        let m = jacobian_tilde_f(&g, &p, &Conventions::default());
        assert_eq!(m.column(g.n), sigma_closed(&g, &p).unwrap());
        let df = jacobian_f(&g, &p);
        for j in 0..g.n {
            assert_eq!(m.column(j), df.column(j));
        }
        let ad = jacobian_ad(&g, GermMap::TildeF, &pt(&g, &c, Some(qf(3, 2))));
        assert_eq!(ad.column(g.n), sigma_closed(&g, &p).unwrap());
    }

    #[test]
    fn fault_drops_t_column() {
        let g = g41();
        let conv = Conventions {
            jacobian_t_column: false,
            ..Conventions::default()
        };
        let m = jacobian_tilde_f(&g, &pt(&g, &ints(&[0; 4]), Some(q(0))), &conv);
        assert_eq!(m.cols(), g.n);
    }

    #[test]
    fn hessian_symmetric_and_linear_in_t() {
        let g = Germ::new(5, 1).unwrap();
        let p = pt(&g, &[qf(2, 3), q(-1), qf(1, 4), q(3), q(5)], Some(qf(-7, 2)));
        let h = hessian_ad(&g, GermMap::TildeF, &p);
        assert_eq!(h.len(), g.target_dim());
        for m in &h {
            assert_eq!(m, &m.transpose());
            assert!(m.get(g.n, g.n).is_zero());
        }
    }

    #[test]
    fn finite_differences_agree() {
        let g = g41();
        let p = pt(&g, &[qf(1, 3), q(-2), qf(5, 4), qf(-2, 3)], Some(qf(3, 2)));
        let exact = jacobian_tilde_f(&g, &p, &Conventions::default());
        assert!(fd_deviation(&exact, &jacobian_fd(&g, &p)).unwrap() < 1e-6);
    }
}
