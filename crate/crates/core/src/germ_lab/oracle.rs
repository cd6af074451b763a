//! Independent construction of `sigma` on the singular set: build the
//! spanning vectors of `im df`, orthogonalize, and project `d^2 f / dz^2`
//! onto the orthogonal complement.

use num_traits::Zero;
use rand::Rng;

use super::linalg::dot;
use super::scalar::{q, qf, Q};
use super::{Germ, GermPoint};
use crate::error::{Error, Result};

fn axpy(acc: &mut [Q], c: &Q, v: &[Q]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a -= c * b;
    }
}

/// `sigma` at a point of `Sigma(f)`, by Gram-Schmidt.
pub fn sigma_oracle(g: &Germ, p: &GermPoint) -> Result<Vec<Q>> {
    g.check_point(p)?;
    if !g.on_sigma(p) {
        return Err(Error::OffSingularSet(p.to_string()));
    }
    let dim = g.target_dim();
    let z = &p.z;
    let unit = |i: usize| {
        let mut e = vec![Q::zero(); dim];
        e[i] = q(1);
        e
    };

    // u_i = e_X(2i-1) + z e_Yi, u_(k+1) = e_X(2k+1) + z e_Z, v_i = e_X(2i) + z^2 e_Yi
    let mut spanning: Vec<Vec<Q>> = Vec::new();
    for i in 1..=g.k {
        let mut u = unit(2 * i - 2);
        u[g.big_y(i)] = z.clone();
        spanning.push(u);
    }
    let mut u = unit(g.big_x_last());
    u[g.big_z()] = z.clone();
    spanning.push(u);
    for i in 1..=g.k {
        let mut v = unit(2 * i - 1);
        v[g.big_y(i)] = z * z;
        spanning.push(v);
    }

    let mut basis: Vec<Vec<Q>> = Vec::new();
    for v in spanning {
        let mut w = v;
        for b in &basis {
            let c = dot(&w, b) / dot(b, b);
            axpy(&mut w, &c, b);
        }
        if w.iter().any(|x| !x.is_zero()) {
            basis.push(w);
        }
    }

    let mut second = vec![Q::zero(); dim];
    for i in 1..=g.k {
        second[g.big_y(i)] = q(2) * &p.x[2 * i - 1];
    }
    second[g.big_z()] = q(6) * z;

    let mut sigma = second.clone();
    for b in &basis {
        let c = dot(&second, b) / dot(b, b);
        axpy(&mut sigma, &c, b);
    }
    Ok(sigma)
}

fn small_rational<R: Rng>(rng: &mut R) -> Q {
    qf(rng.gen_range(-9..=9), rng.gen_range(1..=5))
}

/// A random point of `Sigma(f)` with small rational free coordinates.
pub fn random_sigma_point<R: Rng>(g: &Germ, rng: &mut R) -> GermPoint {
    let z = small_rational(rng);
    let mut x = vec![Q::zero(); 2 * g.k];
    for i in 1..=g.k {
        let b = small_rational(rng);
        x[2 * i - 2] = q(-2) * &z * &b;
        x[2 * i - 1] = b;
    }
    GermPoint {
        x,
        y: q(-3) * &z * &z,
        z,
        s: (0..g.s_count()).map(|_| small_rational(rng)).collect(),
        t: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ_lab::maps::{jacobian_f, sigma_closed};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fixed_point_and_origin() {
        let g = Germ::new(4, 1).unwrap();
        let p = GermPoint::parse(&g, "-2,1,-3,1", None).unwrap();
        assert_eq!(sigma_oracle(&g, &p).unwrap(), sigma_closed(&g, &p).unwrap());
        let o = GermPoint::origin(&g);
        assert!(sigma_oracle(&g, &o).unwrap().iter().all(Zero::is_zero));
        let off = GermPoint::parse(&g, "1,1,1,1", None).unwrap();
        assert!(matches!(sigma_oracle(&g, &off), Err(Error::OffSingularSet(_))));
    }

    #[test]
    fn random_points_agree_and_sigma_is_normal() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in 1..=3 {
            let g = Germ::new(2 * k + 3, k).unwrap();
            for _ in 0..20 {
                let p = random_sigma_point(&g, &mut rng);
                let s = sigma_oracle(&g, &p).unwrap();
                assert_eq!(s, sigma_closed(&g, &p).unwrap(), "at {p}");
                let df = jacobian_f(&g, &p);
                for j in 0..g.n {
                    assert!(dot(&s, &df.column(j)).is_zero());
                }
            }
        }
    }
}
