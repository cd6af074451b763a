//! Corank reports, grid stratification and the `Hom(ker, coker)`
//! transversality test.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::linalg::{dot, QMatrix};
use super::maps::{hessian_ad, jacobian_f, jacobian_tilde_f, sigma_closed, GermMap};
use super::scalar::Q;
use super::{show_vec, Germ, GermPoint};
use crate::conventions::Conventions;
use crate::error::{Error, Result};

fn ser_vecs<S: Serializer>(v: &[Vec<Q>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let strings: Vec<Vec<String>> = v.iter().map(|x| show_vec(x)).collect();
    strings.serialize(s)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JetReport {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub corank: usize,
    #[serde(serialize_with = "ser_vecs")]
    pub kernel_basis: Vec<Vec<Q>>,
    #[serde(serialize_with = "ser_vecs")]
    pub cokernel_basis: Vec<Vec<Q>>,
    pub transversality: Option<Transversality>,
}

impl JetReport {
    /// Rank-nullity on both sides.
    pub fn is_consistent(&self) -> bool {
        self.rank + self.corank == self.rows.min(self.cols)
            && self.rank + self.kernel_basis.len() == self.cols
            && self.rank + self.cokernel_basis.len() == self.rows
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transversality {
    /// Rank of `v -> proj_C H(v, .)|_K`.
    pub map_rank: usize,
    pub required_rank: usize,
    pub surjective: bool,
    /// Source coordinates on which the kernel is supported.
    pub kernel_support: Vec<String>,
    /// The hand-listed coordinates `yY_i, yZ, tY_i, tZ`, each with whether
    /// its image in `Hom(K, C)` is nonzero.
    pub claimed_coordinates: Vec<(String, bool)>,
    pub claimed_rank: usize,
    pub claimed_span: bool,
}

/// Rank, corank and exact kernel/cokernel bases of `m`.
pub fn corank(m: &QMatrix) -> JetReport {
    let rank = m.rank();
    JetReport {
        rows: m.rows(),
        cols: m.cols(),
        rank,
        corank: m.rows().min(m.cols()) - rank,
        kernel_basis: m.kernel(),
        cokernel_basis: m.cokernel(),
        transversality: None,
    }
}

fn grid_points(g: &Germ, grid: &[Q]) -> Vec<GermPoint> {
    if grid.is_empty() {
        return Vec::new();
    }
    let total = grid.len().pow(g.n as u32);
    (0..total)
        .into_par_iter()
        .map(|mut idx| {
            let mut c = vec![Q::zero(); g.n];
            for slot in c.iter_mut().rev() {
                *slot = grid[idx % grid.len()].clone();
                idx /= grid.len();
            }
            GermPoint::from_coords(g, &c).expect("grid point has n coordinates")
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TildeProfile {
    pub t_grid: Vec<String>,
    pub points_scanned: usize,
    pub corank_profile: BTreeMap<usize, usize>,
    /// Corank counts for each `t` value, in grid order.
    pub by_t: Vec<(String, BTreeMap<usize, usize>)>,
    pub corank2_points: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StratificationReport {
    pub n: usize,
    pub k: usize,
    pub grid: Vec<String>,
    pub points_scanned: usize,
    pub singular_points: Vec<Vec<String>>,
    /// Grid points satisfying the closed-form singular-set equations.
    pub equation_points: usize,
    /// Points where `corank(df) >= 1` and the equations disagree.
    pub mismatches: Vec<Vec<String>>,
    pub corank_profile: BTreeMap<usize, usize>,
    pub corank2_points: Vec<Vec<String>>,
    /// Singular points where `sigma = 0` and the cusp locus disagree.
    pub sigma_zero_mismatches: Vec<Vec<String>>,
    pub tilde: Option<TildeProfile>,
}

impl StratificationReport {
    pub fn consistent(&self) -> bool {
        self.mismatches.is_empty() && self.sigma_zero_mismatches.is_empty()
    }
}

struct PointScan {
    coords: Vec<String>,
    corank: usize,
    on_sigma: bool,
    sigma_zero_mismatch: bool,
}

/// Coranks of `df` over `grid^n`, checked against the singular-set
/// equations, and of `df~` over `grid^n x t_grid` when given.
pub fn stratify_grid(g: &Germ, grid: &[Q], t_grid: Option<&[Q]>, conv: &Conventions) -> StratificationReport {
    let points = grid_points(g, grid);
    let scans: Vec<PointScan> = points
        .par_iter()
        .map(|p| {
            let corank = g.n - jacobian_f(g, p).rank();
            let on_sigma = g.on_sigma(p);
            let sigma_zero = sigma_closed(g, p).expect("grid point fits").iter().all(Zero::is_zero);
            PointScan {
                coords: show_vec(&p.coords()),
                corank,
                on_sigma,
                sigma_zero_mismatch: on_sigma && sigma_zero != g.on_cusp_locus(p),
            }
        })
        .collect();

    let mut profile = BTreeMap::new();
    for s in &scans {
        *profile.entry(s.corank).or_insert(0) += 1;
    }
    let tilde = t_grid.map(|ts| tilde_profile(g, &points, ts, conv));
    StratificationReport {
        n: g.n,
        k: g.k,
        grid: show_vec(grid),
        points_scanned: scans.len(),
        singular_points: scans.iter().filter(|s| s.corank >= 1).map(|s| s.coords.clone()).collect(),
        equation_points: scans.iter().filter(|s| s.on_sigma).count(),
        mismatches: scans
            .iter()
            .filter(|s| (s.corank >= 1) != s.on_sigma)
            .map(|s| s.coords.clone())
            .collect(),
        corank_profile: profile,
        corank2_points: scans.iter().filter(|s| s.corank == 2).map(|s| s.coords.clone()).collect(),
        sigma_zero_mismatches: scans
            .iter()
            .filter(|s| s.sigma_zero_mismatch)
            .map(|s| s.coords.clone())
            .collect(),
        tilde,
    }
}

fn tilde_profile(g: &Germ, points: &[GermPoint], ts: &[Q], conv: &Conventions) -> TildeProfile {
    let mut by_t = Vec::new();
    let mut total = BTreeMap::new();
    let mut corank2 = Vec::new();
    for t in ts {
        let coranks: Vec<(usize, &GermPoint)> = points
            .par_iter()
            .map(|p| {
                let q = p.clone().with_t(t.clone());
                (corank(&jacobian_tilde_f(g, &q, conv)).corank, p)
            })
            .collect();
        let mut profile = BTreeMap::new();
        for (c, p) in &coranks {
            *profile.entry(*c).or_insert(0) += 1;
            *total.entry(*c).or_insert(0) += 1;
            if *c == 2 {
                corank2.push(show_vec(&(*p).clone().with_t(t.clone()).coords_with_t()));
            }
        }
        by_t.push((t.to_string(), profile));
    }
    TildeProfile {
        t_grid: show_vec(ts),
        points_scanned: points.len() * ts.len(),
        corank_profile: total,
        by_t,
        corank2_points: corank2,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sigma2Scan {
    pub n: usize,
    pub k: usize,
    pub points_scanned: usize,
    pub corank2_points: Vec<Vec<String>>,
    /// Scanned points with `x = y = z = 0`.
    pub claimed_locus_points: usize,
    pub corank2_on_claimed_locus: usize,
    pub corank2_off_claimed_locus: Vec<Vec<String>>,
    pub claimed_locus_not_corank2: Vec<Vec<String>>,
    pub corank_profile: BTreeMap<usize, usize>,
}

/// Locates the corank-2 points of `df~` on `grid^n x t_grid` and compares
/// them with the subspace `x = y = z = 0`.
pub fn scan_sigma2(g: &Germ, grid: &[Q], t_grid: &[Q], conv: &Conventions) -> Sigma2Scan {
    let points = grid_points(g, grid);
    let rows: Vec<(Vec<String>, usize, bool)> = t_grid
        .iter()
        .flat_map(|t| points.iter().map(move |p| p.clone().with_t(t.clone())))
        .collect::<Vec<_>>()
        .par_iter()
        .map(|p| {
            let c = corank(&jacobian_tilde_f(g, p, conv)).corank;
            (show_vec(&p.coords_with_t()), c, g.on_cusp_locus(p))
        })
        .collect();
    let mut profile = BTreeMap::new();
    for (_, c, _) in &rows {
        *profile.entry(*c).or_insert(0) += 1;
    }
    Sigma2Scan {
        n: g.n,
        k: g.k,
        points_scanned: rows.len(),
        corank2_points: rows.iter().filter(|r| r.1 == 2).map(|r| r.0.clone()).collect(),
        claimed_locus_points: rows.iter().filter(|r| r.2).count(),
        corank2_on_claimed_locus: rows.iter().filter(|r| r.1 == 2 && r.2).count(),
        corank2_off_claimed_locus: rows.iter().filter(|r| r.1 == 2 && !r.2).map(|r| r.0.clone()).collect(),
        claimed_locus_not_corank2: rows.iter().filter(|r| r.1 != 2 && r.2).map(|r| r.0.clone()).collect(),
        corank_profile: profile,
    }
}

fn padded(v: &[Q], len: usize) -> Vec<Q> {
    let mut out = v.to_vec();
    out.resize(len, Q::zero());
    out
}

/// Exact transversality of `df~` to the corank-2 stratum at `(p, t)`.
pub fn transversality_check(g: &Germ, p: &GermPoint, conv: &Conventions) -> Result<JetReport> {
    g.check_point(p)?;
    let p = if p.t.is_some() {
        p.clone()
    } else {
        p.clone().with_t(Q::zero())
    };
    let mut report = corank(&jacobian_tilde_f(g, &p, conv));
    if report.corank != 2 {
        return Err(Error::Precondition(format!(
            "df~ has corank {} at {p}, expected 2",
            report.corank
        )));
    }
    let dim = g.n + 1;
    let kernel: Vec<Vec<Q>> = report.kernel_basis.iter().map(|v| padded(v, dim)).collect();
    let coker = &report.cokernel_basis;
    let hess = hessian_ad(g, GermMap::TildeF, &p);

    // Row q: the projected derivative along e_q, flattened over (kernel, cokernel) pairs.
    let rows: Vec<Vec<Q>> = (0..dim)
        .map(|qi| {
            let mut row = Vec::with_capacity(kernel.len() * coker.len());
            for kv in &kernel {
                let image: Vec<Q> = hess
                    .iter()
                    .map(|h| dot(&h.row(qi), kv))
                    .collect();
                for c in coker {
                    row.push(dot(c, &image));
                }
            }
            row
        })
        .collect();
    let map_rank = QMatrix::from_rows(rows).rank();
    let required = 2 * (g.k + 1);

    let names = g.source_names(true);
    let targets = g.target_names();
    let mut claimed = Vec::new();
    let mut claimed_vecs = Vec::new();
    for (src, src_name) in [(g.y(), "y"), (g.t(), "t")] {
        let tgts = (1..=g.k).map(|i| g.big_y(i)).chain([g.big_z()]);
        for tgt in tgts {
            let mut v = Vec::new();
            for kv in &kernel {
                for c in coker {
                    v.push(&c[tgt] * &kv[src]);
                }
            }
            claimed.push((format!("{src_name}{}", targets[tgt]), v.iter().any(|x| !x.is_zero())));
            claimed_vecs.push(v);
        }
    }
    let claimed_rank = QMatrix::from_rows(claimed_vecs).rank();
    let hom_dim = kernel.len() * coker.len();

    report.transversality = Some(Transversality {
        map_rank,
        required_rank: required,
        surjective: map_rank == required && map_rank == hom_dim,
        kernel_support: (0..dim)
            .filter(|&i| kernel.iter().any(|v| !v[i].is_zero()))
            .map(|i| names[i].clone())
            .collect(),
        claimed_coordinates: claimed,
        claimed_rank,
        claimed_span: claimed_rank == hom_dim,
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ_lab::scalar::{q, qf};

    fn ints(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn corank_examples() {
        let g = Germ::new(4, 1).unwrap();
        let p = GermPoint::parse(&g, "-2,1,-3,1", None).unwrap();
        let r = corank(&jacobian_f(&g, &p));
        assert_eq!(r.corank, 1);
        assert!(r.is_consistent());
        let r = corank(&jacobian_tilde_f(&g, &GermPoint::origin(&g).with_t(q(0)), &Conventions::default()));
        assert_eq!(r.corank, 2);
        assert!(r.is_consistent());
        assert_eq!(corank(&QMatrix::identity(5)).corank, 0);
    }

    #[test]
    fn small_grid() {
        let g = Germ::new(4, 1).unwrap();
        let rep = stratify_grid(&g, &ints(&[-1, 0, 1]), None, &Conventions::default());
        assert_eq!(rep.points_scanned, 81);
        assert!(rep.consistent());
        // z = 0 forces y = 0 and x1 = 0; x2 is free.
        assert_eq!(rep.singular_points.len(), 3);
        assert_eq!(rep.equation_points, 3);
        let empty = stratify_grid(&g, &[], Some(&[]), &Conventions::default());
        assert_eq!(empty.points_scanned, 0);
        assert!(empty.singular_points.is_empty());
    }

    #[test]
    fn t_profile_at_cusp_locus() {
        let g = Germ::new(4, 1).unwrap();
        let rep = stratify_grid(&g, &ints(&[0]), Some(&ints(&[-1, 0, 2])), &Conventions::default());
        let tilde = rep.tilde.unwrap();
        assert_eq!(tilde.points_scanned, 3);
        assert_eq!(tilde.corank2_points, vec![vec!["0", "0", "0", "0", "0"]]);
    }

    #[test]
    fn transversality_at_origin() {
        let conv = Conventions::default();
        for (n, k) in [(4, 1), (5, 1), (6, 2)] {
            let g = Germ::new(n, k).unwrap();
            let rep = transversality_check(&g, &GermPoint::origin(&g).with_t(q(0)), &conv).unwrap();
            let tr = rep.transversality.unwrap();
            assert_eq!(tr.required_rank, 2 * (k + 1));
            assert_eq!(tr.map_rank, 2 * (k + 1));
            assert!(tr.surjective);
            assert_eq!(tr.kernel_support, ["z", "t"]);
            assert_eq!(tr.claimed_rank, k + 1);
            assert!(!tr.claimed_span);
        }
    }

    #[test]
    fn transversality_is_s_invariant() {
        let g = Germ::new(5, 1).unwrap();
        let conv = Conventions::default();
        let base = transversality_check(&g, &GermPoint::origin(&g).with_t(q(0)), &conv).unwrap();
        for s in [q(3), qf(-7, 2)] {
            let mut p = GermPoint::origin(&g).with_t(q(0));
            p.s = vec![s];
            assert_eq!(transversality_check(&g, &p, &conv).unwrap(), base);
        }
    }

    #[test]
    fn transversality_rejects_non_corank_two() {
        let g = Germ::new(4, 1).unwrap();
        let p = GermPoint::origin(&g).with_t(q(1));
        assert!(matches!(transversality_check(&g, &p, &Conventions::default()), Err(Error::Precondition(_))));
    }

    #[test]
    fn sigma2_scan_small() {
        let g = Germ::new(4, 1).unwrap();
        let scan = scan_sigma2(&g, &ints(&[-1, 0, 1]), &ints(&[-1, 0, 1]), &Conventions::default());
        assert_eq!(scan.points_scanned, 243);
        assert_eq!(scan.claimed_locus_points, 3);
        assert_eq!(scan.corank2_on_claimed_locus, 1);
        assert!(scan.corank2_off_claimed_locus.is_empty());
    }
}
