//! The acceptance matrix: eleven criteria, each run under a chosen set of
//! [`Conventions`] so that deliberately broken conventions can be shown to
//! fail.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::char_alg::{Generator, Gf2Poly, Monomial};
use crate::conventions::{Conventions, Fault};
use crate::error::Result;
use crate::germ_lab::scalar::{qf, Q};
use crate::germ_lab::{
    corank, fd_deviation, jacobian_ad, jacobian_fd, jacobian_tilde_f, random_sigma_point, sigma_closed,
    sigma_oracle, stratify_grid, transversality_check, Germ, GermMap, GermPoint,
};
use crate::gysin_calc::verify_lemma_nu1;
use crate::report::Report;
use crate::thom_poly::{
    gtp_matrix, gtp_with, morin_tp_integral, morin_tp_with, sigma2_integral, verify_cusp_coincidence,
    verify_morin_derivation, verify_prim_coincidence,
};

pub const SEED: u64 = 0x5eed_2024;
const MAX_FAILURES_SHOWN: usize = 5;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    /// Number of individual assertions made.
    pub checks: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub fault: Option<String>,
    pub criteria: Vec<CriterionResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        if let Some(f) = &self.fault {
            out.push_str(&format!("injected fault: {f}\n"));
        }
        for c in &self.criteria {
            out.push_str(&format!(
                "[{}] {:>2}. {} ({} checks)\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.id,
                c.name,
                c.checks
            ));
            for f in &c.failures {
                out.push_str(&format!("       - {f}\n"));
            }
            for n in &c.notes {
                out.push_str(&format!("       note: {n}\n"));
            }
        }
        let failed = self.criteria.iter().filter(|c| !c.passed).count();
        out.push_str(&format!(
            "{} of {} criteria passed\n",
            self.criteria.len() - failed,
            self.criteria.len()
        ));
        out
    }
}

/// Accumulates assertions for one criterion.
struct Tally {
    id: u32,
    name: &'static str,
    checks: usize,
    failures: Vec<String>,
    failed: usize,
    notes: Vec<String>,
}

impl Tally {
    fn new(id: u32, name: &'static str) -> Self {
        Tally {
            id,
            name,
            checks: 0,
            failures: Vec::new(),
            failed: 0,
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_FAILURES_SHOWN {
                self.failures.push(what());
            }
        }
    }

    fn report(&mut self, label: impl FnOnce() -> String, rep: Result<Report>) {
        match rep {
            Ok(rep) => {
                let failing: Vec<String> = rep.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
                self.check(rep.passed(), || format!("{}: {}", label(), failing.join("; ")));
            }
            Err(e) => self.check(false, || format!("{}: error: {e}", label())),
        }
    }

    fn finish(mut self) -> CriterionResult {
        if self.failed > self.failures.len() {
            self.failures.push(format!("... {} failures in total", self.failed));
        }
        CriterionResult {
            id: self.id,
            name: self.name.to_string(),
            passed: self.failed == 0 && self.checks > 0,
            checks: self.checks,
            failures: self.failures,
            notes: self.notes,
        }
    }
}

fn cusp_coincidence(conv: &Conventions) -> CriterionResult {
    let mut t = Tally::new(1, "cusp coincidence: Tp(Sigma^2(k-1)) = Tp(Sigma^(1_2)(k)), k = 1..8");
    for k in 1..=8 {
        t.report(|| format!("k={k}"), verify_cusp_coincidence(k, 4 * (k + 1), conv));
    }
    t.finish()
}

fn prim_coincidence(conv: &Conventions) -> CriterionResult {
    let mut t = Tally::new(2, "prim coincidence: both reduce to w_(k+1)^r, r = 1..6, k = r-1..8");
    for r in 1..=6u32 {
        for k in r - 1..=8 {
            let d = (4 * (k + 1)).max(r * (k + 1));
            t.report(|| format!("r={r} k={k}"), verify_prim_coincidence(r, k, d, conv));
        }
    }
    t.finish()
}

fn morin_derivation(conv: &Conventions) -> CriterionResult {
    let mut t = Tally::new(3, "Morin derivation via pushforward, r = 1..6, k = 1..6");
    for r in 1..=6u32 {
        for k in 1..=6 {
            t.report(|| format!("r={r} k={k}"), verify_morin_derivation(r, k, r * (k + 1), conv));
        }
    }
    t.finish()
}

fn lemma_pushforward(conv: &Conventions) -> CriterionResult {
    let mut t = Tally::new(4, "pushforward lemma w_(k+r+1)(nu_f), n = 1..6, k = 0..5, r = 0..5");
    for n in 1..=6u32 {
        for k in 0..=5 {
            for r in 0..=5 {
                t.report(|| format!("n={n} k={k} r={r}"), verify_lemma_nu1(n, k, r, k + r + 1, conv));
            }
        }
    }
    t.finish()
}

fn random_poly(rng: &mut ChaCha8Rng, max_deg: u32) -> Gf2Poly {
    let terms = rng.gen_range(1..=4);
    let mut p = Gf2Poly::zero();
    for _ in 0..terms {
        let budget = rng.gen_range(0..=max_deg);
        let mut left = budget;
        let mut factors = Vec::new();
        while left > 0 {
            let i = rng.gen_range(1..=left.min(8));
            factors.push((Generator::w(i), 1));
            left -= i;
        }
        p += &Gf2Poly::from_monomial(Monomial::from_factors(factors));
    }
    p
}

fn steenrod_layer() -> CriterionResult {
    let mut t = Tally::new(5, "Sq1 o Sq1 = 0 and the derivation rule on 1000 random polynomials");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..1000 {
        let a = random_poly(&mut rng, 16);
        let b = random_poly(&mut rng, 16);
        t.check(a.sq1().sq1().is_zero(), || format!("Sq1 Sq1 ({a}) != 0"));
        let lhs = (&a * &b).sq1();
        let rhs = &(&a.sq1() * &b) + &(&a * &b.sq1());
        t.check(lhs == rhs, || format!("derivation rule fails for {a} and {b}"));
    }
    for i in (1..=15).step_by(2) {
        let i = i as i64;
        let lhs = (&Gf2Poly::w(i) * &Gf2Poly::w(i + 1)).sq1();
        let rhs = &Gf2Poly::w(i) * &Gf2Poly::w(i + 2);
        t.check(lhs == rhs, || format!("Sq1(w{i} w{}) = {lhs}", i + 1));
    }
    t.finish()
}

fn integral_model(conv: &Conventions) -> CriterionResult {
    let mut t = Tally::new(6, "integral model: reductions, torsion in im Sq1, 2 * torsion = 0");
    for k in (1..=7u32).step_by(2) {
        match sigma2_integral(k) {
            Ok(c) => {
                t.check(c.torsion_in_sq1_image(), || format!("sigma2_integral({k}) torsion not in im Sq1"));
                t.check(c.scale(2).torsion.is_zero(), || format!("2 * torsion of sigma2_integral({k}) != 0"));
            }
            Err(e) => t.check(false, || format!("sigma2_integral({k}): {e}")),
        }
        for r in (2..=6u32).step_by(2) {
            let (Ok(c), Ok(m)) = (morin_tp_integral(r, k), morin_tp_with(r, k, conv)) else {
                t.check(false, || format!("r={r} k={k}: construction failed"));
                continue;
            };
            t.check(c.reduce_mod2() == m, || format!("reduce_mod2(Tp^SO({r},{k})) != morin_tp"));
            t.check(c.torsion_in_sq1_image(), || format!("Tp^SO({r},{k}) torsion not in im Sq1"));
            t.check(c.scale(2).torsion.is_zero(), || format!("2 * torsion of Tp^SO({r},{k}) != 0"));
        }
    }
    t.finish()
}

/// Sum over all permutations of products of entries (the determinant,
/// over GF(2)).
fn permanent(m: &[Vec<Gf2Poly>]) -> Gf2Poly {
    fn go(m: &[Vec<Gf2Poly>], row: usize, used: &mut Vec<bool>, acc: &Gf2Poly, out: &mut Gf2Poly) {
        if row == m.len() {
            *out += acc;
            return;
        }
        for c in 0..m.len() {
            if used[c] || m[row][c].is_zero() {
                continue;
            }
            used[c] = true;
            go(m, row + 1, used, &(acc * &m[row][c]), out);
            used[c] = false;
        }
    }
    let mut out = Gf2Poly::zero();
    go(m, 0, &mut vec![false; m.len()], &Gf2Poly::one(), &mut out);
    out
}

fn gtp_oracle(conv: &Conventions) -> CriterionResult {
    let mut t = Tally::new(7, "GTP determinant against permutation-sum oracle, r <= 4, l <= 6");
    for r in 1..=4u32 {
        for l in 0..=6u32 {
            let reference: Vec<Vec<Gf2Poly>> = (0..r as i64)
                .map(|i| (0..r as i64).map(|j| Gf2Poly::w(l as i64 + r as i64 + j - i)).collect())
                .collect();
            t.check(gtp_matrix(r, l, conv) == reference, || format!("r={r} l={l}: matrix layout differs"));
            let d = r * (l + r);
            match gtp_with(r, l, d, conv) {
                Ok(g) => t.check(g == permanent(&reference), || format!("r={r} l={l}: determinant differs")),
                Err(e) => t.check(false, || format!("r={r} l={l}: {e}")),
            }
        }
    }
    t.finish()
}

fn sigma_oracle_criterion() -> CriterionResult {
    let mut t = Tally::new(8, "sigma closed form = Gram-Schmidt oracle; sigma = 0 exactly on the cusp locus");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for k in 1..=3 {
        let g = Germ::minimal(k).expect("valid");
        for _ in 0..100 {
            let p = random_sigma_point(&g, &mut rng);
            let ok = matches!((sigma_closed(&g, &p), sigma_oracle(&g, &p)), (Ok(a), Ok(b)) if a == b);
            t.check(ok, || format!("k={k} at {p}"));
        }
    }
    let g = Germ::new(4, 1).expect("valid");
    let grid: Vec<Q> = (-2..=2).map(|i| qf(i, 1)).collect();
    let rep = stratify_grid(&g, &grid, None, &Conventions::default());
    for p in &rep.sigma_zero_mismatches {
        t.check(false, || format!("sigma = 0 disagrees with the cusp locus at {p:?}"));
    }
    t.check(rep.points_scanned == 625, || "grid size".into());
    t.finish()
}

fn random_point(g: &Germ, rng: &mut ChaCha8Rng) -> GermPoint {
    let mut r = || qf(rng.gen_range(-12..=12), rng.gen_range(1..=6));
    let c: Vec<Q> = (0..=g.n).map(|_| r()).collect();
    GermPoint::from_coords(g, &c).expect("n + 1 coordinates")
}

fn jacobian_criterion(conv: &Conventions) -> CriterionResult {
    let mut t = Tally::new(9, "closed-form df~ = jet oracle at 50 random points; finite differences within 1e-6");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for (n, k) in [(4, 1), (6, 2)] {
        let g = Germ::new(n, k).expect("valid");
        let mut worst = 0.0f64;
        for _ in 0..50 {
            let p = random_point(&g, &mut rng);
            let closed = jacobian_tilde_f(&g, &p, conv);
            t.check(closed == jacobian_ad(&g, GermMap::TildeF, &p), || format!("(n,k)=({n},{k}) at {p}"));
            match fd_deviation(&closed, &jacobian_fd(&g, &p)) {
                Ok(dev) => {
                    worst = worst.max(dev);
                    t.check(dev <= 1e-6, || format!("finite differences off by {dev:e} at {p}"));
                }
                Err(e) => t.check(false, || format!("finite differences at {p}: {e}")),
            }
        }
        t.notes.push(format!("(n,k)=({n},{k}): worst finite-difference deviation {worst:.1e}"));
    }
    t.finish()
}

fn locus_criterion(conv: &Conventions) -> CriterionResult {
    let mut t = Tally::new(10, "corank 2 at (x,y,z,t) = 0, transversality rank, singular set on grids");
    let s_samples = [qf(-2, 1), qf(0, 1), qf(1, 2), qf(3, 1)];
    for (n, k) in [(4, 1), (5, 1), (6, 2)] {
        let g = Germ::new(n, k).expect("valid");
        let samples: Vec<Vec<Q>> = if g.s_count() == 0 {
            vec![Vec::new()]
        } else {
            s_samples.iter().map(|s| vec![s.clone(); g.s_count()]).collect()
        };
        for s in samples {
            let mut p = GermPoint::origin(&g).with_t(qf(0, 1));
            p.s = s;
            let c = corank(&jacobian_tilde_f(&g, &p, conv)).corank;
            t.check(c == 2, || format!("(n,k)=({n},{k}): corank {c} at {p}"));
            match transversality_check(&g, &p, conv) {
                Ok(rep) => {
                    let tr = rep.transversality.expect("filled in");
                    t.check(tr.map_rank == tr.required_rank, || {
                        format!("(n,k)=({n},{k}): projected derivative rank {} < {}", tr.map_rank, tr.required_rank)
                    });
                }
                Err(e) => t.check(false, || format!("(n,k)=({n},{k}) transversality: {e}")),
            }
        }
        let grid: Vec<Q> = (-1..=1).map(|i| qf(i, 1)).collect();
        if n <= 5 {
            let rep = stratify_grid(&g, &grid, Some(&[qf(-1, 1), qf(1, 1)]), conv);
            t.check(rep.mismatches.is_empty(), || format!("(n,k)=({n},{k}): {} grid mismatches", rep.mismatches.len()));
            if let Some(tilde) = rep.tilde {
                t.notes.push(format!(
                    "(n,k)=({n},{k}) corank profile of df~ at t = +-1: {:?}",
                    tilde.corank_profile
                ));
            }
        }
    }
    t.finish()
}

/// Criteria 1 to 10 under `conv`, in order.
pub fn run_criteria(conv: &Conventions) -> Vec<CriterionResult> {
    let jobs: Vec<Box<dyn Fn() -> CriterionResult + Sync>> = vec![
        Box::new(|| cusp_coincidence(conv)),
        Box::new(|| prim_coincidence(conv)),
        Box::new(|| morin_derivation(conv)),
        Box::new(|| lemma_pushforward(conv)),
        Box::new(steenrod_layer),
        Box::new(|| integral_model(conv)),
        Box::new(|| gtp_oracle(conv)),
        Box::new(sigma_oracle_criterion),
        Box::new(|| jacobian_criterion(conv)),
        Box::new(|| locus_criterion(conv)),
    ];
    jobs.par_iter().map(|job| job()).collect()
}

/// Criterion 11: every fault makes some earlier criterion fail.
pub fn fault_injection() -> CriterionResult {
    let mut t = Tally::new(11, "fault injection: each broken convention fails at least one criterion");
    for fault in Fault::ALL {
        let conv = Conventions::default().with_fault(fault);
        let failing: Vec<u32> = run_criteria(&conv).iter().filter(|c| !c.passed).map(|c| c.id).collect();
        t.check(!failing.is_empty(), || format!("fault {fault} went unnoticed"));
        t.notes.push(format!("{fault}: fails criteria {failing:?}"));
    }
    t.finish()
}

/// The whole suite. With a fault injected, criteria 1 to 10 run under it
/// and criterion 11 is left out.
pub fn run_suite(fault: Option<Fault>) -> SuiteReport {
    match fault {
        Some(f) => SuiteReport {
            fault: Some(f.to_string()),
            criteria: run_criteria(&Conventions::default().with_fault(f)),
        },
        None => {
            let mut criteria = run_criteria(&Conventions::default());
            criteria.push(fault_injection());
            SuiteReport { fault: None, criteria }
        }
    }
}
