use serde_json::json;

use singcalc::conventions::Conventions;
use singcalc::germ_lab::scalar::parse_q_list;
use singcalc::germ_lab::{show_vec, sigma_closed, sigma_oracle, stratify_grid, Germ, GermPoint};
use singcalc::thom_poly::{morin_tp, morin_tp_integral};

// Keeps a single click from freezing the tab.
const MAX_R: u32 = 4;
const MAX_K: u32 = 6;
const MAX_GRID_POINTS: usize = 20_000;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

pub fn thom_polynomial(r: u32, k: u32, integral: bool) -> Result<String, String> {
    if !(1..=MAX_R).contains(&r) {
        return Err(format!("r must be between 1 and {MAX_R}"));
    }
    if !(1..=MAX_K).contains(&k) {
        return Err(format!("k must be between 1 and {MAX_K}"));
    }
    let codim = r * (k + 1);
    let out = if integral {
        let c = morin_tp_integral(r, k).map_err(err)?;
        json!({
            "codim": codim,
            "text": c.to_string(),
            "mod2": c.reduce_mod2().to_string(),
        })
    } else {
        let p = morin_tp(r, k).map_err(err)?;
        json!({ "codim": codim, "text": p.to_string(), "terms": p.len() })
    };
    Ok(out.to_string())
}

pub fn sigma_at(point: &str, k: usize) -> Result<String, String> {
    let coords = parse_q_list(point).map_err(err)?;
    let g = Germ::new(coords.len(), k).map_err(err)?;
    let p = GermPoint::from_coords(&g, &coords).map_err(err)?;
    let closed = sigma_closed(&g, &p).map_err(err)?;
    let on_sigma = g.on_sigma(&p);
    let oracle_agrees = if on_sigma {
        Some(sigma_oracle(&g, &p).map_err(err)? == closed)
    } else {
        None
    };
    Ok(json!({
        "n": g.n,
        "k": g.k,
        "coordinates": g.target_names(),
        "sigma": show_vec(&closed),
        "on_singular_set": on_sigma,
        "oracle_agrees": oracle_agrees,
    })
    .to_string())
}

pub fn stratify(n: usize, k: usize, grid: &str) -> Result<String, String> {
    let g = Germ::new(n, k).map_err(err)?;
    let values = parse_q_list(grid).map_err(err)?;
    if values.is_empty() {
        return Err("grid is empty".into());
    }
    let total = u32::try_from(n)
        .ok()
        .and_then(|n| values.len().checked_pow(n))
        .filter(|&t| t <= MAX_GRID_POINTS)
        .ok_or_else(|| format!("grid would have more than {MAX_GRID_POINTS} points"))?;
    let s = stratify_grid(&g, &values, None, &Conventions::default());
    Ok(json!({
        "points_scanned": total,
        "singular_points": s.singular_points,
        "corank_profile": s.corank_profile,
        "consistent": s.consistent(),
    })
    .to_string())
}
