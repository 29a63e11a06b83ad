//! Compactness probes: uniform translation moduli with greedy covering
//! numbers, and the Hölder interpolation ladder.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::params;
use super::report::{Bound, CheckReport, PassRule};
use crate::corpus::Family;
use crate::error::{Error, Result};
use crate::field::{lp_norm, translate, Field};
use crate::grid::{GridSpec, Region};
use crate::norms::{dsp_norm, holder_seminorm};

/// `members` random band-limited fields with unit `D^s`-norm in `L^p`.
/// Bands run geometrically from 1 to `max_band`.
pub fn normalized_bandlimited_family(
    grid: &GridSpec<f64>,
    seed: u64,
    members: usize,
    max_band: usize,
    s: f64,
    p: f64,
) -> Result<Vec<Field<f64>>> {
    let top = (max_band.max(1) as f64).ln();
    (0..members)
        .map(|k| {
            let frac = if members > 1 { k as f64 / (members - 1) as f64 } else { 0.0 };
            let band = (top * frac).exp().round() as usize;
            let u = Family::RandomBandlimited { seed: seed.wrapping_add(k as u64), band }.sample(grid);
            let d = dsp_norm(&u, s, p)?;
            Ok(u.scale(1.0 / d))
        })
        .collect()
}

/// Bumps of radius `extent / 16` centered at the origin, with peak values
/// drawn uniformly from `[1/2, 1]`.
pub fn bump_family(grid: &GridSpec<f64>, seed: u64, members: usize) -> Vec<Field<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bump = Family::Bump { radius: grid.extent() / 16.0, smoothness: 1.0 }.sample(grid);
    (0..members).map(|_| bump.scale(rng.gen_range(0.5..=1.0))).collect()
}

/// Greedy `eps`-net: each member joins the first center within `eps`, or
/// becomes a new center.
fn covering_number(count: usize, eps: f64, mut dist: impl FnMut(usize, usize) -> Result<f64>) -> Result<usize> {
    let mut centers: Vec<usize> = Vec::new();
    for i in 0..count {
        let mut covered = false;
        for &c in &centers {
            if dist(i, c)? <= eps {
                covered = true;
                break;
            }
        }
        if !covered {
            centers.push(i);
        }
    }
    Ok(centers.len())
}

fn shift_directions(dim: usize) -> Vec<Vec<i64>> {
    if dim == 1 {
        vec![vec![1]]
    } else {
        vec![vec![1, 0], vec![0, 1], vec![1, 1]]
    }
}

/// Fréchet-Kolmogorov probe. `delta` is the largest lattice shift length
/// such that every member satisfies `||tau_h u||_{L^p(region)} <= eps` for all swept
/// shifts up to it (axis and diagonal directions, multiples of the spacing
/// below `extent / 4`); the covering number is that of a greedy `eps`-net
/// of the family in `L^p(region)`. Members with `D^s`-norm above
/// `dsp_bound` are rejected.
pub fn check_frechet_kolmogorov(
    family: &[Field<f64>],
    s: f64,
    p: f64,
    region: &Region,
    eps: f64,
    dsp_bound: f64,
) -> Result<CheckReport> {
    let Some(first) = family.first() else {
        return Err(Error::Precondition("empty family".into()));
    };
    let grid = *first.grid();
    region.validate(&grid)?;
    let mut r = CheckReport::new(
        "frechet_kolmogorov",
        params(json!({
            "s": s, "p": p, "eps": eps, "members": family.len(), "dsp_bound": dsp_bound, "region": region,
            "framing": "covering numbers are finite-family evidence of compactness, not a proof",
        })),
    );
    let mut norm_max = 0.0f64;
    for (k, u) in family.iter().enumerate() {
        if u.grid() != &grid {
            return Err(Error::GridMismatch);
        }
        let d = dsp_norm(u, s, p)?;
        if !(d <= dsp_bound) {
            return Err(Error::Precondition(format!("member {k} has D^s-norm {d:e} above the bound {dsp_bound:e}")));
        }
        norm_max = norm_max.max(d);
    }
    let h = grid.spacing();
    let steps = (grid.extent() / 4.0 / h).ceil() as i64 - 1;
    let mut delta = 0.0f64;
    'sweep: for k in 1..=steps {
        for dir in shift_directions(grid.dim()) {
            let shift: Vec<f64> = dir.iter().map(|&d| (d * k) as f64 * h).collect();
            for u in family {
                if lp_norm(&translate(u, &shift)?.sub(u)?, p, region)? > eps {
                    break 'sweep;
                }
            }
        }
        delta = k as f64 * h;
    }
    let covering = covering_number(family.len(), eps, |i, j| lp_norm(&family[i].sub(&family[j])?, p, region))?;
    r.measure("max_dsp_norm", norm_max)
        .measure("delta", delta)
        .measure("covering_number", covering as f64)
        .measure("covering_limit", (family.len() / 2) as f64);
    r.conclude(
        Bound::Value((family.len() / 2) as f64),
        PassRule::AllOf {
            rules: vec![
                PassRule::AtLeast { key: "delta".into(), limit: f64::MIN_POSITIVE },
                PassRule::at_most("covering_number", (family.len() / 2) as f64),
            ],
        },
    );
    Ok(r)
}

/// Interpolation between Hölder seminorms on `region`:
/// `|u(x) - u(y)| / |x - y|^alpha <= [u]_beta^{alpha/beta} (2 ||u||_inf)^{1 - alpha/beta}`
/// on `pairs` random node pairs per member, where `[u]_beta` includes those
/// pairs. Also requires a greedy net in the `[.]_alpha` distance at
/// `0.1 max [u]_alpha` to have at most half as many centers as members.
/// Members with `[u]_beta` above `beta_bound` are rejected.
pub fn check_holder_ladder(
    family: &[Field<f64>],
    alpha: f64,
    beta: f64,
    region: &Region,
    pairs: usize,
    seed: u64,
    beta_bound: f64,
) -> Result<CheckReport> {
    if !(0.0 < alpha && alpha < beta && beta < 1.0) {
        return Err(Error::Precondition(format!("need 0 < alpha < beta < 1, got ({alpha}, {beta})")));
    }
    let Some(first) = family.first() else {
        return Err(Error::Precondition("empty family".into()));
    };
    let grid = *first.grid();
    region.validate(&grid)?;
    let mut r = CheckReport::new(
        "holder_ladder",
        params(json!({
            "alpha": alpha, "beta": beta, "members": family.len(), "pairs": pairs, "seed": seed,
            "beta_bound": beta_bound, "region": region,
        })),
    );
    let nodes: Vec<usize> = (0..grid.node_count()).filter(|&i| region.contains(&grid, i)).collect();
    if nodes.len() < 2 {
        return Err(Error::InvalidRegion("region holds fewer than two nodes".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sample: Vec<(usize, usize, f64)> = (0..pairs)
        .map(|_| loop {
            let (a, b) = (nodes[rng.gen_range(0..nodes.len())], nodes[rng.gen_range(0..nodes.len())]);
            if a != b {
                let (x, y) = (grid.position(a), grid.position(b));
                let d = ((x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2)).sqrt();
                break (a, b, d);
            }
        })
        .collect();
    let theta = alpha / beta;
    let mut worst = 0.0f64;
    let mut alpha_norms = Vec::with_capacity(family.len());
    for (k, u) in family.iter().enumerate() {
        if u.grid() != &grid {
            return Err(Error::GridMismatch);
        }
        let f = u.samples();
        let mut hb = holder_seminorm(u, beta, region)?;
        for &(a, b, d) in &sample {
            hb = hb.max((f[a] - f[b]).abs() / d.powf(beta));
        }
        if !(hb <= beta_bound) {
            return Err(Error::Precondition(format!("member {k} has [u]_beta = {hb:e} above the bound {beta_bound:e}")));
        }
        let sup = u.max_abs();
        let rhs = hb.powf(theta) * (2.0 * sup).powf(1.0 - theta);
        for &(a, b, d) in &sample {
            let lhs = (f[a] - f[b]).abs() / d.powf(alpha);
            if lhs > 0.0 {
                worst = worst.max(lhs / rhs);
            }
        }
        alpha_norms.push(holder_seminorm(u, alpha, region)?);
    }
    let eps = 0.1 * alpha_norms.iter().copied().fold(0.0, f64::max);
    let covering = if eps == 0.0 {
        1
    } else {
        covering_number(family.len(), eps, |i, j| holder_seminorm(&family[i].sub(&family[j])?, alpha, region))?
    };
    r.measure("max_pair_ratio", worst)
        .measure("net_eps", eps)
        .measure("covering_number", covering as f64);
    r.conclude(
        Bound::Value(1.0),
        PassRule::AllOf {
            rules: vec![
                PassRule::at_most("max_pair_ratio", 1.0 + 1e-12),
                PassRule::at_most("covering_number", (family.len() / 2) as f64),
            ],
        },
    );
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    #[test]
    fn covering_of_identical_members_is_one() {
        assert_eq!(covering_number(10, 0.1, |_, _| Ok(0.0)).unwrap(), 1);
        assert_eq!(covering_number(10, 0.1, |i, j| Ok(if i == j { 0.0 } else { 1.0 })).unwrap(), 10);
    }

    #[test]
    fn scaled_member_is_rejected() {
        let g = make_grid(1, 128, 16.0).unwrap();
        let mut fam = normalized_bandlimited_family(&g, 3, 8, 4, 0.5, 2.0).unwrap();
        fam[2] = fam[2].scale(1e6);
        let err = check_frechet_kolmogorov(&fam, 0.5, 2.0, &Region::ball(2.0), 0.1, 1.0 + 1e-9).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn constant_family_has_zero_seminorms() {
        let g = make_grid(1, 128, 16.0).unwrap();
        let fam: Vec<_> = (0..4).map(|k| Field::constant(g, k as f64)).collect();
        let r = check_holder_ladder(&fam, 0.3, 0.6, &Region::ball(2.0), 100, 1, 1.0).unwrap();
        assert_eq!(r.get("max_pair_ratio"), Some(0.0));
        assert_eq!(r.get("covering_number"), Some(1.0));
    }
}
