//! Curve enumeration and seeded random generation, shared by the samplers
//! and the test suites.

use crate::curve::{check_matching, Curve, MultiCurve};
use crate::error::Result;
use crate::surface::Surface;
use crate::twist::dehn_twist;
use rand::Rng;
use std::sync::Arc;

/// All essential simple closed curves whose normal coordinates are bounded
/// by `cap` on every edge. Deterministic order (lexicographic).
pub fn small_curves(surface: &Arc<Surface>, cap: i64) -> Vec<Curve> {
    let ne = surface.triangulation().num_edges;
    let mut out: Vec<Curve> = Vec::new();
    let mut v = vec![0i64; ne];
    loop {
        if check_matching(surface, &v).is_ok() {
            if let Ok(mc) = MultiCurve::new(surface.clone(), v.clone()) {
                if !mc.is_empty() {
                    if let Ok(comps) = mc.components() {
                        if comps.len() == 1 && comps[0].1 == 1 && comps[0].0.weights() == v {
                            out.push(comps.into_iter().next().unwrap().0);
                        }
                    }
                }
            }
        }
        // Odometer.
        let mut i = 0;
        loop {
            if i == ne {
                out.sort();
                out.dedup();
                return out;
            }
            v[i] += 1;
            if v[i] <= cap {
                break;
            }
            v[i] = 0;
            i += 1;
        }
    }
}

/// A random essential curve: a random twist word applied to a random seed
/// curve. Deterministic per RNG state.
pub fn random_curve<R: Rng>(
    rng: &mut R,
    seeds: &[Curve],
    word_len: usize,
    max_power: i64,
) -> Result<Curve> {
    let mut cur = seeds[rng.gen_range(0..seeds.len())].clone();
    for _ in 0..word_len {
        let gamma = &seeds[rng.gen_range(0..seeds.len())];
        let mut p = rng.gen_range(-max_power..=max_power);
        if p == 0 {
            p = 1;
        }
        let img = dehn_twist(gamma, p, cur.as_multicurve())?;
        cur = Curve::new(img)?;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::make_surface;

    #[test]
    fn s11_small_curves() {
        let s = make_surface(1, 1).unwrap();
        let curves = small_curves(&s, 2);
        // Slopes with coordinates <= 2 on the torus: at least 0/1, 1/0,
        // 1/1, 2/1-type classes.
        assert!(curves.len() >= 4, "got {}", curves.len());
    }

    #[test]
    fn s05_has_curves() {
        let s = make_surface(0, 5).unwrap();
        let curves = small_curves(&s, 2);
        assert!(!curves.is_empty());
    }
}
