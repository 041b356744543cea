//! Dehn twists on normal coordinates.
//!
//! `T_γ^n(μ)` is computed by surgery on an explicit transverse picture: put
//! `γ` and `μ` in minimal position, and at every crossing reroute the `μ`
//! strand around `γ` `|n|` times (following `γ`'s canonical orientation for
//! `n > 0`, the reverse for `n < 0`). The spliced closed path is then made
//! taut by cancelling immediate returns through the same triangle side; in
//! an ideal triangulation a taut closed path realizes the minimal number of
//! crossings with every edge, so the crossing counts of the reduced word are
//! the normal coordinates of the image.
//!
//! The twist direction is a fixed function of `γ`'s traced orientation, so
//! powers compose and `T_γ^{-n}` inverts `T_γ^n`; no global handedness is
//! pinned, matching the contracts (composition, inverse, growth) rather
//! than a convention.

use crate::curve::{
    corner_count, local_of_global, next_in_triangle, CrossState, Curve, MultiCurve,
    DEFAULT_WEIGHT_BUDGET,
};
use crate::error::{Error, Result};
use crate::realize::{Merged, Realization};
use crate::surface::{SideUse, Surface};
use serde::{Deserialize, Serialize};


/// A mapping class presented as a composition of powered Dehn twists,
/// applied left to right: `apply([a, b], μ) = b(a(μ))` would be ambiguous,
/// so we fix: letters act in sequence, first letter first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MappingWord {
    pub letters: Vec<Letter>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Letter {
    pub curve: Curve,
    pub power: i64,
}

impl MappingWord {
    pub fn identity() -> Self {
        MappingWord {
            letters: Vec::new(),
        }
    }

    pub fn single(curve: Curve, power: i64) -> Self {
        MappingWord {
            letters: vec![Letter { curve, power }],
        }
    }

    pub fn then(mut self, other: &MappingWord) -> Self {
        self.letters.extend(other.letters.iter().cloned());
        self
    }

    pub fn pow(&self, e: i64) -> MappingWord {
        if e == 0 {
            return MappingWord::identity();
        }
        let base = if e > 0 { self.clone() } else { self.inverse() };
        let mut out = MappingWord::identity();
        for _ in 0..e.unsigned_abs() {
            out = out.then(&base);
        }
        out
    }

    pub fn inverse(&self) -> MappingWord {
        MappingWord {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter {
                    curve: l.curve.clone(),
                    power: -l.power,
                })
                .collect(),
        }
    }

    pub fn apply(&self, mu: &MultiCurve) -> Result<MultiCurve> {
        let mut cur = mu.clone();
        for l in &self.letters {
            cur = dehn_twist(&l.curve, l.power, &cur)?;
        }
        Ok(cur)
    }

    pub fn apply_curve(&self, c: &Curve) -> Result<Curve> {
        let img = self.apply(c.as_multicurve())?;
        Curve::new(img)
    }
}

/// `T_γ^n(μ)`.
pub fn dehn_twist(gamma: &Curve, n: i64, mu: &MultiCurve) -> Result<MultiCurve> {
    if gamma.surface() != mu.surface() {
        return Err(Error::SurfaceMismatch);
    }
    if n == 0 || mu.is_empty() {
        return Ok(mu.clone());
    }
    let surface = mu.surface().clone();
    let comps = mu.components()?;
    let mut acc = MultiCurve::empty(surface.clone());
    for (c, m) in comps {
        let image = twist_component(gamma, n, &c)?;
        acc = acc.sum_raw(&image.into_multicurve().scale(m));
    }
    Ok(acc)
}

fn twist_component(gamma: &Curve, n: i64, c: &Curve) -> Result<Curve> {
    let surface = c.surface().clone();
    if gamma.as_multicurve() == c.as_multicurve() {
        return Ok(c.clone());
    }
    let rc = Realization::new(c.as_multicurve())?;
    let rg = Realization::new(gamma.as_multicurve())?;
    let merged = Merged::new(&rc, &rg)?;
    let crossings = merged.crossings();
    if crossings == 0 {
        return Ok(c.clone());
    }

    let est = rc.total + crossings * n.unsigned_abs() * rg.total + 4;
    if est > DEFAULT_WEIGHT_BUDGET {
        return Err(Error::WeightBudget {
            needed: est,
            budget: DEFAULT_WEIGHT_BUDGET,
        });
    }

    // Walk gamma's canonical orbit once: exit side-uses and, per chord, the
    // orbit position. Chords are keyed by (tri, entry side, entry local).
    let gamma_orbit = orbit_of(&rg, first_state(&rg));
    let glen = gamma_orbit.len();
    // exit_su[k]: side-use through which the k-th chord of the orbit exits.
    let mut exit_su = Vec::with_capacity(glen);
    // Key of the k-th chord by both endpoints (entry keyed during walk).
    let mut chord_pos: std::collections::HashMap<(u32, u8, i64), (usize, bool)> =
        std::collections::HashMap::new();
    {
        let tri = surface.triangulation();
        for (k, st) in gamma_orbit.iter().enumerate() {
            let u = tri.uses_of(st.edge)[st.heading as usize];
            let l = local_of_global(&surface, &rg.weights, u, st.slot);
            let (j, l2) =
                next_in_triangle(&surface, &rg.weights, u.tri as usize, u.side as usize, l);
            let out = SideUse {
                tri: u.tri,
                side: j as u8,
            };
            exit_su.push(out);
            // Entry endpoint (forward direction enters here).
            chord_pos.insert((u.tri, u.side, l), (k, true));
            // Exit endpoint.
            chord_pos.insert((u.tri, j as u8, l2), (k, false));
        }
    }
    // entry_su[k]: side-use through which the forward orbit enters chord k;
    // it is the partner of the previous chord's exit.
    let entry_su: Vec<SideUse> = {
        let tri = surface.triangulation();
        (0..glen)
            .map(|k| {
                let prev = exit_su[(k + glen - 1) % glen];
                let side = tri.side(prev);
                tri.other_use(side.edge, prev)
            })
            .collect()
    };

    // Crossing lists along each c-chord, per triangle.
    let nt = surface.triangulation().num_triangles();
    let mut cross_by_chord: std::collections::HashMap<(u32, u8, i64), Vec<(usize, bool)>> =
        std::collections::HashMap::new();
    for t in 0..nt {
        for (c1, hits) in merged.crossing_lists(t) {
            if hits.is_empty() {
                continue;
            }
            let key = (c1.tri, c1.ep[0].side, c1.ep[0].local);
            let list: Vec<(usize, bool)> = hits
                .iter()
                .map(|g| {
                    *chord_pos
                        .get(&(g.tri, g.ep[0].side, g.ep[0].local))
                        .expect("gamma chord indexed")
                })
                .collect();
            cross_by_chord.insert(key, list);
        }
    }

    // Walk c's orbit, splicing detours.
    let c_orbit = orbit_of(&rc, first_state(&rc));
    let mut word: Vec<SideUse> = Vec::with_capacity(est as usize);
    let tri = surface.triangulation();
    for st in &c_orbit {
        let u = tri.uses_of(st.edge)[st.heading as usize];
        let l = local_of_global(&surface, &rc.weights, u, st.slot);
        let (j, l2) = next_in_triangle(&surface, &rc.weights, u.tri as usize, u.side as usize, l);
        let exit = SideUse {
            tri: u.tri,
            side: j as u8,
        };
        // Identify the chord in canonical (corner) form to find crossings.
        let cstart = corner_count(&surface, &rc.weights, u.tri as usize, u.side as usize);
        let (key, forward) = if l < cstart {
            // Entry endpoint is ep[0] of corner arc (side u.side, local l).
            ((u.tri, u.side, l), true)
        } else {
            // Entry endpoint is ep[1] of the corner at the far end; ep[0] is
            // the exit endpoint (side j, local l2).
            ((u.tri, j as u8, l2), false)
        };
        if let Some(hits) = cross_by_chord.get(&key) {
            let iter: Box<dyn Iterator<Item = &(usize, bool)>> = if forward {
                Box::new(hits.iter())
            } else {
                Box::new(hits.iter().rev())
            };
            for &(k, _entry_is_fwd) in iter {
                splice_detour(&mut word, &exit_su, &entry_su, k, n, glen);
            }
        }
        word.push(exit);
    }

    let reduced = reduce_cyclic(&surface, word);
    debug_assert!(!reduced.is_empty(), "twist image cannot be trivial");
    let mut weights = vec![0i64; surface.triangulation().num_edges];
    for su in &reduced {
        let e = tri.side(*su).edge;
        weights[e as usize] += 1;
    }
    let mc = MultiCurve::from_reduced(surface, weights);
    debug_assert!(!crate::curve::is_peripheral(mc.surface(), mc.weights()));
    Ok(Curve::from_connected_unchecked(mc))
}

fn first_state(r: &Realization) -> CrossState {
    let e0 = r
        .weights
        .iter()
        .position(|w| *w > 0)
        .expect("nonempty realization");
    CrossState {
        edge: e0 as u32,
        slot: 0,
        heading: r.heading(e0 as u32, 0),
    }
}

/// The full orbit of a single-component realization starting at `start`.
fn orbit_of(r: &Realization, start: CrossState) -> Vec<CrossState> {
    let mut out = Vec::with_capacity(r.total as usize);
    let mut st = start;
    loop {
        out.push(st);
        st = crate::curve::step(&r.surface, &r.weights, st);
        if st == start {
            break;
        }
    }
    out
}

/// Insert the detour for one crossing with gamma chord `k`: follow gamma
/// forward (n > 0) or backward (n < 0) for |n| full cycles, returning to the
/// crossing point.
fn splice_detour(
    word: &mut Vec<SideUse>,
    exit_su: &[SideUse],
    entry_su: &[SideUse],
    k: usize,
    n: i64,
    glen: usize,
) {
    if n > 0 {
        for r in 0..(n as usize * glen) {
            word.push(exit_su[(k + r) % glen]);
        }
    } else {
        // Backward traversal leaves each chord through its entry side.
        for r in 0..((-n) as usize * glen) {
            word.push(entry_su[(k + glen - (r % glen)) % glen]);
        }
    }
}

/// Cancel immediate same-side returns in a cyclic word of exit side-uses.
fn reduce_cyclic(surface: &Surface, word: Vec<SideUse>) -> Vec<SideUse> {
    let tri = surface.triangulation();
    let partner = |su: SideUse| -> SideUse {
        let side = tri.side(su);
        tri.other_use(side.edge, su)
    };
    // Linear pass with a stack: su_{i+1} cancels su_i if su_{i+1} ==
    // partner(su_i): the path crosses an edge and immediately crosses back
    // through the same side-use pair.
    let mut stack: Vec<SideUse> = Vec::with_capacity(word.len());
    for su in word {
        if let Some(&top) = stack.last() {
            if su == partner(top) {
                stack.pop();
                continue;
            }
        }
        stack.push(su);
    }
    // Cyclic seam.
    loop {
        if stack.len() < 2 {
            break;
        }
        let first = stack[0];
        let last = *stack.last().unwrap();
        if first == partner(last) {
            stack.pop();
            stack.remove(0);
        } else {
            break;
        }
    }
    stack
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realize::intersection_number;
    use crate::surface::make_surface;
    use std::sync::Arc;

    fn curve(s: &Arc<Surface>, v: Vec<i64>) -> Curve {
        Curve::new(MultiCurve::new(s.clone(), v).unwrap()).unwrap()
    }

    #[test]
    fn twist_disjoint_is_identity() {
        let s = make_surface(1, 1).unwrap();
        let a = curve(&s, vec![0, 1, 1]);
        let img = dehn_twist(&a, 5, a.as_multicurve()).unwrap();
        assert_eq!(&img, a.as_multicurve());
    }

    #[test]
    fn twist_composition_law() {
        let s = make_surface(1, 1).unwrap();
        let a = curve(&s, vec![0, 1, 1]);
        let b = curve(&s, vec![1, 0, 1]);
        let one = dehn_twist(&a, 1, b.as_multicurve()).unwrap();
        let two_steps = dehn_twist(&a, 1, &one).unwrap();
        let two = dehn_twist(&a, 2, b.as_multicurve()).unwrap();
        assert_eq!(two_steps, two);
    }

    #[test]
    fn twist_inverse_law() {
        let s = make_surface(1, 1).unwrap();
        let a = curve(&s, vec![0, 1, 1]);
        let b = curve(&s, vec![1, 0, 1]);
        for n in [-3i64, -1, 1, 2, 4] {
            let fwd = dehn_twist(&a, n, b.as_multicurve()).unwrap();
            let back = dehn_twist(&a, -n, &fwd).unwrap();
            assert_eq!(&back, b.as_multicurve(), "n = {n}");
        }
    }

    #[test]
    fn twist_growth_torus() {
        let s = make_surface(1, 1).unwrap();
        let a = curve(&s, vec![0, 1, 1]);
        let b = curve(&s, vec![1, 0, 1]);
        // i(T_a^n b, b) = |n| i(a,b)^2 = |n| on the torus piece for |n|>=2.
        for n in [2i64, 3, 5, -4] {
            let img = dehn_twist(&a, n, b.as_multicurve()).unwrap();
            assert_eq!(
                intersection_number(&img, b.as_multicurve()).unwrap(),
                n.unsigned_abs()
            );
        }
    }

    #[test]
    fn isometry_of_intersections() {
        let s = make_surface(1, 1).unwrap();
        let a = curve(&s, vec![0, 1, 1]);
        let b = curve(&s, vec![1, 0, 1]);
        let c = curve(&s, vec![1, 1, 0]);
        let i0 = intersection_number(b.as_multicurve(), c.as_multicurve()).unwrap();
        let tb = dehn_twist(&a, 3, b.as_multicurve()).unwrap();
        let tc = dehn_twist(&a, 3, c.as_multicurve()).unwrap();
        assert_eq!(intersection_number(&tb, &tc).unwrap(), i0);
    }
}

#[cfg(test)]
mod stress_tests {
    use super::*;
    use crate::gen::{random_curve, small_curves};
    use crate::realize::intersection_number;
    use crate::surface::make_surface;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    // Twist laws on bigger surfaces, randomized but seeded.
    #[test]
    fn twist_laws_s05_s12() {
        for (g, n) in [(0u32, 5u32), (1, 2)] {
            let s = make_surface(g, n).unwrap();
            let seeds = small_curves(&s, 2);
            assert!(seeds.len() >= 2, "S_{{{g},{n}}} needs seed curves");
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            for trial in 0..12 {
                let gamma = seeds[trial % seeds.len()].clone();
                let alpha = random_curve(&mut rng, &seeds, 2, 2).unwrap();
                let i0 = intersection_number(gamma.as_multicurve(), alpha.as_multicurve()).unwrap();
                // Composition and inverse.
                let t1 = dehn_twist(&gamma, 2, alpha.as_multicurve()).unwrap();
                let t2 = dehn_twist(&gamma, 3, &t1).unwrap();
                let t5 = dehn_twist(&gamma, 5, alpha.as_multicurve()).unwrap();
                assert_eq!(t2, t5, "composition on S_{{{g},{n}}} trial {trial}");
                let back = dehn_twist(&gamma, -5, &t5).unwrap();
                assert_eq!(&back, alpha.as_multicurve());
                // Growth law for |n| >= 2.
                if i0 > 0 {
                    for nn in [2i64, 3, -2] {
                        let img = dehn_twist(&gamma, nn, alpha.as_multicurve()).unwrap();
                        assert_eq!(
                            intersection_number(&img, alpha.as_multicurve()).unwrap(),
                            nn.unsigned_abs() * i0 * i0,
                            "growth on S_{{{g},{n}}} trial {trial} n={nn}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn twists_commute_for_disjoint_curves() {
        let s = make_surface(0, 5).unwrap();
        let seeds = small_curves(&s, 2);
        // Find a disjoint pair.
        let mut pair = None;
        'outer: for a in &seeds {
            for b in &seeds {
                if a != b
                    && intersection_number(a.as_multicurve(), b.as_multicurve()).unwrap() == 0
                {
                    pair = Some((a.clone(), b.clone()));
                    break 'outer;
                }
            }
        }
        let (a, b) = pair.expect("disjoint pair exists on S_{0,5}");
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..6 {
            let mu = random_curve(&mut rng, &seeds, 2, 2).unwrap();
            let ab = dehn_twist(&a, 2, &dehn_twist(&b, -3, mu.as_multicurve()).unwrap()).unwrap();
            let ba = dehn_twist(&b, -3, &dehn_twist(&a, 2, mu.as_multicurve()).unwrap()).unwrap();
            assert_eq!(ab, ba);
        }
    }
}
