//! Integral normal coordinates for multicurves.
//!
//! A multicurve is stored as one nonnegative weight per edge of the reference
//! triangulation. A weight vector is admissible iff in every triangle the
//! three side weights have even sum and satisfy the triangle inequalities;
//! the corner counts `(a + b - c)/2` are then nonnegative integers and the
//! vector is realized by a unique isotopy class of (possibly peripheral)
//! multicurve. Construction traces the realization, drops peripheral
//! components and keeps the essential part, so equal coordinate vectors mean
//! equal isotopy classes.

use crate::error::{Error, Result};
use crate::surface::{SideUse, Surface};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Cost guard for weight-proportional kernels. Operations that would trace
/// more than this many strand crossings refuse instead of thrashing.
pub const DEFAULT_WEIGHT_BUDGET: u64 = 60_000_000;

#[derive(Debug, Clone)]
pub struct MultiCurve {
    surface: Arc<Surface>,
    weights: Vec<i64>,
    /// Set when construction dropped peripheral components.
    dropped_peripheral: bool,
}

impl PartialEq for MultiCurve {
    fn eq(&self, other: &Self) -> bool {
        self.surface == other.surface && self.weights == other.weights
    }
}
impl Eq for MultiCurve {}

impl PartialOrd for MultiCurve {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for MultiCurve {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.weights.cmp(&other.weights)
    }
}

impl std::hash::Hash for MultiCurve {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.weights.hash(state);
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct MultiCurveRepr {
    surface: Surface,
    weights: Vec<i64>,
}

impl Serialize for MultiCurve {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MultiCurveRepr {
            surface: Surface::clone(&self.surface),
            weights: self.weights.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiCurve {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = MultiCurveRepr::deserialize(d)?;
        MultiCurve::new(Arc::new(repr.surface), repr.weights).map_err(serde::de::Error::custom)
    }
}

impl MultiCurve {
    /// Validate and reduce a weight vector. Peripheral components are dropped
    /// (recorded in [`MultiCurve::dropped_peripheral`]); an input that was
    /// nonzero but reduces to nothing is an error.
    pub fn new(surface: Arc<Surface>, weights: Vec<i64>) -> Result<Self> {
        let tri = surface.triangulation();
        if weights.len() != tri.num_edges {
            return Err(Error::WeightLengthMismatch {
                got: weights.len(),
                want: tri.num_edges,
            });
        }
        if let Some(w) = weights.iter().find(|w| **w < 0) {
            return Err(Error::MatchingViolation {
                triangle: 0,
                reason: format!("negative weight {w}"),
            });
        }
        check_matching(&surface, &weights)?;

        let raw = MultiCurve {
            surface: surface.clone(),
            weights,
            dropped_peripheral: false,
        };
        if raw.total_weight() == 0 {
            return Ok(raw);
        }
        // Trace components; drop the peripheral ones.
        let comps = raw.components_internal()?;
        let mut kept = vec![0i64; tri.num_edges];
        let mut any_dropped = false;
        let mut any_kept = false;
        for (vec, mult) in &comps {
            if is_peripheral(&surface, vec) {
                any_dropped = true;
            } else {
                any_kept = true;
                for (k, w) in kept.iter_mut().zip(vec.iter()) {
                    *k += *w * *mult as i64;
                }
            }
        }
        if !any_kept {
            return Err(Error::PeripheralOnly);
        }
        Ok(MultiCurve {
            surface,
            weights: kept,
            dropped_peripheral: any_dropped,
        })
    }

    /// The empty multicurve.
    pub fn empty(surface: Arc<Surface>) -> Self {
        let n = surface.triangulation().num_edges;
        MultiCurve {
            surface,
            weights: vec![0; n],
            dropped_peripheral: false,
        }
    }

    /// Internal constructor for vectors already known to be reduced
    /// (outputs of tracing/taut reduction).
    pub(crate) fn from_reduced(surface: Arc<Surface>, weights: Vec<i64>) -> Self {
        debug_assert!(check_matching(&surface, &weights).is_ok());
        MultiCurve {
            surface,
            weights,
            dropped_peripheral: false,
        }
    }

    pub fn surface(&self) -> &Arc<Surface> {
        &self.surface
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn dropped_peripheral(&self) -> bool {
        self.dropped_peripheral
    }

    pub fn is_empty(&self) -> bool {
        self.weights.iter().all(|w| *w == 0)
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.iter().map(|w| *w as u64).sum()
    }

    /// Corner count at corner `c` of triangle `t` (arcs cutting that corner).
    pub fn corner_count(&self, t: usize, c: usize) -> i64 {
        corner_count(&self.surface, &self.weights, t, c)
    }

    /// Decompose into connected components with multiplicities, sorted
    /// lexicographically by weight vector.
    pub fn components(&self) -> Result<Vec<(Curve, u32)>> {
        let comps = self.components_internal()?;
        Ok(comps
            .into_iter()
            .map(|(vec, mult)| {
                (
                    Curve(MultiCurve::from_reduced(self.surface.clone(), vec)),
                    mult,
                )
            })
            .collect())
    }

    fn components_internal(&self) -> Result<Vec<(Vec<i64>, u32)>> {
        let total = self.total_weight();
        if total > DEFAULT_WEIGHT_BUDGET {
            return Err(Error::WeightBudget {
                needed: total,
                budget: DEFAULT_WEIGHT_BUDGET,
            });
        }
        let tri = self.surface.triangulation();
        let ne = tri.num_edges;
        let mut offset = vec![0u64; ne + 1];
        for e in 0..ne {
            offset[e + 1] = offset[e] + self.weights[e] as u64;
        }
        let total = offset[ne] as usize;
        let mut visited = vec![false; total];
        let mut comps: Vec<(Vec<i64>, u32)> = Vec::new();

        for e0 in 0..ne {
            for g0 in 0..self.weights[e0] as u64 {
                let id0 = (offset[e0] + g0) as usize;
                if visited[id0] {
                    continue;
                }
                let mut vec = vec![0i64; ne];
                let mut state = CrossState {
                    edge: e0 as u32,
                    slot: g0 as i64,
                    heading: 0,
                };
                loop {
                    let id = (offset[state.edge as usize] + state.slot as u64) as usize;
                    if visited[id] {
                        break;
                    }
                    visited[id] = true;
                    vec[state.edge as usize] += 1;
                    state = step(&self.surface, &self.weights, state);
                }
                // Aggregate identical component vectors.
                match comps.iter_mut().find(|(v, _)| *v == vec) {
                    Some((_, m)) => *m += 1,
                    None => comps.push((vec, 1)),
                }
            }
        }
        comps.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(comps)
    }

    /// Sum of multicurves (disjoint union of classes; the operands must be
    /// realizable disjointly for this to be geometrically meaningful).
    pub(crate) fn sum_raw(&self, other: &MultiCurve) -> MultiCurve {
        debug_assert_eq!(self.surface, other.surface);
        let weights = self
            .weights
            .iter()
            .zip(other.weights.iter())
            .map(|(a, b)| a + b)
            .collect();
        MultiCurve::from_reduced(self.surface.clone(), weights)
    }

    pub(crate) fn scale(&self, m: u32) -> MultiCurve {
        let weights = self.weights.iter().map(|w| w * m as i64).collect();
        MultiCurve::from_reduced(self.surface.clone(), weights)
    }
}

/// A connected essential simple closed curve (one multicurve component with
/// multiplicity one).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Curve(MultiCurve);

impl Curve {
    /// Wrap a vector already known to be a single essential component.
    pub(crate) fn from_connected_unchecked(mc: MultiCurve) -> Self {
        Curve(mc)
    }

    pub fn new(mc: MultiCurve) -> Result<Self> {
        let comps = mc.components()?;
        if comps.len() != 1 || comps[0].1 != 1 {
            return Err(Error::NotConnected {
                components: comps.iter().map(|(_, m)| *m as usize).sum(),
            });
        }
        Ok(comps.into_iter().next().unwrap().0)
    }

    pub fn as_multicurve(&self) -> &MultiCurve {
        &self.0
    }

    pub fn into_multicurve(self) -> MultiCurve {
        self.0
    }

    pub fn surface(&self) -> &Arc<Surface> {
        self.0.surface()
    }

    pub fn weights(&self) -> &[i64] {
        self.0.weights()
    }

    pub fn total_weight(&self) -> u64 {
        self.0.total_weight()
    }
}

impl<'de> Deserialize<'de> for Curve {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let mc = MultiCurve::deserialize(d)?;
        Curve::new(mc).map_err(serde::de::Error::custom)
    }
}

/// Build the multicurve with one component per entry, multiplicities allowed.
pub fn assemble(surface: &Arc<Surface>, parts: &[(Curve, u32)]) -> MultiCurve {
    let mut acc = MultiCurve::empty(surface.clone());
    for (c, m) in parts {
        acc = acc.sum_raw(&c.as_multicurve().scale(*m));
    }
    acc
}

pub(crate) fn corner_count(surface: &Surface, weights: &[i64], t: usize, c: usize) -> i64 {
    let tri = surface.triangulation();
    let s = tri.triangles[t].sides;
    let a = |i: usize| weights[s[i].edge as usize];
    (a(c) + a((c + 2) % 3) - a((c + 1) % 3)) / 2
}

pub(crate) fn check_matching(surface: &Surface, weights: &[i64]) -> Result<()> {
    let tri = surface.triangulation();
    for (t, triangle) in tri.triangles.iter().enumerate() {
        let a: Vec<i64> = triangle
            .sides
            .iter()
            .map(|s| weights[s.edge as usize])
            .collect();
        if (a[0] + a[1] + a[2]) % 2 != 0 {
            return Err(Error::MatchingViolation {
                triangle: t,
                reason: format!("odd side sum {:?}", a),
            });
        }
        for i in 0..3 {
            if a[i] > a[(i + 1) % 3] + a[(i + 2) % 3] {
                return Err(Error::MatchingViolation {
                    triangle: t,
                    reason: format!("side {} exceeds the other two: {:?}", i, a),
                });
            }
        }
    }
    Ok(())
}

pub(crate) fn is_peripheral(surface: &Surface, vec: &[i64]) -> bool {
    let tri = surface.triangulation();
    (0..tri.num_vertices()).any(|v| tri.vertex_link(v) == vec)
}

/// A transverse crossing of an edge, heading into the triangle on the side
/// of use `heading`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) struct CrossState {
    pub edge: u32,
    /// Slot along the edge in its positive direction, `0..w[edge]`.
    pub slot: i64,
    /// 0 or 1: which use's triangle the strand alights in next.
    pub heading: u8,
}

/// Local position of global slot `g` on the given side use, measured from
/// the side's start vertex.
pub(crate) fn local_of_global(surface: &Surface, weights: &[i64], u: SideUse, g: i64) -> i64 {
    let side = surface.triangulation().side(u);
    let w = weights[side.edge as usize];
    if side.plus {
        g
    } else {
        w - 1 - g
    }
}

pub(crate) fn global_of_local(surface: &Surface, weights: &[i64], u: SideUse, l: i64) -> i64 {
    // Same involution.
    local_of_global(surface, weights, u, l)
}

/// Within triangle `t`, the arc entered through side `i` at local position
/// `l` leaves through side `j` at local position `l2` (both measured from
/// the respective side's start vertex).
pub(crate) fn next_in_triangle(
    surface: &Surface,
    weights: &[i64],
    t: usize,
    i: usize,
    l: i64,
) -> (usize, i64) {
    let tri = surface.triangulation();
    let sides = tri.triangles[t].sides;
    let a = |k: usize| weights[sides[k].edge as usize];
    let c_start = corner_count(surface, weights, t, i);
    if l < c_start {
        // Corner at the start vertex v_i: partner side i+2, positions match
        // measured from the shared vertex, which is that side's end.
        let j = (i + 2) % 3;
        (j, a(j) - 1 - l)
    } else {
        // Corner at the end vertex v_{i+1}: partner side i+1, position from
        // the shared vertex.
        let k = a(i) - 1 - l;
        let j = (i + 1) % 3;
        (j, k)
    }
}

/// One step of the strand walk: cross into the heading triangle, traverse
/// its arc, and come out crossing the next edge.
pub(crate) fn step(surface: &Surface, weights: &[i64], s: CrossState) -> CrossState {
    let tri = surface.triangulation();
    let u = tri.uses_of(s.edge)[s.heading as usize];
    let l = local_of_global(surface, weights, u, s.slot);
    let (j, l2) = next_in_triangle(surface, weights, u.tri as usize, u.side as usize, l);
    let out_use = SideUse {
        tri: u.tri,
        side: j as u8,
    };
    let out_side = tri.side(out_use);
    let g2 = global_of_local(surface, weights, out_use, l2);
    let partner = tri.other_use(out_side.edge, out_use);
    let heading = if tri.uses_of(out_side.edge)[0] == partner {
        0
    } else {
        1
    };
    CrossState {
        edge: out_side.edge,
        slot: g2,
        heading,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::make_surface;

    #[test]
    fn zero_vector_is_empty() {
        let s = make_surface(1, 1).unwrap();
        let c = MultiCurve::new(s, vec![0, 0, 0]).unwrap();
        assert!(c.is_empty());
        assert!(c.components().unwrap().is_empty());
    }

    #[test]
    fn odd_parity_rejected() {
        let s = make_surface(1, 1).unwrap();
        assert!(matches!(
            MultiCurve::new(s, vec![1, 0, 0]),
            Err(Error::MatchingViolation { .. })
        ));
    }

    #[test]
    fn peripheral_only_rejected() {
        let s = make_surface(1, 1).unwrap();
        let link = s.triangulation().vertex_link(0).to_vec();
        assert!(matches!(
            MultiCurve::new(s, link),
            Err(Error::PeripheralOnly)
        ));
    }

    // Enumerate all admissible vectors with entries <= 2 on S_{1,1} and
    // check that tracing is consistent: components re-sum to the curve.
    #[test]
    fn small_enumeration_s11() {
        let s = make_surface(1, 1).unwrap();
        let mut seen_curves = 0;
        for a in 0..=2i64 {
            for b in 0..=2i64 {
                for c in 0..=2i64 {
                    let v = vec![a, b, c];
                    if check_matching(&s, &v).is_err() {
                        continue;
                    }
                    match MultiCurve::new(s.clone(), v) {
                        Ok(mc) => {
                            let comps = mc.components().unwrap();
                            let mut sum = vec![0i64; 3];
                            for (cc, m) in &comps {
                                for (x, w) in sum.iter_mut().zip(cc.weights()) {
                                    *x += w * *m as i64;
                                }
                            }
                            assert_eq!(sum, mc.weights());
                            if !mc.is_empty() {
                                seen_curves += 1;
                            }
                        }
                        Err(Error::PeripheralOnly) => {}
                        Err(e) => panic!("unexpected {e}"),
                    }
                }
            }
        }
        // Slopes with all weights <= 2 exist (at least 0/1, 1/0, 1/1 and
        // doubles).
        assert!(seen_curves >= 6, "saw {seen_curves}");
    }

    #[test]
    fn weights_1_1_0_is_a_curve() {
        let s = make_surface(1, 1).unwrap();
        // On the reference S_{1,1} triangulation some permutation of
        // (1,1,0) is a single essential curve.
        let mut found = 0;
        for v in [[1, 1, 0], [1, 0, 1], [0, 1, 1]] {
            if let Ok(mc) = MultiCurve::new(s.clone(), v.to_vec()) {
                let comps = mc.components().unwrap();
                assert_eq!(comps.len(), 1);
                assert_eq!(comps[0].1, 1);
                found += 1;
            }
        }
        assert_eq!(found, 3);
    }
}
