//! Simultaneous minimal-position realization of two multicurves.
//!
//! A multicurve's normal coordinates determine an embedded realization:
//! every edge carries ordered crossing slots, and inside each triangle the
//! crossings join into corner arcs. To put two multicurves in minimal
//! position their slots must be interleaved along every edge the way
//! geodesic representatives would sit. That interleaving is computed
//! combinatorially: walk both strands forward through the same triangles
//! until they leave a triangle through different sides; whoever exits
//! through the corner at the entry side's start vertex is the lower strand.
//! If the walks never diverge the strands are parallel and never cross, and
//! the second family is consistently pushed off to one side.
//!
//! With the interleaving fixed, arcs of the two families cross inside a
//! triangle exactly when their endpoints alternate along the triangle
//! boundary, and the total count is the geometric intersection number.

use crate::curve::{
    corner_count, global_of_local, local_of_global, step, CrossState,
    MultiCurve, DEFAULT_WEIGHT_BUDGET,
};
use crate::error::{Error, Result};
use crate::surface::{SideUse, Surface};
use std::cmp::Ordering;
use std::sync::Arc;

/// An embedded realization of one multicurve: slot bookkeeping plus the
/// canonical traversal direction of every crossing.
pub struct Realization {
    pub surface: Arc<Surface>,
    pub weights: Vec<i64>,
    offsets: Vec<u64>,
    /// Canonical trace heading for each slot (0 or 1), and the component id.
    slot_heading: Vec<u8>,
    pub comp_of_slot: Vec<u32>,
    pub num_components: u32,
    pub total: u64,
}

impl Realization {
    pub fn new(mc: &MultiCurve) -> Result<Realization> {
        let surface = mc.surface().clone();
        let weights = mc.weights().to_vec();
        let ne = weights.len();
        let mut offsets = vec![0u64; ne + 1];
        for e in 0..ne {
            offsets[e + 1] = offsets[e] + weights[e] as u64;
        }
        let total = offsets[ne];
        if total > DEFAULT_WEIGHT_BUDGET {
            return Err(Error::WeightBudget {
                needed: total,
                budget: DEFAULT_WEIGHT_BUDGET,
            });
        }
        let mut slot_heading = vec![u8::MAX; total as usize];
        let mut comp_of_slot = vec![u32::MAX; total as usize];
        let mut comp = 0u32;
        for e0 in 0..ne {
            for g0 in 0..weights[e0] {
                let id0 = (offsets[e0] + g0 as u64) as usize;
                if slot_heading[id0] != u8::MAX {
                    continue;
                }
                let mut state = CrossState {
                    edge: e0 as u32,
                    slot: g0,
                    heading: 0,
                };
                loop {
                    let id = (offsets[state.edge as usize] + state.slot as u64) as usize;
                    if slot_heading[id] != u8::MAX {
                        break;
                    }
                    slot_heading[id] = state.heading;
                    comp_of_slot[id] = comp;
                    state = step(&surface, &weights, state);
                }
                comp += 1;
            }
        }
        Ok(Realization {
            surface,
            weights,
            offsets,
            slot_heading,
            comp_of_slot,
            num_components: comp,
            total,
        })
    }

    pub fn slot_id(&self, edge: u32, g: i64) -> usize {
        (self.offsets[edge as usize] + g as u64) as usize
    }

    pub fn heading(&self, edge: u32, g: i64) -> u8 {
        self.slot_heading[self.slot_id(edge, g)]
    }

    /// All corner arcs of this realization in triangle `t`, as endpoint
    /// pairs `(side, local-from-start)`. Endpoint 0 sits on the corner's
    /// outgoing side, endpoint 1 on its incoming side.
    pub fn chords_in_triangle(&self, t: usize) -> Vec<Chord> {
        let tri = self.surface.triangulation();
        let sides = tri.triangles[t].sides;
        let a = |k: usize| self.weights[sides[k].edge as usize];
        let mut out = Vec::new();
        for c in 0..3usize {
            let cc = corner_count(&self.surface, &self.weights, t, c);
            let j = (c + 2) % 3;
            for k in 0..cc {
                out.push(Chord {
                    tri: t as u32,
                    ep: [
                        EndPoint {
                            side: c as u8,
                            local: k,
                        },
                        EndPoint {
                            side: j as u8,
                            local: a(j) - 1 - k,
                        },
                    ],
                });
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EndPoint {
    pub side: u8,
    pub local: i64,
}

#[derive(Debug, Clone, Copy)]
pub struct Chord {
    pub tri: u32,
    pub ep: [EndPoint; 2],
}

/// Decide the order along `edge` (positive direction) of a strand of `f1`
/// at slot `g1` and a strand of `f2` at slot `g2`.
///
/// `Less` means the `f1` strand comes first. Parallel strands are reported
/// as if the whole `f2` family were pushed off to the left of `f1`'s
/// canonically oriented track.
pub fn strand_order(f1: &Realization, f2: &Realization, edge: u32, g1: i64, g2: i64) -> Ordering {
    let h = f1.heading(edge, g1);
    let mut s1 = CrossState {
        edge,
        slot: g1,
        heading: h,
    };
    let mut s2 = CrossState {
        edge,
        slot: g2,
        heading: h,
    };
    let cap = f1.total + f2.total + 8;
    let tri = f1.surface.triangulation();

    for _ in 0..cap {
        // Both enter the same triangle through the same side use.
        let u = tri.uses_of(s1.edge)[s1.heading as usize];
        let (t, i) = (u.tri as usize, u.side as usize);
        let l1 = local_of_global(&f1.surface, &f1.weights, u, s1.slot);
        let l2 = local_of_global(&f2.surface, &f2.weights, u, s2.slot);
        let c1 = corner_count(&f1.surface, &f1.weights, t, i);
        let c2 = corner_count(&f2.surface, &f2.weights, t, i);
        let first_exits_start = l1 < c1;
        let second_exits_start = l2 < c2;
        if first_exits_start != second_exits_start {
            // Divergence: the start-corner strand is lower in the entry
            // side's from-start order, which equals the relative order in
            // the original heading use's local order.
            let f1_lower_local = first_exits_start;
            return local_order_to_global(tri.side(tri.uses_of(edge)[h as usize]).plus, f1_lower_local);
        }
        s1 = step(&f1.surface, &f1.weights, s1);
        s2 = step(&f2.surface, &f2.weights, s2);
        debug_assert_eq!(s1.edge, s2.edge);
        debug_assert_eq!(s1.heading, s2.heading);
    }
    // Parallel: f2 goes to the left of f1's canonical direction, i.e. below
    // f1 in the heading use's from-start order.
    local_order_to_global(tri.side(tri.uses_of(edge)[h as usize]).plus, false)
}

fn local_order_to_global(heading_side_plus: bool, f1_lower_local: bool) -> Ordering {
    // Local from-start order of the heading use equals the global order if
    // that use traverses the edge positively.
    let f1_first_global = if heading_side_plus {
        f1_lower_local
    } else {
        !f1_lower_local
    };
    if f1_first_global {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// The merged slot order of two realizations along every edge.
pub struct Merged<'a> {
    pub f1: &'a Realization,
    pub f2: &'a Realization,
    /// For each edge: merged positions of family-1 slots and family-2 slots
    /// (ranks along the positive direction).
    pub rank1: Vec<Vec<u64>>,
    pub rank2: Vec<Vec<u64>>,
}

impl<'a> Merged<'a> {
    pub fn new(f1: &'a Realization, f2: &'a Realization) -> Result<Merged<'a>> {
        if f1.surface != f2.surface {
            return Err(Error::SurfaceMismatch);
        }
        let ne = f1.weights.len();
        let mut rank1 = Vec::with_capacity(ne);
        let mut rank2 = Vec::with_capacity(ne);
        for e in 0..ne {
            let w1 = f1.weights[e];
            let w2 = f2.weights[e];
            // Insertion index of each f2 slot among f1 slots.
            let mut ins = vec![0u64; w2 as usize];
            let mut lo_start = 0i64;
            for g2 in 0..w2 {
                // The predicate "f1 slot < f2 slot" is monotone in the f1
                // slot, and insertion points weakly increase with g2.
                let mut lo = lo_start;
                let mut hi = w1;
                while lo < hi {
                    let mid = (lo + hi) / 2;
                    if strand_order(f1, f2, e as u32, mid, g2) == Ordering::Less {
                        lo = mid + 1;
                    } else {
                        hi = mid;
                    }
                }
                ins[g2 as usize] = lo as u64;
                lo_start = lo;
            }
            let mut r1 = vec![0u64; w1 as usize];
            let mut r2 = vec![0u64; w2 as usize];
            let mut j = 0usize;
            let mut merged_pos = 0u64;
            for g1 in 0..w1 as usize {
                while j < w2 as usize && ins[j] <= g1 as u64 {
                    r2[j] = merged_pos;
                    merged_pos += 1;
                    j += 1;
                }
                r1[g1] = merged_pos;
                merged_pos += 1;
            }
            while j < w2 as usize {
                r2[j] = merged_pos;
                merged_pos += 1;
                j += 1;
            }
            rank1.push(r1);
            rank2.push(r2);
        }
        Ok(Merged { f1, f2, rank1, rank2 })
    }

    fn merged_width(&self, e: usize) -> u64 {
        (self.f1.weights[e] + self.f2.weights[e]) as u64
    }

    /// Circular boundary coordinate of an endpoint of a family-`fam` chord
    /// in triangle `t`: `(side, merged position from the side's start)`.
    pub fn boundary_coord(&self, fam: u8, t: usize, ep: EndPoint) -> (u8, u64) {
        let tri = self.f1.surface.triangulation();
        let u = SideUse {
            tri: t as u32,
            side: ep.side,
        };
        let side = tri.side(u);
        let (weights, rank) = if fam == 0 {
            (&self.f1.weights, &self.rank1)
        } else {
            (&self.f2.weights, &self.rank2)
        };
        let g = global_of_local(&self.f1.surface, weights, u, ep.local);
        let r = rank[side.edge as usize][g as usize];
        let m = self.merged_width(side.edge as usize);
        let from_start = if side.plus { r } else { m - 1 - r };
        (ep.side, from_start)
    }

    /// Total number of transverse crossings between the two families; in
    /// minimal position this is the geometric intersection number.
    pub fn crossings(&self) -> u64 {
        let nt = self.f1.surface.triangulation().num_triangles();
        let mut total = 0u64;
        for t in 0..nt {
            total += self.crossings_in_triangle(t);
        }
        total
    }

    fn interval_of(&self, fam: u8, t: usize, ch: &Chord) -> (u64, u64) {
        let base = |side: u8| -> u64 {
            // Offset of each side's run of merged points along the triangle
            // boundary circle.
            let tri = self.f1.surface.triangulation();
            let sides = tri.triangles[t].sides;
            let mut acc = 0u64;
            for s in 0..side {
                acc += self.merged_width(sides[s as usize].edge as usize);
            }
            acc
        };
        let (s0, p0) = self.boundary_coord(fam, t, ch.ep[0]);
        let (s1, p1) = self.boundary_coord(fam, t, ch.ep[1]);
        let a = base(s0) + p0;
        let b = base(s1) + p1;
        (a.min(b), a.max(b))
    }

    pub fn crossings_in_triangle(&self, t: usize) -> u64 {
        let ch1 = self.f1.chords_in_triangle(t);
        let ch2 = self.f2.chords_in_triangle(t);
        if ch1.is_empty() || ch2.is_empty() {
            return 0;
        }
        // Chords as circular intervals (lo, hi); two chords cross iff their
        // intervals partially overlap. Count pairs by sweeping over interval
        // events with a Fenwick tree on endpoints.
        let tri = self.f1.surface.triangulation();
        let sides = tri.triangles[t].sides;
        let m: u64 = (0..3)
            .map(|s| self.merged_width(sides[s].edge as usize))
            .sum();
        let iv1: Vec<(u64, u64)> = ch1.iter().map(|c| self.interval_of(0, t, c)).collect();
        let iv2: Vec<(u64, u64)> = ch2.iter().map(|c| self.interval_of(1, t, c)).collect();

        // Crossing test: lo1 < lo2 < hi1 < hi2 or lo2 < lo1 < hi2 < hi1.
        // Sweep endpoints in increasing order; when an interval of one
        // family closes, count open intervals of the other family that
        // opened strictly inside it.
        #[derive(Clone, Copy)]
        enum Ev {
            Open(u8),
            Close(u8, u32),
        }
        let mut events: Vec<(u64, Ev)> = Vec::with_capacity(2 * (iv1.len() + iv2.len()));
        for (i, &(lo, hi)) in iv1.iter().enumerate() {
            events.push((lo, Ev::Open(0)));
            events.push((hi, Ev::Close(0, i as u32)));
        }
        for (i, &(lo, hi)) in iv2.iter().enumerate() {
            events.push((lo, Ev::Open(1)));
            events.push((hi, Ev::Close(1, i as u32)));
        }
        // All endpoint positions are distinct.
        events.sort_by_key(|(p, _)| *p);
        let mut fen = Fenwick::new(m as usize + 1);
        // fen tracks open positions of BOTH families; we need per family:
        let mut fen1 = Fenwick::new(m as usize + 1);
        let mut fen2 = Fenwick::new(m as usize + 1);
        let _ = &mut fen;
        let mut total = 0u64;
        for (pos, ev) in events {
            match ev {
                Ev::Open(fam) => {
                    if fam == 0 {
                        fen1.add(pos as usize, 1);
                    } else {
                        fen2.add(pos as usize, 1);
                    }
                }
                Ev::Close(fam, idx) => {
                    let (lo, other) = if fam == 0 {
                        (iv1[idx as usize].0, &mut fen2)
                    } else {
                        (iv2[idx as usize].0, &mut fen1)
                    };
                    // Open intervals of the other family with lo' in
                    // (lo, pos): they opened inside and have not closed, so
                    // hi' > pos: partial overlap.
                    total += other.range(lo as usize + 1, pos as usize);
                    if fam == 0 {
                        fen1.add(lo as usize, -1);
                    } else {
                        fen2.add(lo as usize, -1);
                    }
                }
            }
        }
        total
    }

    /// Pairwise crossing data in triangle `t`: for each family-1 chord, the
    /// family-2 chords crossing it, ordered along the family-1 chord from
    /// its endpoint 0. Quadratic in the per-triangle chord counts; use only
    /// when one family is small.
    pub fn crossing_lists(&self, t: usize) -> Vec<(Chord, Vec<Chord>)> {
        let tri = self.f1.surface.triangulation();
        let sides = tri.triangles[t].sides;
        let m: u64 = (0..3)
            .map(|s| self.merged_width(sides[s].edge as usize))
            .sum();
        let ch1 = self.f1.chords_in_triangle(t);
        let ch2 = self.f2.chords_in_triangle(t);
        let mut out = Vec::new();
        for c1 in &ch1 {
            let (a, b) = {
                let (s0, p0) = self.boundary_coord(0, t, c1.ep[0]);
                let (s1, p1) = self.boundary_coord(0, t, c1.ep[1]);
                (side_pos(self, t, s0, p0), side_pos(self, t, s1, p1))
            };
            let mut hits: Vec<(u64, Chord)> = Vec::new();
            for c2 in &ch2 {
                let (q0, q1) = {
                    let (s0, p0) = self.boundary_coord(1, t, c2.ep[0]);
                    let (s1, p1) = self.boundary_coord(1, t, c2.ep[1]);
                    (side_pos(self, t, s0, p0), side_pos(self, t, s1, p1))
                };
                let in0 = in_open_arc(q0, a, b);
                let in1 = in_open_arc(q1, a, b);
                if in0 != in1 {
                    // Crossing; order along c1 from endpoint 0 is the ccw
                    // position of whichever endpoint lies in arc (a -> b).
                    let key_pt = if in0 { q0 } else { q1 };
                    let key = (key_pt + m - a) % m;
                    hits.push((key, *c2));
                }
            }
            hits.sort_by_key(|(k, _)| *k);
            out.push((*c1, hits.into_iter().map(|(_, c)| c).collect()));
        }
        out
    }
}

fn side_pos(m: &Merged, t: usize, side: u8, from_start: u64) -> u64 {
    let tri = m.f1.surface.triangulation();
    let sides = tri.triangles[t].sides;
    let mut acc = 0u64;
    for s in 0..side {
        acc += m.merged_width(sides[s as usize].edge as usize);
    }
    acc + from_start
}

fn in_open_arc(x: u64, a: u64, b: u64) -> bool {
    // Is x strictly inside the ccw arc from a to b?
    if a < b {
        a < x && x < b
    } else {
        x > a || x < b
    }
}

fn ccw_offset(a: u64, x: u64) -> u64 {
    x.wrapping_sub(a)
}

struct Fenwick {
    tree: Vec<i64>,
}

impl Fenwick {
    fn new(n: usize) -> Self {
        Fenwick {
            tree: vec![0; n + 1],
        }
    }
    fn add(&mut self, mut i: usize, v: i64) {
        i += 1;
        while i < self.tree.len() {
            self.tree[i] += v;
            i += i & i.wrapping_neg();
        }
    }
    fn prefix(&self, mut i: usize) -> i64 {
        let mut s = 0;
        i += 1;
        let mut j = i.min(self.tree.len() - 1);
        while j > 0 {
            s += self.tree[j];
            j -= j & j.wrapping_neg();
        }
        s
    }
    /// Sum over [lo, hi).
    fn range(&self, lo: usize, hi: usize) -> u64 {
        if hi == 0 || lo >= hi {
            return 0;
        }
        (self.prefix(hi - 1) - if lo == 0 { 0 } else { self.prefix(lo - 1) }).max(0) as u64
    }
}

/// Geometric intersection number of two multicurves.
pub fn intersection_number(a: &MultiCurve, b: &MultiCurve) -> Result<u64> {
    if a.surface() != b.surface() {
        return Err(Error::SurfaceMismatch);
    }
    if a.is_empty() || b.is_empty() {
        return Ok(0);
    }
    if a == b {
        return Ok(0);
    }
    let ra = Realization::new(a)?;
    let rb = Realization::new(b)?;
    let merged = Merged::new(&ra, &rb)?;
    Ok(merged.crossings())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::MultiCurve;
    use crate::surface::make_surface;

    #[test]
    fn self_intersection_zero() {
        let s = make_surface(1, 1).unwrap();
        let c = MultiCurve::new(s, vec![0, 1, 1]).unwrap();
        assert_eq!(intersection_number(&c, &c).unwrap(), 0);
    }

    #[test]
    fn s11_basis_curves_intersect_once() {
        let s = make_surface(1, 1).unwrap();
        // The three single-crossing-pair curves pairwise intersect once.
        let a = MultiCurve::new(s.clone(), vec![0, 1, 1]).unwrap();
        let b = MultiCurve::new(s.clone(), vec![1, 0, 1]).unwrap();
        let c = MultiCurve::new(s.clone(), vec![1, 1, 0]).unwrap();
        assert_eq!(intersection_number(&a, &b).unwrap(), 1);
        assert_eq!(intersection_number(&a, &c).unwrap(), 1);
        assert_eq!(intersection_number(&b, &c).unwrap(), 1);
    }

    #[test]
    fn multiplicity_bilinear() {
        let s = make_surface(1, 1).unwrap();
        let a = MultiCurve::new(s.clone(), vec![0, 2, 2]).unwrap();
        let b = MultiCurve::new(s.clone(), vec![3, 0, 3]).unwrap();
        assert_eq!(intersection_number(&a, &b).unwrap(), 6);
    }
}
