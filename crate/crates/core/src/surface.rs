//! Surfaces and their reference ideal triangulations.
//!
//! Every surface `S_{g,n}` (genus `g`, `n >= 1` punctures, complexity
//! `3g-3+n >= 1`) carries one fixed triangulation, built deterministically:
//!
//! * `g = 0`: start from the doubled triangle (a three-punctured sphere)
//!   and star-subdivide the last triangle `n - 3` times;
//! * `g >= 1`: fan-triangulate the standard `4g`-gon with identified sides
//!   (a one-punctured genus-`g` surface) and star-subdivide `n - 1` times.
//!
//! Each star subdivision replaces the last triangle by three and adds a
//! puncture. Edge indices are allocated in construction order, so the edge
//! numbering below is reproducible from `(g, n)` alone; `subsurf surface
//! --table` prints it.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

/// One side of a triangle: an edge together with the direction it is
/// traversed when walking the triangle boundary counterclockwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Side {
    pub edge: u32,
    pub plus: bool,
}

impl Side {
    pub fn new(edge: u32, plus: bool) -> Self {
        Side { edge, plus }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Triangle {
    /// Sides in counterclockwise order. Vertex `i` of the triangle is the
    /// start of side `i` and the end of side `i+2`.
    pub sides: [Side; 3],
}

/// Location of a side inside the triangle list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SideUse {
    pub tri: u32,
    pub side: u8,
}

/// An ideal triangulation of a punctured surface.
#[derive(Debug, Clone)]
pub struct Triangulation {
    pub triangles: Vec<Triangle>,
    pub num_edges: usize,
    /// `uses[e][0]` is the use traversing edge `e` positively,
    /// `uses[e][1]` the one traversing it negatively.
    uses: Vec<[SideUse; 2]>,
    /// Vertex id of each corner, indexed `[tri][corner]`.
    corner_vertex: Vec<[u32; 3]>,
    num_vertices: usize,
    /// Per-vertex link vectors: `links[v][e]` = number of ends of edge `e`
    /// incident to vertex `v`. These are the peripheral curve coordinates.
    links: Vec<Vec<i64>>,
}

impl Triangulation {
    fn from_triangles(triangles: Vec<Triangle>, num_edges: usize) -> Result<Self> {
        let mut pos: Vec<Option<SideUse>> = vec![None; num_edges];
        let mut neg: Vec<Option<SideUse>> = vec![None; num_edges];
        for (t, tri) in triangles.iter().enumerate() {
            for (i, s) in tri.sides.iter().enumerate() {
                let su = SideUse {
                    tri: t as u32,
                    side: i as u8,
                };
                let slot = if s.plus {
                    &mut pos[s.edge as usize]
                } else {
                    &mut neg[s.edge as usize]
                };
                if slot.is_some() {
                    return Err(Error::MatchingViolation {
                        triangle: t,
                        reason: format!("edge {} used twice with the same sign", s.edge),
                    });
                }
                *slot = Some(su);
            }
        }
        let mut uses = Vec::with_capacity(num_edges);
        for e in 0..num_edges {
            match (pos[e], neg[e]) {
                (Some(p), Some(n)) => uses.push([p, n]),
                _ => {
                    return Err(Error::MatchingViolation {
                        triangle: 0,
                        reason: format!("edge {e} does not have one use of each sign"),
                    })
                }
            }
        }

        let mut tri = Triangulation {
            triangles,
            num_edges,
            uses,
            corner_vertex: Vec::new(),
            num_vertices: 0,
            links: Vec::new(),
        };
        tri.index_vertices();
        Ok(tri)
    }

    fn index_vertices(&mut self) {
        let nt = self.triangles.len();
        let mut vertex = vec![[u32::MAX; 3]; nt];
        let mut next_vertex = 0u32;
        for t in 0..nt {
            for c in 0..3 {
                if vertex[t][c] != u32::MAX {
                    continue;
                }
                // Walk the corner orbit around this vertex.
                let (mut ct, mut cc) = (t, c);
                loop {
                    vertex[ct][cc] = next_vertex;
                    // Cross the outgoing side `cc`, land at the end corner of
                    // the partner use.
                    let s = self.triangles[ct].sides[cc];
                    let partner = self.other_use(
                        s.edge,
                        SideUse {
                            tri: ct as u32,
                            side: cc as u8,
                        },
                    );
                    ct = partner.tri as usize;
                    cc = ((partner.side + 1) % 3) as usize;
                    if ct == t && cc == c {
                        break;
                    }
                }
                next_vertex += 1;
            }
        }
        self.corner_vertex = vertex;
        self.num_vertices = next_vertex as usize;

        let mut links = vec![vec![0i64; self.num_edges]; self.num_vertices];
        for e in 0..self.num_edges {
            let pu = self.uses[e][0];
            let tail = self.corner_vertex[pu.tri as usize][pu.side as usize];
            let head = self.corner_vertex[pu.tri as usize][((pu.side + 1) % 3) as usize];
            links[tail as usize][e] += 1;
            links[head as usize][e] += 1;
        }
        self.links = links;
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    /// The two uses of an edge: index 0 positive, 1 negative.
    pub fn uses_of(&self, edge: u32) -> [SideUse; 2] {
        self.uses[edge as usize]
    }

    pub fn side(&self, u: SideUse) -> Side {
        self.triangles[u.tri as usize].sides[u.side as usize]
    }

    /// The other use of the same edge.
    pub fn other_use(&self, edge: u32, u: SideUse) -> SideUse {
        let [a, b] = self.uses[edge as usize];
        if a == u {
            b
        } else {
            a
        }
    }

    pub fn vertex_at_corner(&self, tri: usize, corner: usize) -> u32 {
        self.corner_vertex[tri][corner]
    }

    /// Peripheral (vertex link) coordinates of puncture `v`.
    pub fn vertex_link(&self, v: usize) -> &[i64] {
        &self.links[v]
    }

    fn star_subdivide_last(&mut self) {
        let t = self.triangles.len() - 1;
        let old = self.triangles[t];
        let f0 = self.num_edges as u32;
        let f1 = f0 + 1;
        let f2 = f0 + 2;
        self.num_edges += 3;
        let f = [f0, f1, f2];
        // Triangle with vertices (v_i, v_{i+1}, center).
        let mk = |i: usize| Triangle {
            sides: [
                old.sides[i],
                Side::new(f[(i + 1) % 3], true),
                Side::new(f[i], false),
            ],
        };
        self.triangles[t] = mk(0);
        self.triangles.push(mk(1));
        self.triangles.push(mk(2));
        // Recompute indices from scratch; construction sizes are tiny.
        let rebuilt = Triangulation::from_triangles(self.triangles.clone(), self.num_edges)
            .expect("subdivision preserves validity");
        *self = rebuilt;
    }
}

/// A punctured surface with its reference triangulation.
#[derive(Debug, Clone)]
pub struct Surface {
    pub genus: u32,
    pub punctures: u32,
    tri: Triangulation,
}

impl PartialEq for Surface {
    fn eq(&self, other: &Self) -> bool {
        self.genus == other.genus && self.punctures == other.punctures
    }
}
impl Eq for Surface {}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S_{{{},{}}}", self.genus, self.punctures)
    }
}

impl Surface {
    /// Complexity `xi = 3g - 3 + n`.
    pub fn xi(&self) -> i64 {
        3 * self.genus as i64 - 3 + self.punctures as i64
    }

    pub fn triangulation(&self) -> &Triangulation {
        &self.tri
    }

    pub fn num_edges(&self) -> usize {
        self.tri.num_edges
    }
}

/// Build `S_{g,n}` with its reference triangulation.
pub fn make_surface(g: u32, n: u32) -> Result<Arc<Surface>> {
    if n == 0 {
        return Err(Error::ClosedSurfaceUnsupported);
    }
    let xi = 3 * g as i64 - 3 + n as i64;
    if xi < 1 {
        return Err(Error::ComplexityTooLow { xi });
    }

    let mut tri = if g == 0 {
        // Doubled triangle: S_{0,3}.
        let t0 = Triangle {
            sides: [Side::new(0, true), Side::new(1, true), Side::new(2, true)],
        };
        let t1 = Triangle {
            sides: [Side::new(2, false), Side::new(1, false), Side::new(0, false)],
        };
        Triangulation::from_triangles(vec![t0, t1], 3)?
    } else {
        // Fan-triangulated 4g-gon with the standard identification word.
        let m = 4 * g as usize;
        // Boundary side i maps to (edge, plus): pairs (4k, 4k+2) and
        // (4k+1, 4k+3) are identified, first occurrence positive.
        let mut boundary = Vec::with_capacity(m);
        for i in 0..m {
            let k = i / 4;
            let r = i % 4;
            let (edge, plus) = match r {
                0 => (2 * k as u32, true),
                1 => (2 * k as u32 + 1, true),
                2 => (2 * k as u32, false),
                _ => (2 * k as u32 + 1, false),
            };
            boundary.push(Side::new(edge, plus));
        }
        let n_bdry_edges = 2 * g as usize;
        // Diagonals d_j = P0 -> P_j for j = 2..=m-2, indexed after boundary
        // edges.
        let diag = |j: usize| (n_bdry_edges + j - 2) as u32;
        let mut triangles = Vec::new();
        for j in 1..=(m - 2) {
            let first = if j == 1 {
                boundary[0]
            } else {
                Side::new(diag(j), true)
            };
            let last = if j + 1 == m - 1 {
                boundary[m - 1]
            } else {
                Side::new(diag(j + 1), false)
            };
            triangles.push(Triangle {
                sides: [first, boundary[j], last],
            });
        }
        let num_edges = n_bdry_edges + (m - 3);
        Triangulation::from_triangles(triangles, num_edges)?
    };

    let target_punctures = n as usize;
    while tri.num_vertices() < target_punctures {
        tri.star_subdivide_last();
    }
    debug_assert_eq!(tri.num_vertices(), target_punctures);

    // Euler characteristic sanity: V - E + F = 2 - 2g.
    let chi = tri.num_vertices() as i64 - tri.num_edges as i64 + tri.num_triangles() as i64;
    debug_assert_eq!(chi, 2 - 2 * g as i64);

    Ok(Arc::new(Surface {
        genus: g,
        punctures: n,
        tri,
    }))
}

/// Serialized form of a surface: just `(g, n)`; the triangulation is
/// reconstructed canonically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceRepr {
    pub g: u32,
    pub n: u32,
}

impl Serialize for Surface {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SurfaceRepr {
            g: self.genus,
            n: self.punctures,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Surface {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = SurfaceRepr::deserialize(d)?;
        let arc = make_surface(repr.g, repr.n).map_err(serde::de::Error::custom)?;
        Ok(Surface::clone(&arc))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complexity_examples() {
        assert_eq!(make_surface(1, 1).unwrap().xi(), 1);
        assert_eq!(make_surface(0, 5).unwrap().xi(), 2);
        assert!(matches!(
            make_surface(0, 2),
            Err(Error::ComplexityTooLow { xi: -1 })
        ));
        assert!(matches!(
            make_surface(1, 0),
            Err(Error::ClosedSurfaceUnsupported)
        ));
    }

    #[test]
    fn euler_and_counts() {
        for (g, n) in [(1u32, 1u32), (1, 2), (0, 4), (0, 5), (0, 6), (2, 1), (1, 3)] {
            let s = make_surface(g, n).unwrap();
            let t = s.triangulation();
            assert_eq!(t.num_vertices(), n as usize, "vertices of S_{{{g},{n}}}");
            assert_eq!(t.num_edges, (6 * g as i64 - 6 + 3 * n as i64) as usize);
            assert_eq!(t.num_triangles(), (4 * g as i64 - 4 + 2 * n as i64) as usize);
        }
    }

    #[test]
    fn links_are_even_and_positive() {
        let s = make_surface(0, 5).unwrap();
        let t = s.triangulation();
        for v in 0..t.num_vertices() {
            let link = t.vertex_link(v);
            let total: i64 = link.iter().sum();
            assert!(total >= 2);
        }
    }
}
