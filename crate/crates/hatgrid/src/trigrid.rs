//! The dual triangulation T (one vertex per unflipped hat) and lattice
//! addressing of the unit triangulation U and its kites.
//!
//! T-vertices carry three line indices n₀, n₁, n₂ with n₀+n₁+n₂ = 0.
//! U-triangles are addressed by three strip indices t₀, t₁, t₂ with
//! t₀+t₁+t₂ ∈ {0, 1}; sum 1 is the up-pointing class, sum 0 down.
//! Each unit triangle holds three kites, one per corner.

use serde::{Deserialize, Serialize};

use crate::exactnum::GoldenNumber;
use crate::fibline::{fib_index, line_colour, FibParams, LineColour};
use crate::Error;

/// A vertex of the dual triangulation T, i.e. one unflipped hat.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId {
    pub n0: i64,
    pub n1: i64,
}

impl VertexId {
    pub fn new(n0: i64, n1: i64) -> Self {
        VertexId { n0, n1 }
    }

    pub fn n2(&self) -> i64 {
        -self.n0 - self.n1
    }

    /// The indices of the three lines through this vertex.
    pub fn lines(&self) -> [i64; 3] {
        [self.n0, self.n1, self.n2()]
    }

    /// The six lattice neighbours in T.
    pub fn neighbours(&self) -> [VertexId; 6] {
        let (a, b) = (self.n0, self.n1);
        [
            VertexId::new(a + 1, b),
            VertexId::new(a - 1, b),
            VertexId::new(a, b + 1),
            VertexId::new(a, b - 1),
            VertexId::new(a + 1, b - 1),
            VertexId::new(a - 1, b + 1),
        ]
    }

    /// max(|n₀|, |n₁|, |n₂|); the hexagonal lattice norm.
    pub fn norm(&self) -> i64 {
        self.n0.abs().max(self.n1.abs()).max(self.n2().abs())
    }

    /// Image under the reflection swapping line families 1 and 2.
    pub fn mirrored(&self) -> VertexId {
        VertexId::new(self.n0, self.n2())
    }
}

/// The 6D integer index vector (a₀,b₀,a₁,b₁,a₂,b₂) of a T-vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IndexVector6 {
    pub a: [i64; 3],
    pub b: [i64; 3],
}

impl IndexVector6 {
    pub fn a_sum(&self) -> i64 {
        self.a.iter().sum()
    }
}

/// Strip address of a unit triangle of U.
///
/// The coordinate sum is 1 for up-pointing triangles and 0 for
/// down-pointing ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TriangleAddr {
    pub t: [i64; 3],
}

/// Pointing class of a unit triangle (equivalently of a hat's centre
/// triangle, equivalently the v_f plane of the vertex).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pointing {
    Up,
    Down,
}

impl Pointing {
    pub fn flipped(self) -> Pointing {
        match self {
            Pointing::Up => Pointing::Down,
            Pointing::Down => Pointing::Up,
        }
    }
}

/// A lattice vertex of U, stored as its first two line coordinates
/// (the third is determined; see `TriangleAddr` for the labelling shift).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    pub p: i64,
    pub q: i64,
}

const fn delta(j: usize) -> [i64; 3] {
    let mut d = [0i64; 3];
    d[j] = 1;
    d
}

/// Line-labelling shift of U: families 1 and 2 are labelled so that
/// triangle-address sums land in {0, 1} instead of {−1, −2}.
pub(crate) const LABEL_SHIFT: [i64; 3] = [0, 1, 1];

impl TriangleAddr {
    pub fn new(t: [i64; 3]) -> Result<Self, Error> {
        let sum: i64 = t.iter().sum();
        if sum != 0 && sum != 1 {
            return Err(Error::Inconsistency(format!(
                "triangle address {t:?} has sum {sum}, expected 0 or 1"
            )));
        }
        Ok(TriangleAddr { t })
    }

    pub fn pointing(&self) -> Pointing {
        if self.t.iter().sum::<i64>() == 1 {
            Pointing::Up
        } else {
            Pointing::Down
        }
    }

    /// Raw floor coordinates in the unshifted line labelling of U.
    pub(crate) fn raw(&self) -> [i64; 3] {
        [
            self.t[0] - LABEL_SHIFT[0],
            self.t[1] - LABEL_SHIFT[1],
            self.t[2] - LABEL_SHIFT[2],
        ]
    }

    pub(crate) fn from_raw(raw: [i64; 3]) -> Result<Self, Error> {
        TriangleAddr::new([
            raw[0] + LABEL_SHIFT[0],
            raw[1] + LABEL_SHIFT[1],
            raw[2] + LABEL_SHIFT[2],
        ])
    }

    /// The three corner lattice points, indexed so that corner j is the
    /// vertex not lying on the family-j edge. The labelling is preserved
    /// by π rotations and shifts cyclically under 2π/3 rotations.
    pub fn corners(&self) -> [LatticePoint; 3] {
        let raw = self.raw();
        let mut out = [LatticePoint { p: 0, q: 0 }; 3];
        for j in 0..3 {
            let d = delta(j);
            let f = match self.pointing() {
                Pointing::Up => [raw[0] + d[0], raw[1] + d[1], raw[2] + d[2]],
                Pointing::Down => [raw[0] + 1 - d[0], raw[1] + 1 - d[1], raw[2] + 1 - d[2]],
            };
            debug_assert_eq!(f[0] + f[1] + f[2], 0);
            out[j] = LatticePoint { p: f[0], q: f[1] };
        }
        out
    }

    pub fn corner(&self, j: u8) -> LatticePoint {
        self.corners()[j as usize % 3]
    }

    /// Edge-adjacent neighbour across the family-j edge.
    pub fn neighbour(&self, j: usize) -> TriangleAddr {
        let d = delta(j);
        let t = match self.pointing() {
            Pointing::Up => [self.t[0] - d[0], self.t[1] - d[1], self.t[2] - d[2]],
            Pointing::Down => [self.t[0] + d[0], self.t[1] + d[1], self.t[2] + d[2]],
        };
        TriangleAddr { t }
    }

    /// Image under the reflection swapping line families 1 and 2.
    pub fn mirrored(&self) -> TriangleAddr {
        TriangleAddr {
            t: [self.t[0], self.t[2], self.t[1]],
        }
    }

    pub fn norm(&self) -> i64 {
        let raw = self.raw();
        raw.iter().map(|x| x.abs()).max().unwrap()
    }
}

impl LatticePoint {
    pub fn f_raw(&self) -> [i64; 3] {
        [self.p, self.q, -self.p - self.q]
    }

    /// The six triangles having this point as a corner, with the corner
    /// index this point carries in each.
    pub fn triangles(&self) -> [(TriangleAddr, u8); 6] {
        let f = self.f_raw();
        let mut out = Vec::with_capacity(6);
        for c in 0..3usize {
            let d = delta(c);
            // up triangle with corner c here: raw = f − δ_c
            let up = TriangleAddr::from_raw([f[0] - d[0], f[1] - d[1], f[2] - d[2]])
                .expect("up triangle around lattice point");
            out.push((up, c as u8));
            // down triangle with corner c here: raw = f − 1 + δ_c
            let dn = TriangleAddr::from_raw([f[0] - 1 + d[0], f[1] - 1 + d[1], f[2] - 1 + d[2]])
                .expect("down triangle around lattice point");
            out.push((dn, c as u8));
        }
        out.try_into().unwrap()
    }

    pub fn mirrored(&self) -> LatticePoint {
        LatticePoint {
            p: self.p,
            q: -self.p - self.q,
        }
    }
}

/// One of the three kites of a unit triangle, sitting at the given corner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KiteAddr {
    pub triangle: TriangleAddr,
    pub corner: u8,
}

impl KiteAddr {
    pub fn new(triangle: TriangleAddr, corner: u8) -> Self {
        debug_assert!(corner < 3);
        KiteAddr { triangle, corner }
    }

    pub fn mirrored(&self) -> KiteAddr {
        let corner = match self.corner {
            0 => 0,
            1 => 2,
            _ => 1,
        };
        KiteAddr {
            triangle: self.triangle.mirrored(),
            corner,
        }
    }
}

/// (n₀, n₁, n₂) of a vertex.
pub fn vertex_lines(v: VertexId) -> [i64; 3] {
    v.lines()
}

/// The six kites meeting at a lattice point, in counter-clockwise
/// geometric order with a fixed translation-invariant starting kite.
///
/// Ring position is the natural coordinate for attaching a hat's extra
/// kites: position arithmetic mod 6 walks around the vertex, and
/// mirroring negates positions.
pub fn kite_ring(v: LatticePoint) -> [KiteAddr; 6] {
    // cyclic order of (pointing, corner) pairs around any vertex,
    // precomputed from the fixed centroid offsets of the six triangles
    const RING: [(Pointing, u8); 6] = ring_order();
    let mut out: [Option<KiteAddr>; 6] = [None; 6];
    for (t, c) in v.triangles() {
        let pos = RING.iter().position(|&k| k == (t.pointing(), c)).unwrap();
        out[pos] = Some(KiteAddr::new(t, c));
    }
    out.map(|k| k.unwrap())
}

/// Counter-clockwise cyclic order of the six triangles around a lattice
/// point, keyed by (pointing, corner-index-at-the-point). Derived from
/// the centroid directions in the hexagonal basis: the up triangle with
/// corner c at the point sits opposite direction δ_c, interleaved with
/// the down triangles.
const fn ring_order() -> [(Pointing, u8); 6] {
    [
        (Pointing::Up, 0),
        (Pointing::Down, 2),
        (Pointing::Up, 1),
        (Pointing::Down, 0),
        (Pointing::Up, 2),
        (Pointing::Down, 1),
    ]
}

/// The 6D index vector of a vertex under the given parameters.
pub fn index6(v: VertexId, p: &FibParams) -> Result<IndexVector6, Error> {
    let n = v.lines();
    let mut a = [0i64; 3];
    let mut b = [0i64; 3];
    for k in 0..3 {
        let (ak, bk) = fib_index(n[k], p.d(k))?;
        a[k] = ak;
        b[k] = bk;
    }
    Ok(IndexVector6 { a, b })
}

/// Exact fractional parts frac(φ n_k + d_k) of the vertex's three lines.
pub fn fracs(v: VertexId, p: &FibParams) -> Result<[GoldenNumber; 3], Error> {
    let n = v.lines();
    let mut out = [GoldenNumber::zero(), GoldenNumber::zero(), GoldenNumber::zero()];
    for k in 0..3 {
        out[k] = crate::fibline::frac_part(n[k], p.d(k))?;
    }
    Ok(out)
}

/// Number of black lines through the vertex; 3 never occurs for valid
/// parameters.
pub fn black_count(v: VertexId, p: &FibParams) -> Result<u8, Error> {
    let n = v.lines();
    let mut count = 0u8;
    for k in 0..3 {
        if line_colour(n[k], p.d(k))? == LineColour::Black {
            count += 1;
        }
    }
    Ok(count)
}

/// All vertices with max(|n₀|,|n₁|,|n₂|) ≤ radius, in lexicographic
/// (n₀, n₁) order.
pub fn enumerate_window(radius: i64) -> Vec<VertexId> {
    let mut out = Vec::new();
    for n0 in -radius..=radius {
        for n1 in -radius..=radius {
            let v = VertexId::new(n0, n1);
            if v.n2().abs() <= radius {
                out.push(v);
            }
        }
    }
    out
}
