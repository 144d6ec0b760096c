//! Geometric realisations of the dual triangulation T from 6D index
//! vectors: the lattice realisation v_r, the two-plane realisation v_f,
//! the cube realisation v_b, v_Φ = Φ·v_r, the centre-triangle index in
//! its three variants, and the exact 2D embedding of T into U's plane.

use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::exactnum::GoldenNumber;
use crate::fibline::FibParams;
use crate::trigrid::{IndexVector6, TriangleAddr, VertexId, LABEL_SHIFT};
use crate::{Error, Roles};

/// An exact triple of ℚ(√5) coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realisation3(pub [GoldenNumber; 3]);

impl Realisation3 {
    pub fn coord_sum(&self) -> GoldenNumber {
        &self.0[0] + &self.0[1] + &self.0[2]
    }
}

/// v_r = (a_k + b_k)_k = (n₀, n₁, n₂); the regular lattice realisation.
pub fn v_r(iv: &IndexVector6) -> Realisation3 {
    Realisation3(std::array::from_fn(|k| {
        GoldenNumber::from_int(iv.a[k] + iv.b[k])
    }))
}

/// v_f = (a_k Φ + b_k)_k; vertices align on two planes perpendicular to
/// (1,1,1).
pub fn v_f(iv: &IndexVector6) -> Realisation3 {
    let big = GoldenNumber::big_phi();
    Realisation3(std::array::from_fn(|k| {
        GoldenNumber::from_int(iv.a[k]) * &big + GoldenNumber::from_int(iv.b[k])
    }))
}

/// v_b = (a_k − b_k Φ)_k; vertices fall into a cube of edge 1 + Φ.
pub fn v_b(iv: &IndexVector6) -> Realisation3 {
    let big = GoldenNumber::big_phi();
    Realisation3(std::array::from_fn(|k| {
        GoldenNumber::from_int(iv.a[k]) - GoldenNumber::from_int(iv.b[k]) * &big
    }))
}

/// v_Φ = Φ·v_r.
pub fn v_phi(iv: &IndexVector6) -> Realisation3 {
    let big = GoldenNumber::big_phi();
    Realisation3(std::array::from_fn(|k| {
        GoldenNumber::from_int(iv.a[k] + iv.b[k]) * &big
    }))
}

/// Which centre-index formula to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CentreMode {
    /// c_k = a_k + b_k − b_{k+1}; unflipped hats of the standard roles.
    Standard,
    /// c_k = a_k + b_k − b_{k−1}; unflipped hats of the mirrored roles.
    Mirrored,
    /// c_k = a_k + 2 b_k; the 10-kite tile (role independent).
    TenKite,
}

/// Address offsets bringing the raw formula values into the shifted U
/// labelling with sums in {0, 1}. Raw sums are Σa ∈ {−1,−2} for the hat
/// formulas and −Σa ∈ {1, 2} for the 10-kite formula.
fn centre_offset(mode: CentreMode) -> [i64; 3] {
    match mode {
        CentreMode::Standard | CentreMode::Mirrored => [
            LABEL_SHIFT[0],
            LABEL_SHIFT[1],
            LABEL_SHIFT[2],
        ],
        CentreMode::TenKite => [
            LABEL_SHIFT[0] - 1,
            LABEL_SHIFT[1] - 1,
            LABEL_SHIFT[2] - 1,
        ],
    }
}

/// Position of the hat's (or 10-kite tile's) centre triangle.
pub fn centre_index(iv: &IndexVector6, mode: CentreMode) -> Result<TriangleAddr, Error> {
    let raw: [i64; 3] = match mode {
        CentreMode::Standard => {
            std::array::from_fn(|k| iv.a[k] + iv.b[k] - iv.b[(k + 1) % 3])
        }
        CentreMode::Mirrored => {
            std::array::from_fn(|k| iv.a[k] + iv.b[k] - iv.b[(k + 2) % 3])
        }
        CentreMode::TenKite => std::array::from_fn(|k| iv.a[k] + 2 * iv.b[k]),
    };
    let off = centre_offset(mode);
    TriangleAddr::new([raw[0] + off[0], raw[1] + off[1], raw[2] + off[2]])
}

/// A 2D point in U's plane, in the fixed hexagonal basis
/// {(1,0), (1/2, √3/2)} so all coefficients stay in ℚ(√5).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embed2 {
    pub x: GoldenNumber,
    pub y: GoldenNumber,
}

impl Embed2 {
    /// Raw line coordinates of the point in the three U families;
    /// f = (x, y, −x−y) in this basis.
    pub fn f_raw(&self) -> [GoldenNumber; 3] {
        [self.x.clone(), self.y.clone(), -(&self.x + &self.y)]
    }

    /// Euclidean coordinates, for rendering.
    pub fn to_xy_f64(&self) -> (f64, f64) {
        let a = self.x.to_f64();
        let b = self.y.to_f64();
        (a + b / 2.0, b * 3f64.sqrt() / 2.0)
    }

    /// The unit triangle of U containing this point, as long as the point
    /// lies strictly inside one (errors on edge incidence).
    pub fn containing_triangle(&self) -> Result<TriangleAddr, Error> {
        let f = self.f_raw();
        let mut raw = [0i64; 3];
        for k in 0..3 {
            if f[k].fract().is_zero() {
                return Err(Error::DegenerateParameter(format!(
                    "point on a family-{k} grid line"
                )));
            }
            raw[k] = f[k]
                .floor()
                .to_i64()
                .ok_or_else(|| Error::Inconsistency("embed coordinate overflow".into()))?;
        }
        TriangleAddr::from_raw(raw)
    }
}

/// Dual lattice vectors of the three U line families in the hexagonal
/// basis: f_i(g_j) = δ_ij − 1/3 and g₀+g₁+g₂ = 0.
fn g_basis() -> [[BigRational; 2]; 3] {
    let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    [
        [r(2, 3), r(-1, 3)],
        [r(-1, 3), r(2, 3)],
        [r(-1, 3), r(-1, 3)],
    ]
}

/// Exact embedding of a T-vertex into U's plane.
///
/// The embedded lattice has edge length 2φ for unit U triangles and is
/// rotated by ±α with tan α = √3/(3+2Φ); both fall out of the identity
/// E(v) = Σ_k n_k (g_k − φ² g_{k∓1}) + τ with f_j(τ) = d_{j±1}, which
/// also pins the translation making every embedded vertex land strictly
/// inside the centre triangle of its hat.
pub fn embed_t(v: VertexId, p: &FibParams, chirality: Roles) -> Embed2 {
    let n = v.lines();
    let g = g_basis();
    let phi2 = GoldenNumber::phi_pow(2);
    let mut x = GoldenNumber::zero();
    let mut y = GoldenNumber::zero();
    for k in 0..3 {
        let other = match chirality {
            Roles::Standard => (k + 2) % 3, // g_{k−1}
            Roles::Mirrored => (k + 1) % 3, // g_{k+1}
        };
        let nk = GoldenNumber::from_int(n[k]);
        x += &(&nk * &(GoldenNumber::from_rational(g[k][0].clone())
            - &phi2 * &GoldenNumber::from_rational(g[other][0].clone())));
        y += &(&nk * &(GoldenNumber::from_rational(g[k][1].clone())
            - &phi2 * &GoldenNumber::from_rational(g[other][1].clone())));
    }
    for j in 0..3 {
        let dk = match chirality {
            Roles::Standard => p.d(j + 1),
            Roles::Mirrored => p.d(j + 2),
        };
        x += &(dk * &GoldenNumber::from_rational(g[j][0].clone()));
        y += &(dk * &GoldenNumber::from_rational(g[j][1].clone()));
    }
    Embed2 { x, y }
}

/// Exact embedding for the 10-kite tiling: pure scaling by 2 − φ, no
/// rotation relative to U.
pub fn embed_t_tenkite(v: VertexId, p: &FibParams) -> Embed2 {
    let n = v.lines();
    let g = g_basis();
    let scale = GoldenNumber::from_int(2) - GoldenNumber::phi();
    let mut x = GoldenNumber::zero();
    let mut y = GoldenNumber::zero();
    for k in 0..3 {
        let c = GoldenNumber::from_int(n[k]) * &scale;
        x += &(&c * &GoldenNumber::from_rational(g[k][0].clone()));
        y += &(&c * &GoldenNumber::from_rational(g[k][1].clone()));
    }
    for j in 0..3 {
        let dk = -p.d(j);
        x += &(&dk * &GoldenNumber::from_rational(g[j][0].clone()));
        y += &(&dk * &GoldenNumber::from_rational(g[j][1].clone()));
    }
    Embed2 { x, y }
}
