//! Tiling serialization (JSON) and SVG rendering.
//!
//! The JSON document keeps every exact quantity as a rational string and
//! fixes the field order through the struct definitions, so identical
//! configurations serialize to byte-identical output.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::assemble::{centre_line_colours, Chirality, HatTile, TileKind, Tiling};
use crate::classify::HatType;
use crate::exactnum::{parse_rational, GoldenNumber};
use crate::fibline::FibParams;
use crate::orient::Orientation;
use crate::trigrid::{KiteAddr, LatticePoint, TriangleAddr};
use crate::{Error, Roles};

/// Top-level JSON document for a tiling.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TilingDoc {
    pub params: ParamsDoc,
    pub mode: TileKind,
    pub roles: Roles,
    pub window: WindowDoc,
    pub tiles: Vec<TileDoc>,
}

/// The three line offsets as exact rational strings (d2 = −d0 − d1).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ParamsDoc {
    pub d0: String,
    pub d1: String,
    pub d2: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WindowDoc {
    pub radius: i64,
    pub interior: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TileDoc {
    pub chirality: Chirality,
    #[serde(rename = "type")]
    pub hat_type: HatType,
    pub orientation: Orientation,
    pub centre: [i64; 3],
    /// Kites as [t0, t1, t2, corner].
    pub kites: Vec<[i64; 4]>,
}

fn rational_string(g: &GoldenNumber) -> Result<String, Error> {
    if !g.r().is_zero() {
        return Err(Error::Inconsistency(format!(
            "parameter {g:?} is not rational"
        )));
    }
    Ok(g.q().to_string())
}

/// Convert a tiling to its JSON document form.
pub fn to_document(t: &Tiling) -> Result<TilingDoc, Error> {
    Ok(TilingDoc {
        params: ParamsDoc {
            d0: rational_string(t.params.d(0))?,
            d1: rational_string(t.params.d(1))?,
            d2: rational_string(t.params.d(2))?,
        },
        mode: t.kind,
        roles: t.roles,
        window: WindowDoc {
            radius: t.radius,
            interior: t.interior_radius,
        },
        tiles: t
            .tiles
            .iter()
            .map(|tile| TileDoc {
                chirality: tile.chirality,
                hat_type: tile.hat_type,
                orientation: tile.orientation,
                centre: tile.centre.t,
                kites: tile
                    .kites
                    .iter()
                    .map(|k| {
                        [
                            k.triangle.t[0],
                            k.triangle.t[1],
                            k.triangle.t[2],
                            k.corner as i64,
                        ]
                    })
                    .collect(),
            })
            .collect(),
    })
}

/// Rebuild an in-memory tiling from a document, re-validating every
/// triangle address on the way in.
pub fn from_document(doc: &TilingDoc) -> Result<Tiling, Error> {
    let d0 = GoldenNumber::from_rational(parse_rational(&doc.params.d0)?);
    let d1 = GoldenNumber::from_rational(parse_rational(&doc.params.d1)?);
    let d2 = GoldenNumber::from_rational(parse_rational(&doc.params.d2)?);
    let params = FibParams::from_triple([d0, d1, d2])?;
    let mut tiles = Vec::with_capacity(doc.tiles.len());
    for td in &doc.tiles {
        let centre = TriangleAddr::new(td.centre)?;
        let mut kites = Vec::with_capacity(td.kites.len());
        for k in &td.kites {
            if !(0..3).contains(&k[3]) {
                return Err(Error::Parse(format!("kite corner {} out of range", k[3])));
            }
            kites.push(KiteAddr::new(
                TriangleAddr::new([k[0], k[1], k[2]])?,
                k[3] as u8,
            ));
        }
        tiles.push(HatTile {
            chirality: td.chirality,
            hat_type: td.hat_type,
            orientation: td.orientation,
            centre,
            kites,
        });
    }
    Ok(Tiling {
        params,
        kind: doc.mode,
        roles: doc.roles,
        radius: doc.window.radius,
        interior_radius: doc.window.interior,
        tiles,
    })
}

/// Serialize a tiling to its canonical JSON text.
pub fn write_json(t: &Tiling) -> Result<String, Error> {
    let doc = to_document(t)?;
    let mut s = serde_json::to_string_pretty(&doc)?;
    s.push('\n');
    Ok(s)
}

/// Parse the canonical JSON text back into a tiling.
pub fn read_json(text: &str) -> Result<Tiling, Error> {
    let doc: TilingDoc = serde_json::from_str(text)?;
    from_document(&doc)
}

/// Fill assignment for SVG output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Colouring {
    ByType,
    ByOrientation,
}

const SCALE: f64 = 100.0;
const SQRT3: f64 = 1.732_050_807_568_877_2;

fn lattice_xy(p: LatticePoint) -> (f64, f64) {
    // Hexagonal basis {(1,0), (1/2, √3/2)}, y negated for SVG's
    // downward axis.
    let x = p.p as f64 + p.q as f64 / 2.0;
    let y = p.q as f64 * SQRT3 / 2.0;
    (x * SCALE, -y * SCALE)
}

fn mid(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0)
}

/// The quadrilateral of one kite: triangle corner, the two adjacent edge
/// midpoints, and the triangle centroid.
fn kite_polygon(k: &KiteAddr) -> [(f64, f64); 4] {
    let ps = k.triangle.corners().map(lattice_xy);
    let c = k.corner as usize;
    let centroid = (
        (ps[0].0 + ps[1].0 + ps[2].0) / 3.0,
        (ps[0].1 + ps[1].1 + ps[2].1) / 3.0,
    );
    [
        ps[c],
        mid(ps[c], ps[(c + 1) % 3]),
        centroid,
        mid(ps[c], ps[(c + 2) % 3]),
    ]
}

fn type_fill(t: HatType) -> &'static str {
    match t {
        HatType::Lightblue => "#8ecae6",
        HatType::Grey => "#b8b8b8",
        HatType::WhitePair => "#f4f4f4",
        HatType::WhiteIsolated => "#ffe9a8",
        HatType::Flipped => "#1d3557",
    }
}

fn orientation_fill(corner: u8) -> &'static str {
    // One fill per colour class; orientations differing by π share a
    // class, so they share a fill automatically.
    match corner {
        0 => "#e63946",
        1 => "#2a9d8f",
        _ => "#f4a261",
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.2}")
}

/// Render a tiling as an SVG drawing: one path per tile tracing its kite
/// outlines, filled by the requested colouring. With `decoration` set the
/// 10-kite centre-line segments are drawn on top, coloured by the
/// chirality of the tiles the line passes through.
pub fn render_svg(t: &Tiling, colouring: Colouring, decoration: bool) -> Result<String, Error> {
    if decoration && t.kind != TileKind::TenKite {
        return Err(Error::Inconsistency(
            "centre-line decoration is defined only for the 10-kite tiling".into(),
        ));
    }

    let mut min = (f64::INFINITY, f64::INFINITY);
    let mut max = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut paths = String::new();
    for tile in &t.tiles {
        let mut d = String::new();
        for k in &tile.kites {
            let poly = kite_polygon(k);
            for (i, p) in poly.iter().enumerate() {
                min = (min.0.min(p.0), min.1.min(p.1));
                max = (max.0.max(p.0), max.1.max(p.1));
                let cmd = if i == 0 { 'M' } else { 'L' };
                d.push_str(&format!("{cmd}{} {} ", fmt(p.0), fmt(p.1)));
            }
            d.push_str("Z ");
        }
        let fill = match colouring {
            Colouring::ByType => type_fill(tile.hat_type),
            Colouring::ByOrientation => orientation_fill(tile.orientation.corner),
        };
        paths.push_str(&format!(
            "<path d=\"{}\" fill=\"{fill}\" stroke=\"#333333\" stroke-width=\"1\"/>\n",
            d.trim_end()
        ));
    }

    if decoration {
        let lines = centre_line_colours(t)?;
        for tile in &t.tiles {
            for k in &tile.kites {
                let c = k.corner as usize;
                let Some(&chir) = lines.get(&(k.corner, k.triangle.t[c])) else {
                    continue;
                };
                let ps = k.triangle.corners().map(lattice_xy);
                let a = mid(ps[c], ps[(c + 1) % 3]);
                let b = mid(ps[c], ps[(c + 2) % 3]);
                let stroke = match chir {
                    Chirality::Unflipped => "#1f77b4",
                    Chirality::Flipped => "#d62728",
                };
                paths.push_str(&format!(
                    "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" \
                     stroke=\"{stroke}\" stroke-width=\"4\" stroke-linecap=\"round\"/>\n",
                    fmt(a.0),
                    fmt(a.1),
                    fmt(b.0),
                    fmt(b.1)
                ));
            }
        }
    }

    if t.tiles.is_empty() {
        min = (0.0, 0.0);
        max = (0.0, 0.0);
    }
    let pad = 10.0;
    let (w, h) = (max.0 - min.0 + 2.0 * pad, max.1 - min.1 + 2.0 * pad);
    Ok(format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n{paths}</svg>\n",
        fmt(min.0 - pad),
        fmt(min.1 - pad),
        fmt(w),
        fmt(h)
    ))
}
