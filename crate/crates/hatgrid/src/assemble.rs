//! Kite-level tile assembly: 8-kite hats, the 10-kite tile, flipped-hat
//! insertion and the exact coverage verifier.
//!
//! A hat is its centre triangle's three kites, one kite cyclically
//! attached in each edge-neighbouring triangle (the 2π/3-symmetric
//! 6-kite core), and two extra kites in the ring around one centre
//! corner. The attachment constants below are frozen by the only
//! certificate that matters: exact once-and-only-once coverage of the
//! interior kites.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::classify::HatType;
use crate::fibline::FibParams;
use crate::orient::Orientation;
use crate::trigrid::{kite_ring, KiteAddr, Pointing, TriangleAddr, VertexId};
use crate::{Error, Roles};

/// Which tile family a tiling is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TileKind {
    Hat8,
    TenKite,
}

/// Handedness of a single tile.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chirality {
    Unflipped,
    Flipped,
}

/// Geometric handedness of a tile's kite template. The standard tiling's
/// unflipped hats are right-handed; mirroring the tiling or flipping a
/// hat swaps hands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Hand {
    Right,
    Left,
}

pub(crate) fn hand_of(chirality: Chirality, roles: Roles) -> Hand {
    match (roles, chirality) {
        (Roles::Standard, Chirality::Unflipped) | (Roles::Mirrored, Chirality::Flipped) => {
            Hand::Right
        }
        _ => Hand::Left,
    }
}

/// Frozen attachment constants of the right-handed 8-kite template,
/// certified by exact coverage (see the calibration test in orient).
/// All positions are counter-clockwise ring offsets from the
/// centre-triangle kite in the kite ring around a centre corner.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct TemplateConfig {
    /// ring offset of the cyclically attached core kite at each corner
    pub core_offset: usize,
    /// ring offsets of the two extra kites at the orientation corner
    pub extra_offsets: [usize; 2],
}

pub(crate) const TEMPLATE: TemplateConfig = TemplateConfig {
    core_offset: 5,
    extra_offsets: [1, 4],
};

/// Kite at a given counter-clockwise ring offset from the centre kite
/// in the ring around centre corner `corner`.
fn ring_kite(centre: TriangleAddr, corner: u8, offset: usize) -> KiteAddr {
    let v = centre.corner(corner);
    let ring = kite_ring(v);
    let p0 = ring
        .iter()
        .position(|k| *k == KiteAddr::new(centre, corner))
        .expect("centre kite in its corner ring");
    ring[(p0 + offset) % 6]
}

/// The 6-kite core of a hat: the centre triangle's three kites plus one
/// kite cyclically attached at each corner.
pub(crate) fn core6_with(centre: TriangleAddr, cfg: &TemplateConfig, hand: Hand) -> [KiteAddr; 6] {
    match hand {
        Hand::Right => {
            let mut out = [KiteAddr::new(centre, 0); 6];
            for c in 0..3u8 {
                out[c as usize] = KiteAddr::new(centre, c);
                out[3 + c as usize] = ring_kite(centre, c, cfg.core_offset);
            }
            out
        }
        Hand::Left => core6_with(centre.mirrored(), cfg, Hand::Right).map(|k| k.mirrored()),
    }
}

/// The two extra kites a hat places at centre corner `corner`.
pub(crate) fn extra_kites_with(
    centre: TriangleAddr,
    corner: u8,
    cfg: &TemplateConfig,
    hand: Hand,
) -> [KiteAddr; 2] {
    match hand {
        Hand::Right => cfg.extra_offsets.map(|o| ring_kite(centre, corner, o)),
        Hand::Left => {
            extra_kites_with(centre.mirrored(), mirror_corner(corner), cfg, Hand::Right)
                .map(|k| k.mirrored())
        }
    }
}

pub(crate) fn mirror_corner(corner: u8) -> u8 {
    match corner {
        0 => 0,
        1 => 2,
        _ => 1,
    }
}

/// 2π/3-symmetric 6-kite core of an unflipped standard-roles hat.
pub fn assemble_core6(centre: TriangleAddr) -> [KiteAddr; 6] {
    core6_with(centre, &TEMPLATE, Hand::Right)
}

/// All 8 kites of a hat.
pub fn assemble_hat(
    centre: TriangleAddr,
    o: Orientation,
    chirality: Chirality,
    roles: Roles,
) -> Vec<KiteAddr> {
    let hand = hand_of(chirality, roles);
    let mut kites: Vec<KiteAddr> = core6_with(centre, &TEMPLATE, hand).to_vec();
    kites.extend(extra_kites_with(centre, o.corner, &TEMPLATE, hand));
    kites
}

/// Inserts the flipped hats of a window: one per unused triangle whose
/// corners touch the centre triangles of three mutually adjacent
/// lightblue hats, oriented by the lightblue colour triple around it.
/// Flipped hats near the window boundary whose lightblue neighbours
/// fall outside the window are skipped; they never reach the interior
/// verification region.
pub fn place_flipped(
    window: &[VertexId],
    types: &HashMap<VertexId, HatType>,
    centres: &HashMap<VertexId, TriangleAddr>,
    colours: &HashMap<VertexId, u8>,
    kind: TileKind,
    roles: Roles,
) -> Result<Vec<HatTile>, Error> {
    let lightblue: HashMap<TriangleAddr, VertexId> = window
        .iter()
        .filter(|v| types.get(v) == Some(&HatType::Lightblue))
        .map(|&v| (centres[&v], v))
        .collect();
    let mut tiles = Vec::new();
    for t in crate::orient::flipped_centre_triangles(window, types, centres) {
        let mut cols = [u8::MAX; 3];
        for (i, corner) in t.corners().into_iter().enumerate() {
            for (tri, _) in corner.triangles() {
                if let Some(&v) = lightblue.get(&tri) {
                    cols[i] = colours[&v];
                }
            }
        }
        if cols.contains(&u8::MAX) {
            continue;
        }
        let o = Orientation {
            corner: crate::orient::flipped_corner(cols, roles)?,
            pointing: t.pointing(),
        };
        tiles.push(HatTile {
            chirality: Chirality::Flipped,
            hat_type: HatType::Flipped,
            orientation: o,
            centre: t,
            kites: match kind {
                TileKind::Hat8 => assemble_hat(t, o, Chirality::Flipped, roles),
                TileKind::TenKite => assemble_tenkite(t, o, Chirality::Flipped, roles),
            },
        });
    }
    Ok(tiles)
}

/// Full construction pipeline: enumerate window vertices, index them,
/// classify hat types from the pattern, resolve orientations with the
/// fractal resolver, assemble all unflipped tiles, insert flipped hats
/// and verify exact interior coverage.
pub fn generate(p: &FibParams, radius: i64, kind: TileKind, roles: Roles) -> Result<Tiling, Error> {
    use crate::realise::{centre_index, CentreMode};
    let window = crate::trigrid::enumerate_window(radius);
    let mode = match (kind, roles) {
        (TileKind::Hat8, Roles::Standard) => CentreMode::Standard,
        (TileKind::Hat8, Roles::Mirrored) => CentreMode::Mirrored,
        (TileKind::TenKite, _) => CentreMode::TenKite,
    };
    let mut types = HashMap::new();
    let mut centres = HashMap::new();
    let mut colours = HashMap::new();
    let mut tiles = Vec::new();
    for &v in &window {
        let pt = crate::classify::pattern_point(v, p)?;
        let ty = crate::classify::hat_type_for_roles(&pt, roles)?;
        let centre = centre_index(&crate::trigrid::index6(v, p)?, mode)?;
        let corner = crate::orient::fractal_orient(&pt, roles)?;
        let o = Orientation {
            corner,
            pointing: centre.pointing(),
        };
        let kites = match kind {
            TileKind::Hat8 => assemble_hat(centre, o, Chirality::Unflipped, roles),
            TileKind::TenKite => assemble_tenkite(centre, o, Chirality::Unflipped, roles),
        };
        tiles.push(HatTile {
            chirality: Chirality::Unflipped,
            hat_type: ty,
            orientation: o,
            centre,
            kites,
        });
        types.insert(v, ty);
        centres.insert(v, centre);
        colours.insert(v, corner);
    }
    tiles.extend(place_flipped(&window, &types, &centres, &colours, kind, roles)?);
    let tiling = Tiling {
        params: p.clone(),
        kind,
        roles,
        radius,
        interior_radius: radius - INTERIOR_MARGIN,
        tiles,
    };
    let report = verify(&tiling);
    if !report.is_clean() {
        return Err(Error::VerificationFailed(format!(
            "{} kites missing, {} double-covered",
            report.missing.len(),
            report.double_covered.len()
        )));
    }
    Ok(tiling)
}

/// Boundary-incomplete tiles reference kites outside the window; the
/// verified interior stops this many lattice units short of the rim.
pub const INTERIOR_MARGIN: i64 = 4;

/// One kite of the 10-kite template, as a triangle offset from the
/// centre (in the triangular-lattice coordinate difference) plus a
/// corner label. Down-pointing centres use the point-reflected offsets;
/// rotating the tile cycles the offset coordinates and corner labels.
type TenDesc = ([i64; 3], u8);

/// Frozen right-handed 10-kite template at orientation corner 0,
/// certified by exact coverage: the centre triangle, the three
/// 2π/3-symmetric kites around it, the rest of the second complete
/// triangle and the two remaining kites. The unique connected
/// conflict-free 10-descriptor set over radius-8 windows.
const TENKITE_TEMPLATE: [TenDesc; 10] = [
    ([0, 0, 0], 0),
    ([0, 0, 0], 1),
    ([0, 0, 0], 2),
    ([0, -1, 0], 2),
    ([0, 0, -1], 0),
    ([-1, 0, 0], 1),
    ([-1, 0, 0], 0),
    ([-1, 0, 0], 2),
    ([-1, 1, 0], 0),
    ([-1, 1, 0], 2),
];

fn tenkite_right(centre: TriangleAddr, corner0: u8) -> Vec<KiteAddr> {
    TENKITE_TEMPLATE
        .iter()
        .map(|&(delta, c)| {
            let mut d = delta;
            for _ in 0..corner0 {
                d = [d[2], d[0], d[1]];
            }
            if centre.pointing() == Pointing::Down {
                d = [-d[0], -d[1], -d[2]];
            }
            let t = [centre.t[0] + d[0], centre.t[1] + d[1], centre.t[2] + d[2]];
            KiteAddr::new(
                TriangleAddr::new(t).expect("template offsets preserve the pointing classes"),
                (c + corner0) % 3,
            )
        })
        .collect()
}

/// All 10 kites of a 10-kite tile. The flipped tile's kites anchor one
/// corner step away from the colour the lightblue-triple rule names
/// (one step forward for standard roles, backward for mirrored).
pub fn assemble_tenkite(
    centre: TriangleAddr,
    o: Orientation,
    chirality: Chirality,
    roles: Roles,
) -> Vec<KiteAddr> {
    let corner0 = match (chirality, roles) {
        (Chirality::Unflipped, _) => o.corner,
        (Chirality::Flipped, Roles::Standard) => (o.corner + 1) % 3,
        (Chirality::Flipped, Roles::Mirrored) => (o.corner + 2) % 3,
    };
    match hand_of(chirality, roles) {
        Hand::Right => tenkite_right(centre, corner0),
        Hand::Left => tenkite_right(centre.mirrored(), mirror_corner(corner0))
            .into_iter()
            .map(|k| k.mirrored())
            .collect(),
    }
}

/// Colour of every centre line of U touched by the tiling, keyed by
/// (line family, coordinate). The centre line f_k = m + ½ crosses the
/// triangles with t_k = m; all tile centre triangles it crosses share
/// one chirality, which is the line's colour.
pub fn centre_line_colours(t: &Tiling) -> Result<HashMap<(u8, i64), Chirality>, Error> {
    let mut map = HashMap::new();
    for tile in &t.tiles {
        for k in 0..3u8 {
            let key = (k, tile.centre.t[k as usize]);
            if let Some(prev) = map.insert(key, tile.chirality) {
                if prev != tile.chirality {
                    return Err(Error::Inconsistency(format!(
                        "centre line {key:?} crosses centres of both chiralities"
                    )));
                }
            }
        }
    }
    Ok(map)
}

/// Per-tile centre-line decorations, normalized by listing the line
/// colours in the tile's template kite order. A centre line crosses
/// exactly one kite per triangle it passes — the kite whose corner
/// label equals the line family — so each kite carries one colour.
///
/// Returns the common pattern of the unflipped tiles and of the flipped
/// tiles, after checking that every fully-decorated tile of a chirality
/// shows the same pattern and that the flipped pattern is the unflipped
/// one with the two colours exchanged.
pub fn decoration_patterns(t: &Tiling) -> Result<(Vec<Chirality>, Vec<Chirality>), Error> {
    let lines = centre_line_colours(t)?;
    let mut patterns: [Option<Vec<Chirality>>; 2] = [None, None];
    for tile in &t.tiles {
        let mut pat = Vec::with_capacity(tile.kites.len());
        for k in &tile.kites {
            match lines.get(&(k.corner, k.triangle.t[k.corner as usize])) {
                Some(&c) => pat.push(c),
                None => break,
            }
        }
        if pat.len() != tile.kites.len() {
            continue; // tile touches lines that cross no centre in the window
        }
        let slot = &mut patterns[(tile.chirality == Chirality::Flipped) as usize];
        match slot {
            None => *slot = Some(pat),
            Some(p) => {
                if *p != pat {
                    return Err(Error::Inconsistency(format!(
                        "decoration differs between {:?} tiles",
                        tile.chirality
                    )));
                }
            }
        }
    }
    let unflipped = patterns[0]
        .take()
        .ok_or_else(|| Error::Inconsistency("no decorated unflipped tile".into()))?;
    let flipped = patterns[1]
        .take()
        .ok_or_else(|| Error::Inconsistency("no decorated flipped tile".into()))?;
    let swapped: Vec<Chirality> = unflipped
        .iter()
        .map(|c| match c {
            Chirality::Unflipped => Chirality::Flipped,
            Chirality::Flipped => Chirality::Unflipped,
        })
        .collect();
    if flipped != swapped {
        return Err(Error::Inconsistency(
            "flipped decoration is not the colour-swapped unflipped one".into(),
        ));
    }
    Ok((unflipped, flipped))
}

/// One placed tile.
#[derive(Clone, Debug)]
pub struct HatTile {
    pub chirality: Chirality,
    pub hat_type: HatType,
    pub orientation: Orientation,
    pub centre: TriangleAddr,
    pub kites: Vec<KiteAddr>,
}

/// A generated, verified tiling patch.
#[derive(Clone, Debug)]
pub struct Tiling {
    pub params: FibParams,
    pub kind: TileKind,
    pub roles: Roles,
    pub radius: i64,
    pub interior_radius: i64,
    pub tiles: Vec<HatTile>,
}

/// Coverage report over the interior kites.
#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub missing: Vec<KiteAddr>,
    pub double_covered: Vec<KiteAddr>,
    pub counts_by_type: HashMap<HatType, usize>,
}

impl VerifyReport {
    pub fn is_clean(&self) -> bool {
        self.missing.is_empty() && self.double_covered.is_empty()
    }
}

/// Exact set-arithmetic verification of a tiling patch.
pub fn verify(t: &Tiling) -> VerifyReport {
    let mut cover: HashMap<KiteAddr, usize> = HashMap::new();
    let mut counts: HashMap<HatType, usize> = HashMap::new();
    for tile in &t.tiles {
        *counts.entry(tile.hat_type).or_default() += 1;
        for k in &tile.kites {
            *cover.entry(*k).or_default() += 1;
        }
    }
    let mut report = VerifyReport {
        counts_by_type: counts,
        ..Default::default()
    };
    for tri in interior_triangles(t.interior_radius) {
        for c in 0..3u8 {
            let k = KiteAddr::new(tri, c);
            match cover.get(&k).copied().unwrap_or(0) {
                0 => report.missing.push(k),
                1 => {}
                _ => report.double_covered.push(k),
            }
        }
    }
    report.missing.sort();
    report.double_covered.sort();
    report
}

/// Unit triangles forming the interior verification region.
pub fn interior_triangles(interior_radius: i64) -> Vec<TriangleAddr> {
    let r = interior_radius;
    let mut out = Vec::new();
    for t0 in -r..=r {
        for t1 in -r..=r {
            for raw_sum in [-1i64, -2] {
                let t2 = raw_sum - t0 - t1;
                if t2.abs() > r {
                    continue;
                }
                out.push(
                    TriangleAddr::from_raw([t0, t1, t2]).expect("raw sums -1/-2 are triangles"),
                );
            }
        }
    }
    out
}

/// Whether a triangle lies in the interior region.
pub fn triangle_in_interior(t: TriangleAddr, interior_radius: i64) -> bool {
    t.norm() <= interior_radius
}

/// Whether a vertex is inside the interior region of a window.
pub fn vertex_in_interior(v: VertexId, interior_radius: i64) -> bool {
    v.norm() <= interior_radius
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trigrid::Pointing;

    #[test]
    fn tenkite_template_calibration_is_unique() {
        use crate::exactnum::GoldenNumber;
        use crate::realise::{centre_index, CentreMode};
        use std::collections::HashSet;

        type Desc = ([i64; 3], u8);
        fn rot(d: [i64; 3]) -> [i64; 3] {
            [d[2], d[0], d[1]]
        }
        fn rot_n(mut d: [i64; 3], n: u8) -> [i64; 3] {
            for _ in 0..n {
                d = rot(d);
            }
            d
        }
        fn instantiate(centre: TriangleAddr, n: u8, desc: Desc) -> Option<KiteAddr> {
            let (delta, c) = desc;
            let mut d = rot_n(delta, n);
            if centre.pointing() == Pointing::Down {
                d = [-d[0], -d[1], -d[2]];
            }
            let t = [centre.t[0] + d[0], centre.t[1] + d[1], centre.t[2] + d[2]];
            TriangleAddr::new(t)
                .ok()
                .map(|t| KiteAddr::new(t, (c + n) % 3))
        }

        let p = FibParams::new(
            GoldenNumber::make(1, 5, 0, 1).unwrap(),
            GoldenNumber::make(1, 7, 0, 1).unwrap(),
        )
        .unwrap();
        let radius = 8i64;
        let window = crate::trigrid::enumerate_window(radius);
        let mut data = Vec::new();
        for &v in &window {
            let pt = crate::classify::pattern_point(v, &p).unwrap();
            let centre =
                centre_index(&crate::trigrid::index6(v, &p).unwrap(), CentreMode::TenKite).unwrap();
            let colour = crate::orient::fractal_orient(&pt, Roles::Standard).unwrap();
            data.push((v, centre, colour));
        }

        // descriptor space: |delta_i| <= 2, sum 0 (same pointing) or -1
        let mut descs: Vec<Desc> = Vec::new();
        for d0 in -2i64..=2 {
            for d1 in -2i64..=2 {
                for sum in [0i64, -1] {
                    let d2 = sum - d0 - d1;
                    if d2.abs() > 2 {
                        continue;
                    }
                    for c in 0..3u8 {
                        descs.push(([d0, d1, d2], c));
                    }
                }
            }
        }
        let centre_descs: Vec<usize> = (0..3u8)
            .map(|c| descs.iter().position(|&d| d == ([0, 0, 0], c)).unwrap())
            .collect();

        // canonical kites for adjacency between descriptors
        let up0 = TriangleAddr::new([0, 1, 0]).unwrap();
        let canon: Vec<KiteAddr> = descs
            .iter()
            .map(|&d| instantiate(up0, 0, d).unwrap())
            .collect();
        let kite_nbs = |k: KiteAddr| -> Vec<KiteAddr> {
            let mut nbs: Vec<KiteAddr> = (0..3u8)
                .filter(|&c| c != k.corner)
                .map(|c| KiteAddr::new(k.triangle, c))
                .collect();
            let v = k.triangle.corner(k.corner);
            let ring = kite_ring(v);
            let pth = ring.iter().position(|x| *x == k).unwrap();
            nbs.push(ring[(pth + 1) % 6]);
            nbs.push(ring[(pth + 5) % 6]);
            nbs
        };
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); descs.len()];
        {
            let pos: HashMap<KiteAddr, usize> =
                canon.iter().enumerate().map(|(i, &k)| (k, i)).collect();
            for (i, &k) in canon.iter().enumerate() {
                for nb in kite_nbs(k) {
                    if let Some(&j) = pos.get(&nb) {
                        adj[i].push(j);
                    }
                }
            }
        }

        for mode in 0..2u8 {
            // conflicts from data
            let mut cover: HashMap<KiteAddr, Vec<usize>> = HashMap::new();
            for &(_, c, col) in &data {
                let n = if mode == 0 { col } else { mirror_corner(col) };
                for (i, &d) in descs.iter().enumerate() {
                    if let Some(k) = instantiate(c, n, d) {
                        cover.entry(k).or_default().push(i);
                    }
                }
            }
            let nd = descs.len();
            let mut selfbad = vec![false; nd];
            let mut conf = vec![false; nd * nd];
            for cands in cover.values() {
                for (x, &a) in cands.iter().enumerate() {
                    for &b in &cands[x + 1..] {
                        if a == b {
                            selfbad[a] = true;
                        } else {
                            conf[a * nd + b] = true;
                            conf[b * nd + a] = true;
                        }
                    }
                }
            }
            // duplicates in cands list with same desc index mean self-conflict;
            // handled above since equal indices can repeat
            if centre_descs.iter().any(|&d| selfbad[d]) {
                continue;
            }
            let mut results: Vec<Vec<usize>> = Vec::new();
            // connected-set enumeration with forbidden-set dedup
            struct Ctx<'a> {
                adj: &'a [Vec<usize>],
                conf: &'a [bool],
                selfbad: &'a [bool],
                nd: usize,
                results: &'a mut Vec<Vec<usize>>,
            }
            fn extend(
                ctx: &mut Ctx,
                s: &mut Vec<usize>,
                in_s: &mut Vec<bool>,
                frontier: &mut Vec<usize>,
                forbidden: &mut Vec<bool>,
            ) {
                if s.len() == 10 {
                    ctx.results.push(s.clone());
                    return;
                }
                if ctx.results.len() > 200000 {
                    return;
                }
                let cands: Vec<usize> = frontier
                    .iter()
                    .copied()
                    .filter(|&d| {
                        !in_s[d]
                            && !forbidden[d]
                            && !ctx.selfbad[d]
                            && s.iter().all(|&e| !ctx.conf[e * ctx.nd + d])
                    })
                    .collect::<HashSet<_>>()
                    .into_iter()
                    .collect();
                let mut local: Vec<usize> = Vec::new();
                for &c in &cands {
                    if forbidden[c] {
                        continue;
                    }
                    s.push(c);
                    in_s[c] = true;
                    let flen = frontier.len();
                    for &nb in &ctx.adj[c] {
                        frontier.push(nb);
                    }
                    extend(ctx, s, in_s, frontier, forbidden);
                    frontier.truncate(flen);
                    in_s[c] = false;
                    s.pop();
                    forbidden[c] = true;
                    local.push(c);
                }
                for c in local {
                    forbidden[c] = false;
                }
            }
            let mut s = centre_descs.clone();
            let mut in_s = vec![false; nd];
            for &d in &s {
                in_s[d] = true;
            }
            let mut frontier: Vec<usize> = Vec::new();
            for &d in &s {
                frontier.extend(adj[d].iter().copied());
            }
            let mut forbidden = vec![false; nd];
            // centre descs must not conflict with each other
            let mut ctx = Ctx {
                adj: &adj,
                conf: &conf,
                selfbad: &selfbad,
                nd,
                results: &mut results,
            };
            extend(&mut ctx, &mut s, &mut in_s, &mut frontier, &mut forbidden);

            // certify candidates
            let interior = radius - 4;
            let mut passes = 0usize;
            for cand in &results {
                let tset: Vec<Desc> = cand.iter().map(|&i| descs[i]).collect();
                let mut counts: HashMap<KiteAddr, u32> = HashMap::new();
                let mut ok = true;
                'tiles: for &(_, c, col) in &data {
                    let n = if mode == 0 { col } else { mirror_corner(col) };
                    for &d in &tset {
                        match instantiate(c, n, d) {
                            Some(k) => {
                                let e = counts.entry(k).or_default();
                                *e += 1;
                                if *e > 1 {
                                    ok = false;
                                    break 'tiles;
                                }
                            }
                            None => {
                                ok = false;
                                break 'tiles;
                            }
                        }
                    }
                }
                if !ok {
                    continue;
                }
                let mut uncovered: HashSet<KiteAddr> = HashSet::new();
                for tri in interior_triangles(interior) {
                    for c in 0..3u8 {
                        let k = KiteAddr::new(tri, c);
                        if !counts.contains_key(&k) {
                            uncovered.insert(k);
                        }
                    }
                }
                // flipped = mirrored template
                let mut matched: HashSet<KiteAddr> = HashSet::new();
                let mut flips = 0usize;
                let tris: HashSet<TriangleAddr> = uncovered.iter().map(|k| k.triangle).collect();
                for &t in &tris {
                    if (0..3u8).any(|c| !uncovered.contains(&KiteAddr::new(t, c))) {
                        continue;
                    }
                    'corners: for g in 0..3u8 {
                        let mut ks = Vec::new();
                        for &d in &tset {
                            match instantiate(t.mirrored(), mirror_corner(g), d) {
                                Some(k) => ks.push(k.mirrored()),
                                None => continue 'corners,
                            }
                        }
                        if ks.iter().all(|k| uncovered.contains(k) && !matched.contains(k)) {
                            for k in ks {
                                matched.insert(k);
                            }
                            flips += 1;
                            break;
                        }
                    }
                }
                let deep = interior - 2;
                if uncovered
                    .iter()
                    .filter(|k| k.triangle.norm() <= deep)
                    .all(|k| matched.contains(k))
                    && flips > 0
                {
                    passes += 1;
                    let mut show: Vec<Desc> = tset.clone();
                    show.sort();
                    let mut frozen: Vec<Desc> = TENKITE_TEMPLATE.to_vec();
                    frozen.sort();
                    assert_eq!(show, frozen, "certified template must be the frozen one");
                }
            }
            // the frozen template is the unique certified candidate, and
            // only under the direct colour-to-corner mapping
            match mode {
                0 => assert_eq!(passes, 1),
                _ => assert_eq!(passes, 0),
            }
        }
    }

    #[test]
    fn generate_tenkite_covers_interior_exactly() {
        use crate::exactnum::GoldenNumber;
        let p = FibParams::new(
            GoldenNumber::make(1, 5, 0, 1).unwrap(),
            GoldenNumber::make(1, 7, 0, 1).unwrap(),
        )
        .unwrap();
        for roles in [Roles::Standard, Roles::Mirrored] {
            let t = generate(&p, 12, TileKind::TenKite, roles).unwrap();
            let report = verify(&t);
            assert!(report.is_clean(), "{roles:?}");
            let fl = report.counts_by_type.get(&HatType::Flipped).copied().unwrap_or(0);
            assert!(fl > 0);
            for tile in &t.tiles {
                assert_eq!(tile.kites.len(), 10);
            }
        }
    }

    #[test]
    fn tenkite_decoration_is_invariant_and_colour_swapped() {
        use crate::exactnum::GoldenNumber;
        let p = FibParams::new(
            GoldenNumber::make(1, 5, 0, 1).unwrap(),
            GoldenNumber::make(1, 7, 0, 1).unwrap(),
        )
        .unwrap();
        for roles in [Roles::Standard, Roles::Mirrored] {
            let t = generate(&p, 15, TileKind::TenKite, roles).unwrap();
            let (un, fl) = decoration_patterns(&t).unwrap();
            assert_eq!(un.len(), 10);
            assert_ne!(un, fl);
            assert!(un.contains(&Chirality::Flipped), "both colours appear");
        }
    }

    #[test]
    fn generate_hat8_covers_interior_exactly() {
        use crate::exactnum::GoldenNumber;
        let p = FibParams::new(
            GoldenNumber::make(1, 5, 0, 1).unwrap(),
            GoldenNumber::make(1, 7, 0, 1).unwrap(),
        )
        .unwrap();
        for roles in [Roles::Standard, Roles::Mirrored] {
            let t = generate(&p, 12, TileKind::Hat8, roles).unwrap();
            let report = verify(&t);
            assert!(report.is_clean(), "{roles:?}: {:?}", (&report.missing.len(), &report.double_covered.len()));
            let lb = report.counts_by_type.get(&HatType::Lightblue).copied().unwrap_or(0);
            let fl = report.counts_by_type.get(&HatType::Flipped).copied().unwrap_or(0);
            assert!(lb > 0 && fl > 0);
        }
    }

    #[test]
    fn core_contains_centre_kites_and_is_equivariant() {
        let centre = TriangleAddr::new([0, 1, 0]).unwrap();
        let core = assemble_core6(centre);
        for c in 0..3u8 {
            assert!(core.contains(&KiteAddr::new(centre, c)));
        }
        // 2π/3 rotation about the centre cycles strip coordinates; the
        // template must commute with it
        let rot = |t: TriangleAddr| TriangleAddr::new([t.t[2], t.t[0], t.t[1]]).unwrap();
        let rot_kite = |k: KiteAddr| KiteAddr::new(rot(k.triangle), (k.corner + 1) % 3);
        let rotated_core = assemble_core6(rot(centre));
        for k in core {
            assert!(rotated_core.contains(&rot_kite(k)));
        }
    }

    #[test]
    fn hat_completions_differ_in_two_kites() {
        let centre = TriangleAddr::new([0, 0, 0]).unwrap();
        let mut sets = Vec::new();
        for corner in 0..3u8 {
            let o = Orientation {
                corner,
                pointing: Pointing::Down,
            };
            let kites = assemble_hat(centre, o, Chirality::Unflipped, Roles::Standard);
            assert_eq!(kites.len(), 8);
            let set: std::collections::HashSet<_> = kites.into_iter().collect();
            assert_eq!(set.len(), 8, "kites must be pairwise distinct");
            sets.push(set);
        }
        for i in 0..3 {
            for j in (i + 1)..3 {
                let shared = sets[i].intersection(&sets[j]).count();
                assert_eq!(shared, 6, "completions share exactly the core");
            }
        }
    }

    #[test]
    fn mirrored_roles_are_an_involution() {
        let centre = TriangleAddr::new([2, -1, 0]).unwrap();
        let o = Orientation {
            corner: 1,
            pointing: Pointing::Up,
        };
        let left = assemble_hat(centre, o, Chirality::Unflipped, Roles::Mirrored);
        let back: Vec<KiteAddr> = left.iter().map(|k| k.mirrored()).collect();
        let mo = Orientation {
            corner: mirror_corner(o.corner),
            pointing: o.pointing,
        };
        let right = assemble_hat(centre.mirrored(), mo, Chirality::Unflipped, Roles::Standard);
        let a: std::collections::HashSet<_> = back.into_iter().collect();
        let b: std::collections::HashSet<_> = right.into_iter().collect();
        assert_eq!(a, b);
    }

    #[test]
    fn interior_triangle_enumeration_counts() {
        // radius r: raw coordinates within |·| ≤ r, two sum classes
        let tris = interior_triangles(2);
        assert!(tris.iter().all(|t| t.norm() <= 2));
        let ups = tris.iter().filter(|t| t.pointing() == Pointing::Up).count();
        let downs = tris.len() - ups;
        assert!(ups > 0 && downs > 0);
        // no duplicates
        let set: std::collections::HashSet<_> = tris.iter().collect();
        assert_eq!(set.len(), tris.len());
    }
}
