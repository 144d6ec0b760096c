//! Projection-method labelling of one family of parallel grid lines:
//! Fibonacci indices a(n) = ⌊φn + d⌋, S/L gap labels, black/blue line
//! colours, and substitution utilities on S/L words.

use num_traits::ToPrimitive;
use std::fmt;

use crate::exactnum::GoldenNumber;
use crate::Error;

/// The offset parameters d₀, d₁, d₂, one per line direction.
///
/// Valid parameters satisfy d₀ + d₁ + d₂ = 0 exactly (so no vertex is
/// crossed by three black lines) and no d_k lies in ℤ + φℤ (so no grid
/// line passes through a lattice point of the projection square grid).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibParams {
    d: [GoldenNumber; 3],
}

impl FibParams {
    /// Builds parameters from d₀ and d₁; d₂ = −d₀ − d₁.
    pub fn new(d0: GoldenNumber, d1: GoldenNumber) -> Result<Self, Error> {
        let d2 = -(&d0 + &d1);
        Self::from_triple([d0, d1, d2])
    }

    /// Builds parameters from all three offsets, checking the zero sum.
    pub fn from_triple(d: [GoldenNumber; 3]) -> Result<Self, Error> {
        let sum = &d[0] + &d[1] + &d[2];
        if !sum.is_zero() {
            return Err(Error::DegenerateParameter(format!(
                "d0 + d1 + d2 = {sum}, expected 0"
            )));
        }
        for (k, dk) in d.iter().enumerate() {
            if dk.is_in_z_phi_z() {
                return Err(Error::DegenerateParameter(format!(
                    "d{k} = {dk} lies in Z + phi*Z"
                )));
            }
        }
        Ok(FibParams { d })
    }

    pub fn d(&self, k: usize) -> &GoldenNumber {
        &self.d[k % 3]
    }

    pub fn ds(&self) -> &[GoldenNumber; 3] {
        &self.d
    }

    /// Parameters for the mirrored tiling: line families 1 and 2 swap.
    pub fn mirrored(&self) -> FibParams {
        FibParams {
            d: [self.d[0].clone(), self.d[2].clone(), self.d[1].clone()],
        }
    }
}

/// Gap label between two neighbouring parallel lines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GapLabel {
    S,
    L,
}

impl fmt::Display for GapLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GapLabel::S => write!(f, "S"),
            GapLabel::L => write!(f, "L"),
        }
    }
}

/// Line colour from the adjacent gap labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LineColour {
    Black,
    Blue,
}

fn check_offset(d: &GoldenNumber) -> Result<(), Error> {
    if d.is_in_z_phi_z() {
        return Err(Error::DegenerateParameter(format!(
            "offset {d} lies in Z + phi*Z"
        )));
    }
    Ok(())
}

/// φ·n + d as an exact value.
fn beatty_arg(n: i64, d: &GoldenNumber) -> GoldenNumber {
    d + &GoldenNumber::new(
        num_rational::BigRational::from_integer(0.into()),
        num_rational::BigRational::from_integer(n.into()),
    )
}

/// The Fibonacci index pair (a, b) of line n: a = ⌊φn + d⌋, b = n − a.
pub fn fib_index(n: i64, d: &GoldenNumber) -> Result<(i64, i64), Error> {
    check_offset(d)?;
    let a = beatty_arg(n, d)
        .floor()
        .to_i64()
        .ok_or_else(|| Error::Inconsistency("index overflow".into()))?;
    Ok((a, n - a))
}

/// Fractional part of φn + d; the exact 1D reduced coordinate of line n.
pub fn frac_part(n: i64, d: &GoldenNumber) -> Result<GoldenNumber, Error> {
    check_offset(d)?;
    Ok(beatty_arg(n, d).fract())
}

/// Label of the gap between lines n and n+1: S iff a(n+1) = a(n).
pub fn gap_label(n: i64, d: &GoldenNumber) -> Result<GapLabel, Error> {
    let (a0, _) = fib_index(n, d)?;
    let (a1, _) = fib_index(n + 1, d)?;
    Ok(if a0 == a1 { GapLabel::S } else { GapLabel::L })
}

/// Colour of line n: blue if it borders an S gap, black if both adjacent
/// gaps are L. Gap g(n) sits between lines n and n+1, so line n reads
/// g(n−1) and g(n).
pub fn line_colour(n: i64, d: &GoldenNumber) -> Result<LineColour, Error> {
    let before = gap_label(n - 1, d)?;
    let after = gap_label(n, d)?;
    Ok(if before == GapLabel::S || after == GapLabel::S {
        LineColour::Blue
    } else {
        LineColour::Black
    })
}

/// Gap labels for n_start … n_start+count−1.
pub fn fib_word(n_start: i64, count: usize, d: &GoldenNumber) -> Result<Vec<GapLabel>, Error> {
    check_offset(d)?;
    Ok(GapIter::new(n_start, d)?.take(count).collect())
}

/// Streaming gap-label iterator; maintains the fractional part of
/// φn + d incrementally so long windows stay cheap.
///
/// When the offset fits machine words the state is kept as
/// frac = qn/den + r·φ with i64 components and the step comparison runs
/// entirely in i128 integer arithmetic (still exact: the sign of
/// u + w·φ is decided through the conjugate square comparison). The
/// general path keeps a `GoldenNumber`.
pub struct GapIter {
    state: GapState,
}

enum GapState {
    Fast { qn: i64, den: i64, r: i64 },
    Exact { frac: GoldenNumber },
}

/// Largest |qn| and |r| for which den·(|r|+2) stays far below the i128
/// square-comparison overflow threshold.
fn fast_limit(den: i64) -> i64 {
    (1i64 << 41) / den
}

/// Exact sign of u + w·φ for integer u, w: 2(u + wφ) = (2u − w) + w√5.
fn sign_int_golden(u: i128, w: i128) -> std::cmp::Ordering {
    use std::cmp::Ordering::*;
    let c = 2 * u - w;
    match (c >= 0, w >= 0) {
        (true, true) => {
            if c == 0 && w == 0 {
                Equal
            } else {
                Greater
            }
        }
        (false, false) => Less,
        (true, false) => (c * c).cmp(&(5 * w * w)),
        (false, true) => (5 * w * w).cmp(&(c * c)),
    }
}

impl GapIter {
    pub fn new(n_start: i64, d: &GoldenNumber) -> Result<Self, Error> {
        let frac = frac_part(n_start, d)?;
        let state = match Self::small_state(&frac) {
            Some(s) => s,
            None => GapState::Exact { frac },
        };
        Ok(GapIter { state })
    }

    fn small_state(frac: &GoldenNumber) -> Option<GapState> {
        use num_traits::ToPrimitive;
        if !frac.r().is_integer() {
            return None;
        }
        let r = frac.r().to_integer().to_i64()?;
        let qn = frac.q().numer().to_i64()?;
        let den = frac.q().denom().to_i64()?;
        if den > 1 << 20 || qn.abs() >= fast_limit(den) || r.abs() >= fast_limit(den) {
            return None;
        }
        Some(GapState::Fast { qn, den, r })
    }
}

impl Iterator for GapIter {
    type Item = GapLabel;

    fn next(&mut self) -> Option<GapLabel> {
        // Gap g(n) is S iff a(n+1) = a(n), i.e. iff frac(φn+d) + φ < 1.
        match &mut self.state {
            GapState::Fast { qn, den, r } => {
                if r.abs() >= fast_limit(*den) || qn.abs() >= fast_limit(*den) {
                    // fall back to the general representation before the
                    // integer comparison could overflow
                    let frac = GoldenNumber::make(*qn, *den, *r, 1)
                        .expect("nonzero denominator");
                    self.state = GapState::Exact { frac };
                    return self.next();
                }
                // sign of frac + φ − 1 = (qn − den)/den + (r+1)φ
                let u = (*qn - *den) as i128;
                let w = (*den as i128) * (*r as i128 + 1);
                let s = sign_int_golden(u, w);
                debug_assert_ne!(s, std::cmp::Ordering::Equal);
                *r += 1;
                if s == std::cmp::Ordering::Less {
                    Some(GapLabel::S)
                } else {
                    *qn -= *den;
                    Some(GapLabel::L)
                }
            }
            GapState::Exact { frac } => {
                let next = &*frac + &GoldenNumber::phi();
                if next < GoldenNumber::one() {
                    *frac = next;
                    Some(GapLabel::S)
                } else {
                    *frac = next - &GoldenNumber::one();
                    Some(GapLabel::L)
                }
            }
        }
    }
}

/// Number of substitution steps for `substitute`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubstSteps {
    One,
    Two,
}

/// Fibonacci substitution on S/L words: one step maps S → L and
/// L → S L; two steps is the composition of one step with itself.
pub fn substitute(seq: &[GapLabel], steps: SubstSteps) -> Vec<GapLabel> {
    fn one(seq: &[GapLabel]) -> Vec<GapLabel> {
        let mut out = Vec::with_capacity(seq.len() * 2);
        for s in seq {
            match s {
                GapLabel::S => out.push(GapLabel::L),
                GapLabel::L => {
                    out.push(GapLabel::S);
                    out.push(GapLabel::L);
                }
            }
        }
        out
    }
    match steps {
        SubstSteps::One => one(seq),
        SubstSteps::Two => one(&one(seq)),
    }
}
