//! Exact arithmetic over ℚ(√5), represented as q + r·φ with rational q, r
//! and φ = (√5−1)/2.
//!
//! Every floor, comparison and region test in the tiling pipeline runs on
//! these numbers, so results are bit-reproducible across platforms. The
//! golden ratio Φ = (√5+1)/2 is represented as 1 + φ; multiplication
//! reduces via φ² = 1 − φ.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::OnceLock;

use crate::Error;

/// An element q + r·φ of ℚ(√5), with q and r kept in canonical reduced form.
///
/// The representation is unique: since φ is irrational, q + rφ = q' + r'φ
/// implies q = q' and r = r'. Equality and hashing therefore work on the
/// raw coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GoldenNumber {
    q: BigRational,
    r: BigRational,
}

impl GoldenNumber {
    pub fn new(q: BigRational, r: BigRational) -> Self {
        GoldenNumber { q, r }
    }

    /// Builds q + r·φ from integer fractions, failing on zero denominators.
    pub fn make(
        q_num: impl Into<BigInt>,
        q_den: impl Into<BigInt>,
        r_num: impl Into<BigInt>,
        r_den: impl Into<BigInt>,
    ) -> Result<Self, Error> {
        let qd: BigInt = q_den.into();
        let rd: BigInt = r_den.into();
        if qd.is_zero() || rd.is_zero() {
            return Err(Error::MalformedRational("zero denominator".into()));
        }
        Ok(GoldenNumber {
            q: BigRational::new(q_num.into(), qd),
            r: BigRational::new(r_num.into(), rd),
        })
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        GoldenNumber {
            q: BigRational::from_integer(n.into()),
            r: BigRational::zero(),
        }
    }

    pub fn from_rational(q: BigRational) -> Self {
        GoldenNumber {
            q,
            r: BigRational::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// φ = (√5−1)/2 ≈ 0.618.
    pub fn phi() -> Self {
        GoldenNumber {
            q: BigRational::zero(),
            r: BigRational::one(),
        }
    }

    /// Φ = (√5+1)/2 = 1 + φ.
    pub fn big_phi() -> Self {
        GoldenNumber {
            q: BigRational::one(),
            r: BigRational::one(),
        }
    }

    /// φ^k for small non-negative k.
    pub fn phi_pow(k: u32) -> Self {
        let mut x = GoldenNumber::one();
        for _ in 0..k {
            x = &x * &GoldenNumber::phi();
        }
        x
    }

    pub fn q(&self) -> &BigRational {
        &self.q
    }

    pub fn r(&self) -> &BigRational {
        &self.r
    }

    pub fn is_zero(&self) -> bool {
        self.q.is_zero() && self.r.is_zero()
    }

    /// True iff the value lies in ℤ + φℤ. By uniqueness of the
    /// representation this is decidable as "q integer and r integer";
    /// such values are the degenerate offsets the construction must avoid.
    pub fn is_in_z_phi_z(&self) -> bool {
        self.q.is_integer() && self.r.is_integer()
    }

    /// Exact sign of the value, with no floating point involved.
    ///
    /// Case-split on the signs of q and rφ; in the mixed case the sign
    /// reduces to the sign of t² + t − 1 at the rational t = q/(−r) or
    /// (−q)/r, using that x ↦ x² + x − 1 is increasing on x > 0 and has
    /// φ as its positive root.
    pub fn sign(&self) -> Ordering {
        let qs = rational_sign(&self.q);
        let rs = rational_sign(&self.r);
        match (qs, rs) {
            (Ordering::Equal, s) => s,
            (s, Ordering::Equal) => s,
            (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
            (Ordering::Less, Ordering::Less) => Ordering::Less,
            (Ordering::Greater, Ordering::Less) => {
                // q + rφ > 0  ⟺  q/(-r) > φ  ⟺  t² + t − 1 > 0 at t = q/(-r) > 0
                let t = &self.q / -&self.r;
                poly_sign(&t)
            }
            (Ordering::Less, Ordering::Greater) => {
                // q + rφ > 0  ⟺  φ > (−q)/r  ⟺  t² + t − 1 < 0 at t = (−q)/r > 0
                let t = -&self.q / &self.r;
                poly_sign(&t).reverse()
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    /// Greatest integer ≤ self, computed exactly.
    ///
    /// A rational bracketing of φ narrows the candidate to a window of
    /// width ≤ 1, then exact comparisons settle the boundary.
    pub fn floor(&self) -> BigInt {
        let (lo, hi) = phi_bracket();
        let x_lo = &self.q + &self.r * if self.r.is_negative() { hi } else { lo };
        let x_hi = &self.q + &self.r * if self.r.is_negative() { lo } else { hi };
        let f_lo = x_lo.floor().to_integer();
        let f_hi = x_hi.floor().to_integer();
        if f_lo == f_hi {
            return f_lo;
        }
        // The bracket straddles an integer; only possible when the value is
        // very close to f_hi. Decide with one exact comparison.
        let candidate = GoldenNumber::from_int(f_hi.clone());
        match self.cmp(&candidate) {
            Ordering::Less => f_lo,
            _ => f_hi,
        }
    }

    pub fn floor_i64(&self) -> i64 {
        self.floor().to_i64().expect("floor out of i64 range")
    }

    /// Fractional part, self − floor(self); always in [0, 1).
    pub fn fract(&self) -> GoldenNumber {
        self - &GoldenNumber::from_int(self.floor())
    }

    /// f64 approximation, for rendering and statistics only.
    pub fn to_f64(&self) -> f64 {
        const PHI_F64: f64 = 0.618_033_988_749_894_9;
        rational_to_f64(&self.q) + rational_to_f64(&self.r) * PHI_F64
    }
}

fn rational_sign(x: &BigRational) -> Ordering {
    if x.is_zero() {
        Ordering::Equal
    } else if x.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// Sign of t² + t − 1 for rational t. Never zero: the roots are irrational.
fn poly_sign(t: &BigRational) -> Ordering {
    let v = t * t + t - BigRational::one();
    debug_assert!(!v.is_zero(), "t^2 + t - 1 has no rational root");
    rational_sign(&v)
}

fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Fall back to a scaled division for huge components.
        let n = x.numer().to_f64().unwrap_or(f64::NAN);
        let d = x.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Rational bracket lo < φ < hi with |hi − lo| = 10⁻⁶⁰, from the integer
/// square root of 5·10¹²⁰.
fn phi_bracket() -> (&'static BigRational, &'static BigRational) {
    static BRACKET: OnceLock<(BigRational, BigRational)> = OnceLock::new();
    let (lo, hi) = BRACKET.get_or_init(|| {
        let scale = BigInt::from(10u8).pow(60);
        let s = (BigInt::from(5u8) * &scale * &scale).sqrt();
        // s ≤ √5·10⁶⁰ < s+1, so (s − 10⁶⁰)/(2·10⁶⁰) ≤ φ < (s+1 − 10⁶⁰)/(2·10⁶⁰)
        let two_scale = BigInt::from(2u8) * &scale;
        let lo = BigRational::new(&s - &scale, two_scale.clone());
        let hi = BigRational::new(&s + 1 - &scale, two_scale);
        (lo, hi)
    });
    (lo, hi)
}

impl PartialOrd for GoldenNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GoldenNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        (self - other).sign()
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for GoldenNumber {
            type Output = GoldenNumber;
            fn $method(self, rhs: GoldenNumber) -> GoldenNumber {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&GoldenNumber> for GoldenNumber {
            type Output = GoldenNumber;
            fn $method(self, rhs: &GoldenNumber) -> GoldenNumber {
                (&self).$method(rhs)
            }
        }
        impl $trait<GoldenNumber> for &GoldenNumber {
            type Output = GoldenNumber;
            fn $method(self, rhs: GoldenNumber) -> GoldenNumber {
                self.$method(&rhs)
            }
        }
    };
}

impl Add<&GoldenNumber> for &GoldenNumber {
    type Output = GoldenNumber;
    fn add(self, rhs: &GoldenNumber) -> GoldenNumber {
        GoldenNumber {
            q: &self.q + &rhs.q,
            r: &self.r + &rhs.r,
        }
    }
}
forward_binop!(Add, add);

impl Sub<&GoldenNumber> for &GoldenNumber {
    type Output = GoldenNumber;
    fn sub(self, rhs: &GoldenNumber) -> GoldenNumber {
        GoldenNumber {
            q: &self.q - &rhs.q,
            r: &self.r - &rhs.r,
        }
    }
}
forward_binop!(Sub, sub);

impl Mul<&GoldenNumber> for &GoldenNumber {
    type Output = GoldenNumber;
    fn mul(self, rhs: &GoldenNumber) -> GoldenNumber {
        // (q₁+r₁φ)(q₂+r₂φ) = q₁q₂ + r₁r₂ + (q₁r₂ + q₂r₁ − r₁r₂)φ, via φ² = 1 − φ
        let rr = &self.r * &rhs.r;
        GoldenNumber {
            q: &self.q * &rhs.q + &rr,
            r: &self.q * &rhs.r + &rhs.q * &self.r - &rr,
        }
    }
}
forward_binop!(Mul, mul);

impl Neg for &GoldenNumber {
    type Output = GoldenNumber;
    fn neg(self) -> GoldenNumber {
        GoldenNumber {
            q: -&self.q,
            r: -&self.r,
        }
    }
}

impl Neg for GoldenNumber {
    type Output = GoldenNumber;
    fn neg(self) -> GoldenNumber {
        -&self
    }
}

impl AddAssign<&GoldenNumber> for GoldenNumber {
    fn add_assign(&mut self, rhs: &GoldenNumber) {
        self.q += &rhs.q;
        self.r += &rhs.r;
    }
}

impl SubAssign<&GoldenNumber> for GoldenNumber {
    fn sub_assign(&mut self, rhs: &GoldenNumber) {
        self.q -= &rhs.q;
        self.r -= &rhs.r;
    }
}

impl fmt::Debug for GoldenNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for GoldenNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.r.is_zero() {
            return write!(f, "{}", self.q);
        }
        if self.q.is_zero() {
            return write!(f, "{}*phi", self.r);
        }
        if self.r.is_negative() {
            write!(f, "{}-{}*phi", self.q, -&self.r)
        } else {
            write!(f, "{}+{}*phi", self.q, self.r)
        }
    }
}

/// Parses a rational from "p/q", an integer literal, or a decimal literal
/// (decimals convert exactly, e.g. "0.25" → 1/4).
pub fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::MalformedRational("empty string".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim())
            .map_err(|_| Error::MalformedRational(format!("bad numerator in {s:?}")))?;
        let d = BigInt::from_str(den.trim())
            .map_err(|_| Error::MalformedRational(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::MalformedRational(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.trim_start().starts_with('-');
        let i = if int_part.is_empty() || int_part == "-" || int_part == "+" {
            BigInt::zero()
        } else {
            BigInt::from_str(int_part)
                .map_err(|_| Error::MalformedRational(format!("bad decimal {s:?}")))?
        };
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::MalformedRational(format!("bad decimal {s:?}")));
        }
        let digits = BigInt::from_str(frac_part).unwrap();
        let scale = BigInt::from(10u8).pow(frac_part.len() as u32);
        let frac = BigRational::new(digits, scale);
        let int = BigRational::from_integer(i);
        return Ok(if negative { int - frac } else { int + frac });
    }
    let n = BigInt::from_str(s).map_err(|_| Error::MalformedRational(format!("bad rational {s:?}")))?;
    Ok(BigRational::from_integer(n))
}

impl FromStr for GoldenNumber {
    type Err = Error;

    /// Parses "q", "r*phi", "q+r*phi" or "q-r*phi", where q and r are
    /// rationals in the `parse_rational` syntax. "phi" alone means 1*phi.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim().replace(' ', "");
        let parse_phi_term = |t: &str| -> Result<BigRational, Error> {
            let t = t.strip_suffix("phi").ok_or_else(|| {
                Error::MalformedRational(format!("expected phi term in {t:?}"))
            })?;
            match t.strip_suffix('*') {
                Some("") | None if t.is_empty() || t == "*" => Ok(BigRational::one()),
                Some(coeff) => parse_rational(coeff),
                None => {
                    if t == "-" {
                        Ok(-BigRational::one())
                    } else if t == "+" || t.is_empty() {
                        Ok(BigRational::one())
                    } else {
                        Err(Error::MalformedRational(format!("bad phi coefficient {t:?}")))
                    }
                }
            }
        };
        if let Some(split) = split_top_level(&s) {
            let (left, op, right) = split;
            let q = parse_rational(left)?;
            let r = parse_phi_term(right)?;
            let r = if op == '-' { -r } else { r };
            return Ok(GoldenNumber::new(q, r));
        }
        if s.ends_with("phi") {
            return Ok(GoldenNumber::new(BigRational::zero(), parse_phi_term(&s)?));
        }
        Ok(GoldenNumber::from_rational(parse_rational(&s)?))
    }
}

/// Splits "a+b" or "a-b" at the last top-level sign (skipping a leading
/// sign and signs directly after '/'). Returns None for single terms.
fn split_top_level(s: &str) -> Option<(&str, char, &str)> {
    let bytes = s.as_bytes();
    for i in (1..bytes.len()).rev() {
        let c = bytes[i] as char;
        if (c == '+' || c == '-') && bytes[i - 1] != b'/' && bytes[i - 1] != b'*' {
            return Some((&s[..i], c, &s[i + 1..]));
        }
    }
    None
}
