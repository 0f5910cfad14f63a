//! Directed-rounding real arithmetic on top of MPFR.

use std::cmp::Ordering;
use std::fmt;

use rug::float::{Constant, Round};
use rug::ops::{AssignRound, Pow};
use rug::{Float, Integer, Rational};

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 128;

pub(crate) fn rounded<T>(prec: u32, val: T, round: Round) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, val, round).0
}


/// A value that is never below the exact real it stands for.
#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub struct UpperReal(Float);

impl UpperReal {
    pub fn new(value: Float) -> Self {
        UpperReal(value)
    }

    pub fn value(&self) -> &Float {
        &self.0
    }

    pub fn into_float(self) -> Float {
        self.0
    }

    pub fn precision_bits(&self) -> u32 {
        self.0.prec()
    }

    /// Nearest `f64` at or above the value.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64_round(Round::Up)
    }
}

impl fmt::Display for UpperReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_sig(&self.0, 6))
    }
}

/// A real number known to lie in `[lo, hi]`. Every operation rounds the
/// lower end down and the upper end up.
#[derive(Clone, Debug, PartialEq)]
pub struct Enclosure {
    lo: Float,
    hi: Float,
}

impl Enclosure {
    /// Builds from explicit ends; `lo ≤ hi` is the caller's promise.
    pub fn new(lo: Float, hi: Float) -> Self {
        debug_assert!(!(lo > hi), "inverted enclosure {lo} > {hi}");
        Enclosure { lo, hi }
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        Enclosure::new(rounded(prec, q, Round::Down), rounded(prec, q, Round::Up))
    }

    pub fn from_integer(z: &Integer, prec: u32) -> Self {
        Enclosure::new(rounded(prec, z, Round::Down), rounded(prec, z, Round::Up))
    }

    pub fn from_u64(v: u64, prec: u32) -> Self {
        Self::from_integer(&Integer::from(v), prec)
    }

    pub fn from_f64(v: f64, prec: u32) -> Self {
        Enclosure::new(rounded(prec, v, Round::Down), rounded(prec, v, Round::Up))
    }

    pub fn pi(prec: u32) -> Self {
        Enclosure::new(rounded(prec, Constant::Pi, Round::Down), rounded(prec, Constant::Pi, Round::Up))
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    /// The upper end as an [`UpperReal`].
    pub fn upper(&self) -> UpperReal {
        UpperReal(self.hi.clone())
    }

    /// `hi - lo`, rounded up.
    pub fn width(&self) -> Float {
        rounded(self.prec(), &self.hi - &self.lo, Round::Up)
    }

    pub fn contains(&self, x: &Float) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    /// True when every point of `self` is `≤` every point of `other`.
    pub fn certainly_le(&self, other: &Enclosure) -> bool {
        self.hi <= other.lo
    }

    /// True when some point of `self` is `≤` some point of `other`.
    pub fn possibly_le(&self, other: &Enclosure) -> bool {
        self.lo <= other.hi
    }

    pub fn add(&self, o: &Enclosure) -> Enclosure {
        let p = self.prec();
        Enclosure::new(rounded(p, &self.lo + &o.lo, Round::Down), rounded(p, &self.hi + &o.hi, Round::Up))
    }

    pub fn sub(&self, o: &Enclosure) -> Enclosure {
        let p = self.prec();
        Enclosure::new(rounded(p, &self.lo - &o.hi, Round::Down), rounded(p, &self.hi - &o.lo, Round::Up))
    }

    pub fn neg(&self) -> Enclosure {
        Enclosure::new(Float::with_val(self.lo.prec(), -&self.hi), Float::with_val(self.hi.prec(), -&self.lo))
    }

    pub fn mul(&self, o: &Enclosure) -> Enclosure {
        let p = self.prec();
        let pairs = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let lo = pairs
            .iter()
            .map(|(a, b)| rounded(p, *a * *b, Round::Down))
            .reduce(|x, y| x.min(&y))
            .expect("four products");
        let hi = pairs
            .iter()
            .map(|(a, b)| rounded(p, *a * *b, Round::Up))
            .reduce(|x, y| x.max(&y))
            .expect("four products");
        Enclosure::new(lo, hi)
    }

    /// Division by an enclosure that excludes zero.
    pub fn div(&self, o: &Enclosure) -> Enclosure {
        assert!(o.lo > 0 || o.hi < 0, "division by an enclosure containing zero");
        let p = self.prec();
        let pairs = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let lo = pairs
            .iter()
            .map(|(a, b)| rounded(p, *a / *b, Round::Down))
            .reduce(|x, y| x.min(&y))
            .expect("four quotients");
        let hi = pairs
            .iter()
            .map(|(a, b)| rounded(p, *a / *b, Round::Up))
            .reduce(|x, y| x.max(&y))
            .expect("four quotients");
        Enclosure::new(lo, hi)
    }

    /// Applies a nondecreasing function end by end.
    fn monotone(&self, f: impl Fn(&Float, Round) -> Float) -> Enclosure {
        Enclosure::new(f(&self.lo, Round::Down), f(&self.hi, Round::Up))
    }

    pub fn ln(&self) -> Enclosure {
        let p = self.prec();
        self.monotone(|x, r| rounded(p, x.ln_ref(), r))
    }

    pub fn log2(&self) -> Enclosure {
        let p = self.prec();
        self.monotone(|x, r| rounded(p, x.log2_ref(), r))
    }

    pub fn exp(&self) -> Enclosure {
        let p = self.prec();
        self.monotone(|x, r| rounded(p, x.exp_ref(), r))
    }

    /// Square root of a nonnegative enclosure.
    pub fn sqrt(&self) -> Enclosure {
        let p = self.prec();
        self.monotone(|x, r| rounded(p, x.sqrt_ref(), r))
    }

    /// `k`-th root of a nonnegative enclosure.
    pub fn root(&self, k: u32) -> Enclosure {
        let p = self.prec();
        self.monotone(|x, r| rounded(p, x.root_ref(k), r))
    }

    /// `x^k` for a nonnegative enclosure.
    pub fn pow_u(&self, k: u32) -> Enclosure {
        let p = self.prec();
        self.monotone(|x, r| rounded(p, x.pow(k), r))
    }

    /// `x^y = exp(y ln x)` for positive `x`.
    pub fn powf(&self, y: &Enclosure) -> Enclosure {
        y.mul(&self.ln()).exp()
    }

    pub fn scale_u(&self, k: u32) -> Enclosure {
        self.mul(&Enclosure::from_u64(k as u64, self.prec()))
    }

    pub fn max(&self, o: &Enclosure) -> Enclosure {
        Enclosure::new(self.lo.clone().max(&o.lo), self.hi.clone().max(&o.hi))
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", format_sig(&self.lo, 6), format_sig(&self.hi, 6))
    }
}

/// Formats with `digits` significant digits, `%g` style: fixed notation for
/// decimal exponents in `[-4, digits)`, scientific otherwise. Works for
/// values far outside the `f64` range.
pub fn format_sig(x: &Float, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x.is_sign_negative() { "-inf".into() } else { "inf".into() };
    }
    if x.is_zero() {
        return "0".into();
    }
    let s = x.to_string_radix(10, Some(digits));
    // rug renders `[-]d.ddddde±X` (or without exponent for small magnitudes)
    let (mantissa, exp) = match s.split_once('e') {
        Some((m, e)) => (m.to_string(), e.parse::<i64>().expect("decimal exponent")),
        None => (s.clone(), 0),
    };
    let negative = mantissa.starts_with('-');
    let digits_only: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    // position of the decimal point in the rug mantissa
    let int_len = mantissa.trim_start_matches('-').split('.').next().map_or(0, str::len) as i64;
    let lead = digits_only.trim_start_matches('0');
    let skipped = (digits_only.len() - lead.len()) as i64;
    let sig: String = lead.chars().take(digits).collect();
    let sig = format!("{sig:0<digits$}");
    let e10 = exp + int_len - 1 - skipped;
    let sign = if negative { "-" } else { "" };
    let body = if e10 >= -4 && e10 < digits as i64 {
        let point = e10 + 1;
        let raw = if point <= 0 {
            format!("0.{}{}", "0".repeat((-point) as usize), sig)
        } else {
            format!("{}.{}", &sig[..point as usize], &sig[point as usize..])
        };
        trim_fraction(&raw)
    } else {
        let frac = trim_fraction(&format!("{}.{}", &sig[..1], &sig[1..]));
        format!("{frac}e{e10}")
    };
    format!("{sign}{body}")
}

fn trim_fraction(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(v: f64) -> Float {
        Float::with_val(64, v)
    }

    #[test]
    fn sig_formatting() {
        assert_eq!(format_sig(&f(21.78675), 6), "21.7868");
        assert_eq!(format_sig(&f(14.0), 6), "14");
        assert_eq!(format_sig(&f(0.0221), 6), "0.0221");
        assert_eq!(format_sig(&f(-3.5), 6), "-3.5");
        assert_eq!(format_sig(&f(184756.0), 6), "184756");
        assert_eq!(format_sig(&f(1847560.0), 6), "1.84756e6");
        assert_eq!(format_sig(&f(0.00001234), 6), "1.234e-5");
        let huge = Float::with_val(64, Float::u_pow_u(2, 100_000));
        assert!(format_sig(&huge, 6).starts_with("9.99"), "{}", format_sig(&huge, 6));
    }

    #[test]
    fn enclosures_contain_exact_values() {
        let two = Enclosure::from_u64(2, 128);
        let r = two.sqrt().mul(&two.sqrt());
        assert!(r.contains(&Float::with_val(128, 2)));
        let third = Enclosure::from_rational(&Rational::from((1, 3)), 128);
        assert!(third.lo() < third.hi());
        let back = third.scale_u(3);
        assert!(back.contains(&Float::with_val(128, 1)));
        let e = Enclosure::from_u64(8, 128).log2();
        assert!(e.contains(&Float::with_val(128, 3)));
        let cube = Enclosure::from_u64(27, 128).root(3);
        assert_eq!(cube.lo(), cube.hi());
        assert!(Enclosure::from_u64(1, 128).certainly_le(&Enclosure::from_u64(1, 128)));
        assert!(!two.certainly_le(&third));
    }

    #[test]
    fn division_and_subtraction() {
        let a = Enclosure::from_u64(1, 128);
        let b = Enclosure::from_u64(7, 128);
        let q = a.div(&b);
        assert!(q.width() < Float::with_val(128, 1e-35));
        let d = a.sub(&b);
        assert!(d.contains(&Float::with_val(128, -6)));
    }
}
