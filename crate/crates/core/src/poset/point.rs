use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of `[t]^n`: an `n`-tuple with entries in `0..t`.
///
/// The order is coordinatewise: `x ≼ y` iff `x[i] <= y[i]` for every `i`.
/// The rank of a point is its coordinate sum; in a grid poset the rank is
/// also the (0-based) level index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    t: u32,
    coords: Vec<u32>,
}

impl Point {
    pub fn new(t: u32, coords: Vec<u32>) -> Result<Self> {
        if t == 0 {
            return Err(Error::contract("t must be at least 1"));
        }
        if let Some((i, &c)) = coords.iter().enumerate().find(|(_, &c)| c >= t) {
            return Err(Error::contract(format!(
                "coordinate {i} is {c}, outside 0..{t}"
            )));
        }
        Ok(Point { t, coords })
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn rank(&self) -> u64 {
        self.coords.iter().map(|&c| c as u64).sum()
    }

    /// Number of coordinates equal to `l`.
    pub fn count_of(&self, l: u32) -> usize {
        self.coords.iter().filter(|&&c| c == l).count()
    }

    /// `self ≼ other` in the product order.
    pub fn precedes(&self, other: &Point) -> bool {
        self.coords.len() == other.coords.len()
            && self.coords.iter().zip(&other.coords).all(|(a, b)| a <= b)
    }

    /// A point is low when some nonzero symbol `l` occurs fewer than `n/(2t)` times.
    /// For `t = 1` there is no nonzero symbol and every point is high.
    pub fn is_low(&self) -> bool {
        let n = self.coords.len() as u64;
        let two_t = 2 * self.t as u64;
        (1..self.t).any(|l| two_t * (self.count_of(l) as u64) < n)
    }

    /// Mixed-radix code, first coordinate most significant.
    pub fn encode(&self) -> u64 {
        self.coords
            .iter()
            .fold(0u64, |acc, &c| acc * self.t as u64 + c as u64)
    }

    pub fn decode(t: u32, n: usize, mut code: u64) -> Point {
        let mut coords = vec![0u32; n];
        for slot in coords.iter_mut().rev() {
            *slot = (code % t as u64) as u32;
            code /= t as u64;
        }
        Point { t, coords }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_and_high_points() {
        let high = Point::new(2, vec![1, 1, 0, 0]).unwrap();
        let low = Point::new(2, vec![0, 0, 0, 0]).unwrap();
        assert!(!high.is_low());
        assert!(low.is_low());
        // t = 1: no nonzero symbol, so nothing is low
        assert!(!Point::new(1, vec![0, 0, 0]).unwrap().is_low());
    }

    #[test]
    fn encode_round_trip_and_bounds() {
        let p = Point::new(4, vec![0, 2, 1, 3, 2, 1]).unwrap();
        assert_eq!(Point::decode(4, 6, p.encode()), p);
        assert_eq!(p.rank(), 9);
        assert!(Point::new(3, vec![0, 3]).is_err());
    }

    #[test]
    fn product_order() {
        let a = Point::new(3, vec![0, 1]).unwrap();
        let b = Point::new(3, vec![1, 1]).unwrap();
        let c = Point::new(3, vec![2, 0]).unwrap();
        assert!(a.precedes(&b));
        assert!(!b.precedes(&a));
        assert!(!a.precedes(&c) && !c.precedes(&a));
    }
}
