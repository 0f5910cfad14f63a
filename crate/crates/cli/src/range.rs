use std::fmt;
use std::str::FromStr;

/// An inclusive integer range written `a..b`, `a..=b` or `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InclusiveRange {
    pub start: u32,
    pub end: u32,
}

impl InclusiveRange {
    pub fn values(&self) -> impl Iterator<Item = u32> {
        self.start..=self.end
    }

    pub fn is_empty(&self) -> bool {
        self.start > self.end
    }
}

impl FromStr for InclusiveRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |x: &str| x.trim().parse::<u32>().map_err(|e| format!("invalid bound `{x}` in range `{s}`: {e}"));
        match s.split_once("..") {
            Some((a, b)) => Ok(InclusiveRange {
                start: num(a)?,
                end: num(b.strip_prefix('=').unwrap_or(b))?,
            }),
            None => {
                let v = num(s)?;
                Ok(InclusiveRange { start: v, end: v })
            }
        }
    }
}

impl fmt::Display for InclusiveRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}
