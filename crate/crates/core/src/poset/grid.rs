//! The grid `[t]^n` and its level sizes.

use rug::Integer;

use crate::error::{Error, Result};
use crate::poset::leveled::{GridOrigin, LeveledPoset};
use crate::poset::point::Point;

/// Default cap on the number of materialized grid nodes.
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000;

/// `t^n`, or `None` on `u64` overflow.
pub fn grid_size(t: u32, n: u32) -> Option<u64> {
    (t as u64).checked_pow(n)
}

fn check_dims(t: u32, n: u32) -> Result<()> {
    if t == 0 || n == 0 {
        return Err(Error::contract(format!("grid needs t >= 1 and n >= 1, got t={t}, n={n}")));
    }
    Ok(())
}

/// Checks `t^n` against a node budget, naming the dimension on refusal.
pub fn check_budget(t: u32, n: u32, budget: u64) -> Result<u64> {
    check_dims(t, n)?;
    match grid_size(t, n) {
        Some(size) if size <= budget => Ok(size),
        Some(size) => Err(Error::size(format!("node count t^n for t={t}, n={n}"), size, budget)),
        None => Err(Error::size(format!("node count t^n for t={t}, n={n}"), u128::MAX, budget)),
    }
}

/// All points of `[t]^n` in code order.
pub fn points(t: u32, n: u32) -> impl Iterator<Item = Point> {
    let size = grid_size(t, n).expect("grid size overflows u64");
    (0..size).map(move |code| Point::decode(t, n as usize, code))
}

/// Builds `[t]^n` with the default node budget.
pub fn build_grid(t: u32, n: u32) -> Result<LeveledPoset> {
    build_grid_with_budget(t, n, DEFAULT_NODE_BUDGET)
}

/// Builds `[t]^n` as an explicit poset: `(t-1)n+1` levels indexed by rank,
/// covers between points differing by +1 in one coordinate. Labels are
/// point codes.
pub fn build_grid_with_budget(t: u32, n: u32, budget: u64) -> Result<LeveledPoset> {
    let size = check_budget(t, n, budget)?;
    let level_count = ((t - 1) * n + 1) as usize;
    let mut levels: Vec<Vec<u64>> = vec![Vec::new(); level_count];
    let mut covers = Vec::new();
    let n_us = n as usize;
    let weights: Vec<u64> = (0..n_us).map(|i| (t as u64).pow(n - 1 - i as u32)).collect();
    for code in 0..size {
        let p = Point::decode(t, n_us, code);
        levels[p.rank() as usize].push(code);
        for (i, &c) in p.coords().iter().enumerate() {
            if c + 1 < t {
                covers.push((code, code + weights[i]));
            }
        }
    }
    Ok(LeveledPoset::from_parts(levels, &covers)?.with_grid(GridOrigin { t, n }))
}

/// Coefficients of `(1 + x + ... + x^{t-1})^n`, i.e. every level size of `[t]^n`.
pub fn level_sizes(t: u32, n: u32) -> Vec<Integer> {
    let width = (t as usize - 1) * n as usize + 1;
    let mut coeffs = vec![Integer::new(); width];
    coeffs[0] = Integer::from(1);
    let mut deg = 0usize;
    for _ in 0..n {
        let new_deg = deg + t as usize - 1;
        let mut next = vec![Integer::new(); width];
        // sliding window sum of the last t coefficients
        let mut window = Integer::new();
        for r in 0..=new_deg {
            if r <= deg {
                window += &coeffs[r];
            }
            if r >= t as usize && r - t as usize <= deg {
                window -= &coeffs[r - t as usize];
            }
            next[r] = window.clone();
        }
        coeffs = next;
        deg = new_deg;
    }
    coeffs
}

/// Number of points of `[t]^n` with rank `r`.
///
/// Uses a binomial for `t = 2`, the coefficient DP for moderate sizes and
/// the alternating sum `Σ_j (-1)^j C(n,j) C(r - jt + n - 1, n - 1)` beyond.
pub fn level_size(t: u32, n: u32, r: u64) -> Integer {
    assert!(t >= 1 && n >= 1, "level_size needs t, n >= 1");
    let max_rank = (t as u64 - 1) * n as u64;
    if r > max_rank {
        return Integer::new();
    }
    match t {
        1 => Integer::from(1),
        2 => Integer::from(Integer::binomial_u(n, r as u32)),
        _ if (n as u64) * max_rank <= 4_000_000 => level_sizes(t, n).swap_remove(r as usize),
        _ => alternating_level_size(t, n, r),
    }
}

pub(crate) fn alternating_level_size(t: u32, n: u32, r: u64) -> Integer {
    let mut total = Integer::new();
    let nm1 = n - 1;
    for j in 0..=(r / t as u64).min(n as u64) {
        let term = Integer::from(Integer::binomial_u(n, j as u32))
            * Integer::from(Integer::binomial_u((r - j * t as u64) as u32 + nm1, nm1));
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// Rank of the middle layer, `⌊(t-1)n/2⌋`.
pub fn middle_rank(t: u32, n: u32) -> u64 {
    (t as u64 - 1) * n as u64 / 2
}

/// `N(t,n)`: the size of the middle layer (a largest level) of `[t]^n`.
pub fn middle_layer_size(t: u32, n: u32) -> Integer {
    level_size(t, n, middle_rank(t, n))
}

/// Exact number of low points of `[t]^n`, without enumerating the grid.
///
/// Counts high points by placing each nonzero symbol `l` on at least
/// `⌈n/(2t)⌉` positions (binomial DP over the number of used positions),
/// then subtracts from `t^n`.
pub fn count_low_points(t: u32, n: u32) -> Integer {
    assert!(t >= 1 && n >= 1, "count_low_points needs t, n >= 1");
    if t == 1 {
        return Integer::new();
    }
    let n_us = n as usize;
    let min_count = (n as usize).div_ceil(2 * t as usize);
    // ways[m]: placements of the symbols seen so far on m positions
    let mut ways = vec![Integer::new(); n_us + 1];
    ways[0] = Integer::from(1);
    for _ in 1..t {
        let mut next = vec![Integer::new(); n_us + 1];
        for (m, w) in ways.iter().enumerate() {
            if *w == 0 {
                continue;
            }
            for j in min_count..=(n_us - m) {
                let choose = Integer::from(Integer::binomial_u((n_us - m) as u32, j as u32));
                next[m + j] += Integer::from(w * &choose);
            }
        }
        ways = next;
    }
    let high: Integer = ways.iter().sum();
    Integer::from(Integer::u_pow_u(t, n)) - high
}
