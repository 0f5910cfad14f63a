//! Closed-form bounds on `log α([t]^n)` and on the middle layer size.

use rug::ops::Pow;
use rug::{Float, Integer};
use serde_json::{json, Value};

use crate::bounds::real::{format_sig, Enclosure, DEFAULT_PRECISION};
use crate::bounds::section4::Section4Params;
use crate::error::{Error, Result};
use crate::poset::middle_layer_size;

/// What a bound entry bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    /// `log₂ α([t]^n)`.
    Log2Alpha,
    /// The middle layer size `N(t,n)`.
    MiddleLayer,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Upper,
    Lower,
    /// An asymptotic approximation, neither side guaranteed.
    Estimate,
}

/// Outcome of comparing a bound with an exact value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Violated,
    /// The enclosures overlap and no exact comparison was available.
    Undecided,
}

#[derive(Clone, Debug)]
pub struct BoundEntry {
    pub name: &'static str,
    /// The formula, as a short human-readable string.
    pub anchor: &'static str,
    pub quantity: Quantity,
    pub side: Side,
    pub applicable: bool,
    /// `None` when the formula is undefined at this `(t, n)`.
    pub value: Option<Enclosure>,
}

impl BoundEntry {
    /// The safe end: the upper end of an upper bound, the lower end of a
    /// lower bound, the upper end of an estimate.
    pub fn reported(&self) -> Option<&Float> {
        self.value.as_ref().map(|v| match self.side {
            Side::Lower => v.lo(),
            Side::Upper | Side::Estimate => v.hi(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct BoundReport {
    pub t: u32,
    pub n: u32,
    pub middle_layer: Integer,
    pub entries: Vec<BoundEntry>,
    alpha: Option<Integer>,
    log2_alpha: Option<Enclosure>,
}

pub const LOG_POWER: &str = "log_power";
pub const LOG_T_PLUS_ONE: &str = "log_t_plus_one";
pub const THREE_GRID: &str = "three_grid";
pub const SQRT_LOG_CUBE: &str = "sqrt_log_cube";
pub const MIDDLE_LAYER_LOWER: &str = "middle_layer_lower";
pub const MIDDLE_LAYER_FLOOR: &str = "middle_layer_floor";
pub const MIDDLE_LAYER_ESTIMATE: &str = "middle_layer_estimate";

/// Every closed form at `(params.t, params.n)`; `params.c` is the constant
/// of the sublinear-error bound. Inapplicable bounds are evaluated and flagged.
pub fn closed_form_bounds(params: &Section4Params) -> Result<BoundReport> {
    let (t, n) = (params.t, params.n);
    if t == 0 || n == 0 {
        return Err(Error::contract(format!("need t, n >= 1, got t={t}, n={n}")));
    }
    let prec = DEFAULT_PRECISION;
    let int = |v: u64| Enclosure::from_u64(v, prec);
    let n_mid = middle_layer_size(t, n);
    let big_n = Enclosure::from_integer(&n_mid, prec);
    let te = int(t as u64);
    let ne = int(n as u64);
    let one = int(1);
    let log_n = ne.log2();

    let log_power = one
        .add(
            &te.pow_u(2)
                .scale_u(11)
                .mul(&te.log2())
                .mul(&log_n.mul(&log_n.sqrt()))
                .div(&ne.root(4)),
        )
        .mul(&big_n);
    let log_t_plus_one = big_n.mul(&int(t as u64 + 1).log2());
    let three_grid = one.add(&int(3).log2().scale_u(4).div(&ne)).mul(&big_n);
    let sqrt_log_cube = one
        .add(&Enclosure::from_f64(params.c, prec).mul(&te.mul(&log_n.pow_u(3)).div(&ne).sqrt()))
        .mul(&big_n);
    let floor = te.pow_u(n - 1).scale_u(2).div(&ne.sqrt().scale_u(3));
    let estimate = (t > 1).then(|| {
        let denom = Enclosure::pi(prec).mul(&int(t as u64 * t as u64 - 1)).mul(&ne);
        te.pow_u(n).mul(&int(6).div(&denom).sqrt())
    });

    let entries = vec![
        BoundEntry {
            name: LOG_POWER,
            anchor: "(1 + 11 t^2 log t (log n)^{3/2} / n^{1/4}) N, for 1 < t < n",
            quantity: Quantity::Log2Alpha,
            side: Side::Upper,
            applicable: 1 < t && t < n,
            value: Some(log_power),
        },
        BoundEntry {
            name: LOG_T_PLUS_ONE,
            anchor: "N log(t+1)",
            quantity: Quantity::Log2Alpha,
            side: Side::Upper,
            applicable: true,
            value: Some(log_t_plus_one),
        },
        BoundEntry {
            name: THREE_GRID,
            anchor: "(1 + 4 log 3 / n) N, for t = 3",
            quantity: Quantity::Log2Alpha,
            side: Side::Upper,
            applicable: t == 3,
            value: Some(three_grid),
        },
        BoundEntry {
            name: SQRT_LOG_CUBE,
            anchor: "(1 + C (t log^3 n / n)^{1/2}) N, for t < n / (100 log n)",
            quantity: Quantity::Log2Alpha,
            side: Side::Upper,
            applicable: params.applicable(),
            value: Some(sqrt_log_cube),
        },
        BoundEntry {
            name: MIDDLE_LAYER_LOWER,
            anchor: "N: every subset of the middle layer is an antichain",
            quantity: Quantity::Log2Alpha,
            side: Side::Lower,
            applicable: true,
            value: Some(big_n),
        },
        BoundEntry {
            name: MIDDLE_LAYER_FLOOR,
            anchor: "N >= 2 t^{n-1} / (3 n^{1/2})",
            quantity: Quantity::MiddleLayer,
            side: Side::Lower,
            applicable: true,
            value: Some(floor),
        },
        BoundEntry {
            name: MIDDLE_LAYER_ESTIMATE,
            anchor: "N ~ t^n (6 / (pi (t^2-1) n))^{1/2} as n grows",
            quantity: Quantity::MiddleLayer,
            side: Side::Estimate,
            applicable: t > 1,
            value: estimate,
        },
    ];
    Ok(BoundReport {
        t,
        n,
        middle_layer: n_mid,
        entries,
        alpha: None,
        log2_alpha: None,
    })
}

/// `9 n N² ≥ 4 t^{2(n-1)}`: the middle-layer floor checked in integers.
pub fn middle_layer_floor_holds(t: u32, n: u32) -> bool {
    let big_n = middle_layer_size(t, n);
    let lhs = Integer::from(9u32) * n * Integer::from(&big_n * &big_n);
    let rhs = Integer::from(4u32) * Integer::from(Integer::u_pow_u(t, 2 * (n - 1)));
    lhs >= rhs
}

/// Size in bits beyond which exact power comparisons are skipped.
const EXACT_BITS_LIMIT: u64 = 1 << 22;

impl BoundReport {
    pub fn entry(&self, name: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn attach_alpha(&mut self, alpha: Integer) {
        self.log2_alpha = Some(Enclosure::from_integer(&alpha, DEFAULT_PRECISION).log2());
        self.alpha = Some(alpha);
    }

    pub fn alpha(&self) -> Option<&Integer> {
        self.alpha.as_ref()
    }

    pub fn log2_alpha(&self) -> Option<&Enclosure> {
        self.log2_alpha.as_ref()
    }

    /// The least reported value among applicable upper bounds on `log₂ α`.
    pub fn tightest_upper(&self) -> Option<(&'static str, &Float)> {
        self.entries
            .iter()
            .filter(|e| e.applicable && e.side == Side::Upper && e.quantity == Quantity::Log2Alpha)
            .filter_map(|e| e.reported().map(|v| (e.name, v)))
            .min_by(|a, b| a.1.partial_cmp(b.1).expect("bounds are finite"))
    }

    /// Compares an applicable `log₂ α` entry with the attached exact count.
    /// Uses integer arithmetic where the bound has an exact power form.
    pub fn verdict(&self, name: &str) -> Option<Verdict> {
        let e = self.entry(name)?;
        if e.quantity != Quantity::Log2Alpha || e.side == Side::Estimate {
            return None;
        }
        let alpha = self.alpha.as_ref()?;
        if let Some(exact) = self.exact_verdict(name, alpha) {
            return Some(if exact { Verdict::Holds } else { Verdict::Violated });
        }
        let la = self.log2_alpha.as_ref()?;
        let v = e.value.as_ref()?;
        let (holds, fails) = match e.side {
            Side::Upper => (la.certainly_le(v), !la.possibly_le(v)),
            _ => (v.certainly_le(la), !v.possibly_le(la)),
        };
        Some(if holds {
            Verdict::Holds
        } else if fails {
            Verdict::Violated
        } else {
            Verdict::Undecided
        })
    }

    fn exact_verdict(&self, name: &str, alpha: &Integer) -> Option<bool> {
        let big_n = self.middle_layer.to_u32()?;
        let (t, n) = (self.t, self.n);
        let alpha_bits = alpha.significant_bits() as u64;
        match name {
            // α ≥ 2^N
            MIDDLE_LAYER_LOWER => Some(alpha.significant_bits() > big_n),
            // α ≤ (t+1)^N
            LOG_T_PLUS_ONE if (big_n as u64) * 64 <= EXACT_BITS_LIMIT => {
                Some(*alpha <= Integer::from(Integer::u_pow_u(t + 1, big_n)))
            }
            // α^n ≤ 2^{nN} 3^{4N}
            THREE_GRID if alpha_bits * n as u64 <= EXACT_BITS_LIMIT => {
                let lhs = alpha.clone().pow(n);
                let rhs = (Integer::from(1) << (n * big_n)) * Integer::from(Integer::u_pow_u(3, 4 * big_n));
                Some(lhs <= rhs)
            }
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                json!({
                    "name": e.name,
                    "anchor": e.anchor,
                    "bounds": match e.quantity { Quantity::Log2Alpha => "log2_alpha", Quantity::MiddleLayer => "N" },
                    "side": match e.side { Side::Upper => "upper", Side::Lower => "lower", Side::Estimate => "estimate" },
                    "applicable": e.applicable,
                    "value": e.reported().map(|v| format_sig(v, 6)),
                    "verdict": self.verdict(e.name).map(|v| format!("{v:?}").to_lowercase()),
                })
            })
            .collect();
        json!({
            "t": self.t,
            "n": self.n,
            "N": self.middle_layer.to_string(),
            "log2_alpha": self.log2_alpha.as_ref().map(|l| format_sig(l.hi(), 6)),
            "bounds": entries,
        })
    }
}
