//! Numeric evaluation of the sublinear-error bound for general `t` and the
//! estimates it is assembled from.

use rug::{Float, Integer, Rational};
use serde_json::{json, Value};

use crate::bounds::real::{format_sig, Enclosure, DEFAULT_PRECISION};
use crate::error::{Error, Result};
use crate::poset::middle_layer_size;

/// Inputs of the sublinear-error bound.
#[derive(Clone, Debug, PartialEq)]
pub struct Section4Params {
    pub t: u32,
    pub n: u32,
    /// Constant in front of `(t log³ n / n)^{1/2}`.
    pub c: f64,
    pub epsilon: f64,
    pub epsilon_prime: f64,
}

impl Section4Params {
    pub const DEFAULT_C: f64 = 15.0;
    pub const DEFAULT_EPSILON: f64 = 0.1;

    pub fn new(t: u32, n: u32) -> Self {
        Section4Params {
            t,
            n,
            c: Self::DEFAULT_C,
            epsilon: Self::DEFAULT_EPSILON,
            epsilon_prime: Self::DEFAULT_EPSILON,
        }
    }

    /// `t < n / (100 log n)`. False for `n = 1`, where the threshold divides by zero.
    pub fn applicable(&self) -> bool {
        applicable(self.t, self.n)
    }
}

pub(crate) fn applicable(t: u32, n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let prec = DEFAULT_PRECISION;
    let lhs = Enclosure::from_u64(n as u64, prec).log2().scale_u(100).scale_u(t);
    lhs.hi() < &Float::with_val(prec, n)
}

/// Every quantity of the assembly, each as an enclosure.
#[derive(Clone, Debug)]
pub struct Section4Values {
    /// Middle layer size `N`.
    pub middle_layer: Enclosure,
    /// Exposure probability `p = (t log((t-1)n) / n)^{1/2}`.
    pub p: Enclosure,
    /// `s = p^{-1} log(t^{1/2}(t-1)n)`; `None` when `p = 0`, i.e. `(t-1)n = 1`.
    pub s: Option<Enclosure>,
    /// `(t-1) t^n e^{-n/(8t)}`, bounding the number of low points.
    pub low_point_bound: Enclosure,
    /// The looser `t^{n+1} e^{-n/(8t)}`.
    pub low_point_bound_loose: Enclosure,
    /// `M log((t-1)n+2) + N(-2p log p + p log((t-1)n+1))` with `M` replaced by the low-point bound.
    pub tilde_chain: Enclosure,
    /// `(2+ε) N t^{1/2} (log((t-1)n))^{3/2} / n^{1/2}`.
    pub tilde_bound: Enclosure,
    /// `N (1 + (4+2ε') t^{1/2} (log(t^{1/2}(t-1)n))^{3/2} / n^{1/2})`.
    pub hat_bound: Enclosure,
    pub assembled: Enclosure,
    /// `(1 + C (t log³ n / n)^{1/2}) N`.
    pub main_bound: Enclosure,
    /// `(t log³ n / n)^{1/2}`.
    pub error_scale: Enclosure,
}

#[derive(Clone, Debug)]
pub struct Section4Diagnostics {
    pub params: Section4Params,
    pub applicable: bool,
    /// `None` for `t = 1`, where `log((t-1)n)` is undefined.
    pub values: Option<Section4Values>,
    /// `assembled ≤ main_bound`, certified by the enclosures.
    pub ok: bool,
}

/// Evaluates the assembly at `params`. Nothing is asserted here: an
/// inapplicable point is flagged and still evaluated when `t ≥ 2`.
pub fn section4_diagnostics(params: &Section4Params) -> Result<Section4Diagnostics> {
    let Section4Params { t, n, .. } = *params;
    if n == 0 || t == 0 {
        return Err(Error::contract(format!("need t, n >= 1, got t={t}, n={n}")));
    }
    let applicable = params.applicable();
    if t == 1 {
        return Ok(Section4Diagnostics {
            params: params.clone(),
            applicable: false,
            values: None,
            ok: false,
        });
    }
    let values = evaluate(params, &middle_layer_size(t, n), DEFAULT_PRECISION);
    let ok = values.assembled.certainly_le(&values.main_bound);
    Ok(Section4Diagnostics {
        params: params.clone(),
        applicable,
        values: Some(values),
        ok,
    })
}

fn real(v: f64, prec: u32) -> Enclosure {
    Enclosure::from_f64(v, prec)
}

fn evaluate(params: &Section4Params, n_mid: &Integer, prec: u32) -> Section4Values {
    let (t, n) = (params.t, params.n);
    let int = |v: u64| Enclosure::from_u64(v, prec);
    let te = int(t as u64);
    let ne = int(n as u64);
    let big_n = Enclosure::from_integer(n_mid, prec);
    let one = int(1);
    let tm1n = int((t as u64 - 1) * n as u64);
    let log_tm1n = tm1n.log2();
    let p = te.mul(&log_tm1n).div(&ne).sqrt();
    let log_s = te.sqrt().mul(&tm1n).log2();
    let degenerate = (t as u64 - 1) * n as u64 == 1;
    let s = (!degenerate).then(|| log_s.div(&p));

    let decay = ne.div(&te.scale_u(8)).neg().exp();
    let t_pow_n = te.pow_u(n);
    let low_point_bound = int(t as u64 - 1).mul(&t_pow_n).mul(&decay);
    let low_point_bound_loose = t_pow_n.mul(&te).mul(&decay);

    // 0 log 0 = 0
    let p_log_p = if degenerate { int(0) } else { p.mul(&p.log2()) };
    let per_high_chain = p.mul(&int((t as u64 - 1) * n as u64 + 1).log2()).sub(&p_log_p.scale_u(2));
    let tilde_chain = low_point_bound
        .mul(&int((t as u64 - 1) * n as u64 + 2).log2())
        .add(&big_n.mul(&per_high_chain));

    let sqrt_t_over_n = te.div(&ne).sqrt();
    let tilde_bound = real(params.epsilon, prec)
        .add(&int(2))
        .mul(&big_n)
        .mul(&sqrt_t_over_n)
        .mul(&log_tm1n.mul(&log_tm1n.sqrt()));
    let hat_coeff = real(params.epsilon_prime, prec).scale_u(2).add(&int(4));
    let hat_bound = big_n.mul(&one.add(&hat_coeff.mul(&sqrt_t_over_n).mul(&log_s.mul(&log_s.sqrt()))));
    let assembled = tilde_bound.add(&hat_bound);

    let log_n = ne.log2();
    let error_scale = te.mul(&log_n.pow_u(3)).div(&ne).sqrt();
    let main_bound = one.add(&real(params.c, prec).mul(&error_scale)).mul(&big_n);
    Section4Values {
        middle_layer: big_n,
        p,
        s,
        low_point_bound,
        low_point_bound_loose,
        tilde_chain,
        tilde_bound,
        hat_bound,
        assembled,
        main_bound,
        error_scale,
    }
}

impl Section4Diagnostics {
    pub fn to_json(&self) -> Value {
        let p = &self.params;
        let mut out = json!({
            "t": p.t,
            "n": p.n,
            "C": p.c,
            "epsilon": p.epsilon,
            "epsilon_prime": p.epsilon_prime,
            "applicable": self.applicable,
            "ok": self.ok,
        });
        if let Some(v) = &self.values {
            let hi = |e: &Enclosure| Value::String(format_sig(e.hi(), 6));
            let fields = [
                ("N", &v.middle_layer),
                ("p", &v.p),
                ("lowPointBound", &v.low_point_bound),
                ("tildeChain", &v.tilde_chain),
                ("tildeBound", &v.tilde_bound),
                ("hatBound", &v.hat_bound),
                ("assembled", &v.assembled),
            ];
            for (k, e) in fields {
                out[k] = hi(e);
            }
            out["s"] = v.s.as_ref().map_or(Value::Null, hi);
            out["mainBound"] = Value::String(format_sig(v.main_bound.lo(), 6));
        }
        out
    }
}

/// Per-point pieces that decide `assembled ≤ (1 + C σ) N` for any `C`.
struct CachedPoint {
    assembled: Enclosure,
    middle_layer: Enclosure,
    error_scale: Enclosure,
}

impl CachedPoint {
    fn holds(&self, c: &Enclosure) -> bool {
        let main = Enclosure::from_u64(1, c.prec()).add(&c.mul(&self.error_scale)).mul(&self.middle_layer);
        self.assembled.certainly_le(&main)
    }
}

/// Least `C`, in steps of `0.001`, for which the assembled estimate stays
/// below the main bound at every grid point. Found by bisection over the
/// thousandths.
pub fn minimal_empirical_c(grid: &[(u32, u32)], epsilon: f64, epsilon_prime: f64) -> Result<Rational> {
    if grid.is_empty() {
        return Err(Error::contract("minimal C needs a nonempty grid"));
    }
    let mut points = Vec::with_capacity(grid.len());
    for &(t, n) in grid {
        if t < 2 || !applicable(t, n) {
            return Err(Error::contract(format!("(t={t}, n={n}) is outside t < n/(100 log n)")));
        }
        let params = Section4Params {
            epsilon,
            epsilon_prime,
            ..Section4Params::new(t, n)
        };
        let v = evaluate(&params, &middle_layer_size(t, n), DEFAULT_PRECISION);
        points.push(CachedPoint {
            assembled: v.assembled,
            middle_layer: v.middle_layer,
            error_scale: v.error_scale,
        });
    }
    let holds = |k: u64| {
        let c = Enclosure::from_rational(&Rational::from((k, 1000u32)), DEFAULT_PRECISION);
        points.iter().all(|pt| pt.holds(&c))
    };
    let mut hi = 1000u64;
    while !holds(hi) {
        hi *= 2;
        if hi > 1 << 40 {
            return Err(Error::Internal("minimal C search did not terminate".into()));
        }
    }
    let mut lo = 0u64;
    if holds(lo) {
        return Ok(Rational::new());
    }
    // invariant: holds(hi) and !holds(lo)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Rational::from((hi, 1000u32)))
}

/// `max_points (assembled/N - 1) / σ`, the exact minimal `C` as an
/// enclosure; the bisection result lies within `0.001` above it.
pub fn minimal_c_closed_form(grid: &[(u32, u32)], epsilon: f64, epsilon_prime: f64) -> Result<Enclosure> {
    let mut best: Option<Enclosure> = None;
    for &(t, n) in grid {
        let params = Section4Params {
            epsilon,
            epsilon_prime,
            ..Section4Params::new(t, n)
        };
        let v = evaluate(&params, &middle_layer_size(t, n), DEFAULT_PRECISION);
        let one = Enclosure::from_u64(1, DEFAULT_PRECISION);
        let c = v.assembled.div(&v.middle_layer).sub(&one).div(&v.error_scale);
        best = Some(match best {
            None => c,
            Some(b) => b.max(&c),
        });
    }
    best.ok_or_else(|| Error::contract("minimal C needs a nonempty grid"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::count_low_points;

    #[test]
    fn applicability() {
        assert!(Section4Params::new(2, 65536).applicable());
        assert!(!Section4Params::new(2, 1024).applicable());
        assert!(!Section4Params::new(1, 1).applicable());
        // 1000 / (100 log 1000) is just above 1
        assert!(Section4Params::new(1, 1000).applicable());
    }

    #[test]
    fn exposure_probability() {
        let d = section4_diagnostics(&Section4Params::new(2, 65536)).unwrap();
        let v = d.values.unwrap();
        // sqrt(2 * 16 / 65536)
        let want = Float::with_val(128, 0.0220970869120796);
        assert!((Float::with_val(128, v.p.hi() - &want)).abs() < 1e-12);
    }

    #[test]
    fn low_points_under_bound() {
        let d = section4_diagnostics(&Section4Params::new(2, 4)).unwrap();
        let v = d.values.unwrap();
        let exact = Enclosure::from_integer(&count_low_points(2, 4), 128);
        assert!(exact.certainly_le(&v.low_point_bound));
        // 32 e^{-1/4}
        assert!((v.low_point_bound_loose.hi().to_f64() - 24.9216).abs() < 1e-3);
        assert!((v.low_point_bound.hi().to_f64() - 12.4608).abs() < 1e-3);
    }

    #[test]
    fn t_one_is_flagged() {
        let d = section4_diagnostics(&Section4Params::new(1, 5000)).unwrap();
        assert!(!d.applicable && d.values.is_none());
    }

    #[test]
    fn single_point_minimal_c_meets_the_bound() {
        let grid = [(2, 1 << 16)];
        let c = minimal_empirical_c(&grid, 0.1, 0.1).unwrap();
        let exact = minimal_c_closed_form(&grid, 0.1, 0.1).unwrap();
        let c_f = Float::with_val(128, &c);
        assert!(*exact.hi() <= c_f);
        let below = Float::with_val(128, &c_f - 0.001);
        assert!(below < *exact.lo());
    }

    #[test]
    fn minimal_c_grows_with_epsilon() {
        let grid = [(2, 1 << 14), (2, 1 << 15)];
        let a = minimal_empirical_c(&grid, 0.1, 0.1).unwrap();
        let b = minimal_empirical_c(&grid, 0.5, 0.1).unwrap();
        let c = minimal_empirical_c(&grid, 0.5, 0.5).unwrap();
        assert!(a <= b && b <= c);
        assert!(minimal_empirical_c(&[], 0.1, 0.1).is_err());
        assert!(minimal_empirical_c(&[(2, 1024)], 0.1, 0.1).is_err());
    }
}
