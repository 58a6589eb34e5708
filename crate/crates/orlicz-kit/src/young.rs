//! Young-type functions `Φ:[0,∞]→[0,∞]`: evaluation, the O'Neil generalized
//! inverse, complementary (conjugate) functions and the Δ₂/∇₂ growth checks.
//!
//! Families with a small-r / large-r definition are made total by fixing the
//! breakpoints 1/e and e and bridging the middle band with a straight line in
//! log-log coordinates. Since all such families have log-factor 1 at both
//! breakpoints, the bridge is exactly the pure power `t^p` (or `t^{e^p}` for
//! the exponential family).

use crate::ext::Ext;
use crate::report::CheckReport;
use crate::{Error, Result};

pub const BRIDGE_LO: f64 = core::f64::consts::E; // reciprocal: band is [1/e, e]

/// Strictly increasing tabulated function with power-law extrapolation at
/// both ends and an optional jump to +∞ above a threshold.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    ts: Vec<f64>,
    vs: Vec<f64>,
    lo_slope: f64,
    hi_slope: f64,
    inf_from: Option<f64>,
    convex: bool,
}

impl Table {
    /// Builds a table from raw `(t, v)` samples. Points are sorted, duplicate
    /// abscissae merged (keeping the larger ordinate) and ordinates forced
    /// nondecreasing by a running max.
    pub fn new(mut points: Vec<(f64, f64)>) -> Result<Table> {
        points.retain(|&(t, v)| t.is_finite() && t > 0.0 && v.is_finite() && v >= 0.0);
        if points.len() < 2 {
            return Err(Error::invalid("table needs at least two finite points"));
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut ts: Vec<f64> = Vec::with_capacity(points.len());
        let mut vs: Vec<f64> = Vec::with_capacity(points.len());
        for (t, v) in points {
            if let Some(&last) = ts.last() {
                if (t - last) / t < 1e-14 {
                    let lv = vs.last_mut().unwrap();
                    *lv = lv.max(v);
                    continue;
                }
            }
            ts.push(t);
            vs.push(v);
        }
        for i in 1..vs.len() {
            if vs[i] < vs[i - 1] {
                vs[i] = vs[i - 1];
            }
        }
        if ts.len() < 2 {
            return Err(Error::invalid("table collapsed to fewer than two points"));
        }
        let slope = |i: usize, j: usize| -> f64 {
            if vs[i] > 0.0 && vs[j] > 0.0 && vs[j] > vs[i] {
                (vs[j] / vs[i]).ln() / (ts[j] / ts[i]).ln()
            } else {
                1.0
            }
        };
        let n = ts.len();
        let lo_slope = slope(0, 1).max(1e-9);
        let hi_slope = slope(n - 2, n - 1).max(1e-9);
        let mut convex = true;
        let mut prev = f64::NEG_INFINITY;
        for i in 1..n {
            let s = (vs[i] - vs[i - 1]) / (ts[i] - ts[i - 1]);
            if s < prev * (1.0 - 1e-9) - 1e-12 {
                convex = false;
                break;
            }
            prev = s;
        }
        Ok(Table {
            ts,
            vs,
            lo_slope,
            hi_slope,
            inf_from: None,
            convex,
        })
    }

    pub fn with_inf_from(mut self, b: f64) -> Table {
        self.inf_from = Some(b);
        self
    }

    pub fn breakpoints(&self) -> impl Iterator<Item = f64> + '_ {
        self.ts.iter().copied()
    }

    fn eval(&self, t: f64) -> f64 {
        if let Some(b) = self.inf_from {
            if t > b {
                return f64::INFINITY;
            }
        }
        if t <= 0.0 {
            return 0.0;
        }
        let n = self.ts.len();
        if t <= self.ts[0] {
            if self.vs[0] == 0.0 {
                return 0.0;
            }
            return self.vs[0] * (t / self.ts[0]).powf(self.lo_slope);
        }
        if t >= self.ts[n - 1] {
            return self.vs[n - 1] * (t / self.ts[n - 1]).powf(self.hi_slope);
        }
        let j = match self.ts.binary_search_by(|x| x.total_cmp(&t)) {
            Ok(j) => return self.vs[j],
            Err(j) => j,
        };
        let (t0, t1, v0, v1) = (self.ts[j - 1], self.ts[j], self.vs[j - 1], self.vs[j]);
        if v0 > 0.0 && v1 > 0.0 {
            // log-log linear: exact on power-law segments
            let w = (t / t0).ln() / (t1 / t0).ln();
            v0 * (v1 / v0).powf(w)
        } else {
            v0 + (v1 - v0) * (t - t0) / (t1 - t0)
        }
    }

    fn a_value(&self) -> f64 {
        if self.vs[0] > 0.0 {
            0.0
        } else {
            let k = self.vs.iter().rposition(|&v| v == 0.0).unwrap();
            self.ts[k]
        }
    }
}

/// The parametric families. `p`-type exponents are validated at construction.
#[derive(Clone, Debug, PartialEq)]
pub enum YoungFamily {
    /// t^p, p ≥ 1
    Power { p: f64 },
    /// c·t^p with c > 0, p > 1; arises as the conjugate of `Power`
    ScaledPower { coef: f64, p: f64 },
    /// t^p (log 1/t)^{-p1} small / t^p (log t)^{p1} large, bridged by t^p
    PowerLog { p: f64, p1: f64 },
    /// exp(-t^{-p}) small / exp(t^p) large, bridged by t^{e^p}
    ExpPower { p: f64 },
    /// max(0, t^p - 1)
    PowerMinusOne { p: f64 },
    /// max(t^p, t^q)
    MaxPower { p: f64, q: f64 },
    /// 0 on [0,1], ∞ beyond; the Orlicz function of L^∞
    StepInfinity,
    Tabulated(Table),
}

/// A Young-type function: a base family optionally precomposed with `t^θ`
/// (used by the ∇₂ power-composition and the `|g|^η` norm identities).
#[derive(Clone, Debug, PartialEq)]
pub struct YoungFn {
    family: YoungFamily,
    inner_exp: f64,
}

impl YoungFn {
    pub fn new(family: YoungFamily) -> Result<YoungFn> {
        match &family {
            YoungFamily::Power { p } => {
                if !p.is_finite() || *p < 1.0 {
                    return Err(Error::invalid("power: requires p >= 1"));
                }
            }
            YoungFamily::ScaledPower { coef, p } => {
                if !(coef.is_finite() && *coef > 0.0 && p.is_finite() && *p > 1.0) {
                    return Err(Error::invalid("scaled power: requires coef > 0, p > 1"));
                }
            }
            YoungFamily::PowerLog { p, p1 } => {
                if !(p.is_finite() && p1.is_finite() && *p >= 1.0 && p + p1 > 0.0) {
                    return Err(Error::invalid("powerlog: requires p >= 1 and p + p1 > 0"));
                }
            }
            YoungFamily::ExpPower { p } => {
                if !(p.is_finite() && *p > 0.0) {
                    return Err(Error::invalid("exppower: requires p > 0"));
                }
            }
            YoungFamily::PowerMinusOne { p } => {
                if !(p.is_finite() && *p >= 1.0) {
                    return Err(Error::invalid("powerminus1: requires p >= 1"));
                }
            }
            YoungFamily::MaxPower { p, q } => {
                if !(p.is_finite() && q.is_finite() && *p >= 1.0 && *q >= 1.0) {
                    return Err(Error::invalid("maxpower: requires p, q >= 1"));
                }
            }
            YoungFamily::StepInfinity | YoungFamily::Tabulated(_) => {}
        }
        Ok(YoungFn {
            family,
            inner_exp: 1.0,
        })
    }

    pub fn power(p: f64) -> Result<YoungFn> {
        YoungFn::new(YoungFamily::Power { p })
    }

    pub fn family(&self) -> &YoungFamily {
        &self.family
    }

    pub fn inner_exp(&self) -> f64 {
        self.inner_exp
    }

    /// The descriptor of `t ↦ Φ(t^θ)`.
    pub fn precompose_power(&self, theta: f64) -> Result<YoungFn> {
        if !(theta.is_finite() && theta > 0.0) {
            return Err(Error::invalid("inner exponent must be positive"));
        }
        Ok(YoungFn {
            family: self.family.clone(),
            inner_exp: self.inner_exp * theta,
        })
    }

    /// a(Φ) = sup{t : Φ(t) = 0}.
    pub fn a(&self) -> f64 {
        let base = match &self.family {
            YoungFamily::Power { .. }
            | YoungFamily::ScaledPower { .. }
            | YoungFamily::PowerLog { .. }
            | YoungFamily::ExpPower { .. }
            | YoungFamily::MaxPower { .. } => 0.0,
            YoungFamily::PowerMinusOne { .. } | YoungFamily::StepInfinity => 1.0,
            YoungFamily::Tabulated(t) => t.a_value(),
        };
        inv_power(base, self.inner_exp)
    }

    /// b(Φ) = inf{t : Φ(t) = ∞}.
    pub fn b(&self) -> Ext {
        let base = match &self.family {
            YoungFamily::StepInfinity => 1.0,
            YoungFamily::Tabulated(t) => t.inf_from.unwrap_or(f64::INFINITY),
            _ => f64::INFINITY,
        };
        if base.is_infinite() {
            Ext::INF
        } else {
            Ext::new(inv_power(base, self.inner_exp))
        }
    }

    /// True for families that are genuinely convex (Young functions proper);
    /// the bridged families are only equivalent to Young functions.
    pub fn is_young(&self) -> bool {
        if self.inner_exp != 1.0 {
            return false;
        }
        match &self.family {
            YoungFamily::Power { .. }
            | YoungFamily::ScaledPower { .. }
            | YoungFamily::PowerMinusOne { .. }
            | YoungFamily::MaxPower { .. }
            | YoungFamily::StepInfinity => true,
            YoungFamily::Tabulated(t) => t.convex && t.inf_from.is_none(),
            YoungFamily::PowerLog { .. } | YoungFamily::ExpPower { .. } => false,
        }
    }

    /// Φ(t) on the extended axis.
    pub fn eval(&self, t: Ext) -> Ext {
        if t.is_infinite() {
            return Ext::INF;
        }
        let t = powi_safe(t.get(), self.inner_exp);
        Ext::new(self.eval_base(t))
    }

    fn eval_base(&self, t: f64) -> f64 {
        if t == 0.0 {
            return 0.0;
        }
        // families that are strictly positive on (0,∞) are kept off exact
        // zero: an underflow would otherwise collapse the generalized
        // inverse roundtrip near the bottom of the float range
        let pos = |v: f64| v.max(f64::MIN_POSITIVE);
        match &self.family {
            YoungFamily::Power { p } => pos(t.powf(*p)),
            YoungFamily::ScaledPower { coef, p } => pos(coef * t.powf(*p)),
            YoungFamily::PowerLog { p, p1 } => {
                if t <= 1.0 / BRIDGE_LO {
                    pos(t.powf(*p) * (1.0 / t).ln().powf(-p1))
                } else if t >= BRIDGE_LO {
                    t.powf(*p) * t.ln().powf(*p1)
                } else {
                    t.powf(*p)
                }
            }
            YoungFamily::ExpPower { p } => {
                if t <= 1.0 / BRIDGE_LO {
                    pos((-t.powf(-p)).exp())
                } else if t >= BRIDGE_LO {
                    t.powf(*p).exp()
                } else {
                    t.powf(p.exp())
                }
            }
            // expm1/ln around t = 1 avoids the cancellation in t^p - 1
            YoungFamily::PowerMinusOne { p } => (p * t.ln()).exp_m1().max(0.0),
            YoungFamily::MaxPower { p, q } => pos(t.powf(*p).max(t.powf(*q))),
            YoungFamily::StepInfinity => {
                if t <= 1.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            YoungFamily::Tabulated(tab) => tab.eval(t),
        }
    }

    /// The O'Neil generalized inverse Φ⁻¹(u) = inf{t ≥ 0 : Φ(t) > u}.
    /// Closed forms where the family admits them, monotone bisection
    /// (returning the lower bracket endpoint) otherwise.
    pub fn inverse(&self, u: Ext) -> Ext {
        if u.is_infinite() {
            return Ext::INF;
        }
        let u = u.get();
        let base = match &self.family {
            YoungFamily::Power { p } => u.powf(1.0 / p),
            YoungFamily::ScaledPower { coef, p } => (u / coef).powf(1.0 / p),
            YoungFamily::ExpPower { p } => {
                let lo = (-BRIDGE_LO.powf(*p)).exp(); // Φ(1/e)
                let hi = BRIDGE_LO.powf(*p).exp(); // Φ(e)
                if u <= lo {
                    // exp(-t^{-p}) = u  =>  t = (-ln u)^{-1/p}
                    (-u.ln()).powf(-1.0 / p)
                } else if u >= hi {
                    u.ln().powf(1.0 / p)
                } else {
                    u.powf((-p).exp())
                }
            }
            YoungFamily::PowerMinusOne { p } => (u.ln_1p() / p).exp(),
            YoungFamily::MaxPower { p, q } => {
                let (lo, hi) = (p.min(*q), p.max(*q));
                if u <= 1.0 {
                    u.powf(1.0 / lo)
                } else {
                    u.powf(1.0 / hi)
                }
            }
            YoungFamily::StepInfinity => 1.0,
            YoungFamily::PowerLog { .. } | YoungFamily::Tabulated(_) => {
                self.bisect_inverse_base(u)
            }
        };
        let mut t = inv_power(base, self.inner_exp);
        // inf semantics in floats: the returned point must satisfy Φ(t) ≤ u,
        // so walk a closed-form result down over the last rounding ulps
        if t.is_finite() && t > 0.0 {
            for _ in 0..8 {
                if self.eval_base(powi_safe(t, self.inner_exp)) <= u {
                    break;
                }
                t = t.next_down();
            }
        }
        Ext::new(t)
    }

    /// True when `inverse` is evaluated by bisection rather than a closed form.
    pub fn inverse_is_bisected(&self) -> bool {
        matches!(
            self.family,
            YoungFamily::PowerLog { .. } | YoungFamily::Tabulated(_)
        )
    }

    /// Φ⁻¹(e^{lu}); see [`YoungFn::ln_inverse_log`].
    pub fn inverse_log(&self, lu: f64) -> f64 {
        self.ln_inverse_log(lu).exp()
    }

    /// ln Φ⁻¹(e^{lu}) written in terms of lu = ln u, usable far outside the
    /// f64 range of u (−∞ encodes an inverse of zero). Closed-form families
    /// branch on lu directly; bisected families fall back to the ordinary
    /// inverse at the clamped u — they only appear at desk scales.
    pub fn ln_inverse_log(&self, lu: f64) -> f64 {
        let base = match &self.family {
            YoungFamily::Power { p } => lu / p,
            YoungFamily::ScaledPower { coef, p } => (lu - coef.ln()) / p,
            YoungFamily::ExpPower { p } => {
                let edge = BRIDGE_LO.powf(*p); // ln Φ(e) = e^p, ln Φ(1/e) = -e^p
                if lu <= -edge {
                    (-1.0 / p) * (-lu).ln()
                } else if lu >= edge {
                    (1.0 / p) * lu.ln()
                } else {
                    lu * (-p).exp()
                }
            }
            YoungFamily::PowerMinusOne { p } => {
                if lu > 50.0 {
                    lu / p
                } else {
                    lu.exp().ln_1p() / p
                }
            }
            YoungFamily::MaxPower { p, q } => {
                let (lo, hi) = (p.min(*q), p.max(*q));
                if lu <= 0.0 {
                    lu / lo
                } else {
                    lu / hi
                }
            }
            YoungFamily::StepInfinity => 0.0,
            YoungFamily::PowerLog { .. } | YoungFamily::Tabulated(_) => {
                return self
                    .inverse(Ext::new(lu.exp().clamp(0.0, f64::MAX)))
                    .get()
                    .ln();
            }
        };
        base / self.inner_exp
    }

    fn bisect_inverse_base(&self, u: f64) -> f64 {
        // Expand the upper bracket until Φ(hi) > u.
        let mut hi = 1.0f64;
        let mut guard = 0;
        while self.eval_base(hi) <= u {
            hi *= 2.0;
            guard += 1;
            if guard > 1100 {
                return f64::INFINITY;
            }
        }
        let mut lo = 0.0f64;
        // Keep the invariant Φ(lo) <= u < Φ(hi); the infimum is approached
        // from below, so the lower endpoint is returned.
        for _ in 0..200 {
            let mid = if lo == 0.0 { hi / 2.0 } else { 0.5 * (lo + hi) };
            if self.eval_base(mid) > u {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 1e-14 * hi {
                break;
            }
        }
        lo
    }

    /// Interior non-smooth points of the family (used by the finite-difference
    /// derivative to switch to one-sided stencils).
    pub fn kink_points(&self) -> Vec<f64> {
        let base: Vec<f64> = match &self.family {
            YoungFamily::PowerMinusOne { .. } | YoungFamily::MaxPower { .. } => vec![1.0],
            YoungFamily::PowerLog { .. } | YoungFamily::ExpPower { .. } => {
                vec![1.0 / BRIDGE_LO, BRIDGE_LO]
            }
            YoungFamily::StepInfinity => vec![1.0],
            YoungFamily::Tabulated(t) => t.breakpoints().collect(),
            _ => vec![],
        };
        base.into_iter()
            .map(|t| inv_power(t, self.inner_exp))
            .collect()
    }
}

fn powi_safe(t: f64, theta: f64) -> f64 {
    if theta == 1.0 {
        t
    } else {
        t.powf(theta)
    }
}

fn inv_power(t: f64, theta: f64) -> f64 {
    if theta == 1.0 {
        t
    } else {
        t.powf(1.0 / theta)
    }
}

// ---------------------------------------------------------------------------
// Complementary (conjugate) function
// ---------------------------------------------------------------------------

impl YoungFn {
    /// The complementary function Φ̃(t) = sup{tu − Φ(u) : u ∈ [0,∞)}.
    ///
    /// Closed forms for the power and step families; for the remaining convex
    /// families the supremum is located by golden-section search (the
    /// objective is concave in u) and tabulated on 512 log-spaced abscissae.
    /// Non-convex descriptors are rejected.
    pub fn complementary(&self) -> Result<YoungFn> {
        if !self.is_young() {
            return Err(Error::NotYoung);
        }
        match &self.family {
            YoungFamily::Power { p } if *p == 1.0 => YoungFn::new(YoungFamily::StepInfinity),
            YoungFamily::Power { p } => {
                let q = p / (p - 1.0);
                let coef = (p - 1.0) * p.powf(-q);
                YoungFn::new(YoungFamily::ScaledPower { coef, p: q })
            }
            YoungFamily::ScaledPower { coef, p } => {
                // conjugate of c u^p: (p-1) p^{-q} c^{1-q} t^q with q = p/(p-1)
                let q = p / (p - 1.0);
                let c2 = (p - 1.0) * p.powf(-q) * coef.powf(1.0 - q);
                YoungFn::new(YoungFamily::ScaledPower { coef: c2, p: q })
            }
            YoungFamily::StepInfinity => YoungFn::new(YoungFamily::Power { p: 1.0 }),
            _ => self.numeric_complementary(),
        }
    }

    fn numeric_complementary(&self) -> Result<YoungFn> {
        let objective = |t: f64, u: f64| -> f64 {
            let phi = self.eval_base(u);
            if phi.is_infinite() {
                f64::NEG_INFINITY
            } else {
                t * u - phi
            }
        };
        let ts = crate::util::log2_grid(-26.0, 26.0, 10);
        let mut points = Vec::with_capacity(ts.len());
        let mut inf_from: Option<f64> = None;
        for &t in &ts {
            // Grow the search interval until the objective stops improving.
            let mut hi = 1.0f64;
            let mut grew = 0;
            while objective(t, 2.0 * hi) > objective(t, hi) {
                hi *= 2.0;
                grew += 1;
                if grew > 600 {
                    break;
                }
            }
            if grew > 600 {
                // Linear-growth tail dominated by t: the conjugate jumps to ∞.
                if inf_from.is_none() {
                    inf_from = Some(t);
                }
                continue;
            }
            // Golden-section maximization of the concave objective on [0, 2hi].
            let (mut a, mut b) = (0.0f64, 2.0 * hi);
            let inv_phi = 0.618_033_988_749_894_9;
            let mut x1 = b - inv_phi * (b - a);
            let mut x2 = a + inv_phi * (b - a);
            let (mut f1, mut f2) = (objective(t, x1), objective(t, x2));
            for _ in 0..160 {
                if f1 < f2 {
                    a = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a + inv_phi * (b - a);
                    f2 = objective(t, x2);
                } else {
                    b = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = b - inv_phi * (b - a);
                    f1 = objective(t, x1);
                }
            }
            let v = objective(t, 0.5 * (a + b)).max(0.0);
            points.push((t, v));
        }
        if points.len() < 2 {
            return Err(Error::invalid(
                "complementary: objective unbounded on the whole grid",
            ));
        }
        let mut table = Table::new(points)?;
        if let Some(b) = inf_from {
            // the jump sits between the last finite sample and the first
            // unbounded one; place it just below the unbounded abscissa
            table = table.with_inf_from(b * (1.0 - 1e-12));
        }
        YoungFn::new(YoungFamily::Tabulated(table))
    }
}

// ---------------------------------------------------------------------------
// Growth classes
// ---------------------------------------------------------------------------

/// Default scan grid for the Δ₂/∇₂ checks: t ∈ 2^{-30} … 2^{30}, four points
/// per octave. Dyadic coverage catches power-law violations at every scale.
pub fn default_growth_grid() -> Vec<f64> {
    crate::util::log2_grid(-30.0, 30.0, 4)
}

pub fn default_nabla2_candidates() -> Vec<f64> {
    vec![1.0625, 1.125, 1.25, 1.5, 2.0, 3.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0]
}

impl YoungFn {
    /// Δ₂ scan: sup over the grid of Φ(2t)/Φ(t); ∞/∞ counts as failure.
    pub fn check_delta2(&self, t_grid: &[f64]) -> CheckReport {
        let mut worst = Ext::ZERO;
        let mut witness = None;
        for &t in t_grid {
            let lo = self.eval(Ext::new(t));
            let hi = self.eval(Ext::new(2.0 * t));
            let ratio = if lo.is_zero() && hi.is_zero() {
                continue;
            } else if lo.is_zero() || hi.is_infinite() {
                Ext::INF
            } else {
                Ext::new(hi.get() / lo.get())
            };
            if ratio > worst {
                worst = ratio;
                witness = Some(t);
            }
        }
        let mut rep = CheckReport::new("delta2", worst.is_finite(), worst);
        if let Some(w) = witness {
            rep = rep.with_witness(w);
        }
        rep
    }

    /// ∇₂ scan: find the smallest candidate k > 1 with Φ(t) ≤ Φ(kt)/(2k) on
    /// the whole grid.
    pub fn check_nabla2(&self, t_grid: &[f64], k_candidates: &[f64]) -> CheckReport {
        let mut ks: Vec<f64> = k_candidates.iter().copied().filter(|&k| k > 1.0).collect();
        ks.sort_by(f64::total_cmp);
        for &k in &ks {
            let ok = t_grid.iter().all(|&t| {
                let lhs = self.eval(Ext::new(t));
                let rhs = self.eval(Ext::new(k * t));
                if rhs.is_infinite() {
                    true
                } else if lhs.is_infinite() {
                    false
                } else {
                    lhs.get() * 2.0 * k <= rhs.get() * (1.0 + 1e-12)
                }
            });
            if ok {
                return CheckReport::new("nabla2", true, Ext::new(k));
            }
        }
        CheckReport::new("nabla2", false, Ext::INF)
            .with_detail("no candidate k satisfies 2k*phi(t) <= phi(kt) on the grid")
    }

    /// Returns θ ∈ (0,1] with k^{2(1/θ−1)} ≤ 2 (the largest such θ, computed
    /// analytically) together with the descriptor of t ↦ Φ(t^θ).
    ///
    /// `forced_theta` short-circuits the computation (θ = 1 returns `self`).
    pub fn power_compose_nabla2(
        &self,
        t_grid: &[f64],
        k_candidates: &[f64],
        forced_theta: Option<f64>,
    ) -> Result<(f64, YoungFn)> {
        if let Some(theta) = forced_theta {
            return Ok((theta, self.precompose_power(theta)?));
        }
        let rep = self.check_nabla2(t_grid, k_candidates);
        if !rep.pass {
            return Err(Error::NotCertified("nabla2".into()));
        }
        let k = rep.fitted.get();
        // boundary of k^{2(1/θ-1)} <= 2:  θ = 1 / (1 + ln2 / (2 ln k))
        let theta = 1.0 / (1.0 + std::f64::consts::LN_2 / (2.0 * k.ln()));
        Ok((theta, self.precompose_power(theta)?))
    }

    /// Lemma-style derivative doubling for Δ₂ functions: fits C with
    /// Φ'(2t) ≤ C·Φ'(t) over the grid, derivatives by symmetric finite
    /// differences (one-sided next to kinks).
    pub fn check_derivative_doubling(&self, t_grid: &[f64]) -> Result<CheckReport> {
        let d2 = self.check_delta2(t_grid);
        if !d2.pass {
            return Err(Error::NotCertified("delta2".into()));
        }
        let kinks = self.kink_points();
        let deriv = |t: f64| -> f64 {
            let h = t * 1e-5;
            let near_kink = kinks.iter().any(|&k| (t - k).abs() <= 2.0 * h);
            if near_kink {
                // one-sided difference on the right of the kink region
                let a = self.eval(Ext::new(t + h)).get();
                let b = self.eval(Ext::new(t + 2.0 * h)).get();
                (b - a) / h
            } else {
                let a = self.eval(Ext::new(t - h)).get();
                let b = self.eval(Ext::new(t + h)).get();
                (b - a) / (2.0 * h)
            }
        };
        let mut worst = 0.0f64;
        let mut witness = None;
        for &t in t_grid {
            let d1 = deriv(t);
            let d2v = deriv(2.0 * t);
            if d1 <= 0.0 {
                continue;
            }
            let r = d2v / d1;
            if r > worst {
                worst = r;
                witness = Some(t);
            }
        }
        let mut rep = CheckReport::new("derivative-doubling", worst.is_finite(), Ext::new(worst));
        if let Some(w) = witness {
            rep = rep.with_witness(w);
        }
        Ok(rep)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn yf(s: &str) -> YoungFn {
        crate::parse::parse_young(s).unwrap()
    }

    #[test]
    fn power_eval_and_inverse() {
        let phi = yf("power:p=2");
        assert_eq!(phi.eval(Ext::new(3.0)), Ext::new(9.0));
        assert_eq!(phi.inverse(Ext::new(4.0)), Ext::new(2.0));
        assert_eq!(phi.eval(Ext::INF), Ext::INF);
        assert_eq!(phi.inverse(Ext::INF), Ext::INF);
    }

    #[test]
    fn step_infinity_matches_linfty_profile() {
        let psi = yf("stepinf");
        assert_eq!(psi.eval(Ext::new(0.5)), Ext::ZERO);
        assert_eq!(psi.eval(Ext::new(2.0)), Ext::INF);
        assert_eq!(psi.eval(Ext::new(1.0)), Ext::ZERO); // left continuous at b
        assert_eq!(psi.inverse(Ext::new(1000.0)), Ext::new(1.0));
        assert_eq!(psi.inverse(Ext::ZERO), Ext::new(1.0));
        assert_eq!(psi.a(), 1.0);
        assert_eq!(psi.b(), Ext::new(1.0));
    }

    #[test]
    fn power_minus_one_examples() {
        let phi = yf("powerminus1:p=2");
        assert_eq!(phi.eval(Ext::new(1.0)), Ext::ZERO);
        assert_eq!(phi.eval(Ext::new(2.0)), Ext::new(3.0));
        assert_eq!(phi.inverse(Ext::new(3.0)), Ext::new(2.0));
        assert_eq!(phi.inverse(Ext::ZERO), Ext::new(1.0));
        // bisection oracle for the closed form
        let by_bisect = |u: f64| {
            let mut lo = 0.0;
            let mut hi = 64.0;
            for _ in 0..200 {
                let m = 0.5 * (lo + hi);
                if phi.eval(Ext::new(m)).get() > u {
                    hi = m;
                } else {
                    lo = m;
                }
            }
            lo
        };
        for u in [0.0, 0.5, 3.0, 17.0] {
            assert!((phi.inverse(Ext::new(u)).get() - by_bisect(u)).abs() < 1e-9);
        }
    }

    #[test]
    fn exp_power_closed_inverse_agrees_with_bisection() {
        let phi = yf("exppower:p=1");
        for u in [1e-9, 1e-3, 0.5, 1.0, 3.0, 1e4, 1e9] {
            let t = phi.inverse(Ext::new(u)).get();
            // inverse property on strictly increasing branch
            let back = phi.eval(Ext::new(t)).get();
            assert!(
                crate::util::rel_diff(back, u) < 1e-9,
                "u={u} t={t} back={back}"
            );
        }
    }

    #[test]
    fn complementary_of_linear_is_step() {
        let phi = yf("power:p=1");
        let conj = phi.complementary().unwrap();
        assert_eq!(conj.eval(Ext::new(0.9)), Ext::ZERO);
        assert_eq!(conj.eval(Ext::new(1.1)), Ext::INF);
    }

    #[test]
    fn complementary_of_half_square_is_itself() {
        // Φ(t) = t²/2 is self-conjugate; grid Legendre-transform oracle
        let phi = YoungFn::new(YoungFamily::ScaledPower { coef: 0.5, p: 2.0 }).unwrap();
        let conj = phi.complementary().unwrap();
        for t in [0.125, 1.0, 7.5, 300.0] {
            // oracle: maximize t*u - u^2/2 on a dense grid
            let mut best = 0.0f64;
            let mut u = 0.0;
            while u <= 4.0 * t {
                best = best.max(t * u - 0.5 * u * u);
                u += t * 1e-4;
            }
            let got = conj.eval(Ext::new(t)).get();
            assert!(crate::util::rel_diff(got, best) < 1e-6, "t={t} got={got} best={best}");
            assert!(crate::util::rel_diff(got, 0.5 * t * t) < 1e-9);
        }
    }

    #[test]
    fn eq_4_1_sandwich_for_power_three() {
        let phi = yf("power:p=3");
        let conj = phi.complementary().unwrap();
        let prod = phi.inverse(Ext::ONE).get() * conj.inverse(Ext::ONE).get();
        assert!((1.0..=2.0).contains(&prod), "prod={prod}");
    }

    #[test]
    fn delta2_scan_examples() {
        let grid = default_growth_grid();
        let rep = yf("power:p=2").check_delta2(&grid);
        assert!(rep.pass);
        assert!((rep.fitted.get() - 4.0).abs() < 1e-9);

        let rep = yf("exppower:p=1").check_delta2(&grid);
        assert!(!rep.pass, "exp family must fail delta2");

        let rep = yf("powerlog:p=2,p1=1").check_delta2(&grid);
        assert!(rep.pass && rep.fitted.is_finite());
        // the asymptotic ratio tends to 2^p; the fitted sup sees the bridge
        let phi = yf("powerlog:p=2,p1=1");
        let big = 2f64.powi(30);
        let tail_ratio =
            phi.eval(Ext::new(2.0 * big)).get() / phi.eval(Ext::new(big)).get();
        assert!((tail_ratio - 4.0).abs() < 0.2, "tail ratio {tail_ratio}");
    }

    #[test]
    fn nabla2_scan_examples() {
        let grid = default_growth_grid();
        let ks = default_nabla2_candidates();
        let rep = yf("power:p=1").check_nabla2(&grid, &ks);
        assert!(!rep.pass, "linear function is not nabla2");

        let rep = yf("power:p=2").check_nabla2(&grid, &ks);
        assert!(rep.pass);
        assert_eq!(rep.fitted.get(), 2.0);

        // max(r^2, 3r-2): the paper's non-convex-composition witness; k = 8 works
        let tab = remark_4_7_function();
        let rep = tab.check_nabla2(&grid, &ks);
        assert!(rep.pass);
        assert!(rep.fitted.get() <= 8.0);
        let rep8 = tab.check_nabla2(&grid, &[8.0]);
        assert!(rep8.pass, "k=8 must certify");
    }

    /// max(r², 3r−2) assembled as an exact tabulated function.
    pub(crate) fn remark_4_7_function() -> YoungFn {
        let mut pts = Vec::new();
        let mut t = 1e-6f64;
        while t <= 1e6 {
            let v = (t * t).max(3.0 * t - 2.0);
            pts.push((t, v));
            t *= 1.05;
        }
        for t in [1.0f64, 1.5, 2.0] {
            pts.push((t, (t * t).max(3.0 * t - 2.0)));
        }
        YoungFn::new(YoungFamily::Tabulated(Table::new(pts).unwrap())).unwrap()
    }

    #[test]
    fn power_compose_boundary_theta() {
        let grid = default_growth_grid();
        let ks = default_nabla2_candidates();
        let phi = yf("power:p=2");
        let (theta, composed) = phi.power_compose_nabla2(&grid, &ks, None).unwrap();
        assert!((theta - 2.0 / 3.0).abs() < 1e-12, "theta={theta}");
        // composed stays in the nabla2 class (k' = 2k² is in the candidates)
        let rep = composed.check_nabla2(&grid, &ks);
        assert!(rep.pass);
        // identity passthrough
        let (t1, same) = phi.power_compose_nabla2(&grid, &ks, Some(1.0)).unwrap();
        assert_eq!(t1, 1.0);
        assert_eq!(&same, &phi);
    }

    #[test]
    fn remark_4_7_composition_is_nonconvex_but_nabla2() {
        let grid = default_growth_grid();
        let ks = default_nabla2_candidates();
        let tab = remark_4_7_function();
        let (theta, composed) = tab.power_compose_nabla2(&grid, &ks, None).unwrap();
        assert!(theta < 1.0);
        assert!(!composed.is_young(), "composition must not claim convexity");
        assert!(composed.check_nabla2(&grid, &ks).pass);
    }

    #[test]
    fn derivative_doubling_examples() {
        let grid = crate::util::log2_grid(-20.0, 20.0, 4);
        let rep = yf("power:p=3").check_derivative_doubling(&grid).unwrap();
        assert!(rep.pass);
        assert!((rep.fitted.get() - 4.0).abs() < 1e-3, "C = 2^{{p-1}} = 4");

        let rep = yf("powerlog:p=2,p1=1").check_derivative_doubling(&grid).unwrap();
        assert!(rep.pass && rep.fitted.is_finite());

        let rep = yf("maxpower:p=1,q=2").check_derivative_doubling(&grid).unwrap();
        assert!(rep.pass && rep.fitted.is_finite());

        assert!(yf("exppower:p=1").check_derivative_doubling(&grid).is_err());
    }

    #[test]
    fn tabulated_roundtrip_power_law_is_exact() {
        // log-log interpolation reproduces pure powers exactly
        let pts: Vec<(f64, f64)> = (0..20).map(|i| {
            let t = 2f64.powi(i - 10);
            (t, t * t * t)
        }).collect();
        let tab = YoungFn::new(YoungFamily::Tabulated(Table::new(pts).unwrap())).unwrap();
        for t in [0.0017, 0.3, 1.0, 5.7, 400.0] {
            assert!(crate::util::rel_diff(tab.eval(Ext::new(t)).get(), t * t * t) < 1e-12);
        }
    }
}
