//! Kernel functions ρ:(0,∞)→(0,∞) for the generalized fractional operators,
//! their integral means ρ*(r) = ∫₀ʳ ρ(t)/t dt, and the structural condition
//! checks (integrability at 0, the sup/integral comparison, the ratio-band
//! Lipschitz condition and almost-monotonicity certificates).
//!
//! Small-r / large-r families are bridged across [1/e, e] by a straight line
//! in log-log coordinates, which keeps every family total and positive.

use crate::ext::Ext;
use crate::quad;
use crate::report::CheckReport;
use crate::{Error, Result};

const A_BP: f64 = 1.0 / core::f64::consts::E; // small-r branch ends here
const B_BP: f64 = core::f64::consts::E; // large-r branch starts here

/// Positive tabulated radial function; log-log interpolation between points,
/// power-law extrapolation outside. No monotonicity is imposed (kernels may
/// rise and fall).
#[derive(Clone, Debug, PartialEq)]
pub struct KernelTable {
    rs: Vec<f64>,
    vs: Vec<f64>,
    lo_slope: f64,
    hi_slope: f64,
}

impl KernelTable {
    pub fn new(mut points: Vec<(f64, f64)>) -> Result<KernelTable> {
        points.retain(|&(r, v)| r.is_finite() && r > 0.0 && v.is_finite() && v > 0.0);
        if points.len() < 2 {
            return Err(Error::invalid(
                "kernel table needs at least two positive points",
            ));
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut rs = Vec::with_capacity(points.len());
        let mut vs = Vec::with_capacity(points.len());
        for (r, v) in points {
            if let Some(&last) = rs.last() {
                if (r - last) / r < 1e-14 {
                    continue;
                }
            }
            rs.push(r);
            vs.push(v);
        }
        if rs.len() < 2 {
            return Err(Error::invalid("kernel table collapsed"));
        }
        let n = rs.len();
        let slope = |i: usize, j: usize| (vs[j] / vs[i]).ln() / (rs[j] / rs[i]).ln();
        Ok(KernelTable {
            lo_slope: slope(0, 1),
            hi_slope: slope(n - 2, n - 1),
            rs,
            vs,
        })
    }

    fn eval(&self, r: f64) -> f64 {
        let n = self.rs.len();
        if r <= self.rs[0] {
            return self.vs[0] * (r / self.rs[0]).powf(self.lo_slope);
        }
        if r >= self.rs[n - 1] {
            return self.vs[n - 1] * (r / self.rs[n - 1]).powf(self.hi_slope);
        }
        let j = match self.rs.binary_search_by(|x| x.total_cmp(&r)) {
            Ok(j) => return self.vs[j],
            Err(j) => j,
        };
        let w = (r / self.rs[j - 1]).ln() / (self.rs[j] / self.rs[j - 1]).ln();
        self.vs[j - 1] * (self.vs[j] / self.vs[j - 1]).powf(w)
    }

    /// Exact ∫₀ʳ ρ(t)/t dt: each log-log segment is a pure power, and the
    /// part below the first point is the extrapolated power law.
    fn rho_star(&self, r: f64) -> Ext {
        if self.lo_slope <= 0.0 {
            return Ext::INF;
        }
        let mut acc = self.vs[0] / self.lo_slope; // ∫_0^{r_0}
        if r <= self.rs[0] {
            return Ext::new(acc * (r / self.rs[0]).powf(self.lo_slope));
        }
        let seg = |va: f64, ra: f64, vb: f64, rb: f64, upto: f64| -> f64 {
            // ∫_{ra}^{upto} of the power law through (ra,va),(rb,vb), dt/t
            let m = (vb / va).ln() / (rb / ra).ln();
            let x = upto.min(rb);
            if m.abs() < 1e-12 {
                va * (x / ra).ln()
            } else {
                va * ((x / ra).powf(m) - 1.0) / m
            }
        };
        let n = self.rs.len();
        for j in 1..n {
            if r <= self.rs[j - 1] {
                break;
            }
            acc += seg(
                self.vs[j - 1],
                self.rs[j - 1],
                self.vs[j],
                self.rs[j],
                r,
            );
        }
        if r > self.rs[n - 1] {
            let m = self.hi_slope;
            let (va, ra) = (self.vs[n - 1], self.rs[n - 1]);
            acc += if m.abs() < 1e-12 {
                va * (r / ra).ln()
            } else {
                va * ((r / ra).powf(m) - 1.0) / m
            };
        }
        Ext::new(acc)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum KernelFamily {
    /// r^α with α ≥ 0; α = 0 is the Hardy–Littlewood weight
    PowerAlpha { alpha: f64 },
    /// 1/(log 1/r)^{α+1} small, (log r)^{α-1} large; bridged by 1
    LogKernel { alpha: f64 },
    /// (log 1/r)^{-α} small, (log r)^α large; bridged by 1; ρ* diverges for α ≤ 1
    MaxLogKernel { alpha: f64 },
    /// r^α (log 1/r)^{-α₁} small, r^α (log r)^{α₁} large; bridged by r^α
    PowerLogKernel { alpha: f64, alpha1: f64 },
    /// r^α small, e^{-r} large; log-log bridge
    PowerExpCut { alpha: f64 },
    Tabulated(KernelTable),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Kernel {
    family: KernelFamily,
}

impl Kernel {
    pub fn new(family: KernelFamily) -> Result<Kernel> {
        match &family {
            KernelFamily::PowerAlpha { alpha } => {
                if !(alpha.is_finite() && *alpha >= 0.0) {
                    return Err(Error::invalid("power kernel: requires alpha >= 0"));
                }
            }
            KernelFamily::LogKernel { alpha } => {
                if !(alpha.is_finite() && *alpha > 0.0) {
                    return Err(Error::invalid("log kernel: requires alpha > 0"));
                }
            }
            KernelFamily::MaxLogKernel { alpha } => {
                if !(alpha.is_finite() && *alpha >= 0.0) {
                    return Err(Error::invalid("maxlog kernel: requires alpha >= 0"));
                }
            }
            KernelFamily::PowerLogKernel { alpha, alpha1 } => {
                if !(alpha.is_finite() && alpha1.is_finite() && *alpha > 0.0) {
                    return Err(Error::invalid("powerlog kernel: requires alpha > 0"));
                }
            }
            KernelFamily::PowerExpCut { alpha } => {
                if !(alpha.is_finite() && *alpha > 0.0) {
                    return Err(Error::invalid("powerexp kernel: requires alpha > 0"));
                }
            }
            KernelFamily::Tabulated(_) => {}
        }
        Ok(Kernel { family })
    }

    pub fn power(alpha: f64) -> Result<Kernel> {
        Kernel::new(KernelFamily::PowerAlpha { alpha })
    }

    pub fn family(&self) -> &KernelFamily {
        &self.family
    }

    /// ρ(r) for r > 0.
    pub fn eval(&self, r: f64) -> Result<f64> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::domain(format!("kernel evaluated at r = {r}")));
        }
        Ok(self.eval_pos(r))
    }

    /// ρ(r) assuming r > 0.
    pub fn eval_pos(&self, r: f64) -> f64 {
        debug_assert!(r > 0.0);
        match &self.family {
            KernelFamily::PowerAlpha { alpha } => r.powf(*alpha),
            KernelFamily::LogKernel { alpha } => {
                if r <= A_BP {
                    (1.0 / r).ln().powf(-(alpha + 1.0))
                } else if r >= B_BP {
                    r.ln().powf(alpha - 1.0)
                } else {
                    1.0
                }
            }
            KernelFamily::MaxLogKernel { alpha } => {
                if r <= A_BP {
                    (1.0 / r).ln().powf(-alpha)
                } else if r >= B_BP {
                    r.ln().powf(*alpha)
                } else {
                    1.0
                }
            }
            KernelFamily::PowerLogKernel { alpha, alpha1 } => {
                if r <= A_BP {
                    r.powf(*alpha) * (1.0 / r).ln().powf(-alpha1)
                } else if r >= B_BP {
                    r.powf(*alpha) * r.ln().powf(*alpha1)
                } else {
                    r.powf(*alpha)
                }
            }
            KernelFamily::PowerExpCut { alpha } => {
                if r <= A_BP {
                    r.powf(*alpha)
                } else if r >= B_BP {
                    (-r).exp()
                } else {
                    // log-log line between (1/e, e^{-α}) and (e, e^{-e})
                    let m = (alpha - core::f64::consts::E) / 2.0;
                    let c = (-alpha + m).exp();
                    c * r.powf(m)
                }
            }
            KernelFamily::Tabulated(t) => t.eval(r),
        }
    }

    /// ρ evaluated at t = e^s; see [`Kernel::ln_eval_log`].
    pub fn eval_log(&self, s: f64) -> f64 {
        self.ln_eval_log(s).exp()
    }

    /// ln ρ(e^s), written directly in terms of s so the log-axis quadratures
    /// can walk far beyond the f64 range of t. Logarithmic branches become
    /// logs of |s|; power factors stay linear in s. Callers add log-factors
    /// (e.g. ln Φ⁻¹) before exponentiating, which keeps mixed products from
    /// overflowing through an intermediate factor.
    pub fn ln_eval_log(&self, s: f64) -> f64 {
        match &self.family {
            KernelFamily::PowerAlpha { alpha } => alpha * s,
            KernelFamily::LogKernel { alpha } => {
                if s <= -1.0 {
                    -(alpha + 1.0) * (-s).ln()
                } else if s >= 1.0 {
                    (alpha - 1.0) * s.ln()
                } else {
                    0.0
                }
            }
            KernelFamily::MaxLogKernel { alpha } => {
                if s <= -1.0 {
                    -alpha * (-s).ln()
                } else if s >= 1.0 {
                    alpha * s.ln()
                } else {
                    0.0
                }
            }
            KernelFamily::PowerLogKernel { alpha, alpha1 } => {
                if s <= -1.0 {
                    alpha * s - alpha1 * (-s).ln()
                } else if s >= 1.0 {
                    alpha * s + alpha1 * s.ln()
                } else {
                    alpha * s
                }
            }
            KernelFamily::PowerExpCut { alpha } => {
                if s <= -1.0 {
                    alpha * s
                } else if s >= 1.0 {
                    -s.exp()
                } else {
                    let m = (alpha - core::f64::consts::E) / 2.0;
                    -alpha + m + m * s
                }
            }
            KernelFamily::Tabulated(t) => {
                t.eval(s.exp().clamp(f64::MIN_POSITIVE, f64::MAX)).ln()
            }
        }
    }

    /// Whether ∫₀¹ ρ(t)/t dt < ∞ (condition for I_ρ to be defined).
    pub fn int_rho_finite(&self) -> bool {
        match &self.family {
            KernelFamily::PowerAlpha { alpha } => *alpha > 0.0,
            KernelFamily::LogKernel { .. } => true,
            KernelFamily::MaxLogKernel { alpha } => *alpha > 1.0,
            KernelFamily::PowerLogKernel { .. } => true,
            KernelFamily::PowerExpCut { .. } => true,
            KernelFamily::Tabulated(t) => t.lo_slope > 0.0,
        }
    }

    /// ρ*(r) = ∫₀ʳ ρ(t)/t dt; ∞ signals a divergent mean, never an error.
    pub fn rho_star(&self, r: f64) -> Ext {
        assert!(r > 0.0, "rho_star needs r > 0");
        match &self.family {
            KernelFamily::PowerAlpha { alpha } => {
                if *alpha > 0.0 {
                    Ext::new(r.powf(*alpha) / alpha)
                } else {
                    Ext::INF
                }
            }
            KernelFamily::LogKernel { alpha } => {
                let a = *alpha;
                let small = |x: f64| (1.0 / x).ln().powf(-a) / a;
                if r <= A_BP {
                    Ext::new(small(r))
                } else if r <= B_BP {
                    Ext::new(small(A_BP) + (r * core::f64::consts::E).ln())
                } else {
                    Ext::new(small(A_BP) + 2.0 + (r.ln().powf(a) - 1.0) / a)
                }
            }
            KernelFamily::MaxLogKernel { alpha } => {
                let a = *alpha;
                if a <= 1.0 {
                    return Ext::INF;
                }
                let small = |x: f64| (1.0 / x).ln().powf(1.0 - a) / (a - 1.0);
                if r <= A_BP {
                    Ext::new(small(r))
                } else if r <= B_BP {
                    Ext::new(small(A_BP) + (r * core::f64::consts::E).ln())
                } else {
                    Ext::new(small(A_BP) + 2.0 + (r.ln().powf(a + 1.0) - 1.0) / (a + 1.0))
                }
            }
            KernelFamily::PowerExpCut { alpha } => {
                let a = *alpha;
                if r <= A_BP {
                    return Ext::new(r.powf(a) / a);
                }
                let mut acc = A_BP.powf(a) / a;
                // bridge piece is a pure power c·t^m
                let m = (a - core::f64::consts::E) / 2.0;
                let c = (-a + m).exp();
                let top = r.min(B_BP);
                acc += c * (top.powf(m) - A_BP.powf(m)) / m;
                if r > B_BP {
                    // e^{-t}/t tail is negligible beyond s = 5
                    let s_hi = r.ln().min(5.0);
                    acc += quad::integrate_exp_panels(&|s: f64| (-s.exp()).exp(), 1.0, s_hi, 64);
                }
                Ext::new(acc)
            }
            KernelFamily::Tabulated(t) => t.rho_star(r),
            _ => {
                if !self.int_rho_finite() {
                    return Ext::INF;
                }
                // adaptive log-axis quadrature, relative tolerance 1e-8
                let g = |s: f64| self.eval_log(s);
                let out = quad::improper_lower(&g, r.ln(), 1e-8, 0.0);
                if out.certified {
                    Ext::new(out.value)
                } else {
                    Ext::INF
                }
            }
        }
    }

    /// Running supremum ρ₁(r) = sup_{0<t≤r} ρ(t), approximated by a dense
    /// cumulative max on the log axis starting far below the grid.
    pub fn running_sup_on(&self, r_grid: &[f64]) -> Vec<f64> {
        assert!(!r_grid.is_empty());
        let lo = r_grid[0].ln() - 40.0 * core::f64::consts::LN_2;
        let hi = r_grid[r_grid.len() - 1].ln();
        let per_unit = 24.0;
        let steps = (((hi - lo) * per_unit).ceil() as usize).max(1);
        let mut out = Vec::with_capacity(r_grid.len());
        let mut cur = 0.0f64;
        let mut k = 0usize;
        let mut next_idx = 0usize;
        while next_idx < r_grid.len() {
            let target = r_grid[next_idx].ln();
            while k <= steps {
                let s = lo + (hi - lo) * k as f64 / steps as f64;
                if s > target + 1e-12 {
                    break;
                }
                cur = cur.max(self.eval_log(s));
                k += 1;
            }
            out.push(cur.max(self.eval_pos(r_grid[next_idx])));
            next_idx += 1;
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Almost-monotonicity certificates
// ---------------------------------------------------------------------------

/// Fitted constant for "θ is almost decreasing" over the sampled profile:
/// the smallest C with θ(s) ≤ C·θ(r) whenever r < s in the grid.
pub fn almost_decreasing_constant(values: &[f64]) -> f64 {
    let mut run_min = f64::INFINITY;
    let mut worst: f64 = 1.0;
    for &v in values {
        if run_min.is_finite() && run_min > 0.0 {
            worst = worst.max(v / run_min);
        }
        run_min = run_min.min(v);
    }
    worst
}

/// Fitted constant for "θ is almost increasing" (θ(r) ≤ C·θ(s) for r < s).
pub fn almost_increasing_constant(values: &[f64]) -> f64 {
    let mut run_max: f64 = 0.0;
    let mut worst: f64 = 1.0;
    for &v in values {
        if run_max > 0.0 && v > 0.0 {
            worst = worst.max(run_max / v);
        }
        run_max = run_max.max(v);
    }
    worst
}

/// Bundle of per-condition reports for one kernel in dimension `n`.
#[derive(Clone, Debug)]
pub struct KernelConditionBundle {
    /// (1.2): ρ*(1) < ∞
    pub integrable: CheckReport,
    /// (1.3) with K₁ = 1/2, K₂ = 1 fixed
    pub sup_vs_integral: CheckReport,
    /// ratio-band Lipschitz condition (3.7) with fitted C_ρ
    pub ratio_lipschitz: CheckReport,
    /// almost-decreasing certificate for ρ(r)/r^{n-ε}: fitted value is the
    /// largest ε from the candidate list whose constant stays below the cap
    pub almost_decreasing: CheckReport,
    /// propagation of the certificate to ρ* (same exponent k = n-ε)
    pub rho_star_almost_decreasing: CheckReport,
    /// doubling ρ*(2r) ≤ C ρ*(r)
    pub rho_star_doubling: CheckReport,
}

impl KernelConditionBundle {
    pub fn reports(&self) -> [&CheckReport; 6] {
        [
            &self.integrable,
            &self.sup_vs_integral,
            &self.ratio_lipschitz,
            &self.almost_decreasing,
            &self.rho_star_almost_decreasing,
            &self.rho_star_doubling,
        ]
    }
}

pub const SUP_INTEGRAL_CAP: f64 = 8.0;
pub const RATIO_LIPSCHITZ_CAP: f64 = 32.0;
pub const ALMOST_MONOTONE_CAP: f64 = 8.0;

impl Kernel {
    /// Largest ε (from a 0.05-step scan up to n) for which r ↦ ρ(r)/r^{n-ε}
    /// is almost decreasing on the grid. Exactly monotone candidates
    /// (constant ≤ 1) win over almost-monotone ones (constant ≤ cap), so a
    /// pure power kernel reports ε = n − α exactly.
    /// Returns (ε, constant); ε = 0 means no candidate certified.
    pub fn almost_decreasing_exponent(&self, n: usize, r_grid: &[f64]) -> (f64, f64) {
        let mut best_tight = (0.0f64, f64::INFINITY);
        let mut best_loose = (0.0f64, f64::INFINITY);
        let mut eps = 0.05f64;
        while eps <= n as f64 + 1e-9 {
            let k = n as f64 - eps;
            let vals: Vec<f64> = r_grid
                .iter()
                .map(|&r| self.eval_pos(r) / r.powf(k))
                .collect();
            let c = almost_decreasing_constant(&vals);
            if c <= 1.0 + 1e-9 {
                best_tight = (eps, c);
            }
            if c <= ALMOST_MONOTONE_CAP {
                best_loose = (eps, c);
            }
            eps += 0.05;
        }
        if best_tight.0 > 0.0 {
            best_tight
        } else {
            best_loose
        }
    }

    pub fn check_conditions(&self, n: usize, r_grid: &[f64]) -> KernelConditionBundle {
        let star1 = self.rho_star(1.0);
        let integrable = CheckReport::new("int-rho (1.2)", star1.is_finite(), star1);

        // sup_{r<=t<=2r} rho(t) <= C * ∫_{r/2}^{r} rho(t)/t dt
        let mut worst = 0.0f64;
        let mut witness = None;
        for &r in r_grid {
            let mut sup = 0.0f64;
            for j in 0..=32 {
                let t = r * 2f64.powf(j as f64 / 32.0);
                sup = sup.max(self.eval_pos(t));
            }
            let g = |s: f64| self.eval_log(s);
            let den = quad::integrate_exp_panels(
                &g,
                (r / 2.0).ln(),
                r.ln(),
                24,
            );
            if den > 0.0 {
                let c = sup / den;
                if c > worst {
                    worst = c;
                    witness = Some(r);
                }
            }
        }
        let mut sup_vs_integral = CheckReport::new(
            "sup-window (1.3) K1=1/2 K2=1",
            worst.is_finite() && worst <= SUP_INTEGRAL_CAP,
            Ext::new(worst),
        )
        .with_cap(SUP_INTEGRAL_CAP);
        if let Some(w) = witness {
            sup_vs_integral = sup_vs_integral.with_witness(w);
        }

        // (3.7): |rho(r)/r^n - rho(s)/s^n| <= C_rho |r-s| rho*(r)/r^{n+1}
        // sampled over 64 log-spaced r and s = r*2^{j/8}, j = -8..8
        let nf = n as f64;
        let mut worst_c = 0.0f64;
        let mut wit37 = None;
        let lo = r_grid[0].max(1e-12).ln();
        let hi = r_grid[r_grid.len() - 1].min(1e12).ln();
        for i in 0..64 {
            let r = (lo + (hi - lo) * i as f64 / 63.0).exp();
            let star = self.rho_star(r);
            if !star.is_finite() {
                continue;
            }
            let scale = star.get() / r.powf(nf + 1.0);
            let fr = self.eval_pos(r) / r.powf(nf);
            for j in -8i32..=8 {
                if j == 0 {
                    continue;
                }
                let s = r * 2f64.powf(j as f64 / 8.0);
                let fs = self.eval_pos(s) / s.powf(nf);
                let c = (fr - fs).abs() / ((r - s).abs() * scale);
                if c > worst_c {
                    worst_c = c;
                    wit37 = Some(r);
                }
            }
        }
        let mut ratio_lipschitz = CheckReport::new(
            "ratio-lipschitz (3.7)",
            worst_c.is_finite() && worst_c <= RATIO_LIPSCHITZ_CAP,
            Ext::new(worst_c),
        )
        .with_cap(RATIO_LIPSCHITZ_CAP);
        if let Some(w) = wit37 {
            ratio_lipschitz = ratio_lipschitz.with_witness(w);
        }

        let (eps, c_ad) = self.almost_decreasing_exponent(n, r_grid);
        let almost_decreasing = CheckReport::new(
            "almost-decreasing rho/r^(n-eps)",
            eps > 0.0,
            Ext::new(eps),
        )
        .with_cap(ALMOST_MONOTONE_CAP)
        .with_detail(format!("constant={c_ad:.4e}"));

        // Lemma 4.3 propagation: same exponent for rho*
        let rho_star_almost_decreasing = if eps > 0.0 && self.int_rho_finite() {
            let k = nf - eps;
            let vals: Vec<f64> = r_grid
                .iter()
                .map(|&r| self.rho_star(r).get() / r.powf(k))
                .collect();
            let c_star = almost_decreasing_constant(&vals);
            let bound = 10.0 * c_ad * (1.0f64).max(1.0 / k.max(0.05));
            CheckReport::new(
                "rho*-almost-decreasing",
                c_star < bound,
                Ext::new(c_star),
            )
            .with_cap(bound)
        } else {
            CheckReport::new("rho*-almost-decreasing", false, Ext::INF)
                .with_detail("prerequisite certificate missing")
        };

        let rho_star_doubling = if self.int_rho_finite() {
            let mut worst = 0.0f64;
            let mut monotone = true;
            let mut prev = 0.0f64;
            for &r in r_grid {
                let a = self.rho_star(r).get();
                let b = self.rho_star(2.0 * r).get();
                worst = worst.max(b / a);
                if a < prev {
                    monotone = false;
                }
                prev = a;
            }
            CheckReport::new(
                "rho*-doubling",
                worst <= SUP_INTEGRAL_CAP && monotone,
                Ext::new(worst),
            )
            .with_cap(SUP_INTEGRAL_CAP)
        } else {
            CheckReport::new("rho*-doubling", false, Ext::INF).with_detail("rho* divergent")
        };

        KernelConditionBundle {
            integrable,
            sup_vs_integral,
            ratio_lipschitz,
            almost_decreasing,
            rho_star_almost_decreasing,
            rho_star_doubling,
        }
    }
}
