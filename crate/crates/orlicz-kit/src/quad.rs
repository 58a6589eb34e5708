//! Quadrature on the logarithmic axis.
//!
//! Every integral in this crate that involves a kernel has the shape
//! `∫ g(t) dt/t`; substituting `s = ln t` turns it into `∫ G(s) ds` with
//! `G(s) = g(e^s)`. Power-law factors of `t` become exponentials in `s` and
//! logarithmic factors become powers of `s`, so the two workhorse rules are:
//!
//! * a panel rule that fits `G` by an exponential through the panel
//!   endpoints (exact for pure power laws in `t`);
//! * improper ends handled by doubling windows whose sums must decay
//!   geometrically before the remainder is certified.

/// Result of an improper integration attempt.
#[derive(Clone, Copy, Debug)]
pub struct QuadOutcome {
    pub value: f64,
    /// True when the tail windows decayed geometrically and the remainder
    /// bound was met; false means the integral is reported divergent (or
    /// undecidable within budget).
    pub certified: bool,
    pub remainder_bound: f64,
}

impl QuadOutcome {
    pub fn divergent() -> QuadOutcome {
        QuadOutcome {
            value: f64::INFINITY,
            certified: false,
            remainder_bound: f64::INFINITY,
        }
    }
}

/// ∫_{s0}^{s1} G(s) ds by `panels` exponential-fit panels.
///
/// On each panel the integrand is modeled as `G(a)·e^{m(s-a)}` through the
/// endpoint values; the model integrates in closed form and reproduces any
/// `c·e^{ms}` exactly, i.e. any pure power of `t`.
pub fn integrate_exp_panels(g: &dyn Fn(f64) -> f64, s0: f64, s1: f64, panels: usize) -> f64 {
    if s1 <= s0 {
        return 0.0;
    }
    let n = panels.max(1);
    let dx = (s1 - s0) / n as f64;
    let mut acc = crate::util::CompensatedSum::new();
    let mut ga = g(s0);
    for i in 0..n {
        let a = s0 + i as f64 * dx;
        let b = a + dx;
        let gm = g(0.5 * (a + b));
        let gb = g(b);
        // Richardson step: still exact on exponentials, fourth order otherwise
        let coarse = panel_exp_fit(ga, gb, dx);
        let fine = panel_exp_fit(ga, gm, 0.5 * dx) + panel_exp_fit(gm, gb, 0.5 * dx);
        acc.add(fine + (fine - coarse) / 3.0);
        ga = gb;
    }
    acc.value()
}

fn panel_exp_fit(ga: f64, gb: f64, dx: f64) -> f64 {
    if !(ga.is_finite() && gb.is_finite()) {
        return f64::INFINITY;
    }
    if ga <= 0.0 || gb <= 0.0 {
        // trapezoid fallback for vanishing endpoints
        return 0.5 * (ga.max(0.0) + gb.max(0.0)) * dx;
    }
    let m = (gb / ga).ln() / dx;
    if m.abs() < 1e-8 {
        return 0.5 * (ga + gb) * dx;
    }
    ga * ((m * dx).exp_m1()) / m
}

const PANELS_PER_UNIT: f64 = 16.0;
const DECAY_CAP: f64 = 0.95;
const MAX_WINDOWS: usize = 90;
/// Integrands are supplied in log coordinates (s = ln t) and evaluate their
/// asymptotic branches directly in s, so the doubling may walk far past the
/// f64 range of t itself; the default edge is just a safety net and the real
/// budget is the window count.
const S_EDGE: f64 = 1e9;

fn panel_count(len: f64) -> usize {
    ((len * PANELS_PER_UNIT).ceil() as usize).clamp(4, 40_000)
}

/// ∫_{s_from}^{∞} G(s) ds with doubling windows.
///
/// The windows are `[a_k, a_{k+1}]` with `a_{k+1} = 2·max(a_k, 1)`; their
/// sums must eventually decay with ratio ≤ 0.95 and the extrapolated
/// geometric remainder must drop below `rel_tol · max(total, floor)`.
pub fn improper_upper(g: &dyn Fn(f64) -> f64, s_from: f64, rel_tol: f64, floor: f64) -> QuadOutcome {
    improper_upper_with_edge(g, s_from, rel_tol, floor, S_EDGE)
}

/// [`improper_upper`] with an explicit representability edge: windows stop
/// doubling at `s_edge` and the remainder beyond it is covered by the
/// geometric extrapolation of the established decay.
pub fn improper_upper_with_edge(
    g: &dyn Fn(f64) -> f64,
    s_from: f64,
    rel_tol: f64,
    floor: f64,
    s_edge: f64,
) -> QuadOutcome {
    let mut total = crate::util::CompensatedSum::new();
    let mut a = s_from;
    if a >= s_edge {
        return QuadOutcome {
            value: 0.0,
            certified: true,
            remainder_bound: endpoint_decay_bound(g, 0.5 * a, a).unwrap_or(0.0),
        };
    }
    // lead-in up to the first doubling anchor
    let anchor = (if a >= 1.0 { 2.0 * a } else { 2.0 }).min(s_edge);
    if a < anchor {
        let v = integrate_exp_panels(g, a, anchor, panel_count(anchor - a));
        if !v.is_finite() {
            return QuadOutcome::divergent();
        }
        total.add(v);
        a = anchor;
    }
    let mut prev_window = f64::INFINITY;
    let mut decaying_streak = 0;
    let mut last_w = f64::INFINITY;
    let mut last_q = 1.0f64;
    for _ in 0..MAX_WINDOWS {
        let b = 2.0 * a;
        if b > s_edge {
            break;
        }
        let w = integrate_exp_panels(g, a, b, panel_count((b - a).min(64.0)));
        if !w.is_finite() {
            return QuadOutcome::divergent();
        }
        total.add(w);
        let q = if prev_window > 0.0 { w / prev_window } else { 0.0 };
        if w <= 0.0 || (q <= DECAY_CAP && prev_window.is_finite()) {
            decaying_streak += 1;
        } else {
            decaying_streak = 0;
        }
        let tol = rel_tol * total.value().abs().max(floor);
        if decaying_streak >= 2 {
            let qq = q.clamp(0.0, DECAY_CAP);
            let rem = if w > 0.0 { w * qq / (1.0 - qq) } else { 0.0 };
            if rem <= tol {
                return QuadOutcome {
                    value: total.value(),
                    certified: true,
                    remainder_bound: rem,
                };
            }
        }
        prev_window = w;
        last_w = w;
        last_q = q;
        a = b;
    }
    // ran into the representability edge: accept if decay was established,
    // or if the integrand itself shows exponential decay at the edge
    if decaying_streak >= 1 && last_w.is_finite() {
        let qq = last_q.clamp(0.0, DECAY_CAP);
        let rem = if last_w > 0.0 { last_w * qq / (1.0 - qq) } else { 0.0 };
        return QuadOutcome {
            value: total.value(),
            certified: true,
            remainder_bound: rem,
        };
    }
    if let Some(rem) = endpoint_decay_bound(g, 0.5 * a, a) {
        return QuadOutcome {
            value: total.value(),
            certified: true,
            remainder_bound: rem,
        };
    }
    QuadOutcome::divergent()
}

/// Remainder bound from the integrand's own exponential slope: for
/// G ~ c·e^{ms} with m < 0 the tail past `b` is G(b)/|m|. The slope is
/// measured on two sub-scales and must not flatten between them, which
/// rejects power decay in s (whose local slope dies off like 1/s and whose
/// integral may diverge).
fn endpoint_decay_bound(g: &dyn Fn(f64) -> f64, a: f64, b: f64) -> Option<f64> {
    let mid = 0.5 * (a + b);
    let (ga, gm, gb) = (g(a), g(mid), g(b));
    if !(ga.is_finite() && gm.is_finite() && gb.is_finite()) || ga < 0.0 || gm < 0.0 || gb < 0.0 {
        return None;
    }
    if gb == 0.0 {
        return Some(0.0);
    }
    if ga <= 0.0 || gm <= 0.0 {
        return None;
    }
    let m1 = (gm / ga).ln() / (mid - a);
    let m2 = (gb / gm).ln() / (b - mid);
    if m2 <= -1e-6 && m2 <= 0.9 * m1 {
        Some(gb / (-m2))
    } else {
        None
    }
}

/// ∫_{-∞}^{s_to} G(s) ds with windows doubling downwards.
pub fn improper_lower(g: &dyn Fn(f64) -> f64, s_to: f64, rel_tol: f64, floor: f64) -> QuadOutcome {
    improper_lower_with_edge(g, s_to, rel_tol, floor, S_EDGE)
}

/// [`improper_lower`] with an explicit representability edge (mirrored).
pub fn improper_lower_with_edge(
    g: &dyn Fn(f64) -> f64,
    s_to: f64,
    rel_tol: f64,
    floor: f64,
    s_edge: f64,
) -> QuadOutcome {
    let mut total = crate::util::CompensatedSum::new();
    let mut b = s_to;
    if b <= -s_edge {
        return QuadOutcome {
            value: 0.0,
            certified: true,
            remainder_bound: 0.0,
        };
    }
    let anchor = (if b <= -1.0 { 2.0 * b } else { -2.0 }).max(-s_edge);
    if anchor < b {
        let v = integrate_exp_panels(g, anchor, b, panel_count(b - anchor));
        if !v.is_finite() {
            return QuadOutcome::divergent();
        }
        total.add(v);
        b = anchor;
    }
    let mut prev_window = f64::INFINITY;
    let mut decaying_streak = 0;
    let mut last_w = f64::INFINITY;
    let mut last_q = 1.0f64;
    for _ in 0..MAX_WINDOWS {
        let a = 2.0 * b; // more negative
        if a < -s_edge {
            break;
        }
        let w = integrate_exp_panels(g, a, b, panel_count((b - a).min(64.0)));
        if !w.is_finite() {
            return QuadOutcome::divergent();
        }
        total.add(w);
        let q = if prev_window > 0.0 { w / prev_window } else { 0.0 };
        if w <= 0.0 || (q <= DECAY_CAP && prev_window.is_finite()) {
            decaying_streak += 1;
        } else {
            decaying_streak = 0;
        }
        let tol = rel_tol * total.value().abs().max(floor);
        if decaying_streak >= 2 {
            let qq = q.clamp(0.0, DECAY_CAP);
            let rem = if w > 0.0 { w * qq / (1.0 - qq) } else { 0.0 };
            if rem <= tol {
                return QuadOutcome {
                    value: total.value(),
                    certified: true,
                    remainder_bound: rem,
                };
            }
        }
        prev_window = w;
        last_w = w;
        last_q = q;
        b = a;
    }
    if decaying_streak >= 1 && last_w.is_finite() {
        let qq = last_q.clamp(0.0, DECAY_CAP);
        let rem = if last_w > 0.0 { last_w * qq / (1.0 - qq) } else { 0.0 };
        return QuadOutcome {
            value: total.value(),
            certified: true,
            remainder_bound: rem,
        };
    }
    // decay toward -inf: mirrored endpoint-slope fallback
    if let Some(rem) = endpoint_decay_bound(&|s: f64| g(-s), -0.5 * b, -b) {
        return QuadOutcome {
            value: total.value(),
            certified: true,
            remainder_bound: rem,
        };
    }
    QuadOutcome::divergent()
}

/// Adaptive midpoint integration of `f` over an axis-aligned cell, splitting
/// each level into four children until the relative change between levels is
/// below `rel_tol`. Used for the nonsingular cells of the integral operators.
pub fn adaptive_midpoint_1d(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    fn level(f: &dyn Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = crate::util::CompensatedSum::new();
        for i in 0..n {
            s.add(f(a + (i as f64 + 0.5) * h) * h);
        }
        s.value()
    }
    let mut n = 1usize;
    let mut prev = level(f, a, b, n);
    for _ in 0..12 {
        n *= 4;
        let cur = level(f, a, b, n);
        if (cur - prev).abs() <= rel_tol * cur.abs().max(f64::MIN_POSITIVE) {
            return cur;
        }
        prev = cur;
    }
    prev
}

/// Two-dimensional analogue of [`adaptive_midpoint_1d`] on the rectangle
/// `[ax,bx]×[ay,by]` with 2×2 splits per level.
pub fn adaptive_midpoint_2d(
    f: &dyn Fn(f64, f64) -> f64,
    ax: f64,
    bx: f64,
    ay: f64,
    by: f64,
    rel_tol: f64,
) -> f64 {
    fn level(f: &dyn Fn(f64, f64) -> f64, ax: f64, bx: f64, ay: f64, by: f64, n: usize) -> f64 {
        let hx = (bx - ax) / n as f64;
        let hy = (by - ay) / n as f64;
        let mut s = crate::util::CompensatedSum::new();
        for i in 0..n {
            for j in 0..n {
                s.add(f(ax + (i as f64 + 0.5) * hx, ay + (j as f64 + 0.5) * hy) * hx * hy);
            }
        }
        s.value()
    }
    let mut n = 1usize;
    let mut prev = level(f, ax, bx, ay, by, n);
    for _ in 0..8 {
        n *= 2;
        let cur = level(f, ax, bx, ay, by, n);
        if (cur - prev).abs() <= rel_tol * cur.abs().max(f64::MIN_POSITIVE) {
            return cur;
        }
        prev = cur;
    }
    prev
}

/// Adaptive Simpson on a smooth 1D integrand (used for angular integrals).
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, len: f64) -> f64 {
        len / 6.0 * (fa + 4.0 * fm + fb)
    }
    fn rec(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: usize,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, m - a);
        let right = simpson(fm, frm, fb, b - m);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(fa, fm, fb, b - a);
    let tol = rel_tol * whole.abs().max(f64::MIN_POSITIVE);
    rec(f, a, b, fa, fm, fb, whole, tol, 40)
}
