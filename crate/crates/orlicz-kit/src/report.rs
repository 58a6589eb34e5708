//! Report types shared by the certification checks and the test harness.

use crate::ext::Ext;
use std::fmt;

/// Outcome of a single numeric certification: a fitted constant, the worst
/// witness point and a pass flag. The fitted constant is the empirical
/// supremum over the scanned grid; `cap`, when set, is the threshold the
/// constant was judged against.
#[derive(Clone, Debug)]
pub struct CheckReport {
    pub name: String,
    pub pass: bool,
    pub fitted: Ext,
    pub witness: Option<f64>,
    pub cap: Option<f64>,
    pub detail: String,
}

impl CheckReport {
    pub fn new(name: impl Into<String>, pass: bool, fitted: Ext) -> CheckReport {
        CheckReport {
            name: name.into(),
            pass,
            fitted,
            witness: None,
            cap: None,
            detail: String::new(),
        }
    }

    pub fn with_witness(mut self, w: f64) -> CheckReport {
        self.witness = Some(w);
        self
    }

    pub fn with_cap(mut self, cap: f64) -> CheckReport {
        self.cap = Some(cap);
        self
    }

    pub fn with_detail(mut self, d: impl Into<String>) -> CheckReport {
        self.detail = d.into();
        self
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<28} {}  fitted={}",
            self.name,
            if self.pass { "pass" } else { "FAIL" },
            self.fitted,
        )?;
        if let Some(cap) = self.cap {
            write!(f, "  cap={cap:.3e}")?;
        }
        if let Some(w) = self.witness {
            write!(f, "  witness={w:.6e}")?;
        }
        if !self.detail.is_empty() {
            write!(f, "  [{}]", self.detail)?;
        }
        Ok(())
    }
}

/// Outcome of a family-of-tests fit: one ratio per member, the fitted
/// (supremum) constant and the stability factor max/min over members.
#[derive(Clone, Debug)]
pub struct FitReport {
    pub name: String,
    pub pass: bool,
    pub fitted: f64,
    /// (member label value, ratio) pairs, in family order.
    pub per_member: Vec<(f64, f64)>,
    pub stability: f64,
    pub stability_cap: f64,
    pub detail: String,
}

impl FitReport {
    /// Builds a report from per-member ratios; pass iff every ratio is finite
    /// and the max/min stability factor stays below `cap`.
    pub fn from_ratios(
        name: impl Into<String>,
        members: Vec<(f64, f64)>,
        cap: f64,
    ) -> FitReport {
        let finite = members.iter().all(|(_, r)| r.is_finite());
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for &(_, r) in &members {
            lo = lo.min(r);
            hi = hi.max(r);
        }
        let stability = if lo > 0.0 { hi / lo } else { f64::INFINITY };
        FitReport {
            name: name.into(),
            pass: finite && stability <= cap,
            fitted: hi,
            per_member: members,
            stability,
            stability_cap: cap,
            detail: String::new(),
        }
    }

    pub fn with_detail(mut self, d: impl Into<String>) -> FitReport {
        self.detail = d.into();
        self
    }

    /// True when the per-member ratios increase (or decrease) monotonically
    /// from one end of the family to the other; flat noise does not count.
    pub fn monotone_trend(&self, min_range: f64) -> bool {
        if self.per_member.len() < 3 {
            return false;
        }
        let rs: Vec<f64> = self.per_member.iter().map(|&(_, r)| r).collect();
        let inc = rs.windows(2).all(|w| w[1] >= w[0]);
        let dec = rs.windows(2).all(|w| w[1] <= w[0]);
        (inc || dec) && self.stability >= min_range
    }
}

impl fmt::Display for FitReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<28} {}  fitted={:.6e}  stability={:.3} (cap {:.3})",
            self.name,
            if self.pass { "pass" } else { "FAIL" },
            self.fitted,
            self.stability,
            self.stability_cap,
        )?;
        for (label, ratio) in &self.per_member {
            writeln!(f, "    member {label:>12.6e}  ratio {ratio:.6e}")?;
        }
        if !self.detail.is_empty() {
            writeln!(f, "    [{}]", self.detail)?;
        }
        Ok(())
    }
}

/// Writes a two-column CSV profile. Used by the CLI and suite reports.
pub fn write_csv_profile(
    path: &std::path::Path,
    header: (&str, &str),
    rows: &[(f64, f64)],
) -> std::io::Result<()> {
    use std::io::Write;
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "{},{}", header.0, header.1)?;
    for (a, b) in rows {
        writeln!(out, "{a:.12e},{b:.12e}")?;
    }
    Ok(())
}
