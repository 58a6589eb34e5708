//! Descriptor grammars and the suite-config text format.
//!
//! Young functions:  `power:p=2`, `powerlog:p=2,p1=1`, `exppower:p=1`,
//!                   `stepinf`, `maxpower:p=1,q=2`, `powerminus1:p=2`,
//!                   `table:<file>`.
//! Kernels:          `power:alpha=0.5`, `logker:alpha=1`, `maxlog:alpha=1`,
//!                   `powerlog:alpha=0.5,alpha1=1`, `powerexp:alpha=0.5`,
//!                   `table:<file>`.
//! Weights:          `one`, `power:beta=0.5`, `powerlog:beta=0.5,beta1=1`.
//!
//! Parsers are total: any input yields `Ok` or a diagnostic `Error::Parse`
//! naming the offending token; they never panic.

use crate::campanato::{Weight, WeightFamily};
use crate::kernels::{Kernel, KernelFamily, KernelTable};
use crate::young::{Table, YoungFamily, YoungFn};
use crate::{Error, Result};
use std::collections::BTreeMap;

fn split_head(s: &str) -> (&str, Option<&str>) {
    match s.split_once(':') {
        Some((h, rest)) => (h.trim(), Some(rest)),
        None => (s.trim(), None),
    }
}

fn parse_kv(args: &str) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for part in args.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::parse(part, "expected key=value"))?;
        let val: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::parse(v.trim(), "expected a number"))?;
        if !val.is_finite() {
            return Err(Error::parse(v.trim(), "expected a finite number"));
        }
        if out.insert(k.trim().to_ascii_lowercase(), val).is_some() {
            return Err(Error::parse(k.trim(), "duplicate key"));
        }
    }
    Ok(out)
}

fn take(map: &mut BTreeMap<String, f64>, key: &str) -> Result<f64> {
    map.remove(key)
        .ok_or_else(|| Error::parse(key, "missing required parameter"))
}

fn finish(map: BTreeMap<String, f64>) -> Result<()> {
    if let Some((k, _)) = map.into_iter().next() {
        return Err(Error::parse(k, "unknown parameter"));
    }
    Ok(())
}

/// Parses a Young-function descriptor. `table:<file>` loads breakpoints from
/// a whitespace-separated `t v` file.
pub fn parse_young(s: &str) -> Result<YoungFn> {
    let (head, rest) = split_head(s);
    match head.to_ascii_lowercase().as_str() {
        "power" => {
            let mut kv = parse_kv(rest.unwrap_or(""))?;
            let p = take(&mut kv, "p")?;
            finish(kv)?;
            YoungFn::new(YoungFamily::Power { p })
        }
        "powerlog" => {
            let mut kv = parse_kv(rest.unwrap_or(""))?;
            let p = take(&mut kv, "p")?;
            let p1 = take(&mut kv, "p1")?;
            finish(kv)?;
            YoungFn::new(YoungFamily::PowerLog { p, p1 })
        }
        "exppower" => {
            let mut kv = parse_kv(rest.unwrap_or(""))?;
            let p = take(&mut kv, "p")?;
            finish(kv)?;
            YoungFn::new(YoungFamily::ExpPower { p })
        }
        "powerminus1" => {
            let mut kv = parse_kv(rest.unwrap_or(""))?;
            let p = take(&mut kv, "p")?;
            finish(kv)?;
            YoungFn::new(YoungFamily::PowerMinusOne { p })
        }
        "maxpower" => {
            let mut kv = parse_kv(rest.unwrap_or(""))?;
            let p = take(&mut kv, "p")?;
            let q = take(&mut kv, "q")?;
            finish(kv)?;
            YoungFn::new(YoungFamily::MaxPower { p, q })
        }
        "stepinf" => {
            if rest.map_or(false, |r| !r.trim().is_empty()) {
                return Err(Error::parse(s, "stepinf takes no parameters"));
            }
            YoungFn::new(YoungFamily::StepInfinity)
        }
        "table" => {
            let path = rest.ok_or_else(|| Error::parse(s, "table needs a file path"))?;
            let text = std::fs::read_to_string(path.trim())?;
            parse_young_table_text(&text)
        }
        other => Err(Error::parse(other, "unknown Young family")),
    }
}

/// Breakpoint text: one `t v` pair per line; `#` starts a comment.
pub fn parse_young_table_text(text: &str) -> Result<YoungFn> {
    YoungFn::new(YoungFamily::Tabulated(Table::new(parse_pairs(text)?)?))
}

pub fn parse_kernel_table_text(text: &str) -> Result<Kernel> {
    Kernel::new(KernelFamily::Tabulated(KernelTable::new(parse_pairs(
        text,
    )?)?))
}

fn parse_pairs(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let t: f64 = it
            .next()
            .unwrap_or("")
            .parse()
            .map_err(|_| Error::parse(line, format!("line {}: expected `t v`", lineno + 1)))?;
        let v: f64 = it
            .next()
            .ok_or_else(|| Error::parse(line, format!("line {}: expected `t v`", lineno + 1)))?
            .parse()
            .map_err(|_| Error::parse(line, format!("line {}: expected `t v`", lineno + 1)))?;
        if it.next().is_some() {
            return Err(Error::parse(
                line,
                format!("line {}: trailing tokens", lineno + 1),
            ));
        }
        if out.len() >= 1 << 22 {
            return Err(Error::parse("", "table too large"));
        }
        out.push((t, v));
    }
    Ok(out)
}

pub fn parse_kernel(s: &str) -> Result<Kernel> {
    let (head, rest) = split_head(s);
    match head.to_ascii_lowercase().as_str() {
        "power" => {
            let mut kv = parse_kv(rest.unwrap_or(""))?;
            let alpha = take(&mut kv, "alpha")?;
            finish(kv)?;
            Kernel::new(KernelFamily::PowerAlpha { alpha })
        }
        "logker" => {
            let mut kv = parse_kv(rest.unwrap_or(""))?;
            let alpha = take(&mut kv, "alpha")?;
            finish(kv)?;
            Kernel::new(KernelFamily::LogKernel { alpha })
        }
        "maxlog" => {
            let mut kv = parse_kv(rest.unwrap_or(""))?;
            let alpha = take(&mut kv, "alpha")?;
            finish(kv)?;
            Kernel::new(KernelFamily::MaxLogKernel { alpha })
        }
        "powerlog" => {
            let mut kv = parse_kv(rest.unwrap_or(""))?;
            let alpha = take(&mut kv, "alpha")?;
            let alpha1 = take(&mut kv, "alpha1")?;
            finish(kv)?;
            Kernel::new(KernelFamily::PowerLogKernel { alpha, alpha1 })
        }
        "powerexp" => {
            let mut kv = parse_kv(rest.unwrap_or(""))?;
            let alpha = take(&mut kv, "alpha")?;
            finish(kv)?;
            Kernel::new(KernelFamily::PowerExpCut { alpha })
        }
        "table" => {
            let path = rest.ok_or_else(|| Error::parse(s, "table needs a file path"))?;
            let text = std::fs::read_to_string(path.trim())?;
            parse_kernel_table_text(&text)
        }
        other => Err(Error::parse(other, "unknown kernel family")),
    }
}

pub fn parse_weight(s: &str) -> Result<Weight> {
    let (head, rest) = split_head(s);
    match head.to_ascii_lowercase().as_str() {
        "one" => {
            if rest.map_or(false, |r| !r.trim().is_empty()) {
                return Err(Error::parse(s, "one takes no parameters"));
            }
            Ok(Weight::one())
        }
        "power" => {
            let mut kv = parse_kv(rest.unwrap_or(""))?;
            let beta = take(&mut kv, "beta")?;
            finish(kv)?;
            Weight::new(WeightFamily::PowerBeta { beta })
        }
        "powerlog" => {
            let mut kv = parse_kv(rest.unwrap_or(""))?;
            let beta = take(&mut kv, "beta")?;
            let beta1 = take(&mut kv, "beta1")?;
            finish(kv)?;
            Weight::new(WeightFamily::PowerLogBeta { beta, beta1 })
        }
        other => Err(Error::parse(other, "unknown weight family")),
    }
}

/// Suite configs: `[section]` headers over `key = value` lines; `#` comments.
/// Duplicate keys within a section are rejected; section order is preserved.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Config {
    pub sections: Vec<(String, BTreeMap<String, String>)>,
}

impl Config {
    pub fn section(&self, name: &str) -> Option<&BTreeMap<String, String>> {
        self.sections
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, m)| m)
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.section(section).and_then(|m| m.get(key)).map(|s| s.as_str())
    }
}

pub fn parse_config(text: &str) -> Result<Config> {
    let mut cfg = Config::default();
    let mut current: Option<usize> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| Error::parse(line, format!("line {}: unclosed section", lineno + 1)))?
                .trim();
            if name.is_empty() {
                return Err(Error::parse(
                    line,
                    format!("line {}: empty section name", lineno + 1),
                ));
            }
            cfg.sections.push((name.to_string(), BTreeMap::new()));
            current = Some(cfg.sections.len() - 1);
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::parse(line, format!("line {}: expected key = value", lineno + 1)))?;
        let idx = current
            .ok_or_else(|| Error::parse(line, format!("line {}: key before any section", lineno + 1)))?;
        if cfg.sections[idx]
            .1
            .insert(k.trim().to_string(), v.trim().to_string())
            .is_some()
        {
            return Err(Error::parse(
                k.trim(),
                format!("line {}: duplicate key", lineno + 1),
            ));
        }
        if cfg.sections.len() > 4096 || cfg.sections[idx].1.len() > 4096 {
            return Err(Error::parse("", "config too large"));
        }
    }
    Ok(cfg)
}
