//! Benchmark grid syntax.
//!
//! A grid is written `N,PARAM` where either side is a single value, a braced list
//! `{a,b,c}` or a braced range `{a..b}`. Ranges over integers step by one;
//! ranges over decimals step by one unit in the last written decimal place,
//! so `{0.3..0.9}` yields 0.3, 0.4, ..., 0.9. Seeds use the same forms without
//! braces: `3`, `1..5` or `1,2,7`.

/// Splits on commas that are not inside braces.
fn split_top(spec: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (k, ch) in spec.char_indices() {
        match ch {
            '{' => depth += 1,
            '}' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&spec[start..k]);
                start = k + 1;
            }
            _ => {}
        }
    }
    parts.push(&spec[start..]);
    parts
}

fn decimals(s: &str) -> usize {
    s.split_once('.').map_or(0, |(_, frac)| frac.len())
}

/// Values of one side of a grid.
pub fn expand_values(spec: &str) -> Result<Vec<f64>, String> {
    let spec = spec.trim();
    let inner = match spec.strip_prefix('{').and_then(|s| s.strip_suffix('}')) {
        Some(inner) => inner,
        None => return Ok(vec![parse_f64(spec)?]),
    };
    if let Some((a, b)) = inner.split_once("..") {
        let (a, b) = (a.trim(), b.trim());
        let d = decimals(a).max(decimals(b));
        let scale = 10f64.powi(d as i32);
        let lo = (parse_f64(a)? * scale).round() as i64;
        let hi = (parse_f64(b)? * scale).round() as i64;
        if hi < lo {
            return Err(format!("empty range {spec:?}"));
        }
        // Dividing integers keeps 0.3 as the literal 0.3 rather than 0.1 * 3.
        return Ok((lo..=hi).map(|k| k as f64 / scale).collect());
    }
    inner.split(',').map(|s| parse_f64(s.trim())).collect()
}

fn parse_f64(s: &str) -> Result<f64, String> {
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| format!("not a number: {s:?}"))
}

/// `(n, param)` pairs of a grid in row-major order.
pub fn expand_grid(spec: &str) -> Result<Vec<(usize, f64)>, String> {
    let parts = split_top(spec);
    if parts.len() != 2 {
        return Err(format!("expected N,PARAM in {spec:?}"));
    }
    let ns = expand_values(parts[0])?;
    let params = expand_values(parts[1])?;
    let mut out = Vec::with_capacity(ns.len() * params.len());
    for &n in &ns {
        if n < 0.0 || n.fract() != 0.0 {
            return Err(format!("vertex count must be a nonnegative integer, got {n}"));
        }
        for &p in &params {
            out.push((n as usize, p));
        }
    }
    Ok(out)
}

pub fn expand_seeds(spec: &str) -> Result<Vec<u64>, String> {
    let mut seeds = Vec::new();
    for part in spec.split(',') {
        let part = part.trim();
        let parse = |s: &str| s.trim().parse::<u64>().map_err(|_| format!("bad seed {s:?}"));
        match part.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (parse(a)?, parse(b)?);
                if b < a {
                    return Err(format!("empty seed range {part:?}"));
                }
                seeds.extend(a..=b);
            }
            None => seeds.push(parse(part)?),
        }
    }
    Ok(seeds)
}
