//! Argument parsing helpers and CSV formatting.

use std::fmt::Write as _;

/// `printf("%.12g")`.
pub fn fmt_g(x: f64) -> String {
    fmt_g_prec(x, 12)
}

pub fn fmt_g_prec(x: f64, prec: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let p = prec.max(1);
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let m = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Optional cell: empty when absent.
pub fn cell(x: Option<f64>) -> String {
    x.map(fmt_g).unwrap_or_default()
}

/// Integer lists: `1..10`, `1,2,5`, `10:100:10`, or mixtures separated by commas.
pub fn parse_u64_list(s: &str) -> Result<Vec<u64>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let a = parse_count(a)?;
            let b = parse_count(b.trim_start_matches('='))?;
            if a > b {
                return Err(format!("empty range {part}"));
            }
            out.extend(a..=b);
        } else if part.contains(':') {
            let f: Vec<&str> = part.split(':').collect();
            if f.len() != 3 {
                return Err(format!("expected a:b:step, got {part}"));
            }
            let (a, b, step) = (parse_count(f[0])?, parse_count(f[1])?, parse_count(f[2])?);
            if step == 0 || a > b {
                return Err(format!("bad integer grid {part}"));
            }
            out.extend((a..=b).step_by(step as usize));
        } else {
            out.push(parse_count(part)?);
        }
    }
    if out.is_empty() {
        return Err("empty list".into());
    }
    Ok(out)
}

/// Real lists: `0.2,0.5` or inclusive grids `a:b:step`.
pub fn parse_f64_list(s: &str) -> Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if part.contains(':') {
            out.extend(parse_grid(part)?);
        } else {
            out.push(parse_real(part)?);
        }
    }
    if out.is_empty() {
        return Err("empty list".into());
    }
    Ok(out)
}

/// Inclusive grid `a:b:step`; points are rounded to the printed precision so
/// the value used is the value shown.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let f: Vec<&str> = s.split(':').collect();
    if f.len() != 3 {
        return Err(format!("expected a:b:step, got {s}"));
    }
    let (a, b, step) = (parse_real(f[0])?, parse_real(f[1])?, parse_real(f[2])?);
    if !(step > 0.0) || a > b {
        return Err(format!("bad grid {s}"));
    }
    let steps = ((b - a) / step * (1.0 + 1e-12) + 1e-9).floor() as u64;
    if steps > 10_000_000 {
        return Err(format!("grid {s} has too many points"));
    }
    Ok((0..=steps)
        .map(|i| fmt_g(a + i as f64 * step).parse().expect("formatted float parses"))
        .collect())
}

pub fn parse_real(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("not a number: {s}"))?;
    if !v.is_finite() {
        return Err(format!("not a finite number: {s}"));
    }
    Ok(v)
}

/// Non-negative integers, also in scientific form such as `1e6`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    let s = s.trim();
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let v = parse_real(s)?;
    if v < 0.0 || v.fract() != 0.0 || v > 9_007_199_254_740_992.0 {
        return Err(format!("not a non-negative integer: {s}"));
    }
    Ok(v as u64)
}

/// CSV body: header row plus data rows.
#[derive(Debug, Default)]
pub struct Table {
    text: String,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        let mut t = Table::default();
        t.row(header.iter().map(|s| s.to_string()));
        t
    }

    pub fn row<I, S>(&mut self, cells: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut first = true;
        for c in cells {
            if !first {
                self.text.push(',');
            }
            first = false;
            let c = c.as_ref();
            if c.contains([',', '"', '\n']) {
                let _ = write!(self.text, "\"{}\"", c.replace('"', "\"\""));
            } else {
                self.text.push_str(c);
            }
        }
        self.text.push('\n');
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}
