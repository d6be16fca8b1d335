//! Text forms accepted on the command line and in config files.
//!
//! Complex numbers: `a+bi`, `a-bi`, `bi`, `a`, `i`, `(re, im)` and `re,im`,
//! whitespace anywhere. Phases: a number or a multiple of `pi`, e.g. `pi`,
//! `-pi/2`, `0.5pi`, `3*pi/4`.

use catbell_core::ComplexAmplitude;

fn real(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

/// Parse a complex amplitude.
pub fn complex(text: &str) -> Result<ComplexAmplitude, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty complex number".into());
    }
    let (re, im) = if let Some((a, b)) = s
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .unwrap_or(&s)
        .split_once(',')
    {
        (real(a)?, real(b)?)
    } else if let Some(body) = s.strip_suffix('i') {
        // split before the last sign that is not part of an exponent
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        let coefficient = |t: &str| match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => real(t),
        };
        match split {
            Some(k) => (real(&body[..k])?, coefficient(&body[k..])?),
            None => (0.0, coefficient(body)?),
        }
    } else {
        (real(&s)?, 0.0)
    };
    ComplexAmplitude::new(re, im).map_err(|e| e.to_string())
}

/// Parse a phase in radians.
pub fn phase(text: &str) -> Result<f64, String> {
    let s = text
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .to_lowercase()
        .replace('π', "pi");
    let Some((before, after)) = s.split_once("pi") else {
        return real(&s);
    };
    let coefficient = match before.strip_suffix('*').unwrap_or(before) {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => real(c)?,
    };
    let divisor = match after {
        "" => 1.0,
        d => real(
            d.strip_prefix('/')
                .ok_or_else(|| format!("cannot parse phase `{text}`"))?,
        )?,
    };
    let v = coefficient * std::f64::consts::PI / divisor;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{text}` is not a finite phase"))
    }
}

/// `min:max`.
pub fn range(text: &str) -> Result<(f64, f64), String> {
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| format!("expected `min:max`, got `{text}`"))?;
    Ok((real(a.trim())?, real(b.trim())?))
}

/// `n` for both axes or `n,m` for alpha and omega separately.
pub fn steps(text: &str) -> Result<(usize, usize), String> {
    let count = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| format!("`{t}` is not a step count"))
    };
    match text.split_once(',') {
        Some((a, b)) => Ok((count(a)?, count(b)?)),
        None => count(text).map(|n| (n, n)),
    }
}

pub fn float(text: &str) -> Result<f64, String> {
    real(text.trim())
}

pub fn integer<T: std::str::FromStr>(text: &str) -> Result<T, String> {
    text.trim()
        .parse()
        .map_err(|_| format!("`{text}` is not a non-negative integer"))
}

pub fn boolean(text: &str) -> Result<bool, String> {
    match text.trim() {
        "true" => Ok(true),
        "false" => Ok(false),
        t => Err(format!("expected `true` or `false`, got `{t}`")),
    }
}
