//! Text formats for models and sections.
//!
//! A model file is a list of `key = value` lines; blank lines and `#` comments are
//! ignored:
//!
//! ```text
//! field = F3
//! a2 = 2*t^3 + 2
//! a4 = t^6
//! a6 = 0
//! ```
//!
//! `field` defaults to F9 when the coefficients use `i` and to F3 otherwise; a
//! missing coefficient is zero. A section is written `(x ; y)` with rational
//! functions in `t` (a comma also separates the coordinates), and `O` is the zero
//! section.

use super::{SurfacePoint, WeierstrassModel};
use crate::algebra::{parse_poly, parse_ratfunc, FieldKind, P9};
use crate::error::{Error, Result};

pub fn parse_model(text: &str) -> Result<WeierstrassModel> {
    let mut field: Option<FieldKind> = None;
    let mut coeffs: [Option<P9>; 3] = [None, None, None];
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) =
            line.split_once('=').ok_or_else(|| Error::Parse(format!("line {}: expected `key = value`", lineno + 1)))?;
        let key = key.trim();
        let value = value.trim();
        let slot = match key {
            "field" => {
                field = Some(FieldKind::parse(value)?);
                continue;
            }
            "a2" => 0,
            "a4" => 1,
            "a6" => 2,
            other => return Err(Error::Parse(format!("line {}: unknown key `{other}`", lineno + 1))),
        };
        if coeffs[slot].is_some() {
            return Err(Error::Parse(format!("line {}: duplicate key `{key}`", lineno + 1)));
        }
        let p = parse_poly(value).map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        coeffs[slot] = Some(p);
    }
    let [a2, a4, a6] = coeffs.map(|c| c.unwrap_or_else(P9::zero));
    let mut m = WeierstrassModel::new(a2, a4, a6);
    if let Some(f) = field {
        if f == FieldKind::F3 && m.field == FieldKind::F9 {
            return Err(Error::Parse("field = F3 but a coefficient involves i".into()));
        }
        m.field = f;
    }
    Ok(m)
}

pub fn format_model(m: &WeierstrassModel) -> String {
    format!("field = {}\na2 = {}\na4 = {}\na6 = {}\n", m.field, m.a2, m.a4, m.a6)
}

pub fn parse_point(s: &str) -> Result<SurfacePoint> {
    let s = s.trim();
    if s == "O" || s == "zero" {
        return Ok(SurfacePoint::Zero);
    }
    let inner = s
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("section `{s}` must be `(x ; y)` or `O`")))?;
    let (x, y) = split_top_level(inner)
        .ok_or_else(|| Error::Parse(format!("section `{s}` needs two coordinates separated by `;`")))?;
    Ok(SurfacePoint::Affine { x: parse_ratfunc(x)?, y: parse_ratfunc(y)? })
}

/// Split at the single `;` or `,` that is not inside parentheses.
fn split_top_level(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    let mut cut = None;
    for (k, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ';' | ',' if depth == 0 => {
                if cut.is_some() {
                    return None;
                }
                cut = Some(k);
            }
            _ => {}
        }
    }
    cut.map(|k| (&s[..k], &s[k + 1..]))
}

pub fn format_point(p: &SurfacePoint) -> String {
    match p {
        SurfacePoint::Zero => "O".to_string(),
        SurfacePoint::Affine { x, y } => format!("({x} ; {y})"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly, RatFunc};

    #[test]
    fn model_round_trip() {
        let text = "# fibration 1\nfield = F3\na2 = 2(t^3+1)\na4 = t^6\n";
        let m = parse_model(text).unwrap();
        assert_eq!(m.a2, parse_poly("2*t^3 + 2").unwrap());
        assert!(m.a6.is_zero());
        assert_eq!(parse_model(&format_model(&m)).unwrap(), m);
        assert!(parse_model("a2 = t\na2 = 1").is_err());
        assert!(parse_model("field = F3\na6 = i*t").is_err());
        assert!(parse_model("b = 1").is_err());
    }

    #[test]
    fn point_round_trip() {
        let p = parse_point("(t^2, t(t^4-1))").unwrap();
        assert_eq!(parse_point(&format_point(&p)).unwrap(), p);
        let q = parse_point("(1/(t+1) ; (t+i)/(t+1)^2)").unwrap();
        assert_eq!(parse_point(&format_point(&q)).unwrap(), q);
        assert_eq!(parse_point("O").unwrap(), SurfacePoint::Zero);
        assert!(parse_point("(1;2;3)").is_err());
        let r = parse_point("(0 ; it)").unwrap();
        assert_eq!(r.coords().unwrap().1, &(&RatFunc::var() * &RatFunc::constant(crate::algebra::F9::I)));
    }
}
