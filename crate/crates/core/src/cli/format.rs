//! Number formatting for reports: 12 significant digits everywhere.

use serde_json::{Number, Value};

pub const SIGNIFICANT_DIGITS: usize = 12;

fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

/// `x` rounded to 12 significant digits, without trailing zeros.
pub fn fmt_float(x: f64) -> String {
    let r = round_sig(x);
    if r == 0.0 {
        return "0".into();
    }
    let a = r.abs();
    if !(1e-5..1e15).contains(&a) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

/// Round every non-integer number in `v` to 12 significant digits.
pub fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().map(round_sig).and_then(Number::from_f64) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => fmt_float(x),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Bool(b) => b.to_string(),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            format!("[{}]", parts.join(", "))
        }
        Value::Object(_) => serde_json::to_string(v).unwrap_or_default(),
    }
}

fn lines(prefix: &str, v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                lines(&key, x, out);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object()) => {
            for (i, x) in items.iter().enumerate() {
                lines(&format!("{prefix}[{i}]"), x, out);
            }
        }
        _ => out.push(format!("{prefix}: {}", scalar(v))),
    }
}

/// Plain-text rendering: one `key: value` line per result field, then
/// diagnostics.
pub fn render_text(command: &str, result: &Value, diagnostics: &[String]) -> String {
    let mut out = vec![format!("# {command}")];
    lines("", result, &mut out);
    out.extend(diagnostics.iter().map(|d| format!("warning: {d}")));
    out.join("\n") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn twelve_digits() {
        assert_eq!(fmt_float(0.25), "0.25");
        assert_eq!(fmt_float(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_float(2.0e-11), "2e-11");
        assert_eq!(fmt_float(-123456.78901234567), "-123456.789012");
        let mut v = json!({"a": [0.1 + 0.2, 3], "b": {"c": 2.0 / 3.0}});
        round_floats(&mut v);
        assert_eq!(v, json!({"a": [0.3, 3], "b": {"c": 0.666666666667}}));
    }

    #[test]
    fn text_lines() {
        let t = render_text("x", &json!({"n": 1, "skein": {"summary": "ok"}}), &["w".into()]);
        assert_eq!(t, "# x\nn: 1\nskein.summary: ok\nwarning: w\n");
    }
}
