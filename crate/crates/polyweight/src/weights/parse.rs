//! Weight mini-language: `omega(pow:2,sin) * omega(pow:4,cos) * jacobi(0.5,0)`.

use super::catalog::{FSpec, GKind, GSpec};
use super::omega::{CompositeWeight, DoublingFactor, OmegaWeight};
use super::WeightError;

fn err(column: usize, message: impl Into<String>) -> WeightError {
    WeightError::Parse {
        column,
        message: message.into(),
    }
}

fn number(text: &str, column: usize) -> Result<f64, WeightError> {
    text.trim().parse::<f64>().map_err(|_| {
        err(
            column,
            format!("expected a number, found `{}`", text.trim()),
        )
    })
}

fn family(text: &str, column: usize) -> Result<FSpec, WeightError> {
    let parts: Vec<&str> = text.split(':').map(str::trim).collect();
    let positive = |s: &str| -> Result<f64, WeightError> {
        let v = number(s, column)?;
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(err(column, "exponent must be positive"))
        }
    };
    match parts.as_slice() {
        ["pow", a] => Ok(FSpec::power(positive(a)?)),
        ["powlog", a, xi] => Ok(FSpec::power_log(positive(a)?, number(xi, column)?)),
        ["exppow", a] => Ok(FSpec::exp_power(positive(a)?)),
        _ => Err(err(
            column,
            format!("unknown family `{text}` (pow:a, powlog:a:xi, exppow:a)"),
        )),
    }
}

fn inner(text: &str, column: usize) -> Result<GSpec, WeightError> {
    let parts: Vec<&str> = text.split(':').map(str::trim).collect();
    let kind = match parts.as_slice() {
        ["sin"] => GKind::Sin,
        ["cos"] => GKind::Cos,
        ["sincos"] => GKind::ProductSinCos,
        ["sinshift", theta] => GKind::SinShift {
            theta: number(theta, column)?,
        },
        _ => {
            return Err(err(
                column,
                format!("unknown inner function `{text}` (sin, cos, sincos, sinshift:theta)"),
            ))
        }
    };
    Ok(GSpec::new(kind))
}

/// Parse a product of `omega(...)` terms with at most one `jacobi(gamma,theta)` or `one`.
pub fn parse_weight(spec: &str) -> Result<CompositeWeight, WeightError> {
    let mut factors = Vec::new();
    let mut doubling: Option<DoublingFactor> = None;
    let mut column = 1;
    for term in spec.split('*') {
        let lead = term.len() - term.trim_start().len();
        let col = column + lead;
        column += term.len() + 1;
        let t = term.trim();
        if t.is_empty() {
            return Err(err(col, "empty factor"));
        }
        if t == "one" {
            if doubling.is_some() {
                return Err(err(col, "at most one doubling factor"));
            }
            doubling = Some(DoublingFactor::One);
            continue;
        }
        let open = t
            .find('(')
            .ok_or_else(|| err(col, format!("expected `name(...)`, found `{t}`")))?;
        if !t.ends_with(')') {
            return Err(err(col + t.len(), "missing `)`"));
        }
        let name = &t[..open];
        let body = &t[open + 1..t.len() - 1];
        let args: Vec<&str> = body.split(',').collect();
        let arg_col = col + open + 1;
        match (name, args.as_slice()) {
            ("omega", [f, g]) => {
                let f = family(f, arg_col)?;
                let g = inner(g, arg_col + f_len(body))?;
                factors.push(OmegaWeight::new(f, g));
            }
            ("jacobi", [gamma, theta]) => {
                if doubling.is_some() {
                    return Err(err(col, "at most one doubling factor"));
                }
                let gamma = number(gamma, arg_col)?;
                if gamma <= -1.0 {
                    return Err(err(arg_col, "jacobi exponent must exceed -1"));
                }
                doubling = Some(DoublingFactor::Jacobi {
                    gamma,
                    theta: number(theta, arg_col)?,
                });
            }
            ("omega", _) | ("jacobi", _) => {
                return Err(err(arg_col, format!("`{name}` takes two arguments")))
            }
            _ => return Err(err(col, format!("unknown factor `{name}`"))),
        }
    }
    CompositeWeight::new(factors, doubling.unwrap_or(DoublingFactor::One))
}

fn f_len(body: &str) -> usize {
    body.find(',').map_or(0, |i| i + 1)
}
