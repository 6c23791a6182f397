//! Text format for channels.
//!
//! ```text
//! # four-state channel
//! lambda = 0.6 0.601 0.5
//! t      = 0.021 0 0.495   # translations
//! ```
//!
//! One `key = v1 v2 v3` assignment per line, keys `lambda` and `t`, each given
//! exactly once. Values are decimal literals (`-0.5`, `1e-3`, `.25`) separated
//! by whitespace. `#` starts a comment that runs to the end of the line; blank
//! lines are ignored. Errors carry 1-based line and column numbers.

use crate::error::{Error, Result};
use crate::qubit::QubitChannel;

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Digits with an optional sign, fraction and exponent; rejects `inf`, `nan`
/// and hexadecimal forms that `f64::from_str` would otherwise accept.
fn is_decimal(tok: &str) -> bool {
    let b = tok.as_bytes();
    let mut i = 0;
    if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
        i += 1;
    }
    let int_start = i;
    while i < b.len() && b[i].is_ascii_digit() {
        i += 1;
    }
    let mut digits = i - int_start;
    if i < b.len() && b[i] == b'.' {
        i += 1;
        let frac_start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        digits += i - frac_start;
    }
    if digits == 0 {
        return false;
    }
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        i += 1;
        if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
            i += 1;
        }
        let exp_start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        if i == exp_start {
            return false;
        }
    }
    i == b.len()
}

/// Parse the channel format. Complete positivity is not checked here.
pub fn parse_channel(text: &str) -> Result<QubitChannel> {
    let mut lambda: Option<[f64; 3]> = None;
    let mut t: Option<[f64; 3]> = None;
    let mut last_line = 1;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let Some(eq) = content.find('=') else {
            let col = content.len() - content.trim_start().len() + 1;
            return Err(err(line, col, "expected `key = v1 v2 v3`"));
        };
        let key = content[..eq].trim();
        let key_col = content.len() - content.trim_start().len() + 1;
        let slot = match key {
            "lambda" => &mut lambda,
            "t" => &mut t,
            "" => return Err(err(line, key_col, "missing key before `=`")),
            other => {
                return Err(err(
                    line,
                    key_col,
                    format!("unknown key `{other}` (expected `lambda` or `t`)"),
                ))
            }
        };
        if slot.is_some() {
            return Err(err(line, key_col, format!("`{key}` given twice")));
        }
        let mut values = Vec::with_capacity(3);
        let rest = &content[eq + 1..];
        let mut offset = eq + 1;
        for tok in rest.split_whitespace() {
            let pos = offset
                + content[offset..]
                    .find(tok)
                    .expect("token comes from this slice");
            offset = pos + tok.len();
            let col = content[..pos].chars().count() + 1;
            if !is_decimal(tok) {
                return Err(err(line, col, format!("`{tok}` is not a decimal number")));
            }
            if values.len() == 3 {
                return Err(err(
                    line,
                    col,
                    format!("`{key}` takes exactly three values"),
                ));
            }
            values.push(
                tok.parse::<f64>()
                    .map_err(|e| err(line, col, e.to_string()))?,
            );
        }
        if values.len() != 3 {
            let col = content.trim_end().chars().count() + 1;
            return Err(err(
                line,
                col,
                format!("`{key}` takes exactly three values, got {}", values.len()),
            ));
        }
        *slot = Some([values[0], values[1], values[2]]);
    }
    match (lambda, t) {
        (Some(lambda), Some(t)) => Ok(QubitChannel::new(lambda, t)),
        (None, _) => Err(err(last_line, 1, "missing `lambda = l1 l2 l3`")),
        (_, None) => Err(err(last_line, 1, "missing `t = t1 t2 t3`")),
    }
}

/// Render a channel in the text format; `parse_channel` reads it back exactly.
pub fn format_channel(ch: &QubitChannel) -> String {
    let [l1, l2, l3] = ch.lambda;
    let [t1, t2, t3] = ch.t;
    format!("lambda = {l1:e} {l2:e} {l3:e}\nt = {t1:e} {t2:e} {t3:e}\n")
}
