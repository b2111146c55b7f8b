//! Parser for lists of probe sizes such as `10..200:10,300`.

use std::fmt;

/// Upper limit on the number of values one list may expand to.
pub const MAX_VALUES: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseNListError(String);

impl fmt::Display for ParseNListError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ParseNListError {}

fn err(msg: impl Into<String>) -> ParseNListError {
    ParseNListError(msg.into())
}

/// Parses comma-separated items, each either `n` or an inclusive range
/// `a..b` with optional `:step`. Every value must be at least 1.
pub fn parse_n_values(text: &str) -> Result<Vec<usize>, ParseNListError> {
    let mut out = Vec::new();
    for item in text.split(',') {
        let item = item.trim();
        if item.is_empty() {
            return Err(err(format!("empty item in n list {text:?}")));
        }
        match item.split_once("..") {
            None => out.push(parse_n(item)?),
            Some((lo, rest)) => {
                let (hi, step) = match rest.split_once(':') {
                    Some((hi, step)) => (hi, parse_n(step)?),
                    None => (rest, 1),
                };
                let (lo, hi) = (parse_n(lo)?, parse_n(hi)?);
                if lo > hi {
                    return Err(err(format!("range {item:?} runs backwards")));
                }
                let count = (hi - lo) / step + 1;
                if out.len() + count > MAX_VALUES {
                    return Err(err(format!("n list expands to more than {MAX_VALUES} values")));
                }
                out.extend((lo..=hi).step_by(step));
            }
        }
        if out.len() > MAX_VALUES {
            return Err(err(format!("n list expands to more than {MAX_VALUES} values")));
        }
    }
    Ok(out)
}

fn parse_n(s: &str) -> Result<usize, ParseNListError> {
    let s = s.trim();
    let n: usize = s.parse().map_err(|_| err(format!("{s:?} is not a positive integer")))?;
    if n == 0 {
        return Err(err("n must be at least 1"));
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singles_and_ranges() {
        assert_eq!(parse_n_values("5").unwrap(), [5]);
        assert_eq!(parse_n_values("1,3, 7").unwrap(), [1, 3, 7]);
        assert_eq!(parse_n_values("10..30:10,300").unwrap(), [10, 20, 30, 300]);
        assert_eq!(parse_n_values("2..5").unwrap(), [2, 3, 4, 5]);
        assert_eq!(parse_n_values("10..25:10").unwrap(), [10, 20]);
    }

    #[test]
    fn rejects_bad_items() {
        for bad in ["", "0", "1,,2", "5..2", "1..4:0", "a", "-3", "1..", "..4", "1..2..3", "1..1000000"] {
            assert!(parse_n_values(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn huge_range_is_refused_without_allocating() {
        assert!(parse_n_values(&format!("1..{}", usize::MAX)).is_err());
    }
}
