//! Text cache for τ tables.
//!
//! ```text
//! # multcong tau table v1
//! horizon 5
//! 1 1
//! 2 -24
//! ...
//! ```
//!
//! One `n value` line per `n = 1..=horizon`, in order. Loading rejects files whose
//! leading values disagree with the expansion.

use std::io::{BufRead, Write};

use super::TauTable;
use crate::error::{Error, Result};

const MAGIC: &str = "# multcong tau table v1";

pub fn write_cache<W: Write>(table: &TauTable, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{MAGIC}")?;
    writeln!(out, "horizon {}", table.horizon())?;
    for (i, v) in table.values().iter().enumerate() {
        writeln!(out, "{} {}", i + 1, v)?;
    }
    out.flush()
}

pub fn read_cache<R: BufRead>(input: R) -> Result<TauTable> {
    let mut lines = input.lines().enumerate();
    let mut next_line = || -> Result<Option<(usize, String)>> {
        match lines.next() {
            None => Ok(None),
            Some((i, Ok(l))) => Ok(Some((i + 1, l))),
            Some((i, Err(e))) => Err(Error::parse(i + 1, e.to_string())),
        }
    };

    match next_line()? {
        Some((_, l)) if l.trim() == MAGIC => {}
        _ => return Err(Error::parse(1, "missing tau cache header")),
    }
    let horizon: u64 = match next_line()? {
        Some((ln, l)) => l
            .trim()
            .strip_prefix("horizon ")
            .and_then(|h| h.trim().parse().ok())
            .ok_or_else(|| Error::parse(ln, "expected `horizon <N>`"))?,
        None => return Err(Error::parse(2, "missing horizon line")),
    };
    let mut values = Vec::with_capacity(horizon as usize);
    while let Some((ln, l)) = next_line()? {
        let l = l.trim();
        if l.is_empty() {
            continue;
        }
        let mut parts = l.split_whitespace();
        let n: u64 = parts.next().and_then(|s| s.parse().ok()).ok_or_else(|| Error::parse(ln, "bad index"))?;
        let v: i128 = parts.next().and_then(|s| s.parse().ok()).ok_or_else(|| Error::parse(ln, "bad value"))?;
        if parts.next().is_some() {
            return Err(Error::parse(ln, "trailing fields"));
        }
        if n != values.len() as u64 + 1 {
            return Err(Error::parse(ln, format!("expected index {}, found {n}", values.len() + 1)));
        }
        values.push(v);
    }
    if values.len() as u64 != horizon {
        return Err(Error::InvalidArgument(format!(
            "tau cache declares horizon {horizon} but holds {} values",
            values.len()
        )));
    }
    if values.len() < super::LEADING_TAU.len() {
        return Err(Error::InvalidArgument("tau cache too short to validate its leading values".into()));
    }
    TauTable::from_values(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tau::tau_table;

    #[test]
    fn round_trip() {
        let t = tau_table(50).unwrap();
        let mut buf = Vec::new();
        write_cache(&t, &mut buf).unwrap();
        let back = read_cache(&buf[..]).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn rejects_corrupted_leading_value() {
        let t = tau_table(10).unwrap();
        let mut buf = Vec::new();
        write_cache(&t, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap().replace("\n2 -24\n", "\n2 24\n");
        let err = read_cache(text.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("tau(2)"), "{err}");
    }

    #[test]
    fn rejects_truncated_file() {
        let text = format!("{MAGIC}\nhorizon 7\n1 1\n2 -24\n3 252\n4 -1472\n5 4830\n");
        assert!(read_cache(text.as_bytes()).is_err());
    }
}
