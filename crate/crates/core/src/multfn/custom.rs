//! Custom function documents.
//!
//! A document is a sequence of `key = value` lines; blank lines and `#` comments
//! are ignored.
//!
//! ```text
//! name = my_function        # optional
//! family = table            # sigma | phi | tau | table
//! k = 3                     # sigma only
//! horizon = 10000           # tau only: table horizon
//! table = 2 1 -3            # table only, repeatable: q e f(q^e)
//! ```

use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;

use super::{FnDescriptor, PrimePowerTable};
use crate::error::{Error, Result};
use crate::tau::shared_tau_table;

pub const DEFAULT_CUSTOM_TAU_HORIZON: u64 = 10_000;

fn parse_field<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::parse(line, format!("`{key}`: cannot parse `{value}`")))
}

pub fn load_custom(text: &str) -> Result<FnDescriptor> {
    let mut name: Option<String> = None;
    let mut family: Option<(usize, String)> = None;
    let mut k: Option<(usize, u32)> = None;
    let mut horizon: Option<(usize, u64)> = None;
    let mut table = PrimePowerTable::new();
    let mut table_line: Option<usize> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| Error::parse(line, "expected `key = value`"))?;
        let once = |seen: bool| {
            if seen {
                Err(Error::parse(line, format!("duplicate key `{key}`")))
            } else {
                Ok(())
            }
        };
        match key {
            "name" => {
                once(name.is_some())?;
                name = Some(value.to_string());
            }
            "family" => {
                once(family.is_some())?;
                family = Some((line, value.to_string()));
            }
            "k" => {
                once(k.is_some())?;
                k = Some((line, parse_field(line, key, value)?));
            }
            "horizon" => {
                once(horizon.is_some())?;
                horizon = Some((line, parse_field(line, key, value)?));
            }
            "table" => {
                let fields: Vec<&str> = value.split_whitespace().collect();
                let [q, e, v] = fields[..] else {
                    return Err(Error::parse(line, "`table` entries are `q e value`"));
                };
                let q: u64 = parse_field(line, "table q", q)?;
                let e: u32 = parse_field(line, "table e", e)?;
                let v: BigInt = parse_field(line, "table value", v)?;
                if table.get(q, e).is_some() {
                    return Err(Error::parse(line, format!("duplicate table entry for {q}^{e}")));
                }
                table.insert(q, e, v).map_err(|err| Error::parse(line, err.to_string()))?;
                table_line.get_or_insert(line);
            }
            other => return Err(Error::parse(line, format!("unknown key `{other}`"))),
        }
    }

    let (fam_line, fam) = family.ok_or_else(|| Error::parse(1, "missing `family`"))?;
    let reject = |present: Option<usize>, key: &str| -> Result<()> {
        match present {
            Some(l) => Err(Error::parse(l, format!("`{key}` does not apply to family `{fam}`"))),
            None => Ok(()),
        }
    };
    let mut desc = match fam.as_str() {
        "sigma" => {
            reject(horizon.map(|h| h.0), "horizon")?;
            reject(table_line, "table")?;
            let (_, k) = k.ok_or_else(|| Error::parse(fam_line, "family `sigma` needs `k`"))?;
            FnDescriptor::sigma(k)
        }
        "phi" => {
            reject(k.map(|v| v.0), "k")?;
            reject(horizon.map(|h| h.0), "horizon")?;
            reject(table_line, "table")?;
            FnDescriptor::phi()
        }
        "tau" => {
            reject(k.map(|v| v.0), "k")?;
            reject(table_line, "table")?;
            let (h_line, h) = horizon.unwrap_or((fam_line, DEFAULT_CUSTOM_TAU_HORIZON));
            FnDescriptor::tau(shared_tau_table(h).map_err(|e| Error::parse(h_line, e.to_string()))?)
        }
        "table" => {
            reject(k.map(|v| v.0), "k")?;
            reject(horizon.map(|h| h.0), "horizon")?;
            FnDescriptor::from_table(name.clone().unwrap_or_else(|| "table".into()), table)
        }
        other => return Err(Error::parse(fam_line, format!("unknown family `{other}`"))),
    };
    if let Some(n) = name {
        desc.name = n;
    }
    Ok(desc)
}

pub fn load_custom_file(path: &Path) -> Result<FnDescriptor> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    load_custom(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multfn::Family;

    #[test]
    fn named_families() {
        let f = load_custom("family = sigma\nk = 0\n").unwrap();
        assert!(matches!(f.family(), Family::Sigma { k: 0 }));
        assert_eq!(f.eval(12).unwrap(), BigInt::from(6));
        let f = load_custom("# totient\nfamily = phi").unwrap();
        assert_eq!(f.eval(9).unwrap(), BigInt::from(6));
    }

    #[test]
    fn tau_family_matches_expansion() {
        let f = load_custom("family = tau\nhorizon = 10000\n").unwrap();
        let Family::Tau(t) = f.family() else { panic!() };
        assert_eq!(t.horizon(), 10_000);
        assert_eq!(f.eval(5).unwrap(), BigInt::from(4830));
        // multiplicativity against the table itself
        assert_eq!(f.eval(9991).unwrap(), BigInt::from(t.get(9991).unwrap()));
    }

    #[test]
    fn table_coverage_errors() {
        let f = load_custom("name = spike\nfamily = table\ntable = 2 1 0\n").unwrap();
        assert_eq!(f.name(), "spike");
        assert_eq!(f.eval(2).unwrap(), BigInt::from(0));
        assert_eq!(f.eval(1).unwrap(), BigInt::from(1));
        let err = f.eval(6).unwrap_err();
        assert!(matches!(err, Error::Coverage { q: 3, e: 1, .. }), "{err}");
    }

    #[test]
    fn parse_errors_cite_lines() {
        let err = load_custom("family = sigma\nkk = 3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = load_custom("family = sigma\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
        let err = load_custom("family = table\ntable = 4 1 3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = load_custom("family = table\ntable = 2 0 5\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = load_custom("family = phi\n\nk = 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = load_custom("family = zeta\n").unwrap_err();
        assert!(err.to_string().contains("unknown family"), "{err}");
    }
}
