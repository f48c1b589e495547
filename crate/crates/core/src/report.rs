//! Assertion records shared by the pipelines and the CLI.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    Paper,
    Derived,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Paper => "PAPER",
            Provenance::Derived => "DERIVED",
        })
    }
}

impl std::str::FromStr for Provenance {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "PAPER" => Ok(Provenance::Paper),
            "DERIVED" => Ok(Provenance::Derived),
            _ => Err(crate::Error::Parse(format!("bad provenance {s:?}"))),
        }
    }
}

/// One checked assertion.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Record {
    pub id: String,
    pub pass: bool,
    pub expected: String,
    pub got: String,
    pub provenance: Provenance,
}

impl Record {
    pub fn new(
        id: impl Into<String>,
        expected: impl fmt::Display,
        got: impl fmt::Display,
        provenance: Provenance,
    ) -> Self {
        let expected = expected.to_string();
        let got = got.to_string();
        Record {
            id: id.into(),
            pass: expected == got,
            expected,
            got,
            provenance,
        }
    }

    /// A record whose verdict is decided by the caller.
    pub fn check(
        id: impl Into<String>,
        pass: bool,
        expected: impl fmt::Display,
        got: impl fmt::Display,
        provenance: Provenance,
    ) -> Self {
        Record {
            id: id.into(),
            pass,
            expected: expected.to_string(),
            got: got.to_string(),
            provenance,
        }
    }

    pub fn error(
        id: impl Into<String>,
        expected: impl fmt::Display,
        err: &crate::Error,
        provenance: Provenance,
    ) -> Self {
        Record::check(id, false, expected, format!("error: {err}"), provenance)
    }
}

/// Values are written with spaces replaced by `_` so each record stays one
/// whitespace-separated line.
fn field(s: &str) -> String {
    s.replace(' ', "_").replace('\n', ";")
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "assert id={} status={} expected={} got={} provenance={}",
            self.id,
            if self.pass { "pass" } else { "fail" },
            field(&self.expected),
            field(&self.got),
            self.provenance
        )
    }
}

pub fn all_pass(records: &[Record]) -> bool {
    records.iter().all(|r| r.pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_line() {
        let r = Record::new("serre.depth", 5, 5, Provenance::Paper);
        assert_eq!(
            r.to_string(),
            "assert id=serre.depth status=pass expected=5 got=5 provenance=PAPER"
        );
        let r = Record::new("x", "a b", "c", Provenance::Derived);
        assert!(!r.pass);
        assert!(r.to_string().contains("expected=a_b"));
    }
}
