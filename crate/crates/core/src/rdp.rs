//! Rational double points in characteristic 2: a small database keyed by
//! Dynkin type and Artin coindex, with Tjurina numbers.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::GaloisField;
use crate::involution::InvolutionData;
use crate::lattice::Dynkin;
use crate::localring::{tjurina_number, Length};
use crate::report::{Provenance, Record};
use crate::series::TruncatedSeries;

const BUILTIN: &str = include_str!("../data/rdp.txt");

/// Precision used when computing Tjurina numbers of stored equations.
pub const TJURINA_PRECISION: u32 = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RdpClass {
    pub dynkin: Dynkin,
    /// Artin's coindex; `None` for type A.
    pub coindex: Option<usize>,
    pub tau: Option<usize>,
    pub tau_provenance: Provenance,
    pub pi1_order_two: Option<bool>,
    pub equation: Option<String>,
}

impl fmt::Display for RdpClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.coindex {
            Some(r) => write!(f, "{}^{r}", self.dynkin),
            None => write!(f, "{}", self.dynkin),
        }
    }
}

impl RdpClass {
    pub fn name(&self) -> String {
        self.to_string()
    }

    /// `D_{4r}^r` with its involution-quotient equation.
    pub fn d4r(r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::Domain("D_{4r}^r needs r >= 1".into()));
        }
        Ok(RdpClass {
            dynkin: Dynkin::D(4 * r),
            coindex: Some(r),
            tau: None,
            tau_provenance: Provenance::Derived,
            pi1_order_two: Some(true),
            equation: Some(format!("z^2 + x*{}*z + x*y^{} + x^2*y", y_pow(r), 2 * r)),
        })
    }

    pub fn e8_2() -> Self {
        RdpClass {
            dynkin: Dynkin::E(8),
            coindex: Some(2),
            tau: None,
            tau_provenance: Provenance::Derived,
            pi1_order_two: Some(true),
            equation: Some("z^2 + y*x^2*z + x^5 + y^3".into()),
        }
    }

    pub fn polynomial(&self) -> Result<Option<TruncatedSeries>> {
        let f2 = GaloisField::binary(1)?;
        self.equation
            .as_deref()
            .map(|e| TruncatedSeries::parse(e, &f2, &["x", "y", "z"]))
            .transpose()
    }
}

fn y_pow(r: usize) -> String {
    if r == 1 {
        "y".into()
    } else {
        format!("y^{r}")
    }
}

/// Parses `A3`, `D7^0`, `E8^2`.
pub fn parse_class_name(s: &str) -> Result<(Dynkin, Option<usize>)> {
    let (t, r) = match s.split_once('^') {
        Some((t, r)) => (
            t,
            Some(
                r.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad coindex in {s:?}")))?,
            ),
        ),
        None => (s, None),
    };
    let dynkin = Dynkin::parse(t)?;
    match (dynkin, r) {
        (Dynkin::A(_), Some(_)) => Err(Error::Parse(format!("type A has no coindex: {s:?}"))),
        (Dynkin::D(_) | Dynkin::E(_), None) => {
            Err(Error::Parse(format!("missing coindex in {s:?}")))
        }
        _ => Ok((dynkin, r)),
    }
}

/// Tjurina number of a class: computed from the equation when present,
/// otherwise the stored value.
pub fn tjurina_of_class(class: &RdpClass, precision: u32) -> Result<usize> {
    if let Some(f) = class.polynomial()? {
        return match tjurina_number(&f, precision)? {
            Length::Finite(t) => Ok(t),
            Length::Infinite => Err(Error::Precision {
                needed: precision + 1,
                available: precision,
            }),
        };
    }
    class
        .tau
        .ok_or_else(|| Error::Domain(format!("no Tjurina number known for {class}")))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    Unique(RdpClass),
    Ambiguous(Vec<RdpClass>),
    Unknown,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Unique(c) => write!(f, "{c}"),
            Classification::Ambiguous(cs) => {
                let names: Vec<String> = cs.iter().map(RdpClass::name).collect();
                write!(f, "ambiguous({})", names.join("|"))
            }
            Classification::Unknown => f.write_str("unknown"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RdpDatabase {
    pub version: u32,
    pub classes: Vec<RdpClass>,
}

impl RdpDatabase {
    pub fn parse(text: &str) -> Result<Self> {
        let mut version = None;
        let mut classes: Vec<RdpClass> = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| Error::Parse(format!("rdp database line {}: {msg}", ln + 1));
            if let Some(v) = line.strip_prefix("version ") {
                version = Some(v.trim().parse().map_err(|_| err("bad version"))?);
                continue;
            }
            let mut parts = line.split_whitespace();
            let mut next = |what: &str| parts.next().ok_or_else(|| err(&format!("missing {what}")));
            let (dynkin, coindex) = parse_class_name(next("class")?)?;
            let tau = next("tau")?;
            let tau = if tau == "-" {
                None
            } else {
                Some(tau.parse().map_err(|_| err("bad Tjurina number"))?)
            };
            let tau_provenance = next("source")?.parse()?;
            let pi1_order_two = match next("pi1 flag")? {
                "yes" => Some(true),
                "no" => Some(false),
                "-" => None,
                _ => return Err(err("pi1 flag must be yes, no or -")),
            };
            let equation = line
                .split_whitespace()
                .skip(4)
                .collect::<Vec<_>>()
                .join(" ");
            if equation.is_empty() {
                return Err(err("missing equation column"));
            }
            let class = RdpClass {
                dynkin,
                coindex,
                tau,
                tau_provenance,
                pi1_order_two,
                equation: (equation != "-").then_some(equation),
            };
            if classes.iter().any(|c| c.name() == class.name()) {
                return Err(err(&format!("duplicate class {class}")));
            }
            class.polynomial()?;
            classes.push(class);
        }
        Ok(RdpDatabase {
            version: version
                .ok_or_else(|| Error::Parse("rdp database has no version line".into()))?,
            classes,
        })
    }

    pub fn builtin() -> Result<Self> {
        Self::parse(BUILTIN)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get(&self, name: &str) -> Option<&RdpClass> {
        self.classes.iter().find(|c| c.name() == name)
    }

    /// One record per stored equation (computed against stored Tjurina
    /// number), plus one for injectivity of `(type, τ)`.
    pub fn self_check(&self) -> Vec<Record> {
        let mut out = Vec::new();
        for c in &self.classes {
            if c.equation.is_none() {
                continue;
            }
            let id = format!("rdp.self_check.{c}");
            let expected = c.tau.map_or("-".to_string(), |t| t.to_string());
            out.push(match tjurina_of_class(c, TJURINA_PRECISION) {
                Ok(t) => Record::new(id, expected, t, c.tau_provenance),
                Err(e) => Record::error(id, expected, &e, c.tau_provenance),
            });
        }
        let mut keys: Vec<(Dynkin, usize)> = self
            .classes
            .iter()
            .filter_map(|c| c.tau.map(|t| (c.dynkin, t)))
            .collect();
        keys.sort();
        let collisions = keys.windows(2).filter(|w| w[0] == w[1]).count();
        out.push(Record::new(
            "rdp.self_check.injective",
            0,
            collisions,
            Provenance::Derived,
        ));
        out
    }

    /// Matches `(type, τ)` against the stored classes.
    pub fn classify_by_tjurina(&self, tau: usize, dynkin: Dynkin) -> Classification {
        let hits: Vec<RdpClass> = self
            .classes
            .iter()
            .filter(|c| c.dynkin == dynkin && c.tau == Some(tau))
            .cloned()
            .collect();
        match hits.len() {
            0 => Classification::Unknown,
            1 => Classification::Unique(hits.into_iter().next().expect("one hit")),
            _ => Classification::Ambiguous(hits),
        }
    }
}

/// A class arising as the quotient by an involution, with its Artin data.
#[derive(Clone, Debug)]
pub struct QuotientClass {
    pub class: RdpClass,
    pub data: InvolutionData,
}

impl QuotientClass {
    pub fn d4r(r: usize) -> Result<Self> {
        let f2 = GaloisField::binary(1)?;
        Ok(QuotientClass {
            class: RdpClass::d4r(r)?,
            data: InvolutionData::parse("x", &y_pow(r), &f2)?,
        })
    }

    pub fn e8_2() -> Result<Self> {
        let f2 = GaloisField::binary(1)?;
        Ok(QuotientClass {
            class: RdpClass::e8_2(),
            data: InvolutionData::parse("y", "x^2", &f2)?,
        })
    }

    /// The invariant equation of the Artin data equals the stored equation.
    pub fn round_trip(&self) -> Result<bool> {
        let stored = self
            .class
            .polynomial()?
            .expect("quotient classes carry equations");
        Ok(self.data.invariant_equation()?.sub(&stored)?.is_zero())
    }
}

/// `E8^2` followed by `D_{4r}^r` for `r = 1, 2, ...`, generated lazily.
pub fn involution_quotient_classes() -> impl Iterator<Item = Result<QuotientClass>> {
    std::iter::once(QuotientClass::e8_2()).chain((1..).map(QuotientClass::d4r))
}
