//! Ideals of the power series ring `k[[x_1, ..., x_n]]`, handled through
//! their images in `k[[x]]/m^d`.
//!
//! Lengths are certified by Nakayama: if every monomial of degree `d - 1`
//! lies in `I + m^d`, then `m^(d-1)` is contained in `I`, so the truncated
//! quotient is the true quotient.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Elem, GaloisField};
use crate::linalg::Echelon;
use crate::series::{jacobian_minors, monomials_below, Monomial, TruncatedSeries, EXACT};

/// Length of an Artinian quotient, or `Infinite` when no certificate was
/// found below the working precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Length {
    Finite(usize),
    Infinite,
}

impl Length {
    pub fn finite(self) -> Option<usize> {
        match self {
            Length::Finite(n) => Some(n),
            Length::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Length::Finite(_))
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Length::Finite(n) => write!(f, "{n}"),
            Length::Infinite => write!(f, "INFINITE"),
        }
    }
}

/// A finitely generated ideal together with a working precision.
#[derive(Clone, Debug)]
pub struct LocalIdeal {
    template: TruncatedSeries,
    generators: Vec<TruncatedSeries>,
    precision: u32,
}

/// Standard monomials of `k[[x]]/(I + m^d)` and normal forms of the others.
#[derive(Clone, Debug)]
pub struct QuotientBasis {
    field: GaloisField,
    degree: u32,
    columns: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    standard: Vec<Monomial>,
    echelon: Echelon,
}

impl QuotientBasis {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn standard_monomials(&self) -> &[Monomial] {
        &self.standard
    }

    pub fn len(&self) -> usize {
        self.standard.len()
    }

    pub fn is_empty(&self) -> bool {
        self.standard.is_empty()
    }

    fn dense(&self, f: &TruncatedSeries) -> Vec<Elem> {
        let mut v = vec![Elem::ZERO; self.columns.len()];
        for (m, c) in f.terms() {
            if let Some(&i) = self.index.get(&m) {
                v[i] = c;
            }
        }
        v
    }

    /// Coordinates of `f` in the standard monomials, modulo `I + m^d`.
    pub fn reduce(&self, f: &TruncatedSeries) -> Result<Vec<Elem>> {
        if f.precision() < self.degree {
            return Err(Error::Precision {
                needed: self.degree,
                available: f.precision(),
            });
        }
        let mut v = self.dense(f);
        self.echelon.reduce(&mut v);
        Ok(self.standard.iter().map(|m| v[self.index[m]]).collect())
    }

    /// Normal form of a monomial of degree `< d` as standard-monomial terms.
    pub fn normal_form(&self, m: Monomial) -> Vec<(Monomial, Elem)> {
        let Some(&i) = self.index.get(&m) else {
            return Vec::new();
        };
        let mut v = vec![Elem::ZERO; self.columns.len()];
        v[i] = Elem::ONE;
        self.echelon.reduce(&mut v);
        self.standard
            .iter()
            .filter_map(|s| {
                let c = v[self.index[s]];
                (!c.is_zero()).then_some((*s, c))
            })
            .collect()
    }

    /// Whether every monomial of degree `deg` reduces to zero.
    pub fn kills_degree(&self, deg: u32) -> bool {
        self.columns
            .iter()
            .filter(|m| m.degree() == deg)
            .all(|&m| self.normal_form(m).is_empty())
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }
}

/// Result of an ideal membership test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    /// `true` when `m^d` is known to lie in the ideal, so the answer is exact.
    pub exact: bool,
    pub degree: u32,
}

impl LocalIdeal {
    /// Builds an ideal; the working precision is capped by the generators'.
    pub fn new(generators: Vec<TruncatedSeries>, precision: u32) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::Domain("ideal needs at least one generator".into()))?;
        let template = first.zero_like(EXACT);
        let mut cap = precision;
        for g in &generators {
            if g.field() != template.field() {
                return Err(Error::FieldMismatch);
            }
            if g.vars() != template.vars() {
                return Err(Error::VariableMismatch(
                    template.vars().to_vec(),
                    g.vars().to_vec(),
                ));
            }
            cap = cap.min(g.precision());
        }
        Ok(LocalIdeal {
            template,
            generators,
            precision: cap,
        })
    }

    /// The zero ideal in the ring of `template`.
    pub fn zero(template: &TruncatedSeries, precision: u32) -> Self {
        LocalIdeal {
            template: template.zero_like(EXACT),
            generators: Vec::new(),
            precision,
        }
    }

    pub fn generators(&self) -> &[TruncatedSeries] {
        &self.generators
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn field(&self) -> &GaloisField {
        self.template.field()
    }

    pub fn vars(&self) -> &[String] {
        self.template.vars()
    }

    pub fn is_unit(&self) -> bool {
        self.generators.iter().any(|g| !g.constant_term().is_zero())
    }

    /// The ideal generated by `self` and `more`.
    pub fn extend(&self, more: &[TruncatedSeries]) -> Result<Self> {
        let mut gens = self.generators.clone();
        gens.extend(more.iter().cloned());
        if gens.is_empty() {
            return Ok(self.clone());
        }
        let mut out = LocalIdeal::new(gens, self.precision)?;
        out.template = self.template.clone();
        Ok(out)
    }

    /// Standard monomials of degree `< d` via elimination on the span of
    /// `g * m` with graded pivoting: lowest monomials are eliminated first.
    pub fn quotient_basis(&self, d: u32) -> Result<QuotientBasis> {
        if d > self.precision {
            return Err(Error::Precision {
                needed: d,
                available: self.precision,
            });
        }
        let n = self.template.nvars();
        let columns = monomials_below(n, d);
        let index: HashMap<Monomial, usize> =
            columns.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let mut echelon = Echelon::new(self.field(), columns.len());
        for g in &self.generators {
            let Some(og) = g.order() else { continue };
            if og >= d {
                continue;
            }
            for &m in &columns {
                if m.degree() + og >= d {
                    break;
                }
                let mut row = vec![Elem::ZERO; columns.len()];
                for (t, c) in g.terms() {
                    if t.degree() + m.degree() >= d {
                        break;
                    }
                    row[index[&t.mul(m)]] = c;
                }
                echelon.insert(row);
            }
        }
        let standard = columns
            .iter()
            .enumerate()
            .filter(|(i, _)| !echelon.is_pivot(*i))
            .map(|(_, &m)| m)
            .collect();
        Ok(QuotientBasis {
            field: self.field().clone(),
            degree: d,
            columns,
            index,
            standard,
            echelon,
        })
    }

    /// Length with the degree `d` at which the certificate fired.
    pub fn length_certified(&self) -> Result<(Length, Option<QuotientBasis>)> {
        for d in 1..=self.precision.min(255) {
            let qb = self.quotient_basis(d)?;
            if qb.kills_degree(d - 1) {
                return Ok((Length::Finite(qb.len()), Some(qb)));
            }
        }
        Ok((Length::Infinite, None))
    }

    /// Artinian length of `k[[x]]/I`.
    pub fn artinian_length(&self) -> Length {
        self.length_certified()
            .map(|(l, _)| l)
            .unwrap_or(Length::Infinite)
    }

    /// Membership of `f` in `I + m^d` for the largest usable `d`.
    pub fn contains(&self, f: &TruncatedSeries) -> Result<Membership> {
        if let (Length::Finite(_), Some(qb)) = self.length_certified()? {
            return Ok(Membership {
                member: qb.reduce(f)?.iter().all(|c| c.is_zero()),
                exact: true,
                degree: qb.degree(),
            });
        }
        let d = self.precision.min(f.precision());
        let qb = self.quotient_basis(d)?;
        Ok(Membership {
            member: qb.reduce(f)?.iter().all(|c| c.is_zero()),
            exact: false,
            degree: d,
        })
    }

    /// Mutual containment of generators.
    pub fn equals(&self, other: &LocalIdeal) -> Result<Membership> {
        let mut exact = true;
        let mut degree = u32::MAX;
        for (a, b) in [(self, other), (other, self)] {
            for g in &b.generators {
                let m = a.contains(g)?;
                exact &= m.exact;
                degree = degree.min(m.degree);
                if !m.member {
                    return Ok(Membership {
                        member: false,
                        exact: m.exact,
                        degree,
                    });
                }
            }
        }
        Ok(Membership {
            member: true,
            exact,
            degree,
        })
    }
}

/// The Frobenius power `(v^e : v a variable)`; `e` must be a power of `p`.
pub fn frobenius_power(
    field: &GaloisField,
    vars: &[&str],
    e: u32,
    precision: u32,
) -> Result<LocalIdeal> {
    let p = field.characteristic();
    let mut q = 1u32;
    while q < e {
        q = q.saturating_mul(p);
    }
    if q != e || e == 0 {
        return Err(Error::Domain(format!("{e} is not a power of {p}")));
    }
    let gens = TruncatedSeries::gens(field, vars)?
        .iter()
        .map(|v| v.pow(e))
        .collect::<Result<Vec<_>>>()?;
    LocalIdeal::new(gens, precision)
}

/// Length of the Tjurina algebra `k[[x]]/(f, df/dx_i)`.
pub fn tjurina_number(f: &TruncatedSeries, precision: u32) -> Result<Length> {
    if !f.constant_term().is_zero() {
        return Err(Error::Domain("Tjurina number needs f(0) = 0".into()));
    }
    let mut gens = vec![f.clone()];
    gens.extend(f.gradient());
    Ok(LocalIdeal::new(gens, precision)?.artinian_length())
}

/// The ideal of the relations and all 2x2 minors of their Jacobian.
pub fn nonsmoothness_ideal(relations: &[TruncatedSeries], precision: u32) -> Result<LocalIdeal> {
    if relations.len() != 2 {
        return Err(Error::Domain(
            "nonsmoothness needs exactly two relations".into(),
        ));
    }
    let jac = jacobian_minors(relations)?;
    let mut gens = relations.to_vec();
    gens.extend(jac.minors);
    LocalIdeal::new(gens, precision)
}

/// Length of the nonsmoothness scheme of a codimension-two chart.
pub fn nonsmoothness_length(relations: &[TruncatedSeries], precision: u32) -> Result<Length> {
    Ok(nonsmoothness_ideal(relations, precision)?.artinian_length())
}

/// Standard-monomial listing as text, for reports.
pub fn format_monomials(vars: &[String], ms: &[Monomial]) -> String {
    let parts: Vec<String> = ms
        .iter()
        .map(|&m| {
            let mut factors = Vec::new();
            for (i, v) in vars.iter().enumerate() {
                match m.exponent(i) {
                    0 => {}
                    1 => factors.push(v.clone()),
                    e => factors.push(format!("{v}^{e}")),
                }
            }
            if factors.is_empty() {
                "1".to_string()
            } else {
                factors.join("*")
            }
        })
        .collect();
    parts.join(",")
}

/// Normal forms of all non-standard monomials, keyed by monomial.
pub fn normal_forms(qb: &QuotientBasis) -> BTreeMap<Monomial, Vec<(Monomial, Elem)>> {
    qb.columns
        .iter()
        .filter(|m| !qb.standard.contains(m))
        .map(|&m| (m, qb.normal_form(m)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(k: u32) -> GaloisField {
        GaloisField::binary(k).unwrap()
    }

    fn ideal(gens: &[&str], vars: &[&str], field: &GaloisField, n: u32) -> LocalIdeal {
        LocalIdeal::new(
            gens.iter()
                .map(|g| TruncatedSeries::parse(g, field, vars).unwrap())
                .collect(),
            n,
        )
        .unwrap()
    }

    #[test]
    fn quotient_basis_examples() {
        let f2 = gf(1);
        let xy = ideal(&["x", "y"], &["x", "y"], &f2, 12);
        let qb = xy.quotient_basis(5).unwrap();
        assert_eq!(qb.standard_monomials(), &[Monomial::ONE]);

        let uv = ideal(&["u^2", "v^2"], &["u", "v"], &f2, 12);
        let qb = uv.quotient_basis(5).unwrap();
        assert_eq!(
            format_monomials(&["u".into(), "v".into()], qb.standard_monomials()),
            "1,u,v,u*v"
        );
    }

    #[test]
    fn supersingular_parameter_ideal_basis() {
        let f16 = gf(4);
        let q = f16.generator();
        let c = f16.sub(f16.pow(q, 4), q);
        let b = format!("{}*x + y^2", f16.format(c));
        let i = ideal(&["x^2", &b], &["x", "y"], &f16, 12);
        let qb = i.quotient_basis(6).unwrap();
        assert_eq!(
            format_monomials(&["x".into(), "y".into()], qb.standard_monomials()),
            "1,y,y^2,y^3"
        );
        // hand reduction: x = c^-1 y^2
        let x = TruncatedSeries::parse("x", &f16, &["x", "y"]).unwrap();
        let nf = qb.reduce(&x).unwrap();
        let cinv = f16.inv(c).unwrap();
        assert_eq!(nf, vec![Elem::ZERO, Elem::ZERO, cinv, Elem::ZERO]);
    }

    #[test]
    fn lengths() {
        let f2 = gf(1);
        let v = ["x", "y"];
        assert_eq!(
            ideal(&["x", "y"], &v, &f2, 12).artinian_length(),
            Length::Finite(1)
        );
        assert_eq!(
            ideal(&["x^2", "y^2"], &v, &f2, 12).artinian_length(),
            Length::Finite(4)
        );
        assert_eq!(
            ideal(&["x"], &v, &f2, 12).artinian_length(),
            Length::Infinite
        );
        assert_eq!(
            ideal(&["1 + x"], &v, &f2, 12).artinian_length(),
            Length::Finite(0)
        );
    }

    #[test]
    fn membership_and_equality() {
        let f2 = gf(1);
        let v = ["x", "y"];
        let xy = ideal(&["x", "y"], &v, &f2, 12);
        let x = TruncatedSeries::parse("x", &f2, &v).unwrap();
        let y = TruncatedSeries::parse("y", &f2, &v).unwrap();
        let m = xy.contains(&x).unwrap();
        assert!(m.member && m.exact);
        let only_x = ideal(&["x"], &v, &f2, 12);
        let m = only_x.contains(&y).unwrap();
        assert!(!m.member && !m.exact);
        assert!(xy.equals(&ideal(&["y", "x"], &v, &f2, 12)).unwrap().member);
        assert!(
            !xy.equals(&ideal(&["x", "y^2"], &v, &f2, 12))
                .unwrap()
                .member
        );
    }

    #[test]
    fn frobenius_powers() {
        let f2 = gf(1);
        let i = frobenius_power(&f2, &["u", "v"], 2, 12).unwrap();
        assert_eq!(i.artinian_length(), Length::Finite(4));
        let j = frobenius_power(&f2, &["u"], 2, 12).unwrap();
        assert_eq!(j.artinian_length(), Length::Finite(2));
        assert!(frobenius_power(&f2, &["u", "v"], 3, 12).is_err());
    }

    #[test]
    fn tjurina_examples() {
        let f2 = gf(1);
        let v = ["x", "y", "z"];
        let t = |s: &str| tjurina_number(&TruncatedSeries::parse(s, &f2, &v).unwrap(), 12).unwrap();
        assert_eq!(t("z^2 + x*y"), Length::Finite(2));
        assert_eq!(t("x*y + z^4"), Length::Finite(4));
        assert_eq!(t("x"), Length::Finite(0));
    }

    #[test]
    fn smooth_chart_has_empty_nonsmooth_locus() {
        let f2 = gf(1);
        let v = ["u", "v", "s", "t"];
        let rels = [
            TruncatedSeries::parse("u", &f2, &v).unwrap(),
            TruncatedSeries::parse("v", &f2, &v).unwrap(),
        ];
        assert_eq!(nonsmoothness_length(&rels, 12).unwrap(), Length::Finite(0));
    }
}
