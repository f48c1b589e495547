//! Truncated multivariate power series over a [`GaloisField`].
//!
//! A series carries its ambient variable list and a precision `N`: every
//! term of total degree `>= N` is unknown and never stored. Exact
//! polynomials use the precision [`EXACT`]; precision arithmetic saturates
//! so exactness survives ring operations between polynomials.
//!
//! Text grammar (ASCII): terms joined by `+`; a term is an optional
//! coefficient (an integer, `g` or `g^j`) followed by `*`-joined powers
//! `x^e`. Example: `z^2 + x^2*y^2*z + x*y^4 + y*x^4`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Elem, GaloisField};

/// Precision of an exact polynomial.
pub const EXACT: u32 = u32::MAX;

/// Maximum number of ambient variables.
pub const MAX_VARS: usize = 8;

/// An exponent vector packed one byte per variable, variable 0 in the most
/// significant byte. Ordered by total degree, then lexicographically with
/// earlier variables first (`x^2 < x*y < y^2` among degree-2 monomials).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(u64);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn var(i: usize) -> Monomial {
        assert!(i < MAX_VARS);
        Monomial(1u64 << (8 * (MAX_VARS - 1 - i)))
    }

    pub fn from_exponents(exps: &[u32]) -> Result<Monomial> {
        if exps.len() > MAX_VARS {
            return Err(Error::Domain(format!("at most {MAX_VARS} variables")));
        }
        let mut packed = 0u64;
        for (i, &e) in exps.iter().enumerate() {
            if e > 255 {
                return Err(Error::Domain(format!("exponent {e} exceeds 255")));
            }
            packed |= (e as u64) << (8 * (MAX_VARS - 1 - i));
        }
        Ok(Monomial(packed))
    }

    pub fn exponent(self, i: usize) -> u32 {
        ((self.0 >> (8 * (MAX_VARS - 1 - i))) & 0xff) as u32
    }

    pub fn exponents(self, n: usize) -> Vec<u32> {
        (0..n).map(|i| self.exponent(i)).collect()
    }

    pub fn degree(self) -> u32 {
        self.0.to_le_bytes().iter().map(|&b| b as u32).sum()
    }

    pub fn mul(self, other: Monomial) -> Monomial {
        let a = self.0.to_be_bytes();
        let b = other.0.to_be_bytes();
        let mut out = [0u8; 8];
        for i in 0..8 {
            out[i] = a[i]
                .checked_add(b[i])
                .expect("monomial exponent overflow (> 255)");
        }
        Monomial(u64::from_be_bytes(out))
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(self, other: Monomial) -> Option<Monomial> {
        let a = self.0.to_be_bytes();
        let b = other.0.to_be_bytes();
        let mut out = [0u8; 8];
        for i in 0..8 {
            out[i] = a[i].checked_sub(b[i])?;
        }
        Some(Monomial(u64::from_be_bytes(out)))
    }

    fn with_exponent(self, i: usize, e: u32) -> Monomial {
        let shift = 8 * (MAX_VARS - 1 - i);
        Monomial((self.0 & !(0xffu64 << shift)) | ((e as u64) << shift))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exponents(MAX_VARS))
    }
}

/// All monomials in `n` variables of total degree `< d`, in [`Monomial`] order.
pub fn monomials_below(n: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for deg in 0..d {
        monomials_of_degree(n, deg, &mut out);
    }
    out
}

/// Appends the monomials of total degree exactly `deg`, in [`Monomial`] order.
pub fn monomials_of_degree(n: usize, deg: u32, out: &mut Vec<Monomial>) {
    fn rec(i: usize, n: usize, left: u32, cur: Monomial, out: &mut Vec<Monomial>) {
        if i + 1 == n {
            out.push(cur.with_exponent(i, left));
            return;
        }
        for e in (0..=left).rev() {
            rec(i + 1, n, left - e, cur.with_exponent(i, e), out);
        }
    }
    if n == 0 {
        if deg == 0 {
            out.push(Monomial::ONE);
        }
        return;
    }
    rec(0, n, deg, Monomial::ONE, out);
}

/// A multivariate power series known modulo `m^N`.
#[derive(Clone)]
pub struct TruncatedSeries {
    field: GaloisField,
    vars: Arc<Vec<String>>,
    precision: u32,
    terms: BTreeMap<Monomial, Elem>,
}

impl PartialEq for TruncatedSeries {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.vars == other.vars
            && self.precision == other.precision
            && self.terms == other.terms
    }
}

impl Eq for TruncatedSeries {}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)?;
        if self.precision != EXACT {
            write!(f, " + O({})", self.precision)?;
        }
        Ok(())
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&m, &c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut factors = Vec::new();
            if c != Elem::ONE || m == Monomial::ONE {
                factors.push(self.field.format(c));
            }
            for (i, v) in self.vars.iter().enumerate() {
                match m.exponent(i) {
                    0 => {}
                    1 => factors.push(v.clone()),
                    e => factors.push(format!("{v}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

fn shared_vars(vars: &[&str]) -> Result<Arc<Vec<String>>> {
    if vars.len() > MAX_VARS {
        return Err(Error::Domain(format!("at most {MAX_VARS} variables")));
    }
    for (i, v) in vars.iter().enumerate() {
        if vars[..i].contains(v) {
            return Err(Error::Domain(format!("duplicate variable {v:?}")));
        }
    }
    Ok(Arc::new(vars.iter().map(|s| s.to_string()).collect()))
}

impl TruncatedSeries {
    pub fn zero(field: &GaloisField, vars: &[&str], precision: u32) -> Result<Self> {
        Ok(TruncatedSeries {
            field: field.clone(),
            vars: shared_vars(vars)?,
            precision,
            terms: BTreeMap::new(),
        })
    }

    /// Series with the same field and variables as `self`.
    pub fn zero_like(&self, precision: u32) -> Self {
        TruncatedSeries {
            field: self.field.clone(),
            vars: self.vars.clone(),
            precision,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant_like(&self, c: Elem, precision: u32) -> Self {
        self.monomial_like(c, Monomial::ONE, precision)
    }

    pub fn monomial_like(&self, c: Elem, m: Monomial, precision: u32) -> Self {
        let mut out = self.zero_like(precision);
        if !c.is_zero() && m.degree() < precision {
            out.terms.insert(m, c);
        }
        out
    }

    /// The variable `name` as an exact series.
    pub fn var_like(&self, name: &str) -> Result<Self> {
        let i = self.var_index(name)?;
        Ok(self.monomial_like(Elem::ONE, Monomial::var(i), EXACT))
    }

    /// Every ambient variable as an exact series, in order.
    pub fn gens(field: &GaloisField, vars: &[&str]) -> Result<Vec<Self>> {
        let z = Self::zero(field, vars, EXACT)?;
        (0..vars.len())
            .map(|i| Ok(z.monomial_like(Elem::ONE, Monomial::var(i), EXACT)))
            .collect()
    }

    pub fn from_terms(
        field: &GaloisField,
        vars: &[&str],
        precision: u32,
        terms: impl IntoIterator<Item = (Monomial, Elem)>,
    ) -> Result<Self> {
        let mut out = Self::zero(field, vars, precision)?;
        for (m, c) in terms {
            out.add_term(m, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, m: Monomial, c: Elem) {
        if c.is_zero() || m.degree() >= self.precision {
            return;
        }
        let f = &self.field;
        match self.terms.get_mut(&m) {
            Some(old) => {
                let s = f.add(*old, c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Parses an exact polynomial in the given ambient variables.
    pub fn parse(text: &str, field: &GaloisField, vars: &[&str]) -> Result<Self> {
        let mut out = Self::zero(field, vars, EXACT)?;
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        for term in text.split('+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(Error::Parse(format!("empty term in {text:?}")));
            }
            let mut coeff = Elem::ONE;
            let mut mono = Monomial::ONE;
            for factor in term.split('*') {
                let factor = factor.trim();
                let (base, exp) = match factor.split_once('^') {
                    Some((b, e)) => {
                        let e: u32 = e
                            .trim()
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?;
                        (b.trim(), e)
                    }
                    None => (factor, 1),
                };
                if base.is_empty() {
                    return Err(Error::Parse(format!("empty factor in {term:?}")));
                }
                if let Some(i) = vars.iter().position(|v| *v == base) {
                    let cur = mono.exponent(i);
                    if cur + exp > 255 {
                        return Err(Error::Parse(format!("exponent too large in {term:?}")));
                    }
                    mono = mono.with_exponent(i, cur + exp);
                } else if base == "g" {
                    coeff = field.mul(coeff, field.gen_pow(exp as u64));
                } else if base.chars().all(|c| c.is_ascii_digit()) {
                    let n: i64 = base
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad integer {base:?}")))?;
                    coeff = field.mul(coeff, field.pow(field.from_int(n), exp as u64));
                } else if base.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    return Err(Error::UnknownVariable(base.to_string()));
                } else {
                    return Err(Error::Parse(format!("unexpected token {base:?}")));
                }
            }
            out.add_term(mono, coeff);
        }
        Ok(out)
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_names(&self) -> Vec<&str> {
        self.vars.iter().map(String::as_str).collect()
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn is_exact(&self) -> bool {
        self.precision == EXACT
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, Elem)> + '_ {
        self.terms.iter().map(|(&m, &c)| (m, c))
    }

    pub fn coeff(&self, m: Monomial) -> Elem {
        self.terms.get(&m).copied().unwrap_or(Elem::ZERO)
    }

    pub fn constant_term(&self) -> Elem {
        self.coeff(Monomial::ONE)
    }

    /// Coefficient of the linear monomial in `var`.
    pub fn linear_coeff(&self, var: &str) -> Result<Elem> {
        Ok(self.coeff(Monomial::var(self.var_index(var)?)))
    }

    /// Lowest total degree of a nonzero term, `None` for the zero series.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.degree())
    }

    /// Order, or the precision when the series is zero.
    pub fn valuation(&self) -> u32 {
        self.order().unwrap_or(self.precision)
    }

    /// Highest total degree of a stored term.
    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    /// Forgets every term of degree `>= n`.
    pub fn truncate(&self, n: u32) -> Self {
        let precision = self.precision.min(n);
        TruncatedSeries {
            field: self.field.clone(),
            vars: self.vars.clone(),
            precision,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() < precision)
                .map(|(&m, &c)| (m, c))
                .collect(),
        }
    }

    /// Homogeneous component of degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        let mut out = self.zero_like(self.precision);
        for (m, c) in self.terms() {
            if m.degree() == d {
                out.terms.insert(m, c);
            }
        }
        out
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.vars != other.vars {
            return Err(Error::VariableMismatch(
                self.vars.to_vec(),
                other.vars.to_vec(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let precision = self.precision.min(other.precision);
        let mut out = self.truncate(precision);
        for (m, c) in other.terms() {
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = self.field.neg(*c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Elem) -> Self {
        let mut out = self.zero_like(self.precision);
        for (m, a) in self.terms() {
            out.add_term(m, self.field.mul(a, c));
        }
        out
    }

    /// Product; precision is `min(N1 + o2, N2 + o1)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let precision = self
            .precision
            .saturating_add(other.valuation())
            .min(other.precision.saturating_add(self.valuation()));
        let f = &self.field;
        let mut acc: HashMap<Monomial, Elem> = HashMap::new();
        for (&ma, &ca) in &self.terms {
            let da = ma.degree();
            if da >= precision {
                break;
            }
            for (&mb, &cb) in &other.terms {
                if da + mb.degree() >= precision {
                    break;
                }
                let m = ma.mul(mb);
                let e = acc.entry(m).or_insert(Elem::ZERO);
                *e = f.add(*e, f.mul(ca, cb));
            }
        }
        let mut out = self.zero_like(precision);
        out.terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut result = self.constant_like(Elem::ONE, EXACT);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Formal partial derivative; precision drops by one.
    pub fn partial_derivative(&self, var: &str) -> Result<Self> {
        let i = self.var_index(var)?;
        let f = &self.field;
        let mut out = self.zero_like(self.precision.saturating_sub(1).max(0));
        if self.precision == EXACT {
            out.precision = EXACT;
        }
        for (m, c) in self.terms() {
            let e = m.exponent(i);
            if e == 0 {
                continue;
            }
            let coeff = f.mul(c, f.from_int(e as i64));
            out.add_term(m.with_exponent(i, e - 1), coeff);
        }
        Ok(out)
    }

    /// All partial derivatives in ambient variable order.
    pub fn gradient(&self) -> Vec<Self> {
        self.vars
            .iter()
            .map(|v| self.partial_derivative(v).expect("own variable"))
            .collect()
    }

    /// Ring homomorphism sending the `i`-th ambient variable to `images[i]`.
    ///
    /// Images share a target ring and must have zero constant term. The
    /// result precision accounts for the unknown tail of `self` and the
    /// precisions of the images.
    pub fn substitute(&self, images: &[Self]) -> Result<Self> {
        if images.len() != self.vars.len() {
            return Err(Error::Domain(format!(
                "substitution needs {} images, got {}",
                self.vars.len(),
                images.len()
            )));
        }
        let target = images
            .first()
            .ok_or_else(|| Error::Domain("substitution into a ring without variables".into()))?;
        for (img, name) in images.iter().zip(self.vars.iter()) {
            target.check_compatible(img)?;
            if img.field != self.field {
                return Err(Error::FieldMismatch);
            }
            if !img.constant_term().is_zero() {
                return Err(Error::ConstantTerm(name.clone()));
            }
        }
        let min_order = images
            .iter()
            .map(|img| img.valuation())
            .min()
            .unwrap_or(EXACT)
            .max(1);
        let tail = if self.is_exact() {
            EXACT
        } else {
            self.precision.saturating_mul(min_order)
        };
        let mut powers: Vec<Vec<Self>> = images
            .iter()
            .map(|img| vec![target.constant_like(Elem::ONE, EXACT), img.truncate(tail)])
            .collect();
        let mut out = target.zero_like(tail);
        for (m, c) in self.terms() {
            let mut prod = target.constant_like(c, EXACT);
            for (i, pw) in powers.iter_mut().enumerate() {
                let e = m.exponent(i) as usize;
                if e == 0 {
                    continue;
                }
                while pw.len() <= e {
                    let next = pw.last().unwrap().mul(&pw[1])?.truncate(tail);
                    pw.push(next);
                }
                prod = prod.mul(&pw[e])?.truncate(tail);
            }
            out = out.add(&prod)?;
        }
        Ok(out)
    }

    /// Substitution given by name; unnamed variables map to the same-named
    /// variable of the target ring of the first image.
    pub fn substitute_named(&self, images: &[(&str, &Self)]) -> Result<Self> {
        let target = images
            .first()
            .ok_or_else(|| Error::Domain("no substitution images".into()))?
            .1;
        let full: Vec<Self> = self
            .vars
            .iter()
            .map(|v| match images.iter().find(|(n, _)| *n == v) {
                Some((_, img)) => Ok((*img).clone()),
                None => target.var_like(v),
            })
            .collect::<Result<_>>()?;
        self.substitute(&full)
    }

    /// Translation `var -> var + c` of an exact polynomial.
    pub fn shift(&self, var: &str, c: Elem) -> Result<Self> {
        if !self.is_exact() {
            return Err(Error::NotExact(self.precision));
        }
        let i = self.var_index(var)?;
        let f = &self.field;
        let mut out = self.zero_like(EXACT);
        for (m, a) in self.terms() {
            let e = m.exponent(i);
            // (v + c)^e = sum binom(e, j) c^(e-j) v^j
            let mut binom: u64 = 1;
            for j in 0..=e {
                if j > 0 {
                    binom = binom * (e - j + 1) as u64 / j as u64;
                }
                let b = f.from_int((binom % f.characteristic() as u64) as i64);
                let coeff = f.mul(a, f.mul(b, f.pow(c, (e - j) as u64)));
                out.add_term(m.with_exponent(i, j), coeff);
            }
        }
        Ok(out)
    }

    /// Reinterprets the series in a larger variable list, matched by name.
    pub fn embed(&self, vars: &[&str]) -> Result<Self> {
        let mut out = Self::zero(&self.field, vars, self.precision)?;
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| {
                vars.iter()
                    .position(|w| w == v)
                    .ok_or_else(|| Error::UnknownVariable(v.clone()))
            })
            .collect::<Result<_>>()?;
        for (m, c) in self.terms() {
            let mut nm = Monomial::ONE;
            for (i, &j) in map.iter().enumerate() {
                nm = nm.with_exponent(j, m.exponent(i));
            }
            out.add_term(nm, c);
        }
        Ok(out)
    }

    /// Sets the named variables to zero (exact for polynomials).
    pub fn set_zero(&self, names: &[&str]) -> Result<Self> {
        let idx: Vec<usize> = names
            .iter()
            .map(|n| self.var_index(n))
            .collect::<Result<_>>()?;
        let mut out = self.zero_like(self.precision);
        for (m, c) in self.terms() {
            if idx.iter().all(|&i| m.exponent(i) == 0) {
                out.add_term(m, c);
            }
        }
        Ok(out)
    }

    /// Renames variables in place without changing the monomials.
    pub fn rename(&self, vars: &[&str]) -> Result<Self> {
        if vars.len() != self.vars.len() {
            return Err(Error::Domain("rename needs one name per variable".into()));
        }
        let mut out = self.clone();
        out.vars = shared_vars(vars)?;
        Ok(out)
    }

    /// Equality of the known parts up to the shared precision.
    pub fn agrees_with(&self, other: &Self) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self.sub(other)?.is_zero())
    }
}

/// Jacobian matrix of some relations, with its 2x2 minors.
#[derive(Clone, Debug)]
pub struct Jacobian {
    /// `matrix[i][j] = d relations[i] / d vars[j]`.
    pub matrix: Vec<Vec<TruncatedSeries>>,
    /// The gradient for one relation, all 2x2 minors otherwise.
    pub minors: Vec<TruncatedSeries>,
}

pub fn jacobian_minors(relations: &[TruncatedSeries]) -> Result<Jacobian> {
    let first = relations
        .first()
        .ok_or_else(|| Error::Domain("jacobian needs at least one relation".into()))?;
    for r in relations {
        first.check_compatible(r)?;
    }
    let matrix: Vec<Vec<TruncatedSeries>> = relations.iter().map(|r| r.gradient()).collect();
    if relations.len() == 1 {
        return Ok(Jacobian {
            minors: matrix[0].clone(),
            matrix,
        });
    }
    let n = first.nvars();
    let mut minors = Vec::new();
    for i in 0..relations.len() {
        for k in i + 1..relations.len() {
            for j in 0..n {
                for l in j + 1..n {
                    let m = matrix[i][j]
                        .mul(&matrix[k][l])?
                        .sub(&matrix[i][l].mul(&matrix[k][j])?)?;
                    minors.push(m);
                }
            }
        }
    }
    Ok(Jacobian { matrix, minors })
}
