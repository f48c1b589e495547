//! Wild involutions `u -> u + a`, `v -> v + b` of `k[[u, v]]` in
//! characteristic two, described by a parameter system `(a, b)` of
//! `k[[x, y]]`. The invariant ring is `k[[x, y, z]]/(z^2 + abz + xb^2 + ya^2)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Elem, GaloisField};
use crate::implicit::{check_parameter_system, solve_implicit_pair, ImplicitCoordinates};
use crate::linalg::{rank, solve_columns};
use crate::localring::{frobenius_power, LocalIdeal};
use crate::series::{monomials_below, Monomial, TruncatedSeries, EXACT};

#[derive(Clone, Debug)]
pub struct InvolutionData {
    a: TruncatedSeries,
    b: TruncatedSeries,
    pub a_x: Elem,
    pub a_y: Elem,
    pub b_x: Elem,
    pub b_y: Elem,
    center_length: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Chart {
    A,
    B,
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Chart::A => write!(f, "a-chart"),
            Chart::B => write!(f, "b-chart"),
        }
    }
}

/// Residuals of the invariant equation and of the invariance of `x, y, z`.
#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub equation: TruncatedSeries,
    pub x: TruncatedSeries,
    pub y: TruncatedSeries,
    pub z: TruncatedSeries,
}

impl IdentityReport {
    pub fn passes(&self) -> bool {
        [&self.equation, &self.x, &self.y, &self.z]
            .iter()
            .all(|r| r.is_zero())
    }

    /// The smallest precision to which a residual is known to vanish.
    pub fn precision(&self) -> u32 {
        [&self.equation, &self.x, &self.y, &self.z]
            .iter()
            .map(|r| r.precision())
            .min()
            .unwrap_or(EXACT)
    }
}

/// Number of singular points on the exceptional curve of the chart blow-up.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointCount {
    Finite(usize),
    NonNormal,
}

impl fmt::Display for PointCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointCount::Finite(n) => write!(f, "{n}"),
            PointCount::NonNormal => write!(f, "NONNORMAL"),
        }
    }
}

/// Outcome of the embedded-component test with its ideal-theoretic witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddedComponent {
    pub embedded: bool,
    /// `(x, y) ⊆ (u^2, v^2) ⊆ (u, v)^2 ⊆ (u^2, v)` and `(a, b) ⊆ (u^2, v)^2`,
    /// checked only when `embedded` holds.
    pub witness: Option<bool>,
}

/// A point on the exceptional line: slope `λ = b/a` or `μ = a/b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TangentVectorPoint {
    pub chart: Chart,
    pub slope: Elem,
}

/// `(φ(f1), φ(f2))` in the basis `{ε, εu}` of `ε·O/I`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TangentRow(pub [[Elem; 2]; 2]);

impl TangentRow {
    pub fn flatten(&self) -> Vec<Elem> {
        vec![self.0[0][0], self.0[0][1], self.0[1][0], self.0[1][1]]
    }

    pub fn format(&self, field: &GaloisField) -> String {
        let entry = |e: [Elem; 2]| {
            let mut parts = Vec::new();
            for (c, unit) in [(e[0], "ε"), (e[1], "εu")] {
                if c.is_zero() {
                    continue;
                }
                if c == Elem::ONE {
                    parts.push(unit.to_string());
                } else {
                    parts.push(format!("{}{unit}", field.format(c)));
                }
            }
            if parts.is_empty() {
                "0".to_string()
            } else {
                parts.join("+")
            }
        };
        format!("({},{})", entry(self.0[0]), entry(self.0[1]))
    }
}

fn linear(f: &TruncatedSeries, i: usize) -> Elem {
    f.coeff(Monomial::var(i))
}

impl InvolutionData {
    /// Validates that `(a, b)` is a parameter system in the variables `x, y`.
    pub fn new(a: TruncatedSeries, b: TruncatedSeries) -> Result<Self> {
        if a.vars() != ["x", "y"] || b.vars() != ["x", "y"] {
            return Err(Error::VariableMismatch(
                vec!["x".into(), "y".into()],
                a.vars().to_vec(),
            ));
        }
        let center_length = check_parameter_system(&a, &b, 16)?;
        Ok(InvolutionData {
            a_x: linear(&a, 0),
            a_y: linear(&a, 1),
            b_x: linear(&b, 0),
            b_y: linear(&b, 1),
            a,
            b,
            center_length,
        })
    }

    pub fn parse(a: &str, b: &str, field: &GaloisField) -> Result<Self> {
        let vars = ["x", "y"];
        Self::new(
            TruncatedSeries::parse(a, field, &vars)?,
            TruncatedSeries::parse(b, field, &vars)?,
        )
    }

    pub fn a(&self) -> &TruncatedSeries {
        &self.a
    }

    pub fn b(&self) -> &TruncatedSeries {
        &self.b
    }

    pub fn field(&self) -> &GaloisField {
        self.a.field()
    }

    /// Length of `k[[x, y]]/(a, b)`.
    pub fn center_length(&self) -> usize {
        self.center_length
    }

    /// The data with `a, b` and `x, y` exchanged, which is the b-chart view.
    pub fn swapped(&self) -> Result<Self> {
        let g = TruncatedSeries::gens(self.field(), &["x", "y"])?;
        let flip = [g[1].clone(), g[0].clone()];
        Self::new(self.b.substitute(&flip)?, self.a.substitute(&flip)?)
    }

    /// `z^2 + abz + xb^2 + ya^2` in `x, y, z`.
    pub fn invariant_equation(&self) -> Result<TruncatedSeries> {
        let vars = ["x", "y", "z"];
        let a = self.a.embed(&vars)?;
        let b = self.b.embed(&vars)?;
        let g = TruncatedSeries::gens(self.field(), &vars)?;
        let (x, y, z) = (&g[0], &g[1], &g[2]);
        z.pow(2)?
            .add(&a.mul(&b)?.mul(z)?)?
            .add(&x.mul(&b.pow(2)?)?)?
            .add(&y.mul(&a.pow(2)?)?)
    }

    pub fn coordinates(&self, n: u32) -> Result<ImplicitCoordinates> {
        solve_implicit_pair(&self.a, &self.b, n)
    }

    /// Pulls the invariant equation back to `k[[u, v]]` and applies the
    /// involution to `x, y, z`; all residuals must vanish.
    pub fn verify_invariant_identity(&self, n: u32) -> Result<IdentityReport> {
        let c = self.coordinates(n)?;
        let f = self.invariant_equation()?;
        let equation = f.substitute(&[c.x.clone(), c.y.clone(), c.z.clone()])?;
        let uv = TruncatedSeries::gens(self.field(), &["u", "v"])?;
        let sigma = [uv[0].add(&c.a)?, uv[1].add(&c.b)?];
        let moved =
            |s: &TruncatedSeries| -> Result<TruncatedSeries> { s.substitute(&sigma)?.sub(s) };
        Ok(IdentityReport {
            equation,
            x: moved(&c.x)?,
            y: moved(&c.y)?,
            z: moved(&c.z)?,
        })
    }

    /// Whether `(x, y, z) k[[u, v]] = (u^2, v^2)`, and the ideal `(f, a, b, z)`
    /// of the image of the fixed scheme.
    pub fn fiber_and_fixed_ideals(&self, n: u32) -> Result<(bool, LocalIdeal)> {
        let c = self.coordinates(n)?;
        let pulled = LocalIdeal::new(vec![c.x, c.y, c.z], n)?;
        let frob = frobenius_power(self.field(), &["u", "v"], 2, n)?;
        let eq = pulled.equals(&frob)?;
        let vars = ["x", "y", "z"];
        let fixed = LocalIdeal::new(
            vec![
                self.invariant_equation()?,
                self.a.embed(&vars)?,
                self.b.embed(&vars)?,
                TruncatedSeries::parse("z", self.field(), &vars)?,
            ],
            n,
        )?;
        Ok((eq.member && eq.exact, fixed))
    }

    /// Coefficients (constant first) of the cubic whose roots are the slopes
    /// of points of embedding dimension three.
    pub fn chart_regularity_polynomial(&self, chart: Chart) -> [Elem; 4] {
        match chart {
            Chart::A => [self.b_x, self.a_x, self.b_y, self.a_y],
            Chart::B => [self.a_y, self.b_y, self.a_x, self.b_x],
        }
    }

    pub fn has_linear_part(&self) -> bool {
        [self.a_x, self.a_y, self.b_x, self.b_y]
            .iter()
            .any(|c| !c.is_zero())
    }

    /// Distinct singular points on the exceptional line over the algebraic
    /// closure: roots of the a-chart cubic plus the point `μ = 0` of the
    /// b-chart when `a_y = 0`. Overlap points `λμ = 1` are counted once.
    pub fn count_singular_chart_points(&self) -> PointCount {
        let pa = self.chart_regularity_polynomial(Chart::A);
        if pa.iter().all(|c| c.is_zero()) {
            return PointCount::NonNormal;
        }
        let infinity = usize::from(self.a_y.is_zero());
        PointCount::Finite(distinct_roots(self.field(), &pa) + infinity)
    }

    /// Roots of the chart cubic lying in the base field.
    pub fn rational_singular_slopes(&self, chart: Chart) -> Vec<Elem> {
        let p = self.chart_regularity_polynomial(chart);
        let f = self.field();
        if p.iter().all(|c| c.is_zero()) {
            return Vec::new();
        }
        f.elements().filter(|&t| eval(f, &p, t).is_zero()).collect()
    }

    pub fn has_embedded_component(&self, n: u32) -> Result<EmbeddedComponent> {
        if self.has_linear_part() {
            return Ok(EmbeddedComponent {
                embedded: false,
                witness: None,
            });
        }
        let c = self.coordinates(n)?;
        let f = self.field();
        let uv = ["u", "v"];
        let p = |s: &str| TruncatedSeries::parse(s, f, &uv);
        let frob = frobenius_power(f, &uv, 2, n)?;
        let m2 = LocalIdeal::new(vec![p("u^2")?, p("u*v")?, p("v^2")?], n)?;
        let i = LocalIdeal::new(vec![p("u^2")?, p("v")?], n)?;
        let i2 = LocalIdeal::new(vec![p("u^4")?, p("u^2*v")?, p("v^2")?], n)?;
        let inside = |ideal: &LocalIdeal, gens: &[TruncatedSeries]| -> Result<bool> {
            for g in gens {
                let m = ideal.contains(g)?;
                if !(m.member && m.exact) {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        let chain = inside(&frob, &[c.x.clone(), c.y.clone()])?
            && inside(&m2, frob.generators())?
            && inside(&i, m2.generators())?
            && inside(&i2, &[c.a.clone(), c.b.clone()])?;
        Ok(EmbeddedComponent {
            embedded: true,
            witness: Some(chain),
        })
    }

    /// Whether `ψ = (ψ_x, ψ_y, ψ_B, ψ_W)` is tangent to the chart at the point.
    pub fn is_tangent(&self, pt: TangentVectorPoint, psi: [Elem; 4]) -> Result<bool> {
        let d = self.oriented(pt.chart)?;
        let f = d.field();
        let l = pt.slope;
        let rel1 = f.add(f.mul(f.mul(l, l), psi[0]), psi[1]);
        let rel2 = f.sub(
            f.mul(l, f.add(f.mul(d.a_x, psi[0]), f.mul(d.a_y, psi[1]))),
            f.add(f.mul(d.b_x, psi[0]), f.mul(d.b_y, psi[1])),
        );
        Ok(rel1.is_zero() && rel2.is_zero())
    }

    fn oriented(&self, chart: Chart) -> Result<Self> {
        match chart {
            Chart::A => Ok(self.clone()),
            Chart::B => self.swapped(),
        }
    }

    /// Embedding dimension of the chart at the point: 3 on roots of the
    /// regularity cubic, 2 elsewhere.
    pub fn chart_embedding_dimension(&self, pt: TangentVectorPoint) -> u32 {
        let p = self.chart_regularity_polynomial(pt.chart);
        if eval(self.field(), &p, pt.slope).is_zero() {
            3
        } else {
            2
        }
    }

    /// The first-order deformation of `I = (u^2, λu + v)` induced by the
    /// chart tangent vector `ψ`, as `(φ(u^2), φ(λu + v))` over `{1, u}`.
    pub fn tangent_image(&self, pt: TangentVectorPoint, psi: [Elem; 4]) -> Result<TangentRow> {
        if !self.is_tangent(pt, psi)? {
            return Err(Error::Domain(
                "ψ violates the chart cotangent relations".into(),
            ));
        }
        let d = self.oriented(pt.chart)?;
        let f = d.field().clone();
        let depth = 6;
        let c = d.coordinates(depth + 2)?;
        let uv = TruncatedSeries::gens(&f, &["u", "v"])?;
        let (u, v) = (&uv[0], &uv[1]);
        let l = pt.slope;
        let konst = |e: Elem| u.constant_like(e, EXACT);
        let lu_v = u.scale(l).add(v)?;
        // I_ε = (x - ψ_x ε, y - ψ_y ε, (λ + ψ_B ε)u + v - ψ_W ε, (λ + ψ_B ε)a - b)
        let g0 = [
            c.x.clone(),
            c.y.clone(),
            lu_v.clone(),
            c.a.scale(l).sub(&c.b)?,
        ];
        let g1 = [
            konst(f.neg(psi[0])),
            konst(f.neg(psi[1])),
            u.scale(psi[2]).sub(&konst(psi[3]))?,
            c.a.scale(psi[2]),
        ];
        let monos = monomials_below(2, depth);
        let dense =
            |s: &TruncatedSeries| -> Vec<Elem> { monos.iter().map(|&m| s.coeff(m)).collect() };
        let mut columns = Vec::new();
        let mut labels = Vec::new();
        for (i, g) in g0.iter().enumerate() {
            for &m in &monos {
                let mono = u.monomial_like(Elem::ONE, m, EXACT);
                columns.push(dense(&g.mul(&mono)?.truncate(depth)));
                labels.push((i, mono));
            }
        }
        let targets = [u.pow(2)?, lu_v];
        let mut out = [[Elem::ZERO; 2]; 2];
        for (t, target) in targets.iter().enumerate() {
            let r = solve_columns(&f, &columns, &dense(target))
                .ok_or_else(|| Error::Domain("I is not generated by the fiber equations".into()))?;
            let mut phi = u.zero_like(depth);
            for (coef, (i, mono)) in r.iter().zip(&labels) {
                if !coef.is_zero() {
                    phi = phi.add(&g1[*i].mul(mono)?.scale(*coef).truncate(depth))?;
                }
            }
            // O/I = k{1, u} with v = -λu and u^2 = 0
            let on_line = phi.substitute(&[u.truncate(depth), u.scale(f.neg(l)).truncate(depth)]);
            let reduced = match on_line {
                Ok(s) => s,
                Err(Error::ConstantTerm(_)) => unreachable!("images are linear"),
                Err(e) => return Err(e),
            };
            out[t] = [
                reduced.coeff(Monomial::ONE),
                reduced.coeff(Monomial::var(0)),
            ];
        }
        Ok(TangentRow(out))
    }

    /// The three table vectors `(0,0,0,1)`, `(0,0,1,0)` and `(1,λ^2,0,0)`
    /// (the last only when tangent), with their images.
    pub fn tangent_table(&self, pt: TangentVectorPoint) -> Result<Vec<([Elem; 4], TangentRow)>> {
        let f = self.field();
        let (o, z) = (Elem::ONE, Elem::ZERO);
        let l2 = f.mul(pt.slope, pt.slope);
        let mut rows = Vec::new();
        for psi in [[z, z, z, o], [z, z, o, z], [o, l2, z, z]] {
            if self.is_tangent(pt, psi)? {
                rows.push((psi, self.tangent_image(pt, psi)?));
            }
        }
        Ok(rows)
    }

    /// Rank of the tangent images of a basis of the chart tangent space.
    pub fn tangent_image_rank(&self, pt: TangentVectorPoint) -> Result<usize> {
        let rows: Vec<Vec<Elem>> = self
            .tangent_table(pt)?
            .iter()
            .map(|(_, r)| r.flatten())
            .collect();
        Ok(rank(self.field(), &rows))
    }

    /// Dimension of the involution-invariant part of `Hom(I/I^2, O/I)` at
    /// the point.
    pub fn invariant_hom_dimension(&self, pt: TangentVectorPoint, n: u32) -> Result<usize> {
        let d = self.oriented(pt.chart)?;
        let f = d.field().clone();
        let c = d.coordinates(n)?;
        let uv = TruncatedSeries::gens(&f, &["u", "v"])?;
        let (u, v) = (&uv[0], &uv[1]);
        let l = pt.slope;
        let f1 = u.pow(2)?;
        let f2 = u.scale(l).add(v)?;
        // σ fixes f1 modulo I^2 and moves f2 by λa + b; φ must kill its class
        let moved = c.a.scale(l).add(&c.b)?;
        let depth = 6.min(n);
        let monos = monomials_below(2, depth);
        let dense =
            |s: &TruncatedSeries| -> Vec<Elem> { monos.iter().map(|&m| s.coeff(m)).collect() };
        let i2 = [f1.pow(2)?, f1.mul(&f2)?, f2.pow(2)?];
        let mut columns = Vec::new();
        for g in i2.iter() {
            for &m in &monos {
                columns.push(dense(
                    &g.mul(&u.monomial_like(Elem::ONE, m, EXACT))?
                        .truncate(depth),
                ));
            }
        }
        let basis = [u.constant_like(Elem::ONE, EXACT), u.clone()];
        let n_i2 = columns.len();
        for gen in [&f1, &f2] {
            for b in &basis {
                columns.push(dense(&gen.mul(b)?.truncate(depth)));
            }
        }
        let r = solve_columns(&f, &columns, &dense(&moved.truncate(depth)))
            .ok_or_else(|| Error::Domain("λa + b is not in I".into()))?;
        // moved ≡ (c1 + c1' u) f1 + (c2 + c2' u) f2 modulo I^2
        let (c1, c1u, c2, c2u) = (r[n_i2], r[n_i2 + 1], r[n_i2 + 2], r[n_i2 + 3]);
        // φ(f_i) = p_i + q_i u; the constraint c1 φ(f1) + c2 φ(f2) = 0 in O/I
        let rows = vec![vec![c1, Elem::ZERO, c2, Elem::ZERO], vec![c1u, c1, c2u, c2]];
        Ok(4 - rank(&f, &rows))
    }

    /// Embedding dimension of `Hilb^G` at the image point: 3, plus one when
    /// the fixed scheme has an embedded component.
    pub fn gh_tangent_dimension(&self, n: u32) -> Result<u32> {
        Ok(3 + u32::from(self.has_embedded_component(n)?.embedded))
    }
}

fn eval(f: &GaloisField, p: &[Elem], t: Elem) -> Elem {
    p.iter()
        .rev()
        .fold(Elem::ZERO, |acc, &c| f.add(f.mul(acc, t), c))
}

fn trim(mut p: Vec<Elem>) -> Vec<Elem> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn derivative(f: &GaloisField, p: &[Elem]) -> Vec<Elem> {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(c, f.from_int(i as i64)))
            .collect(),
    )
}

fn div_rem(f: &GaloisField, a: &[Elem], b: &[Elem]) -> (Vec<Elem>, Vec<Elem>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let lead_inv = f.inv(*b.last().expect("nonzero divisor")).unwrap();
    let mut q = vec![Elem::ZERO; r.len().saturating_sub(b.len()) + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = f.mul(*r.last().unwrap(), lead_inv);
        q[shift] = c;
        for (i, &bc) in b.iter().enumerate() {
            r[shift + i] = f.sub(r[shift + i], f.mul(c, bc));
        }
        r = trim(r);
    }
    (trim(q), r)
}

fn gcd(f: &GaloisField, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let (_, r) = div_rem(f, &a, &b);
        a = b;
        b = r;
    }
    a
}

fn mul_poly(f: &GaloisField, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Elem::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(out)
}

/// The squarefree part `rad(p)`, whose degree counts distinct roots over the
/// algebraic closure.
fn radical(f: &GaloisField, p: &[Elem]) -> Vec<Elem> {
    let p = trim(p.to_vec());
    if p.len() <= 1 {
        return p;
    }
    let dp = derivative(f, &p);
    if dp.is_empty() {
        // p(t) = h(t^c) with c the characteristic: take a c-th root
        let c = f.characteristic() as usize;
        let root: Vec<Elem> = p.iter().step_by(c).map(|&a| f.frobenius_inv(a)).collect();
        return radical(f, &root);
    }
    let g = gcd(f, &p, &dp);
    let (h, _) = div_rem(f, &p, &g);
    let rg = radical(f, &g);
    let common = gcd(f, &h, &rg);
    let (rest, _) = div_rem(f, &rg, &common);
    mul_poly(f, &h, &rest)
}

pub fn distinct_roots(f: &GaloisField, p: &[Elem]) -> usize {
    radical(f, p).len().saturating_sub(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data(a: &str, b: &str, k: u32) -> InvolutionData {
        InvolutionData::parse(a, b, &GaloisField::binary(k).unwrap()).unwrap()
    }

    fn sup(q: Elem) -> InvolutionData {
        let f = GaloisField::binary(4).unwrap();
        let c = f.sub(f.pow(q, 4), q);
        let b = format!("{}*x + y^2", f.format(c));
        InvolutionData::parse("x^2", &b, &f).unwrap()
    }

    #[test]
    fn invariant_equations() {
        let f2 = GaloisField::binary(1).unwrap();
        let vars = ["x", "y", "z"];
        let p = |s: &str| TruncatedSeries::parse(s, &f2, &vars).unwrap();
        assert_eq!(
            data("x", "y", 1).invariant_equation().unwrap(),
            p("z^2 + x*y*z + x*y^2 + x^2*y")
        );
        assert_eq!(
            data("y", "x^2", 1).invariant_equation().unwrap(),
            p("z^2 + y*x^2*z + x^5 + y^3")
        );
        assert_eq!(
            data("x^2", "y^2", 1).invariant_equation().unwrap(),
            p("z^2 + x^2*y^2*z + x*y^4 + y*x^4")
        );
    }

    #[test]
    fn identity_residuals_vanish() {
        for d in [
            data("x", "y", 1),
            data("x", "y^2", 1),
            data("y", "x^2", 1),
            data("x^2", "y^2", 1),
        ] {
            let r = d.verify_invariant_identity(12).unwrap();
            assert!(r.passes(), "{r:?}");
        }
        let f = GaloisField::binary(4).unwrap();
        let r = sup(f.generator()).verify_invariant_identity(12).unwrap();
        assert!(r.passes());
    }

    #[test]
    fn fiber_is_frobenius_power() {
        for d in [
            data("x", "y", 1),
            data("x^2", "y^2", 1),
            data("y", "x^2", 1),
        ] {
            let (fiber, fixed) = d.fiber_and_fixed_ideals(12).unwrap();
            assert!(fiber);
            assert_eq!(fixed.artinian_length().finite(), Some(d.center_length()));
        }
    }

    #[test]
    fn regularity_polynomials_and_counts() {
        let d = data("x", "y", 1);
        let o = Elem::ONE;
        let z = Elem::ZERO;
        assert_eq!(d.chart_regularity_polynomial(Chart::A), [z, o, o, z]);
        assert_eq!(d.rational_singular_slopes(Chart::A), vec![z, o]);
        assert_eq!(d.count_singular_chart_points(), PointCount::Finite(3));
        let d = data("x", "y^2", 1);
        assert_eq!(d.chart_regularity_polynomial(Chart::A), [z, o, z, z]);
        assert_eq!(d.chart_regularity_polynomial(Chart::B), [z, z, o, z]);
        assert_eq!(d.count_singular_chart_points(), PointCount::Finite(2));
        assert_eq!(
            data("x^2", "y^2", 1).count_singular_chart_points(),
            PointCount::NonNormal
        );
        let f = GaloisField::binary(4).unwrap();
        for q in f.elements() {
            let expect = if f.pow(q, 4) == q {
                PointCount::NonNormal
            } else {
                PointCount::Finite(1)
            };
            assert_eq!(sup(q).count_singular_chart_points(), expect);
        }
    }

    #[test]
    fn distinct_roots_over_closure() {
        let f = GaloisField::binary(1).unwrap();
        let (o, z) = (Elem::ONE, Elem::ZERO);
        // t^3 + t + 1 is irreducible over GF(2): three roots in GF(8)
        assert_eq!(distinct_roots(&f, &[o, o, z, o]), 3);
        // t^2 + 1 = (t + 1)^2
        assert_eq!(distinct_roots(&f, &[o, z, o]), 1);
        // t^3 + t^2 = t^2 (t + 1)
        assert_eq!(distinct_roots(&f, &[z, z, o, o]), 2);
        assert_eq!(distinct_roots(&f, &[o]), 0);
    }

    #[test]
    fn embedded_component_witness() {
        let e = data("x^2", "y^2", 1).has_embedded_component(12).unwrap();
        assert_eq!(
            e,
            EmbeddedComponent {
                embedded: true,
                witness: Some(true)
            }
        );
        assert!(
            !data("x", "y", 1)
                .has_embedded_component(12)
                .unwrap()
                .embedded
        );
        let f = GaloisField::binary(4).unwrap();
        assert!(
            !sup(f.generator())
                .has_embedded_component(12)
                .unwrap()
                .embedded
        );
    }

    #[test]
    fn tangent_table_rows() {
        let d = data("x^2", "y^2", 2);
        let f = d.field().clone();
        for l in f.elements() {
            let pt = TangentVectorPoint {
                chart: Chart::A,
                slope: l,
            };
            let table = d.tangent_table(pt).unwrap();
            let shown: Vec<String> = table.iter().map(|(_, r)| r.format(&f)).collect();
            assert_eq!(shown, ["(0,ε)", "(0,εu)", "(ε,0)"]);
            assert_eq!(d.tangent_image_rank(pt).unwrap(), 3);
            assert_eq!(d.invariant_hom_dimension(pt, 12).unwrap(), 4);
        }
        assert_eq!(d.gh_tangent_dimension(12).unwrap(), 4);
        assert_eq!(data("x", "y", 1).gh_tangent_dimension(12).unwrap(), 3);
    }

    #[test]
    fn tangent_rank_matches_embedding_dimension() {
        for d in [data("x", "y", 1), data("x", "y^2", 1), data("y", "x^2", 1)] {
            for chart in [Chart::A, Chart::B] {
                for l in d.field().elements() {
                    let pt = TangentVectorPoint { chart, slope: l };
                    assert_eq!(
                        d.tangent_image_rank(pt).unwrap() as u32,
                        d.chart_embedding_dimension(pt)
                    );
                }
            }
        }
    }

    #[test]
    fn rejects_non_tangent_vectors() {
        let d = data("x", "y", 1);
        let pt = TangentVectorPoint {
            chart: Chart::A,
            slope: Elem::ONE,
        };
        assert!(d
            .tangent_image(pt, [Elem::ONE, Elem::ZERO, Elem::ZERO, Elem::ZERO])
            .is_err());
    }
}
