//! Charts of the blow-up of `(a, b, z)` in the invariant ring, and point
//! blow-ups of hypersurfaces.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::Elem;
use crate::involution::{Chart, InvolutionData, PointCount};
use crate::localring::{nonsmoothness_length, Length, LocalIdeal};
use crate::series::{Monomial, TruncatedSeries, EXACT};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChartTag {
    A,
    B,
    Z,
}

impl fmt::Display for ChartTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChartTag::A => write!(f, "a-chart"),
            ChartTag::B => write!(f, "b-chart"),
            ChartTag::Z => write!(f, "z-chart"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ChartPresentation {
    pub tag: ChartTag,
    pub vars: Vec<String>,
    /// The principal relation comes first.
    pub relations: Vec<TruncatedSeries>,
    pub note: &'static str,
}

#[derive(Clone, Debug)]
pub struct BlowupResult {
    pub charts: [ChartPresentation; 3],
    pub center_length: usize,
    pub point_blowup_equivalent: bool,
    /// Setting `x = y = z = 0` in the z-chart relation leaves a unit.
    pub z_chart_exceptional_empty: bool,
}

/// Residuals of the chart substitution; both must vanish.
#[derive(Clone, Debug)]
pub struct ConsistencyReport {
    /// `G(z = aW, β = aB) - a^2 (W^2 + aBW + xB^2 + y)` for the a-chart.
    pub factorization: TruncatedSeries,
    /// `G(β = b) - f`.
    pub specialization: TruncatedSeries,
}

impl ConsistencyReport {
    pub fn passes(&self) -> bool {
        self.factorization.is_zero() && self.specialization.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartSingularities {
    pub chart: Chart,
    /// Sum of the local nonsmoothness lengths at the points owned by the chart.
    pub length: Length,
    /// Owned rational singular points with their local lengths.
    pub points: Vec<(Elem, Length)>,
    /// Singular slopes found by translation over the whole base field.
    pub located: Vec<Elem>,
    /// Roots of the regularity cubic that are not in the base field.
    pub irrational_points: usize,
}

#[derive(Clone, Debug)]
pub struct FiberData {
    /// Relations left after `x = y = 0`, per chart.
    pub a_fiber: Vec<TruncatedSeries>,
    pub b_fiber: Vec<TruncatedSeries>,
    /// `B^2 R_b(1/B, W/B) - R_a - W (Ba - b)` after clearing denominators.
    pub transition: TruncatedSeries,
    /// Multiplicity of the exceptional fiber: `F = m F_red`.
    pub multiplicity: u32,
}

impl FiberData {
    pub fn passes(&self) -> bool {
        let w2 = |rels: &[TruncatedSeries]| {
            rels.len() == 1
                && rels[0].num_terms() == 1
                && rels[0].terms().all(|(m, c)| {
                    c == Elem::ONE && m == Monomial::from_exponents(&[0, 0, 0, 2]).unwrap()
                })
        };
        w2(&self.a_fiber)
            && w2(&self.b_fiber)
            && self.transition.is_zero()
            && self.multiplicity == 2
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointBlowup {
    pub strict_transform: TruncatedSeries,
    pub multiplicity: u32,
}

const A_VARS: [&str; 4] = ["x", "y", "B", "W"];
const B_VARS: [&str; 4] = ["x", "y", "A", "W"];
const Z_VARS: [&str; 5] = ["x", "y", "z", "A", "B"];

/// `(W^2 + p·T·W + s·T^2 + t, T·p - q)` where the chart divides by `p`;
/// `s, t` are the coordinates paired with `q, p` in `xq^2 + yp^2`.
fn chart_relations(
    p: &TruncatedSeries,
    q: &TruncatedSeries,
    vars: &[&str; 4],
    swap: bool,
) -> Result<Vec<TruncatedSeries>> {
    let f = p.field();
    let g = TruncatedSeries::gens(f, vars)?;
    let (x, y, t, w) = (&g[0], &g[1], &g[2], &g[3]);
    let p = p.embed(vars)?;
    let q = q.embed(vars)?;
    let (s, lin) = if swap { (y, x) } else { (x, y) };
    let principal = w
        .pow(2)?
        .add(&p.mul(t)?.mul(w)?)?
        .add(&s.mul(&t.pow(2)?)?)?
        .add(lin)?;
    Ok(vec![principal, t.mul(&p)?.sub(&q)?])
}

impl InvolutionData {
    pub fn chart(&self, tag: ChartTag) -> Result<ChartPresentation> {
        let (vars, relations, note): (Vec<&str>, _, _) = match tag {
            ChartTag::A => (
                A_VARS.to_vec(),
                chart_relations(self.a(), self.b(), &A_VARS, false)?,
                "B = b/a, W = z/a",
            ),
            ChartTag::B => (
                B_VARS.to_vec(),
                chart_relations(self.b(), self.a(), &B_VARS, true)?,
                "A = a/b, W = z/b",
            ),
            ChartTag::Z => {
                let f = self.field();
                let g = TruncatedSeries::gens(f, &Z_VARS)?;
                let (x, y, z, a_, b_) = (&g[0], &g[1], &g[2], &g[3], &g[4]);
                let one = x.constant_like(Elem::ONE, EXACT);
                let principal = one
                    .add(&a_.mul(b_)?.mul(z)?)?
                    .add(&x.mul(&b_.pow(2)?)?)?
                    .add(&y.mul(&a_.pow(2)?)?)?;
                let a = self.a().embed(&Z_VARS)?;
                let b = self.b().embed(&Z_VARS)?;
                (
                    Z_VARS.to_vec(),
                    vec![principal, a_.mul(z)?.sub(&a)?, b_.mul(z)?.sub(&b)?],
                    "A = a/z, B = b/z",
                )
            }
        };
        Ok(ChartPresentation {
            tag,
            vars: vars.iter().map(|s| s.to_string()).collect(),
            relations,
            note,
        })
    }

    pub fn blowup(&self) -> Result<BlowupResult> {
        let z = self.chart(ChartTag::Z)?;
        let principal = z.relations[0].set_zero(&["x", "y", "z"])?;
        let unit = LocalIdeal::new(
            vec![
                z.relations[0].clone(),
                TruncatedSeries::parse("z", self.field(), &Z_VARS)?,
            ],
            4,
        )?
        .contains(&z.relations[0].constant_like(Elem::ONE, EXACT))?
        .member;
        Ok(BlowupResult {
            charts: [self.chart(ChartTag::A)?, self.chart(ChartTag::B)?, z],
            center_length: self.center_length(),
            point_blowup_equivalent: self.center_length() == 1,
            z_chart_exceptional_empty: unit && principal.constant_term() == Elem::ONE,
        })
    }

    /// Substitutes `z = aW` (resp. `bW`) into the invariant equation and
    /// checks that it factors as `a^2` (resp. `b^2`) times the chart relation.
    /// The coefficient `b` (resp. `a`) is held as a placeholder `β`, replaced
    /// by `aB` (resp. `bA`).
    pub fn chart_consistency_check(&self, chart: Chart) -> Result<ConsistencyReport> {
        let f = self.field();
        let (p, q, chart_vars, swap) = match chart {
            Chart::A => (self.a(), self.b(), A_VARS, false),
            Chart::B => (self.b(), self.a(), B_VARS, true),
        };
        let gvars = ["x", "y", "z", "beta"];
        let g = TruncatedSeries::gens(f, &gvars)?;
        let (x, y, z, beta) = (&g[0], &g[1], &g[2], &g[3]);
        let pe = p.embed(&gvars)?;
        let (s, t) = if swap { (y, x) } else { (x, y) };
        // G = z^2 + p β z + s β^2 + t p^2
        let big_g = z
            .pow(2)?
            .add(&pe.mul(beta)?.mul(z)?)?
            .add(&s.mul(&beta.pow(2)?)?)?
            .add(&t.mul(&pe.pow(2)?)?)?;

        let c = TruncatedSeries::gens(f, &chart_vars)?;
        let pc = p.embed(&chart_vars)?;
        let images = [c[0].clone(), c[1].clone(), pc.mul(&c[3])?, pc.mul(&c[2])?];
        let substituted = big_g.substitute(&images)?;
        let rel = chart_relations(p, q, &chart_vars, swap)?;
        let factorization = substituted.sub(&pc.pow(2)?.mul(&rel[0])?)?;

        let xyz = TruncatedSeries::gens(f, &["x", "y", "z"])?;
        let qe = q.embed(&["x", "y", "z"])?;
        let specialized =
            big_g.substitute(&[xyz[0].clone(), xyz[1].clone(), xyz[2].clone(), qe])?;
        let specialization = specialized.sub(&self.invariant_equation()?)?;
        Ok(ConsistencyReport {
            factorization,
            specialization,
        })
    }

    /// Local nonsmoothness length of the chart at slope `λ` on the
    /// exceptional line.
    pub fn chart_point_length(&self, chart: Chart, slope: Elem, n: u32) -> Result<Length> {
        let (tag, t) = match chart {
            Chart::A => (ChartTag::A, "B"),
            Chart::B => (ChartTag::B, "A"),
        };
        let rels = self
            .chart(tag)?
            .relations
            .iter()
            .map(|r| r.shift(t, slope))
            .collect::<Result<Vec<_>>>()?;
        nonsmoothness_length(&rels, n)
    }

    /// Singular points of a chart on the exceptional line. The a-chart owns
    /// only `λ = 0`; every other point of the a-chart lies on the b-chart too
    /// (at `μ = 1/λ`) and is attributed there.
    pub fn chart_singularities(&self, chart: Chart, n: u32) -> Result<ChartSingularities> {
        if self.count_singular_chart_points() == PointCount::NonNormal {
            return Ok(ChartSingularities {
                chart,
                length: Length::Infinite,
                points: Vec::new(),
                located: Vec::new(),
                irrational_points: 0,
            });
        }
        let f = self.field();
        let roots = self.rational_singular_slopes(chart);
        let cubic = self.chart_regularity_polynomial(chart);
        let irrational = crate::involution::distinct_roots(f, &cubic) - roots.len();
        let mut located = Vec::new();
        for s in f.elements() {
            if self.chart_point_length(chart, s, n)? != Length::Finite(0) {
                located.push(s);
            }
        }
        let owned: Vec<Elem> = roots
            .iter()
            .copied()
            .filter(|s| chart == Chart::B || s.is_zero())
            .collect();
        let mut total = Some(0usize);
        let mut points = Vec::new();
        for s in owned {
            let l = self.chart_point_length(chart, s, n)?;
            total = match (total, l) {
                (Some(t), Length::Finite(k)) => Some(t + k),
                _ => None,
            };
            points.push((s, l));
        }
        Ok(ChartSingularities {
            chart,
            length: total.map_or(Length::Infinite, Length::Finite),
            points,
            located,
            irrational_points: irrational,
        })
    }

    pub fn exceptional_fiber_data(&self) -> Result<FiberData> {
        let ra = self.chart(ChartTag::A)?.relations;
        let rb = self.chart(ChartTag::B)?.relations;
        let fiber = |rels: &[TruncatedSeries]| -> Result<Vec<TruncatedSeries>> {
            Ok(rels
                .iter()
                .map(|r| r.set_zero(&["x", "y"]))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .filter(|r| !r.is_zero())
                .collect())
        };
        let a_fiber = fiber(&ra)?;
        let b_fiber = fiber(&rb)?
            .into_iter()
            .map(|r| r.rename(&A_VARS))
            .collect::<Result<Vec<_>>>()?;
        // B^2 R_b(A = 1/B, W_b = W/B) = W^2 + bW + xB^2 + y on the a-chart
        let g = TruncatedSeries::gens(self.field(), &A_VARS)?;
        let (x, y, bb, w) = (&g[0], &g[1], &g[2], &g[3]);
        let b = self.b().embed(&A_VARS)?;
        let cleared = w
            .pow(2)?
            .add(&b.mul(w)?)?
            .add(&x.mul(&bb.pow(2)?)?)?
            .add(y)?;
        let transition = cleared.sub(&ra[0])?.add(&w.mul(&ra[1])?)?;
        let multiplicity = a_fiber
            .first()
            .and_then(|r| r.terms().next())
            .map_or(0, |(m, _)| m.exponent(3));
        Ok(FiberData {
            a_fiber,
            b_fiber,
            transition,
            multiplicity,
        })
    }

    /// Cartier divisors supported on the exceptional fiber are multiples of `2l`.
    pub fn cartier_multiple_check(&self) -> (usize, String) {
        let l = self.center_length();
        (
            2 * l,
            format!(
                "F = 2 F_red and the center has length l = {l}, so multiples of {}",
                2 * l
            ),
        )
    }
}

/// Blow-up of the origin of a hypersurface in the chart of variable `v`:
/// `w -> v w'` for the other variables, then the maximal power of `v` is
/// divided out. The new coordinates keep their old names.
pub fn point_blowup_chart(f: &TruncatedSeries, v: &str) -> Result<PointBlowup> {
    if !f.is_exact() {
        return Err(Error::NotExact(f.precision()));
    }
    if f.is_zero() {
        return Err(Error::Domain("cannot blow up the zero polynomial".into()));
    }
    if !f.constant_term().is_zero() {
        return Err(Error::Domain("the origin does not lie on f = 0".into()));
    }
    let i = f.var_index(v)?;
    let m = f.order().expect("nonzero");
    let n = f.nvars();
    let names = f.var_names();
    let terms: Vec<(Monomial, Elem)> = f
        .terms()
        .map(|(mono, c)| {
            let mut e = mono.exponents(n);
            e[i] = mono.degree() - m;
            (Monomial::from_exponents(&e).expect("bounded exponents"), c)
        })
        .collect();
    Ok(PointBlowup {
        strict_transform: TruncatedSeries::from_terms(f.field(), &names, EXACT, terms)?,
        multiplicity: m,
    })
}
