//! Depth and Serre-condition verdicts for symmetric products `Sym^n(X)` of
//! smooth `g`-folds in characteristic `p`.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SymDepthQuery {
    pub g: u32,
    pub n: u32,
    pub p: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    True,
    False,
    Undetermined,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::True => "true",
            Verdict::False => "false",
            Verdict::Undetermined => "UNDETERMINED-BY-PAPER",
        })
    }
}

impl From<bool> for Verdict {
    fn from(b: bool) -> Self {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymDepthReport {
    pub query: SymDepthQuery,
    pub dimension: u32,
    pub cohen_macaulay: Verdict,
    /// Largest `k` for which `(S_k)` is known to hold.
    pub guaranteed_level: u32,
    /// Smallest `k` for which `(S_k)` is known to fail.
    pub failing_level: Option<u32>,
    /// Minimal depth of a closed point, when known.
    pub depth: Option<u32>,
    pub notes: Vec<String>,
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

impl SymDepthQuery {
    pub fn new(g: u32, n: u32, p: u32) -> Result<Self> {
        if g == 0 {
            return Err(Error::Domain("dimension g must be at least 1".into()));
        }
        if p != 0 && !is_prime(p) {
            return Err(Error::Domain(format!(
                "characteristic {p} is neither 0 nor prime"
            )));
        }
        Ok(SymDepthQuery { g, n, p })
    }

    fn kemper_range(&self) -> bool {
        self.p > 0 && self.n >= self.p.max(3) && self.n < 2 * self.p
    }
}

/// `2 + (number of irreducible representations)`.
pub fn ellingsrud_skjelbred_depth(num_irreducible_reps: u32) -> u32 {
    2 + num_irreducible_reps
}

/// `min(g + 2, n g)`, valid for `max(3, p) <= n < 2p`.
pub fn kemper_depth(g: u32, n: u32, p: u32) -> Result<u32> {
    let q = SymDepthQuery::new(g, n, p)?;
    if !q.kemper_range() {
        return Err(Error::Domain(format!(
            "need max(3, p) <= n < 2p, got n = {n}, p = {p}"
        )));
    }
    Ok((g + 2).min(n * g))
}

pub fn sym_depth_report(q: SymDepthQuery) -> Result<SymDepthReport> {
    let q = SymDepthQuery::new(q.g, q.n, q.p)?;
    let SymDepthQuery { g, n, p } = q;
    let dimension = n * g;
    let mut notes = Vec::new();

    // Sym^2 of a g-fold in characteristic 2: one irreducible representation
    // per coordinate at the diagonal.
    let diagonal_p2 = p == 2 && n == 2 && g >= 3;
    // For g = 1 the Kemper depth equals the dimension and nothing fails.
    let kemper = q.kemper_range() && g >= 2;

    let (failing_level, known_depth) = if diagonal_p2 {
        (Some(g + 3), Some(ellingsrud_skjelbred_depth(g)))
    } else if kemper {
        (Some(g + 3), Some(kemper_depth(g, n, p)?))
    } else {
        (None, None)
    };

    let cohen_macaulay = if p == 0 || p > n || n <= 1 || g <= 1 || (n == 2 && g == 2) {
        Verdict::True
    } else if (g >= 3 && n >= p) || failing_level.is_some() {
        Verdict::False
    } else {
        Verdict::Undetermined
    };

    let (guaranteed_level, depth) = match cohen_macaulay {
        Verdict::True => (dimension, Some(dimension)),
        _ => ((g + 2).min(dimension), known_depth),
    };

    if cohen_macaulay == Verdict::False {
        notes.push("not Gorenstein, singularities not rational".to_string());
    }
    if q.kemper_range() && g >= 2 {
        notes.push(
            "for abelian varieties the singularities are canonical, but not rational".to_string(),
        );
    }
    if depth.is_none() {
        notes.push(format!("exact depth: {}", Verdict::Undetermined));
    }

    Ok(SymDepthReport {
        query: q,
        dimension,
        cohen_macaulay,
        guaranteed_level,
        failing_level,
        depth,
        notes,
    })
}

impl SymDepthReport {
    /// Whether `(S_k)` holds: depth at least `min(k, dimension)` everywhere.
    pub fn satisfies(&self, k: u32) -> Verdict {
        if let Some(d) = self.depth {
            return (d >= k.min(self.dimension)).into();
        }
        if k <= self.guaranteed_level {
            Verdict::True
        } else if self.failing_level.is_some_and(|f| k >= f) {
            Verdict::False
        } else {
            Verdict::Undetermined
        }
    }

    /// Internal contradictions, empty when the report is coherent.
    pub fn contradictions(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.guaranteed_level > self.dimension {
            out.push("guaranteed level exceeds dimension".into());
        }
        if let Some(d) = self.depth {
            if d < self.guaranteed_level {
                out.push(format!(
                    "depth {d} below guaranteed level {}",
                    self.guaranteed_level
                ));
            }
            if d > self.dimension {
                out.push("depth exceeds dimension".into());
            }
            if (self.cohen_macaulay == Verdict::True) != (d == self.dimension) {
                out.push(format!(
                    "CM verdict {} disagrees with depth {d}",
                    self.cohen_macaulay
                ));
            }
        }
        if let Some(f) = self.failing_level {
            if f <= self.guaranteed_level || f > self.dimension {
                out.push(format!("failing level {f} is not in the open range"));
            }
        }
        if self.cohen_macaulay == Verdict::True
            && (1..=self.dimension).any(|k| self.satisfies(k) == Verdict::False)
        {
            out.push("CM together with a Serre failure".into());
        }
        out
    }
}

impl fmt::Display for SymDepthReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let SymDepthQuery { g, n, p } = self.query;
        writeln!(
            f,
            "Sym^{n} of a {g}-fold in characteristic {p} (dimension {})",
            self.dimension
        )?;
        writeln!(f, "cohen-macaulay: {}", self.cohen_macaulay)?;
        writeln!(f, "guaranteed: (S_{})", self.guaranteed_level)?;
        if let Some(k) = self.failing_level {
            writeln!(f, "fails: (S_{k})")?;
        }
        match self.depth {
            Some(d) => writeln!(f, "depth: {d}")?,
            None => writeln!(f, "depth: {}", Verdict::Undetermined)?,
        }
        for note in &self.notes {
            writeln!(f, "note: {note}")?;
        }
        Ok(())
    }
}

/// Every grid point `g <= 6`, `n <= 8`, `p` in `{0, 2, 3, 5, 7}`.
pub fn grid() -> impl Iterator<Item = SymDepthQuery> {
    (1..=6).flat_map(|g| {
        (0..=8).flat_map(move |n| {
            [0, 2, 3, 5, 7]
                .into_iter()
                .map(move |p| SymDepthQuery { g, n, p })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(g: u32, n: u32, p: u32) -> SymDepthReport {
        sym_depth_report(SymDepthQuery::new(g, n, p).unwrap()).unwrap()
    }

    #[test]
    fn examples() {
        let r = report(3, 2, 2);
        assert_eq!(r.cohen_macaulay, Verdict::False);
        assert_eq!(r.depth, Some(5));
        assert_eq!(r.satisfies(5), Verdict::True);
        assert_eq!(r.satisfies(6), Verdict::False);
        assert_eq!(report(2, 2, 2).cohen_macaulay, Verdict::True);
        let r = report(4, 5, 3);
        assert_eq!((r.cohen_macaulay, r.depth), (Verdict::False, Some(6)));
        assert!(r
            .notes
            .iter()
            .any(|n| n.contains("canonical, but not rational")));
        assert_eq!(report(3, 3, 2).depth, Some(5));
        let r = report(3, 4, 2);
        assert_eq!(r.depth, None);
        assert_eq!(r.cohen_macaulay, Verdict::False);
        assert_eq!(report(5, 4, 5).cohen_macaulay, Verdict::True);
    }

    #[test]
    fn depth_formulas() {
        assert_eq!(ellingsrud_skjelbred_depth(3), 5);
        assert_eq!(ellingsrud_skjelbred_depth(0), 2);
        assert_eq!(ellingsrud_skjelbred_depth(10), 12);
        assert_eq!(kemper_depth(4, 3, 3).unwrap(), 6);
        assert_eq!(kemper_depth(1, 3, 3).unwrap(), 3);
        assert!(kemper_depth(2, 6, 3).is_err());
    }

    #[test]
    fn invalid_queries() {
        assert!(SymDepthQuery::new(2, 2, 4).is_err());
        assert!(SymDepthQuery::new(0, 2, 2).is_err());
        assert!(sym_depth_report(SymDepthQuery { g: 2, n: 2, p: 9 }).is_err());
    }

    #[test]
    fn grid_is_coherent() {
        for q in grid() {
            let r = sym_depth_report(q).unwrap();
            assert!(
                r.contradictions().is_empty(),
                "{q:?}: {:?}",
                r.contradictions()
            );
        }
    }
}
