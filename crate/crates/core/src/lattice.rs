//! Configurations of exceptional curves on a resolved surface: intersection
//! matrices, fundamental and canonical cycles, Dynkin recognition and graph
//! surgery. All arithmetic is exact.
//!
//! Graph file format, one statement per line (`#` starts a comment):
//!
//! ```text
//! curve C1 self=-3 chi=1
//! curve C2 self=-2
//! edge C1 C2 mult=1
//! cycle C1=1 C2=2
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CurveConfig {
    pub labels: Vec<String>,
    pub self_int: Vec<i64>,
    pub chi: Vec<i64>,
    /// Symmetric with zero diagonal.
    pub mult: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cycle(pub Vec<i64>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QCycle(pub Vec<BigRational>);

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl fmt::Display for QCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(BigRational::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl QCycle {
    /// The integer cycle, when every coefficient is integral.
    pub fn to_integral(&self) -> Option<Cycle> {
        self.0
            .iter()
            .map(|q| {
                q.is_integer()
                    .then(|| i64::try_from(q.to_integer()).ok())
                    .flatten()
            })
            .collect::<Option<Vec<_>>>()
            .map(Cycle)
    }
}

impl From<&Cycle> for QCycle {
    fn from(c: &Cycle) -> Self {
        QCycle(
            c.0.iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect(),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dynkin {
    A(usize),
    D(usize),
    E(usize),
}

impl fmt::Display for Dynkin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dynkin::A(n) => write!(f, "A{n}"),
            Dynkin::D(n) => write!(f, "D{n}"),
            Dynkin::E(n) => write!(f, "E{n}"),
        }
    }
}

impl Dynkin {
    pub fn rank(self) -> usize {
        match self {
            Dynkin::A(n) | Dynkin::D(n) | Dynkin::E(n) => n,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let (family, n) = s.split_at(1.min(s.len()));
        let n: usize = n
            .parse()
            .map_err(|_| Error::Parse(format!("bad Dynkin type {s:?}")))?;
        let t = match family {
            "A" if n >= 1 => Dynkin::A(n),
            "D" if n >= 4 => Dynkin::D(n),
            "E" if (6..=8).contains(&n) => Dynkin::E(n),
            _ => return Err(Error::Parse(format!("bad Dynkin type {s:?}"))),
        };
        Ok(t)
    }
}

/// Numerical Cartier test: the exact solution and whether it is integral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartierSolution {
    pub integral: bool,
    pub solution: QCycle,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Solves `M x = b` for a square integer matrix by fraction-free
/// (Bareiss) elimination followed by rational back substitution.
pub fn solve_integer_system(m: &[Vec<i64>], b: &[i64]) -> Result<Vec<BigRational>> {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            row.iter()
                .map(|&x| BigInt::from(x))
                .chain(std::iter::once(BigInt::from(bi)))
                .collect()
        })
        .collect();
    let mut prev = BigInt::one();
    for k in 0..n {
        let p = (k..n)
            .find(|&r| !a[r][k].is_zero())
            .ok_or(Error::SingularMatrix)?;
        a.swap(k, p);
        for i in k + 1..n {
            for j in k + 1..=n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let mut x = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        let mut s = BigRational::from_integer(a[i][n].clone());
        for j in i + 1..n {
            s -= BigRational::from_integer(a[i][j].clone()) * &x[j];
        }
        x[i] = s / BigRational::from_integer(a[i][i].clone());
    }
    Ok(x)
}

impl CurveConfig {
    /// Curves with the given self-intersections, `χ = 1` and no edges.
    pub fn new(self_int: &[i64]) -> Self {
        let n = self_int.len();
        CurveConfig {
            labels: (1..=n).map(|i| format!("C{i}")).collect(),
            self_int: self_int.to_vec(),
            chi: vec![1; n],
            mult: vec![vec![0; n]; n],
        }
    }

    pub fn with_labels(mut self, labels: &[&str]) -> Self {
        self.labels = labels.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn with_edges(mut self, edges: &[(usize, usize)]) -> Self {
        for &(i, j) in edges {
            self.set_mult(i, j, 1);
        }
        self
    }

    pub fn set_mult(&mut self, i: usize, j: usize, m: i64) {
        assert_ne!(i, j);
        self.mult[i][j] = m;
        self.mult[j][i] = m;
    }

    pub fn len(&self) -> usize {
        self.self_int.len()
    }

    pub fn is_empty(&self) -> bool {
        self.self_int.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn matrix(&self) -> Vec<Vec<i64>> {
        let n = self.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            self.self_int[i]
                        } else {
                            self.mult[i][j]
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// `Z · E_j`.
    pub fn pairing(&self, z: &Cycle, j: usize) -> i64 {
        (0..self.len())
            .map(|i| {
                z.0[i]
                    * if i == j {
                        self.self_int[i]
                    } else {
                        self.mult[i][j]
                    }
            })
            .sum()
    }

    pub fn intersect(&self, a: &Cycle, b: &Cycle) -> i64 {
        (0..self.len()).map(|j| b.0[j] * self.pairing(a, j)).sum()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.len();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if !seen[j] && self.mult[i][j] > 0 {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Every leading principal minor of `-M` is positive.
    pub fn is_negative_definite(&self) -> bool {
        let n = self.len();
        let mut a: Vec<Vec<BigRational>> = self
            .matrix()
            .iter()
            .map(|r| r.iter().map(|&x| q(-x)).collect())
            .collect();
        for k in 0..n {
            if !a[k][k].is_positive() {
                return false;
            }
            for i in k + 1..n {
                let factor = &a[i][k] / &a[k][k];
                for j in k..n {
                    let v = &a[k][j] * &factor;
                    a[i][j] -= v;
                }
            }
        }
        true
    }

    fn check_resolution_graph(&self) -> Result<()> {
        if !self.is_connected() {
            return Err(Error::Lattice("configuration is not connected".into()));
        }
        if !self.is_negative_definite() {
            return Err(Error::Lattice(
                "configuration is not negative definite".into(),
            ));
        }
        Ok(())
    }

    /// Laufer's algorithm from `Z = sum E_i`, adding the first `E_j` in
    /// `order` with `Z · E_j > 0` until none is left.
    pub fn fundamental_cycle_in_order(&self, order: &[usize]) -> Result<Cycle> {
        self.check_resolution_graph()?;
        let mut z = Cycle(vec![1; self.len()]);
        while let Some(&j) = order.iter().find(|&&j| self.pairing(&z, j) > 0) {
            z.0[j] += 1;
        }
        Ok(z)
    }

    pub fn fundamental_cycle(&self) -> Result<Cycle> {
        let order: Vec<usize> = (0..self.len()).collect();
        self.fundamental_cycle_in_order(&order)
    }

    /// Discrepancies `d` with `K · E_i + E_i^2 = -2 χ(O_{E_i})`.
    pub fn canonical_cycle(&self) -> Result<QCycle> {
        let rhs: Vec<i64> = (0..self.len())
            .map(|i| -self.self_int[i] - 2 * self.chi[i])
            .collect();
        Ok(QCycle(solve_integer_system(&self.matrix(), &rhs)?))
    }

    /// `K = -Z` as cycles.
    pub fn is_minimally_elliptic(&self) -> Result<bool> {
        let z = self.fundamental_cycle()?;
        let k = self.canonical_cycle()?;
        Ok(k.0.iter().zip(&z.0).all(|(d, &c)| *d == q(-c)))
    }

    /// `max(2, -Z^2)` for a minimally elliptic configuration.
    pub fn elliptic_multiplicity(&self) -> Result<i64> {
        if !self.is_minimally_elliptic()? {
            return Err(Error::Lattice(
                "configuration is not minimally elliptic".into(),
            ));
        }
        let z = self.fundamental_cycle()?;
        Ok((-self.intersect(&z, &z)).max(2))
    }

    /// Solves `M x = pairing` exactly.
    pub fn numerically_cartier(&self, pairing: &[i64]) -> Result<CartierSolution> {
        if pairing.len() != self.len() {
            return Err(Error::Lattice("pairing vector has the wrong length".into()));
        }
        if !self.is_negative_definite() {
            return Err(Error::Lattice(
                "configuration is not negative definite".into(),
            ));
        }
        let solution = QCycle(solve_integer_system(&self.matrix(), pairing)?);
        Ok(CartierSolution {
            integral: solution.to_integral().is_some(),
            solution,
        })
    }

    /// Blows up a point lying on the listed curves with the given local
    /// multiplicities. Two listed curves must meet at the point, and their
    /// intersection number drops by the product of the multiplicities.
    pub fn point_blowup(&self, through: &[(usize, i64)], label: &str) -> Result<CurveConfig> {
        let n = self.len();
        for (k, &(i, m)) in through.iter().enumerate() {
            if i >= n || m < 1 {
                return Err(Error::Lattice(format!("bad blow-up center ({i}, {m})")));
            }
            for &(j, mj) in &through[..k] {
                if i == j || self.mult[i][j] < m * mj {
                    return Err(Error::Lattice(format!(
                        "curves {} and {} do not meet at the center",
                        self.labels[i], self.labels[j]
                    )));
                }
            }
        }
        let mut out = self.clone();
        out.labels.push(label.to_string());
        out.self_int.push(-1);
        out.chi.push(1);
        for row in &mut out.mult {
            row.push(0);
        }
        out.mult.push(vec![0; n + 1]);
        for (k, &(i, m)) in through.iter().enumerate() {
            out.self_int[i] -= m * m;
            out.set_mult(i, n, m);
            for &(j, mj) in &through[..k] {
                let v = out.mult[i][j] - m * mj;
                out.set_mult(i, j, v);
            }
        }
        Ok(out)
    }

    /// Induced configuration on the given indices, in order.
    pub fn induced(&self, keep: &[usize]) -> CurveConfig {
        CurveConfig {
            labels: keep.iter().map(|&i| self.labels[i].clone()).collect(),
            self_int: keep.iter().map(|&i| self.self_int[i]).collect(),
            chi: keep.iter().map(|&i| self.chi[i]).collect(),
            mult: keep
                .iter()
                .map(|&i| keep.iter().map(|&j| self.mult[i][j]).collect())
                .collect(),
        }
    }

    /// Connected components of the configuration left after deleting `remove`.
    pub fn remove_curves(&self, remove: &[usize]) -> Vec<CurveConfig> {
        let n = self.len();
        let gone: BTreeSet<usize> = remove.iter().copied().collect();
        let mut comp = vec![usize::MAX; n];
        let mut components = Vec::new();
        for s in 0..n {
            if gone.contains(&s) || comp[s] != usize::MAX {
                continue;
            }
            let id = components.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut k = 0;
            while k < members.len() {
                let i = members[k];
                for j in 0..n {
                    if !gone.contains(&j) && comp[j] == usize::MAX && self.mult[i][j] > 0 {
                        comp[j] = id;
                        members.push(j);
                    }
                }
                k += 1;
            }
            members.sort_unstable();
            components.push(members);
        }
        components.iter().map(|m| self.induced(m)).collect()
    }

    /// Recognizes ADE trees of smooth rational `(-2)`-curves.
    pub fn dynkin_recognize(&self) -> Option<Dynkin> {
        let n = self.len();
        if n == 0 || !self.self_int.iter().all(|&s| s == -2) || !self.chi.iter().all(|&c| c == 1) {
            return None;
        }
        let mut edges = 0;
        for i in 0..n {
            for j in i + 1..n {
                match self.mult[i][j] {
                    0 => {}
                    1 => edges += 1,
                    _ => return None,
                }
            }
        }
        if edges != n - 1 || !self.is_connected() {
            return None;
        }
        let degree: Vec<usize> = (0..n)
            .map(|i| (0..n).filter(|&j| self.mult[i][j] > 0).count())
            .collect();
        let branch: Vec<usize> = (0..n).filter(|&i| degree[i] >= 3).collect();
        match branch.as_slice() {
            [] => Some(Dynkin::A(n)),
            [c] if degree[*c] == 3 => {
                let mut arms: Vec<usize> = (0..n)
                    .filter(|&j| self.mult[*c][j] > 0)
                    .map(|start| {
                        let (mut prev, mut cur, mut len) = (*c, start, 1);
                        while let Some(next) = (0..n).find(|&k| k != prev && self.mult[cur][k] > 0)
                        {
                            prev = cur;
                            cur = next;
                            len += 1;
                        }
                        len
                    })
                    .collect();
                arms.sort_unstable();
                match arms.as_slice() {
                    [1, 1, k] => Some(Dynkin::D(k + 3)),
                    [1, 2, 2] => Some(Dynkin::E(6)),
                    [1, 2, 3] => Some(Dynkin::E(7)),
                    [1, 2, 4] => Some(Dynkin::E(8)),
                    _ => None,
                }
            }
            _ => None,
        }
    }

    /// Sorted multiset of the Dynkin types of the components, `None` if
    /// some component is not ADE.
    pub fn dynkin_components(&self) -> Option<Vec<Dynkin>> {
        let mut types = self
            .remove_curves(&[])
            .iter()
            .map(CurveConfig::dynkin_recognize)
            .collect::<Option<Vec<_>>>()?;
        types.sort();
        Some(types)
    }

    /// The configuration with vertices permuted: new vertex `k` is old `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> CurveConfig {
        self.induced(perm)
    }

    pub fn to_graph_text(&self) -> String {
        let mut out = String::new();
        for i in 0..self.len() {
            out.push_str(&format!(
                "curve {} self={} chi={}\n",
                self.labels[i], self.self_int[i], self.chi[i]
            ));
        }
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if self.mult[i][j] > 0 {
                    out.push_str(&format!(
                        "edge {} {} mult={}\n",
                        self.labels[i], self.labels[j], self.mult[i][j]
                    ));
                }
            }
        }
        out
    }
}

/// ADE graph of `(-2)`-curves labelled `1..n` in Bourbaki numbering.
pub fn dynkin_graph(t: Dynkin) -> Result<CurveConfig> {
    let n = t.rank();
    let mut edges = Vec::new();
    match t {
        Dynkin::A(n) if n >= 1 => edges.extend((1..n).map(|i| (i - 1, i))),
        Dynkin::D(n) if n >= 4 => {
            edges.extend((1..n - 1).map(|i| (i - 1, i)));
            edges.push((n - 3, n - 1));
        }
        Dynkin::E(n) if (6..=8).contains(&n) => {
            // 1-3-4-...-n with 2 attached to 4
            edges.push((0, 2));
            edges.extend((3..n).map(|i| (i - 1, i)));
            edges.push((1, 3));
        }
        _ => return Err(Error::Domain(format!("no Dynkin diagram {t}"))),
    }
    let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let labels: Vec<&str> = labels.iter().map(String::as_str).collect();
    Ok(CurveConfig::new(&vec![-2; n])
        .with_labels(&labels)
        .with_edges(&edges))
}

/// Constraints for [`constraint_search`].
#[derive(Clone, Debug)]
pub struct SearchSpec {
    pub self_int: Vec<i64>,
    pub chi_options: Vec<i64>,
    pub target_z: Vec<i64>,
    pub target_z2: i64,
    pub require_minimally_elliptic: bool,
}

/// Every configuration with intersection numbers `m_ij <= 2` satisfying the
/// constraints, sorted. Since `Z · E_i <= 0` for the fundamental cycle, each
/// row obeys `sum_j m_ij Z_j <= -Z_i E_i^2`, which bounds the search.
pub fn constraint_search(spec: &SearchSpec) -> Result<Vec<CurveConfig>> {
    let n = spec.self_int.len();
    if n == 0 || n > 7 {
        return Err(Error::Domain(format!(
            "search supports 1..=7 curves, got {n}"
        )));
    }
    if spec.target_z.len() != n || spec.target_z.iter().any(|&z| z < 1) {
        return Err(Error::Domain(
            "target cycle must be positive on every curve".into(),
        ));
    }
    if spec.chi_options.iter().any(|c| !(0..=1).contains(c)) || spec.chi_options.is_empty() {
        return Err(Error::Domain("χ options must lie in {0, 1}".into()));
    }
    let budget: Vec<i64> = (0..n)
        .map(|i| -spec.target_z[i] * spec.self_int[i])
        .collect();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let mut base = CurveConfig::new(&spec.self_int);
    let mut found = BTreeSet::new();
    let mut used = vec![0i64; n];
    search(spec, &pairs, 0, &budget, &mut used, &mut base, &mut found)?;
    Ok(found.into_iter().collect())
}

fn search(
    spec: &SearchSpec,
    pairs: &[(usize, usize)],
    k: usize,
    budget: &[i64],
    used: &mut [i64],
    cfg: &mut CurveConfig,
    found: &mut BTreeSet<CurveConfig>,
) -> Result<()> {
    if k == pairs.len() {
        return accept(spec, cfg, found);
    }
    let (i, j) = pairs[k];
    for m in 0..=2 {
        let di = m * spec.target_z[j];
        let dj = m * spec.target_z[i];
        if used[i] + di > budget[i] || used[j] + dj > budget[j] {
            break;
        }
        used[i] += di;
        used[j] += dj;
        cfg.set_mult(i, j, m);
        search(spec, pairs, k + 1, budget, used, cfg, found)?;
        used[i] -= di;
        used[j] -= dj;
    }
    cfg.set_mult(i, j, 0);
    Ok(())
}

fn accept(spec: &SearchSpec, cfg: &CurveConfig, found: &mut BTreeSet<CurveConfig>) -> Result<()> {
    if !cfg.is_connected() || !cfg.is_negative_definite() {
        return Ok(());
    }
    let z = cfg.fundamental_cycle()?;
    if z.0 != spec.target_z || cfg.intersect(&z, &z) != spec.target_z2 {
        return Ok(());
    }
    let n = cfg.len();
    let choices = spec.chi_options.len().pow(n as u32);
    for code in 0..choices {
        let mut c = cfg.clone();
        let mut rest = code;
        for i in 0..n {
            c.chi[i] = spec.chi_options[rest % spec.chi_options.len()];
            rest /= spec.chi_options.len();
        }
        if !spec.require_minimally_elliptic || c.is_minimally_elliptic()? {
            found.insert(c);
        }
    }
    Ok(())
}

/// A parsed graph file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphFile {
    pub config: CurveConfig,
    pub cycles: Vec<Cycle>,
}

fn field<'a>(tok: &'a str, key: &str, line: usize) -> Result<&'a str> {
    tok.strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| Error::Parse(format!("line {line}: expected {key}=<int>, got {tok:?}")))
}

fn int(s: &str, line: usize) -> Result<i64> {
    s.parse()
        .map_err(|_| Error::Parse(format!("line {line}: bad integer {s:?}")))
}

pub fn parse_graph(text: &str) -> Result<GraphFile> {
    let mut labels: Vec<String> = Vec::new();
    let mut self_int = Vec::new();
    let mut chi = Vec::new();
    let mut edges: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    let mut raw_cycles = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        let index = |label: &str, labels: &[String]| {
            labels
                .iter()
                .position(|l| l == label)
                .ok_or_else(|| Error::Parse(format!("line {line}: unknown curve {label:?}")))
        };
        match toks[0] {
            "curve" => {
                if toks.len() < 3 || toks.len() > 4 {
                    return Err(Error::Parse(format!(
                        "line {line}: curve <label> self=<int> chi=<int>"
                    )));
                }
                if labels.iter().any(|l| l == toks[1]) {
                    return Err(Error::Parse(format!(
                        "line {line}: duplicate curve {:?}",
                        toks[1]
                    )));
                }
                labels.push(toks[1].to_string());
                self_int.push(int(field(toks[2], "self", line)?, line)?);
                chi.push(match toks.get(3) {
                    Some(t) => int(field(t, "chi", line)?, line)?,
                    None => 1,
                });
            }
            "edge" => {
                if toks.len() != 4 {
                    return Err(Error::Parse(format!(
                        "line {line}: edge <a> <b> mult=<int>"
                    )));
                }
                let i = index(toks[1], &labels)?;
                let j = index(toks[2], &labels)?;
                if i == j {
                    return Err(Error::Parse(format!(
                        "line {line}: self edge on {:?}",
                        toks[1]
                    )));
                }
                let m = int(field(toks[3], "mult", line)?, line)?;
                if m < 0 {
                    return Err(Error::Parse(format!("line {line}: negative multiplicity")));
                }
                let key = (i.min(j), i.max(j));
                if let Some(&old) = edges.get(&key) {
                    let what = if old == m { "duplicate" } else { "asymmetric" };
                    return Err(Error::Parse(format!(
                        "line {line}: {what} edge {} {}",
                        toks[1], toks[2]
                    )));
                }
                edges.insert(key, m);
            }
            "cycle" => raw_cycles.push((
                line,
                toks[1..].iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            )),
            other => {
                return Err(Error::Parse(format!(
                    "line {line}: unknown statement {other:?}"
                )))
            }
        }
    }
    let label_refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    let mut config = CurveConfig::new(&self_int).with_labels(&label_refs);
    config.chi = chi;
    for ((i, j), m) in edges {
        config.set_mult(i, j, m);
    }
    let mut cycles = Vec::new();
    for (line, entries) in raw_cycles {
        let mut c = vec![0; labels.len()];
        for e in entries {
            let (l, v) = e
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {line}: expected <label>=<int>")))?;
            let i = config
                .index_of(l)
                .ok_or_else(|| Error::Parse(format!("line {line}: unknown curve {l:?}")))?;
            c[i] = int(v, line)?;
        }
        cycles.push(Cycle(c));
    }
    Ok(GraphFile { config, cycles })
}

/// The star of five curves around `C2`, with `C1^2 = -3`.
pub fn star_config() -> CurveConfig {
    CurveConfig::new(&[-3, -2, -2, -2, -2]).with_edges(&[(0, 1), (1, 2), (1, 3), (1, 4)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn definiteness() {
        assert!(CurveConfig::new(&[-2]).is_negative_definite());
        let d4_affine = CurveConfig::new(&[-2; 5]).with_edges(&[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert!(!d4_affine.is_negative_definite());
        assert!(star_config().is_negative_definite());
    }

    #[test]
    fn fundamental_cycles() {
        let a1 = CurveConfig::new(&[-2]);
        let z = a1.fundamental_cycle().unwrap();
        assert_eq!((z.0.clone(), a1.intersect(&z, &z)), (vec![1], -2));
        let f3 = star_config();
        let z = f3.fundamental_cycle().unwrap();
        assert_eq!(z, Cycle(vec![1, 2, 1, 1, 1]));
        assert_eq!(f3.intersect(&z, &z), -1);
        let chain = dynkin_graph(Dynkin::A(5)).unwrap();
        assert_eq!(chain.fundamental_cycle().unwrap(), Cycle(vec![1; 5]));
        assert!(CurveConfig::new(&[-2, -2]).fundamental_cycle().is_err());
    }

    /// Smallest nonzero effective cycle with `Z · E_i <= 0`, by enumeration.
    fn brute_force_fundamental(c: &CurveConfig, bound: i64) -> Cycle {
        let n = c.len();
        let mut best: Option<Cycle> = None;
        let total = (bound + 1).pow(n as u32);
        for code in 1..total {
            let mut v = vec![0; n];
            let mut rest = code;
            for x in v.iter_mut() {
                *x = rest % (bound + 1);
                rest /= bound + 1;
            }
            let z = Cycle(v);
            if (0..n).all(|j| c.pairing(&z, j) <= 0) {
                let smaller = best
                    .as_ref()
                    .map_or(true, |b| z.0.iter().zip(&b.0).all(|(a, b)| a <= b));
                if smaller {
                    best = Some(z);
                }
            }
        }
        best.unwrap()
    }

    #[test]
    fn laufer_is_minimal() {
        for c in [
            star_config(),
            dynkin_graph(Dynkin::A(4)).unwrap(),
            dynkin_graph(Dynkin::D(5)).unwrap(),
            dynkin_graph(Dynkin::E(6)).unwrap(),
        ] {
            let z = c.fundamental_cycle().unwrap();
            let bound = z.0.iter().max().unwrap() + 1;
            assert_eq!(brute_force_fundamental(&c, bound), z);
        }
    }

    #[test]
    fn laufer_order_independence() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut order: Vec<usize> = (0..5).collect();
        let c = star_config();
        let z = c.fundamental_cycle().unwrap();
        for _ in 0..100 {
            order.shuffle(&mut rng);
            assert_eq!(c.fundamental_cycle_in_order(&order).unwrap(), z);
        }
    }

    #[test]
    fn canonical_cycles() {
        let e8 = dynkin_graph(Dynkin::E(8)).unwrap();
        assert!(e8.canonical_cycle().unwrap().0.iter().all(Zero::is_zero));
        let k = star_config().canonical_cycle().unwrap();
        assert_eq!(k.to_integral(), Some(Cycle(vec![-1, -2, -1, -1, -1])));
        assert!(star_config().is_minimally_elliptic().unwrap());
        assert!(!e8.is_minimally_elliptic().unwrap());
        assert_eq!(star_config().elliptic_multiplicity().unwrap(), 2);
    }

    #[test]
    fn cartier_solves() {
        let a1 = CurveConfig::new(&[-2]);
        let s = a1.numerically_cartier(&[1]).unwrap();
        assert_eq!(s.solution.0, vec![r(-1, 2)]);
        assert!(!s.integral);
    }

    #[test]
    fn blowups() {
        let a1 = CurveConfig::new(&[-2]);
        let b = a1.point_blowup(&[(0, 1)], "E").unwrap();
        assert_eq!(b.self_int, vec![-3, -1]);
        assert_eq!(b.mult[0][1], 1);
        // removing the new curve restores the old one with the center correction
        let back = b.induced(&[0]);
        assert_eq!(back.self_int[0] + 1, a1.self_int[0]);
        let chain = dynkin_graph(Dynkin::A(2)).unwrap();
        let both = chain.point_blowup(&[(0, 1), (1, 1)], "E").unwrap();
        assert_eq!(both.mult[0][1], 0);
        assert!(CurveConfig::new(&[-2, -2])
            .point_blowup(&[(0, 1), (1, 1)], "E")
            .is_err());
    }

    #[test]
    fn surgery() {
        let e8 = dynkin_graph(Dynkin::E(8)).unwrap();
        assert_eq!(e8.remove_curves(&[0]).len(), 1);
        assert_eq!(
            e8.remove_curves(&[0])[0].dynkin_recognize(),
            Some(Dynkin::D(7))
        );
        let d8 = dynkin_graph(Dynkin::D(8)).unwrap();
        let mut parts: Vec<_> = d8
            .remove_curves(&[3])
            .iter()
            .map(|c| c.dynkin_recognize().unwrap())
            .collect();
        parts.sort();
        assert_eq!(parts, vec![Dynkin::A(3), Dynkin::D(4)]);
        let a3 = dynkin_graph(Dynkin::A(3)).unwrap();
        let parts = a3.remove_curves(&[1]);
        assert_eq!(parts.len(), 2);
        assert!(parts
            .iter()
            .all(|c| c.dynkin_recognize() == Some(Dynkin::A(1))));
    }

    #[test]
    fn recognition_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut types: Vec<Dynkin> = (1..=12).map(Dynkin::A).collect();
        types.extend((4..=12).map(Dynkin::D));
        types.extend([Dynkin::E(6), Dynkin::E(7), Dynkin::E(8)]);
        for t in types {
            let g = dynkin_graph(t).unwrap();
            let mut perm: Vec<usize> = (0..g.len()).collect();
            for _ in 0..20 {
                perm.shuffle(&mut rng);
                assert_eq!(g.permuted(&perm).dynkin_recognize(), Some(t));
            }
        }
        let e8 = dynkin_graph(Dynkin::E(8)).unwrap();
        assert_eq!(e8.mult[1][3], 1);
        let mut star = star_config();
        star.self_int[0] = -3;
        assert_eq!(star.dynkin_recognize(), None);
    }

    #[test]
    fn searches() {
        let star = constraint_search(&SearchSpec {
            self_int: vec![-3, -2, -2, -2, -2],
            chi_options: vec![1],
            target_z: vec![1, 2, 1, 1, 1],
            target_z2: -1,
            require_minimally_elliptic: true,
        })
        .unwrap();
        assert_eq!(star, vec![star_config()]);
        let fig5 = constraint_search(&SearchSpec {
            self_int: vec![-3, -2, -2, -2, -2],
            chi_options: vec![1],
            target_z: vec![2, 1, 1, 1, 1],
            target_z2: -2,
            require_minimally_elliptic: false,
        })
        .unwrap();
        assert!(fig5.is_empty());
        let a1 = constraint_search(&SearchSpec {
            self_int: vec![-2],
            chi_options: vec![1],
            target_z: vec![1],
            target_z2: -2,
            require_minimally_elliptic: false,
        })
        .unwrap();
        assert_eq!(a1, vec![CurveConfig::new(&[-2])]);
    }

    #[test]
    fn graph_files() {
        let text = "curve C1 self=-3 chi=1\ncurve C2 self=-2 chi=1\n# comment\nedge C1 C2 mult=1\ncycle C1=1 C2=2\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.config.self_int, vec![-3, -2]);
        assert_eq!(g.config.mult[0][1], 1);
        assert_eq!(g.cycles, vec![Cycle(vec![1, 2])]);
        assert_eq!(
            parse_graph(&g.config.to_graph_text()).unwrap().config,
            g.config
        );
        let dup = "curve A self=-2\ncurve B self=-2\nedge A B mult=1\nedge B A mult=1\n";
        assert!(parse_graph(dup)
            .unwrap_err()
            .to_string()
            .contains("duplicate"));
        let asym = "curve A self=-2\ncurve B self=-2\nedge A B mult=1\nedge B A mult=2\n";
        assert!(parse_graph(asym)
            .unwrap_err()
            .to_string()
            .contains("asymmetric"));
        assert!(parse_graph("curve A self=-2\nedge A A mult=1\n").is_err());
        assert!(parse_graph("curve A self=x\n").is_err());
    }
}
