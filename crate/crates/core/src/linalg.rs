//! Dense linear algebra over a [`GaloisField`].

use crate::field::{Elem, GaloisField};

/// Incrementally built reduced row echelon form. The pivot of a row is its
/// first nonzero column, so low column indices are eliminated first.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: GaloisField,
    ncols: usize,
    rows: Vec<Vec<Elem>>,
    pivot_row: Vec<Option<usize>>,
}

impl Echelon {
    pub fn new(field: &GaloisField, ncols: usize) -> Self {
        Echelon {
            field: field.clone(),
            ncols,
            rows: Vec::new(),
            pivot_row: vec![None; ncols],
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col].is_some()
    }

    /// The reduced row whose pivot is `col`, normalized to 1 at the pivot.
    pub fn pivot_row(&self, col: usize) -> Option<&[Elem]> {
        self.pivot_row[col].map(|r| self.rows[r].as_slice())
    }

    /// Reduces `v` against the current rows in place.
    pub fn reduce(&self, v: &mut [Elem]) {
        let f = &self.field;
        for c in 0..self.ncols {
            if v[c].is_zero() {
                continue;
            }
            if let Some(r) = self.pivot_row[c] {
                let factor = v[c];
                let row = &self.rows[r];
                for j in c..self.ncols {
                    if !row[j].is_zero() {
                        v[j] = f.sub(v[j], f.mul(factor, row[j]));
                    }
                }
            }
        }
    }

    /// Adds a row; returns `false` when it is already in the span.
    pub fn insert(&mut self, mut v: Vec<Elem>) -> bool {
        debug_assert_eq!(v.len(), self.ncols);
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let f = &self.field;
        let inv = f.inv(v[p]).expect("nonzero pivot");
        for c in v.iter_mut().skip(p) {
            *c = f.mul(*c, inv);
        }
        for row in &mut self.rows {
            let factor = row[p];
            if factor.is_zero() {
                continue;
            }
            for j in p..self.ncols {
                if !v[j].is_zero() {
                    row[j] = f.sub(row[j], f.mul(factor, v[j]));
                }
            }
        }
        self.pivot_row[p] = Some(self.rows.len());
        self.rows.push(v);
        true
    }
}

/// Rank of a list of row vectors.
pub fn rank(field: &GaloisField, rows: &[Vec<Elem>]) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut e = Echelon::new(field, ncols);
    for r in rows {
        e.insert(r.clone());
    }
    e.rank()
}

/// Some solution of `sum_j x_j * columns[j] = target`, if one exists.
pub fn solve_columns(
    field: &GaloisField,
    columns: &[Vec<Elem>],
    target: &[Elem],
) -> Option<Vec<Elem>> {
    let n = columns.len();
    let m = target.len();
    // Rows of the augmented system [A | b], one per coordinate.
    let mut e = Echelon::new(field, n + 1);
    for i in 0..m {
        let mut row: Vec<Elem> = columns.iter().map(|c| c[i]).collect();
        row.push(target[i]);
        e.insert(row);
    }
    if e.is_pivot(n) {
        return None;
    }
    let mut x = vec![Elem::ZERO; n];
    for (c, xc) in x.iter_mut().enumerate() {
        if let Some(row) = e.pivot_row(c) {
            // free variables are zero, so x_c is the right-hand side
            *xc = row[n];
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        let f = GaloisField::new(5, 1).unwrap();
        let e = |n: i64| f.from_int(n);
        // x + 2y = 3, x + 3y = 4  =>  x = 1, y = 1
        let cols = vec![vec![e(1), e(1)], vec![e(2), e(3)]];
        let x = solve_columns(&f, &cols, &[e(3), e(4)]).unwrap();
        assert_eq!(x, vec![e(1), e(1)]);
        assert!(solve_columns(&f, &[vec![e(1), e(1)]], &[e(1), e(2)]).is_none());
    }

    #[test]
    fn rank_counts_independent_rows() {
        let f = GaloisField::binary(1).unwrap();
        let o = Elem::ONE;
        let z = Elem::ZERO;
        let rows = vec![vec![o, o, z], vec![z, o, o], vec![o, z, o]];
        assert_eq!(rank(&f, &rows), 2);
    }
}
