//! The implicit coordinates `x = u^2 + a u`, `y = v^2 + b v` attached to a
//! parameter system `(a, b)` of `k[[x, y]]`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, GaloisField};
use crate::localring::{Length, LocalIdeal};
use crate::series::{monomials_below, TruncatedSeries};

/// `x, y, z` as series in `u, v`, with `a` and `b` pulled back.
#[derive(Clone, Debug)]
pub struct ImplicitCoordinates {
    pub x: TruncatedSeries,
    pub y: TruncatedSeries,
    pub z: TruncatedSeries,
    pub a: TruncatedSeries,
    pub b: TruncatedSeries,
    pub iterations: u32,
}

/// Checks that `(a, b)` generates an ideal primary to the maximal ideal.
pub fn check_parameter_system(
    a: &TruncatedSeries,
    b: &TruncatedSeries,
    precision: u32,
) -> Result<usize> {
    if a.nvars() != 2 {
        return Err(Error::NotParameterSystem(format!(
            "expected a series in two variables, got {:?}",
            a.vars()
        )));
    }
    let ideal = LocalIdeal::new(vec![a.clone(), b.clone()], precision)?;
    if ideal.is_unit() {
        return Err(Error::NotParameterSystem("(a, b) is the unit ideal".into()));
    }
    match ideal.artinian_length() {
        Length::Finite(l) => Ok(l),
        Length::Infinite => Err(Error::NotParameterSystem(format!(
            "(a, b) = ({a}, {b}) is not primary to the maximal ideal"
        ))),
    }
}

/// Solves `x = u^2 + a(x, y) u`, `y = v^2 + b(x, y) v` modulo `(u, v)^n` by
/// fixed-point iteration from `x = u^2`, `y = v^2`, and sets
/// `z = u b + v a`.
pub fn solve_implicit_pair(
    a: &TruncatedSeries,
    b: &TruncatedSeries,
    n: u32,
) -> Result<ImplicitCoordinates> {
    check_parameter_system(a, b, n.max(12))?;
    let uv = TruncatedSeries::gens(a.field(), &["u", "v"])?;
    let (u, v) = (&uv[0], &uv[1]);
    let u2 = u.pow(2)?.truncate(n);
    let v2 = v.pow(2)?.truncate(n);
    let mut x = u2.clone();
    let mut y = v2.clone();
    for step in 1..=n + 1 {
        let pa = a.substitute(&[x.clone(), y.clone()])?.truncate(n);
        let pb = b.substitute(&[x.clone(), y.clone()])?.truncate(n);
        let nx = u2.add(&pa.mul(u)?)?.truncate(n);
        let ny = v2.add(&pb.mul(v)?)?.truncate(n);
        if nx == x && ny == y {
            let z = u.mul(&pb)?.add(&v.mul(&pa)?)?.truncate(n);
            return Ok(ImplicitCoordinates {
                x,
                y,
                z,
                a: pa,
                b: pb,
                iterations: step,
            });
        }
        x = nx;
        y = ny;
    }
    Err(Error::NonConvergence(n + 1))
}

/// A random parameter system of degree `<= max_degree` in `x, y`.
pub fn random_parameter_system<R: Rng>(
    rng: &mut R,
    field: &GaloisField,
    max_degree: u32,
) -> (TruncatedSeries, TruncatedSeries) {
    let monos: Vec<_> = monomials_below(2, max_degree + 1)
        .into_iter()
        .skip(1)
        .collect();
    let random = |rng: &mut R| {
        TruncatedSeries::from_terms(
            field,
            &["x", "y"],
            crate::series::EXACT,
            monos.iter().map(|&m| {
                let c = if rng.gen_bool(0.5) {
                    Elem(rng.gen_range(0..field.order()))
                } else {
                    Elem::ZERO
                };
                (m, c)
            }),
        )
        .expect("two variables")
    };
    loop {
        let a = random(rng);
        let b = random(rng);
        if check_parameter_system(&a, &b, 12).is_ok() {
            return (a, b);
        }
    }
}
