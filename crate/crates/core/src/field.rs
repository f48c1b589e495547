//! Finite fields `GF(p^k)` with table-driven arithmetic.
//!
//! An element is stored as a code `c_0 + c_1 p + ... + c_{k-1} p^{k-1}` that
//! encodes the residue `c_0 + c_1 X + ... + c_{k-1} X^{k-1}` modulo a fixed
//! monic irreducible modulus. Every modulus used here is primitive, so the
//! class of `X` generates the multiplicative group; it is printed as `g`.
//!
//! Built-in moduli for `p = 2` (Conway polynomials, coefficients listed from
//! the constant term upwards):
//!
//! | k | modulus                     |
//! |---|-----------------------------|
//! | 1 | X + 1                       |
//! | 2 | X^2 + X + 1                 |
//! | 3 | X^3 + X + 1                 |
//! | 4 | X^4 + X + 1                 |
//! | 5 | X^5 + X^2 + 1               |
//! | 6 | X^6 + X^4 + X^3 + X + 1     |
//! | 7 | X^7 + X + 1                 |
//! | 8 | X^8 + X^4 + X^3 + X^2 + 1   |
//!
//! For odd primes only the prime field `GF(p)` is built in; its modulus is
//! `X - r` with `r` the smallest primitive root, so `g = r`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// An element of a [`GaloisField`]. Only meaningful together with its field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

const CONWAY_2: [&[u32]; 8] = [
    &[1, 1],
    &[1, 1, 1],
    &[1, 1, 0, 1],
    &[1, 1, 0, 0, 1],
    &[1, 0, 1, 0, 0, 1],
    &[1, 1, 0, 1, 1, 0, 1],
    &[1, 1, 0, 0, 0, 0, 0, 1],
    &[1, 0, 1, 1, 1, 0, 0, 0, 1],
];

const MAX_ORDER: u64 = 1 << 16;

#[derive(Debug)]
struct Tables {
    p: u32,
    k: u32,
    order: u32,
    modulus: Vec<u32>,
    /// `exp[i] = g^i` for `0 <= i < 2(order-1)`.
    exp: Vec<u32>,
    /// `log[c]` for nonzero codes.
    log: Vec<u32>,
}

/// The finite field `GF(p^k)`. Cheap to clone.
#[derive(Clone)]
pub struct GaloisField(Arc<Tables>);

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for GaloisField {}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.k)
    }
}

impl fmt::Display for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.k)
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Remainder of `num` modulo the monic polynomial `den` over `GF(p)`.
/// Coefficient vectors run from the constant term upwards.
fn poly_rem(mut num: Vec<u32>, den: &[u32], p: u32) -> Vec<u32> {
    let dd = den.len() - 1;
    let lead_inv = inv_mod(den[dd], p);
    while num.len() > dd {
        let top = *num.last().unwrap();
        if top != 0 {
            let factor = top * lead_inv % p;
            let shift = num.len() - 1 - dd;
            for (i, &c) in den.iter().enumerate() {
                let idx = shift + i;
                num[idx] = (num[idx] + p * p - factor * c % p) % p;
            }
        }
        num.pop();
    }
    while num.len() > 1 && *num.last().unwrap() == 0 {
        num.pop();
    }
    num
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let (mut r0, mut r1) = (p as i64, (a % p) as i64);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    s0.rem_euclid(p as i64) as u32
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let deg = modulus.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                cand.push((c % p as u64) as u32);
                c /= p as u64;
            }
            cand.push(1);
            let rem = poly_rem(modulus.to_vec(), &cand, p);
            if rem.iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

fn smallest_primitive_root(p: u32) -> u32 {
    if p == 2 {
        return 1;
    }
    let n = p - 1;
    let mut factors = Vec::new();
    let mut m = n;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            factors.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..p)
        .find(|&r| {
            factors
                .iter()
                .all(|&f| pow_mod(r as u64, (n / f) as u64, p as u64) != 1)
        })
        .expect("every prime field has a primitive root")
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

impl GaloisField {
    /// `GF(p^k)` from the built-in modulus table.
    pub fn new(p: u32, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Field(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(Error::Field("extension degree must be at least 1".into()));
        }
        let modulus: Vec<u32> = if p == 2 {
            if k > 8 {
                return Err(Error::Field(format!(
                    "no built-in modulus for GF(2^{k}); degrees 1..=8 are supported"
                )));
            }
            CONWAY_2[(k - 1) as usize].to_vec()
        } else if k == 1 {
            vec![p - smallest_primitive_root(p), 1]
        } else {
            return Err(Error::Field(format!(
                "no built-in modulus for GF({p}^{k}); pass one to GaloisField::with_modulus"
            )));
        };
        Self::with_modulus(p, modulus)
    }

    /// `GF(2^k)`, the common case.
    pub fn binary(k: u32) -> Result<Self> {
        Self::new(2, k)
    }

    /// Parses `p^k` or `p`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (p, k) = match spec.split_once('^') {
            Some((p, k)) => (p.trim(), k.trim()),
            None => (spec, "1"),
        };
        let p: u32 = p
            .parse()
            .map_err(|_| Error::Parse(format!("bad field characteristic in {spec:?}")))?;
        let k: u32 = k
            .parse()
            .map_err(|_| Error::Parse(format!("bad extension degree in {spec:?}")))?;
        Self::new(p, k)
    }

    /// Field with an explicit monic modulus (constant term first). The
    /// modulus must be irreducible and primitive.
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Field(format!("{p} is not prime")));
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::Field("modulus must be monic of degree >= 1".into()));
        }
        let k = (modulus.len() - 1) as u32;
        let order64 = (p as u64).pow(k);
        if order64 > MAX_ORDER {
            return Err(Error::Field(format!("GF({p}^{k}) is too large")));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::Field("modulus is reducible".into()));
        }
        let order = order64 as u32;
        let encode = |v: &[u32]| -> u32 { v.iter().rev().fold(0u32, |acc, &c| acc * p + c) };
        // powers of X modulo the modulus
        let mut exp = Vec::with_capacity(2 * order as usize);
        let mut log = vec![u32::MAX; order as usize];
        let mut cur: Vec<u32> = vec![1];
        for i in 0..(order - 1) {
            let code = encode(&cur);
            if log[code as usize] != u32::MAX {
                return Err(Error::Field("modulus is not primitive".into()));
            }
            log[code as usize] = i;
            exp.push(code);
            let mut next = vec![0u32];
            next.extend_from_slice(&cur);
            cur = poly_rem(next, &modulus, p);
        }
        if exp.len() as u32 != order - 1 || encode(&cur) != 1 {
            return Err(Error::Field("modulus is not primitive".into()));
        }
        let period = exp.clone();
        exp.extend(period);
        Ok(GaloisField(Arc::new(Tables {
            p,
            k,
            order,
            modulus,
            exp,
            log,
        })))
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.k
    }

    pub fn order(&self) -> u32 {
        self.0.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    /// The fixed generator `g` of the multiplicative group.
    pub fn generator(&self) -> Elem {
        Elem(self.0.exp[1 % (self.0.order as usize - 1).max(1)])
    }

    /// `g^j`, with `j` taken modulo `order - 1`.
    pub fn gen_pow(&self, j: u64) -> Elem {
        let n = (self.0.order - 1) as u64;
        Elem(self.0.exp[(j % n) as usize])
    }

    /// Image of an integer under `Z -> GF(p)`.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// All elements in code order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.0.order).map(Elem)
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.0.p;
        if p == 2 {
            return Elem(a.0 ^ b.0);
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0u32, 1u32);
        while x > 0 || y > 0 {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        Elem(out)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.0.p;
        if p == 2 {
            return a;
        }
        let (mut x, mut out, mut place) = (a.0, 0u32, 1u32);
        while x > 0 {
            out += ((p - x % p) % p) * place;
            x /= p;
            place *= p;
        }
        Elem(out)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        let t = &self.0;
        Elem(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a.is_zero() {
            return None;
        }
        let t = &self.0;
        let n = t.order - 1;
        let l = t.log[a.0 as usize];
        Some(Elem(t.exp[((n - l) % n) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        let t = &self.0;
        let n = (t.order - 1) as u64;
        let l = t.log[a.0 as usize] as u64;
        Elem(t.exp[((l * (e % n)) % n) as usize])
    }

    /// The Frobenius endomorphism `a -> a^p`.
    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow(a, self.0.p as u64)
    }

    /// Inverse of the Frobenius (a `p`-th root; fields are perfect).
    pub fn frobenius_inv(&self, a: Elem) -> Elem {
        // a^(p^(k-1)) is the unique p-th root
        self.pow(a, (self.0.p as u64).pow(self.0.k - 1))
    }

    /// Discrete logarithm base `g`.
    pub fn log(&self, a: Elem) -> Option<u32> {
        if a.is_zero() {
            None
        } else {
            Some(self.0.log[a.0 as usize])
        }
    }

    /// Text form: integers for prime fields, `g^j` powers otherwise.
    pub fn format(&self, a: Elem) -> String {
        if self.0.k == 1 {
            return a.0.to_string();
        }
        match self.log(a) {
            None => "0".into(),
            Some(0) => "1".into(),
            Some(1) => "g".into(),
            Some(j) => format!("g^{j}"),
        }
    }

    /// Inverse of [`GaloisField::format`]; also accepts plain integers.
    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix('g') {
            let rest = rest.trim();
            let j: u64 = if rest.is_empty() {
                1
            } else {
                rest.strip_prefix('^')
                    .and_then(|e| e.trim().parse().ok())
                    .ok_or_else(|| Error::Parse(format!("bad field element {s:?}")))?
            };
            return Ok(self.gen_pow(j));
        }
        let n: i64 = s
            .parse()
            .map_err(|_| Error::Parse(format!("bad field element {s:?}")))?;
        Ok(self.from_int(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn builtin_binary_moduli_are_primitive() {
        for k in 1..=8 {
            let f = GaloisField::binary(k).unwrap();
            assert_eq!(f.order(), 1 << k);
        }
    }

    #[test]
    fn reducible_modulus_is_rejected() {
        // X^2 + 1 = (X + 1)^2 over GF(2)
        assert!(GaloisField::with_modulus(2, vec![1, 0, 1]).is_err());
        // X^4 + X^3 + X^2 + X + 1 is irreducible but not primitive
        assert!(GaloisField::with_modulus(2, vec![1, 1, 1, 1, 1]).is_err());
    }

    #[test]
    fn field_axioms_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in [1, 2, 4] {
            let f = GaloisField::binary(k).unwrap();
            for _ in 0..1000 {
                let [a, b, c] = [0; 3].map(|_| Elem(rng.gen_range(0..f.order())));
                assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
                }
                assert_eq!(
                    f.frobenius(f.add(a, b)),
                    f.add(f.frobenius(a), f.frobenius(b))
                );
            }
        }
    }

    #[test]
    fn odd_prime_field() {
        let f = GaloisField::new(7, 1).unwrap();
        assert_eq!(f.generator(), Elem(3));
        assert_eq!(f.mul(Elem(3), Elem(5)), Elem(1));
        assert_eq!(f.neg(Elem(2)), Elem(5));
        assert!(GaloisField::new(9, 1).is_err());
        assert!(GaloisField::new(3, 2).is_err());
    }

    #[test]
    fn subfield_of_gf16() {
        let f = GaloisField::binary(4).unwrap();
        let fixed: Vec<_> = f.elements().filter(|&a| f.pow(a, 4) == a).collect();
        assert_eq!(fixed.len(), 4);
        assert!(fixed.contains(&f.gen_pow(5)));
        assert!(fixed.contains(&f.gen_pow(10)));
    }

    #[test]
    fn frobenius_inverse_is_a_root() {
        let f = GaloisField::binary(4).unwrap();
        for a in f.elements() {
            assert_eq!(f.frobenius(f.frobenius_inv(a)), a);
        }
    }

    #[test]
    fn format_round_trip() {
        let f = GaloisField::binary(4).unwrap();
        for a in f.elements() {
            assert_eq!(f.parse_elem(&f.format(a)).unwrap(), a);
        }
        assert_eq!(f.format(f.generator()), "g");
        assert_eq!(GaloisField::parse("2^4").unwrap(), f);
    }
}
