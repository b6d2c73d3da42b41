//! Table-driven arithmetic in GF(q) for small prime powers.
//!
//! Elements are encoded as integers `0..q`. For `q = p^e` with `e > 1` an
//! element is the coefficient vector of its polynomial representative packed
//! base `p` (constant term least significant), so `0` and `1` are the additive
//! and multiplicative identities and `p` is the class of the indeterminate.
//! The modulus is the smallest monic irreducible polynomial of degree `e`
//! when its lower coefficients are read as a base-`p` number, which is the
//! same as lexicographic order from the highest coefficient down.

use thiserror::Error;

/// Largest field order accepted by [`FiniteField::new`].
pub const MAX_ORDER: u32 = 4096;

pub type Elem = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("field order {0} exceeds the supported maximum {MAX_ORDER}")]
    TooLarge(u32),
    #[error("element {value} is outside 0..{order}")]
    OutOfRange { value: Elem, order: u32 },
    #[error("zero has no multiplicative inverse")]
    DivisionByZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Mul,
    Neg,
    Inv,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteField {
    q: u32,
    p: u32,
    e: u32,
    /// Lower coefficients of the monic modulus, constant term first. Empty for prime fields.
    modulus: Vec<u32>,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
}

/// Returns `(p, e)` with `q = p^e`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let (mut rest, mut e) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FiniteField {
    pub fn new(q: u32) -> Result<Self, FieldError> {
        let (p, e) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        if q > MAX_ORDER {
            return Err(FieldError::TooLarge(q));
        }
        let modulus = if e == 1 { Vec::new() } else { smallest_irreducible(p, e) };
        let size = q as usize;
        let digits = |x: u32| -> Vec<u32> {
            let mut v = vec![0; e as usize];
            let mut x = x;
            for c in v.iter_mut() {
                *c = x % p;
                x /= p;
            }
            v
        };
        let pack = |v: &[u32]| -> u32 { v.iter().rev().fold(0, |acc, &c| acc * p + c) };

        let mut add = vec![0; size * size];
        let mut mul = vec![0; size * size];
        for a in 0..q {
            let da = digits(a);
            for b in a..q {
                let db = digits(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                let prod = pack(&poly_mul_mod(&da, &db, &modulus, p));
                let s = pack(&sum);
                for (x, y) in [(a, b), (b, a)] {
                    add[(x * q + y) as usize] = s;
                    mul[(x * q + y) as usize] = prod;
                }
            }
        }
        let mut neg = vec![0; size];
        let mut inv = vec![0; size];
        for a in 0..q {
            for b in 0..q {
                let i = (a * q + b) as usize;
                if add[i] == 0 {
                    neg[a as usize] = b;
                }
                if mul[i] == 1 {
                    inv[a as usize] = b;
                }
            }
        }
        Ok(Self { q, p, e, modulus, add, mul, neg, inv })
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    /// Lower coefficients of the monic modulus, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The class of the indeterminate for extension fields, `None` for prime fields.
    pub fn generator(&self) -> Option<Elem> {
        (self.e > 1).then_some(self.p)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[(a * self.q + b) as usize]
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[(a * self.q + b) as usize]
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: Elem) -> Result<Elem, FieldError> {
        self.check(a)?;
        if a == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.inv[a as usize])
    }

    fn check(&self, a: Elem) -> Result<(), FieldError> {
        if a < self.q {
            Ok(())
        } else {
            Err(FieldError::OutOfRange { value: a, order: self.q })
        }
    }

    /// Range-checked entry point for a single field operation. `b` is ignored
    /// by the unary operations and required (non-`None`) by the binary ones.
    pub fn apply(&self, op: FieldOp, a: Elem, b: Option<Elem>) -> Result<Elem, FieldError> {
        self.check(a)?;
        let rhs = || -> Result<Elem, FieldError> {
            let b = b.ok_or(FieldError::OutOfRange { value: Elem::MAX, order: self.q })?;
            self.check(b)?;
            Ok(b)
        };
        match op {
            FieldOp::Add => Ok(self.add(a, rhs()?)),
            FieldOp::Mul => Ok(self.mul(a, rhs()?)),
            FieldOp::Neg => Ok(self.neg(a)),
            FieldOp::Inv => self.inv(a),
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q
    }
}

/// Multiply two polynomials over GF(p) (constant term first) and reduce by
/// the monic modulus `x^e + modulus`.
fn poly_mul_mod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let e = a.len();
    let mut prod = vec![0u32; 2 * e.max(1)];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    if modulus.is_empty() {
        prod.truncate(e);
        return prod;
    }
    for deg in (e..prod.len()).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        prod[deg] = 0;
        // x^deg = x^(deg-e) * x^e = -x^(deg-e) * modulus
        for (k, &m) in modulus.iter().enumerate() {
            let idx = deg - e + k;
            prod[idx] = (prod[idx] + (p - c) * m) % p;
        }
    }
    prod.truncate(e);
    prod
}

fn smallest_irreducible(p: u32, e: u32) -> Vec<u32> {
    let count = p.pow(e);
    (0..count)
        .map(|code| {
            let mut v = vec![0; e as usize];
            let mut x = code;
            for c in v.iter_mut() {
                *c = x % p;
                x /= p;
            }
            v
        })
        .find(|lower| is_irreducible(lower, p))
        .expect("an irreducible polynomial exists for every degree")
}

/// A monic polynomial of degree e is irreducible iff it has no monic factor
/// of degree 1..=e/2. Degrees here are tiny, so trial division suffices.
fn is_irreducible(lower: &[u32], p: u32) -> bool {
    let e = lower.len();
    let mut f: Vec<u32> = lower.to_vec();
    f.push(1);
    for deg in 1..=e / 2 {
        for code in 0..p.pow(deg as u32) {
            let mut g = vec![0u32; deg + 1];
            let mut x = code;
            for c in g.iter_mut().take(deg) {
                *c = x % p;
                x /= p;
            }
            g[deg] = 1;
            if poly_rem(&f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_rem(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dg;
        if lead != 0 {
            for (k, &c) in g.iter().enumerate() {
                r[shift + k] = (r[shift + k] + (p - lead) * c) % p;
            }
        }
        r.pop();
    }
    r
}
