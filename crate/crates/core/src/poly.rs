//! Sparse multivariate polynomials with exact coefficients.
//!
//! Terms live in a `BTreeMap` keyed by exponent vector under the graded
//! lexicographic order, so iteration is deterministic and the leading term is
//! simply the last entry. Coefficients are `BigRational`, kept canonical for
//! the ring's ground field (lowest terms over `Q`, residues in `[0, p)` over
//! `F_p`).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ring::PolyRing;

/// An exponent vector; one entry per ring variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(num_vars: usize) -> Self {
        Monomial(vec![0; num_vars])
    }

    pub fn var(num_vars: usize, index: usize) -> Self {
        let mut e = vec![0; num_vars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.0[var]
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Componentwise difference; `None` if any exponent would go negative.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<u32>>>()
            .map(Monomial)
    }

    /// Indices of variables with positive exponent.
    pub fn support(&self) -> BTreeSet<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
            .collect()
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: compare total degree first, then exponents left
    /// to right (earlier variables are heavier).
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// Vanishing order of a polynomial: the zero polynomial has infinite order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(u64),
    Infinite,
}

impl Order {
    pub fn finite(&self) -> Option<u64> {
        match self {
            Order::Finite(k) => Some(*k),
            Order::Infinite => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

/// A polynomial in a fixed [`PolyRing`]. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    ring: PolyRing,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero(ring: &PolyRing) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &PolyRing, c: BigRational) -> Result<Self> {
        Self::from_terms(ring, vec![(Monomial::one(ring.num_vars()), c)])
    }

    pub fn one(ring: &PolyRing) -> Self {
        Self::constant(ring, BigRational::one()).expect("1 is canonical in every field")
    }

    pub fn variable(ring: &PolyRing, index: usize) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: BTreeMap::from([(
                Monomial::var(ring.num_vars(), index),
                BigRational::one(),
            )]),
        }
    }

    /// Assemble from raw terms: duplicates are summed, coefficients are
    /// normalized into the ring's field, zeros are dropped.
    pub fn from_terms(ring: &PolyRing, raw: Vec<(Monomial, BigRational)>) -> Result<Self> {
        let mut terms: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (m, c) in raw {
            if m.0.len() != ring.num_vars() {
                return Err(Error::LengthMismatch {
                    expected: ring.num_vars(),
                    got: m.0.len(),
                });
            }
            *terms.entry(m).or_insert_with(BigRational::zero) += c;
        }
        let field = ring.field();
        let mut canon = BTreeMap::new();
        for (m, c) in terms {
            let c = field.normalize(&c)?;
            if !c.is_zero() {
                canon.insert(m, c);
            }
        }
        Ok(Polynomial {
            ring: ring.clone(),
            terms: canon,
        })
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    /// A single term `c * x^a` (possibly constant, but not zero).
    pub fn is_term(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Greatest monomial under graded lex, with its coefficient.
    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exponent(var)).max()
    }

    /// Order of vanishing at the origin: minimal total degree of a term.
    pub fn order_at_origin(&self) -> Order {
        self.terms
            .keys()
            .map(|m| m.total_degree() as u64)
            .min()
            .map_or(Order::Infinite, Order::Finite)
    }

    /// Order of vanishing along `{x_var = 0}`: minimal exponent of `x_var`.
    pub fn order_in_var(&self, var: usize) -> Order {
        self.terms
            .keys()
            .map(|m| m.exponent(var) as u64)
            .min()
            .map_or(Order::Infinite, Order::Finite)
    }

    /// Variables that actually occur.
    pub fn support(&self) -> BTreeSet<usize> {
        let mut s = BTreeSet::new();
        for m in self.terms.keys() {
            s.extend(m.support());
        }
        s
    }

    pub fn neg(&self) -> Polynomial {
        let field = self.ring.field();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let c = field.normalize(&-c).expect("negation stays in the field");
                (m.clone(), c)
            })
            .collect();
        Polynomial {
            ring: self.ring.clone(),
            terms,
        }
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        let mut raw: Vec<(Monomial, BigRational)> =
            self.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        raw.extend(other.terms.iter().map(|(m, c)| (m.clone(), c.clone())));
        Polynomial::from_terms(&self.ring, raw)
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                raw.push((m1.mul(m2), c1 * c2));
            }
        }
        Polynomial::from_terms(&self.ring, raw)
    }

    pub fn scale(&self, c: &BigRational) -> Result<Polynomial> {
        let raw = self
            .terms
            .iter()
            .map(|(m, k)| (m.clone(), k * c))
            .collect();
        Polynomial::from_terms(&self.ring, raw)
    }

    pub fn pow(&self, mut e: u32) -> Result<Polynomial> {
        let mut base = self.clone();
        let mut acc = Polynomial::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Simultaneous substitution `x_i -> images[i]`. All images must live in
    /// one common ring, which becomes the ring of the result.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.ring.num_vars() {
            return Err(Error::LengthMismatch {
                expected: self.ring.num_vars(),
                got: images.len(),
            });
        }
        let target = match images.first() {
            Some(p) => p.ring().clone(),
            None => self.ring.clone(),
        };
        for p in images {
            if p.ring() != &target {
                return Err(Error::RingMismatch);
            }
        }
        let mut acc = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(&target, c.clone())?;
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&images[i].pow(e)?)?;
                }
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// `f(x + a)`: translate so the point `a` moves to the origin.
    pub fn translate(&self, point: &[BigRational]) -> Result<Polynomial> {
        if point.len() != self.ring.num_vars() {
            return Err(Error::LengthMismatch {
                expected: self.ring.num_vars(),
                got: point.len(),
            });
        }
        let images: Vec<Polynomial> = point
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let x = Polynomial::variable(&self.ring, i);
                let c = Polynomial::constant(&self.ring, a.clone())?;
                x.add(&c)
            })
            .collect::<Result<_>>()?;
        self.substitute(&images)
    }

    pub fn eval(&self, point: &[BigRational]) -> Result<BigRational> {
        if point.len() != self.ring.num_vars() {
            return Err(Error::LengthMismatch {
                expected: self.ring.num_vars(),
                got: point.len(),
            });
        }
        let field = self.ring.field();
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    v *= &point[i];
                }
            }
            acc += v;
        }
        field.normalize(&acc)
    }

    /// Order of vanishing at a point (translate, then read off at origin).
    pub fn order_at_point(&self, point: &[BigRational]) -> Result<Order> {
        Ok(self.translate(point)?.order_at_origin())
    }

    /// Formal partial derivative with respect to `x_var`.
    pub fn derivative(&self, var: usize) -> Result<Polynomial> {
        let mut raw = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            if e == 0 {
                continue;
            }
            let mut lowered = m.clone();
            lowered.0[var] = e - 1;
            raw.push((lowered, c * BigRational::from_integer(BigInt::from(e))));
        }
        Polynomial::from_terms(&self.ring, raw)
    }

    /// The Jacobian criterion's generator list for the hypersurface cut out
    /// by `self`: the polynomial itself followed by all its first partial
    /// derivatives. A point of the hypersurface is singular exactly when all
    /// of these vanish there.
    pub fn jacobian_generators(&self) -> Result<Vec<Polynomial>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut gens = vec![self.clone()];
        for var in 0..self.ring.num_vars() {
            gens.push(self.derivative(var)?);
        }
        Ok(gens)
    }

    /// Split off the largest monomial factor: returns `(m, g)` with
    /// `self = m * g` and no variable dividing every term of `g`.
    pub fn factor_out_monomial(&self) -> (Monomial, Polynomial) {
        let n = self.ring.num_vars();
        if self.is_zero() {
            return (Monomial::one(n), self.clone());
        }
        let mut gcd = vec![u32::MAX; n];
        for m in self.terms.keys() {
            for (g, &e) in gcd.iter_mut().zip(&m.0) {
                *g = (*g).min(e);
            }
        }
        let gcd = Monomial(gcd);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let reduced = m.checked_div(&gcd).expect("gcd divides every term");
                (reduced, c.clone())
            })
            .collect();
        (
            gcd,
            Polynomial {
                ring: self.ring.clone(),
                terms,
            },
        )
    }

    /// Exact division by `x_var^k`; errors if some term has a smaller power.
    pub fn divide_by_var_power(&self, var: usize, k: u32) -> Result<Polynomial> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if m.exponent(var) < k {
                return Err(Error::NotDivisible {
                    var: self.ring.name(var).to_string(),
                    power: k as u64,
                });
            }
            let mut reduced = m.clone();
            reduced.0[var] -= k;
            terms.insert(reduced, c.clone());
        }
        Ok(Polynomial {
            ring: self.ring.clone(),
            terms,
        })
    }

    /// The coefficient of `x_var^d`, as a polynomial in the remaining
    /// variables (still an element of the same ring).
    pub fn coefficient_of_power(&self, var: usize, d: u32) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exponent(var) == d)
            .map(|(m, c)| {
                let mut stripped = m.clone();
                stripped.0[var] = 0;
                (stripped, c.clone())
            })
            .collect();
        Polynomial {
            ring: self.ring.clone(),
            terms,
        }
    }

    /// Reinterpret in another ring with the same number of variables (used
    /// when a blow-up renames variables but keeps exponents intact).
    pub fn cast_into(&self, ring: &PolyRing) -> Result<Polynomial> {
        if ring.num_vars() != self.ring.num_vars() {
            return Err(Error::LengthMismatch {
                expected: self.ring.num_vars(),
                got: ring.num_vars(),
            });
        }
        let raw = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Polynomial::from_terms(ring, raw)
    }
}

/// Canonical text for a rational: `n` when integral, else `n/d`.
pub fn fmt_rational(c: &BigRational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Polynomial {
    /// Terms in descending lexicographic order (earlier variables first, as
    /// one would write by hand); unit coefficients elided, `*` between
    /// factors, `^` for exponents above one.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let one = BigRational::one();
        let mut ordered: Vec<(&Monomial, &BigRational)> = self.terms.iter().collect();
        ordered.sort_by(|(a, _), (b, _)| b.0.cmp(&a.0));
        for (i, (m, c)) in ordered.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if abs != one || m.is_one() {
                factors.push(fmt_rational(&abs));
            }
            for (v, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.ring.name(v).to_string()),
                    _ => factors.push(format!("{}^{}", self.ring.name(v), e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}
