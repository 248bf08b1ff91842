//! Dense univariate polynomials over the rationals: Euclidean arithmetic,
//! gcds, Sylvester resultants, Lagrange interpolation, and rational root
//! extraction. This is the workhorse behind the plane-curve singular-locus
//! computation; everything is exact.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::divisors;
use crate::error::Result;

/// A univariate polynomial, coefficients from constant term upward; the
/// leading coefficient is nonzero and the zero polynomial is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<BigRational>,
}

impl UniPoly {
    pub fn zero() -> UniPoly {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> UniPoly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn constant(c: BigRational) -> UniPoly {
        UniPoly::from_coeffs(vec![c])
    }

    /// The monomial `c * x^k`.
    pub fn term(c: BigRational, k: usize) -> UniPoly {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        UniPoly::from_coeffs(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        UniPoly::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - other.coeff(k)).collect();
        UniPoly::from_coeffs(coeffs)
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs =
            vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        UniPoly::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &BigRational) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> UniPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
            .collect();
        UniPoly::from_coeffs(coeffs)
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    /// Panics on a zero divisor.
    pub fn divmod(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.coeffs.len() - 1;
        let lead = d.coeffs.last().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quo = vec![
            BigRational::zero();
            self.coeffs.len().saturating_sub(d.coeffs.len()) + 1
        ];
        while rem.len() >= d.coeffs.len() && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let factor = rem.last().unwrap() / &lead;
            for (i, c) in d.coeffs.iter().enumerate() {
                let t = c * &factor;
                rem[k + i] -= t;
            }
            quo[k] = factor;
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (UniPoly::from_coeffs(quo), UniPoly::from_coeffs(rem))
    }

    /// Monic greatest common divisor (1 for coprime inputs, 0 only when both
    /// inputs are 0).
    pub fn gcd(a: &UniPoly, b: &UniPoly) -> UniPoly {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b);
            a = b;
            b = r;
        }
        match a.leading() {
            Some(l) if !l.is_one() => {
                let inv = l.clone().recip();
                a.scale(&inv)
            }
            _ => a,
        }
    }

    /// The squarefree part `self / gcd(self, self')`, monic. Characteristic
    /// zero only, which is all this module is used for.
    pub fn squarefree_part(&self) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let g = UniPoly::gcd(self, &self.derivative());
        let (q, r) = self.divmod(&g);
        debug_assert!(r.is_zero());
        match q.leading() {
            Some(l) if !l.is_one() => {
                let inv = l.clone().recip();
                q.scale(&inv)
            }
            _ => q,
        }
    }

    pub fn is_squarefree(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        if self.degree() == Some(0) {
            return true;
        }
        UniPoly::gcd(self, &self.derivative()).degree() == Some(0)
    }

    /// All rational roots, ascending, without multiplicities. Uses the
    /// rational root theorem on the primitive integer form, so it can fail
    /// with `RootSearchOverflow` when a coefficient resists factoring.
    pub fn rational_roots(&self) -> Result<Vec<BigRational>> {
        if self.is_zero() || self.degree() == Some(0) {
            return Ok(Vec::new());
        }
        let mut roots = BTreeSet::new();
        // Strip powers of x: they contribute the root 0.
        let mut coeffs = self.coeffs.clone();
        let shift = coeffs.iter().take_while(|c| c.is_zero()).count();
        if shift > 0 {
            roots.insert(BigRational::zero());
            coeffs.drain(..shift);
        }
        if coeffs.len() <= 1 {
            return Ok(roots.into_iter().collect());
        }
        // Clear denominators and content to get primitive integer
        // coefficients.
        let denom_lcm = coeffs
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints: Vec<BigInt> = coeffs
            .iter()
            .map(|c| c.numer() * (&denom_lcm / c.denom()))
            .collect();
        let content = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        let ints: Vec<BigInt> = ints.iter().map(|c| c / &content).collect();

        let poly = UniPoly::from_coeffs(
            ints.iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        );
        let a0 = ints.first().unwrap().abs();
        let an = ints.last().unwrap().abs();
        for p in divisors(&a0)? {
            for q in divisors(&an)? {
                let candidate = BigRational::new(p.clone(), q.clone());
                if poly.eval(&candidate).is_zero() {
                    roots.insert(candidate.clone());
                }
                let negated = -candidate;
                if poly.eval(&negated).is_zero() {
                    roots.insert(negated);
                }
            }
        }
        Ok(roots.into_iter().collect())
    }
}

/// The resultant of `a` and `b`: the determinant of their Sylvester matrix,
/// by exact fraction-free elimination. Zero when either input is zero or
/// the polynomials share a root; a nonzero constant is returned for
/// constant inputs per the usual conventions (`res(c, b) = c^deg b`).
pub fn resultant(a: &UniPoly, b: &UniPoly) -> BigRational {
    let (Some(m), Some(n)) = (a.degree(), b.degree()) else {
        return BigRational::zero();
    };
    if m == 0 && n == 0 {
        return BigRational::one();
    }
    if m == 0 {
        return pow_rational(a.leading().unwrap(), n as u32);
    }
    if n == 0 {
        return pow_rational(b.leading().unwrap(), m as u32);
    }
    // Sylvester matrix: n rows of a's coefficients, m rows of b's, each row
    // holding the coefficients from highest degree downward.
    let size = m + n;
    let mut matrix = vec![vec![BigRational::zero(); size]; size];
    for (row, slot) in matrix.iter_mut().enumerate().take(n) {
        for k in 0..=m {
            slot[row + k] = a.coeff(m - k);
        }
    }
    for (row, slot) in matrix.iter_mut().skip(n).enumerate().take(m) {
        for k in 0..=n {
            slot[row + k] = b.coeff(n - k);
        }
    }
    determinant(matrix)
}

fn pow_rational(base: &BigRational, exp: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

fn determinant(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det *= &pivot;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &pivot;
            for c in col..n {
                let t = &m[col][c] * &factor;
                m[r][c] -= t;
            }
        }
    }
    det
}

/// The unique polynomial of degree `< points.len()` through the given
/// points (Lagrange form). The sample abscissae must be pairwise distinct.
pub fn interpolate(points: &[(BigRational, BigRational)]) -> UniPoly {
    let mut acc = UniPoly::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut basis = UniPoly::constant(BigRational::one());
        let mut denom = BigRational::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            basis = basis.mul(&UniPoly::from_coeffs(vec![
                -xj.clone(),
                BigRational::one(),
            ]));
            denom *= xi - xj;
        }
        acc = acc.add(&basis.scale(&(yi / denom)));
    }
    acc
}
