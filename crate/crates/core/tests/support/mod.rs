//! Shared test oracles.
//!
//! Everything in here recomputes answers by a route independent of the
//! library code it is used to check: brute-force expansion instead of the
//! sparse polynomial engine, cofactor expansion instead of fraction-free
//! elimination, exhaustive parallelepiped enumeration instead of the
//! odometer search, and the classical continued-fraction recurrence for
//! two-dimensional cone resolutions.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use desing::poly::Polynomial;

/// A deliberately naive sparse polynomial over `Q`: exponent vector →ratio.
/// Used to re-derive substitution, translation, and order results without
/// touching the engine's arithmetic. Characteristic 0 only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u32>, BigRational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> MultiPoly {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> MultiPoly {
        let mut p = MultiPoly::zero(nvars);
        p.insert(vec![0; nvars], c);
        p
    }

    pub fn variable(nvars: usize, i: usize) -> MultiPoly {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = MultiPoly::zero(nvars);
        p.insert(e, BigRational::one());
        p
    }

    /// Import an engine polynomial term by term.
    pub fn from_engine(f: &Polynomial) -> MultiPoly {
        let mut p = MultiPoly::zero(f.ring().num_vars());
        for (m, c) in f.terms() {
            p.insert(m.0.clone(), c.clone());
        }
        p
    }

    fn insert(&mut self, e: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            let key = self
                .terms
                .iter()
                .find(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .unwrap();
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, mut k: u32) -> MultiPoly {
        let mut acc = MultiPoly::constant(self.nvars, BigRational::one());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    /// Substitute each variable by an image polynomial (all images over one
    /// ring with `images[0].nvars` variables), expanding term by term.
    pub fn substitute(&self, images: &[MultiPoly]) -> MultiPoly {
        assert_eq!(images.len(), self.nvars);
        let target = images.first().map_or(self.nvars, |p| p.nvars);
        let mut out = MultiPoly::zero(target);
        for (e, c) in &self.terms {
            let mut term = MultiPoly::constant(target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = term.mul(&images[i].pow(k));
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Shift coordinates by `point` (x_i ↦ x_i + point[i]).
    pub fn translate(&self, point: &[BigRational]) -> MultiPoly {
        let images: Vec<MultiPoly> = (0..self.nvars)
            .map(|i| {
                MultiPoly::variable(self.nvars, i)
                    .add(&MultiPoly::constant(self.nvars, point[i].clone()))
            })
            .collect();
        self.substitute(&images)
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    v *= &point[i];
                }
            }
            acc += v;
        }
        acc
    }

    /// Minimum total degree of a term; `None` for the zero polynomial.
    pub fn order_at_origin(&self) -> Option<u64> {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&k| u64::from(k)).sum())
            .min()
    }

    /// Formal partial derivative.
    pub fn derivative(&self, var: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e[var];
            if k == 0 {
                continue;
            }
            let mut lowered = e.clone();
            lowered[var] = k - 1;
            out.insert(lowered, c * BigRational::from_integer(k.into()));
        }
        out
    }
}

/// Row-style Hermite normal form by plain Euclidean elimination: positive
/// pivots, entries above each pivot reduced into `[0, pivot)`. The form is
/// canonical, so this must agree with any correct implementation.
pub fn hnf_oracle(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let (m, n) = (a.len(), a.first().map_or(0, Vec::len));
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        loop {
            let pivot = (r..m)
                .filter(|&i| !a[i][c].is_zero())
                .min_by_key(|&i| a[i][c].abs());
            let Some(p) = pivot else { break };
            a.swap(r, p);
            let mut others = false;
            for i in r + 1..m {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = &a[i][c] / &a[r][c]; // truncating: remainder shrinks
                for j in 0..n {
                    let v = &a[r][j] * &q;
                    a[i][j] -= v;
                }
                others |= !a[i][c].is_zero();
            }
            if !others {
                break;
            }
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_negative() {
            for j in 0..n {
                a[r][j] = -a[r][j].clone();
            }
        }
        for i in 0..r {
            let q = num_integer::Integer::div_floor(&a[i][c], &a[r][c]);
            for j in 0..n {
                let v = &a[r][j] * &q;
                a[i][j] -= v;
            }
        }
        r += 1;
    }
    a
}

/// Determinant by cofactor expansion along the first row.
pub fn det_oracle(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut det = BigInt::zero();
    for (j, entry) in m[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let cofactor = entry * det_oracle(&minor);
        if j % 2 == 0 {
            det += cofactor;
        } else {
            det -= cofactor;
        }
    }
    det
}

pub fn det_oracle_i64(m: &[Vec<i64>]) -> BigInt {
    let big: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    det_oracle(&big)
}

/// Nonzero lattice points of the half-open fundamental parallelepiped
/// `{Σ t_i u_i : 0 ≤ t_i < 1}` of a full-dimensional simplicial cone, found
/// by exhaustive search over a bounding box with exact Cramer solves. Each
/// result carries its coefficient vector.
pub fn parallelepiped_points(rays: &[Vec<i64>]) -> Vec<(Vec<i64>, Vec<BigRational>)> {
    let k = rays.len();
    assert!(rays.iter().all(|r| r.len() == k), "square case only");
    // Ray matrix with the rays as columns.
    let matrix: Vec<Vec<BigInt>> = (0..k)
        .map(|r| (0..k).map(|c| BigInt::from(rays[c][r])).collect())
        .collect();
    let det = det_oracle(&matrix);
    assert!(!det.is_zero(), "rays must be independent");

    // Coordinatewise bounds of the box containing the parallelepiped.
    let lo: Vec<i64> = (0..k)
        .map(|c| rays.iter().map(|u| u[c].min(0)).sum())
        .collect();
    let hi: Vec<i64> = (0..k)
        .map(|c| rays.iter().map(|u| u[c].max(0)).sum())
        .collect();

    let mut found = Vec::new();
    let mut x: Vec<i64> = lo.clone();
    'outer: loop {
        if x.iter().any(|&v| v != 0) {
            // Solve Σ t_i u_i = x by Cramer's rule.
            let mut coeffs = Vec::with_capacity(k);
            for i in 0..k {
                let mut replaced = matrix.clone();
                for (r, row) in replaced.iter_mut().enumerate() {
                    row[i] = BigInt::from(x[r]);
                }
                coeffs.push(BigRational::new(det_oracle(&replaced), det.clone()));
            }
            let half_open = coeffs
                .iter()
                .all(|t| !t.is_negative() && *t < BigRational::one());
            if half_open {
                found.push((x.clone(), coeffs));
            }
        }
        for c in 0..k {
            x[c] += 1;
            if x[c] <= hi[c] {
                continue 'outer;
            }
            x[c] = lo[c];
        }
        break;
    }
    found
}

/// The rays a minimal resolution of `cone((1,0),(1,m))` must insert,
/// derived from the negative (ceiling) continued fraction of `m/(m−1)` via
/// the classical three-term recurrence. Panics unless the recurrence chain
/// closes at the far generator, so a wrong convention cannot go unnoticed.
pub fn hj_inserted_rays(m: i64) -> Vec<(i64, i64)> {
    assert!(m >= 2);
    let mut coeffs = Vec::new();
    let (mut p, mut q) = (m, m - 1);
    while q != 0 {
        let b = p.div_euclid(q) + i64::from(p.rem_euclid(q) != 0); // ceil(p/q)
        coeffs.push(b);
        let next = b * q - p;
        p = q;
        q = next;
    }
    let mut rays = Vec::new();
    let mut prev = (1i64, 0i64);
    let mut cur = (1i64, 1i64);
    for &b in &coeffs {
        let next = (b * cur.0 - prev.0, b * cur.1 - prev.1);
        rays.push(cur);
        prev = cur;
        cur = next;
    }
    assert_eq!(cur, (1, m), "recurrence chain must close at (1, m)");
    rays
}

/// All integer grid points of `[lo, hi]^n`, for brute-force locus searches.
pub fn grid_points(n: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut x = vec![lo; n];
    'outer: loop {
        out.push(x.clone());
        for c in 0..n {
            x[c] += 1;
            if x[c] <= hi {
                continue 'outer;
            }
            x[c] = lo;
        }
        break;
    }
    out
}

pub fn q64(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn qr(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// A small random nonzero rational with numerator in ±[1,9] and denominator
/// in [1,4].
pub fn random_rational<R: Rng>(rng: &mut R) -> BigRational {
    let num = if rng.random_bool(0.5) { 1 } else { -1 } * rng.random_range(1..=9i64);
    let den = rng.random_range(1..=4i64);
    BigRational::new(num.into(), den.into())
}
