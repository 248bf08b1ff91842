//! Integer lattice geometry: primitive vectors, simplicial cones, fans, and
//! the elementary operations behind toric resolution (Hermite normal form,
//! cone multiplicity, subdivision-ray selection, star subdivision).
//!
//! All cones here are simplicial: the ray generators are required to be
//! linearly independent primitive integer vectors. A fan is a finite list of
//! such cones that pairwise meet in a common face; we store only the maximal
//! cones and reject lists where one cone is contained in another.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::parse::strip_input_lines;
use crate::ratlin;

/// An integer vector in the ambient lattice `Z^n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeVector(pub Vec<BigInt>);

impl LatticeVector {
    pub fn from_i64(entries: &[i64]) -> Self {
        LatticeVector(entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Greatest common divisor of the entries (zero for the zero vector).
    pub fn content(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// The primitive vector on the same ray, or `None` for the zero vector.
    pub fn primitive_form(&self) -> Option<LatticeVector> {
        let g = self.content();
        if g.is_zero() {
            return None;
        }
        Some(LatticeVector(self.0.iter().map(|x| x / &g).collect()))
    }

    fn to_rationals(&self) -> Vec<BigRational> {
        self.0
            .iter()
            .map(|x| BigRational::from_integer(x.clone()))
            .collect()
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Express `point` as a linear combination of `rays`; `None` when the point
/// is outside their span. Requires the rays to be linearly independent.
fn combination_in(rays: &[LatticeVector], point: &[BigRational]) -> Option<Vec<BigRational>> {
    if rays.is_empty() {
        return if point.iter().all(Zero::is_zero) {
            Some(Vec::new())
        } else {
            None
        };
    }
    // One equation per ambient coordinate, one unknown per ray.
    let n = rays[0].dim();
    let rows: Vec<Vec<BigRational>> = (0..n)
        .map(|coord| {
            rays.iter()
                .map(|r| BigRational::from_integer(r.0[coord].clone()))
                .collect()
        })
        .collect();
    ratlin::solve(&rows, point)
}

fn in_nonneg_span(rays: &[LatticeVector], point: &[BigRational]) -> bool {
    match combination_in(rays, point) {
        Some(coeffs) => coeffs.iter().all(|c| !c.is_negative()),
        None => false,
    }
}

/// A simplicial rational cone, stored by its sorted primitive ray generators.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cone {
    rays: Vec<LatticeVector>,
}

impl Cone {
    /// Build a cone from ray generators. The rays must be nonzero, primitive,
    /// of equal dimension, linearly independent, and pairwise distinct.
    pub fn new(rays: Vec<LatticeVector>) -> Result<Cone> {
        if rays.is_empty() {
            return Err(Error::InvalidFan("cone with no rays".into()));
        }
        let n = rays[0].dim();
        if rays.iter().any(|r| r.dim() != n) {
            return Err(Error::DimensionMismatch);
        }
        for r in &rays {
            if !r.is_primitive() {
                return Err(Error::NonPrimitiveRay(r.to_string()));
            }
        }
        let matrix: Vec<Vec<BigRational>> = rays.iter().map(|r| r.to_rationals()).collect();
        if ratlin::rank(&matrix) != rays.len() {
            return Err(Error::DependentRays);
        }
        let mut rays = rays;
        rays.sort();
        Ok(Cone { rays })
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    /// Dimension of the cone (= number of rays, since it is simplicial).
    pub fn dim(&self) -> usize {
        self.rays.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.rays[0].dim()
    }

    pub fn contains(&self, v: &LatticeVector) -> bool {
        v.dim() == self.ambient_dim() && in_nonneg_span(&self.rays, &v.to_rationals())
    }

    /// The facets as ray lists, each obtained by dropping one generator.
    /// A one-dimensional cone has the empty list (the origin) as its facet.
    pub fn facets(&self) -> Vec<Vec<LatticeVector>> {
        (0..self.rays.len())
            .map(|drop| {
                self.rays
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != drop)
                    .map(|(_, r)| r.clone())
                    .collect()
            })
            .collect()
    }

    pub fn multiplicity(&self) -> BigInt {
        cone_multiplicity(self)
    }

    pub fn is_smooth(&self) -> bool {
        self.multiplicity().is_one()
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.rays.iter().map(|r| r.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Exact determinant of a square integer matrix (Bareiss elimination).
fn integer_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for i in 0..n.saturating_sub(1) {
        if m[i][i].is_zero() {
            let Some(p) = (i + 1..n).find(|&r| !m[r][i].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(i, p);
            negate = !negate;
        }
        for r in i + 1..n {
            for c in i + 1..n {
                let t = (&m[r][c] * &m[i][i] - &m[r][i] * &m[i][c]) / &prev;
                m[r][c] = t;
            }
            m[r][i] = BigInt::zero();
        }
        prev = m[i][i].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// The multiplicity of a simplicial cone: the index of the subgroup generated
/// by the rays inside the lattice points of their rational span. Computed as
/// the gcd of all maximal minors of the ray matrix; a cone is smooth exactly
/// when this is 1.
pub fn cone_multiplicity(cone: &Cone) -> BigInt {
    let k = cone.dim();
    let n = cone.ambient_dim();
    let mut g = BigInt::zero();
    for cols in k_subsets(n, k) {
        let sub: Vec<Vec<BigInt>> = cone
            .rays
            .iter()
            .map(|r| cols.iter().map(|&c| r.0[c].clone()).collect())
            .collect();
        g = g.gcd(&integer_det(sub));
        if g.is_one() {
            break;
        }
    }
    g
}

/// Row-style Hermite normal form. Returns `(h, u)` where `u` is unimodular,
/// `u * a = h`, pivots are positive, entries above each pivot are reduced
/// into `[0, pivot)`, and zero rows sit at the bottom.
pub fn hermite_normal_form(
    rows: &[LatticeVector],
) -> Result<(Vec<LatticeVector>, Vec<Vec<BigInt>>)> {
    if rows.is_empty() {
        return Ok((Vec::new(), Vec::new()));
    }
    let m = rows.len();
    let n = rows[0].dim();
    if rows.iter().any(|r| r.dim() != n) {
        return Err(Error::DimensionMismatch);
    }
    let mut h: Vec<Vec<BigInt>> = rows.iter().map(|r| r.0.clone()).collect();
    let mut u: Vec<Vec<BigInt>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();

    let sub_scaled = |target: &mut Vec<BigInt>, source: &[BigInt], q: &BigInt| {
        for (t, s) in target.iter_mut().zip(source) {
            *t -= s * q;
        }
    };

    let mut r = 0;
    for c in 0..n {
        if (r..m).all(|i| h[i][c].is_zero()) {
            continue;
        }
        // Clear the column below row r, keeping the smallest entry as pivot.
        loop {
            let p = (r..m)
                .filter(|&i| !h[i][c].is_zero())
                .min_by_key(|&i| h[i][c].abs())
                .unwrap();
            if p != r {
                h.swap(r, p);
                u.swap(r, p);
            }
            let mut residue = false;
            for i in r + 1..m {
                if h[i][c].is_zero() {
                    continue;
                }
                let q = &h[i][c] / &h[r][c];
                let (head, tail) = h.split_at_mut(i);
                sub_scaled(&mut tail[0], &head[r], &q);
                let (head, tail) = u.split_at_mut(i);
                sub_scaled(&mut tail[0], &head[r], &q);
                if !h[i][c].is_zero() {
                    residue = true;
                }
            }
            if !residue {
                break;
            }
        }
        if h[r][c].is_negative() {
            for x in h[r].iter_mut() {
                *x = -x.clone();
            }
            for x in u[r].iter_mut() {
                *x = -x.clone();
            }
        }
        // Reduce the entries above the pivot into [0, pivot).
        for i in 0..r {
            let q = h[i][c].div_floor(&h[r][c]);
            if !q.is_zero() {
                let (head, tail) = h.split_at_mut(r);
                sub_scaled(&mut head[i], &tail[0], &q);
                let (head, tail) = u.split_at_mut(r);
                sub_scaled(&mut head[i], &tail[0], &q);
            }
        }
        r += 1;
        if r == m {
            break;
        }
    }
    Ok((h.into_iter().map(LatticeVector).collect(), u))
}

/// Choose the ray used to star-subdivide a singular cone: among the nonzero
/// lattice points of the half-open fundamental parallelepiped
/// `{ sum c_i u_i : 0 <= c_i < 1 }`, take the one minimizing the coefficient
/// sum, breaking ties lexicographically on the point's entries. Such a point
/// exists exactly when the cone is singular, and the minimizer is primitive.
pub fn pick_subdivision_ray(cone: &Cone) -> Result<LatticeVector> {
    let mult = cone.multiplicity();
    if mult.is_one() {
        return Err(Error::SmoothCone);
    }
    let k = cone.dim();
    // Every lattice point of the parallelepiped has coefficients with
    // denominator dividing the multiplicity, so a finite grid search over
    // t/mult with t in {0..mult-1}^k is exhaustive.
    let m_u = u64::try_from(&mult).map_err(|_| Error::MultiplicityTooLarge(mult.to_string()))?;
    match m_u.checked_pow(k as u32) {
        Some(total) if total <= 20_000_000 => {}
        _ => return Err(Error::MultiplicityTooLarge(mult.to_string())),
    }

    let m_big = BigInt::from(m_u);
    let mut best: Option<(u64, Vec<BigInt>)> = None;
    let mut t = vec![0u64; k];
    'grid: loop {
        // Odometer step; the all-zero tuple is skipped by bumping first.
        let mut pos = 0;
        loop {
            if pos == k {
                break 'grid;
            }
            t[pos] += 1;
            if t[pos] < m_u {
                break;
            }
            t[pos] = 0;
            pos += 1;
        }
        let coeff_sum: u64 = t.iter().sum();
        if let Some((s, _)) = &best {
            if coeff_sum > *s {
                continue;
            }
        }
        // x = sum t_i * u_i must be divisible by mult in every coordinate.
        let n = cone.ambient_dim();
        let mut x = vec![BigInt::zero(); n];
        for (ti, ray) in t.iter().zip(&cone.rays) {
            let tb = BigInt::from(*ti);
            for (xj, rj) in x.iter_mut().zip(&ray.0) {
                *xj += rj * &tb;
            }
        }
        if !x.iter().all(|xj| xj.is_multiple_of(&m_big)) {
            continue;
        }
        let point: Vec<BigInt> = x.iter().map(|xj| xj / &m_big).collect();
        let better = match &best {
            None => true,
            Some((s, p)) => coeff_sum < *s || (coeff_sum == *s && point < *p),
        };
        if better {
            best = Some((coeff_sum, point));
        }
    }
    let (_, point) = best.ok_or_else(|| {
        Error::InvariantViolation("singular cone has no parallelepiped point".into())
    })?;
    let ray = LatticeVector(point);
    debug_assert!(ray.is_primitive());
    debug_assert!(cone.contains(&ray));
    Ok(ray)
}

/// A fan, stored as its sorted list of maximal simplicial cones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    ambient: usize,
    cones: Vec<Cone>,
}

impl Fan {
    /// Validate and canonicalize a list of maximal cones: consistent ambient
    /// dimension, no cone contained in another, and every pairwise
    /// intersection equal to a common face.
    pub fn new(cones: Vec<Cone>) -> Result<Fan> {
        if cones.is_empty() {
            return Err(Error::InvalidFan("a fan needs at least one cone".into()));
        }
        let ambient = cones[0].ambient_dim();
        if cones.iter().any(|c| c.ambient_dim() != ambient) {
            return Err(Error::DimensionMismatch);
        }
        let set: BTreeSet<Cone> = cones.into_iter().collect();
        let cones: Vec<Cone> = set.into_iter().collect();
        for (i, a) in cones.iter().enumerate() {
            for b in cones.iter().skip(i + 1) {
                check_pair(a, b)?;
            }
        }
        Ok(Fan { ambient, cones })
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn is_smooth(&self) -> bool {
        self.cones.iter().all(Cone::is_smooth)
    }

    pub fn max_multiplicity(&self) -> BigInt {
        self.cones
            .iter()
            .map(Cone::multiplicity)
            .max()
            .expect("fan is nonempty")
    }

    pub fn supports(&self, ray: &LatticeVector) -> bool {
        self.cones.iter().any(|c| c.contains(ray))
    }

    /// Parse the line-oriented text format: one cone per line, rays separated
    /// by `;`, coordinates by `,`. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Fan> {
        let mut cones = Vec::new();
        for line in strip_input_lines(text) {
            let mut rays = Vec::new();
            for ray_src in line.split(';') {
                let mut entries = Vec::new();
                for coord in ray_src.split(',') {
                    let coord = coord.trim();
                    let value: BigInt = coord.parse().map_err(|_| Error::Syntax {
                        position: 0,
                        message: format!("bad lattice coordinate `{coord}` in `{line}`"),
                    })?;
                    entries.push(value);
                }
                rays.push(LatticeVector(entries));
            }
            cones.push(Cone::new(rays)?);
        }
        Fan::new(cones)
    }
}

impl fmt::Display for Fan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, cone) in self.cones.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{cone}")?;
        }
        Ok(())
    }
}

/// Verify that two distinct cones of a fan intersect in a common face.
///
/// The intersection is a cone; its extreme rays all arise as one-dimensional
/// kernels of column submatrices of `[A | -B]` with sign-definite generators,
/// so enumerating column supports yields a generating set. The intersection
/// is a common face exactly when every generator lies in the cone spanned by
/// the shared rays (faces of a simplicial cone are spanned by ray subsets).
fn check_pair(a: &Cone, b: &Cone) -> Result<()> {
    let contained = |inner: &Cone, outer: &Cone| inner.rays.iter().all(|r| outer.contains(r));
    if contained(a, b) || contained(b, a) {
        return Err(Error::InvalidFan(format!(
            "cone {a} and cone {b} are nested; list only maximal cones"
        )));
    }

    let shared: Vec<LatticeVector> = a
        .rays
        .iter()
        .filter(|r| b.rays.contains(r))
        .cloned()
        .collect();

    let n = a.ambient_dim();
    let ka = a.dim();
    let kb = b.dim();
    let cols = ka + kb;
    // Rows of the homogeneous system: sum a_i u_i - sum b_j w_j = 0.
    let rows: Vec<Vec<BigRational>> = (0..n)
        .map(|coord| {
            let mut row: Vec<BigRational> = Vec::with_capacity(cols);
            for ray in &a.rays {
                row.push(BigRational::from_integer(ray.0[coord].clone()));
            }
            for ray in &b.rays {
                row.push(-BigRational::from_integer(ray.0[coord].clone()));
            }
            row
        })
        .collect();

    for mask in 1u32..(1 << cols) {
        let support: Vec<usize> = (0..cols).filter(|i| mask & (1 << i) != 0).collect();
        let sub: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|row| support.iter().map(|&i| row[i].clone()).collect())
            .collect();
        let kernel = ratlin::kernel(&sub);
        if kernel.len() != 1 {
            continue;
        }
        let gen = &kernel[0];
        if gen.iter().any(Zero::is_zero) {
            continue; // handled by a smaller support
        }
        let positive = if gen[0].is_positive() {
            gen.clone()
        } else {
            gen.iter().map(|x| -x.clone()).collect()
        };
        if positive.iter().any(|x| x.is_negative()) {
            continue; // mixed signs: not a point of the intersection cone
        }
        // The generator as an ambient point, via the a-side coefficients.
        let mut point = vec![BigRational::zero(); n];
        for (&col, coeff) in support.iter().zip(&positive) {
            if col >= ka {
                continue;
            }
            for (pj, rj) in point.iter_mut().zip(&a.rays[col].0) {
                *pj += BigRational::from_integer(rj.clone()) * coeff;
            }
        }
        if !in_nonneg_span(&shared, &point) {
            return Err(Error::InvalidFan(format!(
                "cones {a} and {b} do not meet in a common face"
            )));
        }
    }
    Ok(())
}

/// Star subdivision of a fan at a primitive ray in its support: every cone
/// containing the ray is replaced by the cones spanned by the ray together
/// with each facet not containing it; all other cones are kept. Subdividing
/// along an existing ray returns the fan unchanged.
pub fn star_subdivide(fan: &Fan, ray: &LatticeVector) -> Result<Fan> {
    if ray.dim() != fan.ambient_dim() {
        return Err(Error::DimensionMismatch);
    }
    if !ray.is_primitive() {
        return Err(Error::NonPrimitiveRay(ray.to_string()));
    }
    if !fan.supports(ray) {
        return Err(Error::RayOutsideSupport(ray.to_string()));
    }
    let mut cones = Vec::new();
    for cone in fan.cones() {
        if !cone.contains(ray) {
            cones.push(cone.clone());
            continue;
        }
        for facet in cone.facets() {
            if in_nonneg_span(&facet, &ray.to_rationals()) {
                continue;
            }
            let mut rays = facet;
            rays.push(ray.clone());
            cones.push(Cone::new(rays)?);
        }
    }
    Fan::new(cones)
}
