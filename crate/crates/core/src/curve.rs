//! Resolution of plane curves over `Q` by iterated point blow-ups.
//!
//! The singular locus is computed exactly: resultants eliminate one
//! variable, rational roots give candidate coordinates, and a per-candidate
//! gcd pins down the singular points above each one. Candidates that cannot
//! be certified rational make the run abort with an explicit error instead
//! of silently dropping points; curves whose singularities live at
//! irrational coordinates are out of scope by design.
//!
//! Blow-ups use the shared engine: the center is a single rational point,
//! and each blow-up produces two charts whose curves are the strict
//! transforms. In embedded mode a chart is only terminal once the curve is
//! also transverse to every tracked exceptional divisor and avoids their
//! pairwise intersections, so the total transform is a normal crossings
//! divisor there.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::Zero;

use crate::blowup::{blow_up, Center, Chart, TransformPolicy};
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::ring::PolyRing;
use crate::tree::ChartTree;
use crate::univar::{interpolate, resultant, UniPoly};

/// A reduced plane curve: two variables, characteristic zero, nonzero
/// defining polynomial with no repeated factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneCurve {
    pub ring: PolyRing,
    pub poly: Polynomial,
}

impl PlaneCurve {
    pub fn new(ring: &PolyRing, poly: Polynomial) -> Result<PlaneCurve> {
        if ring.num_vars() != 2 {
            return Err(Error::NotPlanar);
        }
        if ring.field().characteristic() != 0 {
            return Err(Error::CurveNeedsCharZero);
        }
        if poly.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if poly.ring() != ring {
            return Err(Error::RingMismatch);
        }
        check_reduced(&poly)?;
        Ok(PlaneCurve {
            ring: ring.clone(),
            poly,
        })
    }
}

/// The coefficient of `y^k` in `f`, as a univariate polynomial in `x`.
/// Variable roles are given by index, so this works in either orientation.
fn coeff_poly(f: &Polynomial, x: usize, y: usize, k: u32) -> UniPoly {
    let mut coeffs: Vec<BigRational> = Vec::new();
    for (m, c) in f.terms() {
        if m.exponent(y) != k {
            continue;
        }
        let d = m.exponent(x) as usize;
        if coeffs.len() <= d {
            coeffs.resize(d + 1, BigRational::zero());
        }
        coeffs[d] += c;
    }
    UniPoly::from_coeffs(coeffs)
}

/// Specialize `x := x0`, leaving a univariate polynomial in `y`.
fn specialize(f: &Polynomial, x: usize, y: usize, x0: &BigRational) -> UniPoly {
    let mut coeffs: Vec<BigRational> = Vec::new();
    for (m, c) in f.terms() {
        let d = m.exponent(y) as usize;
        let mut v = c.clone();
        for _ in 0..m.exponent(x) {
            v *= x0;
        }
        if coeffs.len() <= d {
            coeffs.resize(d + 1, BigRational::zero());
        }
        coeffs[d] += v;
    }
    UniPoly::from_coeffs(coeffs)
}

fn degree_in(f: &Polynomial, var: usize) -> u32 {
    f.degree_in(var).unwrap_or(0)
}

/// The resultant of `f` and `g` with respect to `y`, as a polynomial in
/// `x`, computed by specialization and interpolation: sample at integer
/// points where neither leading `y`-coefficient vanishes (so the Sylvester
/// determinant specializes exactly), then interpolate using the degree
/// bound `deg_y f * deg_x g + deg_y g * deg_x f`.
pub fn resultant_y(f: &Polynomial, g: &Polynomial, x: usize, y: usize) -> UniPoly {
    if f.is_zero() || g.is_zero() {
        return UniPoly::zero();
    }
    let m = degree_in(f, y);
    let n = degree_in(g, y);
    if m == 0 && n == 0 {
        return UniPoly::constant(BigRational::from_integer(1.into()));
    }
    if m == 0 {
        // res(a(x), g) = a(x)^(deg_y g)
        let a = coeff_poly(f, x, y, 0);
        let mut acc = UniPoly::constant(BigRational::from_integer(1.into()));
        for _ in 0..n {
            acc = acc.mul(&a);
        }
        return acc;
    }
    if n == 0 {
        let b = coeff_poly(g, x, y, 0);
        let mut acc = UniPoly::constant(BigRational::from_integer(1.into()));
        for _ in 0..m {
            acc = acc.mul(&b);
        }
        return acc;
    }
    let lead_f = coeff_poly(f, x, y, m);
    let lead_g = coeff_poly(g, x, y, n);
    let bound = (m * degree_in(g, x) + n * degree_in(f, x)) as usize;
    let mut samples: Vec<(BigRational, BigRational)> = Vec::with_capacity(bound + 1);
    let mut t: i64 = 0;
    while samples.len() <= bound {
        let x0 = BigRational::from_integer(t.into());
        // Alternate 0, 1, -1, 2, -2, ... to keep sample values small.
        t = if t > 0 { -t } else { -t + 1 };
        if lead_f.eval(&x0).is_zero() || lead_g.eval(&x0).is_zero() {
            continue;
        }
        let value = resultant(&specialize(f, x, y, &x0), &specialize(g, x, y, &x0));
        samples.push((x0, value));
    }
    interpolate(&samples)
}

/// Reject defining polynomials with repeated factors. A repeated factor
/// either involves `y` (then `res_y(f, df/dy)` vanishes identically) or is
/// purely in `x` (then the content with respect to `y` is not squarefree).
fn check_reduced(f: &Polynomial) -> Result<()> {
    let (x, y) = (0, 1);
    let dy = degree_in(f, y);
    if dy == 0 {
        // Univariate in x: a union of vertical lines.
        let c = coeff_poly(f, x, y, 0);
        if !c.is_squarefree() {
            return Err(Error::NonReducedCurve);
        }
        return Ok(());
    }
    let mut content = UniPoly::zero();
    for k in 0..=dy {
        content = UniPoly::gcd(&content, &coeff_poly(f, x, y, k));
        if content.degree() == Some(0) {
            break;
        }
    }
    if !content.is_squarefree() {
        return Err(Error::NonReducedCurve);
    }
    let fy = f.derivative(y)?;
    if resultant_y(f, &fy, x, y).is_zero() {
        return Err(Error::NonReducedCurve);
    }
    Ok(())
}

/// Divide out `(u - r)` for every listed root; returns the deflated
/// polynomial.
fn deflate(mut p: UniPoly, roots: &[BigRational]) -> UniPoly {
    for r in roots {
        let linear = UniPoly::from_coeffs(vec![-r.clone(), BigRational::from_integer(1.into())]);
        let (q, rem) = p.divmod(&linear);
        debug_assert!(rem.is_zero());
        p = q;
    }
    p
}

/// One orientation of the singular-point search; `x` and `y` are the roles
/// (candidate coordinate first). See [`singular_points`].
fn singular_points_oriented(
    f: &Polynomial,
    x: usize,
    y: usize,
) -> Result<Vec<(BigRational, BigRational)>> {
    if degree_in(f, y) == 0 {
        // Squarefree vertical lines: smooth everywhere.
        return Ok(Vec::new());
    }
    let fx = f.derivative(x)?;
    let fy = f.derivative(y)?;
    let e1 = resultant_y(f, &fy, x, y);
    debug_assert!(!e1.is_zero(), "reduced curve has nonzero discriminant");
    let e2 = resultant_y(f, &fx, x, y);
    let d = if e2.is_zero() {
        e1.clone()
    } else {
        UniPoly::gcd(&e1, &e2)
    };
    // Candidate x-coordinates: the gcd roots plus any drop in the leading
    // y-coefficient (where the resultants can under-report).
    let candidates = d.mul(&coeff_poly(f, x, y, degree_in(f, y)));
    let rational_x = candidates.rational_roots()?;

    // Certify that no irrational candidate hides a singular point: every
    // singular x-coordinate is a root of res_y(fx, fy) (the resultant lies
    // in the ideal generated by its arguments), so candidates coprime to it
    // are harmless.
    let leftover = deflate(candidates.squarefree_part(), &rational_x);
    if leftover.degree().is_some_and(|d| d >= 1) {
        let r3 = resultant_y(&fx, &fy, x, y);
        let shared = if r3.is_zero() {
            leftover.clone()
        } else {
            UniPoly::gcd(&leftover, &r3)
        };
        if shared.degree().is_some_and(|d| d >= 1) {
            return Err(Error::SingularLocusUndecided);
        }
    }

    let mut points = Vec::new();
    for x0 in rational_x {
        let g = UniPoly::gcd(
            &UniPoly::gcd(&specialize(f, x, y, &x0), &specialize(&fy, x, y, &x0)),
            &specialize(&fx, x, y, &x0),
        );
        if g.is_zero() {
            return Err(Error::NonReducedCurve);
        }
        if g.degree() == Some(0) {
            continue; // no common zero above this candidate
        }
        // The roots of g are exactly the singular y-coordinates over x0.
        let g = g.squarefree_part();
        let ys = g.rational_roots()?;
        let leftover = deflate(g, &ys);
        if let Some(deg) = leftover.degree() {
            if deg >= 1 {
                return Err(Error::IrrationalSingularLocus { degree: deg });
            }
        }
        for y0 in ys {
            points.push((x0.clone(), y0));
        }
    }
    Ok(points)
}

/// All singular points of the reduced curve, sorted lexicographically.
///
/// Fails with [`Error::IrrationalSingularLocus`] when a singular point
/// provably has an irrational coordinate, and with
/// [`Error::SingularLocusUndecided`] when rationality cannot be certified
/// in either orientation; no point is ever silently dropped.
pub fn singular_points(curve: &PlaneCurve) -> Result<Vec<(BigRational, BigRational)>> {
    let f = &curve.poly;
    if f.is_constant() {
        return Ok(Vec::new());
    }
    match singular_points_oriented(f, 0, 1) {
        Ok(points) => Ok(points),
        Err(Error::SingularLocusUndecided) => {
            // Swap the variable roles and transpose the answer.
            let mut points = singular_points_oriented(f, 1, 0)?
                .into_iter()
                .map(|(a, b)| (b, a))
                .collect::<Vec<_>>();
            points.sort();
            Ok(points)
        }
        Err(e) => Err(e),
    }
}

/// Options for [`resolve_plane_curve`].
#[derive(Debug, Clone, Copy)]
pub struct CurveOptions {
    /// Also make the total transform a normal crossings divisor (blow up
    /// non-transverse divisor contacts and curve points on divisor
    /// crossings), not just desingularize the strict transform.
    pub embedded: bool,
    /// Blow-up budget.
    pub max_steps: u64,
}

impl Default for CurveOptions {
    fn default() -> Self {
        CurveOptions {
            embedded: false,
            max_steps: 10_000,
        }
    }
}

/// The record of a plane-curve resolution run.
#[derive(Debug, Clone)]
pub struct CurveRun {
    pub tree: ChartTree,
    /// Number of point blow-ups performed.
    pub steps: u64,
    /// False when the budget ran out first.
    pub completed: bool,
    pub embedded: bool,
}

impl CurveRun {
    pub fn final_count(&self) -> usize {
        self.tree.final_ids().len()
    }
}

/// The points a chart still has to blow up: singular points of the strict
/// transform, and in embedded mode also non-transverse contacts with each
/// tracked exceptional divisor and curve points sitting on a divisor
/// crossing. Sorted lexicographically.
fn pending_centers(chart: &Chart, embedded: bool) -> Result<Vec<(BigRational, BigRational)>> {
    let f = &chart.ideal[0];
    let curve = PlaneCurve {
        ring: chart.ring.clone(),
        poly: f.clone(),
    };
    check_reduced(f)?;
    let mut bad: BTreeSet<(BigRational, BigRational)> =
        singular_points(&curve)?.into_iter().collect();
    if embedded {
        for d in &chart.exceptional {
            let e = d.var;
            let v = 1 - e;
            // On the divisor x_e = 0 the curve restricts to a univariate
            // polynomial in the other coordinate; a contact is transverse
            // exactly when it is a simple root.
            let zero = BigRational::zero();
            let on_divisor = specialize(f, e, v, &zero);
            if on_divisor.is_zero() {
                return Err(Error::InvariantViolation(
                    "strict transform contains an exceptional divisor".into(),
                ));
            }
            let dv = f.derivative(v)?;
            let contact = UniPoly::gcd(&on_divisor, &specialize(&dv, e, v, &zero));
            if contact.degree() == Some(0) {
                continue;
            }
            let contact = contact.squarefree_part();
            let roots = contact.rational_roots()?;
            let leftover = deflate(contact, &roots);
            if let Some(deg) = leftover.degree() {
                if deg >= 1 {
                    return Err(Error::IrrationalSingularLocus { degree: deg });
                }
            }
            for r in roots {
                let point = if e == 0 {
                    (BigRational::zero(), r)
                } else {
                    (r, BigRational::zero())
                };
                bad.insert(point);
            }
        }
        // Two divisors meet only at the coordinate origin.
        let has = |v: usize| chart.exceptional.iter().any(|d| d.var == v);
        if has(0) && has(1) {
            let origin = [BigRational::zero(), BigRational::zero()];
            if f.eval(&origin)?.is_zero() {
                bad.insert((origin[0].clone(), origin[1].clone()));
            }
        }
    }
    Ok(bad.into_iter().collect())
}

/// Resolve a plane curve by point blow-ups, breadth first, spending at most
/// `max_steps` blow-ups; each round blows up the lexicographically first
/// pending point of the chart. Charts with no pending points are final.
pub fn resolve_plane_curve(
    ring: &PolyRing,
    poly: Polynomial,
    options: CurveOptions,
) -> Result<CurveRun> {
    let curve = PlaneCurve::new(ring, poly)?;
    let root = Chart::root(ring, vec![curve.poly])?;
    let mut tree = ChartTree::new(root);
    let mut steps = 0;
    let mut completed = true;
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(id) = queue.pop_front() {
        let f = tree.node(id).chart.ideal[0].clone();
        if f.is_constant() {
            // The chart's curve is empty (the whole curve was exceptional).
            tree.set_final(id, true);
            tree.set_note(id, "empty variety");
            continue;
        }
        let bad = pending_centers(&tree.node(id).chart, options.embedded)?;
        let Some((x0, y0)) = bad.first().cloned() else {
            tree.set_final(id, true);
            continue;
        };
        if steps >= options.max_steps {
            completed = false;
            tree.set_note(id, "budget exhausted");
            continue;
        }
        steps += 1;
        let chart_ring = tree.node(id).chart.ring.clone();
        let center = Center::at_point(&chart_ring, &[0, 1], vec![x0, y0])?;
        let children = blow_up(&tree.node(id).chart, &center, TransformPolicy::Strict, steps)?;
        for child in children {
            let child_id = tree.insert_child(id, &center, child);
            queue.push_back(child_id);
        }
    }
    Ok(CurveRun {
        tree,
        steps,
        completed,
        embedded: options.embedded,
    })
}
